//! Knotted null electromagnetic fields in closed form.
//!
//! The crate constructs a family of exact null solutions of the free-space
//! Maxwell equations whose electric and magnetic field lines organize into
//! nested knotted tori, together with the machinery needed to interrogate
//! them numerically:
//!
//! * [`algebra`] - complex 3-vector arithmetic and the Riemann-Silberstein
//!   field value F = E + iB.
//! * [`bateman`] - the S^3 scalar pair, its hand-derived derivatives, and the
//!   plane-wave / Hopfion / knotted-family closed forms.
//! * [`spinor`] - the equivalent two-spinor representation, both conversion
//!   branches, and field reconstruction through the Infeld-van der Waerden
//!   symbols.
//! * [`geometry`] - stereographic S^3 coordinates, the surface functions
//!   whose isosurfaces are the invariant tori, and the analytic core curves.
//! * [`tracer`] - adaptive arc-length field-line integration with closure
//!   detection and phase-winding counters.
//! * [`topology`] - Gauss linking numbers and torus-knot classification for
//!   closed polylines.
//! * [`conserved`] - spherical quadrature of energy, momentum, angular
//!   momentum and both helicities.
//! * [`verify`] - a one-call battery of residual checks with negative
//!   controls, producing machine-readable reports.

pub mod algebra;
pub mod bateman;
pub mod conserved;
pub mod geometry;
pub mod spinor;
pub mod topology;
pub mod tracer;
pub mod verify;

pub use algebra::{cross, dot, Complex3, RsValue, SpacetimePoint, Vec3, C64};
pub use bateman::{abd, alpha_beta, BatemanEval, KnotParams};

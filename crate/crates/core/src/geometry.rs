//! S^3 coordinates, the torus surface functions, and the analytic core curves.
//!
//! At t = 0 the Bateman pair (alpha, beta) coincides with the standard
//! stereographic coordinates (u, v) on the unit 3-sphere. The magnetic field
//! lines of the (p, q) family lie on the isosurfaces of
//! Psi_B = Re(alpha^p beta^q); the electric lines on those of
//! Psi_E = Im(alpha^p beta^q). The extremal loci of these functions are the
//! closed core curves around which the nested tori organize.

use crate::algebra::{SpacetimePoint, Vec3, C64};
use crate::bateman::{alpha_beta, KnotParams};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    /// The north pole u = 1 maps to the point at infinity.
    #[error("inverse stereographic projection at the point at infinity (u = 1)")]
    PointAtInfinity,
    /// Core component index must satisfy k < gcd(p, q).
    #[error("core component index {k} out of range for gcd {g}")]
    ComponentOutOfRange { k: u32, g: u32 },
}

/// A point on the unit 3-sphere, |u|^2 + |v|^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S3Point {
    pub u: C64,
    pub v: C64,
}

/// Standard stereographic coordinates on S^3:
/// u = ((r^2 - 1) + 2iz)/(r^2 + 1), v = 2(x - iy)/(r^2 + 1).
pub fn stereographic(pos: Vec3) -> S3Point {
    let r2 = pos.norm_squared();
    let denom = r2 + 1.0;
    S3Point {
        u: C64::new(r2 - 1.0, 2.0 * pos.z) / denom,
        v: C64::new(2.0 * pos.x, -2.0 * pos.y) / denom,
    }
}

/// Inverse of [`stereographic`]; fails on the north pole (u = 1).
pub fn inverse_stereographic(s: S3Point) -> Result<Vec3, GeometryError> {
    let one_minus = 1.0 - s.u.re;
    if one_minus.abs() < 1e-12 {
        return Err(GeometryError::PointAtInfinity);
    }
    let r2 = (1.0 + s.u.re) / one_minus;
    let half = 0.5 * (r2 + 1.0);
    Ok(Vec3::new(s.v.re * half, -s.v.im * half, s.u.im * half))
}

/// Which surface function: the magnetic one (Re) or the electric one (Im).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiKind {
    Magnetic,
    Electric,
}

/// Psi = Re or Im of alpha^p beta^q at an event.
pub fn psi(kp: KnotParams, pt: SpacetimePoint, which: PsiKind) -> f64 {
    let be = alpha_beta(pt);
    let w = be.alpha.powu(kp.p) * be.beta.powu(kp.q);
    match which {
        PsiKind::Magnetic => w.re,
        PsiKind::Electric => w.im,
    }
}

/// Extreme value of Psi over space: sqrt(p^p q^q / (p+q)^(p+q)).
pub fn psi_extremes(kp: KnotParams) -> f64 {
    let p = kp.p as f64;
    let q = kp.q as f64;
    (p.powi(kp.p as i32) * q.powi(kp.q as i32) / (p + q).powi((kp.p + kp.q) as i32)).sqrt()
}

/// Sign selecting the maxima (+) or minima (-) locus of Psi_B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreSign {
    Plus,
    Minus,
}

impl CoreSign {
    pub fn label(self) -> &'static str {
        match self {
            CoreSign::Plus => "plus",
            CoreSign::Minus => "minus",
        }
    }
}

/// One connected component of the magnetic core locus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreCurveSpec {
    pub kp: KnotParams,
    pub sign: CoreSign,
    pub k: u32,
}

impl CoreCurveSpec {
    pub fn new(kp: KnotParams, sign: CoreSign, k: u32) -> Result<Self, GeometryError> {
        let g = kp.gcd();
        if k >= g {
            return Err(GeometryError::ComponentOutOfRange { k, g });
        }
        Ok(Self { kp, sign, k })
    }
}

/// Point of the core curve on S^3 at parameter theta in [0, 2pi).
///
/// The curve lives on the torus |alpha|^2 = p/(p+q), |beta|^2 = q/(p+q) with
/// phases
///
/// ```text
/// arg alpha = q theta + delta_k
/// arg beta  = -p theta - pi/(2q) + delta_k +- pi/(2q)
/// ```
///
/// so that p arg(alpha) + q arg(beta) is 0 on the maxima locus (sign +) and pi
/// on the minima locus (sign -). The component offset delta_k = 2 pi k/(p+q)
/// applied to both phases shifts that sum by a full 2 pi k and steps through
/// the gcd(p, q) connected components of each locus exactly once as k runs
/// over 0..gcd (the shift lands on the component indexed by k modulo gcd).
pub fn core_curve_s3(spec: &CoreCurveSpec, theta: f64) -> S3Point {
    let p = spec.kp.p as f64;
    let q = spec.kp.q as f64;
    let delta_k = 2.0 * std::f64::consts::PI * (spec.k as f64) / (p + q);
    let half_over_q = std::f64::consts::FRAC_PI_2 / q; // pi/(2q)
    let phase_alpha = q * theta + delta_k;
    let phase_beta = match spec.sign {
        CoreSign::Plus => -p * theta - half_over_q + delta_k + half_over_q,
        CoreSign::Minus => -p * theta - half_over_q + delta_k - half_over_q,
    };
    let norm = 1.0 / (p + q).sqrt();
    S3Point {
        u: C64::from_polar(norm * p.sqrt(), phase_alpha),
        v: C64::from_polar(norm * q.sqrt(), phase_beta),
    }
}

/// Core curve point in S^3 and its image in R^3 at t = 0 (where the Bateman
/// pair equals the stereographic coordinates).
pub fn core_curve_point(
    spec: &CoreCurveSpec,
    theta: f64,
) -> Result<(S3Point, Vec3), GeometryError> {
    let s = core_curve_s3(spec, theta);
    let pos = inverse_stereographic(s)?;
    Ok((s, pos))
}

/// Uniformly sampled core polyline in R^3 at t = 0, traversing the component
/// exactly once (endpoint excluded; the polyline closes implicitly).
///
/// The phase pair returns to its start after theta = 2 pi / gcd(p, q), so the
/// sample range is [0, 2 pi / g); sweeping a full 2 pi would cover the same
/// closed curve g times.
pub fn core_polyline(spec: &CoreCurveSpec, n: usize) -> Result<Vec<Vec3>, GeometryError> {
    let period = 2.0 * std::f64::consts::PI / (spec.kp.gcd() as f64);
    (0..n)
        .map(|i| {
            let theta = period * (i as f64) / (n as f64);
            core_curve_point(spec, theta).map(|(_, pos)| pos)
        })
        .collect()
}

/// Knot-taxonomy descriptor; metadata, not a certified invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum KnotKind {
    /// Unknotted circles (reduced p or q equal to 1).
    Rings,
    /// (p, q)-torus knots with coprime p, q >= 2.
    TorusKnot { p: u32, q: u32 },
}

/// Core locus summary: how many closed curves and of which reduced type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoreTopology {
    pub components: u32,
    pub kind: KnotKind,
}

/// Number of core components (2 gcd(p, q)) and their reduced knot type.
pub fn core_component_count(kp: KnotParams) -> CoreTopology {
    let g = kp.gcd();
    let (rp, rq) = (kp.p / g, kp.q / g);
    let kind = if rp == 1 || rq == 1 {
        KnotKind::Rings
    } else {
        KnotKind::TorusKnot { p: rp, q: rq }
    };
    CoreTopology { components: 2 * g, kind }
}

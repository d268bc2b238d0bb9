//! Certified topological diagnostics on closed polylines: Gauss linking
//! numbers by direct double-sum quadrature and torus-knot classification from
//! winding data.

use crate::algebra::Vec3;
use crate::geometry::KnotKind;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TopologyError {
    /// The polyline does not close: the implicit last-to-first segment is far
    /// longer than the others relative to the curve diameter.
    #[error("polyline does not represent a closed curve (gap {gap:.3e}, diameter {diameter:.3e})")]
    NotClosed { gap: f64, diameter: f64 },
    /// Consecutive duplicate points give zero-length segments.
    #[error("polyline contains consecutive duplicate points")]
    DuplicatePoints,
    #[error("need at least 3 points to form a closed curve")]
    TooFewPoints,
    /// Curves closer than 1e-3 of the larger diameter; the Gauss integrand is
    /// nearly singular there.
    #[error("curves too close for a reliable linking number")]
    CurvesTooClose,
    /// Refinement hit the segment budget without settling on an integer.
    #[error("linking-number refinement did not converge")]
    NoConvergence,
    /// Winding counters are not close enough to integers to classify.
    #[error("windings ({0}, {1}) are not within 1e-2 of integers")]
    NonIntegerWinding(f64, f64),
}

/// An ordered polyline implicitly closed from the last point back to the first.
#[derive(Debug, Clone)]
pub struct ClosedCurve {
    points: Vec<Vec3>,
}

impl ClosedCurve {
    /// Validates closure: the implicit closing segment must look like an
    /// ordinary segment (within 3x the 90th-percentile segment length) or be
    /// negligible against the diameter. Uniformly sampled parametric loops and
    /// traced loops both satisfy this; open arcs do not.
    pub fn new(points: Vec<Vec3>) -> Result<Self, TopologyError> {
        if points.len() < 3 {
            return Err(TopologyError::TooFewPoints);
        }
        let n = points.len();
        let mut seg_lengths: Vec<f64> = (0..n - 1)
            .map(|i| (points[i + 1] - points[i]).norm())
            .collect();
        if seg_lengths.iter().any(|&l| l == 0.0) {
            return Err(TopologyError::DuplicatePoints);
        }
        let gap = (points[n - 1] - points[0]).norm();
        let diameter = curve_diameter(&points);
        seg_lengths.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let p90 = seg_lengths[(0.9 * (seg_lengths.len() - 1) as f64) as usize];
        if gap > 3.0 * p90 && gap > 1e-3 * diameter {
            return Err(TopologyError::NotClosed { gap, diameter });
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn diameter(&self) -> f64 {
        curve_diameter(&self.points)
    }

    /// Reverse orientation (the linking number changes sign exactly).
    pub fn reversed(&self) -> ClosedCurve {
        let mut pts = self.points.clone();
        pts.reverse();
        ClosedCurve { points: pts }
    }

    /// Insert segment midpoints, doubling the resolution of the same polygon.
    fn refined(&self) -> ClosedCurve {
        let n = self.points.len();
        let mut pts = Vec::with_capacity(2 * n);
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            pts.push(a);
            pts.push((a + b) * 0.5);
        }
        ClosedCurve { points: pts }
    }
}

fn curve_diameter(points: &[Vec3]) -> f64 {
    // Bounding-box diagonal; cheap and adequate for scale thresholds.
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
        hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
    }
    (hi - lo).norm()
}

fn min_pairwise_distance(c1: &ClosedCurve, c2: &ClosedCurve) -> f64 {
    let mut min_d = f64::INFINITY;
    for a in &c1.points {
        for b in &c2.points {
            min_d = min_d.min((*a - *b).norm());
        }
    }
    min_d
}

/// One midpoint-rule evaluation of the Gauss double sum.
fn gauss_sum(c1: &ClosedCurve, c2: &ClosedCurve) -> f64 {
    let n1 = c1.points.len();
    let n2 = c2.points.len();
    let segs2: Vec<(Vec3, Vec3)> = (0..n2)
        .map(|j| {
            let a = c2.points[j];
            let b = c2.points[(j + 1) % n2];
            ((a + b) * 0.5, b - a)
        })
        .collect();

    // Parallel over the outer curve with an order-preserving collect, then a
    // fixed-order reduction: the result is independent of the thread count.
    let partials: Vec<f64> = (0..n1)
        .into_par_iter()
        .map(|i| {
            let a = c1.points[i];
            let b = c1.points[(i + 1) % n1];
            let m1 = (a + b) * 0.5;
            let d1 = b - a;
            let mut acc = 0.0;
            for (m2, d2) in &segs2 {
                let r = m1 - *m2;
                let dist = r.norm();
                acc += d1.cross(*d2).dot(r) / (dist * dist * dist);
            }
            acc
        })
        .collect();

    let total: f64 = partials.iter().sum();
    total / (4.0 * std::f64::consts::PI)
}

/// Maximum points per curve during refinement; desk-scale curves settle long
/// before this.
const MAX_POINTS: usize = 1 << 14;

/// Gauss linking number of two disjoint closed polylines.
///
/// The double sum is refined (segment counts doubled) until two successive
/// values differ by less than 1e-2 and the result sits within 1e-2 of an
/// integer; otherwise `NoConvergence`.
pub fn gauss_linking(c1: &ClosedCurve, c2: &ClosedCurve) -> Result<f64, TopologyError> {
    gauss_linking_with_budget(c1, c2, MAX_POINTS)
}

fn gauss_linking_with_budget(
    c1: &ClosedCurve,
    c2: &ClosedCurve,
    max_points: usize,
) -> Result<f64, TopologyError> {
    let scale = c1.diameter().max(c2.diameter());
    if min_pairwise_distance(c1, c2) <= 1e-3 * scale {
        return Err(TopologyError::CurvesTooClose);
    }

    let mut a = c1.clone();
    let mut b = c2.clone();
    let mut value = gauss_sum(&a, &b);
    loop {
        if a.len() >= max_points || b.len() >= max_points {
            return Err(TopologyError::NoConvergence);
        }
        a = a.refined();
        b = b.refined();
        let next = gauss_sum(&a, &b);
        let settled = (next - value).abs() < 1e-2;
        value = next;
        if settled && (value - value.round()).abs() < 1e-2 {
            return Ok(value);
        }
        // Not settled (or settled off-integer): keep refining until the
        // budget runs out.
    }
}

/// Certified-as-consistent torus knot descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnotDescriptor {
    pub components: u32,
    pub kind: KnotKind,
    /// Winding pair reduced by its gcd, as (p, q).
    pub reduced: (u32, u32),
}

/// Classify a traced closed line from its winding counters.
///
/// A torus-knot traversal advances the two phases in opposite senses with
/// |w_alpha| = q and |w_beta| = p (the overall sign flips with the traversal
/// direction). Windings must sit within 1e-2 of integers.
pub fn classify_torus_knot(
    windings: (f64, f64),
    components: u32,
) -> Result<KnotDescriptor, TopologyError> {
    let (wa, wb) = windings;
    let ra = wa.round();
    let rb = wb.round();
    if (wa - ra).abs() > 1e-2 || (wb - rb).abs() > 1e-2 {
        return Err(TopologyError::NonIntegerWinding(wa, wb));
    }
    let q = ra.abs() as u32;
    let p = rb.abs() as u32;
    if p == 0 || q == 0 || ra * rb > 0.0 {
        return Err(TopologyError::NonIntegerWinding(wa, wb));
    }
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let g = gcd(p, q);
    let (rp, rq) = (p / g, q / g);
    let kind = if rp == 1 || rq == 1 {
        KnotKind::Rings
    } else {
        KnotKind::TorusKnot { p: rp, q: rq }
    };
    Ok(KnotDescriptor { components, kind, reduced: (rp, rq) })
}

//! Adaptive arc-length integration of E-, B- and Poynting-field lines at a
//! fixed time, plus marker advection along the energy-transport velocity.
//!
//! Lines are integrated in arc length, dx/ds = field/|field|, with an embedded
//! Dormand-Prince 5(4) pair. Closure is declared only when the trace returns
//! to within `closure_eps` of the seed AND the direction of motion is aligned
//! with the seed tangent (cos > 0.99); quasi-periodic lines on tori approach
//! the seed without closing and must not trigger it. Phase windings of the
//! Bateman scalars are accumulated step by step; the step size is capped so no
//! single step can advance either phase by more than about pi/4, which keeps
//! the unwrapping exact.

use crate::algebra::{SpacetimePoint, Vec3};
use crate::bateman::{alpha_beta, knotted_field_from_eval, KnotParams};
use crate::geometry::PsiKind;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TraceError {
    /// |field| below `min_speed` at the seed point.
    #[error("field magnitude below min_speed at the seed")]
    StagnationAtSeed,
    /// Field evaluation produced a non-finite value.
    #[error("field evaluation produced a non-finite value")]
    NonFinite,
    /// Marker advection entered a region of negligible energy density.
    #[error("energy density collapsed during marker advection")]
    AdvectionStagnation,
}

/// Which real vector field of the solution to follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Electric,
    Magnetic,
    Poynting,
}

impl FieldKind {
    /// Surface function transported by this field (B preserves Psi_B, E
    /// preserves Psi_E; for S the magnetic surface is recorded, not asserted).
    pub fn psi_kind(self) -> PsiKind {
        match self {
            FieldKind::Electric => PsiKind::Electric,
            FieldKind::Magnetic | FieldKind::Poynting => PsiKind::Magnetic,
        }
    }
}

/// Integration controls; the defaults satisfy every tolerance used in the
/// test suites.
#[derive(Debug, Clone)]
pub struct TraceConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_arc_length: f64,
    pub closure_eps: f64,
    pub min_speed: f64,
    pub max_steps: usize,
    /// Hard cap on the arc-length step. Keeps chord sagitta small enough that
    /// the segment-based closure test cannot miss a genuine return.
    pub max_step: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_arc_length: 500.0,
            closure_eps: 1e-4,
            min_speed: 1e-9,
            max_steps: 1_000_000,
            max_step: 0.2,
        }
    }
}

/// Why the trace stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Termination {
    Closed,
    MaxLength,
    Stagnation,
    MaxSteps,
}

/// A traced field line.
#[derive(Debug, Clone)]
pub struct TraceResult {
    /// Polyline as (arc length, position) samples.
    pub points: Vec<(f64, Vec3)>,
    pub closed: bool,
    /// Distance from the returning segment to the seed (only meaningful when
    /// closed; +inf otherwise).
    pub closure_gap: f64,
    /// Max |Psi - Psi(seed)| seen along the trace.
    pub psi_drift: f64,
    /// Unwrapped phase advances of (alpha, beta) divided by 2 pi.
    pub windings: (f64, f64),
    /// Set when either scalar came within 1e-8 of zero, where its phase is
    /// undefined and the winding counters cannot be trusted.
    pub windings_indeterminate: bool,
    pub termination: Termination,
}

impl TraceResult {
    pub fn arc_length(&self) -> f64 {
        self.points.last().map(|(s, _)| *s).unwrap_or(0.0)
    }
}

// Dormand-Prince 5(4) tableau.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// b5 - b4: weights of the embedded error estimate.
const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

enum StepOutcome {
    Accept { next: Vec3, err_ratio: f64 },
    Reject { err_ratio: f64 },
    Stagnated,
}

fn dp54_step<F>(rhs: &F, x: Vec3, h: f64, rel_tol: f64, abs_tol: f64) -> Result<StepOutcome, TraceError>
where
    F: Fn(Vec3) -> Result<Option<Vec3>, TraceError>,
{
    let eval = |pos: Vec3| -> Result<Option<Vec3>, TraceError> { rhs(pos) };

    macro_rules! stage {
        ($pos:expr) => {
            match eval($pos)? {
                Some(v) => v,
                None => return Ok(StepOutcome::Stagnated),
            }
        };
    }

    let k1 = stage!(x);
    let k2 = stage!(x + k1 * (A2[0] * h));
    let k3 = stage!(x + k1 * (A3[0] * h) + k2 * (A3[1] * h));
    let k4 = stage!(x + k1 * (A4[0] * h) + k2 * (A4[1] * h) + k3 * (A4[2] * h));
    let k5 = stage!(x + k1 * (A5[0] * h) + k2 * (A5[1] * h) + k3 * (A5[2] * h) + k4 * (A5[3] * h));
    let k6 = stage!(
        x + k1 * (A6[0] * h) + k2 * (A6[1] * h) + k3 * (A6[2] * h) + k4 * (A6[3] * h)
            + k5 * (A6[4] * h)
    );
    let next = x
        + k1 * (B5[0] * h)
        + k3 * (B5[2] * h)
        + k4 * (B5[3] * h)
        + k5 * (B5[4] * h)
        + k6 * (B5[5] * h);
    let k7 = stage!(next);

    let err = k1 * (ERR[0] * h)
        + k3 * (ERR[2] * h)
        + k4 * (ERR[3] * h)
        + k5 * (ERR[4] * h)
        + k6 * (ERR[5] * h)
        + k7 * (ERR[6] * h);

    let mut ratio_sq = 0.0;
    for (e, (a, b)) in [
        (err.x, (x.x, next.x)),
        (err.y, (x.y, next.y)),
        (err.z, (x.z, next.z)),
    ] {
        let scale = abs_tol + rel_tol * a.abs().max(b.abs());
        let r = e / scale;
        ratio_sq += r * r;
    }
    let err_ratio = (ratio_sq / 3.0).sqrt();
    if err_ratio <= 1.0 {
        Ok(StepOutcome::Accept { next, err_ratio })
    } else {
        Ok(StepOutcome::Reject { err_ratio })
    }
}

fn step_scale(err_ratio: f64) -> f64 {
    let factor = if err_ratio > 0.0 { 0.9 * err_ratio.powf(-0.2) } else { 5.0 };
    factor.clamp(0.2, 5.0)
}

/// Trace one field line of the (p, q) solution at fixed time `t`.
pub fn trace(
    kind: FieldKind,
    kp: KnotParams,
    seed: Vec3,
    t: f64,
    cfg: &TraceConfig,
) -> Result<TraceResult, TraceError> {
    let field_at = |pos: Vec3| -> Result<Vec3, TraceError> {
        let rs = knotted_field_from_eval(kp, &alpha_beta(SpacetimePoint::at_time(pos, t)));
        let v = match kind {
            FieldKind::Electric => rs.e(),
            FieldKind::Magnetic => rs.b(),
            FieldKind::Poynting => rs.s(),
        };
        if !v.is_finite() {
            return Err(TraceError::NonFinite);
        }
        Ok(v)
    };

    let rhs = |pos: Vec3| -> Result<Option<Vec3>, TraceError> {
        let v = field_at(pos)?;
        let speed = v.norm();
        if speed < cfg.min_speed {
            return Ok(None);
        }
        Ok(Some(v / speed))
    };

    let seed_field = field_at(seed)?;
    if seed_field.norm() < cfg.min_speed {
        return Err(TraceError::StagnationAtSeed);
    }
    let seed_tangent = seed_field / seed_field.norm();

    let psi_kind = kind.psi_kind();
    let pair_at = |pos: Vec3| alpha_beta(SpacetimePoint::at_time(pos, t));
    let psi_of = |be: &crate::bateman::BatemanEval| {
        let w = be.alpha.powu(kp.p) * be.beta.powu(kp.q);
        match psi_kind {
            PsiKind::Magnetic => w.re,
            PsiKind::Electric => w.im,
        }
    };

    let mut be = pair_at(seed);
    let psi0 = psi_of(&be);

    let mut points = vec![(0.0, seed)];
    let mut x = seed;
    let mut s = 0.0;
    let mut h = 1e-3_f64;
    let mut windings = (0.0, 0.0);
    let mut indeterminate = false;
    let mut psi_drift = 0.0_f64;
    let mut termination = Termination::MaxLength;
    let mut closed = false;
    let mut closure_gap = f64::INFINITY;
    let mut steps = 0;
    // Best aligned pass through the closure ball: (gap, arc length, point).
    let mut best_return: Option<(f64, f64, Vec3)> = None;

    // No single step may advance arg(alpha) or arg(beta) by more than ~pi/4.
    let phase_cap = |be: &crate::bateman::BatemanEval| -> f64 {
        let cap_a = be.alpha.norm() / be.grad_alpha.norm().max(1e-300);
        let cap_b = be.beta.norm() / be.grad_beta.norm().max(1e-300);
        (std::f64::consts::FRAC_PI_4 * cap_a.min(cap_b)).max(1e-6)
    };

    // Inside this radius of the seed the step shrinks with the distance, so
    // the chord-based closest-approach test resolves returns to closure_eps.
    let capture_radius = 2.0 * cfg.max_step + 4.0 * cfg.closure_eps;

    while steps < cfg.max_steps {
        steps += 1;
        let mut h_cap = phase_cap(&be)
            .min(cfg.max_arc_length - s)
            .min(cfg.max_step);
        if s > 10.0 * cfg.closure_eps {
            let dist = (x - seed).norm();
            if dist < capture_radius {
                h_cap = h_cap.min((0.25 * dist).max(0.5 * cfg.closure_eps));
            }
        }
        h = h.min(h_cap).max(1e-12);

        match dp54_step(&rhs, x, h, cfg.rel_tol, cfg.abs_tol)? {
            StepOutcome::Reject { err_ratio } => {
                h *= step_scale(err_ratio);
                continue;
            }
            StepOutcome::Stagnated => {
                termination = Termination::Stagnation;
                break;
            }
            StepOutcome::Accept { next, err_ratio } => {
                let seg = next - x;
                let seg_len = seg.norm();

                // Closest approach of the new segment to the seed; record the
                // best aligned pass and declare closure once the trace leaves
                // the closure ball again.
                if s > 10.0 * cfg.closure_eps && seg_len > 0.0 {
                    let proj = ((seed - x).dot(seg) / (seg_len * seg_len)).clamp(0.0, 1.0);
                    let cp = x + seg * proj;
                    let gap = (seed - cp).norm();
                    if gap < cfg.closure_eps && seg.dot(seed_tangent) / seg_len > 0.99 {
                        let s_cp = s + seg_len * proj;
                        if best_return.map(|(g, _, _)| gap < g).unwrap_or(true) {
                            best_return = Some((gap, s_cp, cp));
                        }
                    }
                }

                let be_next = pair_at(next);
                if be_next.alpha.norm() < 1e-8 || be_next.beta.norm() < 1e-8 {
                    indeterminate = true;
                }
                windings.0 += (be_next.alpha / be.alpha).arg() / (2.0 * std::f64::consts::PI);
                windings.1 += (be_next.beta / be.beta).arg() / (2.0 * std::f64::consts::PI);
                psi_drift = psi_drift.max((psi_of(&be_next) - psi0).abs());

                x = next;
                be = be_next;
                s += seg_len;
                points.push((s, x));

                if best_return.is_some() && (x - seed).norm() > 2.0 * cfg.closure_eps {
                    closed = true;
                    break;
                }
                if s >= cfg.max_arc_length {
                    termination = Termination::MaxLength;
                    break;
                }
                h *= step_scale(err_ratio);
            }
        }
    }
    if steps >= cfg.max_steps && termination == Termination::MaxLength && s < cfg.max_arc_length {
        termination = Termination::MaxSteps;
    }

    // Finalize a recorded return: truncate the polyline at the best pass and
    // roll the winding counters back to that point (a sub-step correction).
    if let Some((gap, s_cp, cp)) = best_return {
        if closed || termination == Termination::MaxLength {
            while points.last().map(|(ps, _)| *ps > s_cp).unwrap_or(false) {
                points.pop();
            }
            let be_cp = pair_at(cp);
            if be_cp.alpha.norm() < 1e-8 || be_cp.beta.norm() < 1e-8 {
                indeterminate = true;
            }
            windings.0 += (be_cp.alpha / be.alpha).arg() / (2.0 * std::f64::consts::PI);
            windings.1 += (be_cp.beta / be.beta).arg() / (2.0 * std::f64::consts::PI);
            psi_drift = psi_drift.max((psi_of(&be_cp) - psi0).abs());
            points.push((s_cp, cp));
            closed = true;
            closure_gap = gap;
            termination = Termination::Closed;
        }
    }

    Ok(TraceResult {
        points,
        closed,
        closure_gap,
        psi_drift,
        windings,
        windings_indeterminate: indeterminate,
        termination,
    })
}

/// Advect a marker along the energy-transport velocity S/u from t0 to t1.
///
/// For a null field this velocity has unit magnitude, so markers ride light
/// rays of the underlying congruence.
pub fn advect_marker(
    kp: KnotParams,
    seed: Vec3,
    t0: f64,
    t1: f64,
    cfg: &TraceConfig,
) -> Result<Vec3, TraceError> {
    let u_ref = knotted_field_from_eval(kp, &alpha_beta(SpacetimePoint::at_time(seed, t0))).u();
    if u_ref <= 0.0 {
        return Err(TraceError::AdvectionStagnation);
    }

    let direction = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut x = seed;
    let mut h = direction * 1e-3;
    let mut steps = 0usize;

    // RHS in time; time enters through the closure via a cell updated per step.
    let velocity = |pos: Vec3, time: f64| -> Result<Option<Vec3>, TraceError> {
        let rs = knotted_field_from_eval(kp, &alpha_beta(SpacetimePoint::at_time(pos, time)));
        let u = rs.u();
        if !rs.s().is_finite() {
            return Err(TraceError::NonFinite);
        }
        if u < 1e-12 * u_ref {
            return Ok(None);
        }
        Ok(Some(rs.s() / u))
    };

    while (t1 - t) * direction > 1e-14 && steps < cfg.max_steps {
        steps += 1;
        if (h.abs()) > (t1 - t).abs() {
            h = t1 - t;
        }
        // Stage times follow the DP c-coefficients.
        let c = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
        let rhs_at = |pos: Vec3, stage: usize| velocity(pos, t + c[stage] * h);

        let k1 = match rhs_at(x, 0)? {
            Some(v) => v,
            None => return Err(TraceError::AdvectionStagnation),
        };
        macro_rules! st {
            ($pos:expr, $i:expr) => {
                match rhs_at($pos, $i)? {
                    Some(v) => v,
                    None => return Err(TraceError::AdvectionStagnation),
                }
            };
        }
        let k2 = st!(x + k1 * (A2[0] * h), 1);
        let k3 = st!(x + k1 * (A3[0] * h) + k2 * (A3[1] * h), 2);
        let k4 = st!(x + k1 * (A4[0] * h) + k2 * (A4[1] * h) + k3 * (A4[2] * h), 3);
        let k5 = st!(
            x + k1 * (A5[0] * h) + k2 * (A5[1] * h) + k3 * (A5[2] * h) + k4 * (A5[3] * h),
            4
        );
        let k6 = st!(
            x + k1 * (A6[0] * h) + k2 * (A6[1] * h) + k3 * (A6[2] * h) + k4 * (A6[3] * h)
                + k5 * (A6[4] * h),
            5
        );
        let next = x
            + k1 * (B5[0] * h)
            + k3 * (B5[2] * h)
            + k4 * (B5[3] * h)
            + k5 * (B5[4] * h)
            + k6 * (B5[5] * h);
        let k7 = st!(next, 6);

        let err = k1 * (ERR[0] * h)
            + k3 * (ERR[2] * h)
            + k4 * (ERR[3] * h)
            + k5 * (ERR[4] * h)
            + k6 * (ERR[5] * h)
            + k7 * (ERR[6] * h);
        let mut ratio_sq = 0.0;
        for (e, (a, b)) in [
            (err.x, (x.x, next.x)),
            (err.y, (x.y, next.y)),
            (err.z, (x.z, next.z)),
        ] {
            let scale = cfg.abs_tol + cfg.rel_tol * a.abs().max(b.abs());
            let r = e / scale;
            ratio_sq += r * r;
        }
        let err_ratio = (ratio_sq / 3.0).sqrt();
        if err_ratio <= 1.0 {
            t += h;
            x = next;
        }
        h *= step_scale(err_ratio);
        if h.abs() < 1e-14 {
            h = direction * 1e-14;
        }
    }
    Ok(x)
}

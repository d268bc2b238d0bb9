//! Closed-form Bateman scalar pairs and the null fields they generate.
//!
//! The scalar pair
//!
//! ```text
//! alpha = (r^2 - t^2 - 1 + 2iz) / d,   beta = 2(x - iy) / d,
//! d = r^2 - (t - i)^2
//! ```
//!
//! lives on the unit 3-sphere (|alpha|^2 + |beta|^2 = 1 at every real event)
//! and satisfies the Bateman constraint
//! grad(alpha) x grad(beta) = i (dt(alpha) grad(beta) - dt(beta) grad(alpha)).
//! The knotted family is F = grad(alpha^p) x grad(beta^q); the circularly
//! polarized plane wave and the Hopfion are provided as independent closed
//! forms. All derivatives here are hand-derived quotient-rule expressions so
//! that field evaluation is allocation-free; a finite-difference sweep in the
//! tests is the correctness oracle for them.

use crate::algebra::{cross, Complex3, RsValue, SpacetimePoint, C64};

/// Torus-knot exponents (p, q), both >= 1.
///
/// Only integer exponents are representable, so no branch cuts ever arise
/// when forming alpha^p or beta^q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct KnotParams {
    pub p: u32,
    pub q: u32,
}

impl KnotParams {
    /// Panics if either exponent is zero.
    pub fn new(p: u32, q: u32) -> Self {
        assert!(p >= 1 && q >= 1, "knot exponents must be positive integers");
        Self { p, q }
    }

    pub fn gcd(&self) -> u32 {
        fn gcd(a: u32, b: u32) -> u32 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        gcd(self.p, self.q)
    }
}

/// The auxiliary complex scalars a = x - iy, b = t - i - z, d = r^2 - (t-i)^2.
///
/// |d| >= 1 at every real event: |d|^2 = (r^2 - t^2 + 1)^2 + 4t^2, so none of
/// the closed forms below ever hit a singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abd {
    pub a: C64,
    pub b: C64,
    pub d: C64,
}

/// Evaluate (a, b, d) at an event.
pub fn abd(pt: SpacetimePoint) -> Abd {
    let r2 = pt.r_squared();
    let a = C64::new(pt.x, -pt.y);
    let b = C64::new(pt.t - pt.z, -1.0);
    let t_minus_i = C64::new(pt.t, -1.0);
    let d = C64::new(r2, 0.0) - t_minus_i * t_minus_i;
    Abd { a, b, d }
}

/// Values and first derivatives of the S^3 scalar pair at an event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatemanEval {
    pub alpha: C64,
    pub beta: C64,
    pub dt_alpha: C64,
    pub dt_beta: C64,
    pub grad_alpha: Complex3,
    pub grad_beta: Complex3,
}

impl BatemanEval {
    /// grad(alpha) x grad(beta), shared by every member of the field family.
    pub fn grad_cross(&self) -> Complex3 {
        cross(self.grad_alpha, self.grad_beta)
    }
}

/// Evaluate the S^3 pair (alpha, beta) with all first derivatives.
pub fn alpha_beta(pt: SpacetimePoint) -> BatemanEval {
    let r2 = pt.r_squared();
    // d = (r^2 - t^2 + 1) + 2it
    let d = C64::new(r2 - pt.t * pt.t + 1.0, 2.0 * pt.t);
    let n_alpha = C64::new(r2 - pt.t * pt.t - 1.0, 2.0 * pt.z);
    let n_beta = C64::new(2.0 * pt.x, -2.0 * pt.y);

    let inv_d = 1.0 / d;
    let alpha = n_alpha * inv_d;
    let beta = n_beta * inv_d;

    // Partials of numerators and denominator; quotient rule for the rest.
    let dn_alpha = [
        C64::new(-2.0 * pt.t, 0.0),
        C64::new(2.0 * pt.x, 0.0),
        C64::new(2.0 * pt.y, 0.0),
        C64::new(2.0 * pt.z, 2.0),
    ];
    let dn_beta = [
        C64::new(0.0, 0.0),
        C64::new(2.0, 0.0),
        C64::new(0.0, -2.0),
        C64::new(0.0, 0.0),
    ];
    let dd = [
        C64::new(-2.0 * pt.t, 2.0),
        C64::new(2.0 * pt.x, 0.0),
        C64::new(2.0 * pt.y, 0.0),
        C64::new(2.0 * pt.z, 0.0),
    ];

    let inv_d2 = inv_d * inv_d;
    let mut da = [C64::new(0.0, 0.0); 4];
    let mut db = [C64::new(0.0, 0.0); 4];
    for mu in 0..4 {
        da[mu] = (dn_alpha[mu] * d - n_alpha * dd[mu]) * inv_d2;
        db[mu] = (dn_beta[mu] * d - n_beta * dd[mu]) * inv_d2;
    }

    BatemanEval {
        alpha,
        beta,
        dt_alpha: da[0],
        dt_beta: db[0],
        grad_alpha: Complex3::new(da[1], da[2], da[3]),
        grad_beta: Complex3::new(db[1], db[2], db[3]),
    }
}

/// F = grad(alpha^p) x grad(beta^q) = p q alpha^(p-1) beta^(q-1) grad(alpha) x grad(beta).
///
/// The factored form shares one cross product across the family and is
/// exactly zero on the loci where alpha or beta vanish with exponent > 1.
pub fn knotted_field(kp: KnotParams, pt: SpacetimePoint) -> RsValue {
    let be = alpha_beta(pt);
    knotted_field_from_eval(kp, &be)
}

/// Same as [`knotted_field`] but reusing an existing pair evaluation.
pub fn knotted_field_from_eval(kp: KnotParams, be: &BatemanEval) -> RsValue {
    let pq = C64::new((kp.p as f64) * (kp.q as f64), 0.0);
    let factor = pq * be.alpha.powu(kp.p - 1) * be.beta.powu(kp.q - 1);
    RsValue::new(be.grad_cross().scale(factor))
}

/// Hopfion closed form F = d^-3 (b^2 - a^2, -i(a^2 + b^2), 2ab).
///
/// Equal to the (p,q) = (1,1) member of the knotted family up to a global
/// constant factor (pinned to 4 by the tests).
pub fn hopfion_field(pt: SpacetimePoint) -> RsValue {
    let Abd { a, b, d } = abd(pt);
    let inv_d3 = 1.0 / (d * d * d);
    let a2 = a * a;
    let b2 = b * b;
    let i = C64::i();
    RsValue::new(Complex3::new(
        (b2 - a2) * inv_d3,
        -i * (a2 + b2) * inv_d3,
        2.0 * a * b * inv_d3,
    ))
}

/// Circularly polarized plane wave F = (x^ + i y^) e^{i(z-t)}.
pub fn plane_wave_field(pt: SpacetimePoint) -> RsValue {
    let phase = (C64::i() * (pt.z - pt.t)).exp();
    RsValue::new(Complex3::new(phase, C64::i() * phase, C64::new(0.0, 0.0)))
}

/// Complex potential C = alpha^p grad(beta^q), satisfying curl C = F.
///
/// Im C is a vector potential for B and Re C one for E, which is what the
/// helicity quadrature integrates.
pub fn potential(kp: KnotParams, pt: SpacetimePoint) -> Complex3 {
    let be = alpha_beta(pt);
    potential_from_eval(kp, &be)
}

/// Same as [`potential`] but reusing an existing pair evaluation.
pub fn potential_from_eval(kp: KnotParams, be: &BatemanEval) -> Complex3 {
    let q = C64::new(kp.q as f64, 0.0);
    let factor = be.alpha.powu(kp.p) * q * be.beta.powu(kp.q - 1);
    be.grad_beta.scale(factor)
}

/// Residual of the Bateman constraint for an arbitrary pair evaluation.
///
/// Returns ||grad(a) x grad(b) - i (dt(a) grad(b) - dt(b) grad(a))||.
pub fn pair_constraint_residual(be: &BatemanEval) -> f64 {
    let lhs = be.grad_cross();
    let i = C64::i();
    let rhs = (be.grad_beta.scale(be.dt_alpha) - be.grad_alpha.scale(be.dt_beta)).scale(i);
    (lhs - rhs).norm()
}

/// Bateman constraint residual of the S^3 pair at an event; an exact identity,
/// so the value is rounding noise.
pub fn constraint_residual(pt: SpacetimePoint) -> f64 {
    pair_constraint_residual(&alpha_beta(pt))
}

/// Non-triviality residuals |dt(a) ((dt a)^2 - (grad a)^2)| for each scalar,
/// with (grad a)^2 the unconjugated dot. Both vanish for the S^3 pair.
pub fn pair_nontriviality_residual(be: &BatemanEval) -> (f64, f64) {
    let ga2 = crate::algebra::dot(be.grad_alpha, be.grad_alpha);
    let gb2 = crate::algebra::dot(be.grad_beta, be.grad_beta);
    let ra = be.dt_alpha * (be.dt_alpha * be.dt_alpha - ga2);
    let rb = be.dt_beta * (be.dt_beta * be.dt_beta - gb2);
    (ra.norm(), rb.norm())
}

/// Non-triviality residuals of the S^3 pair at an event.
pub fn nontriviality_residual(pt: SpacetimePoint) -> (f64, f64) {
    pair_nontriviality_residual(&alpha_beta(pt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dot, Vec3};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_point(rng: &mut impl Rng, t_max: f64, r_max: f64) -> SpacetimePoint {
        SpacetimePoint::new(
            rng.gen_range(-t_max..t_max),
            rng.gen_range(-r_max..r_max),
            rng.gen_range(-r_max..r_max),
            rng.gen_range(-r_max..r_max),
        )
    }

    #[test]
    fn abd_fixed_values() {
        let o = abd(SpacetimePoint::new(0.0, 0.0, 0.0, 0.0));
        assert_eq!(o.a, c(0.0, 0.0));
        assert_eq!(o.b, c(0.0, -1.0));
        assert_eq!(o.d, c(1.0, 0.0));

        // t = 1: d = -(1-i)^2 = 2i, b = 1 - i
        let p = abd(SpacetimePoint::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(p.a, c(0.0, 0.0));
        assert_eq!(p.b, c(1.0, -1.0));
        assert_abs_diff_eq!(p.d.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.d.im, 2.0, epsilon = 1e-15);

        // x = 1: d = 1 - (-i)^2 = 2
        let q = abd(SpacetimePoint::new(0.0, 1.0, 0.0, 0.0));
        assert_eq!(q.a, c(1.0, 0.0));
        assert_eq!(q.b, c(0.0, -1.0));
        assert_abs_diff_eq!(q.d.re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.d.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn abd_magnitude_identity_and_lower_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let pt = random_point(&mut rng, 10.0, 10.0);
            let v = abd(pt);
            let r2 = pt.r_squared();
            let expected = (r2 - pt.t * pt.t + 1.0).powi(2) + 4.0 * pt.t * pt.t;
            assert_abs_diff_eq!(v.d.norm_sqr(), expected, epsilon = 1e-9 * expected.max(1.0));
            assert!(v.d.norm() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn alpha_beta_fixed_values() {
        let o = alpha_beta(SpacetimePoint::new(0.0, 0.0, 0.0, 0.0));
        assert_eq!(o.alpha, c(-1.0, 0.0));
        assert_eq!(o.beta, c(0.0, 0.0));

        // t = 1: alpha = (-2)/(2i) = i
        let p = alpha_beta(SpacetimePoint::new(1.0, 0.0, 0.0, 0.0));
        assert_abs_diff_eq!(p.alpha.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.alpha.im, 1.0, epsilon = 1e-15);
        assert_eq!(p.beta, c(0.0, 0.0));

        // x = 1: alpha = 0, beta = 1
        let q = alpha_beta(SpacetimePoint::new(0.0, 1.0, 0.0, 0.0));
        assert_abs_diff_eq!(q.alpha.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.beta.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.beta.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn s3_normalization_holds_for_any_t() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10_000 {
            let pt = random_point(&mut rng, 10.0, 10.0);
            let be = alpha_beta(pt);
            let n = be.alpha.norm_sqr() + be.beta.norm_sqr();
            assert_abs_diff_eq!(n, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let h = 1e-4;
        for _ in 0..1000 {
            let pt = random_point(&mut rng, 3.0, 4.0);
            let be = alpha_beta(pt);
            let shift = |mu: usize, delta: f64| {
                let mut q = pt;
                match mu {
                    0 => q.t += delta,
                    1 => q.x += delta,
                    2 => q.y += delta,
                    _ => q.z += delta,
                }
                q
            };
            let analytic = [
                (be.dt_alpha, be.dt_beta),
                (be.grad_alpha.x, be.grad_beta.x),
                (be.grad_alpha.y, be.grad_beta.y),
                (be.grad_alpha.z, be.grad_beta.z),
            ];
            for mu in 0..4 {
                let plus = alpha_beta(shift(mu, h));
                let minus = alpha_beta(shift(mu, -h));
                let fd_a = (plus.alpha - minus.alpha) / (2.0 * h);
                let fd_b = (plus.beta - minus.beta) / (2.0 * h);
                let (aa, ab) = analytic[mu];
                let scale_a = aa.norm().max(1e-6);
                let scale_b = ab.norm().max(1e-6);
                assert!(
                    (fd_a - aa).norm() <= 1e-6 * scale_a.max(1.0),
                    "alpha derivative mu={mu} at {pt:?}: fd {fd_a} vs {aa}"
                );
                assert!(
                    (fd_b - ab).norm() <= 1e-6 * scale_b.max(1.0),
                    "beta derivative mu={mu} at {pt:?}: fd {fd_b} vs {ab}"
                );
            }
        }
    }

    #[test]
    fn knotted_field_11_is_four_times_hopfion() {
        // The ratio is measured at 10 random points and must be one global
        // complex constant; it comes out exactly 4.
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let kp = KnotParams::new(1, 1);
        for _ in 0..10 {
            let pt = random_point(&mut rng, 2.0, 3.0);
            let knotted = knotted_field(kp, pt).f;
            let hopf = hopfion_field(pt).f;
            for (num, den) in [
                (knotted.x, hopf.x),
                (knotted.y, hopf.y),
                (knotted.z, hopf.z),
            ] {
                if den.norm() > 1e-12 {
                    let ratio = num / den;
                    assert_abs_diff_eq!(ratio.re, 4.0, epsilon = 1e-8);
                    assert_abs_diff_eq!(ratio.im, 0.0, epsilon = 1e-8);
                }
            }
        }
    }

    #[test]
    fn knotted_field_vanishes_where_zero_factors_demand() {
        // (2,3) at the origin: beta = 0 and q - 1 > 0.
        let f = knotted_field(KnotParams::new(2, 3), SpacetimePoint::new(0.0, 0.0, 0.0, 0.0));
        assert_eq!(f.f, Complex3::ZERO);

        // (2,3) at (0,1,0,0): alpha = 0 and p - 1 > 0, so F = 0 there too.
        let g = knotted_field(KnotParams::new(2, 3), SpacetimePoint::new(0.0, 1.0, 0.0, 0.0));
        assert_eq!(g.f, Complex3::ZERO);
    }

    #[test]
    fn knotted_field_generic_point_is_null_and_nonzero() {
        let pt = SpacetimePoint::new(0.3, 0.7, 0.2, -0.4);
        let f = knotted_field(KnotParams::new(2, 3), pt);
        assert!(f.f.norm() > 1e-6);
        let fp = f.self_product();
        assert!(fp.norm() <= 1e-12 * f.f.norm_squared());
    }

    #[test]
    fn nullity_across_family_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for p in 1..=4u32 {
            for q in 1..=4u32 {
                let kp = KnotParams::new(p, q);
                let mut worst: f64 = 0.0;
                for _ in 0..1000 {
                    let pt = random_point(&mut rng, 2.0, 4.0);
                    let f = knotted_field(kp, pt);
                    let n2 = f.f.norm_squared();
                    if n2 > 1e-30 {
                        worst = worst.max(f.self_product().norm() / n2);
                    }
                }
                assert!(worst < 1e-10, "(p,q)=({p},{q}) worst scaled F.F = {worst}");
            }
        }
    }

    #[test]
    fn hopfion_fixed_values_and_nullity() {
        let f0 = hopfion_field(SpacetimePoint::new(0.0, 0.0, 0.0, 0.0));
        assert_abs_diff_eq!(f0.f.x.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f0.f.x.im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f0.f.y.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f0.f.y.im, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f0.f.z.norm(), 0.0, epsilon = 1e-15);

        // (t,x,y,z) = (0,0,0,1): a = 0, b = -1-i, d = 2, so
        // F = (b^2, -i b^2, 0)/8 = (2i, 2, 0)/8 = (i/4, 1/4, 0).
        let f1 = hopfion_field(SpacetimePoint::new(0.0, 0.0, 0.0, 1.0));
        assert_abs_diff_eq!(f1.f.x.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f1.f.x.im, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(f1.f.y.re, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(f1.f.y.im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f1.f.z.norm(), 0.0, epsilon = 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..1000 {
            let pt = random_point(&mut rng, 3.0, 5.0);
            let f = hopfion_field(pt);
            assert!(f.self_product().norm() <= 1e-12 * f.f.norm_squared().max(1e-30));
        }
    }

    #[test]
    fn plane_wave_fixed_values() {
        let f0 = plane_wave_field(SpacetimePoint::new(0.0, 0.0, 0.0, 0.0));
        assert_eq!(f0.f.x, c(1.0, 0.0));
        assert_eq!(f0.f.y, c(0.0, 1.0));

        // z - t invariance
        let f1 = plane_wave_field(SpacetimePoint::new(2.7, 0.4, -1.1, 2.7));
        assert_abs_diff_eq!(f1.f.x.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f1.f.x.im, 0.0, epsilon = 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let pt = random_point(&mut rng, 5.0, 5.0);
            let f = plane_wave_field(pt);
            assert_abs_diff_eq!(f.e().norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(f.b().norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn potential_fixed_values() {
        // (1,1) at origin: C = alpha * grad(beta) = -grad(beta) = (-2, 2i, 0).
        let c11 = potential(KnotParams::new(1, 1), SpacetimePoint::new(0.0, 0.0, 0.0, 0.0));
        assert_abs_diff_eq!(c11.x.re, -2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c11.x.im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c11.y.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c11.y.im, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c11.z.norm(), 0.0, epsilon = 1e-15);

        // (2,3) at origin: beta = 0 kills it.
        let c23 = potential(KnotParams::new(2, 3), SpacetimePoint::new(0.0, 0.0, 0.0, 0.0));
        assert_eq!(c23, Complex3::ZERO);
    }

    #[test]
    fn potential_curl_reproduces_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let h = 1e-4;
        let kp = KnotParams::new(2, 3);
        for _ in 0..20 {
            let pt = random_point(&mut rng, 1.5, 2.5);
            let f = knotted_field(kp, pt).f;
            if f.norm() < 1e-6 {
                continue;
            }
            let ev = |x: f64, y: f64, z: f64| potential(kp, SpacetimePoint::new(pt.t, x, y, z));
            let dxp = ev(pt.x + h, pt.y, pt.z);
            let dxm = ev(pt.x - h, pt.y, pt.z);
            let dyp = ev(pt.x, pt.y + h, pt.z);
            let dym = ev(pt.x, pt.y - h, pt.z);
            let dzp = ev(pt.x, pt.y, pt.z + h);
            let dzm = ev(pt.x, pt.y, pt.z - h);
            let two_h = 2.0 * h;
            let curl = Complex3::new(
                (dyp.z - dym.z) / two_h - (dzp.y - dzm.y) / two_h,
                (dzp.x - dzm.x) / two_h - (dxp.z - dxm.z) / two_h,
                (dxp.y - dxm.y) / two_h - (dyp.x - dym.x) / two_h,
            );
            assert!(
                (curl - f).norm() < 1e-6 * f.norm(),
                "curl mismatch at {pt:?}: |curl C - F| = {}",
                (curl - f).norm()
            );
        }
    }

    #[test]
    fn constraint_residual_small_on_pair_large_on_perturbation() {
        assert!(constraint_residual(SpacetimePoint::new(0.0, 0.0, 0.0, 0.0)) < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..100 {
            let pt = random_point(&mut rng, 5.0, 5.0);
            let be = alpha_beta(pt);
            let scale = be.grad_cross().norm().max(1e-30);
            assert!(constraint_residual(pt) / scale < 1e-10);

            // Negative control: beta -> beta + 0.1 x breaks the constraint.
            let mut bad = be;
            bad.beta += c(0.1 * pt.x, 0.0);
            bad.grad_beta.x += c(0.1, 0.0);
            assert!(pair_constraint_residual(&bad) / scale > 1e-3);
        }
    }

    #[test]
    fn nontriviality_residual_cases() {
        // Plane-wave pair alpha = z - t: dt = -1, grad = (0,0,1); residual 0.
        let pw = BatemanEval {
            alpha: c(0.0, 0.0),
            beta: c(0.0, 0.0),
            dt_alpha: c(-1.0, 0.0),
            dt_beta: c(0.0, 0.0),
            grad_alpha: Complex3::new(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)),
            grad_beta: Complex3::new(c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)),
        };
        let (ra, rb) = pair_nontriviality_residual(&pw);
        assert_eq!(ra, 0.0);
        assert_eq!(rb, 0.0);

        // S^3 pair: both residuals vanish at random events.
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..100 {
            let pt = random_point(&mut rng, 5.0, 5.0);
            let be = alpha_beta(pt);
            let (ra, rb) = nontriviality_residual(pt);
            let sa = be.dt_alpha.norm().powi(3)
                + be.dt_alpha.norm() * dot(be.grad_alpha, be.grad_alpha).norm();
            let sb = be.dt_beta.norm().powi(3)
                + be.dt_beta.norm() * dot(be.grad_beta, be.grad_beta).norm();
            assert!(ra <= 1e-10 * sa.max(1e-12));
            assert!(rb <= 1e-10 * sb.max(1e-12));
        }

        // Static pair (x, y): residuals vanish trivially (dt = 0) even though
        // the Bateman constraint fails, so the two checks are independent.
        let static_pair = BatemanEval {
            alpha: c(0.3, 0.0),
            beta: c(0.7, 0.0),
            dt_alpha: c(0.0, 0.0),
            dt_beta: c(0.0, 0.0),
            grad_alpha: Complex3::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
            grad_beta: Complex3::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        };
        let (ra, rb) = pair_nontriviality_residual(&static_pair);
        assert_eq!((ra, rb), (0.0, 0.0));
        assert!(pair_constraint_residual(&static_pair) > 1e-3);
    }

    #[test]
    fn hopfion_poynting_at_origin_points_down_z() {
        let f = hopfion_field(SpacetimePoint::new(0.0, 0.0, 0.0, 0.0));
        assert_eq!(f.s(), Vec3::new(0.0, 0.0, -1.0));
        assert_eq!(f.u(), 1.0);
    }
}

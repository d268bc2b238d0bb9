//! Complex 3-vector arithmetic and the Riemann-Silberstein field value.
//!
//! Everything downstream (field construction, tracing, quadrature) consumes
//! the types defined here. All products are plain f64/Complex64 arithmetic;
//! the bilinear `dot` is unconjugated on purpose: nullity of a field is the
//! vanishing of F.F, not of the Hermitian norm.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type C64 = Complex64;

/// Event in flat spacetime, natural units (c = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    pub fn at_time(pos: Vec3, t: f64) -> Self {
        Self { t, x: pos.x, y: pos.y, z: pos.z }
    }

    pub fn pos(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn r_squared(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Real 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        self / self.norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Rotate about the z-axis by `angle` (counterclockwise looking down +z).
    pub fn rotated_z(self, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        Vec3::new(c * self.x - s * self.y, s * self.x + c * self.y, self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Complex 3-vector; holds F, gradients of Bateman scalars, potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex3 {
    pub x: C64,
    pub y: C64,
    pub z: C64,
}

impl Complex3 {
    pub const ZERO: Complex3 = Complex3 {
        x: C64::new(0.0, 0.0),
        y: C64::new(0.0, 0.0),
        z: C64::new(0.0, 0.0),
    };

    pub fn new(x: C64, y: C64, z: C64) -> Self {
        Self { x, y, z }
    }

    pub fn from_real(v: Vec3) -> Self {
        Self::new(C64::new(v.x, 0.0), C64::new(v.y, 0.0), C64::new(v.z, 0.0))
    }

    pub fn re(self) -> Vec3 {
        Vec3::new(self.x.re, self.y.re, self.z.re)
    }

    pub fn im(self) -> Vec3 {
        Vec3::new(self.x.im, self.y.im, self.z.im)
    }

    pub fn conj(self) -> Complex3 {
        Complex3::new(self.x.conj(), self.y.conj(), self.z.conj())
    }

    pub fn scale(self, s: C64) -> Complex3 {
        Complex3::new(self.x * s, self.y * s, self.z * s)
    }

    /// Hermitian (magnitude) norm squared, used only for scaling residuals.
    pub fn norm_squared(self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Complex3 {
    type Output = Complex3;
    fn add(self, o: Complex3) -> Complex3 {
        Complex3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Complex3 {
    type Output = Complex3;
    fn sub(self, o: Complex3) -> Complex3 {
        Complex3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Complex3 {
    type Output = Complex3;
    fn neg(self) -> Complex3 {
        Complex3::new(-self.x, -self.y, -self.z)
    }
}

/// Component-wise complex cross product. Antisymmetric and bilinear.
pub fn cross(a: Complex3, b: Complex3) -> Complex3 {
    Complex3 {
        x: a.y * b.z - a.z * b.y,
        y: a.z * b.x - a.x * b.z,
        z: a.x * b.y - a.y * b.x,
    }
}

/// Unconjugated bilinear product a.b = a1*b1 + a2*b2 + a3*b3.
///
/// This is NOT the Hermitian inner product. For a Riemann-Silberstein value
/// F = E + iB it satisfies F.F = |E|^2 - |B|^2 + 2i E.B, so F.F = 0 is
/// exactly the null-field condition.
pub fn dot(a: Complex3, b: Complex3) -> C64 {
    a.x * b.x + a.y * b.y + a.z * b.z
}

/// Riemann-Silberstein field value F = E + iB with its derived views.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsValue {
    pub f: Complex3,
}

impl RsValue {
    pub fn new(f: Complex3) -> Self {
        Self { f }
    }

    /// Electric field E = Re F.
    pub fn e(self) -> Vec3 {
        self.f.re()
    }

    /// Magnetic field B = Im F.
    pub fn b(self) -> Vec3 {
        self.f.im()
    }

    /// Poynting vector S = E x B.
    pub fn s(self) -> Vec3 {
        self.e().cross(self.b())
    }

    /// Energy density u = (|E|^2 + |B|^2)/2; always >= 0.
    pub fn u(self) -> f64 {
        0.5 * (self.e().norm_squared() + self.b().norm_squared())
    }

    /// F.F, whose vanishing is the null condition.
    pub fn self_product(self) -> C64 {
        dot(self.f, self.f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_c3(rng: &mut impl Rng) -> Complex3 {
        Complex3::new(
            c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        )
    }

    #[test]
    fn cross_real_basis() {
        let ex = Complex3::from_real(Vec3::new(1.0, 0.0, 0.0));
        let ey = Complex3::from_real(Vec3::new(0.0, 1.0, 0.0));
        let ez = cross(ex, ey);
        assert_eq!(ez.re(), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(ez.im(), Vec3::ZERO);
    }

    #[test]
    fn cross_of_vector_with_itself_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..32 {
            let a = random_c3(&mut rng);
            assert_eq!(cross(a, a), Complex3::ZERO);
        }
    }

    #[test]
    fn cross_imaginary_basis() {
        // (i,0,0) x (0,i,0) = (0,0,i*i) = (0,0,-1)
        let a = Complex3::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0));
        let b = Complex3::new(c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0));
        let r = cross(a, b);
        assert_eq!(r.z, c(-1.0, 0.0));
        assert_eq!(r.x, c(0.0, 0.0));
        assert_eq!(r.y, c(0.0, 0.0));
    }

    #[test]
    fn cross_antisymmetric_and_bilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let a = random_c3(&mut rng);
            let b = random_c3(&mut rng);
            let s = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));

            let anti = cross(a, b) + cross(b, a);
            assert!(anti.norm() < 1e-12);

            let lhs = cross(a.scale(s), b);
            let rhs = cross(a, b).scale(s);
            assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn dot_examples() {
        let a = Complex3::new(c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0));
        assert_eq!(dot(a, a), c(0.0, 0.0)); // 1 + i^2 = 0

        let ex = Complex3::from_real(Vec3::new(1.0, 0.0, 0.0));
        let ey = Complex3::from_real(Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(dot(ex, ey), c(0.0, 0.0));

        let u = Complex3::from_real(Vec3::new(2.0, 0.0, 0.0));
        let v = Complex3::from_real(Vec3::new(3.0, 0.0, 0.0));
        assert_eq!(dot(u, v), c(6.0, 0.0));
    }

    #[test]
    fn rs_decompose_hopfion_origin_value() {
        // F = (-1, i, 0): E = (-1,0,0), B = (0,1,0), S = (0,0,-1), u = 1.
        let f = RsValue::new(Complex3::new(c(-1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)));
        assert_eq!(f.e(), Vec3::new(-1.0, 0.0, 0.0));
        assert_eq!(f.b(), Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(f.s(), Vec3::new(0.0, 0.0, -1.0));
        assert_eq!(f.u(), 1.0);
    }

    #[test]
    fn rs_decompose_zero_and_plane_wave_values() {
        let zero = RsValue::new(Complex3::ZERO);
        assert_eq!(zero.e(), Vec3::ZERO);
        assert_eq!(zero.b(), Vec3::ZERO);
        assert_eq!(zero.s(), Vec3::ZERO);
        assert_eq!(zero.u(), 0.0);

        let f = RsValue::new(Complex3::new(c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)));
        assert_eq!(f.e(), Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(f.b(), Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(f.s(), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(f.u(), 1.0);
    }

    #[test]
    fn self_product_zero_iff_null() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            // Construct a null value: B = |E| * (unit vector orthogonal to E).
            let e = Vec3::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let helper = Vec3::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let perp = e.cross(helper);
            if e.norm() < 1e-3 || perp.norm() < 1e-3 {
                continue;
            }
            let b = perp.normalized() * e.norm();
            let f = Complex3::from_real(e) + Complex3::from_real(b).scale(c(0.0, 1.0));
            let val = RsValue::new(f);
            let fp = val.self_product();
            assert_abs_diff_eq!(fp.re, 0.0, epsilon = 1e-12 * f.norm_squared());
            assert_abs_diff_eq!(fp.im, 0.0, epsilon = 1e-12 * f.norm_squared());

            // Converse: F.F = |E|^2 - |B|^2 + 2i E.B, so a generic value is not null.
            let g = random_c3(&mut rng);
            let gv = RsValue::new(g);
            let gp = gv.self_product();
            let e2 = gv.e().norm_squared();
            let b2 = gv.b().norm_squared();
            let eb = gv.e().dot(gv.b());
            assert_abs_diff_eq!(gp.re, e2 - b2, epsilon = 1e-12 * (1.0 + g.norm_squared()));
            assert_abs_diff_eq!(gp.im, 2.0 * eb, epsilon = 1e-12 * (1.0 + g.norm_squared()));
        }
    }
}

//! Two-spinor representation of the null fields.
//!
//! A null congruence is encoded in a spinor field xi_A and the field itself in
//! the symmetric spinor Phi_AB = kappa xi_A xi_B. The antisymmetric field
//! tensor is rebuilt through the Infeld-van der Waerden symbols
//! g^{mu AA'} = (I, -sigma_x, sigma_y, -sigma_z)/sqrt(2) as
//!
//! ```text
//! F^{mu nu} = g^{mu AA'} g^{nu BB'} (Phi_AB eps_{A'B'} + eps_{AB} conj(Phi)_{A'B'})
//! ```
//!
//! eps is the 2x2 symplectic matrix with eps_01 = +1; indices are raised as
//! xi^A = eps^{AB} xi_B (so eps eps = -I as matrices). The (E, B) extraction
//! convention below is the one fixed by requiring that the Hopfion spinor
//! reconstructs the Hopfion closed form at every event; the unit tests pin it.

use crate::algebra::{Complex3, RsValue, SpacetimePoint, C64};
use crate::bateman::{abd, alpha_beta, BatemanEval, KnotParams};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpinorError {
    /// Both conversion branches degenerate: the scalars are locally dependent.
    #[error("both spinor conversion branches degenerate (locally dependent pair)")]
    DegenerateSpinor,
    /// Field reconstruction requires an exactly symmetric Phi_AB.
    #[error("field spinor input is not symmetric: phi01 != phi10")]
    AsymmetricInput,
}

/// Two-component complex spinor xi_A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor2 {
    pub c0: C64,
    pub c1: C64,
}

impl Spinor2 {
    pub fn new(c0: C64, c1: C64) -> Self {
        Self { c0, c1 }
    }
}

/// Symmetric field spinor Phi_AB, stored as a full 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSpinor {
    pub ab: [[C64; 2]; 2],
}

impl FieldSpinor {
    pub fn zero() -> Self {
        Self { ab: [[C64::new(0.0, 0.0); 2]; 2] }
    }

    pub fn is_symmetric(&self) -> bool {
        self.ab[0][1] == self.ab[1][0]
    }

    /// Phi_AB Phi^AB with Phi^AB = eps^{AC} eps^{BD} Phi_CD.
    ///
    /// Equals 2 det(Phi); identically zero for the rank-1 spinors built by
    /// [`phi_from`], which is the spinor form of the null condition.
    pub fn self_contraction(&self) -> C64 {
        2.0 * (self.ab[0][0] * self.ab[1][1] - self.ab[0][1] * self.ab[1][0])
    }

    pub fn norm(&self) -> f64 {
        self.ab
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// The Infeld-van der Waerden symbols g^{mu AA'}.
#[derive(Debug, Clone)]
pub struct IvdwSymbols {
    pub g: [[[C64; 2]; 2]; 4],
}

impl IvdwSymbols {
    /// (I, -sigma_x, sigma_y, -sigma_z)/sqrt(2) in the standard Pauli basis.
    pub fn standard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let re = |v: f64| C64::new(v, 0.0);
        let im = |v: f64| C64::new(0.0, v);
        IvdwSymbols {
            g: [
                [[re(s), z], [z, re(s)]],
                [[z, re(-s)], [re(-s), z]],
                [[z, im(-s)], [im(s), z]],
                [[re(-s), z], [z, re(s)]],
            ],
        }
    }
}

/// eps_{AB} = eps_{A'B'}: the symplectic matrix with eps_01 = +1.
pub const EPSILON: [[f64; 2]; 2] = [[0.0, 1.0], [-1.0, 0.0]];

/// Spinor pair (xi_A, kappa) of the knotted family member (p, q):
/// xi = (-conj b, conj a), kappa = 4 p q conj(alpha)^(p-1) conj(beta)^(q-1) conj(d)^-3.
pub fn knotted_spinor(kp: KnotParams, pt: SpacetimePoint) -> (Spinor2, C64) {
    let v = abd(pt);
    let be = alpha_beta(pt);
    let xi = Spinor2::new(-v.b.conj(), v.a.conj());
    let db = v.d.conj();
    let kappa = 4.0 * (kp.p as f64) * (kp.q as f64)
        * be.alpha.conj().powu(kp.p - 1)
        * be.beta.conj().powu(kp.q - 1)
        / (db * db * db);
    (xi, kappa)
}

/// Hopfion spinor: same congruence, kappa = conj(d)^-3.
pub fn hopfion_spinor(pt: SpacetimePoint) -> (Spinor2, C64) {
    let v = abd(pt);
    let xi = Spinor2::new(-v.b.conj(), v.a.conj());
    let db = v.d.conj();
    (xi, 1.0 / (db * db * db))
}

/// Derivatives of a conjugated scalar in the (w, wbar, z) chart, built from
/// Cartesian gradients: d_w = (d_x - i d_y)/2, d_wbar = (d_x + i d_y)/2.
struct WbarDerivs {
    dw: C64,
    dwbar: C64,
    dz: C64,
}

fn conj_derivs(grad: Complex3) -> WbarDerivs {
    let gx = grad.x.conj();
    let gy = grad.y.conj();
    let gz = grad.z.conj();
    let i = C64::i();
    WbarDerivs {
        dw: 0.5 * (gx - i * gy),
        dwbar: 0.5 * (gx + i * gy),
        dz: gz,
    }
}

/// Convert a Bateman pair evaluation to its spinor (xi_A, kappa).
///
/// The primary branch is used while its discriminant is nonzero; on the locus
/// where it degenerates (e.g. the z-axis for the S^3 pair) the fallback branch
/// takes over. The product kappa xi_A xi_B represents grad(alpha) x grad(beta);
/// family members rescale kappa by conj(h).
pub fn bateman_to_spinor(be: &BatemanEval) -> Result<(Spinor2, C64), SpinorError> {
    let da = conj_derivs(be.grad_alpha);
    let db = conj_derivs(be.grad_beta);
    let i = C64::i();

    // Scale for the degeneracy thresholds: product of first-derivative sizes.
    let scale = (da.dw.norm() + da.dwbar.norm() + da.dz.norm())
        * (db.dw.norm() + db.dwbar.norm() + db.dz.norm());

    let denom_main = da.dwbar * db.dz - da.dz * db.dwbar;
    if denom_main.norm() > 1e-12 * scale.max(1e-300) {
        let xi0 = da.dw * db.dwbar - da.dwbar * db.dw;
        let xi = Spinor2::new(xi0, denom_main);
        return Ok((xi, i / denom_main));
    }

    let denom_fallback = da.dw * db.dz - da.dz * db.dw;
    if denom_fallback.norm() > 1e-12 * scale.max(1e-300) {
        let xi = Spinor2::new(denom_fallback, C64::new(0.0, 0.0));
        return Ok((xi, i / denom_fallback));
    }

    Err(SpinorError::DegenerateSpinor)
}

/// Phi_AB = kappa xi_A xi_B; the off-diagonal entry is computed once so the
/// stored matrix is symmetric to the last bit.
pub fn phi_from(xi: Spinor2, kappa: C64) -> FieldSpinor {
    let phi00 = kappa * xi.c0 * xi.c0;
    let phi01 = kappa * xi.c0 * xi.c1;
    let phi11 = kappa * xi.c1 * xi.c1;
    FieldSpinor { ab: [[phi00, phi01], [phi01, phi11]] }
}

/// Rebuild the Riemann-Silberstein value from a symmetric field spinor via the
/// full g-symbol contraction of F^{mu nu}.
pub fn field_from_phi(phi: &FieldSpinor) -> Result<RsValue, SpinorError> {
    if !phi.is_symmetric() {
        return Err(SpinorError::AsymmetricInput);
    }
    let g = IvdwSymbols::standard().g;

    // F^{mu nu} = 2 Re[ sum_{A B} Phi_AB (g^{mu A 0} g^{nu B 1} - g^{mu A 1} g^{nu B 0}) ]
    // (the conjugate term equals the conjugate of this sum because the g
    // matrices are Hermitian in their spinor indices).
    let f_component = |mu: usize, nu: usize| -> f64 {
        let mut sum = C64::new(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                sum += phi.ab[a][b] * (g[mu][a][0] * g[nu][b][1] - g[mu][a][1] * g[nu][b][0]);
            }
        }
        2.0 * sum.re
    };

    let f01 = f_component(0, 1);
    let f02 = f_component(0, 2);
    let f03 = f_component(0, 3);
    let f12 = f_component(1, 2);
    let f13 = f_component(1, 3);
    let f23 = f_component(2, 3);

    // Extraction convention pinned by the Hopfion calibration:
    // E_i = -F^{0i}, B = (-F^{23}, F^{13}, -F^{12}).
    let e = crate::algebra::Vec3::new(-f01, -f02, -f03);
    let b = crate::algebra::Vec3::new(-f23, f13, -f12);
    let i = C64::i();
    let f = Complex3::from_real(e) + Complex3::from_real(b).scale(i);
    Ok(RsValue::new(f))
}

/// The geodesy/shear-free residual xi^A xi_B g^{mu BB'} d_mu xi_A, evaluated
/// with central differences of step `h`. Zero (up to the stencil error) for
/// the congruence underlying every member of the family.
pub fn gsf_residual<F>(field: F, pt: SpacetimePoint, h: f64) -> (C64, C64)
where
    F: Fn(SpacetimePoint) -> Spinor2,
{
    let g = IvdwSymbols::standard().g;

    let mut d_xi = [[C64::new(0.0, 0.0); 2]; 4];
    for (mu, row) in d_xi.iter_mut().enumerate() {
        let mut plus = pt;
        let mut minus = pt;
        match mu {
            0 => {
                plus.t += h;
                minus.t -= h;
            }
            1 => {
                plus.x += h;
                minus.x -= h;
            }
            2 => {
                plus.y += h;
                minus.y -= h;
            }
            _ => {
                plus.z += h;
                minus.z -= h;
            }
        }
        let fp = field(plus);
        let fm = field(minus);
        row[0] = (fp.c0 - fm.c0) / (2.0 * h);
        row[1] = (fp.c1 - fm.c1) / (2.0 * h);
    }

    let xi = field(pt);
    let x = [xi.c0, xi.c1];
    // xi^A d_mu xi_A = xi_1 d_mu xi_0 - xi_0 d_mu xi_1 (raised with eps^{01} = +1)
    let mut res = [C64::new(0.0, 0.0); 2];
    for (bp, out) in res.iter_mut().enumerate() {
        for mu in 0..4 {
            let s_mu = x[1] * d_xi[mu][0] - x[0] * d_xi[mu][1];
            let m = x[0] * g[mu][0][bp] + x[1] * g[mu][1][bp];
            *out += s_mu * m;
        }
    }
    (res[0], res[1])
}

/// Residual of the spinor Maxwell equation g^{mu AA'} d_mu Phi_AB = 0,
/// with central differences of step `h`. Returns the four (A', B) components.
pub fn maxwell_spinor_residual<F>(field: F, pt: SpacetimePoint, h: f64) -> [C64; 4]
where
    F: Fn(SpacetimePoint) -> FieldSpinor,
{
    let g = IvdwSymbols::standard().g;

    let mut d_phi = [FieldSpinor::zero(); 4];
    for (mu, slot) in d_phi.iter_mut().enumerate() {
        let mut plus = pt;
        let mut minus = pt;
        match mu {
            0 => {
                plus.t += h;
                minus.t -= h;
            }
            1 => {
                plus.x += h;
                minus.x -= h;
            }
            2 => {
                plus.y += h;
                minus.y -= h;
            }
            _ => {
                plus.z += h;
                minus.z -= h;
            }
        }
        let fp = field(plus);
        let fm = field(minus);
        for a in 0..2 {
            for b in 0..2 {
                slot.ab[a][b] = (fp.ab[a][b] - fm.ab[a][b]) / (2.0 * h);
            }
        }
    }

    let mut out = [C64::new(0.0, 0.0); 4];
    for ap in 0..2 {
        for b in 0..2 {
            let mut sum = C64::new(0.0, 0.0);
            for (mu, dp) in d_phi.iter().enumerate() {
                for a in 0..2 {
                    sum += g[mu][a][ap] * dp.ab[a][b];
                }
            }
            out[2 * ap + b] = sum;
        }
    }
    out
}

/// Scale factor h(alpha,beta) = p q alpha^(p-1) beta^(q-1) relating the basic
/// pair field to the (p, q) family member; kappa rescales by its conjugate.
pub fn monomial_family_factor(kp: KnotParams, be: &BatemanEval) -> C64 {
    (kp.p as f64) * (kp.q as f64) * be.alpha.powu(kp.p - 1) * be.beta.powu(kp.q - 1)
}

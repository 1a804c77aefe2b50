//! The flat-model forms.
//!
//! R⁷ carries coordinates (y₁, y₂, y₃, x₁, x₂, x₃, x₄) as indices 1..7 and is
//! oriented by e^{1…7}. R⁸ carries (x₁…x₄, y₁…y₄) as indices 1..8, oriented
//! by e^{1…8}. R⁶ carries (y₂, y₃, x₁…x₄), so that R⁷ = R_s ⊕ R⁶ with s = y₁.

use crate::exterior::KForm;
use crate::scalar::Scalar;

/// Self-dual 2-forms on the x-block, given by their x-indices.
pub const SELF_DUAL: [[(usize, usize, i64); 2]; 3] =
    [[(1, 2, 1), (3, 4, 1)], [(2, 4, 1), (1, 3, -1)], [(1, 4, 1), (2, 3, 1)]];

/// ω_i placed on the x-block starting at coordinate `offset + 1`.
pub fn self_dual(dim: usize, offset: usize, i: usize) -> KForm {
    let terms = SELF_DUAL[i];
    let mut f = KForm::zero(dim, 2);
    for (a, b, c) in terms {
        let t = KForm::monomial(dim, &[offset + a, offset + b], crate::scalar::int(c)).unwrap();
        f = &f + &t;
    }
    f
}

/// φ₀ = Σ dy_i ∧ ω_i + dy₁₂₃.
pub fn phi0() -> KForm {
    let mut phi = KForm::from_int_terms(7, 3, &[(&[1, 2, 3], 1)]);
    for i in 0..3 {
        let dy = KForm::basis1(7, i + 1);
        phi = &phi + &dy.wedge(&self_dual(7, 3, i)).unwrap();
    }
    phi
}

/// σ₀ = ω₁ dy₂₃ + ω₂ dy₃₁ + ω₃ dy₁₂ + dx₁₂₃₄, equal to *φ₀.
pub fn sigma0() -> KForm {
    let dy = |a: usize, b: usize| KForm::basis1(7, a).wedge(&KForm::basis1(7, b)).unwrap();
    let pairs = [dy(2, 3), dy(3, 1), dy(1, 2)];
    let mut sigma = KForm::from_int_terms(7, 4, &[(&[4, 5, 6, 7], 1)]);
    for (i, p) in pairs.iter().enumerate() {
        sigma = &sigma + &self_dual(7, 3, i).wedge(p).unwrap();
    }
    sigma
}

/// Where each coordinate of R⁷ ⊕ R_t lands in R⁸.
pub const LIFT_RELABEL: [usize; 8] = [5, 6, 7, 1, 2, 3, 4, 8];

/// Ω₀ on R⁸: fourteen monomials.
pub fn omega0() -> KForm {
    KForm::from_int_terms(
        8,
        4,
        &[
            (&[1, 2, 3, 4], 1),
            (&[1, 2, 5, 8], 1),
            (&[1, 2, 6, 7], 1),
            (&[1, 3, 5, 7], 1),
            (&[1, 3, 6, 8], -1),
            (&[1, 4, 5, 6], 1),
            (&[1, 4, 7, 8], 1),
            (&[2, 3, 5, 6], 1),
            (&[2, 3, 7, 8], 1),
            (&[2, 4, 5, 7], -1),
            (&[2, 4, 6, 8], 1),
            (&[3, 4, 5, 8], 1),
            (&[3, 4, 6, 7], 1),
            (&[5, 6, 7, 8], 1),
        ],
    )
}

/// Kähler form on R⁶: ω₁ on the x-block plus dy₂₃.
pub fn kahler0() -> KForm {
    &self_dual(6, 2, 0) + &KForm::from_int_terms(6, 2, &[(&[1, 2], 1)])
}

/// ρ₁ = dy₂ ∧ ω₂ + dy₃ ∧ ω₃.
pub fn rho1_0() -> KForm {
    let a = KForm::basis1(6, 1).wedge(&self_dual(6, 2, 1)).unwrap();
    let b = KForm::basis1(6, 2).wedge(&self_dual(6, 2, 2)).unwrap();
    &a + &b
}

/// ρ₂ = dy₃ ∧ ω₂ − dy₂ ∧ ω₃.
pub fn rho2_0() -> KForm {
    let a = KForm::basis1(6, 2).wedge(&self_dual(6, 2, 1)).unwrap();
    let b = KForm::basis1(6, 1).wedge(&self_dual(6, 2, 2)).unwrap();
    &a - &b
}

/// Coefficient c in σ = ρ₂ ∧ ds + c · ω ∧ ω, fixed by σ = *φ.
pub fn omega_squared_factor() -> Scalar {
    crate::scalar::frac(1, 2)
}

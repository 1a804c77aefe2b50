//! Metrics from stable forms: the G₂ metric of a 3-form on R⁷ and the
//! almost-complex structure of a 3-form on R⁶.

use super::standard;
use crate::exterior::{KForm, Metric};
use crate::linalg::RatMatrix;
use crate::scalar::{self, Scalar};
use num::{Signed, Zero};

/// Outcome of the positivity test for a 3-form on R⁷.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThreeFormMetric {
    /// φ is positive for `orientation · e^{1…7}`, with metric g_φ and
    /// volume coefficient `volume` (vol = volume · orientation · e^{1…7}).
    Positive {
        metric: Metric,
        volume: Scalar,
        orientation: i32,
    },
    /// Definite, but the normalized metric has an irrational scale.
    PositiveIrrational {
        bilinear: RatMatrix,
        orientation: i32,
    },
    NotPositive {
        bilinear: RatMatrix,
    },
}

impl ThreeFormMetric {
    pub fn is_positive(&self) -> bool {
        !matches!(self, ThreeFormMetric::NotPositive { .. })
    }

    pub fn metric(&self) -> Option<&Metric> {
        match self {
            ThreeFormMetric::Positive { metric, .. } => Some(metric),
            _ => None,
        }
    }
}

/// B(u, v) = coefficient of (i_u φ) ∧ (i_v φ) ∧ φ on e^{1…7}.
pub fn three_form_bilinear(phi: &KForm) -> RatMatrix {
    let n = phi.dim();
    let contractions: Vec<KForm> = (1..=n).map(|i| phi.contract_basis(i)).collect();
    let tails: Vec<KForm> = contractions.iter().map(|c| c.wedge(phi).unwrap()).collect();
    let mut b = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = contractions[i].wedge(&tails[j]).unwrap().top_coeff();
            b[(i, j)] = v.clone();
            b[(j, i)] = v;
        }
    }
    b
}

/// g_φ = B / (6 · det(B / 6⁷)^{1/9}), normalized so that φ₀ gives the
/// identity. Equivariant: g_{A*φ} = Aᵀ g_φ A for det A > 0.
pub fn metric_from_3form(phi: &KForm) -> ThreeFormMetric {
    if phi.dim() != 7 || phi.degree() != 3 {
        return ThreeFormMetric::NotPositive {
            bilinear: RatMatrix::zeros(phi.dim(), phi.dim()),
        };
    }
    let b = three_form_bilinear(phi);
    let (b, orientation) = if b.is_positive_definite() {
        (b, 1)
    } else if b.is_negative_definite() {
        (b.scale(&scalar::int(-1)), -1)
    } else {
        return ThreeFormMetric::NotPositive { bilinear: b };
    };
    let six = scalar::int(6);
    let ratio = b.determinant() / num::pow(six.clone(), 7);
    let Some(volume) = scalar::rational_root(&ratio, 9) else {
        return ThreeFormMetric::PositiveIrrational {
            bilinear: b,
            orientation,
        };
    };
    let g = b.scale(&(six * &volume).recip());
    match Metric::new(g) {
        Ok(metric) => ThreeFormMetric::Positive {
            metric,
            volume,
            orientation,
        },
        Err(_) => ThreeFormMetric::PositiveIrrational {
            bilinear: b,
            orientation,
        },
    }
}

/// K with i_{K v} e^{1…6} = (i_v ρ) ∧ ρ.
pub fn hitchin_endomorphism(rho: &KForm) -> RatMatrix {
    let n = rho.dim();
    let mut k = RatMatrix::zeros(n, n);
    for j in 0..n {
        let eta = rho.contract_basis(j + 1).wedge(rho).unwrap();
        for a in 0..n {
            let comp: Vec<usize> = (1..=n).filter(|&i| i != a + 1).collect();
            let c = eta.coeff(&comp);
            k[(a, j)] = if a % 2 == 0 { c } else { -c };
        }
    }
    k
}

/// λ(ρ) = tr(K²) / 6.
pub fn hitchin_invariant(k: &RatMatrix) -> Scalar {
    let k2 = k * k;
    let tr = (0..k.nrows()).fold(Scalar::zero(), |acc, i| acc + &k2[(i, i)]);
    tr / scalar::int(6)
}

/// Matrix of (u, v) ↦ ω(I u, v).
pub fn hermitian_form(omega: &KForm, i: &RatMatrix) -> RatMatrix {
    &i.transpose() * &two_form_matrix(omega)
}

/// W with W_ab = ω(e_a, e_b).
pub fn two_form_matrix(omega: &KForm) -> RatMatrix {
    let n = omega.dim();
    let mut w = RatMatrix::zeros(n, n);
    for (idx, c) in omega.terms() {
        let (a, b) = (idx[0] - 1, idx[1] - 1);
        w[(a, b)] = c.clone();
        w[(b, a)] = -c;
    }
    w
}

/// I of the standard ρ₁, which has λ = −4.
pub fn standard_complex_structure() -> RatMatrix {
    hitchin_endomorphism(&standard::rho1_0()).scale(&scalar::frac(1, 2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Su3Verdict {
    pub lambda: Scalar,
    /// λ < 0 and K² = λ·Id exactly.
    pub positive: bool,
    pub compatible: bool,
    /// ω(I·, ·) symmetric positive definite.
    pub hermitian_positive: bool,
    /// I = K/√(−λ) when that root is rational.
    pub complex_structure: Option<RatMatrix>,
}

impl Su3Verdict {
    pub fn passes(&self) -> bool {
        self.positive && self.compatible && self.hermitian_positive
    }
}

/// Tests whether (ω, ρ) is SU(3) data: ρ stable of negative type, ω ∧ ρ = 0
/// and ω(I·, ·) > 0. When √(−λ) is irrational the positivity checks run on K
/// itself, which differs from I by a positive factor.
pub fn su3_check(omega: &KForm, rho: &KForm) -> Su3Verdict {
    let k = hitchin_endomorphism(rho);
    let lambda = hitchin_invariant(&k);
    let n = rho.dim();
    let positive = lambda.is_negative() && (&k * &k) == RatMatrix::identity(n).scale(&lambda);
    let compatible = omega.wedge(rho).map(|f| f.is_zero()).unwrap_or(false);
    let root = if positive {
        scalar::rational_sqrt(&-lambda.clone())
    } else {
        None
    };
    let complex_structure = root.map(|r| k.scale(&r.recip()));
    let structure = complex_structure.clone().unwrap_or_else(|| k.clone());
    let h = hermitian_form(omega, &structure);
    let hermitian_positive = positive && h.is_positive_definite();
    Su3Verdict {
        lambda,
        positive,
        compatible,
        hermitian_positive,
        complex_structure,
    }
}

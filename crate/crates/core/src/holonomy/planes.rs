//! Calibrated planes: Cayley, associative and coassociative tests, exact
//! Cayley-plane constructions and random Spin(7) frames.

use super::models::{Decomposition, G2Model, Spin7Model};
use super::HolonomyError;
use crate::exterior::{KForm, OrientedPlane};
use crate::linalg::RatMatrix;
use crate::scalar::{self, Scalar};
use nalgebra::DMatrix;
use num::{Signed, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneKind {
    Cayley,
    Associative,
    Coassociative,
    None,
}

impl PlaneKind {
    pub fn name(self) -> &'static str {
        match self {
            PlaneKind::Cayley => "cayley",
            PlaneKind::Associative => "associative",
            PlaneKind::Coassociative => "coassociative",
            PlaneKind::None => "none",
        }
    }
}

/// Verdict plus every residual coefficient; `defect` is all zero iff the
/// plane has the tested kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneClassification {
    pub kind: PlaneKind,
    pub defect: Vec<Scalar>,
}

/// For v = e₁…e₈: coefficients of i_vΩ|_P − *_P(v♭|_P), with the plane star
/// taken for the induced metric and volume coefficient `vol`.
pub fn calibration_residuals(p: &OrientedPlane, m: &Spin7Model, vol: &Scalar) -> Vec<Scalar> {
    let basis = p.matrix();
    let gp = p.gram(m.metric());
    let Some(gp_inv) = gp.inverse() else {
        return vec![scalar::one()];
    };
    let g = m.metric().matrix();
    let mut out = Vec::with_capacity(32);
    for a in 0..8 {
        let lhs = m.omega().contract_basis(a + 1).pullback(basis).unwrap();
        let flat = KForm::from_vector(8, 1, &g.column(a));
        let raised = flat.pullback(basis).unwrap().pullback(&gp_inv).unwrap();
        let rhs = raised.dual_with_volume(vol);
        out.extend((&lhs - &rhs).to_vector());
    }
    out
}

/// Cayley test on a 4-plane: Ω|_P equals the induced volume form, and the
/// contraction identity holds for every coordinate vector.
pub fn classify_cayley(p: &OrientedPlane, m: &Spin7Model) -> Result<PlaneClassification, HolonomyError> {
    if p.ambient_dim() != 8 || p.k() != 4 {
        return Err(HolonomyError::Shape {
            expected: (8, 4),
            found: (p.ambient_dim(), p.k()),
        });
    }
    let c = m.omega().restrict(p)?.top_coeff();
    let det = p.gram(m.metric()).determinant();
    let signed = if p.orientation() < 0 { -c.clone() } else { c.clone() };
    let orientation_defect = if signed.is_negative() {
        &c * scalar::int(2)
    } else {
        scalar::zero()
    };
    let mut defect = vec![&c * &c - det, orientation_defect];
    let vol = if p.orientation() < 0 { -c.clone() } else { c.clone() };
    defect.extend(calibration_residuals(p, m, &vol));
    let kind = if defect.iter().all(Zero::is_zero) {
        PlaneKind::Cayley
    } else {
        PlaneKind::None
    };
    Ok(PlaneClassification { kind, defect })
}

/// Associative test for 3-planes (i_vσ|_P = 0 for all v) and coassociative
/// test for 4-planes (φ|_P = 0).
pub fn classify_g2(p: &OrientedPlane, m: &G2Model) -> Result<PlaneClassification, HolonomyError> {
    if p.ambient_dim() != 7 || !(p.k() == 3 || p.k() == 4) {
        return Err(HolonomyError::Shape {
            expected: (7, 3),
            found: (p.ambient_dim(), p.k()),
        });
    }
    let (defect, kind) = if p.k() == 3 {
        let d: Vec<Scalar> = (1..=7)
            .map(|a| m.sigma().contract_basis(a).restrict(p).unwrap().top_coeff())
            .collect();
        (d, PlaneKind::Associative)
    } else {
        (m.phi().restrict(p)?.to_vector(), PlaneKind::Coassociative)
    };
    let kind = if defect.iter().all(Zero::is_zero) {
        kind
    } else {
        PlaneKind::None
    };
    Ok(PlaneClassification { kind, defect })
}

/// The model's image of R⁴₁, i.e. g⁻¹ applied to the first four axes.
pub fn reference_cayley_plane(m: &Spin7Model) -> OrientedPlane {
    let inv = m.frame().inverse().expect("frame invertible");
    OrientedPlane::new(&(0..4).map(|j| inv.column(j)).collect::<Vec<_>>(), 1).expect("rank 4")
}

/// Rank of the linearized Cayley condition at the reference plane, over
/// graphs P(X) = span(U + N X) with X ∈ Hom(R⁴, R⁴).
pub fn cayley_linearization_rank(m: &Spin7Model) -> usize {
    let inv = m.frame().inverse().expect("frame invertible");
    let u = RatMatrix::from_fn(8, 4, |i, j| inv[(i, j)].clone());
    let n = RatMatrix::from_fn(8, 4, |i, j| inv[(i, j + 4)].clone());
    let g = m.metric().matrix();
    let one = scalar::one();
    let residual = |x: &RatMatrix| -> Vec<Scalar> {
        let p = u.add(&(&n * x));
        let mut out = Vec::with_capacity(32);
        for a in 0..8 {
            let lhs = m.omega().contract_basis(a + 1).pullback(&p).unwrap();
            let flat = KForm::from_vector(8, 1, &g.column(a));
            let rhs = flat.pullback(&p).unwrap().dual_with_volume(&one);
            out.extend((&lhs - &rhs).to_vector());
        }
        out
    };
    let mut columns = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let mut e = RatMatrix::zeros(4, 4);
            e[(i, j)] = scalar::one();
            // five-point stencil, exact for the cubic dependence on t
            let f = |t: i64| residual(&e.scale(&scalar::int(t)));
            let (m2, m1, p1, p2) = (f(-2), f(-1), f(1), f(2));
            let col: Vec<Scalar> = (0..m2.len())
                .map(|k| (&m2[k] - &p2[k] + (&p1[k] - &m1[k]) * scalar::int(8)) / scalar::int(12))
                .collect();
            columns.push(col);
        }
    }
    RatMatrix::from_rows(&columns).transpose().rank()
}

/// Rational orthogonal matrix (I − S)(I + S)⁻¹ for skew S.
pub fn cayley_transform(skew: &RatMatrix) -> RatMatrix {
    let id = RatMatrix::identity(skew.nrows());
    let inv = id.add(skew).inverse().expect("I + S invertible for skew S");
    &id.sub(skew) * &inv
}

/// Skew 8×8 matrix with entries drawn from −r..=r.
pub fn random_skew(rng: &mut impl Rng, n: usize, r: i64) -> RatMatrix {
    let mut s = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = scalar::int(rng.random_range(-r..=r));
            s[(i, j)] = v.clone();
            s[(j, i)] = -v;
        }
    }
    s
}

/// Completes a g-orthonormal triple (u, v, w) to the Cayley plane
/// span(u, v, w, x) with x = g⁻¹ Ω(u, v, w, ·).
pub fn cayley_plane_from_triple(
    m: &Spin7Model,
    u: &[Scalar],
    v: &[Scalar],
    w: &[Scalar],
) -> Result<OrientedPlane, HolonomyError> {
    let flat = m.omega().contract(u)?.contract(v)?.contract(w)?.to_vector();
    let x = m.metric().inverse_matrix().mul_vec(&flat);
    Ok(OrientedPlane::new(&[u.to_vec(), v.to_vec(), w.to_vec(), x], 1)?)
}

/// An exact Cayley plane for the model from a random rational rotation.
pub fn random_exact_cayley_plane(m: &Spin7Model, rng: &mut impl Rng) -> OrientedPlane {
    let q = cayley_transform(&random_skew(rng, 8, 2));
    let inv = m.frame().inverse().expect("frame invertible");
    let frame = &inv * &q;
    cayley_plane_from_triple(m, &frame.column(0), &frame.column(1), &frame.column(2))
        .expect("orthonormal triple spans a plane")
}

/// Float projector onto Λ²₂₁ of the standard model.
pub fn spin_algebra_projector(d: &Decomposition) -> DMatrix<f64> {
    d.projector("21").expect("Spin(7) decomposition").to_f64()
}

/// exp(A) for a random A ∈ Λ²₂₁ ≅ spin(7), viewed as a skew matrix.
pub fn random_spin7_rotation(p21: &DMatrix<f64>, rng: &mut impl Rng) -> DMatrix<f64> {
    let raw = nalgebra::DVector::from_fn(28, |_, _| rng.sample::<f64, _>(StandardNormal));
    let alpha = p21 * raw;
    let blades = crate::exterior::basis_blades(8, 2);
    let mut a = DMatrix::zeros(8, 8);
    for (k, b) in blades.iter().enumerate() {
        let idx = crate::exterior::blade_indices(*b);
        let (i, j) = (idx[0] - 1, idx[1] - 1);
        a[(i, j)] = alpha[k];
        a[(j, i)] = -alpha[k];
    }
    a.exp()
}

/// Spanning vectors of a random Cayley plane for the model, in floats.
pub fn random_cayley_frame(m_inv: &DMatrix<f64>, p21: &DMatrix<f64>, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let h = m_inv * random_spin7_rotation(p21, rng);
    (0..4).map(|j| h.column(j).iter().copied().collect()).collect()
}

/// Orthonormal basis of a Gaussian random 4-plane in R⁸.
pub fn random_orthonormal_4frame(rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let a = DMatrix::from_fn(8, 4, |_, _| rng.sample::<f64, _>(StandardNormal));
    let q = a.qr().q();
    (0..4).map(|j| q.column(j).iter().copied().collect()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationReport {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Largest |Ω|_P| / vol_P over the random planes.
    pub max_ratio: f64,
    pub violations: usize,
    pub exact_planes: usize,
    /// Constructed planes on which Ω|_P = vol_P holds exactly.
    pub exact_equalities: usize,
}

impl CalibrationReport {
    pub fn passes(&self) -> bool {
        self.violations == 0 && self.exact_equalities == self.exact_planes
    }
}

/// The calibration inequality on `cfg.samples` random g-orthonormal 4-planes,
/// and exact equality on `exact_planes` constructed Cayley planes.
pub fn calibration_sampling(
    m: &Spin7Model,
    cfg: &super::taming::SamplingConfig,
    exact_planes: usize,
    tolerance: f64,
) -> CalibrationReport {
    let inv = m.frame().inverse().expect("frame invertible").to_f64();
    let ratios = cfg.execution.map_range(cfg.samples, |i| {
        let mut rng = crate::par::stream_rng(cfg.seed, i as u64);
        let frame: Vec<Vec<f64>> = random_orthonormal_4frame(&mut rng)
            .iter()
            .map(|v| {
                (&inv * nalgebra::DVector::from_column_slice(v))
                    .iter()
                    .copied()
                    .collect()
            })
            .collect();
        m.omega().evaluate_f64(&frame).abs()
    });
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let violations = ratios.iter().filter(|&&r| r > 1.0 + tolerance).count();
    let exact_equalities = cfg
        .execution
        .map_range(exact_planes, |i| {
            let mut rng = crate::par::stream_rng(cfg.seed ^ 0xCA1B, i as u64);
            let p = random_exact_cayley_plane(m, &mut rng);
            classify_cayley(&p, m)
                .map(|c| c.kind == PlaneKind::Cayley)
                .unwrap_or(false)
        })
        .into_iter()
        .filter(|&ok| ok)
        .count();
    CalibrationReport {
        samples: cfg.samples,
        seed: cfg.seed,
        tolerance,
        max_ratio,
        violations,
        exact_planes,
        exact_equalities,
    }
}

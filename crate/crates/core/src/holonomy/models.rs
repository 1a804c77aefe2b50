//! Orbit-constructed Spin(7), G₂ and SU(3) models, their 2-form
//! decompositions and the cylinder lifts between them.

use super::standard::{self, LIFT_RELABEL};
use super::{gl_action_rank, HolonomyError};
use crate::exterior::{basis_blades, KForm, Metric};
use crate::linalg::{orthogonalize, RatMatrix};
use crate::scalar::{self, Scalar};
use num::Signed;

/// Splitting of Λ² into the images of complementary idempotents.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub dim: usize,
    pub parts: Vec<(&'static str, RatMatrix)>,
}

impl Decomposition {
    pub fn labels(&self) -> Vec<&'static str> {
        self.parts.iter().map(|(l, _)| *l).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.parts.iter().map(|(_, p)| p.rank()).collect()
    }

    pub fn projector(&self, label: &str) -> Option<&RatMatrix> {
        self.parts.iter().find(|(l, _)| *l == label).map(|(_, p)| p)
    }

    /// Components of `beta`, in the order of `parts`.
    pub fn project(&self, beta: &KForm) -> Result<Vec<KForm>, HolonomyError> {
        if beta.dim() != self.dim || beta.degree() != 2 {
            return Err(HolonomyError::Shape {
                expected: (self.dim, 2),
                found: (beta.dim(), beta.degree()),
            });
        }
        let v = beta.to_vector();
        Ok(self
            .parts
            .iter()
            .map(|(_, p)| KForm::from_vector(self.dim, 2, &p.mul_vec(&v)))
            .collect())
    }

    /// Π_a Π_b = δ_ab Π_a and Σ Π_a = Id.
    pub fn is_complete_orthogonal(&self) -> bool {
        let n = self.parts.first().map_or(0, |(_, p)| p.nrows());
        let mut sum = RatMatrix::zeros(n, n);
        for (i, (_, a)) in self.parts.iter().enumerate() {
            sum = sum.add(a);
            for (j, (_, b)) in self.parts.iter().enumerate() {
                let ab = a * b;
                let ok = if i == j { ab == *a } else { ab.is_zero() };
                if !ok {
                    return false;
                }
            }
        }
        sum == RatMatrix::identity(n)
    }

    /// A basis of the image of `label`, mutually orthogonal under `metric`.
    pub fn orthogonal_basis(&self, label: &str, metric: &Metric) -> Vec<KForm> {
        let p = self.projector(label).expect("known component");
        let cols: Vec<Vec<Scalar>> = p.independent_columns().into_iter().map(|j| p.column(j)).collect();
        let dim = self.dim;
        let ortho = orthogonalize(&cols, |a, b| {
            metric.inner(&KForm::from_vector(dim, 2, a), &KForm::from_vector(dim, 2, b))
        });
        ortho.iter().map(|v| KForm::from_vector(dim, 2, v)).collect()
    }
}

/// Matrix of β ↦ op(β) on Λ² in the `basis_blades(dim, 2)` order.
fn two_form_operator(dim: usize, op: impl Fn(&KForm) -> KForm) -> RatMatrix {
    let blades = basis_blades(dim, 2);
    let n = blades.len();
    let mut m = RatMatrix::zeros(n, n);
    for (j, b) in blades.iter().enumerate() {
        let e = KForm::from_vector(dim, 2, &unit(n, j));
        debug_assert_eq!(e.coeff_blade(*b), Scalar::from_integer(1.into()));
        for (i, x) in op(&e).to_vector().into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    m
}

fn unit(n: usize, j: usize) -> Vec<Scalar> {
    (0..n)
        .map(|i| if i == j { scalar::one() } else { scalar::zero() })
        .collect()
}

/// `(T − μ·Id) / (λ − μ)`: projector onto the λ-eigenspace of T when T has
/// eigenvalues {λ, μ} only.
fn eigen_projector(t: &RatMatrix, lambda: i64, mu: i64) -> RatMatrix {
    let n = t.nrows();
    t.sub(&RatMatrix::identity(n).scale(&scalar::int(mu)))
        .scale(&scalar::frac(1, lambda - mu))
}

fn check_frame(frame: &RatMatrix, n: usize) -> Result<Scalar, HolonomyError> {
    if frame.nrows() != n || frame.ncols() != n {
        return Err(HolonomyError::Shape {
            expected: (n, n),
            found: (frame.nrows(), frame.ncols()),
        });
    }
    let det = frame.determinant();
    if !det.is_positive() {
        return Err(HolonomyError::NotOrientationPreserving(scalar::format(&det)));
    }
    Ok(det)
}

/// Ω = pullback(Ω₀, g) for a frame g ∈ GL⁺(8).
#[derive(Clone, Debug)]
pub struct Spin7Model {
    omega: KForm,
    frame: RatMatrix,
    metric: Metric,
    volume: Scalar,
}

impl Spin7Model {
    pub fn standard() -> Self {
        Self::from_frame(RatMatrix::identity(8)).expect("identity frame")
    }

    pub fn from_frame(frame: RatMatrix) -> Result<Self, HolonomyError> {
        let volume = check_frame(&frame, 8)?;
        let omega = standard::omega0().pullback(&frame)?;
        let metric = Metric::new(&frame.transpose() * &frame)?;
        Ok(Spin7Model {
            omega,
            frame,
            metric,
            volume,
        })
    }

    pub fn omega(&self) -> &KForm {
        &self.omega
    }

    pub fn frame(&self) -> &RatMatrix {
        &self.frame
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn volume(&self) -> &Scalar {
        &self.volume
    }

    pub fn volume_form(&self) -> KForm {
        KForm::volume(8).scale(&self.volume)
    }

    pub fn star(&self, a: &KForm) -> KForm {
        a.hodge_star(&self.metric, 1).expect("rational volume")
    }

    /// Matrix of α ↦ *(α ∧ Ω) on Λ²; eigenvalues 3 (rank 7) and −1 (rank 21).
    pub fn wedge_star_operator(&self) -> RatMatrix {
        two_form_operator(8, |b| self.star(&b.wedge(&self.omega).unwrap()))
    }

    /// Λ² = Λ²₇ ⊕ Λ²₂₁.
    pub fn decomposition(&self) -> Decomposition {
        let t = self.wedge_star_operator();
        Decomposition {
            dim: 8,
            parts: vec![("7", eigen_projector(&t, 3, -1)), ("21", eigen_projector(&t, -1, 3))],
        }
    }

    /// Σ θ_i ∧ θ_i over an orthonormal basis θ of Λ²₇, computed from an
    /// orthogonal rational basis as Σ b ∧ b / |b|².
    pub fn seven_part_square_sum(&self, decomposition: &Decomposition) -> KForm {
        let mut acc = KForm::zero(8, 4);
        for b in decomposition.orthogonal_basis("7", &self.metric) {
            let n = self.metric.inner(&b, &b);
            acc = &acc + &b.wedge(&b).unwrap().scale(&n.recip());
        }
        acc
    }

    /// α ∧ α ∧ Ω + |α|² vol for the Λ²₂₁ part of `alpha`; identically zero.
    pub fn energy_identity_residual(
        &self,
        alpha: &KForm,
        decomposition: &Decomposition,
    ) -> Result<KForm, HolonomyError> {
        let a = decomposition.project(alpha)?.remove(1);
        let lhs = a.wedge(&a)?.wedge(&self.omega)?;
        let n = self.metric.inner(&a, &a);
        Ok(&lhs + &self.volume_form().scale(&n))
    }
}

/// φ = pullback(φ₀, A), σ = pullback(σ₀, A) for A ∈ GL⁺(7).
#[derive(Clone, Debug)]
pub struct G2Model {
    phi: KForm,
    sigma: KForm,
    frame: RatMatrix,
    metric: Metric,
    volume: Scalar,
}

impl G2Model {
    pub fn standard() -> Self {
        Self::from_frame(RatMatrix::identity(7)).expect("identity frame")
    }

    pub fn from_frame(frame: RatMatrix) -> Result<Self, HolonomyError> {
        let volume = check_frame(&frame, 7)?;
        let phi = standard::phi0().pullback(&frame)?;
        let sigma = standard::sigma0().pullback(&frame)?;
        let metric = Metric::new(&frame.transpose() * &frame)?;
        let m = G2Model {
            phi,
            sigma,
            frame,
            metric,
            volume,
        };
        if m.star(&m.phi) != m.sigma {
            return Err(HolonomyError::Invariant("σ ≠ *φ".into()));
        }
        Ok(m)
    }

    pub fn phi(&self) -> &KForm {
        &self.phi
    }

    pub fn sigma(&self) -> &KForm {
        &self.sigma
    }

    pub fn frame(&self) -> &RatMatrix {
        &self.frame
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn volume(&self) -> &Scalar {
        &self.volume
    }

    pub fn star(&self, a: &KForm) -> KForm {
        a.hodge_star(&self.metric, 1).expect("rational volume")
    }

    /// Matrix of β ↦ *(β ∧ φ) on Λ²; eigenvalues 2 (rank 7) and −1 (rank 14).
    pub fn wedge_star_operator(&self) -> RatMatrix {
        two_form_operator(7, |b| self.star(&b.wedge(&self.phi).unwrap()))
    }

    /// Λ² = Λ²₇ ⊕ Λ²₁₄.
    pub fn decomposition(&self) -> Decomposition {
        let t = self.wedge_star_operator();
        Decomposition {
            dim: 7,
            parts: vec![("7", eigen_projector(&t, 2, -1)), ("14", eigen_projector(&t, -1, 2))],
        }
    }
}

/// SU(3) data on R⁶ transported from the standard forms by a frame B.
#[derive(Clone, Debug)]
pub struct SU3Model {
    omega: KForm,
    rho1: KForm,
    rho2: KForm,
    complex_structure: RatMatrix,
    frame: RatMatrix,
    metric: Metric,
}

impl SU3Model {
    pub fn standard() -> Self {
        Self::from_frame(RatMatrix::identity(6)).expect("identity frame")
    }

    pub fn from_frame(frame: RatMatrix) -> Result<Self, HolonomyError> {
        check_frame(&frame, 6)?;
        let inv = frame.inverse().expect("invertible");
        let i0 = super::metric::standard_complex_structure();
        let complex_structure = &(&inv * &i0) * &frame;
        let omega = standard::kahler0().pullback(&frame)?;
        let rho1 = standard::rho1_0().pullback(&frame)?;
        let rho2 = standard::rho2_0().pullback(&frame)?;
        let metric = Metric::new(super::metric::hermitian_form(&omega, &complex_structure))?;
        let m = SU3Model {
            omega,
            rho1,
            rho2,
            complex_structure,
            frame,
            metric,
        };
        m.check_invariants()?;
        Ok(m)
    }

    /// ρ₂ = −I*ρ₁, I² = −Id, ω ∧ ρ₁ = 0.
    pub fn check_invariants(&self) -> Result<(), HolonomyError> {
        let i = &self.complex_structure;
        if (i * i) != RatMatrix::identity(6).scale(&scalar::int(-1)) {
            return Err(HolonomyError::Invariant("I² ≠ −Id".into()));
        }
        if -&self.rho1.pullback(i)? != self.rho2 {
            return Err(HolonomyError::Invariant("ρ₂ ≠ −I·ρ₁".into()));
        }
        if !self.omega.wedge(&self.rho1)?.is_zero() {
            return Err(HolonomyError::Invariant("ω ∧ ρ₁ ≠ 0".into()));
        }
        Ok(())
    }

    pub fn omega(&self) -> &KForm {
        &self.omega
    }

    pub fn rho1(&self) -> &KForm {
        &self.rho1
    }

    pub fn rho2(&self) -> &KForm {
        &self.rho2
    }

    pub fn complex_structure(&self) -> &RatMatrix {
        &self.complex_structure
    }

    pub fn frame(&self) -> &RatMatrix {
        &self.frame
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// Λ² = ⟨ω⟩ ⊕ Λ²₆ ⊕ Λ²₈: the ω-line, the I-anti-invariant part and
    /// the ω-orthogonal I-invariant part.
    pub fn decomposition(&self) -> Decomposition {
        let j = two_form_operator(6, |b| b.pullback(&self.complex_structure).unwrap());
        let id = RatMatrix::identity(15);
        let half = scalar::frac(1, 2);
        let invariant = id.add(&j).scale(&half);
        let anti = id.sub(&j).scale(&half);
        let w = self.omega.to_vector();
        let norm = self.metric.inner(&self.omega, &self.omega);
        let dual = self.metric.raise(&self.omega).to_vector();
        let line = RatMatrix::from_fn(15, 15, |r, c| &w[r] * &dual[c] / &norm);
        let eight = invariant.sub(&line);
        Decomposition {
            dim: 6,
            parts: vec![("1", line), ("6", anti), ("8", eight)],
        }
    }
}

/// Spin(7) structure on R⁸ from a G₂ structure on R⁷: Ω = φ ∧ dt + σ, with
/// (y, x, t) relabelled to the R⁸ coordinates (x, y₁…y₃, t).
pub fn cylinder_lift_7to8(m: &G2Model) -> Result<Spin7Model, HolonomyError> {
    let dt = KForm::basis1(8, 8);
    let lifted = &m.phi.extend(1).wedge(&dt)? + &m.sigma.extend(1);
    let omega = lifted.relabel(&LIFT_RELABEL);
    let p = permutation(&LIFT_RELABEL);
    let frame = &(&p * &m.frame.direct_sum(&RatMatrix::identity(1))) * &p.transpose();
    let out = Spin7Model::from_frame(frame)?;
    if out.omega != omega {
        return Err(HolonomyError::Invariant("lifted form leaves the Spin(7) orbit".into()));
    }
    Ok(out)
}

/// G₂ structure on R_s ⊕ R⁶ from SU(3) data: φ = ω ∧ ds + ρ₁ and
/// σ = ρ₂ ∧ ds + c · ω ∧ ω with c from [`standard::omega_squared_factor`].
pub fn cylinder_lift_6to7(m: &SU3Model) -> Result<G2Model, HolonomyError> {
    m.check_invariants()?;
    let embed = |f: &KForm| f.extend(1).relabel(&[2, 3, 4, 5, 6, 7, 1]);
    let ds = KForm::basis1(7, 1);
    let w = embed(&m.omega);
    let phi = &w.wedge(&ds)? + &embed(&m.rho1);
    let sigma = &embed(&m.rho2).wedge(&ds)? + &w.wedge(&w)?.scale(&standard::omega_squared_factor());
    let frame = RatMatrix::identity(1).direct_sum(&m.frame);
    let out = G2Model::from_frame(frame)?;
    if out.phi != phi || out.sigma != sigma {
        return Err(HolonomyError::Invariant("lifted forms leave the G₂ orbit".into()));
    }
    Ok(out)
}

/// P with P e_i = e_{relabel[i]} (1-based labels).
pub fn permutation(relabel: &[usize]) -> RatMatrix {
    let n = relabel.len();
    RatMatrix::from_fn(n, n, |r, c| {
        if relabel[c] == r + 1 {
            scalar::one()
        } else {
            scalar::zero()
        }
    })
}

pub fn standard_models() -> (Spin7Model, G2Model, SU3Model) {
    (Spin7Model::standard(), G2Model::standard(), SU3Model::standard())
}

/// Ranks of the linearized GL action on a model's defining form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub ambient: usize,
    pub form_space: usize,
    pub action_rank: usize,
    pub stabilizer_dim: usize,
    pub cayley_rank: Option<usize>,
    pub cayley_locus_dim: Option<usize>,
}

impl OrbitReport {
    fn of(form: &KForm) -> Self {
        let n = form.dim();
        let rank = gl_action_rank(form);
        OrbitReport {
            ambient: n,
            form_space: crate::exterior::dimension_of(n, form.degree()),
            action_rank: rank,
            stabilizer_dim: n * n - rank,
            cayley_rank: None,
            cayley_locus_dim: None,
        }
    }

    pub fn is_open(&self) -> bool {
        self.action_rank == self.form_space
    }
}

pub fn orbit_rank_spin7(m: &Spin7Model) -> OrbitReport {
    let mut r = OrbitReport::of(&m.omega);
    let c = super::planes::cayley_linearization_rank(m);
    r.cayley_rank = Some(c);
    r.cayley_locus_dim = Some(16 - c);
    r
}

pub fn orbit_rank_g2(m: &G2Model) -> OrbitReport {
    OrbitReport::of(&m.phi)
}

pub fn orbit_rank_su3(m: &SU3Model) -> OrbitReport {
    OrbitReport::of(&m.rho1)
}

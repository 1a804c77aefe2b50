//! Taming certificates for closed 4-forms (and G₂ pairs lifted to R⁸).

use super::models::{cylinder_lift_7to8, G2Model, Spin7Model};
use super::planes::{random_cayley_frame, spin_algebra_projector};
use super::standard::LIFT_RELABEL;
use super::HolonomyError;
use crate::exterior::KForm;
use crate::linalg::RatMatrix;
use crate::par::{stream_rng, Execution};

pub const DEFAULT_SEED: u64 = 0x7A31_5EED;
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingConfig {
    pub samples: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TamingCertificate {
    pub candidate: KForm,
    /// Q_ij = coefficient of b_i ∧ b_j ∧ Ω′ relative to the model volume form.
    pub gram: RatMatrix,
    /// ⟨b_i, b_j⟩ for the Λ²₂₁ basis used.
    pub norm_gram: RatMatrix,
    /// N⁻¹Q; equals −Id when Ω′ is the model form itself.
    pub relative: RatMatrix,
    pub negative_definite: bool,
    pub samples: usize,
    pub seed: u64,
    pub min_margin: f64,
    pub max_margin: f64,
    pub positive_samples: usize,
    pub tamed: bool,
}

/// q(α) = α ∧ α ∧ Ω′ on Λ²₂₁ must be negative definite, as it is for
/// Ω′ = Ω, and Ω′ must be positive on every sampled Cayley plane.
pub fn taming_check(
    candidate: &KForm,
    m: &Spin7Model,
    cfg: &SamplingConfig,
) -> Result<TamingCertificate, HolonomyError> {
    if candidate.dim() != 8 || candidate.degree() != 4 {
        return Err(HolonomyError::Shape {
            expected: (8, 4),
            found: (candidate.dim(), candidate.degree()),
        });
    }
    let decomposition = m.decomposition();
    let basis = decomposition.orthogonal_basis("21", m.metric());
    let k = basis.len();
    let vol_inv = m.volume().recip();
    let partial: Vec<KForm> = basis.iter().map(|b| b.wedge(candidate).unwrap()).collect();
    let mut gram = RatMatrix::zeros(k, k);
    let mut norm_gram = RatMatrix::zeros(k, k);
    for i in 0..k {
        norm_gram[(i, i)] = m.metric().inner(&basis[i], &basis[i]);
        for j in i..k {
            let q = basis[j].wedge(&partial[i]).unwrap().top_coeff() * &vol_inv;
            gram[(i, j)] = q.clone();
            gram[(j, i)] = q;
        }
    }
    let relative = &norm_gram.inverse().expect("basis nondegenerate") * &gram;
    let negative_definite = gram.is_negative_definite();

    let p21 = spin_algebra_projector(&Spin7Model::standard().decomposition());
    let inv = m.frame().inverse().expect("frame invertible").to_f64();
    let margins = cfg.execution.map_range(cfg.samples, |i| {
        let mut rng = stream_rng(cfg.seed, i as u64);
        let frame = random_cayley_frame(&inv, &p21, &mut rng);
        candidate.evaluate_f64(&frame) / m.omega().evaluate_f64(&frame)
    });
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let max_margin = margins.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let positive_samples = margins.iter().filter(|&&x| x > 0.0).count();
    let tamed = negative_definite && positive_samples == cfg.samples;
    Ok(TamingCertificate {
        candidate: candidate.clone(),
        gram,
        norm_gram,
        relative,
        negative_definite,
        samples: cfg.samples,
        seed: cfg.seed,
        min_margin,
        max_margin,
        positive_samples,
        tamed,
    })
}

/// Ω′ = φ′ ∧ dt + σ′ on R⁷ × R_t in the R⁸ coordinates of the lifts.
pub fn lift_pair(phi: &KForm, sigma: &KForm) -> Result<KForm, HolonomyError> {
    let dt = KForm::basis1(8, 8);
    let lifted = &phi.extend(1).wedge(&dt)? + &sigma.extend(1);
    Ok(lifted.relabel(&LIFT_RELABEL))
}

/// Taming for a (3-form, 4-form) pair on R⁷ against the lifted G₂ model.
pub fn taming_check_pair(
    phi: &KForm,
    sigma: &KForm,
    m: &G2Model,
    cfg: &SamplingConfig,
) -> Result<TamingCertificate, HolonomyError> {
    if phi.dim() != 7 || phi.degree() != 3 || sigma.dim() != 7 || sigma.degree() != 4 {
        return Err(HolonomyError::Shape {
            expected: (7, 3),
            found: (phi.dim(), phi.degree()),
        });
    }
    let lifted_model = cylinder_lift_7to8(m)?;
    taming_check(&lift_pair(phi, sigma)?, &lifted_model, cfg)
}

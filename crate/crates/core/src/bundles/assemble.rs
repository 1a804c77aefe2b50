use super::{Atlas, BundleError};
use crate::novikov::expsum::numerical_rank;
use crate::novikov::model::RANK_TOLERANCE;
use crate::par::Execution;
use nalgebra::DMatrix;
use num::complex::Complex64;

/// Smallest singular value, relative to the largest, below which a
/// transition counts as singular.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport {
    pub index: usize,
    /// Cokernel rank, or `None` when the sample was skipped.
    pub rank: Option<usize>,
    /// Largest deviation between an induced chamber identification and the
    /// stored transition.
    pub frame_residual: f64,
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BundleReport {
    pub expected_rank: Option<usize>,
    pub samples: Vec<SampleReport>,
}

impl BundleReport {
    /// Every evaluated sample has the expected rank and consistent frames.
    pub fn consistent(&self, tol: f64) -> bool {
        self.samples.iter().all(|s| match s.rank {
            Some(r) => Some(r) == self.expected_rank && s.frame_residual <= tol,
            None => true,
        })
    }

    pub fn evaluated(&self) -> usize {
        self.samples.iter().filter(|s| s.rank.is_some()).count()
    }
}

fn is_singular(m: &DMatrix<Complex64>) -> bool {
    if m.nrows() != m.ncols() {
        return true;
    }
    if m.nrows() == 0 {
        return false;
    }
    let sv = m.clone().singular_values();
    let top = sv.max();
    top == 0.0 || sv.min() <= SINGULAR_TOLERANCE * top
}

/// Builds Φ : ⊕_{x≠y} V_xy → ⊕_z V_z with V_xy = V_x, component id into V_x
/// and −Ĝ_xy(ψ) into V_y, and reads off coker Φ at each sample: its rank,
/// and the identification V_x → coker → V_y, which must equal Ĝ_xy(ψ).
pub fn assemble_bundle(
    atlas: &Atlas,
    samples: &[Vec<Complex64>],
    execution: Execution,
) -> Result<BundleReport, BundleError> {
    let charts = atlas.charts();
    let sizes: Vec<usize> = charts.iter().map(|c| c.len()).collect();
    let expected_rank = (sizes.windows(2).all(|w| w[0] == w[1]))
        .then(|| sizes.first().copied())
        .flatten();
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let total: usize = sizes.iter().sum();
    let pairs: Vec<(usize, usize)> = atlas
        .families()
        .map(|f| {
            let x = charts.iter().position(|c| c.label == f.from).unwrap();
            let y = charts.iter().position(|c| c.label == f.to).unwrap();
            (x, y)
        })
        .collect();
    for s in samples {
        if s.len() != atlas.rank() {
            return Err(BundleError::Invalid(format!(
                "sample has length {}, expected {}",
                s.len(),
                atlas.rank()
            )));
        }
    }

    let run = |index: usize| -> Result<SampleReport, BundleError> {
        let psi = &samples[index];
        let skip = |why: String| SampleReport {
            index,
            rank: None,
            frame_residual: 0.0,
            skipped: Some(why),
        };
        let mut transitions = Vec::with_capacity(pairs.len());
        for &(x, y) in &pairs {
            let g = atlas.evaluate(&charts[x].label, &charts[y].label, psi)?;
            if is_singular(&g) {
                return Ok(skip(format!(
                    "transition {} → {} is singular",
                    charts[x].label, charts[y].label
                )));
            }
            transitions.push(g);
        }
        let columns: usize = pairs.iter().map(|&(x, _)| sizes[x]).sum();
        let mut phi = DMatrix::<Complex64>::zeros(total, columns);
        let mut col = 0;
        for (&(x, y), g) in pairs.iter().zip(&transitions) {
            let n = sizes[x];
            for k in 0..n {
                phi[(offsets[x] + k, col + k)] = Complex64::new(1.0, 0.0);
            }
            phi.view_mut((offsets[y], col), (sizes[y], n)).copy_from(&(-g));
            col += n;
        }
        let rank = total - numerical_rank(&phi, RANK_TOLERANCE);

        // Rows of q span the annihilator of im Φ: the quotient map onto coker.
        let gram = &phi * phi.adjoint();
        let eig = nalgebra::SymmetricEigen::new(gram);
        let mut order: Vec<usize> = (0..total).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let mut q = DMatrix::<Complex64>::zeros(rank, total);
        for (r, &k) in order.iter().take(rank).enumerate() {
            q.row_mut(r).copy_from(&eig.eigenvectors.column(k).adjoint());
        }
        let mut frame_residual = 0.0f64;
        if Some(rank) == expected_rank {
            let inclusion = |z: usize| q.columns(offsets[z], sizes[z]).into_owned();
            for (&(x, y), g) in pairs.iter().zip(&transitions) {
                let Some(inv) = inclusion(y).try_inverse() else {
                    return Ok(skip(format!("chart {} does not frame the cokernel", charts[y].label)));
                };
                let induced = inv * inclusion(x);
                frame_residual = frame_residual.max((induced - g).camax());
            }
        }
        Ok(SampleReport {
            index,
            rank: Some(rank),
            frame_residual,
            skipped: None,
        })
    };
    let samples = execution
        .map_range(samples.len(), run)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BundleReport { expected_rank, samples })
}

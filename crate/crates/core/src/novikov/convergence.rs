//! Empirical growth rate of flow counts along the period direction.

use super::model::FlowModel;

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceProfile {
    /// Aggregate |count| in consecutive unit shells of ⟨class, θ⟩.
    pub shells: Vec<f64>,
    /// Estimated exponential growth rate; zero for complete tables.
    pub rho_hat: f64,
    /// True when the table is finite rather than truncated at a horizon.
    pub complete: bool,
}

impl ConvergenceProfile {
    /// Fits ln A(ℓ) ≈ ρ ℓ + c over the second half of the nonempty shells.
    pub fn from_shells(shells: Vec<f64>, complete: bool) -> Self {
        if complete {
            return ConvergenceProfile {
                shells,
                rho_hat: 0.0,
                complete,
            };
        }
        let pts: Vec<(f64, f64)> = shells
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0.0)
            .map(|(l, a)| (l as f64, a.ln()))
            .collect();
        let tail = &pts[pts.len() / 2..];
        let rho_hat = slope(tail).max(0.0);
        ConvergenceProfile {
            shells,
            rho_hat,
            complete,
        }
    }

    /// Series Σ A(ℓ) e^{−sℓ} is flagged divergent for s ≤ ρ̂.
    pub fn diverges_at(&self, s: f64) -> bool {
        !self.complete && s <= self.rho_hat
    }

    /// Partial sums Σ_{ℓ ≤ L} A(ℓ) e^{−sℓ}.
    pub fn partial_sums(&self, s: f64) -> Vec<f64> {
        let mut acc = 0.0;
        self.shells
            .iter()
            .enumerate()
            .map(|(l, a)| {
                acc += a * (-s * l as f64).exp();
                acc
            })
            .collect()
    }

    /// Whether the last shell term still grows relative to the middle one.
    pub fn partial_sums_grow(&self, s: f64) -> bool {
        let terms: Vec<f64> = self
            .shells
            .iter()
            .enumerate()
            .map(|(l, a)| a * (-s * l as f64).exp())
            .collect();
        match (terms.get(terms.len() / 2), terms.last()) {
            (Some(mid), Some(last)) => last >= mid && *last > 0.0,
            _ => false,
        }
    }
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

pub fn convergence_profile(model: &FlowModel) -> ConvergenceProfile {
    ConvergenceProfile::from_shells(model.shell_counts(), model.horizon().is_none())
}

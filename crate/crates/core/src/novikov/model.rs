//! Lattice-graded flow models and their twisted (Novikov) differentials.

use super::convergence::{convergence_profile, ConvergenceProfile};
use super::expsum::{pairing, Class, ExpMatrix, ExpSum, Horizon};
use super::NovikovError;
use crate::scalar::{self, Scalar};
use nalgebra::DMatrix;
use num::complex::Complex64;
use std::collections::{BTreeMap, BTreeSet};

/// Real parts of ⟨g, α⟩ beyond this are refused rather than overflowing.
pub const EVALUATION_BOUND: f64 = 700.0;

/// Default relative tolerance for numerical ranks.
pub const RANK_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPoint {
    pub name: String,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowRecord {
    pub from: String,
    pub to: String,
    pub class: Class,
    pub count: i64,
}

/// Critical points, signed flow counts graded by lattice class, and the
/// periods θ of the reference closed 1-form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowModel {
    lattice_rank: usize,
    theta: Vec<Scalar>,
    critical_points: Vec<CriticalPoint>,
    flows: Vec<FlowRecord>,
    horizon: Option<Scalar>,
    generic_only: bool,
}

impl FlowModel {
    /// Validates the table and the identity ∂∘∂ = 0 (below the horizon).
    pub fn new(
        lattice_rank: usize,
        theta: Vec<Scalar>,
        critical_points: Vec<CriticalPoint>,
        flows: Vec<FlowRecord>,
        horizon: Option<Scalar>,
    ) -> Result<Self, NovikovError> {
        let model = FlowModel {
            lattice_rank,
            theta,
            critical_points,
            flows,
            horizon,
            generic_only: false,
        };
        model.validate()?;
        Ok(model)
    }

    /// Marks the model as comparable with its oracle only at generic α.
    pub fn generic_only(mut self, flag: bool) -> Self {
        self.generic_only = flag;
        self
    }

    pub fn is_generic_only(&self) -> bool {
        self.generic_only
    }

    fn validate(&self) -> Result<(), NovikovError> {
        let invalid = |m: String| Err(NovikovError::Invalid(m));
        if self.theta.len() != self.lattice_rank {
            return invalid(format!(
                "theta has length {}, lattice rank is {}",
                self.theta.len(),
                self.lattice_rank
            ));
        }
        let mut names = BTreeMap::new();
        for c in &self.critical_points {
            if names.insert(c.name.as_str(), c.index).is_some() {
                return invalid(format!("duplicate critical point {:?}", c.name));
            }
        }
        let mut seen = BTreeSet::new();
        for (n, f) in self.flows.iter().enumerate() {
            let (Some(&from), Some(&to)) = (names.get(f.from.as_str()), names.get(f.to.as_str())) else {
                return invalid(format!("flow {n}: unknown endpoint {:?} -> {:?}", f.from, f.to));
            };
            if from != to + 1 {
                return invalid(format!("flow {n}: index {from} -> {to} does not drop by one"));
            }
            if f.class.len() != self.lattice_rank {
                return invalid(format!("flow {n}: class has length {}", f.class.len()));
            }
            if f.count == 0 {
                return invalid(format!("flow {n}: zero count"));
            }
            if !seen.insert((f.from.as_str(), f.to.as_str(), f.class.clone())) {
                return invalid(format!("flow {n}: repeated class for {} -> {}", f.from, f.to));
            }
            if let Some(h) = self.horizon_spec() {
                if !h.admits(&f.class) {
                    return invalid(format!("flow {n}: class beyond the declared horizon"));
                }
            }
        }
        let d = self.differential_exp();
        for k in 1..d.len() {
            let sq = d[k - 1].mul(&d[k]);
            if let Some((row, col, v)) = sq.first_nonzero() {
                return Err(NovikovError::NotComplex {
                    degree: k + 1,
                    row,
                    col,
                    value: v.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn theta(&self) -> &[Scalar] {
        &self.theta
    }

    pub fn critical_points(&self) -> &[CriticalPoint] {
        &self.critical_points
    }

    pub fn flows(&self) -> &[FlowRecord] {
        &self.flows
    }

    pub fn horizon(&self) -> Option<&Scalar> {
        self.horizon.as_ref()
    }

    /// Truncation in the θ direction, if the table is declared incomplete.
    pub fn horizon_spec(&self) -> Option<Horizon> {
        self.horizon.as_ref().map(|b| Horizon {
            direction: self.theta.clone(),
            bound: b.clone(),
        })
    }

    pub fn max_index(&self) -> usize {
        self.critical_points.iter().map(|c| c.index).max().unwrap_or(0)
    }

    /// Names of the critical points of each index, in declaration order.
    pub fn graded_names(&self) -> Vec<Vec<String>> {
        let mut out = vec![Vec::new(); self.max_index() + 1];
        for c in &self.critical_points {
            out[c.index].push(c.name.clone());
        }
        out
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.graded_names().iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.critical_points.iter().find(|c| c.name == name).map(|c| c.index)
    }

    /// ∂_k : C_{k+1} → C_k for k = 0..max_index, entries Σ n·exp⟨g, ·⟩.
    pub fn differential_exp(&self) -> Vec<ExpMatrix> {
        let graded = self.graded_names();
        let pos: BTreeMap<&str, usize> = graded
            .iter()
            .flat_map(|names| names.iter().enumerate().map(|(i, n)| (n.as_str(), i)))
            .collect();
        let horizon = self.horizon_spec();
        let mut d: Vec<ExpMatrix> = (0..graded.len().saturating_sub(1))
            .map(|k| {
                ExpMatrix::zeros(graded[k].len(), graded[k + 1].len(), self.lattice_rank).with_horizon(horizon.as_ref())
            })
            .collect();
        for f in &self.flows {
            let k = self.index_of(&f.to).expect("validated endpoint");
            let (row, col) = (pos[f.to.as_str()], pos[f.from.as_str()]);
            let term = ExpSum::monomial(f.class.clone(), scalar::int(f.count));
            let entry = d[k].get(row, col).add(&term);
            d[k].set(row, col, entry);
        }
        d
    }

    /// Σ |count| per unit shell of ⟨class, θ⟩, starting at the lowest shell.
    pub fn shell_counts(&self) -> Vec<f64> {
        let periods: Vec<f64> = self
            .flows
            .iter()
            .map(|f| scalar::to_f64(&pairing(&f.class, &self.theta)))
            .collect();
        let Some(lo) = periods.iter().copied().reduce(f64::min) else {
            return Vec::new();
        };
        let lo = lo.floor();
        let mut shells: Vec<f64> = Vec::new();
        for (f, p) in self.flows.iter().zip(&periods) {
            let s = (p - lo).floor() as usize;
            if shells.len() <= s {
                shells.resize(s + 1, 0.0);
            }
            shells[s] += f.count.unsigned_abs() as f64;
        }
        shells
    }

    pub fn convergence(&self) -> ConvergenceProfile {
        convergence_profile(self)
    }

    /// s with Re α = −s·θ + (component orthogonal to θ).
    pub fn decay_rate(&self, alpha: &[Complex64]) -> f64 {
        let theta: Vec<f64> = self.theta.iter().map(scalar::to_f64).collect();
        let norm: f64 = theta.iter().map(|x| x * x).sum();
        if norm == 0.0 {
            return f64::INFINITY;
        }
        -theta.iter().zip(alpha).map(|(t, a)| t * a.re).sum::<f64>() / norm
    }

    /// Evaluated ∂_α, refusing α outside the convergence region of an
    /// incomplete table.
    pub fn novikov_differential(&self, alpha: &[Complex64]) -> Result<Vec<DMatrix<Complex64>>, NovikovError> {
        if alpha.len() != self.lattice_rank {
            return Err(NovikovError::Length(self.lattice_rank, alpha.len()));
        }
        let profile = self.convergence();
        let s = self.decay_rate(alpha);
        if profile.diverges_at(s) {
            return Err(NovikovError::Divergent {
                s,
                rho: profile.rho_hat,
            });
        }
        evaluate_all(&self.differential_exp(), alpha)
    }

    pub fn betti(&self, alpha: &[Complex64]) -> Result<Vec<usize>, NovikovError> {
        let d = self.novikov_differential(alpha)?;
        Ok(betti_numbers(&self.cell_counts(), &d, RANK_TOLERANCE))
    }

    pub fn euler_characteristic(&self) -> i64 {
        euler(&self.cell_counts())
    }
}

pub(crate) fn evaluate_all(d: &[ExpMatrix], alpha: &[Complex64]) -> Result<Vec<DMatrix<Complex64>>, NovikovError> {
    let worst = d.iter().map(|m| m.max_real_exponent(alpha)).fold(0.0, f64::max);
    if worst > EVALUATION_BOUND {
        return Err(NovikovError::Overflow(worst, EVALUATION_BOUND));
    }
    Ok(d.iter().map(|m| m.evaluate(alpha)).collect())
}

/// b_k = dim C_k − rank ∂_{k−1} − rank ∂_k with ∂_k : C_{k+1} → C_k.
pub fn betti_numbers(cells: &[usize], d: &[DMatrix<Complex64>], tol: f64) -> Vec<usize> {
    let ranks: Vec<usize> = d.iter().map(|m| super::expsum::numerical_rank(m, tol)).collect();
    (0..cells.len())
        .map(|k| {
            let out = if k > 0 {
                ranks.get(k - 1).copied().unwrap_or(0)
            } else {
                0
            };
            let inc = ranks.get(k).copied().unwrap_or(0);
            cells[k] - out - inc
        })
        .collect()
}

pub fn euler(cells: &[usize]) -> i64 {
    cells
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// exp⟨γ, α⟩.
pub fn monodromy(alpha: &[Complex64], gamma: &[Scalar]) -> Result<Complex64, NovikovError> {
    if alpha.len() != gamma.len() {
        return Err(NovikovError::Length(gamma.len(), alpha.len()));
    }
    Ok(super::expsum::pairing_complex(gamma, alpha).exp())
}

impl FlowRecord {
    pub fn new(from: &str, to: &str, class: &[i64], count: i64) -> Self {
        FlowRecord {
            from: from.into(),
            to: to.into(),
            class: class.iter().map(|&x| scalar::int(x)).collect(),
            count,
        }
    }
}

impl CriticalPoint {
    pub fn new(name: &str, index: usize) -> Self {
        CriticalPoint {
            name: name.into(),
            index,
        }
    }
}

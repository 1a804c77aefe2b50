//! Class-graded count tables between named bases, their exponential
//! "hat" transforms, and continuation-map checks.

use super::expsum::{Class, ExpMatrix, ExpSum};
use super::model::{FlowModel, RANK_TOLERANCE};
use super::NovikovError;
use crate::scalar::{self, Scalar};
use nalgebra::DMatrix;
use num::complex::Complex64;
use num::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRecord {
    pub from: String,
    pub to: String,
    pub class: Class,
    pub count: Scalar,
}

/// Counts T^g_{pq} from `sources` to `targets`.
#[derive(Clone, Debug)]
pub struct EquivariantTable {
    pub rank: usize,
    pub sources: Vec<String>,
    pub targets: Vec<String>,
    pub records: Vec<TableRecord>,
}

type Key = (String, String, Class);

impl EquivariantTable {
    pub fn new(
        rank: usize,
        sources: Vec<String>,
        targets: Vec<String>,
        records: Vec<TableRecord>,
    ) -> Result<Self, NovikovError> {
        for r in &records {
            if !sources.contains(&r.from) || !targets.contains(&r.to) {
                return Err(NovikovError::Invalid(format!(
                    "record {} -> {} names an unknown basis element",
                    r.from, r.to
                )));
            }
            if r.class.len() != rank {
                return Err(NovikovError::Length(rank, r.class.len()));
            }
        }
        Ok(EquivariantTable {
            rank,
            sources,
            targets,
            records,
        })
    }

    /// Class 0, count 1 on the diagonal.
    pub fn identity(names: &[String], rank: usize) -> Self {
        let records = names
            .iter()
            .map(|n| TableRecord {
                from: n.clone(),
                to: n.clone(),
                class: vec![scalar::zero(); rank],
                count: scalar::one(),
            })
            .collect();
        EquivariantTable {
            rank,
            sources: names.to_vec(),
            targets: names.to_vec(),
            records,
        }
    }

    /// The differential of a flow model as a table from all points to all points.
    pub fn of_differential(model: &FlowModel) -> Self {
        let names: Vec<String> = model.critical_points().iter().map(|c| c.name.clone()).collect();
        let records = model
            .flows()
            .iter()
            .map(|f| TableRecord {
                from: f.from.clone(),
                to: f.to.clone(),
                class: f.class.clone(),
                count: scalar::int(f.count),
            })
            .collect();
        EquivariantTable {
            rank: model.lattice_rank(),
            sources: names.clone(),
            targets: names,
            records,
        }
    }

    /// Records merged by (from, to, class) with zero totals dropped.
    pub fn canonical(&self) -> BTreeMap<Key, Scalar> {
        let mut m: BTreeMap<Key, Scalar> = BTreeMap::new();
        for r in &self.records {
            *m.entry((r.from.clone(), r.to.clone(), r.class.clone()))
                .or_insert_with(Scalar::zero) += &r.count;
        }
        m.retain(|_, v| !v.is_zero());
        m
    }

    /// Equal as tables: same bases and the same canonical records.
    pub fn same_as(&self, other: &EquivariantTable) -> bool {
        self.sources == other.sources && self.targets == other.targets && self.canonical() == other.canonical()
    }

    /// The table of "self, then next": (p→q, g, n) with (q→r, h, m) gives
    /// (p→r, g + h, n·m).
    pub fn then(&self, next: &EquivariantTable) -> Result<EquivariantTable, NovikovError> {
        if self.targets != next.sources || self.rank != next.rank {
            return Err(NovikovError::Invalid("tables are not composable".into()));
        }
        let mut by_source: BTreeMap<&str, Vec<&TableRecord>> = BTreeMap::new();
        for r in &next.records {
            by_source.entry(r.from.as_str()).or_default().push(r);
        }
        let mut acc: BTreeMap<Key, Scalar> = BTreeMap::new();
        for a in &self.records {
            for b in by_source.get(a.to.as_str()).into_iter().flatten() {
                let class: Class = a.class.iter().zip(&b.class).map(|(x, y)| x + y).collect();
                *acc.entry((a.from.clone(), b.to.clone(), class))
                    .or_insert_with(Scalar::zero) += &a.count * &b.count;
            }
        }
        let records = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((from, to, class), count)| TableRecord { from, to, class, count })
            .collect();
        Ok(EquivariantTable {
            rank: self.rank,
            sources: self.sources.clone(),
            targets: next.targets.clone(),
            records,
        })
    }

    /// Exact hat transform: entry [target][source] = Σ n · exp⟨g, ·⟩.
    pub fn hat_exp(&self) -> ExpMatrix {
        let row: BTreeMap<&str, usize> = self.targets.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let col: BTreeMap<&str, usize> = self.sources.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut m = ExpMatrix::zeros(self.targets.len(), self.sources.len(), self.rank);
        for r in &self.records {
            let (i, j) = (row[r.to.as_str()], col[r.from.as_str()]);
            let v = m.get(i, j).add(&ExpSum::monomial(r.class.clone(), r.count.clone()));
            m.set(i, j, v);
        }
        m
    }

    pub fn hat(&self, alpha: &[Complex64]) -> DMatrix<Complex64> {
        self.hat_exp().evaluate(alpha)
    }

    /// Restriction to the given source and target names.
    pub fn block(&self, sources: &[String], targets: &[String]) -> EquivariantTable {
        let records = self
            .records
            .iter()
            .filter(|r| sources.contains(&r.from) && targets.contains(&r.to))
            .cloned()
            .collect();
        EquivariantTable {
            rank: self.rank,
            sources: sources.to_vec(),
            targets: targets.to_vec(),
            records,
        }
    }
}

/// Index-preserving table Ψ from the points of `F₀` to those of `F₁`.
#[derive(Clone, Debug)]
pub struct ContinuationData {
    pub table: EquivariantTable,
}

impl ContinuationData {
    pub fn new(f0: &FlowModel, f1: &FlowModel, table: EquivariantTable) -> Result<Self, NovikovError> {
        for r in &table.records {
            match (f0.index_of(&r.from), f1.index_of(&r.to)) {
                (Some(a), Some(b)) if a == b => {}
                (Some(a), Some(b)) => {
                    return Err(NovikovError::Invalid(format!(
                        "continuation {} -> {} changes index {a} -> {b}",
                        r.from, r.to
                    )));
                }
                _ => {
                    return Err(NovikovError::Invalid(format!(
                        "continuation {} -> {} names an unknown point",
                        r.from, r.to
                    )))
                }
            }
        }
        Ok(ContinuationData { table })
    }

    pub fn identity(f: &FlowModel) -> Self {
        let names: Vec<String> = f.critical_points().iter().map(|c| c.name.clone()).collect();
        ContinuationData {
            table: EquivariantTable::identity(&names, f.lattice_rank()),
        }
    }

    /// Ψ restricted to index-k points, as an exact matrix.
    pub fn graded(&self, f0: &FlowModel, f1: &FlowModel) -> Vec<ExpMatrix> {
        let (g0, g1) = (f0.graded_names(), f1.graded_names());
        (0..g0.len().max(g1.len()))
            .map(|k| {
                let s = g0.get(k).cloned().unwrap_or_default();
                let t = g1.get(k).cloned().unwrap_or_default();
                self.table.block(&s, &t).hat_exp()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuationReport {
    /// ∂¹ Ψ = Ψ ∂⁰ as exact exponential-sum matrices.
    pub chain_map: bool,
    /// max |∂¹_α Ψ̂_α − Ψ̂_α ∂⁰_α| at the evaluation point.
    pub residual: f64,
    /// Set when both differentials vanish: whether Ψ̂_α is invertible.
    pub invertible: Option<bool>,
    pub determinant: Complex64,
}

pub fn continuation_check(
    f0: &FlowModel,
    f1: &FlowModel,
    psi: &ContinuationData,
    alpha: &[Complex64],
) -> Result<ContinuationReport, NovikovError> {
    let d0 = f0.differential_exp();
    let d1 = f1.differential_exp();
    let p = psi.graded(f0, f1);
    let mut residual: f64 = 0.0;
    for k in 0..d0.len().min(d1.len()) {
        let lhs = d1[k].mul(&p[k + 1]);
        let rhs = p[k].mul(&d0[k]);
        if let Some((row, col, v)) = lhs.sub(&rhs).first_nonzero() {
            return Err(NovikovError::ChainMap {
                degree: k + 1,
                row,
                col,
                value: v.to_string(),
            });
        }
        let diff = lhs.evaluate(alpha) - rhs.evaluate(alpha);
        residual = residual.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let full = psi.table.hat(alpha);
    let determinant = if full.is_square() {
        full.determinant()
    } else {
        Complex64::zero()
    };
    let trivial = d0.iter().all(ExpMatrix::is_zero) && d1.iter().all(ExpMatrix::is_zero);
    let invertible =
        trivial.then(|| full.is_square() && super::expsum::numerical_rank(&full, RANK_TOLERANCE) == full.nrows());
    Ok(ContinuationReport {
        chain_map: true,
        residual,
        invertible,
        determinant,
    })
}

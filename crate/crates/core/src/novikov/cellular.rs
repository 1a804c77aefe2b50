//! Cell complexes with rank-one local-system coefficients: the oracle for
//! twisted cohomology ranks.

use super::expsum::{Class, ExpMatrix, ExpSum};
use super::model::{betti_numbers, euler, evaluate_all, RANK_TOLERANCE};
use super::NovikovError;
use crate::scalar::{self, Scalar};
use num::complex::Complex64;

/// Cells per dimension and boundaries ∂_k : C_{k+1} → C_k over the group ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSystemComplex {
    rank: usize,
    cells: Vec<usize>,
    boundaries: Vec<ExpMatrix>,
}

impl LocalSystemComplex {
    pub fn new(rank: usize, cells: Vec<usize>, boundaries: Vec<ExpMatrix>) -> Result<Self, NovikovError> {
        if boundaries.len() + 1 != cells.len() {
            return Err(NovikovError::Invalid(
                "need one boundary per adjacent pair of dimensions".into(),
            ));
        }
        for (k, b) in boundaries.iter().enumerate() {
            if b.nrows() != cells[k] || b.ncols() != cells[k + 1] || b.lattice_rank() != rank {
                return Err(NovikovError::Invalid(format!("boundary {k} has the wrong shape")));
            }
        }
        for k in 1..boundaries.len() {
            if let Some((row, col, v)) = boundaries[k - 1].mul(&boundaries[k]).first_nonzero() {
                return Err(NovikovError::NotComplex {
                    degree: k + 1,
                    row,
                    col,
                    value: v.to_string(),
                });
            }
        }
        Ok(LocalSystemComplex {
            rank,
            cells,
            boundaries,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn boundaries(&self) -> &[ExpMatrix] {
        &self.boundaries
    }

    /// Ranks of twisted (co)homology with monodromy exp⟨·, α⟩.
    pub fn betti(&self, alpha: &[Complex64]) -> Result<Vec<usize>, NovikovError> {
        if alpha.len() != self.rank {
            return Err(NovikovError::Length(self.rank, alpha.len()));
        }
        let d = evaluate_all(&self.boundaries, alpha)?;
        Ok(betti_numbers(&self.cells, &d, RANK_TOLERANCE))
    }

    pub fn euler_characteristic(&self) -> i64 {
        euler(&self.cells)
    }

    /// Cellular product with ∂(a⊗b) = ∂a⊗b + (−1)^{|a|} a⊗∂b; lattice classes
    /// are concatenated.
    pub fn product(&self, other: &LocalSystemComplex) -> LocalSystemComplex {
        let rank = self.rank + other.rank;
        let top = self.cells.len() + other.cells.len() - 2;
        // cells of dimension d: (p, i, q, j) with p + q = d
        let index: Vec<Vec<(usize, usize, usize, usize)>> = (0..=top)
            .map(|d| {
                let mut v = Vec::new();
                for p in 0..self.cells.len() {
                    let Some(q) = d.checked_sub(p) else { continue };
                    if q >= other.cells.len() {
                        continue;
                    }
                    for i in 0..self.cells[p] {
                        for j in 0..other.cells[q] {
                            v.push((p, i, q, j));
                        }
                    }
                }
                v
            })
            .collect();
        let pad_left = |s: &ExpSum| pad(s, 0, rank);
        let pad_right = |s: &ExpSum| pad(s, self.rank, rank);
        let mut boundaries = Vec::new();
        for d in 0..top {
            let (lower, upper) = (&index[d], &index[d + 1]);
            let mut m = ExpMatrix::zeros(lower.len(), upper.len(), rank);
            for (col, &(p, i, q, j)) in upper.iter().enumerate() {
                if p > 0 {
                    for i2 in 0..self.cells[p - 1] {
                        let e = self.boundaries[p - 1].get(i2, i);
                        if e.is_zero() {
                            continue;
                        }
                        let row = lower.iter().position(|c| *c == (p - 1, i2, q, j)).unwrap();
                        let v = m.get(row, col).add(&pad_left(e));
                        m.set(row, col, v);
                    }
                }
                if q > 0 {
                    for j2 in 0..other.cells[q - 1] {
                        let e = other.boundaries[q - 1].get(j2, j);
                        if e.is_zero() {
                            continue;
                        }
                        let row = lower.iter().position(|c| *c == (p, i, q - 1, j2)).unwrap();
                        let mut t = pad_right(e);
                        if p % 2 == 1 {
                            t = t.neg();
                        }
                        let v = m.get(row, col).add(&t);
                        m.set(row, col, v);
                    }
                }
            }
            boundaries.push(m);
        }
        let cells = index.iter().map(Vec::len).collect();
        LocalSystemComplex::new(rank, cells, boundaries).expect("product of complexes is a complex")
    }
}

fn pad(s: &ExpSum, offset: usize, rank: usize) -> ExpSum {
    let mut out = ExpSum::zero(rank);
    for (g, c) in s.terms() {
        let mut class: Class = vec![Scalar::from_integer(0.into()); rank];
        for (k, x) in g.iter().enumerate() {
            class[offset + k] = x.clone();
        }
        out.add_term(class, c.clone());
    }
    out
}

fn t_power(rank: usize, axis: usize, power: i64) -> ExpSum {
    let mut class = vec![scalar::zero(); rank];
    class[axis] = scalar::int(power);
    ExpSum::monomial(class, scalar::one())
}

/// One vertex, one edge, ∂e = (1 − t)v.
pub fn circle() -> LocalSystemComplex {
    let mut d = ExpMatrix::zeros(1, 1, 1);
    d.set(0, 0, ExpSum::one(1).sub(&t_power(1, 0, 1)));
    LocalSystemComplex::new(1, vec![1, 1], vec![d]).unwrap()
}

/// Two vertices, two edges: ∂e₁ = v₂ − v₁, ∂e₂ = t·v₁ − v₂.
pub fn subdivided_circle() -> LocalSystemComplex {
    let one = ExpSum::one(1);
    let mut d = ExpMatrix::zeros(2, 2, 1);
    d.set(0, 0, one.neg());
    d.set(1, 0, one.clone());
    d.set(0, 1, t_power(1, 0, 1));
    d.set(1, 1, one.neg());
    LocalSystemComplex::new(1, vec![2, 2], vec![d]).unwrap()
}

pub fn torus() -> LocalSystemComplex {
    circle().product(&circle())
}

/// Wedge of `n` circles: ∂e_i = (t_i − 1)v.
pub fn bouquet(n: usize) -> LocalSystemComplex {
    let mut d = ExpMatrix::zeros(1, n, n);
    for i in 0..n {
        d.set(0, i, t_power(n, i, 1).sub(&ExpSum::one(n)));
    }
    LocalSystemComplex::new(n, vec![1, n], vec![d]).unwrap()
}

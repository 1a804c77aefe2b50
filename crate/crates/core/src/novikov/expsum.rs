//! Finite exponential sums Σ c_g · exp⟨g, ·⟩ over a rational lattice, with an
//! optional truncation horizon, and matrices over them.

use crate::scalar::{self, Scalar};
use nalgebra::DMatrix;
use num::complex::Complex64;
use num::{One, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

/// Lattice class: a rational vector of the lattice rank.
pub type Class = Vec<Scalar>;

pub fn pairing(class: &[Scalar], covector: &[Scalar]) -> Scalar {
    crate::linalg::dot(class, covector)
}

/// Re-evaluates ⟨class, α⟩ for a complex covector.
pub fn pairing_complex(class: &[Scalar], alpha: &[Complex64]) -> Complex64 {
    class.iter().zip(alpha).map(|(g, a)| a * scalar::to_f64(g)).sum()
}

/// Keeps only classes with ⟨class, direction⟩ ≤ bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Horizon {
    pub direction: Vec<Scalar>,
    pub bound: Scalar,
}

impl Horizon {
    pub fn admits(&self, class: &[Scalar]) -> bool {
        pairing(class, &self.direction) <= self.bound
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ExpSum {
    rank: usize,
    terms: BTreeMap<Class, Scalar>,
    horizon: Option<Horizon>,
}

impl ExpSum {
    pub fn zero(rank: usize) -> Self {
        ExpSum {
            rank,
            terms: BTreeMap::new(),
            horizon: None,
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![Scalar::zero(); rank], Scalar::one())
    }

    pub fn monomial(class: Class, coeff: Scalar) -> Self {
        let mut s = Self::zero(class.len());
        s.add_term(class, coeff);
        s
    }

    pub fn with_horizon(mut self, horizon: Option<Horizon>) -> Self {
        self.horizon = horizon;
        self.truncate();
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn horizon(&self) -> Option<&Horizon> {
        self.horizon.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Class, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, class: &[Scalar]) -> Scalar {
        self.terms.get(class).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, class: Class, coeff: Scalar) {
        assert_eq!(class.len(), self.rank, "class length must equal lattice rank");
        if coeff.is_zero() || self.horizon.as_ref().is_some_and(|h| !h.admits(&class)) {
            return;
        }
        match self.terms.entry(class) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn truncate(&mut self) {
        if let Some(h) = &self.horizon {
            self.terms.retain(|c, _| h.admits(c));
        }
    }

    fn merged_horizon(&self, other: &ExpSum) -> Option<Horizon> {
        match (&self.horizon, &other.horizon) {
            (Some(a), Some(b)) => {
                debug_assert_eq!(a.direction, b.direction);
                Some(if a.bound <= b.bound { a.clone() } else { b.clone() })
            }
            (Some(a), None) => Some(a.clone()),
            (None, b) => b.clone(),
        }
    }

    pub fn add(&self, other: &ExpSum) -> ExpSum {
        let mut out = self.clone();
        out.horizon = self.merged_horizon(other);
        out.truncate();
        for (c, x) in &other.terms {
            out.add_term(c.clone(), x.clone());
        }
        out
    }

    pub fn neg(&self) -> ExpSum {
        self.scale(&-Scalar::one())
    }

    pub fn sub(&self, other: &ExpSum) -> ExpSum {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> ExpSum {
        let mut out = ExpSum::zero(self.rank);
        out.horizon = self.horizon.clone();
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(g, x)| (g.clone(), x * c)).collect();
        }
        out
    }

    /// Multiplies by exp⟨shift, ·⟩.
    pub fn shift(&self, shift: &[Scalar]) -> ExpSum {
        let mut out = ExpSum::zero(self.rank);
        out.horizon = self.horizon.clone();
        for (g, x) in &self.terms {
            let moved: Class = g.iter().zip(shift).map(|(a, b)| a + b).collect();
            out.add_term(moved, x.clone());
        }
        out
    }

    /// Convolution product; terms beyond the horizon are dropped.
    pub fn mul(&self, other: &ExpSum) -> ExpSum {
        let mut out = ExpSum::zero(self.rank);
        out.horizon = self.merged_horizon(other);
        for (g, x) in &self.terms {
            for (h, y) in &other.terms {
                let c: Class = g.iter().zip(h).map(|(a, b)| a + b).collect();
                out.add_term(c, x * y);
            }
        }
        out
    }

    /// Σ c_g · exp⟨g, α⟩.
    pub fn evaluate(&self, alpha: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(g, c)| pairing_complex(g, alpha).exp() * scalar::to_f64(c))
            .sum()
    }

    /// Largest |⟨g, Re α⟩| over stored classes.
    pub fn max_real_exponent(&self, alpha: &[Complex64]) -> f64 {
        self.terms
            .keys()
            .map(|g| pairing_complex(g, alpha).re.abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, c)| format!("{}·e{}", scalar::format(c), scalar::Row(g)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Dense matrix of exponential sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpMatrix {
    rows: usize,
    cols: usize,
    rank: usize,
    entries: Vec<ExpSum>,
}

impl ExpMatrix {
    pub fn zeros(rows: usize, cols: usize, rank: usize) -> Self {
        ExpMatrix {
            rows,
            cols,
            rank,
            entries: vec![ExpSum::zero(rank); rows * cols],
        }
    }

    pub fn identity(n: usize, rank: usize) -> Self {
        let mut m = Self::zeros(n, n, rank);
        for i in 0..n {
            m.entries[i * n + i] = ExpSum::one(rank);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn lattice_rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> &ExpSum {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut ExpSum {
        &mut self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExpSum) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExpSum::is_zero)
    }

    pub fn with_horizon(&self, horizon: Option<&Horizon>) -> ExpMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.clone().with_horizon(horizon.cloned());
        }
        out
    }

    pub fn mul(&self, other: &ExpMatrix) -> ExpMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = ExpMatrix::zeros(self.rows, other.cols, self.rank);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ExpSum::zero(self.rank);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn sub(&self, other: &ExpMatrix) -> ExpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExpMatrix {
            rows: self.rows,
            cols: self.cols,
            rank: self.rank,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn evaluate(&self, alpha: &[Complex64]) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).evaluate(alpha))
    }

    pub fn max_real_exponent(&self, alpha: &[Complex64]) -> f64 {
        self.entries
            .iter()
            .map(|e| e.max_real_exponent(alpha))
            .fold(0.0, f64::max)
    }

    /// First nonzero entry, for diagnostics.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &ExpSum)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, self.get(i, j)))
            .find(|(_, _, e)| !e.is_zero())
    }
}

/// Numerical rank of a complex matrix: singular values above
/// `tol · max(1, σ_max)`.
pub fn numerical_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    let cut = tol * top.max(1.0);
    sv.iter().filter(|&&s| s > cut).count()
}

//! Constant-coefficient alternating forms on R^n (n ≤ 9) with exact
//! rational coefficients.
//!
//! A basis monomial e^{i₁…i_k} is stored as a bitmask of its indices.
//! Indices are 1-based in every public constructor and accessor, matching
//! the usual `dx₁…dxₙ` labelling; bit `i-1` of a blade is coordinate `i`.

use crate::linalg::RatMatrix;
use crate::scalar::{self, Scalar};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub const MAX_DIM: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} outside 1..={MAX_DIM}")]
    BadDimension(usize),
    #[error("degree {degree} exceeds dimension {dim}")]
    BadDegree { dim: usize, degree: usize },
    #[error("index tuple {0:?} is not strictly increasing within range")]
    BadIndices(Vec<usize>),
    #[error("metric is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("metric determinant {0} has no rational square root")]
    IrrationalVolume(String),
    #[error("spanning vectors of the plane are linearly dependent")]
    DegeneratePlane,
}

/// Bitmask of coordinate indices (bit 0 = coordinate 1).
pub type Blade = u16;

fn blade_of(indices: &[usize], dim: usize) -> Result<Blade, FormError> {
    let mut b: Blade = 0;
    let mut prev = 0;
    for &i in indices {
        if i <= prev || i > dim {
            return Err(FormError::BadIndices(indices.to_vec()));
        }
        b |= 1 << (i - 1);
        prev = i;
    }
    Ok(b)
}

/// 1-based indices of a blade in increasing order.
pub fn blade_indices(b: Blade) -> Vec<usize> {
    (0..16).filter(|i| b >> i & 1 == 1).map(|i| i + 1).collect()
}

/// Sign of e^{a} ∧ e^{b} relative to e^{a∪b}; zero blades overlap.
fn wedge_sign(a: Blade, b: Blade) -> i32 {
    debug_assert_eq!(a & b, 0);
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All degree-`k` blades in R^dim, in lexicographic order of index tuples.
pub fn basis_blades(dim: usize, k: usize) -> Vec<Blade> {
    fn rec(start: usize, dim: usize, k: usize, cur: Blade, out: &mut Vec<Blade>) {
        if k == 0 {
            out.push(cur);
            return;
        }
        for i in start..dim {
            if dim - i >= k {
                rec(i + 1, dim, k - 1, cur | (1 << i), out);
            }
        }
    }
    let mut out = Vec::new();
    rec(0, dim, k, 0, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Sparse exact alternating form of fixed degree on R^dim.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KForm {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Blade, Scalar>,
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&dim) && degree <= dim,
            "bad shape ({dim}, {degree})"
        );
        KForm {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant 0-form `c`.
    pub fn scalar(dim: usize, c: Scalar) -> Self {
        let mut f = Self::zero(dim, 0);
        f.insert(0, c);
        f
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, Scalar::one())
    }

    /// `e^{i}` for 1-based `i`.
    pub fn basis1(dim: usize, i: usize) -> Self {
        Self::monomial(dim, &[i], Scalar::one()).expect("index in range")
    }

    /// `c · e^{i₁…i_k}` with 1-based strictly increasing indices.
    pub fn monomial(dim: usize, indices: &[usize], c: Scalar) -> Result<Self, FormError> {
        check_dim(dim)?;
        let b = blade_of(indices, dim)?;
        let mut f = Self::zero(dim, indices.len());
        f.insert(b, c);
        Ok(f)
    }

    /// Builds a form from `(indices, coefficient)` pairs; repeated tuples add.
    pub fn from_terms<'a>(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (&'a [usize], Scalar)>,
    ) -> Result<Self, FormError> {
        check_dim(dim)?;
        if degree > dim {
            return Err(FormError::BadDegree { dim, degree });
        }
        let mut f = Self::zero(dim, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(FormError::BadIndices(idx.to_vec()));
            }
            let b = blade_of(idx, dim)?;
            f.insert(b, c);
        }
        Ok(f)
    }

    /// Shorthand for integer-coefficient forms in tests and fixtures.
    pub fn from_int_terms(dim: usize, degree: usize, terms: &[(&[usize], i64)]) -> Self {
        Self::from_terms(dim, degree, terms.iter().map(|(i, c)| (*i, scalar::int(*c)))).expect("valid integer terms")
    }

    /// The standard volume form e^{1…n}.
    pub fn volume(dim: usize) -> Self {
        let mut f = Self::zero(dim, dim);
        f.insert(full_blade(dim), Scalar::one());
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, indices: &[usize]) -> Scalar {
        blade_of(indices, self.dim)
            .ok()
            .and_then(|b| self.coeffs.get(&b).cloned())
            .unwrap_or_else(Scalar::zero)
    }

    pub fn coeff_blade(&self, b: Blade) -> Scalar {
        self.coeffs.get(&b).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of the top form e^{1…n}; zero unless degree = dim.
    pub fn top_coeff(&self) -> Scalar {
        if self.degree != self.dim {
            return Scalar::zero();
        }
        self.coeff_blade(full_blade(self.dim))
    }

    /// The scalar value of a 0-form.
    pub fn constant(&self) -> Scalar {
        if self.degree != 0 {
            return Scalar::zero();
        }
        self.coeff_blade(0)
    }

    /// Nonzero terms as (1-based indices, coefficient), lexicographic.
    pub fn terms(&self) -> Vec<(Vec<usize>, Scalar)> {
        let mut out: Vec<_> = self
            .coeffs
            .iter()
            .map(|(b, c)| (blade_indices(*b), c.clone()))
            .collect();
        out.sort();
        out
    }

    pub fn blades(&self) -> impl Iterator<Item = (&Blade, &Scalar)> {
        self.coeffs.iter()
    }

    fn insert(&mut self, b: Blade, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(b).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&b);
        }
    }

    pub fn scale(&self, c: &Scalar) -> KForm {
        if c.is_zero() {
            return Self::zero(self.dim, self.degree);
        }
        KForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(b, x)| (*b, x * c)).collect(),
        }
    }

    /// Sum of same-shape forms; panics on shape mismatch (use `try_add` to check).
    pub fn try_add(&self, other: &KForm) -> Result<KForm, FormError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (b, c) in &other.coeffs {
            out.insert(*b, c.clone());
        }
        Ok(out)
    }

    fn same_shape(&self, other: &KForm) -> Result<(), FormError> {
        if self.dim != other.dim {
            return Err(FormError::DimensionMismatch(self.dim, other.dim));
        }
        if self.degree != other.degree {
            return Err(FormError::BadDegree {
                dim: self.dim,
                degree: other.degree,
            });
        }
        Ok(())
    }

    /// Exterior product. Overflowing degree yields the zero form of degree `dim`.
    pub fn wedge(&self, other: &KForm) -> Result<KForm, FormError> {
        if self.dim != other.dim {
            return Err(FormError::DimensionMismatch(self.dim, other.dim));
        }
        let deg = self.degree + other.degree;
        if deg > self.dim {
            return Ok(Self::zero(self.dim, self.dim));
        }
        let mut out = Self::zero(self.dim, deg);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                if a & b != 0 {
                    continue;
                }
                let v = x * y;
                out.insert(a | b, if wedge_sign(*a, *b) > 0 { v } else { -v });
            }
        }
        Ok(out)
    }

    /// `self ∧ self ∧ …` (`n` factors); `n = 0` gives the constant 1.
    pub fn power(&self, n: usize) -> Result<KForm, FormError> {
        let mut acc = Self::one(self.dim);
        for _ in 0..n {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Interior product `i_v`.
    pub fn contract(&self, v: &[Scalar]) -> Result<KForm, FormError> {
        if v.len() != self.dim {
            return Err(FormError::DimensionMismatch(self.dim, v.len()));
        }
        if self.degree == 0 {
            return Ok(Self::zero(self.dim, 0));
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (b, c) in &self.coeffs {
            let mut rest = *b;
            while rest != 0 {
                let k = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if v[k].is_zero() {
                    continue;
                }
                let below = (b & ((1 << k) - 1)).count_ones();
                let t = c * &v[k];
                out.insert(b & !(1 << k), if below.is_multiple_of(2) { t } else { -t });
            }
        }
        Ok(out)
    }

    /// Contraction with the 1-based coordinate vector `e_i`.
    pub fn contract_basis(&self, i: usize) -> KForm {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i - 1] = Scalar::one();
        self.contract(&v).expect("dimension matches")
    }

    /// Pullback along the linear map R^m → R^dim with matrix `a` (dim × m):
    /// `(a*α)(w₁,…) = α(a w₁, …)`. Functorial: `pullback(α, AB) = pullback(pullback(α, A), B)`.
    pub fn pullback(&self, a: &RatMatrix) -> Result<KForm, FormError> {
        if a.nrows() != self.dim {
            return Err(FormError::DimensionMismatch(self.dim, a.nrows()));
        }
        let m = a.ncols();
        check_dim(m)?;
        if self.degree > m {
            return Ok(Self::zero(m, m));
        }
        let mut out = Self::zero(m, self.degree);
        if self.degree == 0 {
            out.insert(0, self.constant());
            return Ok(out);
        }
        let targets = basis_blades(m, self.degree);
        for (b, c) in &self.coeffs {
            let rows: Vec<usize> = blade_indices(*b).iter().map(|i| i - 1).collect();
            for t in &targets {
                let cols: Vec<usize> = blade_indices(*t).iter().map(|i| i - 1).collect();
                let d = a.minor(&rows, &cols);
                if !d.is_zero() {
                    out.insert(*t, c * d);
                }
            }
        }
        Ok(out)
    }

    /// Restriction to a plane, expressed in the plane's spanning-vector coordinates.
    pub fn restrict(&self, p: &OrientedPlane) -> Result<KForm, FormError> {
        if p.ambient_dim() != self.dim {
            return Err(FormError::DimensionMismatch(self.dim, p.ambient_dim()));
        }
        self.pullback(p.matrix())
    }

    /// Hodge star for `metric` and orientation `sign · e^{1…n}`:
    /// `α ∧ *β = ⟨α, β⟩ · vol_g`.
    pub fn hodge_star(&self, metric: &Metric, orientation: i32) -> Result<KForm, FormError> {
        if metric.dim() != self.dim {
            return Err(FormError::DimensionMismatch(self.dim, metric.dim()));
        }
        let root = metric.volume_factor()?;
        let vol = if orientation < 0 { -root } else { root };
        Ok(metric.raise(self).dual_with_volume(&vol))
    }

    /// `*` given already-raised coefficients and the volume coefficient
    /// `v` (so that the volume form is `v · e^{1…n}`).
    pub fn dual_with_volume(&self, vol: &Scalar) -> KForm {
        let full = full_blade(self.dim);
        let mut out = Self::zero(self.dim, self.dim - self.degree);
        for (b, c) in &self.coeffs {
            let comp = full & !b;
            let v = c * vol;
            out.insert(comp, if wedge_sign(*b, comp) > 0 { v } else { -v });
        }
        out
    }

    /// Derivative at `t = 0` of `pullback(self, Id + t·E_ab)` where `E_ab`
    /// is the matrix unit (0-based): `e^b ∧ i_{e_a} self`.
    pub fn gl_derivative(&self, a: usize, b: usize) -> KForm {
        let eb = KForm::basis1(self.dim, b + 1);
        eb.wedge(&self.contract_basis(a + 1)).expect("same dimension")
    }

    /// Euclidean Hodge star with the standard orientation.
    pub fn star(&self) -> KForm {
        self.hodge_star(&Metric::euclidean(self.dim), 1)
            .expect("euclidean metric")
    }

    /// Euclidean inner product `Σ a_I b_I` over increasing index tuples.
    pub fn inner(&self, other: &KForm) -> Scalar {
        let mut acc = Scalar::zero();
        for (b, x) in &self.coeffs {
            if let Some(y) = other.coeffs.get(b) {
                acc += x * y;
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> Scalar {
        self.inner(self)
    }

    /// Dense coefficient vector in the `basis_blades(dim, degree)` order.
    pub fn to_vector(&self) -> Vec<Scalar> {
        basis_blades(self.dim, self.degree)
            .iter()
            .map(|b| self.coeff_blade(*b))
            .collect()
    }

    pub fn from_vector(dim: usize, degree: usize, v: &[Scalar]) -> KForm {
        let blades = basis_blades(dim, degree);
        assert_eq!(blades.len(), v.len(), "vector length is C({dim},{degree})");
        let mut f = Self::zero(dim, degree);
        for (b, c) in blades.iter().zip(v) {
            f.insert(*b, c.clone());
        }
        f
    }

    /// Evaluates on `degree` float vectors of length `dim`.
    pub fn evaluate_f64(&self, vectors: &[Vec<f64>]) -> f64 {
        assert_eq!(vectors.len(), self.degree);
        let k = self.degree;
        let mut acc = 0.0;
        for (b, c) in &self.coeffs {
            let idx: Vec<usize> = blade_indices(*b).iter().map(|i| i - 1).collect();
            let m = nalgebra::DMatrix::from_fn(k, k, |r, s| vectors[s][idx[r]]);
            acc += scalar::to_f64(c) * m.determinant();
        }
        acc
    }

    /// Exact evaluation on `degree` rational vectors.
    pub fn evaluate(&self, vectors: &[Vec<Scalar>]) -> Scalar {
        assert_eq!(vectors.len(), self.degree);
        let cols: Vec<Vec<Scalar>> = vectors.to_vec();
        let a = RatMatrix::from_fn(self.dim, self.degree, |i, j| cols[j][i].clone());
        self.pullback(&a)
            .map(|f| f.top_coeff())
            .unwrap_or_else(|_| Scalar::zero())
    }

    /// Replaces 1-based coordinate `i` by `relabel[i-1]`; `relabel` must be a permutation.
    pub fn relabel(&self, relabel: &[usize]) -> KForm {
        assert_eq!(relabel.len(), self.dim);
        let p = RatMatrix::from_fn(self.dim, self.dim, |r, c| {
            if relabel[c] == r + 1 {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        // e^{i} ↦ e^{relabel(i)} is the pullback along the transpose permutation.
        self.pullback(&p.transpose()).expect("square permutation")
    }

    /// Extends to R^{dim+extra}, new coordinates appended at the end.
    pub fn extend(&self, extra: usize) -> KForm {
        let mut out = Self::zero(self.dim + extra, self.degree);
        out.coeffs = self.coeffs.clone();
        out
    }
}

fn check_dim(dim: usize) -> Result<(), FormError> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(FormError::BadDimension(dim))
    }
}

fn full_blade(dim: usize) -> Blade {
    ((1u32 << dim) - 1) as Blade
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm(dim={}, deg={}; {})", self.dim, self.degree, self)
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in self.terms().iter().enumerate() {
            let sign = if c.is_negative() {
                "-"
            } else if n > 0 {
                "+"
            } else {
                ""
            };
            if n > 0 {
                write!(f, " ")?;
            }
            let mag = scalar::format(&c.abs());
            let label: String = idx.iter().map(|i| i.to_string()).collect();
            if idx.is_empty() {
                write!(f, "{sign}{mag}")?;
            } else if c.abs().is_one() {
                write!(f, "{sign}e{label}")?;
            } else {
                write!(f, "{sign}{mag}·e{label}")?;
            }
        }
        Ok(())
    }
}

impl Add for &KForm {
    type Output = KForm;
    fn add(self, rhs: &KForm) -> KForm {
        self.try_add(rhs).expect("forms of equal shape")
    }
}

impl Sub for &KForm {
    type Output = KForm;
    fn sub(self, rhs: &KForm) -> KForm {
        self.try_add(&-rhs).expect("forms of equal shape")
    }
}

impl Neg for &KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self.scale(&-Scalar::one())
    }
}

impl Mul<&KForm> for &Scalar {
    type Output = KForm;
    fn mul(self, rhs: &KForm) -> KForm {
        rhs.scale(self)
    }
}

/// Positive-definite symmetric bilinear form on R^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    entries: RatMatrix,
    inverse: RatMatrix,
}

impl Metric {
    pub fn new(entries: RatMatrix) -> Result<Self, FormError> {
        if !entries.is_square() || !entries.is_positive_definite() {
            return Err(FormError::NotPositiveDefinite);
        }
        check_dim(entries.nrows())?;
        let inverse = entries.inverse().ok_or(FormError::NotPositiveDefinite)?;
        Ok(Metric { entries, inverse })
    }

    pub fn euclidean(dim: usize) -> Self {
        Metric {
            entries: RatMatrix::identity(dim),
            inverse: RatMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn inverse_matrix(&self) -> &RatMatrix {
        &self.inverse
    }

    pub fn is_euclidean(&self) -> bool {
        self.entries == RatMatrix::identity(self.dim())
    }

    /// `√det g`, which must be rational for exact Hodge duality.
    pub fn volume_factor(&self) -> Result<Scalar, FormError> {
        let d = self.entries.determinant();
        scalar::rational_sqrt(&d).ok_or_else(|| FormError::IrrationalVolume(scalar::format(&d)))
    }

    /// Raises all indices of a form with `g⁻¹`.
    pub fn raise(&self, a: &KForm) -> KForm {
        if self.is_euclidean() {
            return a.clone();
        }
        a.pullback(&self.inverse).expect("dimension matches")
    }

    /// Induced inner product on k-forms.
    pub fn inner(&self, a: &KForm, b: &KForm) -> Scalar {
        self.raise(a).inner(b)
    }

    pub fn apply(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        crate::linalg::dot(u, &self.entries.mul_vec(v))
    }
}

/// A k-plane spanned by the columns of a rank-k matrix, with an orientation
/// sign relative to the order of its spanning vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedPlane {
    basis: RatMatrix,
    orientation: i32,
}

impl OrientedPlane {
    pub fn new(vectors: &[Vec<Scalar>], orientation: i32) -> Result<Self, FormError> {
        let k = vectors.len();
        let n = vectors.first().map_or(0, Vec::len);
        check_dim(n)?;
        if vectors.iter().any(|v| v.len() != n) {
            return Err(FormError::DimensionMismatch(n, 0));
        }
        let basis = RatMatrix::from_fn(n, k, |i, j| vectors[j][i].clone());
        if k == 0 || basis.rank() != k {
            return Err(FormError::DegeneratePlane);
        }
        Ok(OrientedPlane {
            basis,
            orientation: if orientation < 0 { -1 } else { 1 },
        })
    }

    /// Span of the 1-based coordinate axes `axes`, oriented by their order.
    pub fn coordinate(dim: usize, axes: &[usize]) -> Self {
        let vs: Vec<Vec<Scalar>> = axes
            .iter()
            .map(|&a| {
                (1..=dim)
                    .map(|i| if i == a { Scalar::one() } else { Scalar::zero() })
                    .collect()
            })
            .collect();
        Self::new(&vs, 1).expect("distinct axes")
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn k(&self) -> usize {
        self.basis.ncols()
    }

    pub fn orientation(&self) -> i32 {
        self.orientation
    }

    /// Columns are the spanning vectors.
    pub fn matrix(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn vector(&self, j: usize) -> Vec<Scalar> {
        self.basis.column(j)
    }

    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.k()).map(|j| self.vector(j)).collect()
    }

    /// Gram matrix of the spanning vectors under `g`.
    pub fn gram(&self, g: &Metric) -> RatMatrix {
        &(&self.basis.transpose() * g.matrix()) * &self.basis
    }

    /// Image plane under a linear map.
    pub fn transform(&self, a: &RatMatrix) -> Result<Self, FormError> {
        let m = a * &self.basis;
        if m.rank() != self.k() {
            return Err(FormError::DegeneratePlane);
        }
        Ok(OrientedPlane {
            basis: m,
            orientation: self.orientation,
        })
    }
}

/// Number of degree-`k` basis monomials in dimension `dim`.
pub fn dimension_of(dim: usize, k: usize) -> usize {
    binomial(dim, k)
}

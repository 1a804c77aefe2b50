use super::FueterError;
use crate::par::{stream_rng, Execution};
use nalgebra::DMatrix;
use rand::Rng;
use std::f64::consts::PI;

pub type Quaternion = nalgebra::Quaternion<f64>;

/// The units (i, j, k).
pub fn units() -> [Quaternion; 3] {
    [
        Quaternion::new(0.0, 1.0, 0.0, 0.0),
        Quaternion::new(0.0, 0.0, 1.0, 0.0),
        Quaternion::new(0.0, 0.0, 0.0, 1.0),
    ]
}

/// How a unit acts on field values: left multiplication, which leaves the
/// right module structure alone.
fn act(unit: &Quaternion, q: &Quaternion) -> Quaternion {
    unit * q
}

fn sup(q: &Quaternion) -> f64 {
    q.coords.amax()
}

/// Quaternion values on the periodic N³ lattice with spacing 1/N, N odd.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionField {
    n: usize,
    values: Vec<Quaternion>,
}

impl QuaternionField {
    fn check(n: usize) -> Result<(), FueterError> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(FueterError::EvenLattice(n));
        }
        Ok(())
    }

    pub fn zeros(n: usize) -> Result<Self, FueterError> {
        Self::constant(n, Quaternion::new(0.0, 0.0, 0.0, 0.0))
    }

    pub fn constant(n: usize, q: Quaternion) -> Result<Self, FueterError> {
        Self::check(n)?;
        Ok(QuaternionField {
            n,
            values: vec![q; n * n * n],
        })
    }

    /// Samples `f` at the lattice points y = h·(a, b, c).
    pub fn from_fn(n: usize, f: impl Fn([f64; 3]) -> Quaternion) -> Result<Self, FueterError> {
        Self::check(n)?;
        let h = 1.0 / n as f64;
        let mut values = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    values.push(f([a as f64 * h, b as f64 * h, c as f64 * h]));
                }
            }
        }
        Ok(QuaternionField { n, values })
    }

    /// Components uniform in [−1, 1).
    pub fn random(n: usize, seed: u64) -> Result<Self, FueterError> {
        Self::check(n)?;
        let mut rng = stream_rng(seed, 0);
        let values = (0..n * n * n)
            .map(|_| {
                Quaternion::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                )
            })
            .collect();
        Ok(QuaternionField { n, values })
    }

    pub fn from_vector(n: usize, v: &[f64]) -> Result<Self, FueterError> {
        Self::check(n)?;
        if v.len() != 4 * n * n * n {
            return Err(FueterError::Shape(v.len(), 4 * n * n * n));
        }
        let values = v.chunks(4).map(|c| Quaternion::new(c[0], c[1], c[2], c[3])).collect();
        Ok(QuaternionField { n, values })
    }

    /// Components (w, i, j, k) site by site.
    pub fn to_vector(&self) -> Vec<f64> {
        self.values.iter().flat_map(|q| [q.w, q.i, q.j, q.k]).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn index(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.n + b) * self.n + c
    }

    pub fn at(&self, a: usize, b: usize, c: usize) -> &Quaternion {
        &self.values[self.index(a, b, c)]
    }

    pub fn values(&self) -> &[Quaternion] {
        &self.values
    }

    /// Value at site + offset·e_axis, periodically.
    fn shifted(&self, site: usize, axis: usize, offset: isize) -> &Quaternion {
        let n = self.n;
        let mut coords = [site / (n * n), (site / n) % n, site % n];
        coords[axis] = (coords[axis] as isize + offset).rem_euclid(n as isize) as usize;
        self.at(coords[0], coords[1], coords[2])
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(sup).fold(0.0, f64::max)
    }

    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|q| q.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &QuaternionField) -> Result<QuaternionField, FueterError> {
        if self.n != other.n {
            return Err(FueterError::Shape(self.n, other.n));
        }
        Ok(QuaternionField {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, s: f64) -> QuaternionField {
        QuaternionField {
            n: self.n,
            values: self.values.iter().map(|q| q * s).collect(),
        }
    }

    pub fn add(&self, other: &QuaternionField) -> Result<QuaternionField, FueterError> {
        self.sub(&other.scale(-1.0))
    }

    /// Σ_a (f(y + 2h e_a) − 2 f(y) + f(y − 2h e_a)) / (4h²): the square of
    /// the central difference, summed over axes.
    pub fn double_spacing_laplacian(&self, execution: Execution) -> QuaternionField {
        let h = self.spacing();
        let values = execution.map_range(self.values.len(), |s| {
            let mut acc = Quaternion::new(0.0, 0.0, 0.0, 0.0);
            for axis in 0..3 {
                acc += self.shifted(s, axis, 2) + self.shifted(s, axis, -2) - self.values[s] * 2.0;
            }
            acc / (4.0 * h * h)
        });
        QuaternionField { n: self.n, values }
    }
}

/// D f = Σ_a u_a · ∂_a f with central differences, for a choice of units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FueterOperator {
    pub units: [Quaternion; 3],
    pub execution: Execution,
}

impl Default for FueterOperator {
    fn default() -> Self {
        FueterOperator {
            units: units(),
            execution: Execution::default(),
        }
    }
}

impl FueterOperator {
    pub fn with_units(units: [Quaternion; 3]) -> Self {
        FueterOperator {
            units,
            ..Self::default()
        }
    }

    pub fn apply(&self, f: &QuaternionField) -> QuaternionField {
        let h = f.spacing();
        let values = self.execution.map_range(f.values.len(), |s| {
            let mut acc = Quaternion::new(0.0, 0.0, 0.0, 0.0);
            for (axis, u) in self.units.iter().enumerate() {
                let d = (f.shifted(s, axis, 1) - f.shifted(s, axis, -1)) / (2.0 * h);
                acc += act(u, &d);
            }
            acc
        });
        QuaternionField { n: f.n, values }
    }

    /// The operator as a dense real matrix on `to_vector` coordinates.
    pub fn matrix(&self, n: usize) -> Result<DMatrix<f64>, FueterError> {
        let dim = 4 * n * n * n;
        let mut m = DMatrix::zeros(dim, dim);
        let zero = QuaternionField::zeros(n)?;
        let basis = [
            Quaternion::new(1.0, 0.0, 0.0, 0.0),
            Quaternion::new(0.0, 1.0, 0.0, 0.0),
            Quaternion::new(0.0, 0.0, 1.0, 0.0),
            Quaternion::new(0.0, 0.0, 0.0, 1.0),
        ];
        let h = zero.spacing();
        for s in 0..n * n * n {
            for axis in 0..3 {
                for (offset, sign) in [(1isize, 1.0), (-1, -1.0)] {
                    let t = {
                        let mut coords = [s / (n * n), (s / n) % n, s % n];
                        coords[axis] = (coords[axis] as isize + offset).rem_euclid(n as isize) as usize;
                        zero.index(coords[0], coords[1], coords[2])
                    };
                    for (c, e) in basis.iter().enumerate() {
                        let image = act(&self.units[axis], e) * (sign / (2.0 * h));
                        for (r, v) in [image.w, image.i, image.j, image.k].into_iter().enumerate() {
                            m[(4 * s + r, 4 * t + c)] += v;
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// ‖D(Df) + Δ₂f‖∞.
    pub fn square_residual(&self, f: &QuaternionField) -> f64 {
        let ddf = self.apply(&self.apply(f));
        ddf.add(&f.double_spacing_laplacian(self.execution))
            .expect("same lattice")
            .sup_norm()
    }
}

pub fn fueter_apply(f: &QuaternionField) -> QuaternionField {
    FueterOperator::default().apply(f)
}

pub fn fueter_square_residual(f: &QuaternionField) -> f64 {
    FueterOperator::default().square_residual(f)
}

/// Dimension of ker D on the N³ torus from the discrete symbol: a Fourier
/// mode k contributes H exactly when sin(2πk_a/N) = 0 for every axis,
/// since Σ_a s_a·u_a is invertible whenever s ≠ 0.
pub fn kernel_dimension(n: usize) -> Result<usize, FueterError> {
    QuaternionField::check(n)?;
    let zero_modes = (0..n)
        .filter(|&k| (2.0 * PI * k as f64 / n as f64).sin().abs() < 1e-12)
        .count();
    Ok(4 * zero_modes.pow(3))
}

/// ‖Df − λf‖₂ / ‖f‖₂.
pub fn nonlinear_eigen_residual(f: &QuaternionField, lambda: f64) -> Result<f64, FueterError> {
    let norm = f.l2_norm();
    if norm == 0.0 {
        return Err(FueterError::ZeroField);
    }
    Ok(fueter_apply(f).sub(&f.scale(lambda))?.l2_norm() / norm)
}

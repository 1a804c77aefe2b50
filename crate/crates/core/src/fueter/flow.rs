use super::FueterError;
use nalgebra::DMatrix;
use num::complex::Complex64;

/// Eigenvalue magnitude treated as zero at endpoints, and the bisection
/// width for locating crossings.
pub const FLOW_TOLERANCE: f64 = 1e-10;
const SELF_ADJOINT_TOLERANCE: f64 = 1e-12;
const MAX_REFINEMENTS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum Operator {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

impl Operator {
    pub fn dim(&self) -> usize {
        match self {
            Operator::Real(m) => m.nrows(),
            Operator::Complex(m) => m.nrows(),
        }
    }

    fn asymmetry(&self) -> f64 {
        match self {
            Operator::Real(m) if m.is_square() => (m - m.transpose()).amax(),
            Operator::Complex(m) if m.is_square() => (m - m.adjoint()).camax(),
            _ => f64::INFINITY,
        }
    }

    fn lerp(&self, other: &Operator, s: f64) -> Operator {
        match (self, other) {
            (Operator::Real(a), Operator::Real(b)) => Operator::Real(a * (1.0 - s) + b * s),
            (Operator::Complex(a), Operator::Complex(b)) => {
                Operator::Complex(a * Complex64::new(1.0 - s, 0.0) + b * Complex64::new(s, 0.0))
            }
            _ => unreachable!("families are homogeneous"),
        }
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = match self {
            Operator::Real(m) => m.clone().symmetric_eigenvalues().iter().copied().collect(),
            Operator::Complex(m) => m.clone().symmetric_eigenvalues().iter().copied().collect(),
        };
        v.sort_by(f64::total_cmp);
        v
    }

    fn negative_count(&self) -> usize {
        self.eigenvalues().iter().filter(|&&x| x < 0.0).count()
    }
}

/// The realification [[A, −B], [B, A]] of A + iB; every eigenvalue doubles.
pub fn realify(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut r = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            r[(i, j)] = z.re;
            r[(i + n, j + n)] = z.re;
            r[(i, j + n)] = -z.im;
            r[(i + n, j)] = z.im;
        }
    }
    r
}

/// Self-adjoint matrices on a parameter grid, joined linearly.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfAdjointFamily {
    params: Vec<f64>,
    operators: Vec<Operator>,
    /// Require every crossing to move a single eigenvalue.
    pub generic: bool,
}

impl SelfAdjointFamily {
    pub fn new(params: Vec<f64>, operators: Vec<Operator>, generic: bool) -> Result<Self, FueterError> {
        if params.len() != operators.len() || params.len() < 2 {
            return Err(FueterError::Invalid(
                "a family needs at least two parameters, one operator each".into(),
            ));
        }
        if params.windows(2).any(|w| w[0] == w[1] || w[0].is_nan()) {
            return Err(FueterError::Invalid("parameters must be distinct".into()));
        }
        let dim = operators[0].dim();
        let real = matches!(operators[0], Operator::Real(_));
        for (t, op) in params.iter().zip(&operators) {
            if op.dim() != dim || matches!(op, Operator::Real(_)) != real {
                return Err(FueterError::Invalid("operators differ in size or field".into()));
            }
            let deviation = op.asymmetry();
            if deviation > SELF_ADJOINT_TOLERANCE {
                return Err(FueterError::NotSelfAdjoint { t: *t, deviation });
            }
        }
        Ok(SelfAdjointFamily {
            params,
            operators,
            generic,
        })
    }

    pub fn real(params: Vec<f64>, matrices: Vec<DMatrix<f64>>) -> Result<Self, FueterError> {
        Self::new(params, matrices.into_iter().map(Operator::Real).collect(), true)
    }

    pub fn complex(params: Vec<f64>, matrices: Vec<DMatrix<Complex64>>) -> Result<Self, FueterError> {
        Self::new(params, matrices.into_iter().map(Operator::Complex).collect(), true)
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> SelfAdjointFamily {
        let mut params: Vec<f64> = self.params.iter().map(|t| -t).collect();
        params.reverse();
        let mut operators = self.operators.clone();
        operators.reverse();
        SelfAdjointFamily {
            params,
            operators,
            generic: self.generic,
        }
    }

    /// This path followed by `next`, which must start where this one ends.
    pub fn concat(&self, next: &SelfAdjointFamily) -> Result<SelfAdjointFamily, FueterError> {
        let (last, first) = (self.operators.last().unwrap(), &next.operators[0]);
        if last != first {
            return Err(FueterError::Invalid("paths do not meet".into()));
        }
        let shift = self.params.last().unwrap() - next.params[0];
        let mut params = self.params.clone();
        params.extend(next.params.iter().skip(1).map(|t| t + shift));
        let mut operators = self.operators.clone();
        operators.extend(next.operators.iter().skip(1).cloned());
        Ok(SelfAdjointFamily {
            params,
            operators,
            generic: self.generic && next.generic,
        })
    }

    /// The realified path; crossings come in pairs, so it is not generic.
    pub fn realified(&self) -> SelfAdjointFamily {
        let operators = self
            .operators
            .iter()
            .map(|op| match op {
                Operator::Complex(m) => Operator::Real(realify(m)),
                real => real.clone(),
            })
            .collect();
        SelfAdjointFamily {
            params: self.params.clone(),
            operators,
            generic: false,
        }
    }

    fn at(&self, segment: usize, s: f64) -> Operator {
        self.operators[segment].lerp(&self.operators[segment + 1], s)
    }

    fn param(&self, segment: usize, s: f64) -> f64 {
        self.params[segment] + s * (self.params[segment + 1] - self.params[segment])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossingEvent {
    pub t: f64,
    /// Net eigenvalues moving from negative to non-negative.
    pub change: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowReport {
    pub flow: i64,
    pub crossings: Vec<CrossingEvent>,
    pub subdivisions: usize,
}

/// Locates sign changes on [lo, hi] of one segment by bisection.
fn locate(fam: &SelfAdjointFamily, segment: usize, mut lo: f64, mut hi: f64, neg_lo: usize) -> f64 {
    let width = (fam.params[segment + 1] - fam.params[segment]).abs();
    while (hi - lo) * width > FLOW_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if fam.at(segment, mid).negative_count() == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    fam.param(segment, 0.5 * (lo + hi))
}

fn crossings_at(fam: &SelfAdjointFamily, subdivisions: usize) -> Vec<CrossingEvent> {
    let mut events = Vec::new();
    for segment in 0..fam.params.len() - 1 {
        let mut prev = fam.operators[segment].negative_count();
        for step in 1..=subdivisions {
            let (lo, hi) = (
                (step - 1) as f64 / subdivisions as f64,
                step as f64 / subdivisions as f64,
            );
            let next = fam.at(segment, hi).negative_count();
            if next != prev {
                events.push(CrossingEvent {
                    t: locate(fam, segment, lo, hi, prev),
                    change: prev as i64 - next as i64,
                });
            }
            prev = next;
        }
    }
    events
}

/// Signed count of eigenvalues crossing zero, negative to positive counting
/// +1. The grid is refined until the located crossings stop changing.
pub fn spectral_flow(fam: &SelfAdjointFamily) -> Result<FlowReport, FueterError> {
    for (t, op) in [
        (fam.params[0], &fam.operators[0]),
        (*fam.params.last().unwrap(), fam.operators.last().unwrap()),
    ] {
        if let Some(&e) = op.eigenvalues().iter().find(|e| e.abs() <= FLOW_TOLERANCE) {
            return Err(FueterError::SingularEndpoint {
                t,
                eigenvalue: e,
                tolerance: FLOW_TOLERANCE,
            });
        }
    }
    let mut subdivisions = 8;
    let mut events = crossings_at(fam, subdivisions);
    for _ in 0..MAX_REFINEMENTS {
        let finer = crossings_at(fam, 2 * subdivisions);
        subdivisions *= 2;
        // two crossings sharing a cell look like one double crossing
        let resolved = !fam.generic || finer.iter().all(|e| e.change.abs() == 1);
        let stable = finer.len() == events.len() && resolved;
        events = finer;
        if stable {
            break;
        }
    }
    if fam.generic {
        if let Some(e) = events.iter().find(|e| e.change.abs() > 1) {
            return Err(FueterError::NonSimple {
                t: e.t,
                multiplicity: e.change.unsigned_abs() as usize,
            });
        }
    }
    let flow = events.iter().map(|e| e.change).sum();
    let net = fam.operators[0].negative_count() as i64 - fam.operators.last().unwrap().negative_count() as i64;
    debug_assert_eq!(flow, net);
    Ok(FlowReport {
        flow,
        crossings: events,
        subdivisions,
    })
}

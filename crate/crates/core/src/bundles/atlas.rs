use super::BundleError;
use crate::novikov::expsum::{pairing_complex, Class, Horizon};
use crate::novikov::model::EVALUATION_BOUND;
use crate::scalar::{self, Row, Scalar};
use nalgebra::DMatrix;
use num::complex::Complex64;
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub name: String,
    pub charge: Vec<Scalar>,
}

impl Solution {
    pub fn new(name: &str, charge: Vec<Scalar>) -> Self {
        Solution {
            name: name.to_string(),
            charge,
        }
    }
}

/// A chamber label with its ordered list of solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartPoint {
    pub label: String,
    pub solutions: Vec<Solution>,
}

impl ChartPoint {
    pub fn new(label: &str, solutions: Vec<Solution>) -> Self {
        ChartPoint {
            label: label.to_string(),
            solutions,
        }
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.solutions.iter().position(|s| s.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.solutions.iter().map(|s| s.name.clone()).collect()
    }
}

/// One term n · exp(−⟨g, ψ⟩) from solution `s` of the source chart to
/// solution `s_prime` of the target chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionRecord {
    pub s: String,
    pub s_prime: String,
    pub class: Class,
    pub count: Scalar,
}

impl TransitionRecord {
    pub fn new(s: &str, s_prime: &str, class: Class, count: Scalar) -> Self {
        TransitionRecord {
            s: s.to_string(),
            s_prime: s_prime.to_string(),
            class,
            count,
        }
    }
}

pub type RecordKey = (String, String, Class);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionFamily {
    pub from: String,
    pub to: String,
    pub records: Vec<TransitionRecord>,
}

impl TransitionFamily {
    pub fn new(from: &str, to: &str, records: Vec<TransitionRecord>) -> Self {
        TransitionFamily {
            from: from.to_string(),
            to: to.to_string(),
            records,
        }
    }

    /// The family with one record S → S, class 0, count 1 per solution.
    pub fn identity(chart: &ChartPoint, rank: usize) -> Self {
        let records = chart
            .solutions
            .iter()
            .map(|s| TransitionRecord::new(&s.name, &s.name, vec![Scalar::zero(); rank], scalar::one()))
            .collect();
        TransitionFamily::new(&chart.label, &chart.label, records)
    }

    /// Records merged by (S, S′, class) with zero totals dropped.
    pub fn canonical(&self) -> BTreeMap<RecordKey, Scalar> {
        let mut m: BTreeMap<RecordKey, Scalar> = BTreeMap::new();
        for r in &self.records {
            *m.entry((r.s.clone(), r.s_prime.clone(), r.class.clone()))
                .or_insert_with(Scalar::zero) += &r.count;
        }
        m.retain(|_, v| !v.is_zero());
        m
    }

    pub fn canonicalized(&self) -> TransitionFamily {
        let records = self
            .canonical()
            .into_iter()
            .map(|((s, s_prime, class), count)| TransitionRecord {
                s,
                s_prime,
                class,
                count,
            })
            .collect();
        TransitionFamily::new(&self.from, &self.to, records)
    }

    /// Class-graded convolution: `self` followed by `next`. Evaluates to
    /// the matrix product next(ψ) · self(ψ).
    pub fn then(&self, next: &TransitionFamily) -> Result<TransitionFamily, BundleError> {
        if self.to != next.from {
            return Err(BundleError::ChartMismatch(
                self.from.clone(),
                self.to.clone(),
                next.from.clone(),
                next.to.clone(),
            ));
        }
        let mut by_source: BTreeMap<&str, Vec<&TransitionRecord>> = BTreeMap::new();
        for r in &next.records {
            by_source.entry(r.s.as_str()).or_default().push(r);
        }
        let mut records = Vec::new();
        for a in &self.records {
            for b in by_source.get(a.s_prime.as_str()).into_iter().flatten() {
                let class = a.class.iter().zip(&b.class).map(|(x, y)| x + y).collect();
                records.push(TransitionRecord {
                    s: a.s.clone(),
                    s_prime: b.s_prime.clone(),
                    class,
                    count: &a.count * &b.count,
                });
            }
        }
        Ok(TransitionFamily::new(&self.from, &next.to, records).canonicalized())
    }

    /// Entry (S′, S) = Σ n(E) · exp(−⟨g_E, ψ⟩) in the chart orders.
    pub fn evaluate(
        &self,
        source: &ChartPoint,
        target: &ChartPoint,
        psi: &[Complex64],
        horizon: Option<&Horizon>,
    ) -> Result<DMatrix<Complex64>, BundleError> {
        let mut m = DMatrix::zeros(target.len(), source.len());
        for r in &self.records {
            if horizon.is_some_and(|h| !h.admits(&r.class)) {
                return Err(BundleError::BeyondHorizon {
                    class: Row(&r.class).to_string(),
                });
            }
            let (Some(j), Some(i)) = (source.position(&r.s), target.position(&r.s_prime)) else {
                return Err(BundleError::Invalid(format!(
                    "record {} → {} names no solutions of {} → {}",
                    r.s, r.s_prime, source.label, target.label
                )));
            };
            let exponent = -pairing_complex(&r.class, psi);
            if exponent.re > EVALUATION_BOUND {
                return Err(BundleError::Overflow(exponent.re, EVALUATION_BOUND));
            }
            m[(i, j)] += exponent.exp() * scalar::to_f64(&r.count);
        }
        Ok(m)
    }

    /// Shifts each class by λ′·charge(S′) − λ·charge(S), i.e. conjugates by
    /// the diagonal factors exp(−λ⟨charge, ψ⟩) of the two charts.
    pub fn gauge(
        &self,
        source: &ChartPoint,
        target: &ChartPoint,
        lambda: &Scalar,
        lambda_prime: &Scalar,
    ) -> TransitionFamily {
        let records = self
            .records
            .iter()
            .map(|r| {
                let c = &source.solutions[source.position(&r.s).expect("validated")].charge;
                let c2 = &target.solutions[target.position(&r.s_prime).expect("validated")].charge;
                let class = r
                    .class
                    .iter()
                    .zip(c.iter().zip(c2))
                    .map(|(g, (a, b))| g + lambda_prime * b - lambda * a)
                    .collect();
                TransitionRecord { class, ..r.clone() }
            })
            .collect();
        TransitionFamily::new(&self.from, &self.to, records)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atlas {
    rank: usize,
    charts: Vec<ChartPoint>,
    families: BTreeMap<(String, String), TransitionFamily>,
    horizon: Option<Horizon>,
}

impl Atlas {
    pub fn new(
        rank: usize,
        charts: Vec<ChartPoint>,
        families: Vec<TransitionFamily>,
        horizon: Option<Horizon>,
    ) -> Result<Self, BundleError> {
        let mut labels = BTreeSet::new();
        for c in &charts {
            if !labels.insert(c.label.as_str()) {
                return Err(BundleError::Invalid(format!("duplicate chart {}", c.label)));
            }
            let mut names = BTreeSet::new();
            for s in &c.solutions {
                if !names.insert(s.name.as_str()) {
                    return Err(BundleError::Invalid(format!(
                        "duplicate solution {} in chart {}",
                        s.name, c.label
                    )));
                }
                if s.charge.len() != rank {
                    return Err(BundleError::Invalid(format!(
                        "charge of {} has length {}, expected {rank}",
                        s.name,
                        s.charge.len()
                    )));
                }
            }
        }
        if let Some(h) = &horizon {
            if h.direction.len() != rank {
                return Err(BundleError::Invalid("horizon direction has the wrong length".into()));
            }
        }
        let mut atlas = Atlas {
            rank,
            charts,
            families: BTreeMap::new(),
            horizon,
        };
        for f in families {
            let source = atlas.chart(&f.from)?;
            let target = atlas.chart(&f.to)?;
            if f.from == f.to {
                return Err(BundleError::Invalid(format!(
                    "family from {} to itself; the identity is implicit",
                    f.from
                )));
            }
            for r in &f.records {
                if source.position(&r.s).is_none() || target.position(&r.s_prime).is_none() {
                    return Err(BundleError::Invalid(format!(
                        "record {} → {} names no solutions of {} → {}",
                        r.s, r.s_prime, f.from, f.to
                    )));
                }
                if r.class.len() != rank {
                    return Err(BundleError::Invalid(format!(
                        "record {} → {} has class length {}, expected {rank}",
                        r.s,
                        r.s_prime,
                        r.class.len()
                    )));
                }
            }
            let key = (f.from.clone(), f.to.clone());
            if atlas.families.insert(key, f).is_some() {
                return Err(BundleError::Invalid("duplicate transition family".into()));
            }
        }
        Ok(atlas)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn charts(&self) -> &[ChartPoint] {
        &self.charts
    }

    pub fn horizon(&self) -> Option<&Horizon> {
        self.horizon.as_ref()
    }

    pub fn families(&self) -> impl Iterator<Item = &TransitionFamily> {
        self.families.values()
    }

    pub fn chart(&self, label: &str) -> Result<&ChartPoint, BundleError> {
        self.charts
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| BundleError::UnknownChart(label.to_string()))
    }

    /// The stored family, or the identity when `from == to`.
    pub fn family(&self, from: &str, to: &str) -> Result<TransitionFamily, BundleError> {
        if from == to {
            return Ok(TransitionFamily::identity(self.chart(from)?, self.rank));
        }
        self.families
            .get(&(from.to_string(), to.to_string()))
            .cloned()
            .ok_or_else(|| BundleError::MissingFamily(from.to_string(), to.to_string()))
    }

    pub fn family_mut(&mut self, from: &str, to: &str) -> Option<&mut TransitionFamily> {
        self.families.get_mut(&(from.to_string(), to.to_string()))
    }

    pub fn evaluate(&self, from: &str, to: &str, psi: &[Complex64]) -> Result<DMatrix<Complex64>, BundleError> {
        self.family(from, to)?
            .evaluate(self.chart(from)?, self.chart(to)?, psi, self.horizon.as_ref())
    }

    /// Conjugates every family by the per-chart diagonal factors; charts
    /// missing from `lambda` get λ = 0.
    pub fn gauge_transform(&self, lambda: &BTreeMap<String, Scalar>) -> Atlas {
        let zero = Scalar::zero();
        let l = |c: &str| lambda.get(c).unwrap_or(&zero);
        let families = self
            .families
            .iter()
            .map(|(k, f)| {
                let (a, b) = (self.chart(&f.from).unwrap(), self.chart(&f.to).unwrap());
                (k.clone(), f.gauge(a, b, l(&f.from), l(&f.to)))
            })
            .collect();
        Atlas {
            families,
            ..self.clone()
        }
    }

    fn within_horizon(&self, m: BTreeMap<RecordKey, Scalar>) -> BTreeMap<RecordKey, Scalar> {
        match &self.horizon {
            Some(h) => m.into_iter().filter(|((_, _, g), _)| h.admits(g)).collect(),
            None => m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleFailure {
    /// Chart route; a two-chart route means G then its reverse ≠ identity.
    pub route: Vec<String>,
    pub s: String,
    pub s_prime: String,
    pub class: Class,
    pub expected: Scalar,
    pub found: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub verified: bool,
    pub triples_checked: usize,
    pub pairs_checked: usize,
    pub failure: Option<CocycleFailure>,
}

fn first_difference(
    expected: &BTreeMap<RecordKey, Scalar>,
    found: &BTreeMap<RecordKey, Scalar>,
) -> Option<(RecordKey, Scalar, Scalar)> {
    let keys: BTreeSet<&RecordKey> = expected.keys().chain(found.keys()).collect();
    keys.into_iter().find_map(|k| {
        let e = expected.get(k).cloned().unwrap_or_else(Scalar::zero);
        let f = found.get(k).cloned().unwrap_or_else(Scalar::zero);
        (e != f).then(|| (k.clone(), e, f))
    })
}

/// Record-level check, up to the horizon, that G_{θθ′} then G_{θ′θ″} equals
/// G_{θθ″} for every ordered triple of distinct charts and that G_{θθ′}
/// then G_{θ′θ} is the identity. Stops at the first failing record.
pub fn check_cocycle(atlas: &Atlas) -> Result<CocycleReport, BundleError> {
    let labels: Vec<&str> = atlas.charts.iter().map(|c| c.label.as_str()).collect();
    let mut report = CocycleReport {
        verified: true,
        triples_checked: 0,
        pairs_checked: 0,
        failure: None,
    };
    let fail = |route: &[&str], (key, expected, found): (RecordKey, Scalar, Scalar)| CocycleFailure {
        route: route.iter().map(|s| s.to_string()).collect(),
        s: key.0,
        s_prime: key.1,
        class: key.2,
        expected,
        found,
    };
    for &a in &labels {
        for &b in &labels {
            if a == b {
                continue;
            }
            let ab = atlas.family(a, b)?;
            let round = atlas.within_horizon(ab.then(&atlas.family(b, a)?)?.canonical());
            let id = atlas.within_horizon(atlas.family(a, a)?.canonical());
            report.pairs_checked += 1;
            if let Some(d) = first_difference(&id, &round) {
                report.verified = false;
                report.failure = Some(fail(&[a, b], d));
                return Ok(report);
            }
            for &c in &labels {
                if c == a || c == b {
                    continue;
                }
                let composite = atlas.within_horizon(ab.then(&atlas.family(b, c)?)?.canonical());
                let direct = atlas.within_horizon(atlas.family(a, c)?.canonical());
                report.triples_checked += 1;
                if let Some(d) = first_difference(&direct, &composite) {
                    report.verified = false;
                    report.failure = Some(fail(&[a, b, c], d));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

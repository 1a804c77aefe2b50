use super::{Atlas, BundleError, TransitionFamily};
use crate::novikov::expsum::{pairing, pairing_complex, Class, ExpSum};
use crate::novikov::model::EVALUATION_BOUND;
use crate::scalar::{self, Row, Scalar};
use num::complex::Complex64;
use num::{Signed, Zero};
use std::collections::BTreeMap;

/// Formal series Σ n_b · exp(−⟨b, ψ⟩) supported in the cone ⟨φ, b⟩ ≥ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingFunction {
    rank: usize,
    /// Cone certificate: every stored class pairs non-negatively with each
    /// covector; the first is φ.
    cone: Vec<Vec<Scalar>>,
    terms: BTreeMap<Class, Scalar>,
}

impl GeneratingFunction {
    pub fn new(phi: Vec<Scalar>, counts: impl IntoIterator<Item = (Class, Scalar)>) -> Result<Self, BundleError> {
        Self::with_cone(vec![phi], counts)
    }

    pub fn with_cone(
        cone: Vec<Vec<Scalar>>,
        counts: impl IntoIterator<Item = (Class, Scalar)>,
    ) -> Result<Self, BundleError> {
        let rank = cone
            .first()
            .map(Vec::len)
            .ok_or_else(|| BundleError::Invalid("a generating function needs the covector φ".into()))?;
        if cone.iter().any(|c| c.len() != rank) {
            return Err(BundleError::Invalid("cone covectors differ in length".into()));
        }
        let mut terms: BTreeMap<Class, Scalar> = BTreeMap::new();
        for (b, n) in counts {
            if b.len() != rank {
                return Err(BundleError::Invalid(format!(
                    "class {} has length {}, expected {rank}",
                    Row(&b),
                    b.len()
                )));
            }
            *terms.entry(b).or_insert_with(Scalar::zero) += n;
        }
        terms.retain(|_, n| !n.is_zero());
        for (b, n) in &terms {
            for c in &cone {
                let p = pairing(b, c);
                if p.is_negative() {
                    return Err(BundleError::OutsideCone {
                        class: Row(b).to_string(),
                        count: scalar::format(n),
                        pairing: scalar::format(&p),
                    });
                }
            }
        }
        Ok(GeneratingFunction { rank, cone, terms })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn phi(&self) -> &[Scalar] {
        &self.cone[0]
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Class, &Scalar)> {
        self.terms.iter()
    }

    pub fn count(&self, b: &[Scalar]) -> Scalar {
        self.terms.get(b).cloned().unwrap_or_else(Scalar::zero)
    }

    fn term_value(b: &[Scalar], n: &Scalar, psi: &[Complex64]) -> Result<Complex64, BundleError> {
        let e = -pairing_complex(b, psi);
        if e.re > EVALUATION_BOUND {
            return Err(BundleError::Overflow(e.re, EVALUATION_BOUND));
        }
        Ok(e.exp() * scalar::to_f64(n))
    }

    pub fn evaluate(&self, psi: &[Complex64]) -> Result<Complex64, BundleError> {
        self.terms.iter().map(|(b, n)| Self::term_value(b, n, psi)).sum()
    }

    /// Contributions grouped by the height ⟨φ, b⟩, in increasing height.
    pub fn shells(&self, psi: &[Complex64]) -> Result<Vec<(Scalar, Complex64)>, BundleError> {
        let mut shells: BTreeMap<Scalar, Complex64> = BTreeMap::new();
        for (b, n) in &self.terms {
            *shells.entry(pairing(b, self.phi())).or_default() += Self::term_value(b, n, psi)?;
        }
        Ok(shells.into_iter().collect())
    }

    /// Running totals over the shells.
    pub fn partial_sums(&self, psi: &[Complex64]) -> Result<Vec<Complex64>, BundleError> {
        let mut acc = Complex64::zero();
        Ok(self
            .shells(psi)?
            .into_iter()
            .map(|(_, v)| {
                acc += v;
                acc
            })
            .collect())
    }
}

/// A section over one chart: one exponential sum per solution, in the
/// chart's order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionData {
    pub chart: String,
    pub entries: Vec<ExpSum>,
}

impl SectionData {
    pub fn new(atlas: &Atlas, chart: &str, entries: Vec<ExpSum>) -> Result<Self, BundleError> {
        let c = atlas.chart(chart)?;
        if entries.len() != c.len() {
            return Err(BundleError::Invalid(format!(
                "section has {} entries, chart {chart} has {} solutions",
                entries.len(),
                c.len()
            )));
        }
        if entries.iter().any(|e| e.rank() != atlas.rank()) {
            return Err(BundleError::Invalid("section entry has the wrong lattice rank".into()));
        }
        let entries = entries
            .into_iter()
            .map(|e| e.with_horizon(atlas.horizon().cloned()))
            .collect();
        Ok(SectionData {
            chart: chart.to_string(),
            entries,
        })
    }

    /// Values Σ n · exp(−⟨g, ψ⟩) per solution.
    pub fn evaluate(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let minus: Vec<Complex64> = psi.iter().map(|z| -z).collect();
        self.entries.iter().map(|e| e.evaluate(&minus)).collect()
    }

    fn record_sum(class: &Class, count: &Scalar, entry: &ExpSum) -> ExpSum {
        ExpSum::monomial(class.clone(), count.clone()).mul(entry)
    }

    /// Pushes the section forward along `family`: g′[S′] = Σ_E n(E)·e^{g_E}·g[S(E)].
    pub fn transport(&self, atlas: &Atlas, family: &TransitionFamily) -> Result<SectionData, BundleError> {
        if family.from != self.chart {
            return Err(BundleError::ChartMismatch(
                self.chart.clone(),
                self.chart.clone(),
                family.from.clone(),
                family.to.clone(),
            ));
        }
        let (source, target) = (atlas.chart(&family.from)?, atlas.chart(&family.to)?);
        let mut entries = vec![ExpSum::zero(atlas.rank()).with_horizon(atlas.horizon().cloned()); target.len()];
        for r in &family.records {
            let (j, i) = (source.position(&r.s).unwrap(), target.position(&r.s_prime).unwrap());
            entries[i] = entries[i].add(&Self::record_sum(&r.class, &r.count, &self.entries[j]));
        }
        Ok(SectionData {
            chart: family.to.clone(),
            entries,
        })
    }

    /// Transports a dual section with the transpose of the reverse family
    /// `back` (target → this chart), so pairings are preserved.
    pub fn transport_dual(&self, atlas: &Atlas, back: &TransitionFamily) -> Result<SectionData, BundleError> {
        if back.to != self.chart {
            return Err(BundleError::ChartMismatch(
                back.from.clone(),
                back.to.clone(),
                self.chart.clone(),
                self.chart.clone(),
            ));
        }
        let (here, there) = (atlas.chart(&back.to)?, atlas.chart(&back.from)?);
        let mut entries = vec![ExpSum::zero(atlas.rank()).with_horizon(atlas.horizon().cloned()); there.len()];
        for r in &back.records {
            let (j, i) = (here.position(&r.s_prime).unwrap(), there.position(&r.s).unwrap());
            entries[i] = entries[i].add(&Self::record_sum(&r.class, &r.count, &self.entries[j]));
        }
        Ok(SectionData {
            chart: back.from.clone(),
            entries,
        })
    }

    /// Multiplies each entry by the diagonal gauge factor exp(−λ⟨charge, ψ⟩),
    /// or by its inverse for a dual section.
    pub fn gauge(&self, atlas: &Atlas, lambda: &Scalar, dual: bool) -> Result<SectionData, BundleError> {
        let chart = atlas.chart(&self.chart)?;
        let sign = if dual { -lambda } else { lambda.clone() };
        let entries = self
            .entries
            .iter()
            .zip(&chart.solutions)
            .map(|(e, s)| {
                let shift: Vec<Scalar> = s.charge.iter().map(|c| c * &sign).collect();
                e.shift(&shift)
            })
            .collect();
        Ok(SectionData {
            chart: self.chart.clone(),
            entries,
        })
    }

    pub fn scale(&self, c: &Scalar) -> SectionData {
        SectionData {
            chart: self.chart.clone(),
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }
}

/// Σ_S g₁[S] · g₂[S] with solutions matched by name between the two charts.
pub fn pair_sections(
    g1: &SectionData,
    g2: &SectionData,
    atlas: &Atlas,
    phi: &[Scalar],
) -> Result<GeneratingFunction, BundleError> {
    let (c1, c2) = (atlas.chart(&g1.chart)?, atlas.chart(&g2.chart)?);
    if c1.len() != c2.len() {
        return Err(BundleError::Invalid(format!(
            "charts {} and {} have different solution counts",
            c1.label, c2.label
        )));
    }
    let mut total = ExpSum::zero(atlas.rank());
    for (k, s) in c1.solutions.iter().enumerate() {
        let j = c2.position(&s.name).ok_or_else(|| BundleError::NameMismatch {
            name: s.name.clone(),
            chart: c1.label.clone(),
            other: c2.label.clone(),
        })?;
        total = total.add(&g1.entries[k].mul(&g2.entries[j]));
    }
    GeneratingFunction::new(phi.to_vec(), total.terms().map(|(b, n)| (b.clone(), n.clone())))
}

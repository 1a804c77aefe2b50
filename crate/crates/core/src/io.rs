//! JSON file formats. Rationals are written as "p/q" strings; integer and
//! decimal numbers are accepted on input and read exactly.

use crate::bundles::{
    Atlas, BundleError, ChartPoint, SectionData, SlagWeights, Solution, TransitionFamily, TransitionRecord,
};
use crate::fueter::{FueterError, Operator, SelfAdjointFamily};
use crate::novikov::expsum::{ExpSum, Horizon};
use crate::novikov::{CriticalPoint, FlowModel, FlowRecord, NovikovError};
use crate::scalar::{self, Scalar};
use nalgebra::DMatrix;
use num::complex::Complex64;
use num::ToPrimitive;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error("line {line}, column {column}, field `{field}`: {message}")]
    Parse {
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Schema { field: String, message: String },
}

impl IoError {
    fn schema(field: impl Into<String>, message: impl ToString) -> Self {
        IoError::Schema {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

/// Deserializes with the failing field path in the diagnostic.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        IoError::Parse {
            line: inner.line(),
            column: inner.column(),
            field,
            message: inner.to_string(),
        }
    })
}

/// Directory of the JSON fixtures shipped with the crate.
pub const FIXTURE_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(FIXTURE_DIR).join(name)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// An exact rational: a "p/q" or decimal string, or a JSON number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub Scalar);

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&scalar::format(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Number(serde_json::Number),
        }
        let text = match Repr::deserialize(d)? {
            Repr::Text(s) => s,
            Repr::Number(n) => n.to_string(),
        };
        scalar::parse(&text)
            .map(Rational)
            .map_err(|e| serde::de::Error::custom(format!("not a rational: {}", e.0)))
    }
}

fn rats(v: &[Scalar]) -> Vec<Rational> {
    v.iter().cloned().map(Rational).collect()
}

fn scalars(v: Vec<Rational>) -> Vec<Scalar> {
    v.into_iter().map(|r| r.0).collect()
}

fn integer(field: &str, r: &Rational) -> Result<i64, IoError> {
    if !r.0.is_integer() {
        return Err(IoError::schema(field, "expected an integer count"));
    }
    r.0.to_integer()
        .to_i64()
        .ok_or_else(|| IoError::schema(field, "count out of range"))
}

// ---------------------------------------------------------------- flow models

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalPointJson {
    pub name: String,
    pub index: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowJson {
    pub from: String,
    pub to: String,
    pub class: Vec<Rational>,
    pub count: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowModelFile {
    pub lattice_rank: usize,
    pub theta: Vec<Rational>,
    pub critical_points: Vec<CriticalPointJson>,
    pub flows: Vec<FlowJson>,
    /// Declares the table complete only up to ⟨class, θ⟩ ≤ horizon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<Rational>,
    /// Compare with the cellular oracle only at generic α.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub generic_only: bool,
}

impl FlowModelFile {
    pub fn from_model(m: &FlowModel) -> Self {
        FlowModelFile {
            lattice_rank: m.lattice_rank(),
            theta: rats(m.theta()),
            critical_points: m
                .critical_points()
                .iter()
                .map(|c| CriticalPointJson {
                    name: c.name.clone(),
                    index: c.index,
                })
                .collect(),
            flows: m
                .flows()
                .iter()
                .map(|f| FlowJson {
                    from: f.from.clone(),
                    to: f.to.clone(),
                    class: rats(&f.class),
                    count: Rational(scalar::int(f.count)),
                })
                .collect(),
            horizon: m.horizon().cloned().map(Rational),
            generic_only: m.is_generic_only(),
        }
    }

    pub fn into_model(self) -> Result<FlowModel, IoError> {
        let mut flows = Vec::with_capacity(self.flows.len());
        for (k, f) in self.flows.into_iter().enumerate() {
            let count = integer(&format!("flows[{k}].count"), &f.count)?;
            flows.push(FlowRecord {
                from: f.from,
                to: f.to,
                class: scalars(f.class),
                count,
            });
        }
        let points = self
            .critical_points
            .into_iter()
            .map(|c| CriticalPoint::new(&c.name, c.index))
            .collect();
        FlowModel::new(
            self.lattice_rank,
            scalars(self.theta),
            points,
            flows,
            self.horizon.map(|h| h.0),
        )
        .map(|m| m.generic_only(self.generic_only))
        .map_err(|e: NovikovError| IoError::schema("flows", e))
    }
}

pub fn parse_flow_model(text: &str) -> Result<FlowModel, IoError> {
    from_json::<FlowModelFile>(text)?.into_model()
}

// -------------------------------------------------------------------- atlases

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionJson {
    pub name: String,
    pub charge: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartJson {
    pub label: String,
    pub solutions: Vec<SolutionJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordJson {
    pub s: String,
    pub s_prime: String,
    pub class: Vec<Rational>,
    pub count: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionJson {
    pub from: String,
    pub to: String,
    pub records: Vec<RecordJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorizonJson {
    pub direction: Vec<Rational>,
    pub bound: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtlasFile {
    /// Defaults to the charge length of the first solution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_rank: Option<usize>,
    pub charts: Vec<ChartJson>,
    pub transitions: Vec<TransitionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<HorizonJson>,
}

impl AtlasFile {
    pub fn from_atlas(a: &Atlas) -> Self {
        AtlasFile {
            lattice_rank: Some(a.rank()),
            charts: a
                .charts()
                .iter()
                .map(|c| ChartJson {
                    label: c.label.clone(),
                    solutions: c
                        .solutions
                        .iter()
                        .map(|s| SolutionJson {
                            name: s.name.clone(),
                            charge: rats(&s.charge),
                        })
                        .collect(),
                })
                .collect(),
            transitions: a
                .families()
                .map(|f| TransitionJson {
                    from: f.from.clone(),
                    to: f.to.clone(),
                    records: f
                        .records
                        .iter()
                        .map(|r| RecordJson {
                            s: r.s.clone(),
                            s_prime: r.s_prime.clone(),
                            class: rats(&r.class),
                            count: Rational(r.count.clone()),
                        })
                        .collect(),
                })
                .collect(),
            horizon: a.horizon().map(|h| HorizonJson {
                direction: rats(&h.direction),
                bound: Rational(h.bound.clone()),
            }),
        }
    }

    pub fn into_atlas(self) -> Result<Atlas, IoError> {
        let rank = self
            .lattice_rank
            .or_else(|| {
                self.charts
                    .iter()
                    .flat_map(|c| c.solutions.first())
                    .map(|s| s.charge.len())
                    .next()
            })
            .ok_or_else(|| IoError::schema("lattice_rank", "missing and not inferable"))?;
        let charts = self
            .charts
            .into_iter()
            .map(|c| {
                ChartPoint::new(
                    &c.label,
                    c.solutions
                        .into_iter()
                        .map(|s| Solution::new(&s.name, scalars(s.charge)))
                        .collect(),
                )
            })
            .collect();
        let mut families = Vec::new();
        for (k, t) in self.transitions.into_iter().enumerate() {
            let mut records = Vec::new();
            for (j, r) in t.records.into_iter().enumerate() {
                integer(&format!("transitions[{k}].records[{j}].count"), &r.count)?;
                records.push(TransitionRecord::new(&r.s, &r.s_prime, scalars(r.class), r.count.0));
            }
            families.push(TransitionFamily::new(&t.from, &t.to, records));
        }
        let horizon = self.horizon.map(|h| Horizon {
            direction: scalars(h.direction),
            bound: h.bound.0,
        });
        Atlas::new(rank, charts, families, horizon).map_err(|e: BundleError| IoError::schema("transitions", e))
    }
}

pub fn parse_atlas(text: &str) -> Result<Atlas, IoError> {
    from_json::<AtlasFile>(text)?.into_atlas()
}

// ------------------------------------------------------------------- sections

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub class: Vec<Rational>,
    pub count: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionJson {
    pub chart: String,
    /// One list of terms per solution of the chart, in chart order.
    pub entries: Vec<Vec<TermJson>>,
}

impl SectionJson {
    pub fn from_section(s: &SectionData) -> Self {
        SectionJson {
            chart: s.chart.clone(),
            entries: s
                .entries
                .iter()
                .map(|e| {
                    e.terms()
                        .map(|(c, n)| TermJson {
                            class: rats(c),
                            count: Rational(n.clone()),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn into_section(self, atlas: &Atlas) -> Result<SectionData, IoError> {
        let rank = atlas.rank();
        let mut entries = Vec::new();
        for (k, terms) in self.entries.into_iter().enumerate() {
            let mut e = ExpSum::zero(rank);
            for (j, t) in terms.into_iter().enumerate() {
                if t.class.len() != rank {
                    return Err(IoError::schema(
                        format!("entries[{k}][{j}].class"),
                        format!("expected length {rank}"),
                    ));
                }
                integer(&format!("entries[{k}][{j}].count"), &t.count)?;
                e.add_term(scalars(t.class), t.count.0);
            }
            entries.push(e);
        }
        SectionData::new(atlas, &self.chart, entries).map_err(|e| IoError::schema("chart", e))
    }
}

/// Two sections to pair, with the cone covector φ.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionsFile {
    pub phi: Vec<Rational>,
    pub first: SectionJson,
    pub second: SectionJson,
}

// ----------------------------------------------------------------- slag data

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightJson {
    pub k: u32,
    pub class: usize,
    pub weight: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlagFile {
    pub classes: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positivity: Option<Vec<Rational>>,
    pub weights: Vec<WeightJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<Rational>>,
}

pub struct SlagInput {
    pub classes: Vec<Vec<Scalar>>,
    pub positivity: Option<Vec<Scalar>>,
    pub weights: SlagWeights,
    pub kappa: Option<Vec<Scalar>>,
}

impl SlagFile {
    pub fn into_input(self) -> Result<SlagInput, IoError> {
        let mut weights = SlagWeights::new();
        for (k, w) in self.weights.into_iter().enumerate() {
            if weights.insert((w.k, w.class), w.weight.0).is_some() {
                return Err(IoError::schema(format!("weights[{k}]"), "duplicate (k, class)"));
            }
        }
        Ok(SlagInput {
            classes: self.classes.into_iter().map(scalars).collect(),
            positivity: self.positivity.map(scalars),
            weights,
            kappa: self.kappa.map(scalars),
        })
    }
}

// ------------------------------------------------------------------- families

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub params: Vec<f64>,
    /// Real parts, one square matrix per parameter, row-major rows.
    pub matrices: Vec<Vec<Vec<f64>>>,
    /// Imaginary parts for a Hermitian family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imaginary: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default = "yes")]
    pub generic: bool,
}

fn yes() -> bool {
    true
}

fn square(field: &str, rows: &[Vec<f64>]) -> Result<DMatrix<f64>, IoError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(IoError::schema(field, "matrix is not square"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

impl FamilyFile {
    pub fn into_family(self) -> Result<SelfAdjointFamily, IoError> {
        let mut ops = Vec::new();
        for (k, m) in self.matrices.iter().enumerate() {
            let re = square(&format!("matrices[{k}]"), m)?;
            let op = match &self.imaginary {
                None => Operator::Real(re),
                Some(ims) => {
                    let im = ims
                        .get(k)
                        .ok_or_else(|| IoError::schema("imaginary", "one matrix per parameter"))?;
                    let im = square(&format!("imaginary[{k}]"), im)?;
                    if im.shape() != re.shape() {
                        return Err(IoError::schema(format!("imaginary[{k}]"), "shape differs"));
                    }
                    Operator::Complex(re.zip_map(&im, Complex64::new))
                }
            };
            ops.push(op);
        }
        SelfAdjointFamily::new(self.params, ops, self.generic).map_err(|e: FueterError| IoError::schema("matrices", e))
    }
}

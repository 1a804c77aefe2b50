//! Bundled flow models, their cellular oracles and continuation data.

use super::cellular::{self, LocalSystemComplex};
use super::model::{CriticalPoint, FlowModel, FlowRecord};
use super::table::{ContinuationData, EquivariantTable, TableRecord};
use crate::scalar;

/// Height function on S¹ with one extra winding: ∂p = (1 − e^α) q.
pub fn circle_model() -> FlowModel {
    FlowModel::new(
        1,
        vec![scalar::int(1)],
        vec![CriticalPoint::new("p", 1), CriticalPoint::new("q", 0)],
        vec![FlowRecord::new("p", "q", &[0], 1), FlowRecord::new("p", "q", &[1], -1)],
        None,
    )
    .expect("circle model is a complex")
}

/// The circle with the lift of p moved one sheet down.
pub fn circle_model_relifted() -> FlowModel {
    FlowModel::new(
        1,
        vec![scalar::int(1)],
        vec![CriticalPoint::new("p", 1), CriticalPoint::new("q", 0)],
        vec![FlowRecord::new("p", "q", &[-1], 1), FlowRecord::new("p", "q", &[0], -1)],
        None,
    )
    .expect("relifted circle model is a complex")
}

/// Ψ(p) = e^{g₁} p, Ψ(q) = q between the two circle lifts.
pub fn circle_relift_continuation() -> ContinuationData {
    let f0 = circle_model();
    let f1 = circle_model_relifted();
    let names = vec!["p".to_string(), "q".to_string()];
    let table = EquivariantTable::new(
        1,
        names.clone(),
        names,
        vec![record("p", "p", &[1], 1), record("q", "q", &[0], 1)],
    )
    .unwrap();
    ContinuationData::new(&f0, &f1, table).unwrap()
}

/// Perfect Morse function on T²: m, s₁, s₂, M.
pub fn torus_model() -> FlowModel {
    FlowModel::new(
        2,
        vec![scalar::int(1), scalar::int(1)],
        vec![
            CriticalPoint::new("m", 0),
            CriticalPoint::new("s1", 1),
            CriticalPoint::new("s2", 1),
            CriticalPoint::new("M", 2),
        ],
        vec![
            FlowRecord::new("s1", "m", &[0, 0], 1),
            FlowRecord::new("s1", "m", &[1, 0], -1),
            FlowRecord::new("s2", "m", &[0, 0], 1),
            FlowRecord::new("s2", "m", &[0, 1], -1),
            FlowRecord::new("M", "s1", &[0, 1], 1),
            FlowRecord::new("M", "s1", &[0, 0], -1),
            FlowRecord::new("M", "s2", &[0, 0], 1),
            FlowRecord::new("M", "s2", &[1, 0], -1),
        ],
        None,
    )
    .expect("torus model is a complex")
}

pub const WALL_POINTS: [&str; 3] = ["A1", "A2", "A3"];

/// Holomorphic Morse function on C minus four points: three critical points
/// of index one and no flow lines. Agrees with the oracle only for generic α.
pub fn wall_model() -> FlowModel {
    FlowModel::new(
        4,
        vec![scalar::int(1); 4],
        WALL_POINTS.iter().map(|n| CriticalPoint::new(n, 1)).collect(),
        vec![],
        None,
    )
    .expect("wall model")
    .generic_only(true)
}

/// Ψ(A_i) = A_i + n · e^{g} A_j, the basis change across one wall.
pub fn wall_continuation(i: usize, j: usize, n: i64, class: &[i64]) -> ContinuationData {
    let f = wall_model();
    let names: Vec<String> = WALL_POINTS.iter().map(|s| s.to_string()).collect();
    let mut records: Vec<TableRecord> = names.iter().map(|a| record(a, a, &[0; 4], 1)).collect();
    records.push(record(&names[i], &names[j], class, n));
    let table = EquivariantTable::new(4, names.clone(), names, records).unwrap();
    ContinuationData::new(&f, &f, table).unwrap()
}

/// Two critical points with count 2^k at period k for k below `shells`.
pub fn synthetic_growth_model(shells: usize) -> FlowModel {
    let flows = (0..shells)
        .map(|k| FlowRecord::new("p", "q", &[k as i64], 1i64 << k))
        .collect();
    FlowModel::new(
        1,
        vec![scalar::int(1)],
        vec![CriticalPoint::new("p", 1), CriticalPoint::new("q", 0)],
        flows,
        Some(scalar::int(shells as i64 - 1)),
    )
    .expect("growth model")
}

/// The cellular complex computing the same twisted cohomology.
pub fn oracle(name: &str) -> Option<LocalSystemComplex> {
    match name {
        "circle" => Some(cellular::circle()),
        "torus" => Some(cellular::torus()),
        "wall" => Some(cellular::bouquet(4)),
        _ => None,
    }
}

fn record(from: &str, to: &str, class: &[i64], count: i64) -> TableRecord {
    TableRecord {
        from: from.into(),
        to: to.into(),
        class: class.iter().map(|&x| scalar::int(x)).collect(),
        count: scalar::int(count),
    }
}

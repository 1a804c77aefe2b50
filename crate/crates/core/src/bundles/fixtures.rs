//! Bundled atlases and sections. Chamber frames come from basis changes of
//! wall crossings, so all transitions are unipotent integer matrices.

use super::{Atlas, ChartPoint, SectionData, Solution, TransitionFamily, TransitionRecord};
use crate::linalg::RatMatrix;
use crate::novikov::crossing::{crossing_update, CriticalValueDiagram, Move};
use crate::novikov::expsum::{ExpSum, Horizon};
use crate::scalar::{frac, int, Scalar};
use num::Zero;

const NAMES: [&str; 3] = ["A1", "A2", "A3"];

fn periods() -> Vec<Vec<Scalar>> {
    vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(0), int(1)]]
}

fn charges() -> Vec<Vec<Scalar>> {
    vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![frac(1, 2), int(-1)]]
}

pub fn horizon() -> Horizon {
    Horizon {
        direction: vec![int(1), int(1)],
        bound: int(20),
    }
}

fn to_rat(m: &[Vec<i64>]) -> RatMatrix {
    RatMatrix::from_rows(
        &m.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect::<Vec<_>>(),
    )
}

/// The diagram of three critical values with n13 = 1, n32 = 1, n12 = 0.
pub fn wall_diagram() -> CriticalValueDiagram {
    let n = vec![vec![0, 0, 1], vec![0, 0, -1], vec![-1, 1, 0]];
    CriticalValueDiagram::new(
        vec![(0.0, 0.0), (2.0, 0.0), (1.0, -1.0)],
        n,
        NAMES.iter().map(|s| s.to_string()).collect(),
    )
    .expect("antisymmetric")
}

/// The moves crossed by the bundled atlases, in order.
pub fn wall_moves() -> Vec<Move> {
    vec![
        Move::AcrossRay {
            i: 0,
            j: 2,
            to: (1.0, 0.5),
        },
        Move::AcrossRay {
            i: 2,
            j: 1,
            to: (2.0, 1.0),
        },
        Move::AcrossRay {
            i: 1,
            j: 0,
            to: (4.0, 1.5),
        },
    ]
}

/// Cumulative basis changes along the moves, starting from the identity.
pub fn chamber_frames(crossings: usize) -> Vec<RatMatrix> {
    let mut d = wall_diagram();
    let mut frames = vec![RatMatrix::identity(3)];
    for mv in wall_moves().iter().take(crossings) {
        let c = crossing_update(&d, mv).expect("bundled moves are generic");
        let step = to_rat(&c.basis_change);
        let last = frames.last().unwrap().clone();
        frames.push(&step * &last);
        d = c.diagram;
    }
    frames
}

/// Records for the matrix m between two charts on the bundled solutions;
/// entry (r, c) sits at the class p_r − p_c.
fn family_from_matrix(from: &str, to: &str, m: &RatMatrix) -> TransitionFamily {
    let p = periods();
    let mut records = Vec::new();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if !m[(r, c)].is_zero() {
                let class = p[r].iter().zip(&p[c]).map(|(a, b)| a - b).collect();
                records.push(TransitionRecord::new(NAMES[c], NAMES[r], class, m[(r, c)].clone()));
            }
        }
    }
    TransitionFamily::new(from, to, records)
}

fn chart(label: &str) -> ChartPoint {
    let q = charges();
    ChartPoint::new(label, NAMES.iter().zip(q).map(|(n, c)| Solution::new(n, c)).collect())
}

/// Atlas with one chart per frame C_z and families G_xy = C_y · C_x⁻¹ for
/// all ordered pairs.
pub fn atlas_from_frames(frames: &[RatMatrix]) -> Atlas {
    let labels: Vec<String> = (0..frames.len()).map(|k| format!("theta{k}")).collect();
    let charts = labels.iter().map(|l| chart(l)).collect();
    let mut families = Vec::new();
    for (x, cx) in frames.iter().enumerate() {
        let inv = cx.inverse().expect("unipotent frame");
        for (y, cy) in frames.iter().enumerate() {
            if x != y {
                families.push(family_from_matrix(&labels[x], &labels[y], &(cy * &inv)));
            }
        }
    }
    Atlas::new(2, charts, families, Some(horizon())).expect("bundled atlas is valid")
}

/// Three chambers separated by two wall crossings.
pub fn crossing_atlas() -> Atlas {
    atlas_from_frames(&chamber_frames(2))
}

/// Two chambers on either side of one wall, three solutions each.
pub fn two_chamber_atlas() -> Atlas {
    atlas_from_frames(&chamber_frames(1))
}

/// Four chambers with families between every pair.
pub fn dense_wall_atlas() -> Atlas {
    atlas_from_frames(&chamber_frames(3))
}

/// One chart, no families.
pub fn single_chart_atlas() -> Atlas {
    Atlas::new(2, vec![chart("theta0")], vec![], Some(horizon())).unwrap()
}

/// Two charts with two solutions and a unipotent transition, for pairing.
pub fn pairing_atlas() -> Atlas {
    let sol = |n: &str, a: i64, b: i64| Solution::new(n, vec![int(a), int(b)]);
    let charts = vec![
        ChartPoint::new("theta0", vec![sol("S1", 1, 0), sol("S2", 0, 2)]),
        ChartPoint::new("theta1", vec![sol("S1", -1, 1), sol("S2", 1, 1)]),
    ];
    let r = |s: &str, t: &str, a: i64, b: i64, n: i64| TransitionRecord::new(s, t, vec![int(a), int(b)], int(n));
    let forward = TransitionFamily::new(
        "theta0",
        "theta1",
        vec![r("S1", "S1", 0, 0, 1), r("S2", "S2", 0, 0, 1), r("S2", "S1", 1, 0, 2)],
    );
    let back = TransitionFamily::new(
        "theta1",
        "theta0",
        vec![r("S1", "S1", 0, 0, 1), r("S2", "S2", 0, 0, 1), r("S2", "S1", 1, 0, -2)],
    );
    Atlas::new(2, charts, vec![forward, back], Some(horizon())).unwrap()
}

pub fn pairing_phi() -> Vec<Scalar> {
    vec![int(1), int(1)]
}

/// Two solutions with n(E₁) ∈ {1, 2} at class (1, 0) and n(E₂) ∈ {3, 5} at
/// class (0, 1); their pairing has the single count 1·3 + 2·5 = 13 at (1, 1).
pub fn pairing_sections(atlas: &Atlas) -> (SectionData, SectionData) {
    let m = |a: i64, b: i64, n: i64| ExpSum::monomial(vec![int(a), int(b)], int(n));
    let g1 = SectionData::new(atlas, "theta0", vec![m(1, 0, 1), m(1, 0, 2)]).unwrap();
    let g2 = SectionData::new(atlas, "theta0", vec![m(0, 1, 3), m(0, 1, 5)]).unwrap();
    (g1, g2)
}

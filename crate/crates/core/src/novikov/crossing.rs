//! Critical-value diagrams in C and their intersection numbers under
//! point moves: a point crossing a vanishing path changes n_ij by
//! ±n_ik·n_kj, and crossing the rightward ray of another point changes the
//! distinguished basis by a unipotent transvection.

use super::NovikovError;

const GEOMETRY_EPS: f64 = 1e-12;

pub type Point = (f64, f64);

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalValueDiagram {
    pub points: Vec<Point>,
    /// Antisymmetric intersection table n_ij.
    pub n: Vec<Vec<i64>>,
    pub labels: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Move {
    /// Point k moves to `to`, crossing the segment from z_i to z_j.
    AcrossSegment { k: usize, i: usize, j: usize, to: Point },
    /// Point j moves to `to`, crossing the ray {Im z = Im z_i, Re z > Re z_i}.
    AcrossRay { i: usize, j: usize, to: Point },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Crossing {
    pub diagram: CriticalValueDiagram,
    /// Column c holds the new ⟨A_c⟩ in the old basis.
    pub basis_change: Vec<Vec<i64>>,
    pub sign: i64,
}

fn cross(a: Point, b: Point, c: Point) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Whether `p` lies on the closed segment [a, b].
fn on_segment(a: Point, b: Point, p: Point) -> bool {
    let scale = 1.0 + (b.0 - a.0).abs() + (b.1 - a.1).abs();
    cross(a, b, p).abs() <= GEOMETRY_EPS * scale * scale
        && p.0 >= a.0.min(b.0) - GEOMETRY_EPS
        && p.0 <= a.0.max(b.0) + GEOMETRY_EPS
        && p.1 >= a.1.min(b.1) - GEOMETRY_EPS
        && p.1 <= a.1.max(b.1) + GEOMETRY_EPS
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(0i64, |acc, k| {
                        a[i][k]
                            .checked_mul(b[k][j])
                            .and_then(|x| acc.checked_add(x))
                            .expect("integer overflow in basis change")
                    })
                })
                .collect()
        })
        .collect()
}

fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

/// Exact integer determinant by fraction-free elimination.
pub fn determinant(a: &[Vec<i64>]) -> i64 {
    let m = crate::linalg::RatMatrix::from_rows(
        &a.iter()
            .map(|r| r.iter().map(|&x| crate::scalar::int(x)).collect())
            .collect::<Vec<_>>(),
    );
    let d = m.determinant();
    num::ToPrimitive::to_i64(d.numer()).expect("small determinant")
}

impl CriticalValueDiagram {
    pub fn new(points: Vec<Point>, n: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self, NovikovError> {
        let m = points.len();
        if n.len() != m || n.iter().any(|r| r.len() != m) || labels.len() != m {
            return Err(NovikovError::Invalid(
                "diagram tables must match the point count".into(),
            ));
        }
        let mut pairs = (0..m).flat_map(|i| (0..m).map(move |j| (i, j)));
        if let Some((i, j)) = pairs.find(|&(i, j)| n[i][j] != -n[j][i]) {
            return Err(NovikovError::Invalid(format!("n[{i}][{j}] breaks antisymmetry")));
        }
        Ok(CriticalValueDiagram { points, n, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The move returning the moved point to where it started.
    pub fn reverse(&self, mv: &Move) -> Move {
        match *mv {
            Move::AcrossSegment { k, i, j, .. } => Move::AcrossSegment {
                k,
                i,
                j,
                to: self.points[k],
            },
            Move::AcrossRay { i, j, .. } => Move::AcrossRay {
                i,
                j,
                to: self.points[j],
            },
        }
    }

    fn check_clear(&self, a: Point, b: Point, skip: &[usize], what: &str) -> Result<(), NovikovError> {
        for (m, p) in self.points.iter().enumerate() {
            if !skip.contains(&m) && on_segment(a, b, *p) {
                return Err(NovikovError::NonGeneric(format!("point {m} lies on the {what}")));
            }
        }
        Ok(())
    }
}

pub fn crossing_update(d: &CriticalValueDiagram, mv: &Move) -> Result<Crossing, NovikovError> {
    let size = d.len();
    let in_range = |x: usize| {
        if x < size {
            Ok(())
        } else {
            Err(NovikovError::Invalid(format!("point {x} out of range")))
        }
    };
    match *mv {
        Move::AcrossSegment { k, i, j, to } => {
            for x in [k, i, j] {
                in_range(x)?;
            }
            if k == i || k == j || i == j {
                return Err(NovikovError::NonGeneric(
                    "segment move needs three distinct points".into(),
                ));
            }
            let (zi, zj, from) = (d.points[i], d.points[j], d.points[k]);
            let before = cross(zi, zj, from);
            let after = cross(zi, zj, to);
            if before.abs() <= GEOMETRY_EPS || after.abs() <= GEOMETRY_EPS || before.signum() == after.signum() {
                return Err(NovikovError::NonGeneric(
                    "the move does not cross the line through z_i, z_j".into(),
                ));
            }
            let s1 = cross(from, to, zi);
            let s2 = cross(from, to, zj);
            if s1.abs() <= GEOMETRY_EPS || s2.abs() <= GEOMETRY_EPS || s1.signum() == s2.signum() {
                return Err(NovikovError::NonGeneric(
                    "the path misses the interior of the segment".into(),
                ));
            }
            d.check_clear(zi, zj, &[i, j], "segment")?;
            d.check_clear(from, to, &[k], "path")?;
            let sign = if after > 0.0 { 1 } else { -1 };
            let mut out = d.clone();
            let delta = sign * d.n[i][k] * d.n[k][j];
            out.n[i][j] += delta;
            out.n[j][i] -= delta;
            out.points[k] = to;
            Ok(Crossing {
                diagram: out,
                basis_change: identity(size),
                sign,
            })
        }
        Move::AcrossRay { i, j, to } => {
            in_range(i)?;
            in_range(j)?;
            if i == j {
                return Err(NovikovError::NonGeneric("ray move needs two distinct points".into()));
            }
            let (zi, from) = (d.points[i], d.points[j]);
            let (b, a) = (from.1 - zi.1, to.1 - zi.1);
            if b.abs() <= GEOMETRY_EPS || a.abs() <= GEOMETRY_EPS || b.signum() == a.signum() {
                return Err(NovikovError::NonGeneric(
                    "the move does not cross the horizontal through z_i".into(),
                ));
            }
            let t = b / (b - a);
            let x = from.0 + t * (to.0 - from.0);
            if x <= zi.0 + GEOMETRY_EPS {
                return Err(NovikovError::NonGeneric("the path crosses the leftward ray".into()));
            }
            d.check_clear(from, to, &[j], "path")?;
            let sign = if a > 0.0 { 1 } else { -1 };
            let mut basis = identity(size);
            basis[j][i] = sign * d.n[i][j];
            let n = mat_mul(&mat_mul(&transpose(&basis), &d.n), &basis);
            let mut out = d.clone();
            out.n = n;
            out.points[j] = to;
            Ok(Crossing {
                diagram: out,
                basis_change: basis,
                sign,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_points() -> CriticalValueDiagram {
        // n13 = 1, n32 = 1, n12 = 0
        let n = vec![vec![0, 0, 1], vec![0, 0, -1], vec![-1, 1, 0]];
        CriticalValueDiagram::new(
            vec![(0.0, 0.0), (2.0, 0.0), (1.0, -1.0)],
            n,
            vec!["A1".into(), "A2".into(), "A3".into()],
        )
        .unwrap()
    }

    #[test]
    fn segment_crossing_sign_fixture() {
        let d = three_points();
        let mv = Move::AcrossSegment {
            k: 2,
            i: 0,
            j: 1,
            to: (1.0, 1.0),
        };
        let c = crossing_update(&d, &mv).unwrap();
        assert_eq!(c.sign, 1);
        assert_eq!(c.diagram.n[0][1], 1);
        assert_eq!(c.diagram.n[1][0], -1);
        let back = crossing_update(&c.diagram, &d.reverse(&mv)).unwrap();
        assert_eq!(back.diagram, d);
    }

    #[test]
    fn ray_crossing_is_unipotent_and_reversible() {
        let d = three_points();
        let mv = Move::AcrossRay {
            i: 0,
            j: 2,
            to: (1.0, 0.5),
        };
        let c = crossing_update(&d, &mv).unwrap();
        assert_eq!(determinant(&c.basis_change), 1);
        assert_eq!(c.basis_change[2][0], 1);
        let back = crossing_update(&c.diagram, &d.reverse(&mv)).unwrap();
        assert_eq!(back.diagram, d);
        assert_eq!(mat_mul(&back.basis_change, &c.basis_change), identity(3));
    }

    #[test]
    fn degenerate_moves_are_refused() {
        let d = three_points();
        let along = Move::AcrossSegment {
            k: 2,
            i: 0,
            j: 1,
            to: (1.0, -2.0),
        };
        assert!(matches!(crossing_update(&d, &along), Err(NovikovError::NonGeneric(_))));
        let left = Move::AcrossRay {
            i: 1,
            j: 2,
            to: (1.0, 0.5),
        };
        assert!(matches!(crossing_update(&d, &left), Err(NovikovError::NonGeneric(_))));
    }
}

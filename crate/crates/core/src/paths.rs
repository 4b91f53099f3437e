//! λ-increasing lattice paths.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{det, lattice_length, Beta, BoundaryData, LatticePoint, LatticePolygon, SideEdge};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("a path needs at least two points")]
    TooShort,
    #[error("path is not λ-increasing at index {0}")]
    NotIncreasing(usize),
    #[error("point ({0}) lies outside the polygon")]
    OutsidePolygon(LatticePoint),
    #[error("path must start at ({expected}), found ({found})")]
    WrongStart { expected: LatticePoint, found: LatticePoint },
    #[error("path must end at ({expected}), found ({found})")]
    WrongEnd { expected: LatticePoint, found: LatticePoint },
}

/// Which boundary walk from `p` to `q` is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Turn {
    Left,
    Right,
    Straight,
}

/// A strictly λ-increasing sequence of lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PathRepr", into = "PathRepr")]
pub struct LatticePath {
    points: Vec<LatticePoint>,
}

#[derive(Serialize, Deserialize)]
struct PathRepr {
    points: Vec<LatticePoint>,
}

impl TryFrom<PathRepr> for LatticePath {
    type Error = PathError;
    fn try_from(r: PathRepr) -> Result<Self, PathError> {
        LatticePath::new(r.points)
    }
}

impl From<LatticePath> for PathRepr {
    fn from(p: LatticePath) -> Self {
        PathRepr { points: p.points }
    }
}

impl LatticePath {
    pub fn new(points: Vec<LatticePoint>) -> Result<Self, PathError> {
        if points.len() < 2 {
            return Err(PathError::TooShort);
        }
        if let Some(j) = (1..points.len()).find(|&j| points[j - 1] >= points[j]) {
            return Err(PathError::NotIncreasing(j));
        }
        Ok(Self { points })
    }

    /// Also checks that every point lies in `polygon` and that the path runs
    /// from its λ-minimal to its λ-maximal vertex.
    pub fn in_polygon(points: Vec<LatticePoint>, polygon: &LatticePolygon) -> Result<Self, PathError> {
        let path = Self::new(points)?;
        if let Some(p) = path.points.iter().find(|p| !polygon.contains(**p)) {
            return Err(PathError::OutsidePolygon(*p));
        }
        let (p, q) = polygon.extremal_points();
        if path.start() != p {
            return Err(PathError::WrongStart { expected: p, found: path.start() });
        }
        if path.end() != q {
            return Err(PathError::WrongEnd { expected: q, found: path.end() });
        }
        Ok(path)
    }

    pub(crate) fn from_points_unchecked(points: Vec<LatticePoint>) -> Self {
        debug_assert!(is_lambda_increasing(&points));
        Self { points }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<LatticePoint> {
        self.points
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> LatticePoint {
        self.points[0]
    }

    pub fn end(&self) -> LatticePoint {
        self.points[self.points.len() - 1]
    }

    pub fn steps(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.points.windows(2).map(|w| w[1] - w[0])
    }

    /// Signed `det(γ(k)−γ(k−1), γ(k+1)−γ(k))` for `1 ≤ k ≤ n−1`.
    pub fn turn_det(&self, k: usize) -> i64 {
        turn_det(&self.points, k)
    }

    pub fn turn_direction(&self, k: usize) -> Turn {
        turn_direction(&self.points, k)
    }

    /// Compact form such as `0,5;0,3;1,2`.
    pub fn compact(&self) -> String {
        self.points.iter().map(ToString::to_string).join(";")
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.points.iter().map(|p| format!("({},{})", p.x, p.y)).join(" → ");
        f.write_str(&s)
    }
}

pub fn is_lambda_increasing(points: &[LatticePoint]) -> bool {
    points.windows(2).all(|w| w[0] < w[1])
}

pub(crate) fn turn_det(points: &[LatticePoint], k: usize) -> i64 {
    assert!(k >= 1 && k + 1 < points.len(), "turn index {k} out of range");
    det(points[k] - points[k - 1], points[k + 1] - points[k])
}

pub fn turn_direction(points: &[LatticePoint], k: usize) -> Turn {
    match turn_det(points, k).signum() {
        1 => Turn::Left,
        -1 => Turn::Right,
        _ => Turn::Straight,
    }
}

/// All λ-increasing paths of `length` steps from `p` to `q` through lattice
/// points of `polygon`, in lexicographic order of their point sequences.
///
/// Every lattice point of the polygon other than `p` and `q` lies strictly
/// between them in λ-order, so such a path is just a choice of `length − 1`
/// of those points.
pub fn enumerate_paths(polygon: &LatticePolygon, length: usize) -> impl Iterator<Item = LatticePath> {
    let (p, q) = polygon.extremal_points();
    let inner: Vec<LatticePoint> = polygon.lattice_points().into_iter().filter(|&v| v != p && v != q).collect();
    let picks = if length == 0 { None } else { Some(inner.into_iter().combinations(length - 1)) };
    picks.into_iter().flatten().map(move |mid| {
        let mut points = Vec::with_capacity(mid.len() + 2);
        points.push(p);
        points.extend(mid);
        points.push(q);
        LatticePath::from_points_unchecked(points)
    })
}

/// Number of paths [`enumerate_paths`] yields, without enumerating.
pub fn path_count(polygon: &LatticePolygon, length: usize) -> u128 {
    if length == 0 {
        return 0;
    }
    let n = polygon.lattice_points().len().saturating_sub(2) as u128;
    binomial(n, (length - 1) as u128)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Whether the points walk along `side` of the boundary with, on each edge,
/// the step lengths prescribed by `boundary`.
pub fn is_beta_initial(points: &[LatticePoint], polygon: &LatticePolygon, boundary: &BoundaryData, side: Side) -> bool {
    let sides = polygon.boundary_sides();
    let edges = match side {
        Side::Positive => &sides.positive,
        Side::Negative => &sides.negative,
    };
    walks_side(points, polygon, boundary, edges)
}

pub(crate) fn walks_side(points: &[LatticePoint], polygon: &LatticePolygon, boundary: &BoundaryData, edges: &[SideEdge]) -> bool {
    if points.first() != edges.first().map(|e| e.from).as_ref() {
        return false;
    }
    let mut j = 0;
    let mut lengths = Vec::new();
    for e in edges {
        lengths.clear();
        let edge = polygon.edge(e.id);
        while points[j] != e.to {
            let Some(&next) = points.get(j + 1) else { return false };
            if !edge.contains(next) {
                return false;
            }
            lengths.push(lattice_length(points[j], next));
            j += 1;
        }
        if Beta::from_step_lengths(lengths.iter().copied()) != *boundary.beta(e.id) {
            return false;
        }
    }
    j + 1 == points.len()
}

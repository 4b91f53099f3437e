//! Lattice points, convex lattice polygons and boundary data.
//!
//! The order on [`LatticePoint`] is the λ-order `λ(x, y) = x − εy` for an
//! infinitesimal positive ε: points compare by `x` first and, on equal `x`,
//! the point with the larger `y` is smaller. For lattice points every small
//! enough ε induces this order, so no floating point is involved.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("polygon needs at least three non-collinear vertices")]
    Degenerate,
    #[error("point ({0}) is not a strict vertex of the convex hull")]
    NotStrictlyConvex(LatticePoint),
    #[error("edge {edge}: Iβ = {found} but the edge has lattice length {expected}")]
    MismatchedEdgeLength { edge: EdgeId, expected: u64, found: u64 },
    #[error("no β given for edge {0}")]
    MissingEdge(EdgeId),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("β given twice for edge {0}")]
    DuplicateEdge(EdgeId),
    #[error("partition entries must be positive")]
    NonPositivePart,
    #[error("partition must be nonempty")]
    EmptyPartition,
    #[error("profile mismatch: |μ₁| = {mu1}, |μ₂| = {mu2}, |ν₁| = {nu1}, |ν₂| = {nu2}")]
    ProfileMismatch { mu1: u64, mu2: u64, nu1: u64, nu2: u64 },
}

/// A point of `Z²`. Ordered by λ (see the module docs).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from([x, y]: [i64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.x, p.y]
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        Self { x, y }
    }
}

impl Ord for LatticePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x).then_with(|| other.y.cmp(&self.y))
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

impl std::ops::Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: Self) -> Self {
        LatticePoint::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: Self) -> Self {
        LatticePoint::new(self.x + rhs.x, self.y + rhs.y)
    }
}

/// Compares two points in the λ-order.
pub fn lambda_compare(p: LatticePoint, q: LatticePoint) -> Ordering {
    p.cmp(&q)
}

/// `det(a, b) = a.x·b.y − a.y·b.x`.
pub fn det(a: LatticePoint, b: LatticePoint) -> i64 {
    a.x * b.y - a.y * b.x
}

/// Lattice length of the segment `a → b`.
pub fn lattice_length(a: LatticePoint, b: LatticePoint) -> u64 {
    let d = b - a;
    d.x.unsigned_abs().gcd(&d.y.unsigned_abs())
}

/// Index of an edge in counterclockwise order; edge `i` runs from vertex `i`
/// to vertex `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub start: LatticePoint,
    pub end: LatticePoint,
}

impl Edge {
    pub fn lattice_length(&self) -> u64 {
        lattice_length(self.start, self.end)
    }

    /// Whether `p` lies on the closed segment.
    pub fn contains(&self, p: LatticePoint) -> bool {
        let d = self.end - self.start;
        let v = p - self.start;
        det(d, v) == 0
            && v.x * d.x + v.y * d.y >= 0
            && v.x * d.x + v.y * d.y <= d.x * d.x + d.y * d.y
    }

    /// Whether `p` lies on the open segment.
    pub fn contains_interior(&self, p: LatticePoint) -> bool {
        self.contains(p) && p != self.start && p != self.end
    }
}

/// An edge traversed in a given direction while walking from `p` to `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SideEdge {
    pub id: EdgeId,
    pub from: LatticePoint,
    pub to: LatticePoint,
}

impl SideEdge {
    pub fn lattice_length(&self) -> u64 {
        lattice_length(self.from, self.to)
    }
}

/// The two boundary walks from the λ-minimal to the λ-maximal vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundarySides {
    /// Clockwise from `p` to `q`.
    pub positive: Vec<SideEdge>,
    /// Counterclockwise from `p` to `q`.
    pub negative: Vec<SideEdge>,
}

/// Names of the four edges of an axis-aligned rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RectSide {
    Bottom,
    Right,
    Top,
    Left,
}

impl RectSide {
    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "bottom" | "down" => Some(Self::Bottom),
            "right" => Some(Self::Right),
            "top" | "up" => Some(Self::Top),
            "left" => Some(Self::Left),
            _ => None,
        }
    }
}

/// A convex lattice polygon, stored counterclockwise starting from the lowest
/// (then leftmost) vertex. No three consecutive vertices are collinear.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

impl LatticePolygon {
    /// Builds the polygon whose vertices are exactly `points`, given in any
    /// order. Every point must be a strict vertex of the convex hull.
    pub fn new(points: impl IntoIterator<Item = LatticePoint>) -> Result<Self, GeometryError> {
        let mut pts: Vec<LatticePoint> = points.into_iter().collect();
        pts.sort_by_key(|p| (p.x, p.y));
        pts.dedup();
        let hull = convex_hull(&pts);
        if hull.len() < 3 {
            return Err(GeometryError::Degenerate);
        }
        if let Some(p) = pts.iter().find(|p| !hull.contains(p)) {
            return Err(GeometryError::NotStrictlyConvex(*p));
        }
        let start = hull
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| (p.y, p.x))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut vertices = hull;
        vertices.rotate_left(start);
        Ok(Self { vertices })
    }

    /// The rectangle `[0, width] × [0, height]`.
    pub fn rectangle(width: i64, height: i64) -> Result<Self, GeometryError> {
        Self::new([
            LatticePoint::new(0, 0),
            LatticePoint::new(width, 0),
            LatticePoint::new(width, height),
            LatticePoint::new(0, height),
        ])
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        let n = self.vertices.len();
        Edge {
            id,
            start: self.vertices[id.0 % n],
            end: self.vertices[(id.0 + 1) % n],
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.vertices.len()).map(|i| self.edge(EdgeId(i)))
    }

    /// The edge joining two vertices, in either direction.
    pub fn edge_between(&self, a: LatticePoint, b: LatticePoint) -> Option<EdgeId> {
        self.edges()
            .find(|e| (e.start == a && e.end == b) || (e.start == b && e.end == a))
            .map(|e| e.id)
    }

    /// Membership in the closed polygon.
    pub fn contains(&self, p: LatticePoint) -> bool {
        self.edges().all(|e| det(e.end - e.start, p - e.start) >= 0)
    }

    /// Whether `p` lies on the boundary.
    pub fn on_boundary(&self, p: LatticePoint) -> bool {
        self.edges().any(|e| e.contains(p))
    }

    /// All lattice points of the polygon in increasing λ-order.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (x0, x1) = minmax(self.vertices.iter().map(|p| p.x));
        let (y0, y1) = minmax(self.vertices.iter().map(|p| p.y));
        let mut pts = Vec::new();
        for x in x0..=x1 {
            for y in (y0..=y1).rev() {
                let p = LatticePoint::new(x, y);
                if self.contains(p) {
                    pts.push(p);
                }
            }
        }
        pts
    }

    /// The λ-minimal and λ-maximal vertices `(p, q)`.
    pub fn extremal_points(&self) -> (LatticePoint, LatticePoint) {
        let p = *self.vertices.iter().min().expect("nonempty polygon");
        let q = *self.vertices.iter().max().expect("nonempty polygon");
        (p, q)
    }

    /// Splits the boundary into the clockwise (positive) and counterclockwise
    /// (negative) walks from `p` to `q`.
    pub fn boundary_sides(&self) -> BoundarySides {
        let n = self.vertices.len();
        let (p, q) = self.extremal_points();
        let ip = self.vertices.iter().position(|v| *v == p).unwrap();
        let iq = self.vertices.iter().position(|v| *v == q).unwrap();

        let mut negative = Vec::new();
        let mut i = ip;
        while i != iq {
            let e = self.edge(EdgeId(i));
            negative.push(SideEdge { id: e.id, from: e.start, to: e.end });
            i = (i + 1) % n;
        }

        let mut positive = Vec::new();
        let mut i = ip;
        while i != iq {
            let prev = (i + n - 1) % n;
            let e = self.edge(EdgeId(prev));
            positive.push(SideEdge { id: e.id, from: e.end, to: e.start });
            i = prev;
        }
        BoundarySides { positive, negative }
    }

    /// For an axis-aligned rectangle, the edge with the given name.
    pub fn rectangle_edge(&self, side: RectSide) -> Option<EdgeId> {
        if !self.is_axis_rectangle() {
            return None;
        }
        // Vertex 0 is the lower-left corner, so edges run bottom, right, top, left.
        Some(EdgeId(match side {
            RectSide::Bottom => 0,
            RectSide::Right => 1,
            RectSide::Top => 2,
            RectSide::Left => 3,
        }))
    }

    pub fn is_axis_rectangle(&self) -> bool {
        self.vertices.len() == 4
            && self.edges().all(|e| {
                let d = e.end - e.start;
                d.x == 0 || d.y == 0
            })
    }

    /// Resolves an edge key: a counterclockwise index or, for rectangles, a
    /// side name.
    pub fn resolve_edge(&self, key: &str) -> Result<EdgeId, GeometryError> {
        let key = key.trim();
        if let Ok(i) = key.parse::<usize>() {
            if i < self.edge_count() {
                return Ok(EdgeId(i));
            }
        } else if let Some(side) = RectSide::parse(key) {
            if let Some(id) = self.rectangle_edge(side) {
                return Ok(id);
            }
        }
        Err(GeometryError::UnknownEdge(key.to_string()))
    }
}

fn minmax(it: impl Iterator<Item = i64>) -> (i64, i64) {
    it.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Andrew's monotone chain; input sorted by `(x, y)` and deduplicated. Output
/// is counterclockwise without collinear points.
fn convex_hull(pts: &[LatticePoint]) -> Vec<LatticePoint> {
    if pts.len() < 3 {
        return pts.to_vec();
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in pts {
        while lower.len() >= 2 && det(lower[lower.len() - 1] - lower[lower.len() - 2], p - lower[lower.len() - 1]) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && det(upper[upper.len() - 1] - upper[upper.len() - 2], p - upper[upper.len() - 1]) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A nonincreasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts; rejects zeros and the empty partition.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, GeometryError> {
        if parts.is_empty() {
            return Err(GeometryError::EmptyPartition);
        }
        if parts.contains(&0) {
            return Err(GeometryError::NonPositivePart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(parts))
    }

    /// `(1, …, 1)` with `n` parts.
    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for Partition {
    type Err = GeometryError;

    /// Parses `"3,2"` or `"1^3"`-style comma lists.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (value, reps) = match tok.split_once('^') {
                Some((v, r)) => (v.trim(), r.trim().parse::<usize>().map_err(|_| GeometryError::NonPositivePart)?),
                None => (tok, 1),
            };
            let v: u32 = value.parse().map_err(|_| GeometryError::NonPositivePart)?;
            parts.extend(std::iter::repeat_n(v, reps));
        }
        Self::new(parts)
    }
}

/// Step-size multiplicities of one edge: entry `k − 1` is the number of
/// boundary steps of lattice length `k`. Trailing zeros are trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Beta(Vec<u32>);

impl Beta {
    pub fn new(mut counts: Vec<u32>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        Self(counts)
    }

    /// `β(k)` = number of parts equal to `k`.
    pub fn from_partition(partition: &Partition) -> Self {
        Self::from_step_lengths(partition.parts().iter().map(|&p| p as u64))
    }

    pub fn from_step_lengths(lengths: impl IntoIterator<Item = u64>) -> Self {
        let mut counts = Vec::new();
        for k in lengths {
            let k = k as usize;
            if counts.len() < k {
                counts.resize(k, 0);
            }
            counts[k - 1] += 1;
        }
        Self::new(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// `Iβ = Σ k·β(k)`.
    pub fn weighted_total(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, &c)| (i as u64 + 1) * c as u64).sum()
    }

    /// `|β| = Σ β(k)`.
    pub fn step_count(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// The multiset of step lengths, in increasing order.
    pub fn step_lengths(&self) -> Vec<u64> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i as u64 + 1, c as usize))
            .collect()
    }
}

/// Converts a partition of contact orders into step-size multiplicities.
pub fn partition_to_beta(partition: &Partition) -> Beta {
    Beta::from_partition(partition)
}

/// Validated boundary data: one [`Beta`] per edge, with `Iβ_e` equal to the
/// lattice length of `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryData {
    betas: Vec<Beta>,
}

impl BoundaryData {
    pub fn beta(&self, edge: EdgeId) -> &Beta {
        &self.betas[edge.0]
    }

    pub fn betas(&self) -> &[Beta] {
        &self.betas
    }

    /// `|β̄| = Σ_e |β_e|`.
    pub fn total_steps(&self) -> u64 {
        self.betas.iter().map(Beta::step_count).sum()
    }
}

/// Checks one β sequence per edge against the edge lattice lengths.
pub fn validate_beta(
    polygon: &LatticePolygon,
    raw: &BTreeMap<EdgeId, Beta>,
) -> Result<BoundaryData, GeometryError> {
    let mut betas = Vec::with_capacity(polygon.edge_count());
    for edge in polygon.edges() {
        let beta = raw.get(&edge.id).ok_or(GeometryError::MissingEdge(edge.id))?;
        let expected = edge.lattice_length();
        let found = beta.weighted_total();
        if found != expected {
            return Err(GeometryError::MismatchedEdgeLength { edge: edge.id, expected, found });
        }
        betas.push(beta.clone());
    }
    if let Some(extra) = raw.keys().find(|id| id.0 >= polygon.edge_count()) {
        return Err(GeometryError::UnknownEdge(extra.to_string()));
    }
    Ok(BoundaryData { betas })
}

/// Contact orders with the two sections (`μ`) and the two fibers (`ν`) of
/// `ℙ¹×ℙ¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TangencyProfile {
    pub mu1: Partition,
    pub mu2: Partition,
    pub nu1: Partition,
    pub nu2: Partition,
}

impl TangencyProfile {
    pub fn new(mu1: Partition, mu2: Partition, nu1: Partition, nu2: Partition) -> Result<Self, GeometryError> {
        if mu1.size() != mu2.size() || nu1.size() != nu2.size() {
            return Err(GeometryError::ProfileMismatch {
                mu1: mu1.size(),
                mu2: mu2.size(),
                nu1: nu1.size(),
                nu2: nu2.size(),
            });
        }
        Ok(Self { mu1, mu2, nu1, nu2 })
    }

    /// Convenience constructor from plain slices.
    pub fn from_parts(mu1: &[u32], mu2: &[u32], nu1: &[u32], nu2: &[u32]) -> Result<Self, GeometryError> {
        Self::new(
            Partition::new(mu1.to_vec())?,
            Partition::new(mu2.to_vec())?,
            Partition::new(nu1.to_vec())?,
            Partition::new(nu2.to_vec())?,
        )
    }

    /// Width `d₁ = |μ₁|`.
    pub fn width(&self) -> u64 {
        self.mu1.size()
    }

    /// Height `d₂ = |ν₁|`.
    pub fn height(&self) -> u64 {
        self.nu1.size()
    }

    /// Number of point conditions `ℓ(μ₁)+ℓ(μ₂)+ℓ(ν₁)+ℓ(ν₂)−1`.
    pub fn point_count(&self) -> usize {
        self.mu1.len() + self.mu2.len() + self.nu1.len() + self.nu2.len() - 1
    }
}

impl fmt::Display for TangencyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.mu1, self.mu2, self.nu1, self.nu2)
    }
}

//! Multiplicity of a λ-increasing lattice path.
//!
//! `mult₊` resolves left turns and `mult₋` resolves right turns. At a chosen
//! turn `k` the value is `|det|·mult(γ′) + mult(γ″)`, where `γ′` drops `γ(k)`
//! and `γ″` replaces it by `γ(k−1)+γ(k+1)−γ(k)`; `γ″` contributes zero when it
//! leaves the polygon. A path that walks its side of the boundary with the
//! prescribed step lengths has value one; any other path without a usable turn
//! has value zero.

pub mod pruning;

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::geometry::{BoundaryData, BoundarySides, LatticePoint, LatticePolygon, SideEdge};
use crate::paths::{turn_det, walks_side, LatticePath, PathError, Side};

pub use pruning::{PruneRule, Pruner};

pub type Multiplicity = BigUint;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiplicityError {
    #[error("σ must be a permutation of 1..={expected}, got {found} entries")]
    InvalidPermutationLength { expected: usize, found: usize },
    #[error("σ is not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("{rule} does not apply: {reason}")]
    HypothesisNotMet { rule: PruneRule, reason: &'static str },
    #[error(transparent)]
    Path(#[from] PathError),
}

/// How the next turn is picked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TurnStrategy {
    /// The first eligible turn.
    First,
    /// An eligible turn whose parallelogram leaves the polygon, if any;
    /// otherwise the first one.
    AnyHeuristic,
    /// `σ(r)` is the position of rank `r` (1-based); the eligible position of
    /// least rank is resolved first.
    Sigma(Vec<usize>),
}

/// The turn that side `side` resolves.
fn wanted(side: Side, d: i64) -> bool {
    match side {
        Side::Positive => d > 0,
        Side::Negative => d < 0,
    }
}

pub fn cut_corner(points: &[LatticePoint], k: usize) -> Vec<LatticePoint> {
    let mut out = Vec::with_capacity(points.len() - 1);
    out.extend_from_slice(&points[..k]);
    out.extend_from_slice(&points[k + 1..]);
    out
}

/// Replaces `γ(k)` by `γ(k−1)+γ(k+1)−γ(k)`; `None` if it leaves `polygon`.
pub fn complete_parallelogram(points: &[LatticePoint], k: usize, polygon: &LatticePolygon) -> Option<Vec<LatticePoint>> {
    let v = points[k - 1] + points[k + 1] - points[k];
    if !polygon.contains(v) {
        return None;
    }
    let mut out = points.to_vec();
    out[k] = v;
    Some(out)
}

/// Environment variable that overrides the default memo size.
pub const CACHE_LIMIT_ENV: &str = "TROPCOUNT_CACHE_LIMIT";
const DEFAULT_CACHE_LIMIT: usize = 1 << 20;

/// Evaluates multiplicities for one polygon and boundary, memoizing
/// intermediate paths by `(points, side)`.
#[derive(Clone, Debug)]
pub struct Evaluator {
    polygon: LatticePolygon,
    boundary: BoundaryData,
    sides: BoundarySides,
    cache: HashMap<(Vec<LatticePoint>, Side), Multiplicity>,
    cache_limit: usize,
}

impl Evaluator {
    pub fn new(polygon: &LatticePolygon, boundary: &BoundaryData) -> Self {
        Self {
            sides: polygon.boundary_sides(),
            polygon: polygon.clone(),
            boundary: boundary.clone(),
            cache: HashMap::new(),
            cache_limit: DEFAULT_CACHE_LIMIT,
        }
    }

    /// Caps the memo; it is cleared when it grows past `limit` entries. Zero
    /// disables memoization.
    pub fn with_cache_limit(mut self, limit: usize) -> Self {
        self.cache_limit = limit;
        self
    }

    pub fn polygon(&self) -> &LatticePolygon {
        &self.polygon
    }

    pub fn boundary(&self) -> &BoundaryData {
        &self.boundary
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    fn side_edges(&self, side: Side) -> &[SideEdge] {
        match side {
            Side::Positive => &self.sides.positive,
            Side::Negative => &self.sides.negative,
        }
    }

    fn is_initial(&self, points: &[LatticePoint], side: Side) -> bool {
        walks_side(points, &self.polygon, &self.boundary, self.side_edges(side))
    }

    /// `mult(γ) = mult₊(γ)·mult₋(γ)` with the first-turn rule.
    pub fn mult(&mut self, path: &LatticePath) -> Multiplicity {
        let minus = self.memo(path.points(), Side::Negative, false);
        if minus.is_zero() {
            return minus;
        }
        minus * self.memo(path.points(), Side::Positive, false)
    }

    pub fn mult_side(&mut self, path: &LatticePath, side: Side, strategy: &TurnStrategy) -> Result<Multiplicity, MultiplicityError> {
        match strategy {
            TurnStrategy::First => Ok(self.memo(path.points(), side, false)),
            TurnStrategy::AnyHeuristic => Ok(self.memo(path.points(), side, true)),
            TurnStrategy::Sigma(sigma) => {
                check_permutation(sigma, path.len().saturating_sub(1))?;
                Ok(self.sigma(path.points(), side, sigma))
            }
        }
    }

    /// `mult₋(γ, σ)`.
    pub fn mult_sigma(&mut self, path: &LatticePath, sigma: &[usize]) -> Result<Multiplicity, MultiplicityError> {
        self.mult_side(path, Side::Negative, &TurnStrategy::Sigma(sigma.to_vec()))
    }

    fn choose(&self, points: &[LatticePoint], side: Side, heuristic: bool) -> Option<(usize, i64)> {
        let mut first = None;
        for k in 1..points.len() - 1 {
            let d = turn_det(points, k);
            if !wanted(side, d) {
                continue;
            }
            if !heuristic {
                return Some((k, d));
            }
            first.get_or_insert((k, d));
            if !self.polygon.contains(points[k - 1] + points[k + 1] - points[k]) {
                return Some((k, d));
            }
        }
        first
    }

    fn memo(&mut self, points: &[LatticePoint], side: Side, heuristic: bool) -> Multiplicity {
        if self.is_initial(points, side) {
            return Multiplicity::one();
        }
        let Some((k, d)) = self.choose(points, side, heuristic) else {
            return Multiplicity::zero();
        };
        let key = (points.to_vec(), side);
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let cut = cut_corner(points, k);
        let mut value = self.memo(&cut, side, heuristic);
        if !value.is_zero() {
            value *= d.unsigned_abs();
        }
        if let Some(done) = complete_parallelogram(points, k, &self.polygon) {
            value += self.memo(&done, side, heuristic);
        }
        if self.cache_limit > 0 {
            if self.cache.len() >= self.cache_limit {
                self.cache.clear();
            }
            self.cache.insert(key, value.clone());
        }
        value
    }

    fn sigma(&self, points: &[LatticePoint], side: Side, sigma: &[usize]) -> Multiplicity {
        if self.is_initial(points, side) {
            return Multiplicity::one();
        }
        let pick = sigma
            .iter()
            .enumerate()
            .map(|(i, &pos)| (i + 1, pos))
            .find(|&(_, pos)| wanted(side, turn_det(points, pos)));
        let Some((rank, k)) = pick else {
            return Multiplicity::zero();
        };
        let d = turn_det(points, k);
        let cut = cut_corner(points, k);
        let reduced = sigma_after_cut(sigma, rank, k);
        let mut value = self.sigma(&cut, side, &reduced) * d.unsigned_abs();
        if let Some(done) = complete_parallelogram(points, k, &self.polygon) {
            value += self.sigma(&done, side, sigma);
        }
        value
    }
}

/// `σ′ = ∂_k ∘ σ ∘ δ^r` on `[n−2]`, where `δ^r` skips rank `r` and `∂_k`
/// closes the gap left by position `k`.
pub fn sigma_after_cut(sigma: &[usize], rank: usize, k: usize) -> Vec<usize> {
    (1..sigma.len())
        .map(|r| {
            let src = if r < rank { r } else { r + 1 };
            let pos = sigma[src - 1];
            if pos > k {
                pos - 1
            } else {
                pos
            }
        })
        .collect()
}

fn check_permutation(sigma: &[usize], n: usize) -> Result<(), MultiplicityError> {
    if sigma.len() != n {
        return Err(MultiplicityError::InvalidPermutationLength { expected: n, found: sigma.len() });
    }
    let mut seen = vec![false; n + 1];
    for &s in sigma {
        if s == 0 || s > n || std::mem::replace(&mut seen[s], true) {
            return Err(MultiplicityError::NotAPermutation(n));
        }
    }
    Ok(())
}

/// One-shot `mult(γ)`.
pub fn mult(path: &LatticePath, polygon: &LatticePolygon, boundary: &BoundaryData) -> Multiplicity {
    Evaluator::new(polygon, boundary).mult(path)
}

pub fn mult_side(
    path: &LatticePath,
    polygon: &LatticePolygon,
    boundary: &BoundaryData,
    side: Side,
    strategy: &TurnStrategy,
) -> Result<Multiplicity, MultiplicityError> {
    Evaluator::new(polygon, boundary).mult_side(path, side, strategy)
}

pub fn mult_sigma(
    path: &LatticePath,
    polygon: &LatticePolygon,
    boundary: &BoundaryData,
    sigma: &[usize],
) -> Result<Multiplicity, MultiplicityError> {
    Evaluator::new(polygon, boundary).mult_sigma(path, sigma)
}

//! Subfloor diagrams for `ℙ¹×ℙ¹` with `μ₂ = (1,…,1)`.
//!
//! Vertices `0..n` are linearly ordered. All flow runs left to right: a left
//! end is incoming, a right end outgoing, and an edge `(i, j)` with `i < j`
//! is outgoing at `i` and incoming at `j`.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{validate_beta, Beta, BoundaryData, GeometryError, LatticePoint, LatticePolygon, Partition, TangencyProfile};
use crate::multiplicity::{Evaluator, Multiplicity};
use crate::paths::LatticePath;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubfloorError {
    #[error("divergences must be nonincreasing")]
    NotDecreasing,
    #[error("divergences must sum to zero, got {0}")]
    NonzeroSum(i64),
    #[error("block sizes {mu} do not add up to {whites} white vertices")]
    SizeMismatch { mu: Partition, whites: usize },
    #[error("no diagram with {n} vertices, {whites} white, can carry these ends")]
    InfeasibleCounts { n: usize, whites: usize },
    #[error("subfloor diagrams need μ₂ = (1,…,1), got {0}")]
    UnsupportedProfile(Partition),
    #[error("three fork rays meet in one point; positions are not generic")]
    DegenerateFork,
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Black,
    White,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EndSide {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubfloorDiagram {
    pub n: usize,
    pub colors: Vec<Color>,
    /// `(i, j, w)` with `i < j`.
    pub edges: Vec<(usize, usize, u32)>,
    pub ends: Vec<(usize, EndSide, u32)>,
}

impl SubfloorDiagram {
    pub fn whites(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.colors[v] == Color::White).collect()
    }

    pub fn divergence(&self, v: usize) -> i64 {
        let mut div = 0i64;
        for &(i, j, w) in &self.edges {
            if j == v {
                div += w as i64;
            }
            if i == v {
                div -= w as i64;
            }
        }
        for &(u, side, w) in &self.ends {
            if u == v {
                match side {
                    EndSide::Left => div += w as i64,
                    EndSide::Right => div -= w as i64,
                }
            }
        }
        div
    }

    /// Product of the weights of all bounded edges.
    pub fn edge_weight_product(&self) -> Multiplicity {
        self.edges.iter().map(|&(_, _, w)| Multiplicity::from(w)).product()
    }

    /// Checks every structural condition for partial degree `ν` and
    /// `whites` white vertices.
    pub fn validate(&self, nu1: &Partition, nu2: &Partition, whites: usize) -> Result<(), SubfloorError> {
        let bad = |m: String| Err(SubfloorError::InvalidDiagram(m));
        if self.colors.len() != self.n {
            return bad(format!("{} colors for {} vertices", self.colors.len(), self.n));
        }
        if self.whites().len() != whites {
            return bad(format!("expected {whites} white vertices"));
        }
        let mut uf = UnionFind::new(self.n);
        for &(i, j, w) in &self.edges {
            if i >= j || j >= self.n {
                return bad(format!("edge ({i},{j}) is not ordered"));
            }
            if w == 0 {
                return bad("edge weight must be positive".into());
            }
            if self.colors[i] == self.colors[j] {
                return bad(format!("edge ({i},{j}) joins vertices of the same color"));
            }
            if !uf.union(i, j) {
                return bad("graph has a cycle".into());
            }
        }
        for &(v, _, w) in &self.ends {
            if v >= self.n || self.colors[v] != Color::Black || w == 0 {
                return bad(format!("end at {v} must sit on a black vertex with positive weight"));
            }
        }
        let weights = |side| {
            let mut ws: Vec<u32> = self.ends.iter().filter(|e| e.1 == side).map(|e| e.2).collect();
            ws.sort_unstable_by(|a, b| b.cmp(a));
            ws
        };
        if weights(EndSide::Left) != nu1.parts() || weights(EndSide::Right) != nu2.parts() {
            return bad("end weights do not match ν".into());
        }
        for v in (0..self.n).filter(|&v| self.colors[v] == Color::Black) {
            let valence = self.edges.iter().filter(|e| e.0 == v || e.1 == v).count()
                + self.ends.iter().filter(|e| e.0 == v).count();
            if valence != 2 || self.divergence(v) != 0 {
                return bad(format!("black vertex {v} must have valence 2 and divergence 0"));
            }
        }
        Ok(())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }

    /// Joins the classes of `a` and `b`; false if they already agree.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// The polygon dual to one block's Newton fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockFan {
    /// A single vertex of divergence zero.
    Singleton,
    /// Two or more vertices of divergence zero; the dual polygon is a segment.
    Collinear(usize),
    Polygon {
        polygon: LatticePolygon,
        boundary: BoundaryData,
        /// The upper chain through every lattice point.
        chain: LatticePath,
    },
}

/// Polygon with the chain `(0,0) → (1,d₁) → (2,d₁+d₂) → … → (m,0)` on top and
/// a single bottom step of length `m`.
pub fn block_fan_polygon(divs: &[i64]) -> Result<BlockFan, SubfloorError> {
    if divs.windows(2).any(|w| w[0] < w[1]) {
        return Err(SubfloorError::NotDecreasing);
    }
    let sum: i64 = divs.iter().sum();
    if sum != 0 {
        return Err(SubfloorError::NonzeroSum(sum));
    }
    let m = divs.len();
    if divs.iter().all(|&d| d == 0) {
        return Ok(if m <= 1 { BlockFan::Singleton } else { BlockFan::Collinear(m) });
    }
    let mut chain = vec![LatticePoint::new(0, 0)];
    for (i, &d) in divs.iter().enumerate() {
        let last = chain[i];
        chain.push(LatticePoint::new(last.x + 1, last.y + d));
    }
    let corners: Vec<LatticePoint> = (0..chain.len())
        .filter(|&i| i == 0 || i == m || divs[i - 1] != divs[i])
        .map(|i| chain[i])
        .collect();
    let polygon = LatticePolygon::new(corners)?;
    let bottom = polygon
        .edge_between(LatticePoint::new(0, 0), LatticePoint::new(m as i64, 0))
        .expect("bottom edge");
    let raw: BTreeMap<_, _> = polygon
        .edges()
        .map(|e| {
            let beta = if e.id == bottom {
                Beta::from_step_lengths([m as u64])
            } else {
                Beta::new(vec![e.lattice_length() as u32])
            };
            (e.id, beta)
        })
        .collect();
    let boundary = validate_beta(&polygon, &raw)?;
    let chain = LatticePath::new(chain).expect("chain is λ-increasing");
    Ok(BlockFan::Polygon { polygon, boundary, chain })
}

/// Multiplicity of the upper chain of [`block_fan_polygon`].
pub fn block_multiplicity(divs: &[i64]) -> Result<Multiplicity, SubfloorError> {
    Ok(match block_fan_polygon(divs)? {
        BlockFan::Singleton => Multiplicity::one(),
        BlockFan::Collinear(_) => Multiplicity::zero(),
        BlockFan::Polygon { polygon, boundary, chain } => Evaluator::new(&polygon, &boundary).mult(&chain),
    })
}

/// How a block of white vertices is weighted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockRule {
    /// Divergences must be nonincreasing along the linear order; the block
    /// counts [`block_multiplicity`].
    Decreasing,
    /// Any order; the block counts [`fork_multiplicity`] with vertex `v`
    /// placed at `5^v`.
    #[default]
    Forks,
}

/// Settings for [`mu_multiplicity_with`] and [`n_floor_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FloorOptions {
    pub rule: BlockRule,
    /// Require the quotient by the block family to be a tree. When false the
    /// quotient only needs one more vertex than edges, which also admits
    /// reducible curves whose components' genera are offset by the extra
    /// components, as the lattice path count does.
    pub connected: bool,
}

impl FloorOptions {
    /// Irreducible curves only.
    pub fn irreducible() -> Self {
        Self { rule: BlockRule::Forks, connected: true }
    }

    /// Nonincreasing blocks weighted by `δ₊`, tree quotients only.
    pub fn decreasing() -> Self {
        Self { rule: BlockRule::Decreasing, connected: true }
    }
}

/// Memoizes block weights by rule and divergences.
#[derive(Default)]
pub struct BlockCache(HashMap<(BlockRule, Vec<i64>), Multiplicity>);

impl BlockCache {
    pub fn get(&mut self, rule: BlockRule, divs: &[i64]) -> Result<Multiplicity, SubfloorError> {
        let key = (rule, divs.to_vec());
        if let Some(v) = self.0.get(&key) {
            return Ok(v.clone());
        }
        let v = match rule {
            BlockRule::Decreasing => block_multiplicity(divs)?,
            BlockRule::Forks => generic_fork_multiplicity(divs)?,
        };
        self.0.insert(key, v.clone());
        Ok(v)
    }
}

/// [`fork_multiplicity`] at the first of a fixed list of layouts where no
/// three rays meet in a point. The value only depends on the order of the
/// positions once they are generic.
pub fn generic_fork_multiplicity(divs: &[i64]) -> Result<Multiplicity, SubfloorError> {
    for base in [5i64, 7, 11, 13, 17, 19, 23] {
        for shift in [0, 1, 2] {
            let xs: Vec<i64> = (0..divs.len() as u32).map(|i| base.pow(i) * 4 + shift * i64::from(i * i)).collect();
            match fork_multiplicity(&xs, divs) {
                Err(SubfloorError::DegenerateFork) => continue,
                other => return other,
            }
        }
    }
    Err(SubfloorError::DegenerateFork)
}

/// One downward ray of a fork: it leaves `(x, t)` and moves `a / b` to the
/// right per unit of depth.
#[derive(Clone, Copy, Debug)]
struct Ray {
    x: Ratio<i128>,
    t: Ratio<i128>,
    a: i64,
    b: i64,
}

impl Ray {
    fn speed(&self) -> Ratio<i128> {
        Ratio::new(self.a as i128, self.b as i128)
    }

    fn at(&self, t: Ratio<i128>) -> Ratio<i128> {
        self.x + (t - self.t) * self.speed()
    }

    /// Depth at which `self`, on the left, meets `right`.
    fn meets(&self, right: &Ray) -> Option<Ratio<i128>> {
        let closing = self.speed() - right.speed();
        if closing <= Ratio::from_integer(0) {
            return None;
        }
        let t0 = self.t.max(right.t);
        Some(t0 + (right.at(t0) - self.at(t0)) / closing)
    }
}

fn fork_count(rays: &mut Vec<Ray>) -> Result<Multiplicity, SubfloorError> {
    if rays.len() == 1 {
        return Ok(Multiplicity::one());
    }
    let events: Vec<(Ratio<i128>, usize)> = (0..rays.len() - 1).filter_map(|i| rays[i].meets(&rays[i + 1]).map(|t| (t, i))).collect();
    let Some(&(t, i)) = events.iter().min() else {
        return Ok(Multiplicity::zero());
    };
    if events.iter().any(|&(u, j)| u == t && j.abs_diff(i) == 1) {
        return Err(SubfloorError::DegenerateFork);
    }
    let (l, r) = (rays[i], rays[i + 1]);
    let det = (l.a * r.b - r.a * l.b).unsigned_abs();
    rays[i] = Ray { x: l.at(t), t, a: l.a + r.a, b: l.b + r.b };
    rays.remove(i + 1);
    let merged = fork_count(rays)? * det;
    rays[i] = r;
    rays.insert(i + 1, l);
    let crossed = fork_count(rays)?;
    rays[i] = l;
    rays[i + 1] = r;
    Ok(merged + crossed)
}

/// Weighted number of forks hanging below points at depth zero and
/// horizontal positions `xs`. The point with divergence `d` sends a ray in
/// direction `(d, -1)`; whenever two neighbouring rays meet they either merge
/// into their sum, weighted by `|det|`, or cross. A fork is a history that
/// ends in a single ray.
pub fn fork_multiplicity(xs: &[i64], divs: &[i64]) -> Result<Multiplicity, SubfloorError> {
    let sum: i64 = divs.iter().sum();
    if sum != 0 {
        return Err(SubfloorError::NonzeroSum(sum));
    }
    if xs.len() != divs.len() || divs.is_empty() || xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SubfloorError::InvalidDiagram("fork positions must strictly increase".into()));
    }
    let mut rays: Vec<Ray> = xs
        .iter()
        .zip(divs)
        .map(|(&x, &a)| Ray { x: Ratio::from_integer(x as i128), t: Ratio::from_integer(0), a, b: 1 })
        .collect();
    fork_count(&mut rays)
}

/// Unordered set partitions of `items` with the given block sizes.
fn set_partitions(items: &[usize], sizes: &[usize], out: &mut Vec<Vec<Vec<usize>>>) {
    // The smallest unplaced item always opens the next block; trying each
    // distinct remaining size for it yields every family exactly once.
    fn place(rest: Vec<usize>, sizes: Vec<usize>, acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let Some((&first, others)) = rest.split_first() else {
            if sizes.is_empty() {
                out.push(acc.clone());
            }
            return;
        };
        for size in sizes.iter().copied().unique() {
            let mut remaining = sizes.clone();
            remaining.remove(sizes.iter().position(|&s| s == size).unwrap());
            for mates in others.iter().copied().combinations(size - 1) {
                let mut block = vec![first];
                block.extend(&mates);
                let left: Vec<usize> = others.iter().copied().filter(|v| !mates.contains(v)).collect();
                acc.push(block);
                place(left, remaining.clone(), acc, out);
                acc.pop();
            }
        }
    }
    place(items.to_vec(), sizes.to_vec(), &mut Vec::new(), out);
}

/// `μ`-multiplicity with the default [`FloorOptions`].
pub fn mu_multiplicity(diagram: &SubfloorDiagram, mu1: &Partition) -> Result<Multiplicity, SubfloorError> {
    mu_multiplicity_with(diagram, mu1, &FloorOptions::default(), &mut BlockCache::default())
}

/// Sum over admissible block families of the product of block weights,
/// times the product of bounded edge weights.
pub fn mu_multiplicity_with(
    diagram: &SubfloorDiagram,
    mu1: &Partition,
    opts: &FloorOptions,
    cache: &mut BlockCache,
) -> Result<Multiplicity, SubfloorError> {
    let whites = diagram.whites();
    if mu1.size() as usize != whites.len() {
        return Err(SubfloorError::SizeMismatch { mu: mu1.clone(), whites: whites.len() });
    }
    let divs: Vec<i64> = (0..diagram.n).map(|v| diagram.divergence(v)).collect();
    let sizes: Vec<usize> = mu1.parts().iter().map(|&p| p as usize).collect();
    let mut families = Vec::new();
    set_partitions(&whites, &sizes, &mut families);

    let mut total = Multiplicity::zero();
    'family: for family in families {
        match quotient_shape(diagram, &family) {
            Some(connected) if connected || !opts.connected => {}
            _ => continue,
        }
        let mut product = Multiplicity::one();
        for block in &family {
            let d: Vec<i64> = block.iter().map(|&v| divs[v]).collect();
            if d.iter().sum::<i64>() != 0 || opts.rule == BlockRule::Decreasing && d.windows(2).any(|w| w[0] < w[1]) {
                continue 'family;
            }
            product *= cache.get(opts.rule, &d)?;
            if product.is_zero() {
                continue 'family;
            }
        }
        total += product;
    }
    Ok(total * diagram.edge_weight_product())
}

/// Whether identifying each block to a point leaves a graph with one more
/// vertex than edges, and whether that graph is connected.
fn quotient_shape(diagram: &SubfloorDiagram, family: &[Vec<usize>]) -> Option<bool> {
    let mut class: Vec<usize> = (0..diagram.n).collect();
    for block in family {
        for &v in block {
            class[v] = block[0];
        }
    }
    let nodes = (0..diagram.n).filter(|&v| class[v] == v).count();
    if diagram.edges.len() + 1 != nodes {
        return None;
    }
    let mut uf = UnionFind::new(diagram.n);
    let joins = diagram.edges.iter().filter(|&&(i, j, _)| uf.union(class[i], class[j])).count();
    Some(joins + 1 == nodes)
}

/// One black vertex: where its flow comes from and where it goes.
#[derive(Clone, Copy, Debug)]
enum Port {
    End(u32),
    White(usize),
}

struct Search<'a> {
    n: usize,
    colors: Vec<Color>,
    blacks: Vec<usize>,
    /// `|ν₁|`: the elevators crossing any vertical line carry at most this
    /// much weight.
    capacity: u32,
    /// Weight crossing the gap between vertex `i` and `i + 1`.
    load: Vec<u32>,
    cycles: bool,
    left: BTreeMap<u32, usize>,
    right: BTreeMap<u32, usize>,
    chosen: Vec<(Port, Port, u32)>,
    uf_stack: Vec<Vec<usize>>,
    out: &'a mut Vec<SubfloorDiagram>,
}

impl Search<'_> {
    fn remaining(map: &BTreeMap<u32, usize>) -> usize {
        map.values().sum()
    }

    fn find(parent: &[usize], mut v: usize) -> usize {
        while parent[v] != v {
            v = parent[v];
        }
        v
    }

    /// Gaps spanned by an elevator through black vertex `b`.
    fn span(&self, b: usize, src: Port, dst: Port) -> std::ops::Range<usize> {
        let from = match src {
            Port::End(_) => 0,
            Port::White(u) => u,
        };
        let to = match dst {
            Port::End(_) => self.n - 1,
            Port::White(v) => v,
        };
        debug_assert!(from <= b && b <= to);
        from..to
    }

    fn emit(&mut self) {
        let mut edges = Vec::new();
        let mut ends = Vec::new();
        for (&b, &(src, dst, w)) in self.blacks.iter().zip(&self.chosen) {
            match src {
                Port::End(_) => ends.push((b, EndSide::Left, w)),
                Port::White(u) => edges.push((u, b, w)),
            }
            match dst {
                Port::End(_) => ends.push((b, EndSide::Right, w)),
                Port::White(u) => edges.push((b, u, w)),
            }
        }
        edges.sort_unstable();
        ends.sort_unstable();
        self.out.push(SubfloorDiagram { n: self.n, colors: self.colors.clone(), edges, ends });
    }

    fn rec(&mut self, idx: usize) {
        let blacks_rem = self.blacks.len() - idx;
        if blacks_rem < Self::remaining(&self.left) || blacks_rem < Self::remaining(&self.right) {
            return;
        }
        if idx == self.blacks.len() {
            self.emit();
            return;
        }
        let b = self.blacks[idx];
        let mut sources: Vec<Port> = self.left.iter().filter(|(_, &c)| c > 0).map(|(&w, _)| Port::End(w)).collect();
        sources.extend((0..b).filter(|&v| self.colors[v] == Color::White).map(Port::White));
        let mut targets: Vec<Port> = self.right.iter().filter(|(_, &c)| c > 0).map(|(&w, _)| Port::End(w)).collect();
        targets.extend((b + 1..self.n).filter(|&v| self.colors[v] == Color::White).map(Port::White));

        for &src in &sources {
            for &dst in &targets {
                let span = self.span(b, src, dst);
                let room = self.capacity - span.clone().map(|g| self.load[g]).max().unwrap_or(0);
                let weights = match (src, dst) {
                    (Port::End(a), Port::End(c)) if a != c => continue,
                    (Port::End(a), _) | (_, Port::End(a)) if a > room => continue,
                    (Port::End(a), _) | (_, Port::End(a)) => a..=a,
                    (Port::White(_), Port::White(_)) => 1..=room,
                };
                let mut parent = self.uf_stack.last().unwrap().clone();
                if let (Port::White(u), Port::White(v)) = (src, dst) {
                    let (ru, rv) = (Self::find(&parent, u), Self::find(&parent, v));
                    if ru == rv && !self.cycles {
                        continue;
                    }
                    parent[ru] = rv;
                }
                self.uf_stack.push(parent);
                if let Port::End(w) = src {
                    *self.left.get_mut(&w).unwrap() -= 1;
                }
                if let Port::End(w) = dst {
                    *self.right.get_mut(&w).unwrap() -= 1;
                }
                for w in weights {
                    span.clone().for_each(|g| self.load[g] += w);
                    self.chosen.push((src, dst, w));
                    self.rec(idx + 1);
                    self.chosen.pop();
                    span.clone().for_each(|g| self.load[g] -= w);
                }
                if let Port::End(w) = src {
                    *self.left.get_mut(&w).unwrap() += 1;
                }
                if let Port::End(w) = dst {
                    *self.right.get_mut(&w).unwrap() += 1;
                }
                self.uf_stack.pop();
            }
        }
    }
}

fn multiset(p: &Partition) -> BTreeMap<u32, usize> {
    let mut m = BTreeMap::new();
    for &x in p.parts() {
        *m.entry(x).or_default() += 1;
    }
    m
}

/// Every subfloor diagram of partial degree `ν` on `n` vertices with `whites`
/// white vertices. The elevators crossing any vertical line, ends included,
/// carry total weight at most `|ν₁|`.
pub fn enumerate_subfloor_diagrams(
    nu1: &Partition,
    nu2: &Partition,
    whites: usize,
    n: usize,
) -> Result<Vec<SubfloorDiagram>, SubfloorError> {
    enumerate_graphs(nu1, nu2, whites, n, false)
}

/// Like [`enumerate_subfloor_diagrams`], optionally allowing cycles.
pub fn enumerate_graphs(
    nu1: &Partition,
    nu2: &Partition,
    whites: usize,
    n: usize,
    cycles: bool,
) -> Result<Vec<SubfloorDiagram>, SubfloorError> {
    let blacks = n.checked_sub(whites);
    if whites == 0 || blacks.is_none_or(|b| b < nu1.len().max(nu2.len())) {
        return Err(SubfloorError::InfeasibleCounts { n, whites });
    }
    let mut out = Vec::new();
    for white_pos in (0..n).combinations(whites) {
        let mut colors = vec![Color::Black; n];
        for &v in &white_pos {
            colors[v] = Color::White;
        }
        let blacks: Vec<usize> = (0..n).filter(|&v| colors[v] == Color::Black).collect();
        let mut search = Search {
            n,
            colors,
            blacks,
            capacity: nu1.size() as u32,
            load: vec![0; n.saturating_sub(1)],
            cycles,
            left: multiset(nu1),
            right: multiset(nu2),
            chosen: Vec::new(),
            uf_stack: vec![(0..n).collect()],
            out: &mut out,
        };
        search.rec(0);
    }
    Ok(out)
}

fn check_profile(profile: &TangencyProfile) -> Result<(), SubfloorError> {
    if !profile.mu2.is_all_ones() {
        return Err(SubfloorError::UnsupportedProfile(profile.mu2.clone()));
    }
    Ok(())
}

/// All diagrams for `profile` with their `μ`-multiplicities, zeros included.
pub fn weighted_diagrams(profile: &TangencyProfile, opts: &FloorOptions) -> Result<Vec<(SubfloorDiagram, Multiplicity)>, SubfloorError> {
    check_profile(profile)?;
    let diagrams = enumerate_graphs(&profile.nu1, &profile.nu2, profile.mu2.len(), profile.point_count(), !opts.connected)?;
    let mut cache = BlockCache::default();
    diagrams
        .into_iter()
        .map(|d| {
            let m = mu_multiplicity_with(&d, &profile.mu1, opts, &mut cache)?;
            Ok((d, m))
        })
        .collect()
}

/// `N^floor(μ, ν)` with the default options, comparable with the lattice
/// path count.
pub fn n_floor(profile: &TangencyProfile) -> Result<Multiplicity, SubfloorError> {
    n_floor_with(profile, &FloorOptions::default())
}

pub fn n_floor_with(profile: &TangencyProfile, opts: &FloorOptions) -> Result<Multiplicity, SubfloorError> {
    Ok(weighted_diagrams(profile, opts)?.into_iter().map(|(_, m)| m).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn big(n: u64) -> Multiplicity {
        Multiplicity::from(n)
    }

    use Color::{Black as B, White as W};

    fn f1() -> SubfloorDiagram {
        SubfloorDiagram {
            n: 4,
            colors: vec![B, W, W, B],
            edges: vec![(0, 1, 1), (2, 3, 1)],
            ends: vec![(0, EndSide::Left, 1), (3, EndSide::Right, 1)],
        }
    }

    fn f3() -> SubfloorDiagram {
        SubfloorDiagram {
            n: 8,
            colors: vec![B, B, W, W, W, W, B, B],
            edges: vec![(0, 2, 2), (1, 3, 1), (4, 6, 1), (5, 7, 2)],
            ends: vec![(0, EndSide::Left, 2), (1, EndSide::Left, 1), (6, EndSide::Right, 1), (7, EndSide::Right, 2)],
        }
    }

    #[test]
    fn divergences() {
        let f = f1();
        assert_eq!(f.divergence(1), 1);
        assert_eq!(f.divergence(2), -1);
        let f = f3();
        let d: Vec<i64> = f.whites().iter().map(|&v| f.divergence(v)).collect();
        assert_eq!(d, vec![2, 1, -1, -2]);
        assert_eq!(f.divergence(0), 0);
        f.validate(&part(&[2, 1]), &part(&[2, 1]), 4).unwrap();
    }

    #[test]
    fn fan_polygons() {
        let BlockFan::Polygon { polygon, boundary, .. } = block_fan_polygon(&[2, 1, -1, -2]).unwrap() else { panic!() };
        let expect = LatticePolygon::new([(0, 0), (1, 2), (2, 3), (3, 2), (4, 0)].map(LatticePoint::from)).unwrap();
        assert_eq!(polygon, expect);
        assert_eq!(boundary.total_steps(), 5);
        let BlockFan::Polygon { polygon, boundary, .. } = block_fan_polygon(&[1, -1]).unwrap() else { panic!() };
        assert_eq!(polygon.vertices(), &[(0, 0), (2, 0), (1, 1)].map(LatticePoint::from));
        let bottom = polygon.edge_between((0, 0).into(), (2, 0).into()).unwrap();
        assert_eq!(boundary.beta(bottom).counts(), &[0, 1]);
        assert_eq!(block_fan_polygon(&[0]).unwrap(), BlockFan::Singleton);
        assert_eq!(block_fan_polygon(&[-1, 1]), Err(SubfloorError::NotDecreasing));
        assert_eq!(block_fan_polygon(&[2, -1]), Err(SubfloorError::NonzeroSum(1)));
    }

    #[test]
    fn collinear_runs_merge() {
        let BlockFan::Polygon { polygon, boundary, chain } = block_fan_polygon(&[1, 1, -1, -1]).unwrap() else { panic!() };
        assert_eq!(polygon.edge_count(), 3);
        assert_eq!(chain.len(), 4);
        assert_eq!(boundary.total_steps(), 5);
    }

    #[test]
    fn block_multiplicities() {
        assert_eq!(block_multiplicity(&[1, -1]).unwrap(), big(2));
        assert_eq!(block_multiplicity(&[2, 1, -1, -2]).unwrap(), big(100));
        assert_eq!(block_multiplicity(&[0]).unwrap(), big(1));
        assert_eq!(block_multiplicity(&[3, -3]).unwrap(), big(6));
    }

    #[test]
    fn mu_multiplicities() {
        assert_eq!(mu_multiplicity(&f1(), &part(&[2])).unwrap(), big(2));
        assert_eq!(mu_multiplicity(&f3(), &part(&[4])).unwrap(), big(400));
        let first_180 = SubfloorDiagram {
            n: 5,
            colors: vec![B, B, W, W, B],
            edges: vec![(0, 2, 2), (1, 2, 1), (3, 4, 3)],
            ends: vec![(0, EndSide::Left, 2), (1, EndSide::Left, 1), (4, EndSide::Right, 3)],
        };
        first_180.validate(&part(&[2, 1]), &part(&[3]), 2).unwrap();
        assert_eq!(mu_multiplicity(&first_180, &part(&[2])).unwrap(), big(36));
        assert!(matches!(mu_multiplicity(&f1(), &part(&[3])), Err(SubfloorError::SizeMismatch { .. })));
    }

    #[test]
    fn forks_agree_with_chains_on_decreasing_blocks() {
        for divs in [vec![1, -1], vec![3, -3], vec![2, 1, -3], vec![3, 0, -3], vec![2, 1, -1, -2], vec![1, 1, -1, -1]] {
            let xs: Vec<i64> = (0..divs.len() as u32).map(|i| 5i64.pow(i)).collect();
            assert_eq!(fork_multiplicity(&xs, &divs).unwrap(), block_multiplicity(&divs).unwrap(), "{divs:?}");
        }
    }

    #[test]
    fn forks_out_of_order() {
        // (3,-1) merge first: |det((3,-1),(-2,-1))| = 5, then 3.
        assert_eq!(fork_multiplicity(&[0, 1, 3], &[3, -2, -1]).unwrap(), big(15));
        assert_eq!(fork_multiplicity(&[0, 1], &[-1, 1]).unwrap(), big(0));
        assert_eq!(fork_multiplicity(&[0, 1], &[0, 0]).unwrap(), big(0));
        assert_eq!(fork_multiplicity(&[4], &[0]).unwrap(), big(1));
        assert_eq!(fork_multiplicity(&[0, 1], &[1, 0]), Err(SubfloorError::NonzeroSum(1)));
    }

    #[test]
    fn floor_options() {
        let p = TangencyProfile::from_parts(&[3], &[1, 1, 1], &[2, 1], &[3]).unwrap();
        assert_eq!(n_floor_with(&p, &FloorOptions::decreasing()).unwrap(), big(1116));
        assert_eq!(n_floor(&p).unwrap(), big(1386));
        let p = TangencyProfile::from_parts(&[2], &[1, 1], &[2, 1], &[2, 1]).unwrap();
        assert_eq!(n_floor_with(&p, &FloorOptions::irreducible()).unwrap(), big(464));
        assert_eq!(n_floor(&p).unwrap(), big(512));
    }

    #[test]
    fn set_partition_counts() {
        let mut out = Vec::new();
        set_partitions(&[0, 1, 2, 3], &[2, 2], &mut out);
        assert_eq!(out.len(), 3);
        out.clear();
        set_partitions(&[0, 1, 2, 3], &[2, 1, 1], &mut out);
        assert_eq!(out.len(), 6);
        out.clear();
        set_partitions(&[0, 1, 2], &[1, 1, 1], &mut out);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn enumeration() {
        let one = enumerate_subfloor_diagrams(&part(&[1]), &part(&[1]), 2, 4).unwrap();
        let mu = part(&[2]);
        let nonzero: Vec<_> = one.iter().filter(|d| !mu_multiplicity(d, &mu).unwrap().is_zero()).collect();
        assert_eq!(nonzero, vec![&f1()]);
        for d in &one {
            d.validate(&part(&[1]), &part(&[1]), 2).unwrap();
        }
        let p = TangencyProfile::from_parts(&[2], &[1, 1], &[2, 1], &[3]).unwrap();
        let weighted = weighted_diagrams(&p, &FloorOptions::default()).unwrap();
        assert_eq!(weighted.iter().filter(|(_, m)| !m.is_zero()).count(), 8);
        assert!(matches!(
            enumerate_subfloor_diagrams(&part(&[1]), &part(&[1]), 0, 4),
            Err(SubfloorError::InfeasibleCounts { .. })
        ));
    }

    #[test]
    fn n_floor_examples() {
        let p = |a: &[u32], b: &[u32], c: &[u32], d: &[u32]| TangencyProfile::from_parts(a, b, c, d).unwrap();
        assert_eq!(n_floor(&p(&[2], &[1, 1], &[1], &[1])).unwrap(), big(2));
        assert_eq!(n_floor(&p(&[2], &[1, 1], &[2, 1], &[3])).unwrap(), big(180));
        assert_eq!(n_floor(&p(&[2], &[1, 1], &[1, 2], &[3])).unwrap(), big(180));
        assert_eq!(n_floor(&p(&[2], &[1, 1], &[1, 1], &[2])).unwrap(), big(20));
        assert!(matches!(n_floor(&p(&[2], &[2], &[1], &[1])), Err(SubfloorError::UnsupportedProfile(_))));
    }
}

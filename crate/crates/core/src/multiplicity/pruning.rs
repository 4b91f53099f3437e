//! Cheap certificates that a path has multiplicity zero.

use std::collections::HashMap;
use std::fmt;

use super::MultiplicityError;
use crate::geometry::{BoundaryData, LatticePoint, LatticePolygon, RectSide, SideEdge};
use crate::paths::LatticePath;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PruneRule {
    /// Every down-step of either β-initial path must already be a down-step
    /// of the path. Holds for every polygon.
    DownSteps,
    /// Rectangle with an all-ones top edge: no step moves two or more units
    /// right, and no step moves right and down at once.
    NoDownRight,
    /// Rectangle with single-step bottom and right edges: no point in the
    /// relative interior of either edge.
    ForbiddenBoundaryPoints,
}

impl fmt::Display for PruneRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PruneRule::DownSteps => "down-steps",
            PruneRule::NoDownRight => "no-down-right",
            PruneRule::ForbiddenBoundaryPoints => "forbidden-boundary-points",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Keep,
    Discard,
}

type StepCounts = HashMap<LatticePoint, usize>;

/// A set of rules checked against one polygon and boundary.
#[derive(Clone, Debug)]
pub struct Pruner {
    rules: Vec<PruneRule>,
    initial_downs: [StepCounts; 2],
    forbidden: Vec<(LatticePoint, LatticePoint)>,
}

fn down_steps(edges: &[SideEdge], boundary: &BoundaryData) -> StepCounts {
    let mut out = StepCounts::new();
    for e in edges {
        let len = e.lattice_length() as i64;
        let d = e.to - e.from;
        let unit = LatticePoint::new(d.x / len, d.y / len);
        if unit.y >= 0 {
            continue;
        }
        for k in boundary.beta(e.id).step_lengths() {
            let k = k as i64;
            *out.entry(LatticePoint::new(unit.x * k, unit.y * k)).or_default() += 1;
        }
    }
    out
}

fn check(rule: PruneRule, polygon: &LatticePolygon, boundary: &BoundaryData) -> Result<(), MultiplicityError> {
    let fail = |reason| Err(MultiplicityError::HypothesisNotMet { rule, reason });
    let edge = |s| polygon.rectangle_edge(s).map(|id| boundary.beta(id));
    match rule {
        PruneRule::DownSteps => Ok(()),
        PruneRule::NoDownRight => match edge(RectSide::Top) {
            None => fail("polygon is not an axis-aligned rectangle"),
            Some(b) if b.counts().len() != 1 => fail("top edge has a step longer than one"),
            Some(_) => Ok(()),
        },
        PruneRule::ForbiddenBoundaryPoints => match (edge(RectSide::Bottom), edge(RectSide::Right)) {
            (Some(bottom), Some(right)) => {
                if bottom.step_count() == 1 && right.step_count() == 1 {
                    Ok(())
                } else {
                    fail("bottom and right edges must each be a single step")
                }
            }
            _ => fail("polygon is not an axis-aligned rectangle"),
        },
    }
}

impl Pruner {
    pub fn new(polygon: &LatticePolygon, boundary: &BoundaryData, rules: &[PruneRule]) -> Result<Self, MultiplicityError> {
        for &rule in rules {
            check(rule, polygon, boundary)?;
        }
        let sides = polygon.boundary_sides();
        let forbidden = [RectSide::Bottom, RectSide::Right]
            .into_iter()
            .filter_map(|s| polygon.rectangle_edge(s))
            .map(|id| {
                let e = polygon.edge(id);
                (e.start, e.end)
            })
            .collect();
        Ok(Self {
            rules: rules.to_vec(),
            initial_downs: [down_steps(&sides.positive, boundary), down_steps(&sides.negative, boundary)],
            forbidden,
        })
    }

    /// Every rule whose hypotheses hold.
    pub fn applicable(polygon: &LatticePolygon, boundary: &BoundaryData) -> Self {
        let rules: Vec<PruneRule> = [PruneRule::DownSteps, PruneRule::NoDownRight, PruneRule::ForbiddenBoundaryPoints]
            .into_iter()
            .filter(|&r| check(r, polygon, boundary).is_ok())
            .collect();
        Self::new(polygon, boundary, &rules).expect("rules were filtered")
    }

    pub fn rules(&self) -> &[PruneRule] {
        &self.rules
    }

    pub fn verdict(&self, path: &LatticePath) -> Verdict {
        if self.rules.iter().any(|&r| self.discards(r, path)) {
            Verdict::Discard
        } else {
            Verdict::Keep
        }
    }

    pub fn keep(&self, path: &LatticePath) -> bool {
        self.verdict(path) == Verdict::Keep
    }

    fn discards(&self, rule: PruneRule, path: &LatticePath) -> bool {
        match rule {
            PruneRule::DownSteps => {
                let mut have = StepCounts::new();
                for s in path.steps().filter(|s| s.y < 0) {
                    *have.entry(s).or_default() += 1;
                }
                self.initial_downs
                    .iter()
                    .any(|need| need.iter().any(|(s, &n)| have.get(s).copied().unwrap_or(0) < n))
            }
            PruneRule::NoDownRight => path.steps().any(|s| s.x >= 2 || (s.x > 0 && s.y < 0)),
            PruneRule::ForbiddenBoundaryPoints => path.points().iter().any(|&v| {
                self.forbidden.iter().any(|&(a, b)| {
                    v != a && v != b && (v.x == a.x && a.x == b.x || v.y == a.y && a.y == b.y) && {
                        let (x0, x1) = (a.x.min(b.x), a.x.max(b.x));
                        let (y0, y1) = (a.y.min(b.y), a.y.max(b.y));
                        (x0..=x1).contains(&v.x) && (y0..=y1).contains(&v.y)
                    }
                })
            }),
        }
    }
}

/// Applies a single rule, refusing when its hypotheses fail.
pub fn pruning_predicate(
    path: &LatticePath,
    polygon: &LatticePolygon,
    boundary: &BoundaryData,
    rule: PruneRule,
) -> Result<Verdict, MultiplicityError> {
    Ok(Pruner::new(polygon, boundary, &[rule])?.verdict(path))
}

//! Counts over integer grids of templated profiles, and exact polynomial fits
//! per chamber of a wall arrangement.

mod fit;
mod linexpr;
mod poly;
mod template;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use fit::{fit_polynomial, Fit, Sample};
pub use linexpr::LinExpr;
pub use poly::{monomials, Monomial, Polynomial};
pub use template::{ProfileTemplate, Wall};

use crate::counting::{n_trop_p1p1, CountError};
use crate::multiplicity::Multiplicity;
use crate::subfloor::{n_floor, SubfloorError};

#[derive(Debug, Error)]
pub enum PolyfitError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("no range given for variable {0}")]
    MissingRange(String),
    #[error("invalid instance at {point:?}: {reason}")]
    InvalidInstance { point: Vec<i64>, reason: String },
    #[error("point lies on wall {0}")]
    OnWall(String),
    #[error("need {needed} independent samples, have {independent}")]
    InsufficientSamples { needed: usize, independent: usize },
    #[error("fit disagrees at {point:?}: sample {expected}, polynomial {found}")]
    FitFailed { point: Vec<i64>, expected: String, found: String },
    #[error("the subfloor method needs genus 0")]
    SubfloorGenus,
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Subfloor(#[from] SubfloorError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Lattice,
    Subfloor,
    Both,
}

impl FromStr for Method {
    type Err = PolyfitError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lattice" => Ok(Method::Lattice),
            "subfloor" => Ok(Method::Subfloor),
            "both" => Ok(Method::Both),
            _ => Err(PolyfitError::Parse(format!("unknown method {s:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Lattice => "lattice",
            Method::Subfloor => "subfloor",
            Method::Both => "both",
        })
    }
}

fn decimal<S: serde::Serializer>(v: &Option<Multiplicity>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(m) => s.serialize_str(&m.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridSample {
    pub point: Vec<i64>,
    #[serde(serialize_with = "decimal")]
    pub lattice: Option<Multiplicity>,
    #[serde(serialize_with = "decimal")]
    pub subfloor: Option<Multiplicity>,
}

impl GridSample {
    /// The lattice value when present, else the subfloor value.
    pub fn value(&self) -> &Multiplicity {
        self.lattice.as_ref().or(self.subfloor.as_ref()).expect("at least one method ran")
    }

    /// Whether both methods ran and agree.
    pub fn agrees(&self) -> Option<bool> {
        Some(self.lattice.as_ref()? == self.subfloor.as_ref()?)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SampleTable {
    pub variables: Vec<String>,
    pub samples: Vec<GridSample>,
    /// Points whose instantiation is not a valid profile.
    pub skipped: Vec<Vec<i64>>,
}

/// Inclusive ranges per variable: the template's own, overridden by `ranges`.
pub fn resolve_ranges(
    template: &ProfileTemplate,
    ranges: &BTreeMap<String, (i64, i64)>,
) -> Result<Vec<(i64, i64)>, PolyfitError> {
    if let Some(v) = ranges.keys().find(|v| !template.variables().contains(v)) {
        return Err(PolyfitError::UnknownVariable(v.clone()));
    }
    template
        .variables()
        .into_iter()
        .map(|v| ranges.get(&v).or(template.ranges.get(&v)).copied().ok_or(PolyfitError::MissingRange(v)))
        .collect()
}

/// Evaluates the count at every grid point, in parallel. Points whose
/// instantiation is invalid (a nonpositive entry, unequal sizes) are listed
/// in `skipped`.
pub fn evaluate_grid(
    template: &ProfileTemplate,
    ranges: &BTreeMap<String, (i64, i64)>,
    genus: u32,
    method: Method,
) -> Result<SampleTable, PolyfitError> {
    if genus > 0 && method != Method::Lattice {
        return Err(PolyfitError::SubfloorGenus);
    }
    let bounds = resolve_ranges(template, ranges)?;
    let points: Vec<Vec<i64>> = if bounds.is_empty() {
        vec![Vec::new()]
    } else {
        use itertools::Itertools;
        bounds.iter().map(|&(lo, hi)| lo..=hi).multi_cartesian_product().collect()
    };
    let results: Vec<Result<Result<GridSample, Vec<i64>>, PolyfitError>> = points
        .into_par_iter()
        .map(|point| {
            let profile = match template.instantiate(&point) {
                Ok(p) => p,
                Err(PolyfitError::InvalidInstance { .. }) => return Ok(Err(point)),
                Err(e) => return Err(e),
            };
            let lattice = match method {
                Method::Subfloor => None,
                _ => Some(n_trop_p1p1(&profile, genus)?),
            };
            let subfloor = match method {
                Method::Lattice => None,
                _ => Some(n_floor(&profile)?),
            };
            Ok(Ok(GridSample { point, lattice, subfloor }))
        })
        .collect();
    let mut table = SampleTable { variables: template.variables(), ..Default::default() };
    for r in results {
        match r? {
            Ok(s) => table.samples.push(s),
            Err(p) => table.skipped.push(p),
        }
    }
    Ok(table)
}

/// Sign of `x_I − x_J` for every wall.
pub fn chamber_of(template: &ProfileTemplate, point: &[i64], walls: &[Wall]) -> Result<Vec<i8>, PolyfitError> {
    let values: BTreeMap<String, i64> = template.variables().into_iter().zip(point.iter().copied()).collect();
    walls
        .iter()
        .map(|w| match w.form.eval(&values)?.signum() {
            0 => Err(PolyfitError::OnWall(w.to_string())),
            s => Ok(s as i8),
        })
        .collect()
}

/// `|μ₁| + ℓ(ν₁) + ℓ(ν₂) + 2g`, maximized over the samples.
pub fn default_degree_bound(template: &ProfileTemplate, table: &SampleTable, genus: u32) -> u32 {
    table
        .samples
        .iter()
        .filter_map(|s| template.instantiate(&s.point).ok())
        .map(|p| p.mu1.size() as u32 + (p.nu1.len() + p.nu2.len()) as u32 + 2 * genus)
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChamberReport {
    pub signature: Vec<i8>,
    pub samples: usize,
    #[serde(flatten, serialize_with = "fit_or_error")]
    pub fit: Result<Fit, String>,
}

fn fit_or_error<S: serde::Serializer>(r: &Result<Fit, String>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    match r {
        Ok(fit) => fit.serialize(s),
        Err(e) => {
            let mut m = s.serialize_map(Some(1))?;
            m.serialize_entry("error", e)?;
            m.end()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChamberSummary {
    pub variables: Vec<String>,
    pub method: Method,
    pub genus: u32,
    pub degree_bound: u32,
    pub walls: Vec<Wall>,
    pub chambers: Vec<ChamberReport>,
    pub on_wall: Vec<Vec<i64>>,
    pub skipped: Vec<Vec<i64>>,
    /// Points where the two methods disagree.
    pub disagreements: Vec<Vec<i64>>,
    /// Set when every chamber fitted and all fits coincide.
    pub global: Option<Polynomial>,
    pub table: SampleTable,
}

impl ChamberSummary {
    /// Number of distinct polynomials among the fitted chambers.
    pub fn distinct_polynomials(&self) -> usize {
        let mut seen: Vec<&Polynomial> = Vec::new();
        for c in &self.chambers {
            if let Ok(f) = &c.fit {
                if !seen.contains(&&f.polynomial) {
                    seen.push(&f.polynomial);
                }
            }
        }
        seen.len()
    }
}

impl fmt::Display for ChamberSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variables: {}", self.variables.join(", "))?;
        writeln!(f, "method: {}, genus {}, degree bound {}", self.method, self.genus, self.degree_bound)?;
        writeln!(
            f,
            "samples: {} evaluated, {} on walls, {} skipped",
            self.table.samples.len(),
            self.on_wall.len(),
            self.skipped.len()
        )?;
        for w in &self.walls {
            writeln!(f, "wall {w}")?;
        }
        for c in &self.chambers {
            let sig: String = c.signature.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
            match &c.fit {
                Ok(fit) => writeln!(f, "chamber [{sig}] {} samples, {} held out: {}", c.samples, fit.held_out, fit.polynomial)?,
                Err(e) => writeln!(f, "chamber [{sig}] {} samples: {e}", c.samples)?,
            }
        }
        if !self.disagreements.is_empty() {
            writeln!(f, "methods disagree at {:?}", self.disagreements)?;
        }
        match &self.global {
            Some(p) => write!(f, "global polynomial: {p}"),
            None => write!(f, "no single global polynomial"),
        }
    }
}

/// Evaluates the grid, sorts samples into chambers, and fits each chamber.
/// Samples on a default wall are set aside even when `walls` omits it.
pub fn verify_chambers(
    template: &ProfileTemplate,
    walls: &[Wall],
    ranges: &BTreeMap<String, (i64, i64)>,
    degree_bound: Option<u32>,
    genus: u32,
    method: Method,
) -> Result<ChamberSummary, PolyfitError> {
    let table = evaluate_grid(template, ranges, genus, method)?;
    let bound = degree_bound.unwrap_or_else(|| default_degree_bound(template, &table, genus));
    let mut groups: BTreeMap<Vec<i8>, Vec<Sample>> = BTreeMap::new();
    let mut on_wall = Vec::new();
    let defaults = template.default_walls();
    for s in &table.samples {
        if chamber_of(template, &s.point, &defaults).is_err() {
            on_wall.push(s.point.clone());
            continue;
        }
        match chamber_of(template, &s.point, walls) {
            Ok(sig) => groups.entry(sig).or_default().push(Sample { point: s.point.clone(), value: BigInt::from(s.value().clone()) }),
            Err(PolyfitError::OnWall(_)) => on_wall.push(s.point.clone()),
            Err(e) => return Err(e),
        }
    }
    let vars = template.variables();
    let chambers: Vec<ChamberReport> = groups
        .into_par_iter()
        .map(|(signature, samples)| ChamberReport {
            signature,
            samples: samples.len(),
            fit: fit_polynomial(&vars, &samples, bound).map_err(|e| e.to_string()),
        })
        .collect();
    let fits: Vec<&Polynomial> = chambers.iter().filter_map(|c| c.fit.as_ref().ok().map(|f| &f.polynomial)).collect();
    let global = (!fits.is_empty() && fits.len() == chambers.len() && fits.iter().all(|p| *p == fits[0])).then(|| fits[0].clone());
    let disagreements = table.samples.iter().filter(|s| s.agrees() == Some(false)).map(|s| s.point.clone()).collect();
    Ok(ChamberSummary {
        variables: vars,
        method,
        genus,
        degree_bound: bound,
        walls: walls.to_vec(),
        chambers,
        on_wall,
        skipped: table.skipped.clone(),
        disagreements,
        global,
        table,
    })
}

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::linexpr::LinExpr;
use super::PolyfitError;
use crate::geometry::TangencyProfile;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Int(i64),
    Text(String),
}

fn parse_entries(raw: &[RawEntry]) -> Result<Vec<LinExpr>, PolyfitError> {
    let mut out = Vec::new();
    for e in raw {
        match e {
            RawEntry::Int(k) => out.push(LinExpr::constant(*k)),
            RawEntry::Text(s) => {
                let (body, reps) = match s.rsplit_once('^') {
                    Some((b, r)) => (b, r.trim().parse::<usize>().map_err(|_| PolyfitError::Parse(format!("bad repetition in {s:?}")))?),
                    None => (s.as_str(), 1),
                };
                let expr: LinExpr = body.parse()?;
                out.extend(std::iter::repeat_n(expr, reps));
            }
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
struct RawTemplate {
    mu1: Vec<RawEntry>,
    mu2: Vec<RawEntry>,
    nu1: Vec<RawEntry>,
    nu2: Vec<RawEntry>,
    #[serde(default)]
    walls: Vec<WallSpec>,
    #[serde(default = "yes")]
    default_walls: bool,
    #[serde(default)]
    ranges: BTreeMap<String, (i64, i64)>,
    #[serde(default)]
    genus: u32,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
struct WallSpec {
    lhs: Vec<usize>,
    rhs: Vec<usize>,
}

/// A tangency profile whose entries are affine forms in named variables.
/// Tied entries such as `n = n₁ + n₂` are written directly as forms.
#[derive(Clone, Debug)]
pub struct ProfileTemplate {
    pub mu1: Vec<LinExpr>,
    pub mu2: Vec<LinExpr>,
    pub nu1: Vec<LinExpr>,
    pub nu2: Vec<LinExpr>,
    /// Walls in addition to [`ProfileTemplate::default_walls`].
    pub extra_walls: Vec<Wall>,
    /// Whether [`ProfileTemplate::walls`] includes the default walls.
    pub use_default_walls: bool,
    /// Default sampling ranges, inclusive.
    pub ranges: BTreeMap<String, (i64, i64)>,
    pub genus: u32,
}

impl ProfileTemplate {
    /// Parses entry lists of integers or strings such as `"n1+n2"` and
    /// `"1^3"` (three copies of `1`).
    pub fn new(mu1: &[&str], mu2: &[&str], nu1: &[&str], nu2: &[&str]) -> Result<Self, PolyfitError> {
        let conv = |v: &[&str]| parse_entries(&v.iter().map(|s| RawEntry::Text(s.to_string())).collect::<Vec<_>>());
        Ok(Self {
            mu1: conv(mu1)?,
            mu2: conv(mu2)?,
            nu1: conv(nu1)?,
            nu2: conv(nu2)?,
            extra_walls: Vec::new(),
            use_default_walls: true,
            ranges: BTreeMap::new(),
            genus: 0,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, PolyfitError> {
        let raw: RawTemplate = serde_json::from_str(text).map_err(|e| PolyfitError::Parse(e.to_string()))?;
        let mut t = Self {
            mu1: parse_entries(&raw.mu1)?,
            mu2: parse_entries(&raw.mu2)?,
            nu1: parse_entries(&raw.nu1)?,
            nu2: parse_entries(&raw.nu2)?,
            extra_walls: Vec::new(),
            use_default_walls: raw.default_walls,
            ranges: raw.ranges,
            genus: raw.genus,
        };
        for w in raw.walls {
            let wall = t.wall(&w.lhs, &w.rhs)?;
            t.extra_walls.push(wall);
        }
        Ok(t)
    }

    /// Sorted variable names.
    pub fn variables(&self) -> Vec<String> {
        let set: BTreeSet<&str> = [&self.mu1, &self.mu2, &self.nu1, &self.nu2]
            .into_iter()
            .flatten()
            .flat_map(LinExpr::variables)
            .collect();
        set.into_iter().map(String::from).collect()
    }

    /// `ν₁` entries followed by `ν₂` entries.
    pub fn fiber_entries(&self) -> Vec<LinExpr> {
        self.nu1.iter().chain(&self.nu2).cloned().collect()
    }

    fn bind(&self, point: &[i64]) -> BTreeMap<String, i64> {
        self.variables().into_iter().zip(point.iter().copied()).collect()
    }

    /// The profile at `point` (values in [`ProfileTemplate::variables`]
    /// order).
    pub fn instantiate(&self, point: &[i64]) -> Result<TangencyProfile, PolyfitError> {
        let values = self.bind(point);
        let eval = |v: &[LinExpr]| -> Result<Vec<u32>, PolyfitError> {
            v.iter()
                .map(|e| {
                    let x = e.eval(&values)?;
                    u32::try_from(x).ok().filter(|&x| x > 0).ok_or_else(|| PolyfitError::InvalidInstance {
                        point: point.to_vec(),
                        reason: format!("entry {e} = {x} is not positive"),
                    })
                })
                .collect()
        };
        TangencyProfile::from_parts(&eval(&self.mu1)?, &eval(&self.mu2)?, &eval(&self.nu1)?, &eval(&self.nu2)?)
            .map_err(|e| PolyfitError::InvalidInstance { point: point.to_vec(), reason: e.to_string() })
    }

    /// The wall `Σ_{lhs} x = Σ_{rhs} x` over fiber entry indices.
    pub fn wall(&self, lhs: &[usize], rhs: &[usize]) -> Result<Wall, PolyfitError> {
        let entries = self.fiber_entries();
        let mut form = LinExpr::default();
        for (idx, k) in lhs.iter().map(|&i| (i, 1)).chain(rhs.iter().map(|&i| (i, -1))) {
            let e = entries.get(idx).ok_or_else(|| PolyfitError::Parse(format!("wall index {idx} out of range")))?;
            form.add_scaled(e, k);
        }
        let disjoint = lhs.iter().all(|i| !rhs.contains(i));
        if lhs.is_empty() || rhs.is_empty() || !disjoint {
            return Err(PolyfitError::Parse("wall sides must be nonempty and disjoint".into()));
        }
        Ok(Wall { lhs: lhs.to_vec(), rhs: rhs.to_vec(), form })
    }

    /// Every `x_I = x_J` over disjoint nonempty sets of fiber entries whose
    /// difference can vanish with all variables at least 1, one wall per form
    /// up to sign.
    pub fn default_walls(&self) -> Vec<Wall> {
        let k = self.fiber_entries().len();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        // 0: unused, 1: lhs, 2: rhs
        for labels in (0..k).map(|_| 0..3u8).multi_cartesian_product() {
            let lhs: Vec<usize> = (0..k).filter(|&i| labels[i] == 1).collect();
            let rhs: Vec<usize> = (0..k).filter(|&i| labels[i] == 2).collect();
            if lhs.is_empty() || rhs.is_empty() || lhs > rhs {
                continue;
            }
            let wall = self.wall(&lhs, &rhs).expect("indices in range");
            if wall.form.is_constant() || definite(&wall.form) {
                continue;
            }
            if seen.insert(canonical(&wall.form)) {
                out.push(wall);
            }
        }
        out
    }

    /// The default walls (unless disabled) followed by the extra ones, one
    /// per form up to sign.
    pub fn walls(&self) -> Vec<Wall> {
        let mut out = if self.use_default_walls { self.default_walls() } else { Vec::new() };
        let mut seen: BTreeSet<String> = out.iter().map(|w| canonical(&w.form)).collect();
        for w in &self.extra_walls {
            if seen.insert(canonical(&w.form)) {
                out.push(w.clone());
            }
        }
        out
    }
}

/// Whether the form keeps one strict sign once every variable is at least 1.
fn definite(form: &LinExpr) -> bool {
    let at_one = form.constant + form.coeffs.values().sum::<i64>();
    form.coeffs.values().all(|&c| c >= 0) && at_one > 0 || form.coeffs.values().all(|&c| c <= 0) && at_one < 0
}

fn canonical(form: &LinExpr) -> String {
    let lead = form.coeffs.values().next().copied().unwrap_or(0);
    if lead < 0 { form.negated() } else { form.clone() }.to_string()
}

/// `Σ_{i∈lhs} eᵢ = Σ_{j∈rhs} eⱼ` over fiber entries `eᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wall {
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
    /// `Σ_{lhs} − Σ_{rhs}` as a form in the variables.
    #[serde(serialize_with = "as_string")]
    pub form: LinExpr,
}

fn as_string<S: serde::Serializer>(e: &LinExpr, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{e} = 0"))
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} vs {{{}}}: {} ≠ 0", self.lhs.iter().join(","), self.rhs.iter().join(","), self.form)
    }
}

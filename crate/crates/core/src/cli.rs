//! Command-line front end. Exit codes: 0 success, 1 the two counting methods
//! disagree, 2 invalid input, 3 internal error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::counting::{self, CountError, CountOptions};
use crate::geometry::{BoundaryData, GeometryError, LatticePolygon, Partition, TangencyProfile};
use crate::io::{self, IoError};
use crate::multiplicity::{Evaluator, MultiplicityError, TurnStrategy};
use crate::paths::{LatticePath, Side};
use crate::polyfit::{self, Method, PolyfitError, ProfileTemplate};
use crate::subfloor::{self, SubfloorError};

#[derive(Parser, Debug)]
#[command(name = "tropcount", version, about = "Exact counts of tropical curves via lattice paths and subfloor diagrams")]
pub struct Cli {
    /// Suppress the timing line on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiplicity of one lattice path.
    Multiplicity {
        polygon: PathBuf,
        beta: PathBuf,
        path: PathBuf,
        /// Also check that the path has length |β̄| + g − 1.
        #[arg(long)]
        genus: Option<u32>,
        /// Evaluate one side only: positive or negative.
        #[arg(long)]
        side: Option<String>,
        /// Turn choice for --side: first, any, or a permutation such as 2,1,3.
        #[arg(long, default_value = "first")]
        strategy: String,
    },
    /// Sum of multiplicities over all λ-increasing paths of length |β̄| + g − 1.
    Count {
        polygon: PathBuf,
        beta: PathBuf,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// Worker threads (default: all cores).
        #[arg(long)]
        parallel: Option<usize>,
        /// Skip paths certified zero by the pruning rules.
        #[arg(long)]
        prune: bool,
    },
    /// The paths of nonzero multiplicity as a JSON object.
    NonzeroPaths {
        polygon: PathBuf,
        beta: PathBuf,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// Worker threads (default: all cores).
        #[arg(long)]
        parallel: Option<usize>,
    },
    /// Relative count in P¹×P¹ for a tangency profile.
    P1p1 {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// lattice, subfloor or both.
        #[arg(long, default_value = "lattice")]
        method: String,
        /// Worker threads (default: all cores).
        #[arg(long)]
        parallel: Option<usize>,
    },
    /// Subfloor diagrams of a profile with their multiplicities, or the
    /// μ-multiplicity of one diagram file.
    Diagrams {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Evaluate this diagram instead of enumerating.
        #[arg(long)]
        diagram: Option<PathBuf>,
        /// Include diagrams of multiplicity zero.
        #[arg(long)]
        all: bool,
    },
    /// Evaluate a profile template over a grid and fit a polynomial per chamber.
    Polyscan {
        template: PathBuf,
        /// Ranges such as n1=1:3,n2=1:3; override the template's own.
        #[arg(long)]
        ranges: Option<String>,
        /// Maximum total degree of the fitted polynomials (default: |μ₁| + ℓ(ν₁) + ℓ(ν₂) + 2g).
        #[arg(long)]
        degree_bound: Option<u32>,
        /// lattice, subfloor or both.
        #[arg(long, default_value = "lattice")]
        method: String,
        /// Overrides the template genus.
        #[arg(long)]
        genus: Option<u32>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        parallel: Option<usize>,
    },
}

#[derive(clap::Args, Debug)]
struct ProfileArgs {
    /// Tangency along the first section, e.g. 2,1 or 1^3.
    #[arg(long)]
    mu1: String,
    /// Tangency along the second section (default: all ones).
    #[arg(long)]
    mu2: Option<String>,
    /// Tangency along the first fiber.
    #[arg(long)]
    nu1: String,
    /// Tangency along the second fiber.
    #[arg(long)]
    nu2: String,
}

impl ProfileArgs {
    /// `μ₂` defaults to `(1,…,1)`.
    fn profile(&self) -> Result<TangencyProfile, Failure> {
        let part = |s: &str| s.parse::<Partition>().map_err(|e| Failure::Input(format!("bad partition {s:?}: {e}")));
        let mu1 = part(&self.mu1)?;
        let mu2 = match &self.mu2 {
            Some(s) => part(s)?,
            None => Partition::ones(mu1.size() as usize),
        };
        Ok(TangencyProfile::new(mu1, mu2, part(&self.nu1)?, part(&self.nu2)?)?)
    }
}

enum Failure {
    /// Stdout was closed early, e.g. by `| head`.
    ClosedPipe,
    Disagree,
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::ClosedPipe => 0,
            Failure::Disagree => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<MultiplicityError> for Failure {
    fn from(e: MultiplicityError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        match e {
            CountError::ThreadPool(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<SubfloorError> for Failure {
    fn from(e: SubfloorError) -> Self {
        match e {
            SubfloorError::DegenerateFork => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<PolyfitError> for Failure {
    fn from(e: PolyfitError) -> Self {
        match e {
            PolyfitError::Count(c) => c.into(),
            PolyfitError::Subfloor(s) => s.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        match e.kind() {
            std::io::ErrorKind::BrokenPipe => Failure::ClosedPipe,
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn load(polygon: &PathBuf, beta: &PathBuf) -> Result<(LatticePolygon, BoundaryData), Failure> {
    let poly = io::parse_polygon(&io::read_file(polygon)?)?;
    let boundary = io::parse_boundary(&io::read_file(beta)?, &poly)?;
    Ok((poly, boundary))
}

fn count_options(parallel: Option<usize>) -> Result<CountOptions, Failure> {
    if parallel == Some(0) {
        return Err(Failure::Input("--parallel must be at least 1".into()));
    }
    Ok(CountOptions { threads: parallel, ..Default::default() })
}

fn parse_strategy(s: &str) -> Result<TurnStrategy, Failure> {
    match s {
        "first" => Ok(TurnStrategy::First),
        "any" => Ok(TurnStrategy::AnyHeuristic),
        _ => s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map(TurnStrategy::Sigma)
            .map_err(|_| Failure::Input(format!("bad strategy {s:?}"))),
    }
}

fn parse_ranges(s: &str) -> Result<BTreeMap<String, (i64, i64)>, Failure> {
    let bad = || Failure::Input(format!("bad ranges {s:?}; expected e.g. n1=1:3,n2=2:4"));
    if s.trim().is_empty() {
        return Err(bad());
    }
    s.split(',')
        .map(|item| {
            let (name, span) = item.split_once('=').ok_or_else(bad)?;
            let (lo, hi) = span.split_once(':').ok_or_else(bad)?;
            Ok((name.trim().to_string(), (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?)))
        })
        .collect()
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Multiplicity { polygon, beta, path, genus, side, strategy } => {
            let (poly, boundary) = load(&polygon, &beta)?;
            let gamma: LatticePath = io::parse_path(&io::read_file(&path)?, Some(&poly))?;
            if let Some(g) = genus {
                let expected = counting::path_length(&boundary, g)?;
                if gamma.len() != expected {
                    return Err(Failure::Input(format!("path has {} steps but genus {g} needs {expected}", gamma.len())));
                }
            }
            let mut eval = Evaluator::new(&poly, &boundary);
            let value = match side.as_deref() {
                None => eval.mult(&gamma),
                Some(s) => {
                    let side = match s {
                        "positive" | "+" => Side::Positive,
                        "negative" | "-" => Side::Negative,
                        _ => return Err(Failure::Input(format!("bad side {s:?}"))),
                    };
                    eval.mult_side(&gamma, side, &parse_strategy(&strategy)?)?
                }
            };
            writeln!(out, "{value}")?;
        }
        Command::Count { polygon, beta, genus, parallel, prune } => {
            let (poly, boundary) = load(&polygon, &beta)?;
            let opts = CountOptions { prune, ..count_options(parallel)? };
            writeln!(out, "{}", counting::count_with(&poly, &boundary, genus, &opts)?)?;
        }
        Command::NonzeroPaths { polygon, beta, genus, parallel } => {
            let (poly, boundary) = load(&polygon, &beta)?;
            let map = counting::nonzero_paths_with(&poly, &boundary, genus, &count_options(parallel)?)?;
            let total: crate::Multiplicity = map.values().sum();
            let doc = json!({ "count": map.len(), "total": total.to_string(), "paths": io::path_map_to_json(&map) });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))?;
        }
        Command::P1p1 { profile, genus, method, parallel } => {
            let profile = profile.profile()?;
            let method: Method = method.parse()?;
            let opts = count_options(parallel)?;
            if method != Method::Lattice && genus > 0 {
                return Err(Failure::Input("the subfloor method needs genus 0".into()));
            }
            let lattice = || counting::n_trop_p1p1_with(&profile, genus, &opts);
            match method {
                Method::Lattice => writeln!(out, "{}", lattice()?)?,
                Method::Subfloor => writeln!(out, "{}", subfloor::n_floor(&profile)?)?,
                Method::Both => {
                    let floor = subfloor::n_floor(&profile)?;
                    let trop = lattice()?;
                    let ok = floor == trop;
                    writeln!(out, "{trop} {floor} {}", if ok { "OK" } else { "MISMATCH" })?;
                    if !ok {
                        return Err(Failure::Disagree);
                    }
                }
            }
        }
        Command::Diagrams { profile, diagram, all } => {
            let profile = profile.profile()?;
            match diagram {
                Some(file) => {
                    let d = io::parse_diagram(&io::read_file(&file)?)?;
                    d.validate(&profile.nu1, &profile.nu2, profile.mu2.len())?;
                    writeln!(out, "{}", subfloor::mu_multiplicity(&d, &profile.mu1)?)?;
                }
                None => {
                    let list = subfloor::weighted_diagrams(&profile, &Default::default())?;
                    let total: crate::Multiplicity = list.iter().map(|(_, m)| m).sum();
                    let items: Vec<_> = list
                        .iter()
                        .filter(|(_, m)| all || *m != crate::Multiplicity::default())
                        .map(|(d, m)| json!({ "diagram": d, "multiplicity": m.to_string() }))
                        .collect();
                    let doc = json!({ "profile": profile.to_string(), "total": total.to_string(), "diagrams": items });
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))?;
                }
            }
        }
        Command::Polyscan { template, ranges, degree_bound, method, genus, json, parallel } => {
            let template = ProfileTemplate::from_json(&io::read_file(&template)?)?;
            let ranges = match ranges {
                Some(r) => parse_ranges(&r)?,
                None => BTreeMap::new(),
            };
            let bounds = polyfit::resolve_ranges(&template, &ranges)?;
            if bounds.iter().any(|(lo, hi)| lo > hi) {
                return Err(Failure::Input("empty range".into()));
            }
            let method: Method = method.parse()?;
            let genus = genus.unwrap_or(template.genus);
            let walls = template.walls();
            let run = || polyfit::verify_chambers(&template, &walls, &ranges, degree_bound, genus, method);
            let report = match parallel {
                Some(0) => return Err(Failure::Input("--parallel must be at least 1".into())),
                Some(k) => rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .map_err(|e| Failure::Internal(e.to_string()))?
                    .install(run)?,
                None => run()?,
            };
            writeln!(out, "{report}")?;
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report).expect("serializable");
                std::fs::write(&path, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            if !report.disagreements.is_empty() {
                return Err(Failure::Disagree);
            }
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let start = Instant::now();
    let result = execute(cli.command, out);
    if !cli.quiet {
        let _ = writeln!(err, "elapsed {:.3}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::ClosedPipe => {}
                Failure::Disagree => {
                    let _ = writeln!(err, "error: the lattice and subfloor counts differ");
                }
                Failure::Input(m) | Failure::Internal(m) => {
                    let _ = writeln!(err, "error: {m}");
                }
            }
            f.code()
        }
    }
}

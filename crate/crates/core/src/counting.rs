//! Weighted path counts and the `ℙ¹×ℙ¹` wrapper.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{validate_beta, Beta, BoundaryData, EdgeId, GeometryError, LatticePolygon, RectSide, TangencyProfile};
use crate::multiplicity::{Evaluator, Multiplicity, Pruner, CACHE_LIMIT_ENV};
use crate::paths::{enumerate_paths, LatticePath};

#[derive(Debug, Error)]
pub enum CountError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("path length |β̄| + g − 1 = {0} must be at least 1")]
    InvalidLength(i64),
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
}

/// Knobs for [`count_with`] and [`nonzero_paths_with`].
#[derive(Clone, Debug, Default)]
pub struct CountOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Skip paths that a pruning rule certifies to be zero.
    pub prune: bool,
    /// Memo entries per worker; `None` reads the environment override or
    /// uses the default.
    pub cache_limit: Option<usize>,
}

const CHUNK: usize = 512;

/// `|β̄| + g − 1`.
pub fn path_length(boundary: &BoundaryData, genus: u32) -> Result<usize, CountError> {
    let len = boundary.total_steps() as i64 + genus as i64 - 1;
    if len < 1 {
        return Err(CountError::InvalidLength(len));
    }
    Ok(len as usize)
}

fn env_cache_limit() -> Option<usize> {
    std::env::var(CACHE_LIMIT_ENV).ok()?.trim().parse().ok()
}

fn run<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T, CountError> {
    match threads {
        None => Ok(job()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| CountError::ThreadPool(e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

/// Evaluates every path of the right length in parallel chunks and hands the
/// nonzero results to `fold`.
fn evaluate<T, F, R>(
    polygon: &LatticePolygon,
    boundary: &BoundaryData,
    genus: u32,
    opts: &CountOptions,
    fold: F,
    reduce: R,
) -> Result<T, CountError>
where
    T: Send + Default,
    F: Fn(&mut T, LatticePath, Multiplicity) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let length = path_length(boundary, genus)?;
    let pruner = opts.prune.then(|| Pruner::applicable(polygon, boundary));
    let limit = opts.cache_limit.or_else(env_cache_limit);
    let make = || {
        let ev = Evaluator::new(polygon, boundary);
        match limit {
            Some(l) => ev.with_cache_limit(l),
            None => ev,
        }
    };
    let mut paths = enumerate_paths(polygon, length);
    let chunks = std::iter::from_fn(move || {
        let chunk: Vec<LatticePath> = paths.by_ref().take(CHUNK).collect();
        (!chunk.is_empty()).then_some(chunk)
    });
    run(opts.threads, || {
        chunks
            .par_bridge()
            .map_init(make, |ev, chunk| {
                let mut acc = T::default();
                for path in chunk {
                    if pruner.as_ref().is_some_and(|p| !p.keep(&path)) {
                        continue;
                    }
                    let m = ev.mult(&path);
                    if !m.is_zero() {
                        fold(&mut acc, path, m);
                    }
                }
                acc
            })
            .reduce(T::default, &reduce)
    })
}

/// Sum of `mult(γ)` over all λ-increasing paths of length `|β̄|+g−1`.
pub fn count_paths_with_multiplicity(polygon: &LatticePolygon, boundary: &BoundaryData, genus: u32) -> Result<Multiplicity, CountError> {
    count_with(polygon, boundary, genus, &CountOptions::default())
}

pub fn count_with(polygon: &LatticePolygon, boundary: &BoundaryData, genus: u32, opts: &CountOptions) -> Result<Multiplicity, CountError> {
    evaluate(polygon, boundary, genus, opts, |acc: &mut Multiplicity, _, m| *acc += m, |a, b| a + b)
}

/// The paths of nonzero multiplicity, with their multiplicities.
pub fn nonzero_paths(
    polygon: &LatticePolygon,
    boundary: &BoundaryData,
    genus: u32,
) -> Result<BTreeMap<LatticePath, Multiplicity>, CountError> {
    nonzero_paths_with(polygon, boundary, genus, &CountOptions::default())
}

pub fn nonzero_paths_with(
    polygon: &LatticePolygon,
    boundary: &BoundaryData,
    genus: u32,
    opts: &CountOptions,
) -> Result<BTreeMap<LatticePath, Multiplicity>, CountError> {
    evaluate(
        polygon,
        boundary,
        genus,
        opts,
        |acc: &mut BTreeMap<LatticePath, Multiplicity>, path, m| {
            acc.insert(path, m);
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )
}

/// The rectangle `[0, |μ₁|] × [0, |ν₁|]` with `μ₁` on the bottom, `μ₂` on the
/// top, `ν₁` on the left and `ν₂` on the right.
pub fn p1p1_instance(profile: &TangencyProfile) -> Result<(LatticePolygon, BoundaryData), GeometryError> {
    let polygon = LatticePolygon::rectangle(profile.width() as i64, profile.height() as i64)?;
    let raw: BTreeMap<EdgeId, Beta> = [
        (RectSide::Bottom, &profile.mu1),
        (RectSide::Top, &profile.mu2),
        (RectSide::Left, &profile.nu1),
        (RectSide::Right, &profile.nu2),
    ]
    .into_iter()
    .map(|(side, part)| (polygon.rectangle_edge(side).expect("axis rectangle"), Beta::from_partition(part)))
    .collect();
    let boundary = validate_beta(&polygon, &raw)?;
    Ok((polygon, boundary))
}

/// `N^trop(μ, ν; g)` by lattice paths.
pub fn n_trop_p1p1(profile: &TangencyProfile, genus: u32) -> Result<Multiplicity, CountError> {
    n_trop_p1p1_with(profile, genus, &CountOptions::default())
}

pub fn n_trop_p1p1_with(profile: &TangencyProfile, genus: u32, opts: &CountOptions) -> Result<Multiplicity, CountError> {
    let (polygon, boundary) = p1p1_instance(profile)?;
    count_with(&polygon, &boundary, genus, opts)
}

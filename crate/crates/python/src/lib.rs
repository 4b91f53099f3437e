//! Python bindings for `tropcount`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use tropcount::counting::{self, CountError, CountOptions};
use tropcount::polyfit::{self, Method, ProfileTemplate};
use tropcount::subfloor::{self, FloorOptions, SubfloorError};
use tropcount::{
    validate_beta, Beta, BoundaryData, Evaluator, LatticePath, LatticePoint, LatticePolygon, Partition, Side,
    TangencyProfile, TurnStrategy,
};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn count_error(e: CountError) -> PyErr {
    match e {
        CountError::ThreadPool(_) => PyRuntimeError::new_err(e.to_string()),
        e => value_error(e),
    }
}

fn subfloor_error(e: SubfloorError) -> PyErr {
    match e {
        SubfloorError::DegenerateFork => PyRuntimeError::new_err(e.to_string()),
        e => value_error(e),
    }
}

fn points(raw: Vec<(i64, i64)>) -> Vec<LatticePoint> {
    raw.into_iter().map(LatticePoint::from).collect()
}

fn pairs(points: &[LatticePoint]) -> Vec<(i64, i64)> {
    points.iter().map(|p| (p.x, p.y)).collect()
}

/// A convex lattice polygon.
#[pyclass(frozen, skip_from_py_object, module = "tropcount_py")]
#[derive(Clone)]
struct Polygon(LatticePolygon);

#[pymethods]
impl Polygon {
    #[new]
    fn new(vertices: Vec<(i64, i64)>) -> PyResult<Self> {
        LatticePolygon::new(points(vertices)).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn rectangle(width: i64, height: i64) -> PyResult<Self> {
        LatticePolygon::rectangle(width, height).map(Self).map_err(value_error)
    }

    #[getter]
    fn vertices(&self) -> Vec<(i64, i64)> {
        pairs(self.0.vertices())
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn lattice_points(&self) -> Vec<(i64, i64)> {
        pairs(&self.0.lattice_points())
    }

    /// The λ-minimal and λ-maximal vertices.
    fn extremal_points(&self) -> ((i64, i64), (i64, i64)) {
        let (p, q) = self.0.extremal_points();
        ((p.x, p.y), (q.x, q.y))
    }

    /// λ-increasing paths from `p` to `q` with `length` steps.
    fn paths(&self, length: usize) -> Vec<Path> {
        tropcount::enumerate_paths(&self.0, length).map(Path).collect()
    }

    fn __repr__(&self) -> String {
        format!("Polygon({:?})", self.vertices())
    }
}

/// A λ-increasing lattice path.
#[pyclass(frozen, skip_from_py_object, eq, hash, module = "tropcount_py")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Path(LatticePath);

#[pymethods]
impl Path {
    #[new]
    fn new(points_: Vec<(i64, i64)>) -> PyResult<Self> {
        LatticePath::new(points(points_)).map(Self).map_err(value_error)
    }

    #[getter]
    fn points(&self) -> Vec<(i64, i64)> {
        pairs(self.0.points())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Path({:?})", self.points())
    }
}

/// Tangency orders along the four boundary divisors of `ℙ¹×ℙ¹`.
#[pyclass(frozen, skip_from_py_object, module = "tropcount_py")]
#[derive(Clone)]
struct Profile(TangencyProfile);

#[pymethods]
impl Profile {
    #[new]
    #[pyo3(signature = (mu1, nu1, nu2, mu2 = None))]
    fn new(mu1: Vec<u32>, nu1: Vec<u32>, nu2: Vec<u32>, mu2: Option<Vec<u32>>) -> PyResult<Self> {
        let mu2 = mu2.unwrap_or_else(|| vec![1; mu1.iter().sum::<u32>() as usize]);
        TangencyProfile::from_parts(&mu1, &mu2, &nu1, &nu2).map(Self).map_err(value_error)
    }

    #[getter]
    fn mu1(&self) -> Vec<u32> {
        self.0.mu1.parts().to_vec()
    }

    #[getter]
    fn mu2(&self) -> Vec<u32> {
        self.0.mu2.parts().to_vec()
    }

    #[getter]
    fn nu1(&self) -> Vec<u32> {
        self.0.nu1.parts().to_vec()
    }

    #[getter]
    fn nu2(&self) -> Vec<u32> {
        self.0.nu2.parts().to_vec()
    }

    /// The rectangle and boundary data of the lattice path count.
    fn instance(&self, py: Python<'_>) -> PyResult<(Polygon, Py<PyDict>)> {
        let (poly, b) = counting::p1p1_instance(&self.0).map_err(value_error)?;
        let dict = PyDict::new(py);
        for (i, beta) in b.betas().iter().enumerate() {
            dict.set_item(i, beta.counts().to_vec())?;
        }
        Ok((Polygon(poly), dict.unbind()))
    }

    fn __repr__(&self) -> String {
        format!("Profile{}", self.0)
    }
}

/// β data keyed by edge index or side name (`"bottom"`, `"right"`, ...).
fn boundary(polygon: &Polygon, beta: &Bound<'_, PyDict>) -> PyResult<BoundaryData> {
    let mut raw = BTreeMap::new();
    for (key, counts) in beta.iter() {
        let key: String = match key.extract::<usize>() {
            Ok(i) => i.to_string(),
            Err(_) => key.extract()?,
        };
        let id = polygon.0.resolve_edge(&key).map_err(value_error)?;
        if raw.insert(id, Beta::new(counts.extract()?)).is_some() {
            return Err(PyValueError::new_err(format!("edge {id} given twice")));
        }
    }
    validate_beta(&polygon.0, &raw).map_err(value_error)
}

/// Multiplicity of `path`. With `side`, evaluates that side only, optionally
/// along a permutation `sigma` of the turn positions.
#[pyfunction]
#[pyo3(signature = (polygon, beta, path, side = None, sigma = None))]
fn multiplicity(
    py: Python<'_>,
    polygon: &Polygon,
    beta: &Bound<'_, PyDict>,
    path: &Path,
    side: Option<&str>,
    sigma: Option<Vec<usize>>,
) -> PyResult<BigUint> {
    let b = boundary(polygon, beta)?;
    let side = match side {
        None => None,
        Some("positive") => Some(Side::Positive),
        Some("negative") => Some(Side::Negative),
        Some(other) => return Err(PyValueError::new_err(format!("unknown side {other:?}"))),
    };
    let strategy = sigma.map_or(TurnStrategy::First, TurnStrategy::Sigma);
    py.detach(|| {
        let mut eval = Evaluator::new(&polygon.0, &b);
        match side {
            None if strategy == TurnStrategy::First => Ok(eval.mult(&path.0)),
            None => Err(PyValueError::new_err("sigma needs a side")),
            Some(side) => eval.mult_side(&path.0, side, &strategy).map_err(value_error),
        }
    })
}

/// Sum of multiplicities over all paths of length `|β| + genus − 1`.
#[pyfunction]
#[pyo3(signature = (polygon, beta, genus = 0, prune = false, threads = None))]
fn count_paths(
    py: Python<'_>,
    polygon: &Polygon,
    beta: &Bound<'_, PyDict>,
    genus: u32,
    prune: bool,
    threads: Option<usize>,
) -> PyResult<BigUint> {
    let b = boundary(polygon, beta)?;
    let opts = CountOptions { threads, prune, ..Default::default() };
    py.detach(|| counting::count_with(&polygon.0, &b, genus, &opts)).map_err(count_error)
}

/// The paths with nonzero multiplicity, in λ-lexicographic order.
#[pyfunction]
#[pyo3(signature = (polygon, beta, genus = 0))]
fn nonzero_paths(py: Python<'_>, polygon: &Polygon, beta: &Bound<'_, PyDict>, genus: u32) -> PyResult<Vec<(Path, BigUint)>> {
    let b = boundary(polygon, beta)?;
    let found = py.detach(|| counting::nonzero_paths(&polygon.0, &b, genus)).map_err(count_error)?;
    Ok(found.into_iter().map(|(g, m)| (Path(g), m)).collect())
}

/// Curve count for `profile` by lattice paths.
#[pyfunction]
#[pyo3(signature = (profile, genus = 0))]
fn n_trop(py: Python<'_>, profile: &Profile, genus: u32) -> PyResult<BigUint> {
    py.detach(|| counting::n_trop_p1p1(&profile.0, genus)).map_err(count_error)
}

/// Rational curve count for `profile` by subfloor diagrams. `rule` is
/// `"forks"` (default) or `"decreasing"`; `irreducible` drops reducible
/// curves.
#[pyfunction]
#[pyo3(signature = (profile, irreducible = false, rule = "forks"))]
fn n_floor(py: Python<'_>, profile: &Profile, irreducible: bool, rule: &str) -> PyResult<BigUint> {
    let opts = match rule {
        "forks" if irreducible => FloorOptions::irreducible(),
        "forks" => FloorOptions::default(),
        "decreasing" => FloorOptions::decreasing(),
        other => return Err(PyValueError::new_err(format!("unknown rule {other:?}"))),
    };
    py.detach(|| subfloor::n_floor_with(&profile.0, &opts)).map_err(subfloor_error)
}

/// Weight of a block with nonincreasing divergences.
#[pyfunction]
fn block_multiplicity(divergences: Vec<i64>) -> PyResult<BigUint> {
    subfloor::block_multiplicity(&divergences).map_err(subfloor_error)
}

/// Weight of a block whose white vertices sit at `positions`; without
/// positions a generic layout is chosen.
#[pyfunction]
#[pyo3(signature = (divergences, positions = None))]
fn fork_multiplicity(divergences: Vec<i64>, positions: Option<Vec<i64>>) -> PyResult<BigUint> {
    match positions {
        Some(xs) => subfloor::fork_multiplicity(&xs, &divergences),
        None => subfloor::generic_fork_multiplicity(&divergences),
    }
    .map_err(subfloor_error)
}

fn parse_partition(s: &str) -> PyResult<Partition> {
    s.parse().map_err(value_error)
}

/// Parses a partition such as `"2,1,1"` or `"3^2"`.
#[pyfunction]
fn partition(text: &str) -> PyResult<Vec<u32>> {
    Ok(parse_partition(text)?.parts().to_vec())
}

/// Evaluates a profile template over a grid, fits one polynomial per chamber
/// and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (template, ranges = None, degree_bound = None, method = "lattice", genus = None))]
fn polyscan(
    py: Python<'_>,
    template: &str,
    ranges: Option<BTreeMap<String, (i64, i64)>>,
    degree_bound: Option<u32>,
    method: &str,
    genus: Option<u32>,
) -> PyResult<Py<PyAny>> {
    let template = ProfileTemplate::from_json(template).map_err(value_error)?;
    let ranges = ranges.unwrap_or_default();
    let method: Method = method.parse().map_err(value_error)?;
    let genus = genus.unwrap_or(template.genus);
    let walls = template.walls();
    let report = py
        .detach(|| polyfit::verify_chambers(&template, &walls, &ranges, degree_bound, genus, method))
        .map_err(value_error)?;
    let text = serde_json::to_string(&report).map_err(value_error)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pymodule]
fn tropcount_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Polygon>()?;
    m.add_class::<Path>()?;
    m.add_class::<Profile>()?;
    m.add_function(wrap_pyfunction!(multiplicity, m)?)?;
    m.add_function(wrap_pyfunction!(count_paths, m)?)?;
    m.add_function(wrap_pyfunction!(nonzero_paths, m)?)?;
    m.add_function(wrap_pyfunction!(n_trop, m)?)?;
    m.add_function(wrap_pyfunction!(n_floor, m)?)?;
    m.add_function(wrap_pyfunction!(block_multiplicity, m)?)?;
    m.add_function(wrap_pyfunction!(fork_multiplicity, m)?)?;
    m.add_function(wrap_pyfunction!(partition, m)?)?;
    m.add_function(wrap_pyfunction!(polyscan, m)?)?;
    Ok(())
}

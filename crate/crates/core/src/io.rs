//! JSON input and output.
//!
//! Polygons are `{"vertices": [[x, y], ...]}` in any cyclic order, boundary
//! data is `{"beta": {"<edge>": [b1, b2, ...]}}` keyed by counterclockwise
//! edge index or, for rectangles, by side name, paths are
//! `{"points": [[x, y], ...]}` and subfloor diagrams use the serde form of
//! [`SubfloorDiagram`]. Big integers are written as decimal strings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::geometry::{validate_beta, Beta, BoundaryData, EdgeId, GeometryError, LatticePoint, LatticePolygon};
use crate::multiplicity::Multiplicity;
use crate::paths::{LatticePath, PathError};
use crate::subfloor::SubfloorDiagram;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Path(#[from] PathError),
}

pub fn read_file(path: impl AsRef<Path>) -> Result<String, IoError> {
    let path = path.as_ref();
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.display().to_string(), source })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonFile {
    vertices: Vec<LatticePoint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BetaFile {
    beta: BTreeMap<String, Vec<u32>>,
}

pub fn parse_polygon(text: &str) -> Result<LatticePolygon, IoError> {
    let f: PolygonFile = serde_json::from_str(text)?;
    Ok(LatticePolygon::new(f.vertices)?)
}

pub fn polygon_to_json(polygon: &LatticePolygon) -> Value {
    json!({ "vertices": polygon.vertices() })
}

/// Resolves edge keys and checks every `Iβ_e` against the edge length.
pub fn parse_boundary(text: &str, polygon: &LatticePolygon) -> Result<BoundaryData, IoError> {
    let f: BetaFile = serde_json::from_str(text)?;
    let mut raw: BTreeMap<EdgeId, Beta> = BTreeMap::new();
    for (key, counts) in f.beta {
        let id = polygon.resolve_edge(&key)?;
        if raw.insert(id, Beta::new(counts)).is_some() {
            return Err(GeometryError::DuplicateEdge(id).into());
        }
    }
    Ok(validate_beta(polygon, &raw)?)
}

pub fn boundary_to_json(boundary: &BoundaryData) -> Value {
    let beta: BTreeMap<String, &[u32]> =
        boundary.betas().iter().enumerate().map(|(i, b)| (i.to_string(), b.counts())).collect();
    json!({ "beta": beta })
}

/// A λ-increasing path; with `polygon`, also checks that it runs from `p`
/// to `q` inside it.
pub fn parse_path(text: &str, polygon: Option<&LatticePolygon>) -> Result<LatticePath, IoError> {
    let path: LatticePath = serde_json::from_str(text)?;
    match polygon {
        Some(poly) => Ok(LatticePath::in_polygon(path.into_points(), poly)?),
        None => Ok(path),
    }
}

pub fn parse_diagram(text: &str) -> Result<SubfloorDiagram, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn path_key(path: &LatticePath) -> String {
    serde_json::to_string(&path.points().iter().map(|p| [p.x, p.y]).collect::<Vec<_>>()).expect("plain integers")
}

/// `{"<points>": "<multiplicity>", ...}` with keys such as `[[0,5],[0,3]]`.
pub fn path_map_to_json(map: &BTreeMap<LatticePath, Multiplicity>) -> Value {
    Value::Object(map.iter().map(|(p, m)| (path_key(p), Value::String(m.to_string()))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let poly = parse_polygon(r#"{"vertices": [[3, 0], [0, 5], [0, 0], [3, 5]]}"#).unwrap();
        assert_eq!(poly, LatticePolygon::rectangle(3, 5).unwrap());
        let b = parse_boundary(r#"{"beta": {"left": [0, 1, 1], "right": [0, 0, 0, 0, 1], "top": [3], "0": [0, 0, 1]}}"#, &poly)
            .unwrap();
        assert_eq!(b.total_steps(), 7);
        assert_eq!(parse_boundary(&boundary_to_json(&b).to_string(), &poly).unwrap(), b);
        assert_eq!(parse_polygon(&polygon_to_json(&poly).to_string()).unwrap(), poly);
        let g = parse_path(r#"{"points": [[0,5],[0,3],[0,0],[1,2],[2,5],[3,5],[3,0]]}"#, Some(&poly)).unwrap();
        assert_eq!(path_key(&g), "[[0,5],[0,3],[0,0],[1,2],[2,5],[3,5],[3,0]]");
    }

    #[test]
    fn rejects_bad_input() {
        let poly = LatticePolygon::rectangle(3, 5).unwrap();
        let bad = [
            r#"{"beta": {"left": [0, 1], "right": [0, 0, 0, 0, 1], "top": [3], "bottom": [0, 0, 1]}}"#,
            r#"{"beta": {"left": [0, 1, 1], "right": [0, 0, 0, 0, 1], "top": [3]}}"#,
            r#"{"beta": {"left": [0, 1, 1], "3": [0, 1, 1], "right": [0, 0, 0, 0, 1], "top": [3], "bottom": [0, 0, 1]}}"#,
            r#"{"beta": {"diagonal": [1]}}"#,
            r#"{"beta": {"left": [-1]}}"#,
        ];
        for text in bad {
            assert!(parse_boundary(text, &poly).is_err(), "{text}");
        }
        assert!(parse_polygon(r#"{"vertices": [[0, 0], [1, 1], [2, 2]]}"#).is_err());
        assert!(parse_path(r#"{"points": [[0,5],[1,5],[0,0]]}"#, None).is_err());
        assert!(parse_path(r#"{"points": [[0,4],[3,0]]}"#, Some(&poly)).is_err());
    }
}

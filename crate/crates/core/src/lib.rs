//! Exact counts of rational and higher-genus tropical curves in toric
//! surfaces via lattice paths, and of rational curves in `ℙ¹×ℙ¹` via subfloor
//! diagrams, with tools for fitting chamber-wise polynomials to the counts.
//!
//! ```
//! use tropcount::counting::count_paths_with_multiplicity;
//! use tropcount::io::{parse_boundary, parse_polygon};
//!
//! let polygon = parse_polygon(r#"{"vertices": [[0,0],[3,0],[3,5],[0,5]]}"#)?;
//! let beta = parse_boundary(
//!     r#"{"beta": {"bottom": [0,0,1], "right": [0,0,0,0,1], "top": [3], "left": [0,1,1]}}"#,
//!     &polygon,
//! )?;
//! assert_eq!(count_paths_with_multiplicity(&polygon, &beta, 0)?, 19170u32.into());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cli;
pub mod counting;
pub mod geometry;
pub mod io;
pub mod multiplicity;
pub mod paths;
pub mod polyfit;
pub mod subfloor;

pub use geometry::{
    lambda_compare, partition_to_beta, validate_beta, Beta, BoundaryData, EdgeId, GeometryError, LatticePoint,
    LatticePolygon, Partition, RectSide, TangencyProfile,
};
pub use multiplicity::{mult, mult_side, mult_sigma, Evaluator, Multiplicity, MultiplicityError, TurnStrategy};
pub use paths::{enumerate_paths, is_beta_initial, is_lambda_increasing, LatticePath, PathError, Side, Turn};

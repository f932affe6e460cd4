//! Exact normal-surface slope enumeration, Farey-graph distances and gluing
//! certification for one-vertex triangulations of knot manifolds.

pub mod cache;
pub mod certifier;
pub mod farey;
pub mod genus;
pub mod normal;
pub mod perm;
pub mod triangulation;
mod util;

pub use perm::Perm4;
pub use triangulation::{parse_triangulation, Triangulation, TriangulationError};

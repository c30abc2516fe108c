//! Exact planar geometry: predicates, polygons, triangulation and
//! subdivision overlay.
//!
//! All predicates decide with exact arithmetic; the only floating point in
//! this module is conservative f64 bounding boxes used to skip pairs that are
//! provably far apart.

mod isometry;
mod overlay;
mod point;
mod polygon;
mod subdivision;
mod triangulate;

pub use isometry::Isometry;
pub use overlay::overlay;
pub use point::{
    orientation, segment_contains, segments_properly_cross, BBox, Containment, Orientation, Point,
};
pub use polygon::Polygon;
pub use subdivision::{check_partition, interiors_disjoint, polygon_inside, Subdivision};
pub use triangulate::triangulate;

#[derive(Debug, thiserror::Error)]
pub enum PlanarError {
    #[error("polygon needs at least 3 vertices")]
    TooFewVertices,
    #[error("polygon has duplicate vertices")]
    DuplicateVertices,
    #[error("polygon boundary is not simple: {0}")]
    NotSimple(String),
    #[error("polygon is not counterclockwise (signed area must be positive)")]
    NotCounterClockwise,
    #[error("subdivision outers do not match")]
    OuterMismatch,
    #[error("area bookkeeping failed: {0}")]
    AreaMismatch(String),
    #[error("cells overlap: {0}")]
    CellOverlap(String),
    #[error("cell not contained in outer polygon: {0}")]
    NotContained(String),
    #[error("triangulation failed: {0}")]
    Triangulation(String),
    #[error("overlay failed: {0}")]
    Overlay(String),
    #[error(transparent)]
    Numeric(#[from] crate::numeric::NumericError),
}

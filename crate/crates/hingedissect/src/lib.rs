//! Construction and verification of common hinged dissections.
//!
//! Given finitely many equal-area simple polygons, this crate builds a single
//! hinged figure (a tree of polygonal links joined at vertex hinges) that
//! refines every one of them: for each target polygon there is a configuration
//! of the figure tiling exactly that polygon. Every construction emits a
//! refinement certificate that can be re-verified independently, and all
//! geometry is carried out over exact constructible numbers, so verification
//! has zero tolerance.
//!
//! The main entry points:
//!
//! - [`universal::common_hinged_dissection`] — any number of equal-area
//!   polygons, via subdivision overlay and subtree-movement gadgets.
//! - [`efficient::polygon_pair_efficient`] — two polygons, via chainification,
//!   hinged rectangle-to-rectangle and pseudocuts; fewer pieces on skinny
//!   instances.
//! - [`hinged::check_refinement`] / [`hinged::validate_configuration`] — the
//!   verifiers, independent of all construction code.
//!
//! File formats (JSON, rationals as strings) live in [`bundle`]; SVG output in
//! [`render`].

pub mod numeric;
pub mod planar;
pub mod hinged;
pub mod dissect;
pub mod gadgets;
pub mod universal;
pub mod chainify;
pub mod efficient;
pub mod bundle;
pub mod render;

pub use numeric::{CReal, RationalAngle};

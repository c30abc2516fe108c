//! Refinement gadgets: free regions, isosceles chains, kite sweeps, and the
//! subtree-movement constructions built from them.
//!
//! Every operation here returns refinement certificates and configurations
//! that the verifiers in [`crate::hinged`] re-check exactly; nothing in this
//! module is trusted by the verification path.

mod cone;
mod free;
mod moves;
mod pseudo;
mod pseudocut;

pub use cone::rational_rotation_into_cone;
pub use free::{free_regions, FreeRegions, Sector};
pub use moves::{
    move_subtree, unaltered_move, MoveOutcome, MoveSpec, MoveStats, PathChoice,
};



#[derive(Debug, thiserror::Error)]
pub enum GadgetError {
    #[error(transparent)]
    Planar(#[from] crate::planar::PlanarError),
    #[error(transparent)]
    Figure(#[from] crate::hinged::FigureError),
    #[error(transparent)]
    Numeric(#[from] crate::numeric::NumericError),
    #[error("refinement bookkeeping failed: {0}")]
    Refine(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

impl From<crate::hinged::RefineError> for GadgetError {
    fn from(e: crate::hinged::RefineError) -> Self {
        GadgetError::Refine(e.to_string())
    }
}

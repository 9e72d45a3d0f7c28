//! Piecewise-affine correspondences and their continuity checks.

mod checks;
mod ops;
mod piecewise;
mod report;
mod value;

pub use checks::{
    check_almost_w_usc, check_dual_w_usc, check_e_uscs, check_eps_chain, check_lsc_surrogate, check_usc, check_values,
    check_w_usc, constant_selection, dual_map, grid_failures, sample, Resolution,
};
pub use ops::{constant_value, interval_value};
pub use piecewise::{Piece, PiecewiseBuilder, PiecewiseMap};
pub use report::{CheckReport, Verdict, Witness, WitnessKind, WITNESS_CAP};
pub use value::{AffineBox, AxisBounds, Bound, Value};

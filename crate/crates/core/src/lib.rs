//! Exact set-valued analysis on finite unions of flagged boxes: dilated
//! approximations, graph adherence, semicontinuity checks, grid fixed-point
//! search and equilibrium verification for abstract economies.

pub mod builtins;
pub mod doc;
pub mod economy;
pub mod error;
pub mod fixedpoint;
pub mod golden;
pub mod linear;
pub mod maps;
pub mod radner;
pub mod sample;
pub mod scalar;
pub mod sets;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use sets::{BoxSet, FlaggedBox, FlaggedInterval, Grid};

pub type BoxSetF64 = BoxSet<f64>;
pub type GridF64 = Grid<f64>;
pub type PiecewiseMapF64 = maps::PiecewiseMap<f64>;
pub type AbstractEconomyF64 = economy::AbstractEconomy<f64>;

/// Exact rationals with 64-bit numerator and denominator.
pub type Q = num_rational::Rational64;
pub type BoxSetQ = BoxSet<Q>;
pub type GridQ = Grid<Q>;
pub type PiecewiseMapQ = maps::PiecewiseMap<Q>;
pub type AbstractEconomyQ = economy::AbstractEconomy<Q>;

/// Arbitrary-precision rationals, for inputs whose denominators overflow `Q`.
pub type BigQ = num_rational::BigRational;

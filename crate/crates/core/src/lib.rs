//! Fair division of two-dimensional cakes into squares and other fat pieces.
//!
//! Agents hold piecewise-constant value densities. Procedures return one
//! piece per agent, pairwise interior-disjoint and inside the cake's walls,
//! with a guaranteed fraction of each agent's total value.

pub mod adversary;
pub mod error;
pub mod geometry;
pub mod io;
pub mod measure;
pub mod protocols;
pub mod rpa;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, Tolerances};

pub type Point64 = geometry::Point<f64>;
pub type Point32 = geometry::Point<f32>;
pub type Rect64 = geometry::Rect<f64>;
pub type Rect32 = geometry::Rect<f32>;
pub type Square64 = geometry::Square<f64>;
pub type Square32 = geometry::Square<f32>;
pub type Piece64 = geometry::Piece<f64>;
pub type Piece32 = geometry::Piece<f32>;
pub type Density64 = measure::GridDensity<f64>;
pub type Density32 = measure::GridDensity<f32>;

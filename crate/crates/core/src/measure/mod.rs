//! Value measures: exact integration, eval and mark queries, best-square search.

pub mod best;
pub mod density;
pub mod mark;

pub use best::{best_covered_piece, best_square, Region, UtilityResult};
pub use density::GridDensity;
pub use mark::{mark, Family, MarkOutcome, Side};

use crate::geometry::Piece;
use crate::scalar::Real;

pub fn piece_value<T: Real>(d: &GridDensity<T>, p: &Piece<T>) -> T {
    d.piece_value(p)
}

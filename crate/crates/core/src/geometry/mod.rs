//! Exact `Z[τ]` geometry: tile point sets from words, geometric inflation,
//! and the cut-and-project construction of the Fibonacci chain.

mod cps;
mod inflation;
mod points;
mod quad;
mod window;

pub use cps::{
    compare_cps_to_inflation, cut_and_project, inflation_points, lattice_candidates,
    CompareReport, LatticePoint, MAX_RANGE_WIDTH,
};
pub use inflation::{
    exact_inflation, inflation_consistency_check, natural_tile_lengths, ExactInflation,
    TileLengths,
};
pub use points::{word_to_point_set, TilePointSet};
pub use quad::{QuadInt, QuadRational, XRange, TAU_F64};
pub use window::{Interval, Window};

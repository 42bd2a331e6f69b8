//! Jones polynomials of knots from signed Gauss codes.
//!
//! The pipeline builds the trip matrix of a code (a symmetric GF(2) matrix
//! whose off-diagonal part is the interlacement of the code's chords), then
//! sums over all diagonal toggles of that matrix, weighting each by the
//! nullity of the toggled matrix. An independent bracket oracle computes the
//! same polynomial by explicit smoothing and loop counting.

pub mod bracket_oracle;
pub mod gauss_code;
pub mod gf2_matrix;
pub mod jones_engine;
pub mod knot_table;
pub mod laurent_poly;
pub mod trip_matrix;

#[cfg(test)]
pub(crate) mod testing;

pub use bracket_oracle::{jones_reference, kauffman_bracket, LetterMap, OracleCalibration};
pub use gauss_code::{parse_gauss, CrossingPermutation, Layer, Sign, SignedGaussCode, Visit};
pub use gf2_matrix::{Gf2Matrix, ToggleMask};
pub use jones_engine::{
    jones, jones_from_trip, split_state, state_sum, verify_multiplicative, Calibration, State,
    SumOptions, VerificationReport,
};
pub use knot_table::{all_entries, lookup, KnotEntry};
pub use laurent_poly::LaurentPoly;
pub use trip_matrix::{delta_equivalent, BlockPartition, TripMatrix};

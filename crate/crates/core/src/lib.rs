//! Tropical and symmetric tropical matrix ranks over the min-plus semiring,
//! symmetric Puiseux-series lifts of rank one and two, and witness matrices
//! for which the symmetric `r x r` minors fail to form a tropical basis.
//!
//! Tropical routines are generic over an exact [`Scalar`]; the aliases below
//! fix the common choices.

pub mod blocks;
pub mod error;
pub mod lift;
pub mod matching;
pub mod matrix;
pub mod perm;
pub mod rank;
pub mod scalar;
pub mod series;
pub mod witness;

pub use blocks::{block_decompose, cosupport, BlockDecomposition, Layout};
pub use error::{
    BlocksError, LiftError, MatchingError, MatrixError, ParseError, PermError, RankError, SeriesError, WitnessError,
};
pub use lift::{
    classify_conic, kapranov_rank_3x3, rank1_lift, rank2_symmetric_lift, standard_rank2_lift, verify_lift, ConicClass,
    LiftCertificate, LiftChecks, LiftCombination, LiftOptions, StandardLift,
};
pub use matching::{
    det_report, enumerate_optimal_bijections, is_sym_trop_singular, is_trop_singular, sub_det, trop_det,
    Bijection, DetResult, Mode, PairMultiset,
};
pub use matrix::{ScalingVector, TropicalMatrix};
pub use perm::{cycle_similar, CycleClass, Permutation};
pub use rank::{
    brute_rank_oracle, rank_one_test, symmetric_tropical_rank, symmetric_tropical_rank_with, tropical_rank,
    tropical_rank_with, RankOptions, RankReport,
};
pub use scalar::{Rational, Scalar};
pub use series::{quadratic_roots, MinorReport, PuiseuxSeries, SeriesMatrix};
pub use witness::{border_extend, catalog, duplicate_extend, witness, WitnessRecord};

/// Matrix with `i64`-backed rational entries.
pub type Matrix = TropicalMatrix<Rational>;
/// Matrix with arbitrary-precision rational entries.
pub type BigMatrix = TropicalMatrix<num_rational::BigRational>;
/// Matrix with integer entries.
pub type IntMatrix = TropicalMatrix<i64>;

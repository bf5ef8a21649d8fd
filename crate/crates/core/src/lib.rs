//! Single-deletion single-substitution balls over q-ary words: exact
//! enumeration, a structural fast path for ball intersections, and a
//! sequence reconstruction decoder built on both.

pub mod ball;
pub mod diff;
pub mod error;
pub mod intersect;
pub mod recon;
pub mod seq;
pub mod sweep;

pub use ball::{BallSpec, Oracle, SequenceSet};
pub use diff::{diff_profile, landmarks, lambda_enumerate, DiffProfile, Landmarks, Side};
pub use error::{Error, Result};
pub use intersect::{claims_lambda, intersection_size_fast, verify_claims, IntersectionReport};
pub use seq::{hamming, levenshtein, Alphabet, RunDecomposition, Sequence, Symbol};

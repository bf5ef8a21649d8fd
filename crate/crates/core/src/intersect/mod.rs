//! Structural evaluation of `B^{D,S}_{1,1}(x) ∩ B^{D,S}_{1,1}(x')`.

pub mod claims;
pub mod fast;
pub mod omega;
pub mod verify;

pub use claims::{claims_lambda, mismatched_groups};
pub use fast::{
    intersection_size_fast, theorem_bound, tight_pair_binary, tight_pair_q_ge_3, transposition_zero_size,
    validity_threshold, IntersectionReport, Method,
};
pub use omega::{omega_groups, OmegaGroup};
pub use verify::{verify_claims, ClaimCheck, LemmaCheck, Relation, VerifyReport, LEMMA_CHECKS};

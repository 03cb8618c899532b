//! Constructive witnesses and exact checkers: cofinal orbits, countable
//! unions pushed into gaps, normal closures with explicit factorizations,
//! stratified windows and the rank obstruction.

mod closure;
mod cover;
mod rank;
mod sigma;
mod stratified;

use thiserror::Error;

use crate::ideal::IdealError;

pub use closure::{
    conjugate_factorization, enumerate_group, normal_closure, simplicity_check, Factor, FactorizationWitness, Subgroup,
    MAX_ENUMERATION_DEGREE,
};
pub use cover::{
    a_large, a_large_bounded, a_large_symmetric, cover_witness, cover_witness_bounded, cover_witness_symmetric,
    largeness_conjugation, shrink_cover, Evidence, LargenessCertificate,
};
pub use rank::{rank_tower, refute_cofinal_countableclosed, RankRefutation};
pub use sigma::{
    check_sigma, sigma_witness_bounded_below, sigma_witness_wellordered, GapRecord, SigmaKind, SigmaWitness,
};
pub use stratified::{stratified_witness, StratifiedWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("set is not bounded")]
    Unbounded,
    #[error("invalid certificate: {0}")]
    CertificateInvalid(String),
    #[error("insufficient space: {0}")]
    InsufficientSpace(String),
    #[error("not in the ideal: {0}")]
    NotInIdeal(String),
    #[error("gap family not finitely described: {0}")]
    UnboundedGapFamily(String),
    #[error("enumeration budget exceeded: degree {0} > {max}", max = MAX_ENUMERATION_DEGREE)]
    BudgetExceeded(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported for {0}")]
    Unsupported(String),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

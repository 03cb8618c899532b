//! Finite structures, canonical amalgamation, and conjugation witnesses.

mod amalgam;
mod conjugation;
mod linalg;
mod structure;

use thiserror::Error;

use crate::error::ParseError;

pub use amalgam::{
    all_vectors, amalgamate, amalgamation_positions, check_amalgam, check_heredity, check_heredity_with, check_invariance,
    check_invariance_with, common_part, enumerate_structures, extension_score, fraisse_chain, label_permutations,
    no_canonical_amalgam_search, one_point_extensions, subsets, substructures, ultrametric_rule, AmalgamResult, CaseLog,
    FraisseChain, ImpossibilityRecord, PALETTE,
};
pub use conjugation::{
    compose, conjugation_witness, invert, pure_host, random_automorphism, random_case, tree_host, vector_host,
    Automorphism, ConjugationWitness,
};
pub use structure::{FinStructure, Label, Signature, Tables};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FraisseError {
    #[error("signature has no canonical amalgamation")]
    NotAmalgamable,
    #[error("axiom violation: {0}")]
    AxiomViolation(String),
    #[error("not in amalgamation position: {0}")]
    NotInPosition(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("host too small: {0}")]
    HostTooSmall(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

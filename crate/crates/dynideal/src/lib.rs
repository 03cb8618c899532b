//! Exact kernels for dynamical ideals: rational order automorphisms and
//! their invariant ideals, finite permutation surrogates, cofinal-orbit and
//! countable-choice witnesses, the DC game, hereditarily finite sets with
//! atoms, and canonical amalgamation.

pub mod blocks;
pub mod error;
pub mod fraisse;
pub mod ideal;
pub mod game;
pub mod hfa;
pub mod intervals;
pub mod matching;
pub mod perm;
pub mod plmap;
pub mod quadext;
pub mod rational;
pub mod witnesses;

pub use blocks::{Block, BlockSet, GeoBlock, Orientation, PellBlock};
pub use intervals::{Endpoint, Interval, IntervalUnionSet};
pub use plmap::{Affine, PLMap};
pub use quadext::QuadExt;
pub use rational::Rational;
pub use ideal::{instance_catalog, Elem, GroupElem, IdealError, Instance};
pub use matching::match_finite_sets;
pub use perm::{FinitePermutation, GridElement};

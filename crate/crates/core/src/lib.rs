//! Computational toolkit for finite permutation groups centred on the
//! semiprimitivity taxonomy: stabilizer chains, normal-subgroup lattices,
//! block systems and quotient actions, exact base size and minimal degree,
//! cover classification against the alternating/symmetric quotient tables,
//! and a bound-verification harness.

pub mod error;
pub mod perm;
pub mod group;
pub mod genfile;
pub mod sample;
pub mod structure;
pub mod actions;
pub mod metrics;
pub mod atlas;
pub mod covers;
pub mod exact;
pub mod report;

#[cfg(test)]
pub(crate) mod testkit;

pub use error::{Error, Result};
pub use group::{PermGroup, StabilizerChain, Orbit, DEFAULT_CENSUS_CAP, MAX_DEGREE};
pub use perm::Permutation;

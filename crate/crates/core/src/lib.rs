//! Exact computations on smooth complete toric varieties: fans, Picard
//! lattices, line bundle cohomology, Frobenius pushforward summands, fan
//! automorphisms, and verification of exceptional collections of line bundles.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod catalog;
pub mod cohomology;
pub mod collections;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod frobenius;
pub mod lattice;
pub mod symmetry;

pub use cohomology::{CohomologyEngine, CohomologyTable};
pub use collections::{CheckReport, Collection, Verifier};
pub use divisor::{PicClass, PicardLattice, TDivisor};
pub use error::Error;
pub use fan::Fan;
pub use frobenius::{frob_antinef, frob_set, frob_summands, frob_sweep, FrobeniusSet};
pub use lattice::IntMatrix;
pub use symmetry::{fan_automorphisms, FanAutGroup, FanAutomorphism, PicAction};

//! Certification toolkit for multicolor sunflower-free set families.
//!
//! The crate covers sunflower detection over bitmask families, the extremal
//! constructions, exhaustive maximum-sum oracles, the random-partition
//! averaging identities, the 3x3 petal-graph structure lemma, and the
//! constrained maximization behind the product bound.

pub mod bounds;
pub mod certify;
pub mod cli;
pub mod constructions;
pub mod detect;
pub mod error;
pub mod family;
pub mod graphs;
pub mod optimizer;
pub mod partition;
pub mod search;
pub mod set;

pub use error::{Error, Result};
pub use family::{Family, FamilyTuple};
pub use set::{GroundSet, SubsetMask};

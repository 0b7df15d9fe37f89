//! Restricted sumsets over Z_p^r and exact computation of the minimum
//! restricted-sumset size ρ(Z_p^r, m).

pub mod bounds;
pub mod error;
pub mod group;
pub mod profiles;
pub mod search;
pub mod setops;
pub mod structures;

pub use error::{Error, Result};
pub use group::{all_subgroups, CosetIndex, GroupElement, Modulus, Subgroup};
pub use setops::{double_restricted, restricted_sumset, sumset, PointSet};

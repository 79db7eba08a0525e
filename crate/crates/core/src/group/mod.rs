//! Enumerated permutation groups and the generic algorithms run on them.

pub mod algo;
mod subgroup;
mod table;

pub use subgroup::{closure, ElemSet, IsoFingerprint, Subgroup};
pub use table::{Elem, GroupTable, MAX_GROUP_ORDER};

//! Twisted wreath groups `G(m,q)` over `T = PSL(2,q)`: group enumeration,
//! named subgroups, stabilizers of twisted functions and subdegree certificates.

pub mod atlas;
pub mod error;
pub mod field;
pub mod group;
pub mod perm;
pub mod projline;
pub mod verify;
pub mod wreath;

pub use error::{Error, Result};

//! Invariant lattices of finite irreducible complex linear groups and the
//! structure of the complex tori they define, computed in exact cyclotomic
//! arithmetic.

pub mod catalog;
pub mod cyclotomic;
pub mod error;
pub mod forge;
pub mod group;
pub mod lattice;
pub mod quaternion;
pub mod reflection;
pub mod report;
pub mod linalg;
pub mod schur;
pub mod vector;

pub use cyclotomic::{CycNum, Rational};
pub use error::{Error, Result};

//! Equivariant colored operads over finite sets.
//!
//! Finite groups and (G,Σ)-families, colored trees, equivariant symmetric
//! sequences, arity-truncated G-operads, finite categories, and decision
//! procedures for the weak equivalences, fibrations and trivial fibrations
//! of the model structure on G-operads with varying colors.

pub mod cat;
pub mod cli;
pub mod error;
pub mod fam;
pub mod fixtures;
pub mod grp;
pub mod model;
pub mod oper;
pub mod sym;
pub mod tree;

pub use error::{Error, Result};

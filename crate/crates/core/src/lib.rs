//! Finite arrow algebras and the constructions around them.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod formula;
pub mod gen;
pub mod lambda;
pub mod lattice;
pub mod logic;
pub mod modified;
pub mod morph;
pub mod nuclei;
pub mod pca;
pub mod report;
pub mod suite;
pub mod tripos;

pub use algebra::{ArrowAlgebra, ArrowStructure, Combinators, Decision};
pub use error::{Error, Result};
pub use lattice::{Elem, Lattice, Poset};
pub use report::{Finding, Law, Status, VerificationReport};

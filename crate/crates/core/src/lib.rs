//! Exact computations around universal invariant bilinear forms and
//! universal central extensions of current algebras.

pub mod bundles;
pub mod calg;
pub mod cli;
pub mod cohom;
pub mod current;
pub mod error;
pub mod exactla;
pub mod invforms;
pub mod liealg;
pub mod loopforms;
pub mod suites;

pub use error::{Error, Result};
pub use exactla::{Mat, QuotientSpace, Rat, Subspace};
pub use liealg::{LieAlgebra, LieHom};

//! Exact workbench for composition algebras, vector product algebras,
//! trivalent diagram rewriting over `Q[δ]`, trialities and the super
//! Yang–Mills spinor identities.

pub mod acceptance;
pub mod algebra;
pub mod cli;
pub mod diagram;
pub mod linalg;
pub mod report;
pub mod scalars;
pub mod sym;
pub mod triality;
pub mod vpa;

pub use algebra::{CompositionAlgebra, Element};
pub use report::VerificationReport;
pub use scalars::{DeltaPoly, Rational};

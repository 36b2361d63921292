//! Differential polynomials, λ-polynomials and the λ-bracket they carry.

mod axioms;
mod bracket;
mod lambda;
mod poly;

pub use axioms::{axiom_summary, check_jacobi, check_skew, jacobi_residual, skew_residual, AxiomSummary, JacobiViolation, SkewViolation};
pub use bracket::{extend_bracket, nth_product, BracketTable, PvaError, TableMap};
pub use lambda::{Lambda2, LambdaPoly};
pub use poly::{monomials_of_weight, DiffPoly, Factor, Monomial, NonHomogeneous, Symbol};

#[allow(unused_imports)]
pub(crate) use lambda::{binom, factorial};

//! Coefficient-field arithmetic: prime and extension fields, sparse
//! polynomials in the generic matrix entries, brackets and rational functions.

pub mod bracket;
pub mod cov;
pub mod eval;
pub mod frame;
pub mod gf;
pub mod monomial;
pub mod poly;
pub mod rational;

pub use bracket::{bracket, BracketKey, GenericMatrixSpec};
pub use cov::Cov;
pub use eval::Evaluator;
pub use frame::Frame;
pub use gf::{ExtField, FieldConfig};
pub use monomial::{Monomial, MonomialOrder, VarIndex};
pub use poly::Polynomial;
pub use rational::{Factored, Frac, RationalFunction};

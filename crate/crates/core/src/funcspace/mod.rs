//! Test functions on `(0, ∞)`: closed-form pieces, declared end behaviour,
//! and the named catalog.

mod catalog;
mod expr;
mod function;

pub use catalog::{catalog, FunctionCatalog, FunctionFamily};
pub use expr::{check_antiderivative, numeric_derivative, Expr};
pub use function::{ExactValue, Functional, OriginClass, Piece, Provenance, TailClass, TestFunction};

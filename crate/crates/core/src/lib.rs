//! Computational verification toolkit for a family of genus-2 Prym
//! surfaces with quaternionic multiplication: exact sextic-character sums
//! over small finite fields, point counts and Frobenius traces for the
//! associated curves, numerical period lattices and their quaternion
//! action, explicit height/isogeny bounds on extreme log scales, and
//! finite matrix-group certification (trace rigidity and image
//! classification).

pub mod bounds;
pub mod curves;
pub mod cyclotomic;
pub mod ffchar;
pub mod galrep;
pub mod periods;
pub mod report;
pub mod suites;
pub mod tol;

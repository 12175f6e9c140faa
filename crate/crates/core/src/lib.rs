//! Exact augmentation walks for linear and integer programs in standard form
//! `max { wx : Ax = b, l <= x <= u }`.
//!
//! * [`arith`]: rational vectors and matrices, elimination, subdeterminants.
//! * [`circuits`]: matroid circuits and conformal circuit decompositions.
//! * [`lp`]: exact bounded-variable simplex.
//! * [`ip`]: branch-and-bound, Graver-element extraction, brute-force oracles.
//! * [`walks`]: circuit walks, Graver walks, and their certificates and verifiers.
//! * [`hardness`]: subset-sum reductions and random instance generators.
//! * [`sparsity`]: the column graph of a matrix and exact tree-depth.

pub mod arith;
pub mod circuits;
pub mod error;
pub mod hardness;
pub mod ip;
pub mod lp;
pub mod sparsity;
pub mod walks;

pub use arith::{RatMatrix, RatVector, Rational};
pub use error::{Error, Result};
pub use lp::{LpInstance, LpSolution, SolveStatus};

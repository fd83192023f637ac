//! Splitting primal-dual proximity algorithms for sums of convex functions
//! composed with linear operators, with the operators, proximity operators and
//! parallel-beam CT test problems they are exercised on.

// `!(x > 0.0)` is the idiom used to reject NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod linop;
pub mod metrics;
pub mod prox;
pub mod solver;
pub mod tomo;
pub mod vector;

pub use error::{Error, Result};
pub use linop::{
    build_preconditioners, power_iteration, DiagonalMetric, Grad2D, Identity, LinearOperator,
    Preconditioners, Shape, SharedOperator, SparseMatrix, StackedOperator,
};
pub use prox::{Param, ProxFunction, Step};
pub use solver::{
    solve, HistoryEntry, Problem, SolveOptions, SolveResult, StepPolicy, StopRule, Term,
};

//! Diagonal step matrices for the preconditioned iteration.
//!
//! For operators `K_1..K_l` on a common domain and `alpha` in `[0, 2]`:
//!
//! ```text
//! tau_j     = 1 / sum_k sum_i |K_k(i,j)|^(2 - alpha)
//! sigma^k_i = 1 / sum_j |K_k(i,j)|^alpha
//! ```
//!
//! which gives `|Sigma^(1/2) K T^(1/2)| <= 1` for the stacked operator. Each block
//! is summed over its own rows. Coordinates whose sum vanishes belong to an
//! all-zero row or column; they get a fallback step, which cannot affect the bound.

use super::{DiagonalMetric, LinearOperator};
use crate::error::{Error, Result};

/// Step value assigned where a preconditioner sum is zero.
pub const ZERO_SUM_STEP: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Preconditioners {
    pub tau: DiagonalMetric,
    pub sigmas: Vec<DiagonalMetric>,
}

pub fn build_preconditioners(ops: &[&dyn LinearOperator], alpha: f64) -> Result<Preconditioners> {
    build_preconditioners_with_fallback(ops, alpha, ZERO_SUM_STEP)
}

pub fn build_preconditioners_with_fallback(
    ops: &[&dyn LinearOperator],
    alpha: f64,
    fallback: f64,
) -> Result<Preconditioners> {
    if !(0.0..=2.0).contains(&alpha) {
        return Err(Error::invalid(format!(
            "alpha must lie in [0, 2], got {alpha}"
        )));
    }
    if !(fallback.is_finite() && fallback > 0.0) {
        return Err(Error::invalid(format!(
            "fallback step must be > 0, got {fallback}"
        )));
    }
    let first = ops
        .first()
        .ok_or_else(|| Error::invalid("preconditioners need at least one operator"))?
        .shape();

    let mut col_sums = vec![0.0; first.cols];
    let mut sigmas = Vec::with_capacity(ops.len());
    for op in ops {
        let s = op.shape();
        if s.cols != first.cols {
            return Err(Error::ShapeMismatch {
                context: "build_preconditioners",
                left: first,
                right: s,
            });
        }
        for (acc, v) in col_sums.iter_mut().zip(op.abs_pow_col_sums(2.0 - alpha)?) {
            *acc += v;
        }
        let rows = op.abs_pow_row_sums(alpha)?;
        sigmas.push(DiagonalMetric::new(invert(rows, fallback))?);
    }
    Ok(Preconditioners {
        tau: DiagonalMetric::new(invert(col_sums, fallback))?,
        sigmas,
    })
}

fn invert(sums: Vec<f64>, fallback: f64) -> Vec<f64> {
    sums.into_iter()
        .map(|s| if s > 0.0 { 1.0 / s } else { fallback })
        .collect()
}

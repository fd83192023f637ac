//! Real linear operators with adjoints.
//!
//! Every operator exposes its [`Shape`], a forward and an adjoint product, and
//! (where entries are known in closed form) the entrywise absolute-power row
//! and column sums `sum_j |K(i,j)|^p` / `sum_i |K(i,j)|^p` that the diagonal
//! preconditioner is built from. Those sums use the convention `0^0 = 0`, so
//! `p = 0` counts structural nonzeros.
//!
//! Operators are immutable once built and are shared between problem terms
//! through [`SharedOperator`].

use std::fmt;
use std::sync::Arc;

use crate::error::{check_len, Error, Result};

mod grad;
mod power;
mod precond;
mod sparse;
mod stack;

pub use grad::{difference_matrix, Grad2D};
pub use power::{estimate_norm, power_iteration, NormEstimate};
pub use precond::{
    build_preconditioners, build_preconditioners_with_fallback, Preconditioners, ZERO_SUM_STEP,
};
pub use sparse::SparseMatrix;
pub use stack::StackedOperator;

pub type SharedOperator = Arc<dyn LinearOperator>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    pub rows: usize,
    pub cols: usize,
}

impl Shape {
    pub const fn new(rows: usize, cols: usize) -> Self {
        Shape { rows, cols }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

pub trait LinearOperator: fmt::Debug + Send + Sync {
    fn shape(&self) -> Shape;

    /// Writes `K x` into `out`.
    ///
    /// Panics if `x.len() != cols` or `out.len() != rows`; use [`apply`](Self::apply)
    /// for a checked variant.
    fn apply_into(&self, x: &[f64], out: &mut [f64]);

    /// Writes `K^T y` into `out`.
    fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]);

    /// Short human-readable name used in error messages.
    fn name(&self) -> &'static str;

    fn abs_pow_col_sums(&self, p: f64) -> Result<Vec<f64>> {
        check_power(p)?;
        Err(Error::Unsupported(self.name()))
    }

    fn abs_pow_row_sums(&self, p: f64) -> Result<Vec<f64>> {
        check_power(p)?;
        Err(Error::Unsupported(self.name()))
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let shape = self.shape();
        check_len("apply", shape.cols, x.len())?;
        let mut out = vec![0.0; shape.rows];
        self.apply_into(x, &mut out);
        Ok(out)
    }

    fn apply_adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        let shape = self.shape();
        check_len("apply_adjoint", shape.rows, y.len())?;
        let mut out = vec![0.0; shape.cols];
        self.apply_adjoint_into(y, &mut out);
        Ok(out)
    }
}

pub(crate) fn check_power(p: f64) -> Result<()> {
    if (0.0..=2.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("power must lie in [0, 2], got {p}")))
    }
}

/// `|v|^p` with `0^0 = 0`.
#[inline]
pub(crate) fn abs_pow(v: f64, p: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else if p == 0.0 {
        1.0
    } else if p == 1.0 {
        v.abs()
    } else if p == 2.0 {
        v * v
    } else {
        v.abs().powf(p)
    }
}

#[inline]
pub(crate) fn assert_dims(op: &dyn LinearOperator, input: usize, output: usize, adjoint: bool) {
    let s = op.shape();
    let (i, o) = if adjoint {
        (s.rows, s.cols)
    } else {
        (s.cols, s.rows)
    };
    assert!(
        input == i && output == o,
        "{} ({s}): {} expects input {i} / output {o}, got {input} / {output}",
        op.name(),
        if adjoint { "adjoint" } else { "apply" },
    );
}

/// The n x n identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Identity(pub usize);

impl LinearOperator for Identity {
    fn shape(&self) -> Shape {
        Shape::new(self.0, self.0)
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        assert_dims(self, x.len(), out.len(), false);
        out.copy_from_slice(x);
    }

    fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]) {
        assert_dims(self, y.len(), out.len(), true);
        out.copy_from_slice(y);
    }

    fn name(&self) -> &'static str {
        "Identity"
    }

    fn abs_pow_col_sums(&self, p: f64) -> Result<Vec<f64>> {
        check_power(p)?;
        Ok(vec![1.0; self.0])
    }

    fn abs_pow_row_sums(&self, p: f64) -> Result<Vec<f64>> {
        check_power(p)?;
        Ok(vec![1.0; self.0])
    }
}

/// Square diagonal operator `diag(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagonal(pub Vec<f64>);

impl LinearOperator for Diagonal {
    fn shape(&self) -> Shape {
        Shape::new(self.0.len(), self.0.len())
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        assert_dims(self, x.len(), out.len(), false);
        for ((o, xi), d) in out.iter_mut().zip(x).zip(&self.0) {
            *o = d * xi;
        }
    }

    fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]) {
        self.apply_into(y, out)
    }

    fn name(&self) -> &'static str {
        "Diagonal"
    }

    fn abs_pow_col_sums(&self, p: f64) -> Result<Vec<f64>> {
        check_power(p)?;
        Ok(self.0.iter().map(|&d| abs_pow(d, p)).collect())
    }

    fn abs_pow_row_sums(&self, p: f64) -> Result<Vec<f64>> {
        self.abs_pow_col_sums(p)
    }
}

/// `diag(left) * K * diag(right)`; either side may be omitted.
///
/// Used to form `Sigma^(1/2) K T^(1/2)` when checking preconditioners.
#[derive(Debug, Clone)]
pub struct DiagonallyScaled {
    left: Option<Vec<f64>>,
    inner: SharedOperator,
    right: Option<Vec<f64>>,
}

impl DiagonallyScaled {
    pub fn new(
        left: Option<Vec<f64>>,
        inner: SharedOperator,
        right: Option<Vec<f64>>,
    ) -> Result<Self> {
        let s = inner.shape();
        if let Some(l) = &left {
            check_len("DiagonallyScaled left scaling", s.rows, l.len())?;
        }
        if let Some(r) = &right {
            check_len("DiagonallyScaled right scaling", s.cols, r.len())?;
        }
        Ok(DiagonallyScaled { left, inner, right })
    }
}

impl LinearOperator for DiagonallyScaled {
    fn shape(&self) -> Shape {
        self.inner.shape()
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        assert_dims(self, x.len(), out.len(), false);
        match &self.right {
            Some(r) => {
                let scaled: Vec<f64> = x.iter().zip(r).map(|(a, b)| a * b).collect();
                self.inner.apply_into(&scaled, out);
            }
            None => self.inner.apply_into(x, out),
        }
        if let Some(l) = &self.left {
            for (o, li) in out.iter_mut().zip(l) {
                *o *= li;
            }
        }
    }

    fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]) {
        assert_dims(self, y.len(), out.len(), true);
        match &self.left {
            Some(l) => {
                let scaled: Vec<f64> = y.iter().zip(l).map(|(a, b)| a * b).collect();
                self.inner.apply_adjoint_into(&scaled, out);
            }
            None => self.inner.apply_adjoint_into(y, out),
        }
        if let Some(r) = &self.right {
            for (o, ri) in out.iter_mut().zip(r) {
                *o *= ri;
            }
        }
    }

    fn name(&self) -> &'static str {
        "DiagonallyScaled"
    }
}

/// A diagonal positive-definite metric (the `T` and `Sigma_i` step matrices).
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMetric(Vec<f64>);

impl DiagonalMetric {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = entries
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::invalid(format!(
                "diagonal metric entry {i} must be finite and > 0, got {v}"
            )));
        }
        Ok(DiagonalMetric(entries))
    }

    pub fn uniform(value: f64, len: usize) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn sqrt(&self) -> Vec<f64> {
        self.0.iter().map(|v| v.sqrt()).collect()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Mutable access for coupling adjustments; callers may only shrink entries.
    pub(crate) fn entries_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

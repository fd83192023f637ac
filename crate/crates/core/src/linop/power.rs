use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LinearOperator;
use crate::error::{Error, Result};
use crate::vector::{norm2, scale};

/// Outcome of a power iteration on `K^T K`.
#[derive(Debug, Clone)]
pub struct NormEstimate {
    /// `|K v|` for the returned unit vector `v`; never exceeds the true norm.
    pub value: f64,
    /// The final unit iterate.
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Largest singular value of `op` by power iteration on `op^T op`.
///
/// The start vector is drawn from a ChaCha stream seeded with `seed`. Iteration
/// stops when successive Rayleigh quotients agree to `tol` relatively.
pub fn estimate_norm(
    op: &dyn LinearOperator,
    max_iters: usize,
    tol: f64,
    seed: u64,
) -> Result<NormEstimate> {
    if max_iters == 0 {
        return Err(Error::invalid("power iteration needs max_iters >= 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!(
            "power iteration tolerance must be > 0, got {tol}"
        )));
    }
    let shape = op.shape();
    let zero = |iterations| NormEstimate {
        value: 0.0,
        vector: vec![0.0; shape.cols],
        iterations,
        converged: true,
    };
    if shape.cols == 0 || shape.rows == 0 {
        return Ok(zero(0));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..shape.cols)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let n0 = norm2(&v);
    scale(1.0 / n0, &mut v);

    let mut w = vec![0.0; shape.rows];
    let mut u = vec![0.0; shape.cols];
    let mut prev: Option<f64> = None;
    for it in 1..=max_iters {
        op.apply_into(&v, &mut w);
        let rayleigh = w.iter().map(|x| x * x).sum::<f64>();
        if rayleigh == 0.0 {
            return Ok(zero(it));
        }
        let converged = prev.is_some_and(|p| (rayleigh - p).abs() <= tol * rayleigh);
        if converged || it == max_iters {
            return Ok(NormEstimate {
                value: rayleigh.sqrt(),
                vector: v,
                iterations: it,
                converged,
            });
        }
        op.apply_adjoint_into(&w, &mut u);
        let nu = norm2(&u);
        if nu == 0.0 {
            // w lies in the kernel of K^T; cannot happen for w = K v != 0 in exact
            // arithmetic, so report what we have.
            return Ok(NormEstimate {
                value: rayleigh.sqrt(),
                vector: v,
                iterations: it,
                converged: false,
            });
        }
        prev = Some(rayleigh);
        for (vi, ui) in v.iter_mut().zip(&u) {
            *vi = ui / nu;
        }
    }
    unreachable!("loop returns on its last iteration")
}

/// Operator norm estimate; see [`estimate_norm`].
pub fn power_iteration(
    op: &dyn LinearOperator,
    max_iters: usize,
    tol: f64,
    seed: u64,
) -> Result<f64> {
    estimate_norm(op, max_iters, tol, seed).map(|e| e.value)
}

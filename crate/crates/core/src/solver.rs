//! Splitting primal-dual proximity iteration for
//!
//! ```text
//! min_x  G(x) + sum_i F_i(K_i x)
//! ```
//!
//! Each step is
//!
//! ```text
//! x+   = prox_{T G}(x - T sum_i K_i^T y_i)
//! xbar = x+ + theta (x+ - x)
//! y_i+ = prox_{Sigma_i F_i*}(y_i + Sigma_i K_i xbar)
//! ```
//!
//! with scalar steps (`T = tau I`, `Sigma_i = sigma I`) or the diagonal
//! preconditioners of [`build_preconditioners`]. A single term is the classic
//! primal-dual method; several terms are handled blockwise on the stacked dual.

use std::sync::Arc;

use crate::error::{check_len, Error, Result};
use crate::linop::{
    build_preconditioners, power_iteration, DiagonalMetric, LinearOperator, SharedOperator,
    StackedOperator,
};
use crate::metrics::snr_db;
use crate::prox::{apply_prox, apply_prox_conjugate, ProxFunction, Step};
use crate::vector::{dist2, norm2};

/// Power-iteration budget used for step-size checks and defaults.
const NORM_MAX_ITERS: usize = 1000;
const NORM_TOL: f64 = 1e-10;
/// Slack on `tau sigma |K|^2 <= 1` before a fixed step is refused.
pub const STEP_PRODUCT_SLACK: f64 = 1e-6;
/// Default fixed steps sit at `0.99 / |K|` each.
pub const DEFAULT_STEP_FACTOR: f64 = 0.99;
/// Below this `|x^k|` the relative-change rule uses the absolute change.
const REL_CHANGE_FLOOR: f64 = 1e-12;
/// The stopping test is skipped before this iteration: the first primal step
/// only sees the starting duals and can leave `x` unchanged.
const MIN_ITERATIONS: usize = 2;

/// One composite term `F(K x)`.
#[derive(Debug, Clone)]
pub struct Term {
    pub f: ProxFunction,
    pub k: SharedOperator,
}

impl Term {
    pub fn new(f: ProxFunction, k: SharedOperator) -> Self {
        Term { f, k }
    }

    pub fn from_op<K: LinearOperator + 'static>(f: ProxFunction, k: K) -> Self {
        Term { f, k: Arc::new(k) }
    }
}

/// `G` plus the ordered composite terms `(F_i, K_i)`.
#[derive(Debug, Clone)]
pub struct Problem {
    g: ProxFunction,
    terms: Vec<Term>,
    dim: usize,
}

impl Problem {
    pub fn new(g: ProxFunction, terms: Vec<Term>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::invalid("a problem needs at least one composite term"))?
            .k
            .shape();
        for t in &terms {
            let s = t.k.shape();
            if s.cols != first.cols {
                return Err(Error::ShapeMismatch {
                    context: "problem terms",
                    left: first,
                    right: s,
                });
            }
            t.f.validate(s.rows)?;
        }
        g.validate(first.cols)?;
        Ok(Problem {
            g,
            terms,
            dim: first.cols,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn g(&self) -> &ProxFunction {
        &self.g
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn stacked_operator(&self) -> StackedOperator {
        StackedOperator::new(self.terms.iter().map(|t| t.k.clone()).collect())
            .expect("terms share a domain by construction")
    }

    /// `G(x) + sum_i F_i(K_i x)`, `+inf` on an indicator violation.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        check_len("objective", self.dim, x.len())?;
        let mut total = self.g.value(x);
        for t in &self.terms {
            total += t.f.value(&t.k.apply(x)?);
        }
        Ok(total)
    }

    /// Fixed-point residual at unit steps; zero exactly at a saddle point.
    ///
    /// `|x - prox_G(x - sum K_i^T y_i)| + sum_i |y_i - prox_{F_i*}(y_i + K_i x)|`
    pub fn saddle_gap_report(&self, x: &[f64], ys: &[Vec<f64>]) -> Result<f64> {
        check_len("saddle gap primal", self.dim, x.len())?;
        check_len("saddle gap dual count", self.terms.len(), ys.len())?;
        let mut grad = vec![0.0; self.dim];
        for (t, y) in self.terms.iter().zip(ys) {
            check_len("saddle gap dual", t.k.shape().rows, y.len())?;
            for (g, v) in grad.iter_mut().zip(t.k.apply_adjoint(y)?) {
                *g += v;
            }
        }
        let u: Vec<f64> = x.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let mut px = vec![0.0; self.dim];
        apply_prox(&self.g, |_| 1.0, &u, &mut px)?;
        let mut gap = dist2(x, &px);
        for (t, y) in self.terms.iter().zip(ys) {
            let w: Vec<f64> = t.k.apply(x)?.iter().zip(y).map(|(a, b)| a + b).collect();
            let mut py = vec![0.0; w.len()];
            apply_prox_conjugate(&t.f, Step::Scalar(1.0), &w, &mut py)?;
            gap += dist2(y, &py);
        }
        Ok(gap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepPolicy {
    Fixed { tau: f64, sigma: f64, theta: f64 },
    Preconditioned { alpha: f64, theta: f64 },
}

impl StepPolicy {
    pub fn fixed(tau: f64, sigma: f64) -> Self {
        StepPolicy::Fixed {
            tau,
            sigma,
            theta: 1.0,
        }
    }

    pub fn preconditioned(alpha: f64) -> Self {
        StepPolicy::Preconditioned { alpha, theta: 1.0 }
    }

    /// Fixed steps from [`default_fixed_steps`].
    pub fn auto_fixed(problem: &Problem, seed: u64) -> Result<Self> {
        let (tau, sigma) = default_fixed_steps(problem, seed)?;
        Ok(Self::fixed(tau, sigma))
    }

    pub fn theta(&self) -> f64 {
        match self {
            StepPolicy::Fixed { theta, .. } | StepPolicy::Preconditioned { theta, .. } => *theta,
        }
    }

    pub fn with_theta(self, theta: f64) -> Self {
        match self {
            StepPolicy::Fixed { tau, sigma, .. } => StepPolicy::Fixed { tau, sigma, theta },
            StepPolicy::Preconditioned { alpha, .. } => StepPolicy::Preconditioned { alpha, theta },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub epsilon: f64,
    pub max_iter: usize,
}

impl StopRule {
    pub fn new(epsilon: f64, max_iter: usize) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::invalid(format!(
                "epsilon must be > 0, got {epsilon}"
            )));
        }
        if max_iter == 0 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        Ok(StopRule { epsilon, max_iter })
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub x0: Option<Vec<f64>>,
    pub y0s: Option<Vec<Vec<f64>>>,
    /// Objective (and SNR) are recorded every `log_every` iterations and at the end.
    pub log_every: usize,
    /// Ground truth for SNR logging.
    pub reference: Option<Vec<f64>>,
    /// Seed of the power iteration behind the fixed-step check.
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            x0: None,
            y0s: None,
            log_every: 50,
            reference: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryEntry {
    pub iteration: usize,
    pub rel_change: f64,
    pub objective: f64,
    pub snr_db: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub x: Vec<f64>,
    pub ys: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    pub history: Vec<HistoryEntry>,
    /// `|K|` measured for the fixed-step check; `None` when preconditioned.
    pub operator_norm: Option<f64>,
}

/// `tau = sigma = 0.99 / |K|` for the stacked operator, or `1` if it vanishes.
pub fn default_fixed_steps(problem: &Problem, seed: u64) -> Result<(f64, f64)> {
    let norm = power_iteration(&problem.stacked_operator(), NORM_MAX_ITERS, NORM_TOL, seed)?;
    if norm == 0.0 {
        return Ok((1.0, 1.0));
    }
    let s = DEFAULT_STEP_FACTOR / norm;
    Ok((s, s))
}

enum Steps {
    Scalar {
        tau: f64,
        sigma: f64,
    },
    Diagonal {
        tau: DiagonalMetric,
        sigmas: Vec<DiagonalMetric>,
    },
}

impl Steps {
    fn primal(&self) -> Step<'_> {
        match self {
            Steps::Scalar { tau, .. } => Step::Scalar(*tau),
            Steps::Diagonal { tau, .. } => Step::Diagonal(tau.as_slice()),
        }
    }

    fn dual(&self, i: usize) -> Step<'_> {
        match self {
            Steps::Scalar { sigma, .. } => Step::Scalar(*sigma),
            Steps::Diagonal { sigmas, .. } => Step::Diagonal(sigmas[i].as_slice()),
        }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "theta must lie in [0, 1], got {theta}"
        )))
    }
}

fn resolve_steps(
    problem: &Problem,
    policy: &StepPolicy,
    seed: u64,
) -> Result<(Steps, Option<f64>)> {
    match *policy {
        StepPolicy::Fixed { tau, sigma, theta } => {
            check_theta(theta)?;
            if !(tau.is_finite() && tau > 0.0 && sigma.is_finite() && sigma > 0.0) {
                return Err(Error::invalid(format!(
                    "fixed steps must be finite and > 0, got tau = {tau}, sigma = {sigma}"
                )));
            }
            let norm =
                power_iteration(&problem.stacked_operator(), NORM_MAX_ITERS, NORM_TOL, seed)?;
            let product = tau * sigma * norm * norm;
            if product > 1.0 + STEP_PRODUCT_SLACK {
                return Err(Error::StepTooLarge {
                    tau,
                    sigma,
                    norm,
                    product,
                });
            }
            Ok((Steps::Scalar { tau, sigma }, Some(norm)))
        }
        StepPolicy::Preconditioned { alpha, theta } => {
            check_theta(theta)?;
            let ops: Vec<&dyn LinearOperator> = problem.terms.iter().map(|t| &*t.k).collect();
            let mut pre = build_preconditioners(&ops, alpha)?;
            problem.g.couple_steps(pre.tau.entries_mut());
            for (t, s) in problem.terms.iter().zip(&mut pre.sigmas) {
                t.f.couple_steps(s.entries_mut());
            }
            Ok((
                Steps::Diagonal {
                    tau: pre.tau,
                    sigmas: pre.sigmas,
                },
                None,
            ))
        }
    }
}

/// Runs the iteration until `|x^{k+1} - x^k| / |x^k| <= epsilon` or `max_iter`.
pub fn solve(
    problem: &Problem,
    policy: &StepPolicy,
    stop: &StopRule,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let stop = StopRule::new(stop.epsilon, stop.max_iter)?;
    let n = problem.dim;
    let terms = &problem.terms;
    let theta = policy.theta();
    let (steps, operator_norm) = resolve_steps(problem, policy, opts.seed)?;

    let mut x = match &opts.x0 {
        Some(x0) => {
            check_len("initial primal", n, x0.len())?;
            x0.clone()
        }
        None => vec![0.0; n],
    };
    let mut ys: Vec<Vec<f64>> = match &opts.y0s {
        Some(y0s) => {
            check_len("initial dual count", terms.len(), y0s.len())?;
            for (t, y) in terms.iter().zip(y0s) {
                check_len("initial dual", t.k.shape().rows, y.len())?;
            }
            y0s.clone()
        }
        None => terms.iter().map(|t| vec![0.0; t.k.shape().rows]).collect(),
    };
    if let Some(r) = &opts.reference {
        check_len("reference image", n, r.len())?;
    }
    let log_every = opts.log_every.max(1);

    let mut x_new = vec![0.0; n];
    let mut grad = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut xbar = vec![0.0; n];
    let mut kx: Vec<Vec<f64>> = terms.iter().map(|t| vec![0.0; t.k.shape().rows]).collect();

    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for it in 1..=stop.max_iter {
        iterations = it;

        grad.fill(0.0);
        for (t, y) in terms.iter().zip(&ys) {
            t.k.apply_adjoint_into(y, &mut scratch);
            for (g, s) in grad.iter_mut().zip(&scratch) {
                *g += s;
            }
        }
        let primal = steps.primal();
        for (j, (s, (xj, gj))) in scratch.iter_mut().zip(x.iter().zip(&grad)).enumerate() {
            *s = xj - primal.at(j) * gj;
        }
        apply_prox(&problem.g, |j| primal.at(j), &scratch, &mut x_new)?;

        for ((b, xn), xo) in xbar.iter_mut().zip(&x_new).zip(&x) {
            *b = xn + theta * (xn - xo);
        }
        for (i, ((t, y), w)) in terms
            .iter()
            .zip(ys.iter_mut())
            .zip(kx.iter_mut())
            .enumerate()
        {
            let dual = steps.dual(i);
            t.k.apply_into(&xbar, w);
            for (r, (wr, yr)) in w.iter_mut().zip(y.iter()).enumerate() {
                *wr = yr + dual.at(r) * *wr;
            }
            apply_prox_conjugate(&t.f, dual, w, y)?;
        }

        let x_norm = norm2(&x);
        let change = dist2(&x_new, &x);
        let rel_change = if x_norm >= REL_CHANGE_FLOOR {
            change / x_norm
        } else {
            change
        };
        std::mem::swap(&mut x, &mut x_new);

        if !rel_change.is_finite() || !norm2(&x).is_finite() {
            return Err(Error::NonFinite {
                what: "primal iterate",
                iteration: it,
            });
        }

        converged = it >= MIN_ITERATIONS && rel_change <= stop.epsilon;
        if converged || it % log_every == 0 || it == stop.max_iter {
            history.push(HistoryEntry {
                iteration: it,
                rel_change,
                objective: problem.objective(&x)?,
                snr_db: match &opts.reference {
                    Some(r) => Some(snr_db(r, &x)?),
                    None => None,
                },
            });
        }
        if converged {
            break;
        }
    }

    Ok(SolveResult {
        x,
        ys,
        iterations,
        converged,
        history,
        operator_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::{Diagonal, Identity};

    fn identity_ls(b: Vec<f64>, g: ProxFunction) -> Problem {
        let n = b.len();
        Problem::new(
            g,
            vec![Term::from_op(
                ProxFunction::sq_l2(1.0, b).unwrap(),
                Identity(n),
            )],
        )
        .unwrap()
    }

    #[test]
    fn identity_least_squares_converges_to_data() {
        let p = identity_ls(vec![2.0, 4.0], ProxFunction::Zero);
        let stop = StopRule::new(1e-10, 5000).unwrap();
        let r = solve(
            &p,
            &StepPolicy::fixed(0.9, 0.9),
            &stop,
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert!(
            (r.x[0] - 2.0).abs() < 1e-6 && (r.x[1] - 4.0).abs() < 1e-6,
            "{:?}",
            r.x
        );
        assert!(p.saddle_gap_report(&r.x, &r.ys).unwrap() <= 1e-8);
    }

    #[test]
    fn nonneg_least_squares_clamps() {
        let p = identity_ls(vec![-1.0, 3.0], ProxFunction::IndicatorNonneg);
        let stop = StopRule::new(1e-10, 5000).unwrap();
        let r = solve(
            &p,
            &StepPolicy::fixed(0.9, 0.9),
            &stop,
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert!(
            r.x[0].abs() < 1e-6 && (r.x[1] - 3.0).abs() < 1e-6,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn refuses_oversized_steps() {
        let p = identity_ls(vec![1.0], ProxFunction::Zero);
        let stop = StopRule::new(1e-6, 10).unwrap();
        let err = solve(
            &p,
            &StepPolicy::fixed(1.1, 1.0),
            &stop,
            &SolveOptions::default(),
        );
        assert!(matches!(err, Err(Error::StepTooLarge { .. })));
        // equality is admitted
        assert!(solve(
            &p,
            &StepPolicy::fixed(1.0, 1.0),
            &stop,
            &SolveOptions::default()
        )
        .is_ok());
    }

    #[test]
    fn default_steps() {
        let p = identity_ls(vec![1.0, 2.0], ProxFunction::Zero);
        let (t, s) = default_fixed_steps(&p, 0).unwrap();
        assert!((t - 0.99).abs() < 1e-9 && (s - 0.99).abs() < 1e-9);

        let p = Problem::new(
            ProxFunction::Zero,
            vec![Term::from_op(ProxFunction::Zero, Diagonal(vec![2.0]))],
        )
        .unwrap();
        let (t, _) = default_fixed_steps(&p, 0).unwrap();
        assert!((t - 0.495).abs() < 1e-9);

        let two = Problem::new(
            ProxFunction::Zero,
            vec![
                Term::from_op(ProxFunction::Zero, Identity(1)),
                Term::from_op(ProxFunction::Zero, Identity(1)),
            ],
        )
        .unwrap();
        let (t, s) = default_fixed_steps(&two, 0).unwrap();
        assert!((t - 0.99 / 2f64.sqrt()).abs() < 1e-9 && t == s);

        let zero = Problem::new(
            ProxFunction::Zero,
            vec![Term::from_op(ProxFunction::Zero, Diagonal(vec![0.0, 0.0]))],
        )
        .unwrap();
        assert_eq!(default_fixed_steps(&zero, 0).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn objective_examples() {
        let p = identity_ls(vec![1.0, -2.0], ProxFunction::Zero);
        assert_eq!(p.objective(&[1.0, -2.0]).unwrap(), 0.0);
        let q = identity_ls(vec![1.0], ProxFunction::IndicatorNonneg);
        assert_eq!(q.objective(&[-1.0]).unwrap(), f64::INFINITY);
        let r = Problem::new(
            ProxFunction::Zero,
            vec![
                Term::from_op(ProxFunction::sq_l2(0.5, vec![2.0]).unwrap(), Identity(1)),
                Term::from_op(ProxFunction::l1(0.5, vec![2.0]).unwrap(), Identity(1)),
            ],
        )
        .unwrap();
        assert!((r.objective(&[3.0]).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn gap_positive_away_from_solution() {
        let p = identity_ls(vec![1.0, 2.0], ProxFunction::Zero);
        assert!(p.saddle_gap_report(&[0.0, 0.0], &[vec![0.0, 0.0]]).unwrap() > 0.0);
    }

    #[test]
    fn theta_zero_runs() {
        let p = identity_ls(vec![2.0, 4.0], ProxFunction::Zero);
        let stop = StopRule::new(1e-8, 2000).unwrap();
        let policy = StepPolicy::fixed(0.9, 0.9).with_theta(0.0);
        assert!(solve(&p, &policy, &stop, &SolveOptions::default()).is_ok());
        assert!(solve(&p, &policy.with_theta(1.5), &stop, &SolveOptions::default()).is_err());
    }

    #[test]
    fn history_records_final_iteration() {
        let p = identity_ls(vec![2.0, 4.0], ProxFunction::Zero);
        let stop = StopRule::new(1e-9, 5000).unwrap();
        let opts = SolveOptions {
            log_every: 7,
            reference: Some(vec![2.0, 4.0]),
            ..Default::default()
        };
        let r = solve(&p, &StepPolicy::fixed(0.9, 0.9), &stop, &opts).unwrap();
        let last = r.history.last().unwrap();
        assert_eq!(last.iteration, r.iterations);
        assert!(last.rel_change <= 1e-9);
        assert!(last.snr_db.unwrap() > 100.0);
        assert!(r
            .history
            .windows(2)
            .all(|w| w[0].iteration < w[1].iteration));
    }

    #[test]
    fn rejects_bad_initial_values() {
        let p = identity_ls(vec![2.0, 4.0], ProxFunction::Zero);
        let stop = StopRule::new(1e-9, 5).unwrap();
        let opts = SolveOptions {
            x0: Some(vec![0.0]),
            ..Default::default()
        };
        assert!(solve(&p, &StepPolicy::fixed(0.9, 0.9), &stop, &opts).is_err());
        assert!(StopRule::new(0.0, 5).is_err());
        assert!(StopRule::new(1e-3, 0).is_err());
    }
}

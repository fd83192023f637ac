//! Closed-form proximity operators.
//!
//! `prox_{step f}(v) = argmin_z f(z) + |z - v|^2 / (2 step)`. A [`Step`] is either a
//! scalar or a positive diagonal, in which case each coordinate (or, for the
//! coupled norms, each group) is shrunk with its own step. Conjugate proxes go
//! through Moreau's identity `v = prox_{s f}(v) + s prox_{f*/s}(v/s)`.

use crate::error::{check_len, Error, Result};
use crate::linop::DiagonalMetric;

mod function;

pub use function::{Param, ProxFunction};

/// Step size of a proximity operator: scalar or per coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step<'a> {
    Scalar(f64),
    Diagonal(&'a [f64]),
}

impl<'a> Step<'a> {
    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        match self {
            Step::Scalar(s) => *s,
            Step::Diagonal(d) => d[i],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Step::Scalar(s) => check_positive(*s),
            Step::Diagonal(d) => {
                check_len("diagonal step", n, d.len())?;
                d.iter().try_for_each(|&s| check_positive(s))
            }
        }
    }
}

impl<'a> From<f64> for Step<'a> {
    fn from(s: f64) -> Self {
        Step::Scalar(s)
    }
}

impl<'a> From<&'a DiagonalMetric> for Step<'a> {
    fn from(m: &'a DiagonalMetric) -> Self {
        Step::Diagonal(m.as_slice())
    }
}

impl<'a> From<&'a [f64]> for Step<'a> {
    fn from(d: &'a [f64]) -> Self {
        Step::Diagonal(d)
    }
}

fn check_positive(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "step must be finite and > 0, got {s}"
        )))
    }
}

/// Scalar soft threshold `sign(x) max(|x| - t, 0)`.
#[inline]
pub fn soft(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

pub fn soft_threshold<'a>(u: &[f64], lam: impl Into<Step<'a>>) -> Result<Vec<f64>> {
    let lam = lam.into();
    lam.validate(u.len())?;
    Ok(u.iter()
        .enumerate()
        .map(|(i, &x)| soft(x, lam.at(i)))
        .collect())
}

/// `b + Soft(u - b, lam)`, the prox of `|. - b|_1`.
pub fn prox_shifted_l1<'a>(u: &[f64], lam: impl Into<Step<'a>>, b: &[f64]) -> Result<Vec<f64>> {
    prox(&ProxFunction::l1(1.0, b.to_vec())?, lam, u)
}

/// `(u + lam b) / (1 + lam)`, the prox of `1/2 |. - b|_2^2`.
pub fn prox_shifted_sql2<'a>(u: &[f64], lam: impl Into<Step<'a>>, b: &[f64]) -> Result<Vec<f64>> {
    prox(&ProxFunction::sq_l2(1.0, b.to_vec())?, lam, u)
}

/// Block shrinkage of `u` toward `b`, the prox of `|. - b|_2`.
pub fn prox_l2norm(u: &[f64], lam: f64, b: &[f64]) -> Result<Vec<f64>> {
    prox(&ProxFunction::l2_norm(1.0, b.to_vec())?, lam, u)
}

/// Prox of `|.|_{1,2}` on `x = [x_1..x_m, x_{m+1}..x_{2m}]` with groups `(x_i, x_{m+i})`.
pub fn group_soft_threshold<'a>(x: &[f64], lam: impl Into<Step<'a>>) -> Result<Vec<f64>> {
    if x.len() % 2 != 0 {
        return Err(Error::invalid(format!(
            "group soft threshold needs an even length, got {}",
            x.len()
        )));
    }
    prox(&ProxFunction::group_l12(1.0, x.len() / 2)?, lam, x)
}

/// Euclidean projection onto the set of an indicator function.
pub fn project(u: &[f64], set: &ProxFunction) -> Result<Vec<f64>> {
    if !set.is_indicator() {
        return Err(Error::invalid(format!(
            "project needs an indicator function, got {}",
            set.name()
        )));
    }
    prox(set, 1.0, u)
}

pub fn prox<'a>(f: &ProxFunction, step: impl Into<Step<'a>>, v: &[f64]) -> Result<Vec<f64>> {
    let mut out = vec![0.0; v.len()];
    prox_into(f, step, v, &mut out)?;
    Ok(out)
}

pub fn prox_into<'a>(
    f: &ProxFunction,
    step: impl Into<Step<'a>>,
    v: &[f64],
    out: &mut [f64],
) -> Result<()> {
    let step = step.into();
    check_len("prox output", v.len(), out.len())?;
    f.validate(v.len())?;
    step.validate(v.len())?;
    apply_prox(f, |i| step.at(i), v, out)
}

/// `prox_{sigma f*}(v)` via Moreau's identity.
pub fn prox_conjugate<'a>(
    f: &ProxFunction,
    sigma: impl Into<Step<'a>>,
    v: &[f64],
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; v.len()];
    prox_conjugate_into(f, sigma, v, &mut out)?;
    Ok(out)
}

pub fn prox_conjugate_into<'a>(
    f: &ProxFunction,
    sigma: impl Into<Step<'a>>,
    v: &[f64],
    out: &mut [f64],
) -> Result<()> {
    let sigma = sigma.into();
    check_len("prox output", v.len(), out.len())?;
    f.validate(v.len())?;
    sigma.validate(v.len())?;
    apply_prox_conjugate(f, sigma, v, out)
}

/// `w/(w + sigma) (v - sigma b)`: the conjugate prox of `w/2 |. - b|^2` written out.
pub fn sq_l2_conjugate_closed_form<'a>(
    weight: f64,
    shift: &Param,
    sigma: impl Into<Step<'a>>,
    v: &[f64],
) -> Result<Vec<f64>> {
    let sigma = sigma.into();
    sigma.validate(v.len())?;
    shift.check_len("prox shift", v.len())?;
    Ok(v.iter()
        .enumerate()
        .map(|(i, &vi)| {
            let s = sigma.at(i);
            weight / (weight + s) * (vi - s * shift.at(i))
        })
        .collect())
}

/// Unchecked dispatch; `f`, `step` and lengths must already be validated.
pub(crate) fn apply_prox(
    f: &ProxFunction,
    step: impl Fn(usize) -> f64,
    v: &[f64],
    out: &mut [f64],
) -> Result<()> {
    match f {
        ProxFunction::Zero => out.copy_from_slice(v),
        ProxFunction::L1 { weight, shift } => {
            for (i, (o, &vi)) in out.iter_mut().zip(v).enumerate() {
                let b = shift.at(i);
                *o = b + soft(vi - b, step(i) * weight);
            }
        }
        ProxFunction::SqL2 { weight, shift } => {
            for (i, (o, &vi)) in out.iter_mut().zip(v).enumerate() {
                let t = step(i) * weight;
                *o = (vi + t * shift.at(i)) / (1.0 + t);
            }
        }
        ProxFunction::L2Norm { weight, shift } => {
            let s = step(0);
            if let Some(i) = (1..v.len()).find(|&i| step(i) != s) {
                return Err(Error::invalid(format!(
                    "Euclidean-norm prox needs one shared step; coordinate {i} differs"
                )));
            }
            let t = s * weight;
            let nrm = v
                .iter()
                .enumerate()
                .map(|(i, &vi)| (vi - shift.at(i)).powi(2))
                .sum::<f64>()
                .sqrt();
            if nrm <= t {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = shift.at(i);
                }
            } else {
                let factor = 1.0 - t / nrm;
                for (i, (o, &vi)) in out.iter_mut().zip(v).enumerate() {
                    let b = shift.at(i);
                    *o = b + factor * (vi - b);
                }
            }
        }
        ProxFunction::GroupL12 { weight, group_len } => {
            let m = *group_len;
            for i in 0..m {
                let s = step(i);
                if step(m + i) != s {
                    return Err(Error::invalid(format!(
                        "group {i} has unequal steps {s} and {}",
                        step(m + i)
                    )));
                }
                let t = s * weight;
                let (a, c) = (v[i], v[m + i]);
                let nrm = a.hypot(c);
                if nrm <= t {
                    out[i] = 0.0;
                    out[m + i] = 0.0;
                } else {
                    let factor = 1.0 - t / nrm;
                    out[i] = factor * a;
                    out[m + i] = factor * c;
                }
            }
        }
        ProxFunction::IndicatorNonneg => {
            for (o, &vi) in out.iter_mut().zip(v) {
                *o = vi.max(0.0);
            }
        }
        ProxFunction::IndicatorBox { lo, hi } => {
            for (i, (o, &vi)) in out.iter_mut().zip(v).enumerate() {
                *o = vi.clamp(lo.at(i), hi.at(i));
            }
        }
    }
    Ok(())
}

/// Unchecked conjugate dispatch; see [`apply_prox`].
///
/// For the indicators the identity `v - s P_C(v/s)` is evaluated so that points
/// with `v/s` inside the set map to exactly zero.
pub(crate) fn apply_prox_conjugate(
    f: &ProxFunction,
    sigma: Step<'_>,
    v: &[f64],
    out: &mut [f64],
) -> Result<()> {
    match f {
        ProxFunction::Zero => out.fill(0.0),
        ProxFunction::IndicatorNonneg => {
            for (o, &vi) in out.iter_mut().zip(v) {
                *o = vi.min(0.0);
            }
        }
        ProxFunction::IndicatorBox { lo, hi } => {
            for (i, (o, &vi)) in out.iter_mut().zip(v).enumerate() {
                let s = sigma.at(i);
                let t = vi / s;
                let (l, h) = (lo.at(i), hi.at(i));
                *o = if t < l {
                    vi - s * l
                } else if t > h {
                    vi - s * h
                } else {
                    0.0
                };
            }
        }
        _ => {
            for (i, (o, &vi)) in out.iter_mut().zip(v).enumerate() {
                *o = vi / sigma.at(i);
            }
            let scaled = out.to_vec();
            apply_prox(f, |i| 1.0 / sigma.at(i), &scaled, out)?;
            for (i, (o, &vi)) in out.iter_mut().zip(v).enumerate() {
                *o = vi - sigma.at(i) * *o;
            }
        }
    }
    Ok(())
}

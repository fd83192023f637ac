//! The constrained l2-l1-TV reconstruction model
//!
//! ```text
//! min_x  w1/2 |A x - b|_2^2 + w2 |A x - b|_1 + lambda TV(x) + i_C(x)
//! ```
//!
//! split either with the constraint as a fourth composite term on the identity
//! (Method I, `G = 0`) or as `G` itself (Method II).

use std::sync::Arc;

use super::projector::TomoProblem;
use crate::error::{Error, Result};
use crate::linop::{Grad2D, Identity, SharedOperator};
use crate::prox::ProxFunction;
use crate::solver::{Problem, Term};

/// `|w1 + w2 - 1|` tolerated, absorbing decimal round-off such as `0.7 + 0.3`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TvKind {
    /// Anisotropic, `|D x|_1`.
    Atv,
    /// Isotropic, `|D x|_{1,2}`.
    Itv,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    None,
    Nonneg,
    Box { lo: f64, hi: f64 },
}

impl Constraint {
    fn indicator(&self) -> Result<ProxFunction> {
        Ok(match *self {
            Constraint::None => ProxFunction::indicator_everything(),
            Constraint::Nonneg => ProxFunction::IndicatorNonneg,
            Constraint::Box { lo, hi } => ProxFunction::indicator_box(lo, hi)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// `G = 0`, constraint as the term `(i_C, I)`.
    MethodI,
    /// `G = i_C`.
    MethodII,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtModelSpec {
    pub w1: f64,
    pub w2: f64,
    pub lambda: f64,
    pub tv: TvKind,
    pub constraint: Constraint,
    pub method: Method,
}

impl CtModelSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, w) in [("w1", self.w1), ("w2", self.w2)] {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::invalid(format!(
                    "{name} must lie in [0, 1], got {w}"
                )));
            }
        }
        if (self.w1 + self.w2 - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::invalid(format!(
                "w1 + w2 must equal 1, got {} + {}",
                self.w1, self.w2
            )));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid(format!(
                "lambda must be > 0, got {}",
                self.lambda
            )));
        }
        if let Constraint::Box { .. } = self.constraint {
            self.constraint.indicator()?;
        }
        Ok(())
    }
}

pub fn build_ct_problem(tomo: &TomoProblem, spec: &CtModelSpec) -> Result<Problem> {
    spec.validate()?;
    let n = tomo.geometry.n;
    let a: SharedOperator = tomo.a.clone();
    let d: SharedOperator = Arc::new(Grad2D::new(n)?);
    let b = tomo.b.clone();
    let tv = match spec.tv {
        TvKind::Atv => ProxFunction::l1(spec.lambda, 0.0)?,
        TvKind::Itv => ProxFunction::group_l12(spec.lambda, n * n)?,
    };
    let mut terms = vec![
        Term::new(ProxFunction::sq_l2(spec.w1, b.clone())?, a.clone()),
        Term::new(ProxFunction::l1(spec.w2, b)?, a),
        Term::new(tv, d),
    ];
    let g = match spec.method {
        Method::MethodI => {
            terms.push(Term::new(
                spec.constraint.indicator()?,
                Arc::new(Identity(n * n)),
            ));
            ProxFunction::Zero
        }
        Method::MethodII => match spec.constraint {
            Constraint::None => ProxFunction::Zero,
            c => c.indicator()?,
        },
    };
    Problem::new(g, terms)
}

use crate::error::{check_len, Error, Result};

/// A coefficient that is either shared by every coordinate or given per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Uniform(f64),
    PerCoord(Vec<f64>),
}

impl Param {
    pub const ZERO: Param = Param::Uniform(0.0);

    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        match self {
            Param::Uniform(v) => *v,
            Param::PerCoord(v) => v[i],
        }
    }

    pub(crate) fn check_len(&self, context: &'static str, n: usize) -> Result<()> {
        match self {
            Param::Uniform(_) => Ok(()),
            Param::PerCoord(v) => check_len(context, n, v.len()),
        }
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Uniform(v)
    }
}

impl From<Vec<f64>> for Param {
    fn from(v: Vec<f64>) -> Self {
        Param::PerCoord(v)
    }
}

/// Convex functions with closed-form proximity operators.
///
/// Weights scale the whole function, e.g. `SqL2 { weight: w, shift: b }` is
/// `w/2 |z - b|_2^2`. `GroupL12` is `w * sum_i |(z_i, z_{m+i})|_2` over an
/// argument of length `2m` with `m = group_len`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProxFunction {
    Zero,
    L1 { weight: f64, shift: Param },
    SqL2 { weight: f64, shift: Param },
    L2Norm { weight: f64, shift: Param },
    GroupL12 { weight: f64, group_len: usize },
    IndicatorNonneg,
    IndicatorBox { lo: Param, hi: Param },
}

impl ProxFunction {
    pub fn l1(weight: f64, shift: impl Into<Param>) -> Result<Self> {
        check_weight(weight)?;
        Ok(ProxFunction::L1 {
            weight,
            shift: shift.into(),
        })
    }

    pub fn sq_l2(weight: f64, shift: impl Into<Param>) -> Result<Self> {
        check_weight(weight)?;
        Ok(ProxFunction::SqL2 {
            weight,
            shift: shift.into(),
        })
    }

    pub fn l2_norm(weight: f64, shift: impl Into<Param>) -> Result<Self> {
        check_weight(weight)?;
        Ok(ProxFunction::L2Norm {
            weight,
            shift: shift.into(),
        })
    }

    pub fn group_l12(weight: f64, group_len: usize) -> Result<Self> {
        check_weight(weight)?;
        Ok(ProxFunction::GroupL12 { weight, group_len })
    }

    pub fn indicator_box(lo: impl Into<Param>, hi: impl Into<Param>) -> Result<Self> {
        let f = ProxFunction::IndicatorBox {
            lo: lo.into(),
            hi: hi.into(),
        };
        if let ProxFunction::IndicatorBox { lo, hi } = &f {
            check_bounds(lo, hi, None)?;
        }
        Ok(f)
    }

    /// The indicator of the whole space, a box with infinite bounds.
    pub fn indicator_everything() -> Self {
        ProxFunction::IndicatorBox {
            lo: Param::Uniform(f64::NEG_INFINITY),
            hi: Param::Uniform(f64::INFINITY),
        }
    }

    pub fn is_indicator(&self) -> bool {
        matches!(
            self,
            ProxFunction::IndicatorNonneg | ProxFunction::IndicatorBox { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProxFunction::Zero => "Zero",
            ProxFunction::L1 { .. } => "L1",
            ProxFunction::SqL2 { .. } => "SqL2",
            ProxFunction::L2Norm { .. } => "L2Norm",
            ProxFunction::GroupL12 { .. } => "GroupL12",
            ProxFunction::IndicatorNonneg => "IndicatorNonneg",
            ProxFunction::IndicatorBox { .. } => "IndicatorBox",
        }
    }

    /// Checks every invariant against an argument of length `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            ProxFunction::Zero | ProxFunction::IndicatorNonneg => Ok(()),
            ProxFunction::L1 { weight, shift }
            | ProxFunction::SqL2 { weight, shift }
            | ProxFunction::L2Norm { weight, shift } => {
                check_weight(*weight)?;
                shift.check_len("prox shift", n)
            }
            ProxFunction::GroupL12 { weight, group_len } => {
                check_weight(*weight)?;
                if n % 2 != 0 {
                    return Err(Error::invalid(format!(
                        "group l1,2 argument must have even length, got {n}"
                    )));
                }
                check_len("group l1,2 argument", 2 * group_len, n)
            }
            ProxFunction::IndicatorBox { lo, hi } => check_bounds(lo, hi, Some(n)),
        }
    }

    /// Function value at `z`; `+inf` outside an indicator's set.
    pub fn value(&self, z: &[f64]) -> f64 {
        match self {
            ProxFunction::Zero => 0.0,
            ProxFunction::L1 { weight, shift } => {
                weight
                    * z.iter()
                        .enumerate()
                        .map(|(i, zi)| (zi - shift.at(i)).abs())
                        .sum::<f64>()
            }
            ProxFunction::SqL2 { weight, shift } => {
                0.5 * weight
                    * z.iter()
                        .enumerate()
                        .map(|(i, zi)| (zi - shift.at(i)).powi(2))
                        .sum::<f64>()
            }
            ProxFunction::L2Norm { weight, shift } => {
                weight
                    * z.iter()
                        .enumerate()
                        .map(|(i, zi)| (zi - shift.at(i)).powi(2))
                        .sum::<f64>()
                        .sqrt()
            }
            ProxFunction::GroupL12 { weight, group_len } => {
                let m = *group_len;
                weight * (0..m).map(|i| z[i].hypot(z[m + i])).sum::<f64>()
            }
            ProxFunction::IndicatorNonneg => {
                if z.iter().all(|&zi| zi >= 0.0) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ProxFunction::IndicatorBox { lo, hi } => {
                if z.iter()
                    .enumerate()
                    .all(|(i, &zi)| zi >= lo.at(i) && zi <= hi.at(i))
                {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Shrinks per-coordinate steps so coupled coordinates share one value.
    ///
    /// The group norm couples `(i, m+i)` and the Euclidean norm couples every
    /// coordinate; each coupled set takes its minimum. Shrinking a diagonal step
    /// never increases `|Sigma^(1/2) K T^(1/2)|`.
    pub fn couple_steps(&self, steps: &mut [f64]) {
        match self {
            ProxFunction::GroupL12 { group_len, .. } => {
                let m = *group_len;
                if steps.len() == 2 * m {
                    let (a, b) = steps.split_at_mut(m);
                    for (x, y) in a.iter_mut().zip(b) {
                        let s = x.min(*y);
                        *x = s;
                        *y = s;
                    }
                }
            }
            ProxFunction::L2Norm { .. } => {
                let s = steps.iter().copied().fold(f64::INFINITY, f64::min);
                steps.fill(s);
            }
            _ => {}
        }
    }
}

fn check_weight(w: f64) -> Result<()> {
    if w.is_finite() && w >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "weight must be finite and >= 0, got {w}"
        )))
    }
}

fn check_bounds(lo: &Param, hi: &Param, n: Option<usize>) -> Result<()> {
    if let Some(n) = n {
        lo.check_len("box lower bound", n)?;
        hi.check_len("box upper bound", n)?;
    }
    let len = match (lo, hi) {
        (Param::PerCoord(a), Param::PerCoord(b)) => {
            check_len("box bounds", a.len(), b.len())?;
            a.len()
        }
        (Param::PerCoord(v), _) | (_, Param::PerCoord(v)) => v.len(),
        _ => 1,
    };
    for i in 0..len {
        let (l, h) = (lo.at(i), hi.at(i));
        if l.is_nan() || h.is_nan() || l > h || l == f64::INFINITY || h == f64::NEG_INFINITY {
            return Err(Error::invalid(format!(
                "box bounds at coordinate {i} are invalid: lo = {l}, hi = {h}"
            )));
        }
    }
    Ok(())
}

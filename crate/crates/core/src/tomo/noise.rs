//! Gaussian plus impulsive corruption of projection data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Fraction of entries replaced by impulses unless configured.
pub const DEFAULT_IMPULSE_FRACTION: f64 = 0.05;
/// Gaussian level relative to `mean |b|` unless configured.
pub const DEFAULT_GAUSSIAN_RELATIVE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub gaussian_sigma: f64,
    pub impulse_fraction: f64,
    pub impulse_scale: f64,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel {
        gaussian_sigma: 0.0,
        impulse_fraction: 0.0,
        impulse_scale: 0.0,
    };

    /// `sigma = 0.01 mean|b|`, 5% impulses up to `max |b|`.
    pub fn default_for(b: &[f64]) -> Self {
        let mean_abs = if b.is_empty() {
            0.0
        } else {
            b.iter().map(|v| v.abs()).sum::<f64>() / b.len() as f64
        };
        NoiseModel {
            gaussian_sigma: DEFAULT_GAUSSIAN_RELATIVE * mean_abs,
            impulse_fraction: DEFAULT_IMPULSE_FRACTION,
            impulse_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gaussian_sigma.is_finite() && self.gaussian_sigma >= 0.0) {
            return Err(Error::invalid(format!(
                "gaussian_sigma must be finite and >= 0, got {}",
                self.gaussian_sigma
            )));
        }
        if !(0.0..=1.0).contains(&self.impulse_fraction) {
            return Err(Error::invalid(format!(
                "impulse_fraction must lie in [0, 1], got {}",
                self.impulse_fraction
            )));
        }
        if !(self.impulse_scale.is_finite() && self.impulse_scale >= 0.0) {
            return Err(Error::invalid(format!(
                "impulse_scale must be finite and >= 0, got {}",
                self.impulse_scale
            )));
        }
        Ok(())
    }

    /// Corrupts `b`; the mask marks entries replaced by an impulse.
    ///
    /// Each entry first gets `sigma * N(0,1)`, then with probability
    /// `impulse_fraction` is replaced by a uniform draw on
    /// `[0, impulse_scale * max |b|]`. Draw order is fixed, so output depends
    /// only on `b` and `seed`.
    pub fn apply(&self, b: &[f64], seed: u64) -> Result<(Vec<f64>, Vec<bool>)> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let peak = self.impulse_scale * b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut out = Vec::with_capacity(b.len());
        let mut mask = Vec::with_capacity(b.len());
        for &v in b {
            let g: f64 = rng.sample(StandardNormal);
            let hit = rng.random::<f64>() < self.impulse_fraction;
            let u = rng.random::<f64>();
            mask.push(hit);
            out.push(if hit {
                u * peak
            } else {
                v + self.gaussian_sigma * g
            });
        }
        Ok((out, mask))
    }
}

pub fn add_noise(
    b: &[f64],
    gaussian_sigma: f64,
    impulse_fraction: f64,
    impulse_scale: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    let model = NoiseModel {
        gaussian_sigma,
        impulse_fraction,
        impulse_scale,
    };
    Ok(model.apply(b, seed)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_noise_is_identity() {
        let b = vec![1.0, -2.5, 3.0];
        assert_eq!(add_noise(&b, 0.0, 0.0, 1.0, 9).unwrap(), b);
    }

    #[test]
    fn full_zero_impulses() {
        let b = vec![1.0, -2.5, 3.0];
        assert_eq!(add_noise(&b, 0.3, 1.0, 0.0, 9).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn deterministic_and_seed_dependent() {
        let b: Vec<f64> = (0..50).map(f64::from).collect();
        let m = NoiseModel::default_for(&b);
        assert_eq!(m.apply(&b, 4).unwrap(), m.apply(&b, 4).unwrap());
        assert_ne!(m.apply(&b, 4).unwrap().0, m.apply(&b, 5).unwrap().0);
    }

    #[test]
    fn impulses_stay_in_range() {
        let b: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let (noisy, mask) = NoiseModel::default_for(&b).apply(&b, 1).unwrap();
        let peak = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (v, hit) in noisy.iter().zip(mask) {
            if hit {
                assert!((0.0..=peak).contains(v));
            }
        }
    }

    #[test]
    fn defaults() {
        let m = NoiseModel::default_for(&[2.0, -4.0]);
        assert_eq!(m.gaussian_sigma, 0.03);
        assert_eq!(m.impulse_fraction, 0.05);
        assert_eq!(m.impulse_scale, 1.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(add_noise(&[1.0], -1.0, 0.0, 1.0, 0).is_err());
        assert!(add_noise(&[1.0], 0.0, 1.5, 1.0, 0).is_err());
        assert!(add_noise(&[1.0], 0.0, 0.5, f64::NAN, 0).is_err());
    }
}

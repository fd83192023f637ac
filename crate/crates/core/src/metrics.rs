//! Image-quality metrics.

use crate::error::{check_len, Error, Result};

/// `10 log10(|x_true|^2 / |x_true - x_rec|^2)`; `+inf` when the images agree.
pub fn snr_db(x_true: &[f64], x_rec: &[f64]) -> Result<f64> {
    energy_ratio(x_true, x_rec).map(|r| 10.0 * r.log10())
}

/// The same ratio without the decibel factor, `log10(|x_true|^2 / |x_true - x_rec|^2)`.
pub fn snr_log10(x_true: &[f64], x_rec: &[f64]) -> Result<f64> {
    energy_ratio(x_true, x_rec).map(f64::log10)
}

/// `|x_true - x_rec| / |x_true|`.
pub fn relative_error(x_true: &[f64], x_rec: &[f64]) -> Result<f64> {
    let (signal, err) = energies(x_true, x_rec)?;
    Ok((err / signal).sqrt())
}

fn energy_ratio(x_true: &[f64], x_rec: &[f64]) -> Result<f64> {
    let (signal, err) = energies(x_true, x_rec)?;
    Ok(if err == 0.0 {
        f64::INFINITY
    } else {
        signal / err
    })
}

fn energies(x_true: &[f64], x_rec: &[f64]) -> Result<(f64, f64)> {
    check_len("snr", x_true.len(), x_rec.len())?;
    let signal: f64 = x_true.iter().map(|v| v * v).sum();
    if signal == 0.0 {
        return Err(Error::invalid("reference image is identically zero"));
    }
    let err = x_true
        .iter()
        .zip(x_rec)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok((signal, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_reconstruction_is_zero_db() {
        assert_eq!(snr_db(&[1.0, 2.0], &[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn exact_reconstruction_is_infinite() {
        assert_eq!(snr_db(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), f64::INFINITY);
    }

    #[test]
    fn ratio_hundred_is_twenty_db() {
        // |x|^2 = 100, |err|^2 = 1
        let x = [6.0, 8.0];
        let r = [6.0, 7.0];
        assert!((snr_db(&x, &r).unwrap() - 20.0).abs() < 1e-12);
        assert!((snr_log10(&x, &r).unwrap() - 2.0).abs() < 1e-12);
        assert!((relative_error(&x, &r).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn rejects_zero_reference_and_mismatch() {
        assert!(snr_db(&[0.0, 0.0], &[1.0, 0.0]).is_err());
        assert!(snr_db(&[1.0], &[1.0, 0.0]).is_err());
    }
}

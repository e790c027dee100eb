//! Effective classical channel between the reconciliation inputs:
//! `y = t x + z` with white Gaussian `z`, plus SNR estimation.

use crate::error::{Error, Result};
use crate::randsrc::{gaussian_block, SeedSpec};

/// AWGN channel parameters. `snr` here always means `t^2 Var(X) / sigma^2`
/// measured on the population that actually enters reconciliation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub gain: f64,
    pub noise_variance: f64,
}

impl ChannelParams {
    pub fn new(gain: f64, noise_variance: f64) -> Result<Self> {
        if !noise_variance.is_finite() || noise_variance <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "noise variance must be positive, got {noise_variance}"
            )));
        }
        if !gain.is_finite() {
            return Err(Error::InvalidParameter("gain must be finite".into()));
        }
        Ok(Self {
            gain,
            noise_variance,
        })
    }

    /// Noise variance needed so the given signal variance hits `snr` at t = 1.
    pub fn from_snr(signal_variance: f64, snr: f64) -> Result<Self> {
        if !(snr.is_finite() && snr > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "snr must be positive, got {snr}"
            )));
        }
        Self::new(1.0, signal_variance / snr)
    }
}

/// Applies `y_i = t x_i + z_i` with i.i.d. `z ~ Normal(0, sigma^2)`.
pub fn awgn_apply(x: &[f64], params: &ChannelParams, seed: SeedSpec) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::InvalidInput("empty input block".into()));
    }
    let z = gaussian_block(x.len(), params.noise_variance, seed)?;
    Ok(x.iter()
        .zip(&z)
        .map(|(&xi, &zi)| params.gain * xi + zi)
        .collect())
}

/// Estimates `t^2 Var(x) / Var(y - t x)`. Noiseless input returns +infinity.
pub fn estimate_snr(x: &[f64], y: &[f64], gain: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 1000 {
        return Err(Error::InvalidInput(format!(
            "need at least 1000 samples for SNR estimation, got {}",
            x.len()
        )));
    }
    let n = x.len() as f64;
    let var = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / n;
        v.iter().map(|w| (w - m) * (w - m)).sum::<f64>() / n
    };
    let residual: Vec<f64> = x.iter().zip(y).map(|(&xi, &yi)| yi - gain * xi).collect();
    let noise = var(&residual);
    let signal = gain * gain * var(x);
    if noise == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(signal / noise)
}

//! Information-theoretic reporting: AWGN capacity, the efficiency/SNR map,
//! Gaussian collective-attack mutual information and Holevo bound, and
//! key-rate-versus-distance curves.
//!
//! The collective-attack model is the standard one for Gaussian-modulated
//! coherent states with reverse reconciliation. The two-mode covariance
//! matrix after a channel of transmittance `T_c` and excess noise `eps`
//! (referred to the channel input) is
//! `[[V I2, sqrt(T_c (V^2-1)) sz], [sqrt(T_c (V^2-1)) sz, T_c (V + chi) I2]]`
//! with `V = V_A + 1` and line noise `chi = (1 - T_c)/T_c + eps`. Eve holds
//! the purification, so `S(E:B) = S(AB) - S(A|B)` evaluated through
//! symplectic eigenvalues and the thermal entropy
//! `G(x) = (x+1) log2(x+1) - x log2 x`.
//!
//! The photon-subtracted protocol is scored by its equivalent Gaussian
//! protocol as a lower bound: the same formulas evaluated at the variance
//! the postselected data actually has, weighted by the postselection success
//! probability `P(k)`.

use crate::error::{Error, Result};
use crate::postselect::PostselectParams;

/// Detection type at Bob's side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Detector {
    Homodyne,
    Heterodyne,
}

/// Protocol configuration for key-rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    /// Modulation variance in shot-noise units.
    pub va: f64,
    pub distance_km: f64,
    pub attenuation_db_per_km: f64,
    /// Excess noise at the channel output, referred to the input.
    pub excess_noise: f64,
    pub detector: Detector,
    /// Reconciliation efficiency in (0, 1].
    pub beta: f64,
    /// Photon-subtraction count; 0 means the plain Gaussian protocol.
    pub k: u32,
    /// Transmittance of the virtual photon subtraction (used when k >= 1).
    pub t_ps: f64,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        Self {
            va: 20.0,
            distance_km: 0.0,
            attenuation_db_per_km: 0.2,
            excess_noise: 0.01,
            detector: Detector::Homodyne,
            beta: 0.95,
            k: 0,
            t_ps: 0.8,
        }
    }
}

impl ProtocolParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.va > 0.0 && self.va.is_finite()) {
            return Err(Error::InvalidParameter("va must be positive".into()));
        }
        if self.distance_km < 0.0 || self.attenuation_db_per_km <= 0.0 {
            return Err(Error::InvalidParameter(
                "distance must be >= 0 and attenuation positive".into(),
            ));
        }
        if self.excess_noise < 0.0 {
            return Err(Error::InvalidParameter("excess noise must be >= 0".into()));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::InvalidParameter("beta must be in (0,1]".into()));
        }
        Ok(())
    }

    /// `T_c = 10^(-attenuation * distance / 10)`.
    pub fn channel_transmittance(&self) -> f64 {
        10f64.powf(-self.attenuation_db_per_km * self.distance_km / 10.0)
    }
}

/// Key-rate report with all intermediate terms.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KeyRateReport {
    pub i_ab: f64,
    pub holevo: f64,
    pub p_success: f64,
    /// bits per channel use, clamped at zero.
    pub key_rate: f64,
    /// Modulation variance the Gaussian formulas were evaluated at.
    pub effective_va: f64,
}

/// Shannon capacity of the real AWGN channel, `0.5 log2(1 + snr)`.
pub fn awgn_capacity(snr: f64) -> Result<f64> {
    if snr < 0.0 || !snr.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "snr must be nonnegative, got {snr}"
        )));
    }
    Ok(0.5 * (1.0 + snr).log2())
}

/// Reconciliation efficiency of `rate` at the given SNR.
pub fn beta_from_snr(rate: f64, snr: f64) -> Result<f64> {
    check_rate(rate)?;
    let cap = awgn_capacity(snr)?;
    if cap <= 0.0 {
        return Err(Error::InvalidParameter("snr gives zero capacity".into()));
    }
    let beta = rate / cap;
    if beta > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "super-capacity configuration: rate {rate} exceeds capacity {cap:.6} (beta {beta:.4})"
        )));
    }
    Ok(beta)
}

/// SNR at which `rate` achieves efficiency `beta`: `2^(2 rate / beta) - 1`.
pub fn snr_from_beta(rate: f64, beta: f64) -> Result<f64> {
    check_rate(rate)?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "beta must be in (0,1], got {beta}"
        )));
    }
    Ok((2.0 * rate / beta).exp2() - 1.0)
}

fn check_rate(rate: f64) -> Result<()> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rate must be in (0,1), got {rate}"
        )));
    }
    Ok(())
}

/// Thermal-state entropy term `G(x) = (x+1) log2(x+1) - x log2 x`.
fn entropy_g(x: f64) -> f64 {
    if x < 1e-12 {
        // x log2 x -> 0; first-order expansion avoids 0 * log 0.
        return x * (1.0 - x.max(f64::MIN_POSITIVE).ln()) / std::f64::consts::LN_2;
    }
    ((x + 1.0) * x.ln_1p() - x * x.ln()) / std::f64::consts::LN_2
}

/// Covariance parameters (a, b, c) of the two-mode state for a Gaussian
/// protocol with modulation variance `va`.
fn covariance(params: &ProtocolParams, va: f64) -> (f64, f64, f64) {
    let v = va + 1.0;
    let t_c = params.channel_transmittance();
    let chi = (1.0 - t_c) / t_c + params.excess_noise;
    let a = v;
    let b = t_c * (v + chi);
    let c = (t_c * (v * v - 1.0)).sqrt();
    (a, b, c)
}

fn mutual_information_at(params: &ProtocolParams, va: f64) -> f64 {
    let v = va + 1.0;
    let t_c = params.channel_transmittance();
    let chi = (1.0 - t_c) / t_c + params.excess_noise;
    match params.detector {
        Detector::Homodyne => 0.5 * ((v + chi) / (1.0 + chi)).log2(),
        Detector::Heterodyne => ((v + chi + 1.0) / (chi + 2.0)).log2(),
    }
}

/// Classical mutual information I(A:B) of the Gaussian protocol.
pub fn mutual_information(params: &ProtocolParams) -> Result<f64> {
    params.validate()?;
    Ok(mutual_information_at(params, params.va))
}

fn holevo_at(params: &ProtocolParams, va: f64) -> Result<f64> {
    let (a, b, c) = covariance(params, va);
    // Symplectic eigenvalues of the joint state.
    let delta = a * a + b * b - 2.0 * c * c;
    let det = (a * b - c * c).powi(2);
    let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
    let nu1_sq = 0.5 * (delta + disc);
    let nu2_sq = 0.5 * (delta - disc);
    // Conditional eigenvalue after Bob's measurement.
    let nu3_sq = match params.detector {
        Detector::Homodyne => a * (a - c * c / b),
        Detector::Heterodyne => (a - c * c / (b + 1.0)).powi(2),
    };
    let mut nus = [nu1_sq, nu2_sq, nu3_sq];
    for nu in &mut nus {
        if *nu < 1.0 - 1e-9 {
            return Err(Error::Numerical(format!(
                "unphysical state: symplectic eigenvalue^2 = {nu} < 1 (bad parameters?)"
            )));
        }
        *nu = nu.max(1.0);
    }
    let [nu1, nu2, nu3] = nus.map(f64::sqrt);
    Ok(entropy_g((nu1 - 1.0) / 2.0) + entropy_g((nu2 - 1.0) / 2.0) - entropy_g((nu3 - 1.0) / 2.0))
}

/// Holevo bound S(E:B) for the equivalent Gaussian protocol.
pub fn holevo_bound(params: &ProtocolParams) -> Result<f64> {
    params.validate()?;
    holevo_at(params, params.va)
}

/// Modulation variance of the equivalent Gaussian protocol for `params`:
/// `va` itself for k = 0, the postselected data variance for k >= 1.
pub fn effective_va(params: &ProtocolParams) -> Result<f64> {
    if params.k == 0 {
        Ok(params.va)
    } else {
        let ps = PostselectParams::new(params.t_ps, params.va, params.k)?;
        Ok(ps.postselected_variance())
    }
}

/// Secret key rate `max(0, p (beta I - S))` with all intermediate terms.
///
/// `p_success` is the postselection success probability (1 for the plain
/// Gaussian protocol). For k >= 1 the Gaussian terms are evaluated at the
/// postselected data variance.
pub fn key_rate(params: &ProtocolParams, p_success: f64) -> Result<KeyRateReport> {
    params.validate()?;
    if !(0.0..=1.0).contains(&p_success) {
        return Err(Error::InvalidParameter(format!(
            "p_success must lie in [0,1], got {p_success}"
        )));
    }
    let va = effective_va(params)?;
    let i_ab = mutual_information_at(params, va);
    let holevo = holevo_at(params, va)?;
    let key_rate = (p_success * (params.beta * i_ab - holevo)).max(0.0);
    Ok(KeyRateReport {
        i_ab,
        holevo,
        p_success,
        key_rate,
        effective_va: va,
    })
}

/// One row of a key-rate-versus-distance table.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DistancePoint {
    pub distance_km: f64,
    /// Key rate per requested k, in the order given to `distance_curve`.
    pub rates: Vec<f64>,
}

/// Evaluates key rates over a distance grid for each photon count in
/// `k_values` (0 = Gaussian). Success probabilities come from the
/// postselection model with the template's `t_ps`.
pub fn distance_curve(
    template: &ProtocolParams,
    k_values: &[u32],
    distances: &[f64],
) -> Result<Vec<DistancePoint>> {
    if distances.is_empty() {
        return Err(Error::InvalidInput("empty distance grid".into()));
    }
    template.validate()?;
    let p_of_k: Vec<f64> = k_values
        .iter()
        .map(|&k| -> Result<f64> {
            if k == 0 {
                Ok(1.0)
            } else {
                let ps = PostselectParams::new(template.t_ps, template.va, k)?;
                Ok(crate::postselect::success_probability(&ps))
            }
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(distances.len());
    for &d in distances {
        let mut rates = Vec::with_capacity(k_values.len());
        for (i, &k) in k_values.iter().enumerate() {
            let p = ProtocolParams {
                distance_km: d,
                k,
                ..*template
            };
            rates.push(key_rate(&p, p_of_k[i])?.key_rate);
        }
        out.push(DistancePoint {
            distance_km: d,
            rates,
        });
    }
    Ok(out)
}

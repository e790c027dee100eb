//! Deterministic, seedable sample sources.
//!
//! Every source is a pure function of `(parameters, SeedSpec)`. Streams are
//! backed by ChaCha12, a counter-based generator with 2^64 independent
//! streams per master seed, so per-frame streams can be derived without any
//! shared mutable state and frames can run in parallel with bit-exact
//! reproducibility. Gaussian variates use the ziggurat method, which samples
//! the exact normal law (tails included), not a central-limit approximation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Identifies one reproducible random stream.
///
/// Identical `(master_seed, stream_id)` always yields the identical sequence;
/// distinct `stream_id`s select statistically independent ChaCha streams.
/// Campaign code derives `stream_id` from the frame index (see the harness
/// module for the exact layout).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self {
            master_seed,
            stream_id,
        }
    }

    /// Same master seed, different stream.
    pub fn with_stream(self, stream_id: u64) -> Self {
        Self { stream_id, ..self }
    }

    pub(crate) fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Draws `n` i.i.d. samples from Normal(0, `variance`).
pub fn gaussian_block(n: usize, variance: f64, seed: SeedSpec) -> Result<Vec<f64>> {
    if !variance.is_finite() || variance <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gaussian variance must be finite and positive, got {variance}"
        )));
    }
    let sd = variance.sqrt();
    let mut rng = seed.rng();
    Ok((0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            z * sd
        })
        .collect())
}

/// Draws `n` i.i.d. samples uniform on [0, 1).
pub fn uniform_block(n: usize, seed: SeedSpec) -> Vec<f64> {
    let mut rng = seed.rng();
    (0..n).map(|_| rng.random::<f64>()).collect()
}

/// Draws `n` i.i.d. fair bits (0 or 1).
pub fn bit_block(n: usize, seed: SeedSpec) -> Vec<u8> {
    let mut rng = seed.rng();
    (0..n).map(|_| rng.random::<bool>() as u8).collect()
}

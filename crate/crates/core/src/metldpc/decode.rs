//! Syndrome-constrained sum-product decoding with flooding and layered
//! schedules.
//!
//! Both decoders run the exact tanh-product check update; the sign product
//! of check `j` is multiplied by `(1 - 2 s_j)` so the decoder converges to a
//! word whose syndrome equals `s` rather than zero. Check-to-variable
//! magnitudes are clamped to +-38 in the LLR domain. The layered (serial-C)
//! schedule walks the precomputed conflict-free row layers and feeds updated
//! posteriors to later layers inside the same iteration; one iteration is
//! one full pass over all layers, and the convergence test (hard decision,
//! then syndrome comparison) is identical for both schedules.

use crate::error::{Error, Result};

use super::matrix::SparseParityMatrix;

/// Message-passing schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Schedule {
    Flooding,
    Layered,
}

impl std::fmt::Display for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Schedule::Flooding => write!(f, "bp"),
            Schedule::Layered => write!(f, "lbp"),
        }
    }
}

/// Outcome of one decoding attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub converged: bool,
    /// Completed full iterations at the moment the syndrome check first
    /// passed; `max_iter` when it never did.
    pub iterations: u32,
    pub decoded_bits: Vec<u8>,
    pub residual_syndrome_weight: usize,
    pub schedule: Schedule,
}

const LLR_CLAMP: f64 = 38.0;

fn validate(h: &SparseParityMatrix, llrs: &[f64], syndrome: &[u8], max_iter: u32) -> Result<()> {
    if llrs.len() != h.n() {
        return Err(Error::InvalidInput(format!(
            "LLR length {} does not match code length {}",
            llrs.len(),
            h.n()
        )));
    }
    if syndrome.len() != h.m() {
        return Err(Error::InvalidInput(format!(
            "syndrome length {} does not match check count {}",
            syndrome.len(),
            h.m()
        )));
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }
    Ok(())
}

#[inline]
fn syndrome_matches(h: &SparseParityMatrix, bits: &[u8], syndrome: &[u8]) -> bool {
    let row_ptr = h.row_ptr();
    let col_idx = h.col_idx();
    for r in 0..h.m() {
        let mut acc = 0u8;
        for e in row_ptr[r] as usize..row_ptr[r + 1] as usize {
            acc ^= bits[col_idx[e] as usize];
        }
        if acc != syndrome[r] {
            return false;
        }
    }
    true
}

fn residual_weight(h: &SparseParityMatrix, bits: &[u8], syndrome: &[u8]) -> usize {
    let s = h.syndrome(bits).expect("length checked");
    s.iter()
        .zip(syndrome)
        .filter(|(a, b)| a != b)
        .count()
}

/// Check update for one row: reads incoming messages from `msgs`, writes the
/// outgoing messages to `out`. `sign` is +1.0 or -1.0 from the syndrome bit.
#[inline]
fn check_update_row(msgs: &[f64], out: &mut [f64], tanh_buf: &mut [f64], sign: f64) {
    let deg = msgs.len();
    if deg == 1 {
        // A degree-1 check pins its variable to the syndrome parity.
        out[0] = sign * LLR_CLAMP;
        return;
    }
    for (t, &m) in tanh_buf[..deg].iter_mut().zip(msgs.iter()) {
        *t = (0.5 * m).tanh();
    }
    // Prefix pass.
    let mut acc = sign;
    for j in 0..deg {
        let t = tanh_buf[j];
        out[j] = acc;
        acc *= t;
    }
    // Suffix pass.
    let mut acc = 1.0;
    for j in (0..deg).rev() {
        let t = tanh_buf[j];
        let prod = (out[j] * acc).clamp(-1.0, 1.0);
        out[j] = (2.0 * prod.atanh()).clamp(-LLR_CLAMP, LLR_CLAMP);
        acc *= t;
    }
}

/// Flooding-schedule sum-product decoding constrained to syndrome `s`.
pub fn decode_bp(
    h: &SparseParityMatrix,
    llrs: &[f64],
    syndrome: &[u8],
    max_iter: u32,
) -> Result<DecodeResult> {
    validate(h, llrs, syndrome, max_iter)?;
    let n = h.n();
    let m = h.m();
    let ne = h.edge_count();
    let row_ptr = h.row_ptr();
    let col_ptr = h.col_ptr();
    let col_edge = h.col_edge();

    let channel: Vec<f64> = llrs.iter().map(|l| l.clamp(-LLR_CLAMP, LLR_CLAMP)).collect();
    // v2c messages live in row-major edge order.
    let mut v2c = vec![0.0f64; ne];
    for v in 0..n {
        for s in col_ptr[v] as usize..col_ptr[v + 1] as usize {
            v2c[col_edge[s] as usize] = channel[v];
        }
    }
    let mut c2v = vec![0.0f64; ne];
    let mut bits = vec![0u8; n];
    let mut tanh_buf = vec![0.0f64; h.max_row_degree()];

    for it in 1..=max_iter {
        // Check pass: c2v messages from current v2c.
        for r in 0..m {
            let lo = row_ptr[r] as usize;
            let hi = row_ptr[r + 1] as usize;
            let sign = if syndrome[r] == 1 { -1.0 } else { 1.0 };
            check_update_row(&v2c[lo..hi], &mut c2v[lo..hi], &mut tanh_buf, sign);
        }
        // Variable pass: posteriors and fresh v2c.
        for v in 0..n {
            let lo = col_ptr[v] as usize;
            let hi = col_ptr[v + 1] as usize;
            let mut total = channel[v];
            for s in lo..hi {
                total += c2v[col_edge[s] as usize];
            }
            bits[v] = u8::from(total < 0.0);
            for s in lo..hi {
                let e = col_edge[s] as usize;
                v2c[e] = total - c2v[e];
            }
        }
        if syndrome_matches(h, &bits, syndrome) {
            return Ok(DecodeResult {
                converged: true,
                iterations: it,
                decoded_bits: bits,
                residual_syndrome_weight: 0,
                schedule: Schedule::Flooding,
            });
        }
    }
    let residual = residual_weight(h, &bits, syndrome);
    Ok(DecodeResult {
        converged: false,
        iterations: max_iter,
        decoded_bits: bits,
        residual_syndrome_weight: residual,
        schedule: Schedule::Flooding,
    })
}

/// Layered (serial-C) sum-product decoding constrained to syndrome `s`.
pub fn decode_lbp(
    h: &SparseParityMatrix,
    llrs: &[f64],
    syndrome: &[u8],
    max_iter: u32,
) -> Result<DecodeResult> {
    validate(h, llrs, syndrome, max_iter)?;
    let n = h.n();
    let ne = h.edge_count();
    let row_ptr = h.row_ptr();
    let col_idx = h.col_idx();

    let mut q: Vec<f64> = llrs.iter().map(|l| l.clamp(-LLR_CLAMP, LLR_CLAMP)).collect();
    let mut r_msg = vec![0.0f64; ne];
    let mut bits = vec![0u8; n];
    let mut msg_buf = vec![0.0f64; h.max_row_degree()];
    let mut out_buf = vec![0.0f64; h.max_row_degree()];
    let mut tanh_buf = vec![0.0f64; h.max_row_degree()];

    for it in 1..=max_iter {
        for layer in h.layers() {
            for &r in layer {
                let r = r as usize;
                let lo = row_ptr[r] as usize;
                let hi = row_ptr[r + 1] as usize;
                let deg = hi - lo;
                let sign = if syndrome[r] == 1 { -1.0 } else { 1.0 };
                for (j, e) in (lo..hi).enumerate() {
                    msg_buf[j] = q[col_idx[e] as usize] - r_msg[e];
                }
                check_update_row(&msg_buf[..deg], &mut out_buf[..deg], &mut tanh_buf, sign);
                for (j, e) in (lo..hi).enumerate() {
                    r_msg[e] = out_buf[j];
                    q[col_idx[e] as usize] = msg_buf[j] + out_buf[j];
                }
            }
        }
        for v in 0..n {
            bits[v] = u8::from(q[v] < 0.0);
        }
        if syndrome_matches(h, &bits, syndrome) {
            return Ok(DecodeResult {
                converged: true,
                iterations: it,
                decoded_bits: bits,
                residual_syndrome_weight: 0,
                schedule: Schedule::Layered,
            });
        }
    }
    let residual = residual_weight(h, &bits, syndrome);
    Ok(DecodeResult {
        converged: false,
        iterations: max_iter,
        decoded_bits: bits,
        residual_syndrome_weight: residual,
        schedule: Schedule::Layered,
    })
}

//! Multidimensional reconciliation.
//!
//! A block of d normalized Gaussian samples (d = 1, 2, 4, 8) is rotated onto
//! a uniform sign vector through an orthogonal map built from the real,
//! complex, quaternion, or octonion multiplication. For unit `a` the left
//! multiplication `v -> a * v` is an isometry of R^d, and the map taking
//! Bob's unit vector `y'` to his sign vector `u` is multiplication by
//! `alpha = u * conj(y')`: by two-generator associativity
//! `(u conj(y')) y' = u |y'|^2 = u`. The d coefficients of `alpha` are
//! exactly the coordinates of the map in the orthonormal
//! multiplication-operator basis, so `|alpha| = 1` iff the map is orthogonal.
//!
//! Sign convention, fixed globally: bit 0 maps to `+1/sqrt(d)`, bit 1 to
//! `-1/sqrt(d)`; a positive log-likelihood ratio favors bit 0.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Dimensions carrying a normed division algebra.
pub const SUPPORTED_DIMS: [usize; 4] = [1, 2, 4, 8];

/// Blocks with norm below this are rejected as degenerate.
pub const NORM_FLOOR: f64 = 1e-9;

/// Coefficients of one orthogonal mapping in the multiplication-operator
/// basis; equivalently the algebra element whose left multiplication is the
/// map.
#[derive(Debug, Clone, PartialEq)]
pub struct MappingCoeffs {
    pub dim: usize,
    pub alpha: Vec<f64>,
}

/// Per-block side information Bob discloses to Alice.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSideInfo {
    pub coeffs: MappingCoeffs,
    pub y_norm: f64,
}

/// Cayley-Dickson product for vectors of length 1, 2, 4, or 8.
///
/// Doubling rule: (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)).
pub fn algebra_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    if n == 1 {
        return vec![a[0] * b[0]];
    }
    let h = n / 2;
    let (a1, a2) = a.split_at(h);
    let (b1, b2) = b.split_at(h);
    let t1 = algebra_mul(a1, b1);
    let t2 = algebra_mul(&conj_slice(b2), a2);
    let t3 = algebra_mul(b2, a1);
    let t4 = algebra_mul(a2, &conj_slice(b1));
    let mut out = Vec::with_capacity(n);
    for i in 0..h {
        out.push(t1[i] - t2[i]);
    }
    for i in 0..h {
        out.push(t3[i] + t4[i]);
    }
    out
}

/// Conjugation: negate every component except the real part.
pub fn algebra_conj(a: &[f64]) -> Vec<f64> {
    let mut out = conj_slice(a);
    out[0] = a[0];
    out
}

fn conj_slice(a: &[f64]) -> Vec<f64> {
    // Full negation; algebra_conj restores the real part.
    let mut out: Vec<f64> = a.iter().map(|v| -v).collect();
    if !out.is_empty() {
        out[0] = a[0];
    }
    out
}

fn check_dim(d: usize) -> Result<()> {
    if SUPPORTED_DIMS.contains(&d) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "dimension must be one of {SUPPORTED_DIMS:?}, got {d}"
        )))
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_unit(v: &[f64], what: &str) -> Result<()> {
    let n = norm(v);
    if (n - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidInput(format!(
            "{what} must be a unit vector, norm is {n}"
        )));
    }
    Ok(())
}

/// Splits a block into its direction and norm.
pub fn normalize(block: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = norm(block);
    if n < NORM_FLOOR {
        return Err(Error::DegenerateBlock(n));
    }
    Ok((block.iter().map(|x| x / n).collect(), n))
}

/// Builds the orthogonal map with `M y' = u` for unit vectors `y'`, `u`.
pub fn build_mapping(y_unit: &[f64], u: &[f64]) -> Result<MappingCoeffs> {
    let d = y_unit.len();
    check_dim(d)?;
    if u.len() != d {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: y' has {d}, u has {}",
            u.len()
        )));
    }
    check_unit(y_unit, "y'")?;
    check_unit(u, "u")?;
    let alpha = algebra_mul(u, &algebra_conj(y_unit));
    Ok(MappingCoeffs { dim: d, alpha })
}

/// Applies the map to another unit vector: `v = M x' = alpha * x'`.
pub fn apply_mapping(coeffs: &MappingCoeffs, x_unit: &[f64]) -> Result<Vec<f64>> {
    if x_unit.len() != coeffs.dim {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: mapping has {}, input has {}",
            coeffs.dim,
            x_unit.len()
        )));
    }
    Ok(algebra_mul(&coeffs.alpha, x_unit))
}

/// Dense matrix of the mapping (column j is `alpha * e_j`). Test and
/// verification aid; the hot path never assembles it.
pub fn mapping_matrix(coeffs: &MappingCoeffs) -> Vec<Vec<f64>> {
    let d = coeffs.dim;
    let mut cols = Vec::with_capacity(d);
    for j in 0..d {
        let mut e = vec![0.0; d];
        e[j] = 1.0;
        cols.push(algebra_mul(&coeffs.alpha, &e));
    }
    // Return row-major.
    (0..d)
        .map(|i| (0..d).map(|j| cols[j][i]).collect())
        .collect()
}

/// Sign vector for a slice of key bits: bit 0 -> +1/sqrt(d), bit 1 -> -1/sqrt(d).
pub fn bits_to_signs(bits: &[u8]) -> Vec<f64> {
    let scale = 1.0 / (bits.len() as f64).sqrt();
    bits.iter()
        .map(|&b| if b == 0 { scale } else { -scale })
        .collect()
}

/// Per-bit log-likelihood ratios of the virtual binary-input channel.
///
/// From `y = x + z`: `|y| u = |x| v + M z` with `M z` isotropic
/// Normal(0, sigma^2 I), so given `u_i = +-1/sqrt(d)` the observation `v_i`
/// is Normal(+-|y|/(sqrt(d)|x|), sigma^2/|x|^2) and
/// `llr_i = 2 |x| |y| v_i / (sqrt(d) sigma^2)`.
pub fn compute_llrs(v: &[f64], x_norm: f64, y_norm: f64, sigma2: f64) -> Result<Vec<f64>> {
    if !(sigma2.is_finite() && sigma2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sigma^2 must be positive, got {sigma2}"
        )));
    }
    if !(x_norm > 0.0 && y_norm > 0.0) {
        return Err(Error::InvalidParameter(
            "norms must be positive".into(),
        ));
    }
    let d = v.len() as f64;
    let scale = 2.0 * x_norm * y_norm / (d.sqrt() * sigma2);
    Ok(v.iter().map(|&vi| scale * vi).collect())
}

/// Serializes side-information records: u32 dim, dim f64 coefficients, f64
/// y_norm, all little-endian; a frame is the concatenation of its blocks.
pub fn write_side_info(w: &mut impl Write, blocks: &[BlockSideInfo]) -> std::io::Result<()> {
    for b in blocks {
        w.write_all(&(b.coeffs.dim as u32).to_le_bytes())?;
        for &a in &b.coeffs.alpha {
            w.write_all(&a.to_le_bytes())?;
        }
        w.write_all(&b.y_norm.to_le_bytes())?;
    }
    Ok(())
}

/// Reads side-information records until EOF.
pub fn read_side_info(r: &mut impl Read) -> Result<Vec<BlockSideInfo>> {
    let mut out = Vec::new();
    let mut dim_buf = [0u8; 4];
    loop {
        match r.read_exact(&mut dim_buf) {
            Ok(()) => {}
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e.into()),
        }
        let d = u32::from_le_bytes(dim_buf) as usize;
        check_dim(d).map_err(|_| {
            Error::InvalidInput(format!("side-info record with unsupported dimension {d}"))
        })?;
        let mut f = [0u8; 8];
        let mut alpha = Vec::with_capacity(d);
        for _ in 0..d {
            r.read_exact(&mut f)?;
            alpha.push(f64::from_le_bytes(f));
        }
        r.read_exact(&mut f)?;
        let y_norm = f64::from_le_bytes(f);
        out.push(BlockSideInfo {
            coeffs: MappingCoeffs { dim: d, alpha },
            y_norm,
        });
    }
    Ok(out)
}

//! Monte-Carlo evaluation of the two-stream beam-space link over a
//! Kronecker flat-fading channel with two receive antennas.
//!
//! Transmit SNR is total transmit power over noise power per receive branch,
//! split equally between the two streams before the `R_T` weighting. Noise is
//! unit-variance circularly symmetric complex Gaussian.

mod curves;

pub use curves::{capacity_curves, CapacityResult, CapacityRow, ChannelConfig, DEFAULT_MC_TOL, SNR_DEFINITION};

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Diagonal transmit covariance `p_in diag(p_b1, p_b2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmitCovariance {
    pub p_b1: f64,
    pub p_b2: f64,
    pub p_in: f64,
}

impl TransmitCovariance {
    pub fn new(p_b1: f64, p_b2: f64, p_in: f64) -> Result<Self> {
        for (name, v) in [("p_b1", p_b1), ("p_b2", p_b2), ("p_in", p_in)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        Ok(TransmitCovariance { p_b1, p_b2, p_in })
    }

    pub fn identity() -> Self {
        TransmitCovariance {
            p_b1: 1.0,
            p_b2: 1.0,
            p_in: 1.0,
        }
    }

    /// Diagonal of `R_T^{1/2}`.
    pub fn sqrt_diag(&self) -> [f64; 2] {
        [(self.p_in * self.p_b1).sqrt(), (self.p_in * self.p_b2).sqrt()]
    }
}

/// One `CN(0, 1)` sample.
pub fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

/// 2x2 matrix with i.i.d. `CN(0, 1)` entries.
pub fn iid_matrix(rng: &mut impl Rng) -> Matrix2<Complex64> {
    Matrix2::from_fn(|_, _| complex_normal(rng))
}

/// Scales the columns of `h_w` by `R_T^{1/2}`.
pub fn apply_covariance(h_w: &Matrix2<Complex64>, r_t: &TransmitCovariance) -> Matrix2<Complex64> {
    let d = r_t.sqrt_diag();
    Matrix2::from_fn(|i, j| h_w[(i, j)] * d[j])
}

/// `H_w R_T^{1/2}` with a fresh `H_w`.
pub fn kronecker_realization(r_t: &TransmitCovariance, rng: &mut impl Rng) -> Matrix2<Complex64> {
    apply_covariance(&iid_matrix(rng), r_t)
}

/// `log2 det(I + (snr/2) H H^H)` in bits.
pub fn gaussian_capacity(h: &Matrix2<Complex64>, snr_linear: f64) -> f64 {
    let a = snr_linear / 2.0;
    let frob: f64 = h.iter().map(|z| z.norm_sqr()).sum();
    let det = (h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)]).norm_sqr();
    (1.0 + a * frob + a * a * det).log2()
}

/// Unit-energy Gray-mapped QPSK points.
pub(crate) fn qpsk_points() -> [Complex64; 4] {
    let s = FRAC_1_SQRT_2;
    [
        Complex64::new(-s, -s),
        Complex64::new(-s, s),
        Complex64::new(s, -s),
        Complex64::new(s, s),
    ]
}

/// The sixteen transmit vectors `(x1, x2)`.
pub(crate) fn qpsk_pairs() -> [Vector2<Complex64>; 16] {
    let p = qpsk_points();
    std::array::from_fn(|i| Vector2::new(p[i >> 2], p[i & 3]))
}

/// One transmitted pair index with its receiver noise.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SymbolDraw {
    pub index: usize,
    pub noise: Vector2<Complex64>,
}

pub(crate) fn draw_symbols(rng: &mut impl Rng, n: usize) -> Vec<SymbolDraw> {
    (0..n)
        .map(|_| SymbolDraw {
            index: rng.random_range(0..16),
            noise: Vector2::new(complex_normal(rng), complex_normal(rng)),
        })
        .collect()
}

/// Discrete-input estimator
/// `log2 K - mean log2 sum_k exp(-(|y - a c_k|^2 - |n|^2))` over received
/// points `y = a c_x + n`, with `a = sqrt(amp2)` and unit noise variance.
/// `dims` selects how many receive branches are used.
pub(crate) fn mi_estimate(codebook: &[Vector2<Complex64>], draws: &[SymbolDraw], amp2: f64, dims: usize) -> f64 {
    let a = amp2.sqrt();
    let k = codebook.len();
    let mut acc = 0.0;
    for d in draws {
        let tx = codebook[d.index % k];
        let n = d.noise;
        let n_sq: f64 = (0..dims).map(|r| n[r].norm_sqr()).sum();
        let s: f64 = codebook
            .iter()
            .map(|c| {
                let dist: f64 = (0..dims).map(|r| (n[r] + a * (tx[r] - c[r])).norm_sqr()).sum();
                (n_sq - dist).exp()
            })
            .sum();
        acc += s.log2();
    }
    (k as f64).log2() - acc / draws.len() as f64
}

/// Estimated mutual information in bits for two uniform QPSK streams
/// received as `y = sqrt(snr/2) H x + n`.
pub fn qpsk_mutual_information(h: &Matrix2<Complex64>, snr_linear: f64, n_symbols: usize, rng: &mut impl Rng) -> f64 {
    if n_symbols == 0 || snr_linear <= 0.0 {
        return 0.0;
    }
    let codebook: Vec<Vector2<Complex64>> = qpsk_pairs().iter().map(|x| h * x).collect();
    let draws = draw_symbols(rng, n_symbols);
    mi_estimate(&codebook, &draws, snr_linear / 2.0, 2).max(0.0)
}

/// Independent generator for `(purpose, index)` under a master seed.
pub fn stream_rng(seed: u64, purpose: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&purpose.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_covariance_gives_zero_channel() {
        let mut rng = stream_rng(1, 0, 0);
        let h = kronecker_realization(&TransmitCovariance::new(0.0, 0.0, 1.0).unwrap(), &mut rng);
        assert!(h.iter().all(|z| *z == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn identity_channel_capacity() {
        let h = Matrix2::identity();
        assert_eq!(gaussian_capacity(&h, 0.0), 0.0);
        assert!((gaussian_capacity(&h, 2.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_negative_power() {
        assert!(TransmitCovariance::new(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = stream_rng(9, 1, 3).random();
        let b: f64 = stream_rng(9, 1, 3).random();
        let c: f64 = stream_rng(9, 1, 4).random();
        let d: f64 = stream_rng(9, 2, 3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn mi_saturates_at_high_snr() {
        let mut rng = stream_rng(3, 0, 0);
        let mi = qpsk_mutual_information(&Matrix2::identity(), 1e4, 2000, &mut rng);
        assert!((mi - 4.0).abs() < 0.01, "{mi}");
        assert_eq!(qpsk_mutual_information(&Matrix2::identity(), 0.0, 10, &mut rng), 0.0);
    }
}

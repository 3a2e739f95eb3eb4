use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    apply_covariance, draw_symbols, gaussian_capacity, iid_matrix, mi_estimate, qpsk_pairs, qpsk_points, stream_rng,
    TransmitCovariance,
};
use crate::error::{Error, Result};
use crate::symmetric3::BasisPowerReport;

/// Monte-Carlo tolerance in bits at 2000 realizations x 1000 symbols.
pub const DEFAULT_MC_TOL: f64 = 0.05;

pub const SNR_DEFINITION: &str =
    "total transmit power over unit noise power per receive branch, split equally between the two streams";

const ESTIMATOR: &str = "discrete-input Gaussian-noise Monte-Carlo estimator, perfect CSI";

const CHANNEL_STREAM: u64 = 1;
const SYMBOL_STREAM: u64 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub snr_grid_db: Vec<f64>,
    pub n_realizations: usize,
    pub n_symbols: usize,
    pub seed: u64,
    /// Total efficiency applied as a transmit power scale, in `(0, 1]`.
    pub efficiency: f64,
    pub p_in: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            snr_grid_db: (0..=10).map(|k| -10.0 + 5.0 * k as f64).collect(),
            n_realizations: 2000,
            n_symbols: 1000,
            seed: 0,
            efficiency: 1.0,
            p_in: 1.0,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.snr_grid_db.is_empty() {
            return Err(Error::InvalidInput("SNR grid is empty".into()));
        }
        if let Some(s) = self.snr_grid_db.iter().find(|s| !s.is_finite()) {
            return Err(Error::InvalidInput(format!("SNR grid contains {s}")));
        }
        if self.n_realizations == 0 || self.n_symbols == 0 {
            return Err(Error::InvalidInput("realization and symbol counts must be at least 1".into()));
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "efficiency must lie in (0, 1], got {}",
                self.efficiency
            )));
        }
        if !(self.p_in.is_finite() && self.p_in > 0.0) {
            return Err(Error::InvalidInput(format!("input power must be positive, got {}", self.p_in)));
        }
        Ok(())
    }
}

/// Averages at one SNR point, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityRow {
    pub snr_db: f64,
    pub gaussian_capacity: f64,
    pub qpsk_mi: f64,
    /// Two streams through an i.i.d. channel with identity transmit covariance.
    pub iid_gaussian_capacity: f64,
    pub iid_qpsk_mi: f64,
    /// One stream at the full transmit SNR scaled by the efficiency.
    pub siso_capacity: f64,
    pub siso_qpsk_mi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityResult {
    pub rows: Vec<CapacityRow>,
    pub config: ChannelConfig,
    pub p_b1: f64,
    pub p_b2: f64,
    pub snr_definition: &'static str,
    pub estimator: &'static str,
}

const COLUMNS: usize = 6;

/// Ergodic capacity and QPSK mutual information over `cfg.n_realizations`
/// Kronecker draws with `R_T = efficiency p_in diag(p_b1, p_b2)`.
///
/// Every SNR point and every reference reuses the same channel and noise
/// draws, so differences between columns carry no sampling noise of their own.
pub fn capacity_curves(b: &BasisPowerReport, cfg: &ChannelConfig) -> Result<CapacityResult> {
    cfg.validate()?;
    let r_t = TransmitCovariance::new(b.p_b1, b.p_b2, cfg.efficiency * cfg.p_in)?;
    let snr: Vec<f64> = cfg.snr_grid_db.iter().map(|db| 10f64.powf(db / 10.0)).collect();

    let per_realization: Vec<Vec<[f64; COLUMNS]>> = (0..cfg.n_realizations as u64)
        .into_par_iter()
        .map(|r| realization(cfg, &r_t, &snr, r))
        .collect();

    let n = cfg.n_realizations as f64;
    let rows = cfg
        .snr_grid_db
        .iter()
        .enumerate()
        .map(|(k, &snr_db)| {
            let mut sum = [0.0; COLUMNS];
            for real in &per_realization {
                for (s, v) in sum.iter_mut().zip(real[k]) {
                    *s += v;
                }
            }
            let m = sum.map(|s| (s / n).max(0.0));
            CapacityRow {
                snr_db,
                gaussian_capacity: m[0],
                qpsk_mi: m[1],
                iid_gaussian_capacity: m[2],
                iid_qpsk_mi: m[3],
                siso_capacity: m[4],
                siso_qpsk_mi: m[5],
            }
        })
        .collect();
    Ok(CapacityResult {
        rows,
        config: cfg.clone(),
        p_b1: b.p_b1,
        p_b2: b.p_b2,
        snr_definition: SNR_DEFINITION,
        estimator: ESTIMATOR,
    })
}

fn realization(cfg: &ChannelConfig, r_t: &TransmitCovariance, snr: &[f64], r: u64) -> Vec<[f64; COLUMNS]> {
    let h_w = iid_matrix(&mut stream_rng(cfg.seed, CHANNEL_STREAM, r));
    let draws = draw_symbols(&mut stream_rng(cfg.seed, SYMBOL_STREAM, r), cfg.n_symbols);

    let h_beam = apply_covariance(&h_w, r_t);
    let h_iid = apply_covariance(&h_w, &TransmitCovariance::new(1.0, 1.0, cfg.p_in).expect("positive p_in"));
    let h_siso = h_w[(0, 0)] * (cfg.efficiency * cfg.p_in).sqrt();

    let pairs = qpsk_pairs();
    let codebook = |h: &Matrix2<Complex64>| -> Vec<Vector2<Complex64>> { pairs.iter().map(|x| h * x).collect() };
    let beam_book = codebook(&h_beam);
    let iid_book = codebook(&h_iid);
    let siso_book: Vec<Vector2<Complex64>> = qpsk_points()
        .iter()
        .map(|p| Vector2::new(h_siso * p, Complex64::new(0.0, 0.0)))
        .collect();

    snr.iter()
        .map(|&g| {
            [
                gaussian_capacity(&h_beam, g),
                mi_estimate(&beam_book, &draws, g / 2.0, 2),
                gaussian_capacity(&h_iid, g),
                mi_estimate(&iid_book, &draws, g / 2.0, 2),
                (1.0 + g * h_siso.norm_sqr()).log2(),
                mi_estimate(&siso_book, &draws, g, 1),
            ]
        })
        .collect()
}

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Ratio `s2 / s1` of the two transmitted symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolRatio {
    pub value: Complex64,
    pub unit: bool,
}

impl SymbolRatio {
    pub fn new(value: Complex64) -> Self {
        SymbolRatio {
            value,
            unit: (value.norm() - 1.0).abs() <= 1e-12,
        }
    }

    /// Phase in `[0, 2 pi)` rounded to 12 decimals, as an exact lookup key.
    pub fn key(&self) -> i64 {
        canonical_phase_key(self.value)
    }
}

const KEY_SCALE: f64 = 1e12;

fn canonical_phase_key(z: Complex64) -> i64 {
    let full = (KEY_SCALE * TAU).round() as i64;
    let phase = z.arg().rem_euclid(TAU);
    let key = (phase * KEY_SCALE).round() as i64;
    if key >= full {
        key - full
    } else {
        key
    }
}

/// Gray-coded M-PSK constellation.
///
/// The symbol at Gray position `k` has phase `-pi + pi/M - 2 pi k / M`, which
/// for QPSK gives `00 -> e^{-j3pi/4}`, `01 -> e^{j3pi/4}`, `11 -> e^{jpi/4}`,
/// `10 -> e^{-jpi/4}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PskConstellation {
    m: usize,
    bits_per_symbol: usize,
    /// Indexed by the integer value of the bit label.
    symbols: Vec<Complex64>,
    /// Gray position of each bit label.
    position: Vec<usize>,
    /// Ratio index (ratio `e^{j 2 pi i / M}`) for each state, in state order.
    state_ratios: Vec<usize>,
}

/// Result of mapping one bit vector onto the two streams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolMapping {
    pub x1: Complex64,
    pub x2: Complex64,
    pub s_r: Complex64,
    pub state: usize,
}

impl PskConstellation {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "modulation order must be a power of two >= 2, got {m}"
            )));
        }
        let bits_per_symbol = m.trailing_zeros() as usize;
        let mut symbols = vec![Complex64::new(0.0, 0.0); m];
        let mut position = vec![0; m];
        for k in 0..m {
            let label = k ^ (k >> 1);
            let phase = -PI + PI / m as f64 - TAU * k as f64 / m as f64;
            symbols[label] = Complex64::from_polar(1.0, phase);
            position[label] = k;
        }
        let state_ratios = if m == 4 {
            // -1, +1, +j, -j
            vec![2, 0, 1, 3]
        } else {
            (0..m).collect()
        };
        Ok(PskConstellation {
            m,
            bits_per_symbol,
            symbols,
            position,
            state_ratios,
        })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Symbols indexed by bit label.
    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    /// `e^{j 2 pi i / M}`, exact at multiples of a quarter turn and an exact
    /// negation of ratio `i - M/2` in the upper half.
    pub fn ratio_value(&self, index: usize) -> Complex64 {
        let m = self.m;
        let index = index % m;
        if index >= m / 2 && m >= 2 {
            return -self.ratio_value(index - m / 2);
        }
        if (4 * index).is_multiple_of(m) {
            return match 4 * index / m {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        Complex64::from_polar(1.0, TAU * index as f64 / m as f64)
    }

    /// The `M` distinct symbol ratios, in state order (state `k` at index `k - 1`).
    pub fn ratios(&self) -> Vec<SymbolRatio> {
        self.state_ratios
            .iter()
            .map(|&i| SymbolRatio::new(self.ratio_value(i)))
            .collect()
    }

    /// 1-based state label of a ratio, if it belongs to the ratio set.
    pub fn state_of(&self, s_r: Complex64) -> Option<usize> {
        let key = canonical_phase_key(s_r);
        self.ratios().iter().position(|r| r.key() == key).map(|p| p + 1)
    }

    fn state_of_index(&self, ratio_index: usize) -> usize {
        self.state_ratios
            .iter()
            .position(|&i| i == ratio_index)
            .expect("ratio index within constellation")
            + 1
    }

    /// Maps `2 log2(M)` bits (MSB first, values 0/1) onto `(x1, x2)`, the
    /// ratio `x2 / x1` and the load state that transmits it.
    pub fn map_symbols(&self, bits: &[u8]) -> Result<SymbolMapping> {
        let n = self.bits_per_symbol;
        if bits.len() != 2 * n {
            return Err(Error::InvalidInput(format!(
                "expected {} bits for two {}-PSK symbols, got {}",
                2 * n,
                self.m,
                bits.len()
            )));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidInput("bits must be 0 or 1".into()));
        }
        let label = |chunk: &[u8]| chunk.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        let (l1, l2) = (label(&bits[..n]), label(&bits[n..]));
        let ratio_index = (self.position[l1] + self.m - self.position[l2]) % self.m;
        Ok(SymbolMapping {
            x1: self.symbols[l1],
            x2: self.symbols[l2],
            s_r: self.ratio_value(ratio_index),
            state: self.state_of_index(ratio_index),
        })
    }
}

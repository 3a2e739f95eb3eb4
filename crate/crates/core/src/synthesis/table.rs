use num_complex::Complex64;

use super::{reactive_partner, solve_loads, PskConstellation, ReactivePair, SymbolRatio};
use crate::error::{Error, Result};
use crate::multiport::{impedance_from_gamma, ComplexLoad};
use crate::symmetric3::{basis_from_loads, BasisPair, SymmetricThreePort};

/// Allowed `||gamma| - 1|` for a load to count as reactive.
pub const DEFAULT_REACTIVE_TOL: f64 = 1e-8;

/// Load pair that transmits one symbol ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadEntry {
    pub ratio: SymbolRatio,
    /// 1-based state label.
    pub state: usize,
    pub gamma1: Complex64,
    pub gamma2: Complex64,
    pub load1: ComplexLoad,
    pub load2: ComplexLoad,
}

/// Lookup from symbol ratio to control-port loads.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadTable {
    pub constellation: PskConstellation,
    /// One entry per ratio, in state order.
    pub entries: Vec<LoadEntry>,
    /// Feed reflection coefficient evaluated at the basis state.
    pub gamma_tot: Complex64,
    pub basis: BasisPair,
    pub z0: f64,
}

impl LoadTable {
    pub fn entry_for_ratio(&self, s_r: Complex64) -> Option<&LoadEntry> {
        let state = self.constellation.state_of(s_r)?;
        self.entries.get(state - 1)
    }

    pub fn entry_for_state(&self, state: usize) -> Option<&LoadEntry> {
        self.entries.iter().find(|e| e.state == state)
    }

    pub fn n_states(&self) -> usize {
        self.entries.len()
    }
}

/// Load table for any basis pair; fails if some state needs a non-reactive load.
pub fn build_table(
    a: &SymmetricThreePort,
    gamma_i: Complex64,
    gamma_ii: Complex64,
    c: &PskConstellation,
    reactive_tol: f64,
) -> Result<LoadTable> {
    let basis = basis_from_loads(a, gamma_i, gamma_ii)?;
    let gamma_tot = a.total_reflection(gamma_i, gamma_ii)?;
    let entries = c
        .ratios()
        .into_iter()
        .enumerate()
        .map(|(i, ratio)| {
            let (gamma1, gamma2) = solve_loads(a, gamma_i, gamma_ii, ratio.value)?;
            let dev = (gamma1.norm() - 1.0).abs().max((gamma2.norm() - 1.0).abs());
            if dev > reactive_tol {
                return Err(Error::NotReactive {
                    ratio: crate::numfmt::fmt_complex(ratio.value),
                    deviation: dev,
                    tol: reactive_tol,
                });
            }
            Ok(LoadEntry {
                ratio,
                state: i + 1,
                gamma1,
                gamma2,
                load1: impedance_from_gamma(gamma1, a.z0()),
                load2: impedance_from_gamma(gamma2, a.z0()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LoadTable {
        constellation: c.clone(),
        entries,
        gamma_tot,
        basis,
        z0: a.z0(),
    })
}

/// Reactive partner of `x_i` and the resulting PSK load table.
pub fn synthesize_psk_table(a: &SymmetricThreePort, x_i: f64, c: &PskConstellation) -> Result<(ReactivePair, LoadTable)> {
    synthesize_psk_table_with(a, x_i, c, DEFAULT_REACTIVE_TOL)
}

pub fn synthesize_psk_table_with(
    a: &SymmetricThreePort,
    x_i: f64,
    c: &PskConstellation,
    reactive_tol: f64,
) -> Result<(ReactivePair, LoadTable)> {
    let pair = reactive_partner(a, x_i)?;
    let table = build_table(a, pair.gamma_i, pair.gamma_ii, c, reactive_tol)?;
    Ok((pair, table))
}

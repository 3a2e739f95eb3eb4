use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LoadTable;
use crate::error::{Error, Result};
use crate::symmetric3::{BasisPair, SymmetricThreePort};

/// Largest acceptable pattern mismatch per state.
pub const DEFAULT_MULTIPLEX_TOL: f64 = 1e-9;

/// Worst pattern mismatch observed for one table state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateResidual {
    pub state: usize,
    pub ratio: Complex64,
    pub max_residual: f64,
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplexingReport {
    pub samples: usize,
    pub max_residual: f64,
    pub per_state: Vec<StateResidual>,
    /// States whose residual exceeds `tol`.
    pub flagged: Vec<usize>,
    pub tol: f64,
}

impl MultiplexingReport {
    pub fn passed(&self) -> bool {
        self.flagged.is_empty()
    }
}

/// Draws random symbol pairs, looks up the loads for their ratio and compares
/// the resulting pattern weights with `x1 (v_B1 + s_r v_B2)`.
pub fn verify_multiplexing(
    a: &SymmetricThreePort,
    b: &BasisPair,
    t: &LoadTable,
    samples: usize,
    seed: u64,
) -> Result<MultiplexingReport> {
    verify_multiplexing_with(a, b, t, samples, seed, DEFAULT_MULTIPLEX_TOL)
}

pub fn verify_multiplexing_with(
    a: &SymmetricThreePort,
    b: &BasisPair,
    t: &LoadTable,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<MultiplexingReport> {
    if samples == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let symbols = t.constellation.symbols();
    let mut per_state: Vec<StateResidual> = t
        .entries
        .iter()
        .map(|e| StateResidual {
            state: e.state,
            ratio: e.ratio.value,
            max_residual: 0.0,
            hits: 0,
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x1 = symbols[rng.random_range(0..symbols.len())];
        let x2 = symbols[rng.random_range(0..symbols.len())];
        let s_r = x2 / x1;
        let slot = t
            .constellation
            .state_of(s_r)
            .and_then(|state| t.entries.iter().position(|e| e.state == state))
            .ok_or_else(|| Error::InvalidInput(format!("ratio {s_r} missing from load table")))?;
        let e = &t.entries[slot];
        let (l1, l2) = a.ell_coefficients(e.gamma1, e.gamma2)?;
        let expect1 = x1 * (b.ell_b1 + s_r * b.ell_b2);
        let expect2 = x1 * (b.ell_b1 - s_r * b.ell_b2);
        let got = (x1 * l1 - expect1).norm().max((x1 * l2 - expect2).norm());
        let r = &mut per_state[slot];
        r.max_residual = r.max_residual.max(got);
        r.hits += 1;
    }
    let max_residual = per_state.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let flagged = per_state.iter().filter(|r| r.max_residual > tol).map(|r| r.state).collect();
    Ok(MultiplexingReport {
        samples,
        max_residual,
        per_state,
        flagged,
        tol,
    })
}

/// Feed reflection across the states of a table.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingReport {
    /// `(state, gamma_tot)` per entry.
    pub per_state: Vec<(usize, Complex64)>,
    /// Largest pairwise distance between the per-state values.
    pub max_spread: f64,
    /// Closed form in the scattering parameters, valid for reactive tables.
    pub closed_form: Complex64,
    pub closed_form_deviation: f64,
    pub reactive: bool,
    /// `-20 log10 |gamma_tot|` of the first state.
    pub return_loss_db: f64,
}

pub fn constant_matching(a: &SymmetricThreePort, t: &LoadTable, reactive_tol: f64) -> Result<MatchingReport> {
    if t.entries.is_empty() {
        return Err(Error::InvalidInput("load table is empty".into()));
    }
    let per_state = t
        .entries
        .iter()
        .map(|e| Ok((e.state, a.total_reflection(e.gamma1, e.gamma2)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut max_spread = 0.0f64;
    for (i, (_, p)) in per_state.iter().enumerate() {
        for (_, q) in &per_state[i + 1..] {
            max_spread = max_spread.max((p - q).norm());
        }
    }
    let closed_form = a.reactive_gamma_tot();
    let closed_form_deviation = per_state
        .iter()
        .map(|(_, g)| (g - closed_form).norm())
        .fold(0.0, f64::max);
    let reactive = t.entries.iter().all(|e| {
        (e.gamma1.norm() - 1.0).abs() <= reactive_tol && (e.gamma2.norm() - 1.0).abs() <= reactive_tol
    });
    Ok(MatchingReport {
        return_loss_db: -20.0 * per_state[0].1.norm().log10(),
        per_state,
        max_spread,
        closed_form,
        closed_form_deviation,
        reactive,
    })
}

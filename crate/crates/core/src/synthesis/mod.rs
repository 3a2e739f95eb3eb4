//! Load synthesis for beam-space multiplexing of two PSK streams.
//!
//! The two symbol streams ride on the basis patterns built from the mirrored
//! reactive states `{Z_I, Z_II}` and `{Z_II, Z_I}`. Every symbol ratio
//! `s_r = s2 / s1` maps to one load pair at the control ports.

mod partner;
mod psk;
mod sweep;
mod table;
mod verify;

pub use partner::{pairing_function, reactive_partner, reactive_partner_near, ReactivePair};
pub use psk::{PskConstellation, SymbolMapping, SymbolRatio};
pub use sweep::{sweep_reactances, SweepRow, SweepStateLoads, SweepTable};
pub use table::{
    build_table, synthesize_psk_table, synthesize_psk_table_with, LoadEntry, LoadTable, DEFAULT_REACTIVE_TOL,
};
pub use verify::{
    constant_matching, verify_multiplexing, verify_multiplexing_with, MatchingReport, MultiplexingReport, StateResidual, DEFAULT_MULTIPLEX_TOL,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symmetric3::SymmetricThreePort;

/// Loads `(gamma1, gamma2)` whose instantaneous pattern equals
/// `v_B1 + s_r v_B2` for the basis built from `(gamma_i, gamma_ii)`.
///
/// `s_r = +1` gives `(gamma_ii, gamma_i)` and `s_r = -1` gives `(gamma_i, gamma_ii)`.
pub fn solve_loads(
    a: &SymmetricThreePort,
    gamma_i: Complex64,
    gamma_ii: Complex64,
    s_r: Complex64,
) -> Result<(Complex64, Complex64)> {
    let delta = a.delta();
    let one = Complex64::new(1.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let cross = 2.0 * gamma_i * gamma_ii * delta;
    let solve = |s: Complex64| -> Result<Complex64> {
        let num = gamma_ii * (one + s) + gamma_i * (one - s) - cross;
        let den = two - (gamma_i * (one + s) + gamma_ii * (one - s)) * delta;
        if den.norm() <= a.singular_tol() {
            return Err(Error::Singular {
                magnitude: den.norm(),
                tol: a.singular_tol(),
            });
        }
        Ok(num / den)
    };
    Ok((solve(s_r)?, solve(-s_r)?))
}

/// Residuals `|gamma1| - 1` and `|gamma2| - 1` of the loads for ratio `s_r`.
///
/// Both vanish for every unit-magnitude `s_r` once `(gamma_i, gamma_ii)` is a
/// reactive pair, and they coincide whenever `|s_r| = 1`.
pub fn reactive_residuals(
    a: &SymmetricThreePort,
    gamma_i: Complex64,
    gamma_ii: Complex64,
    s_r: Complex64,
) -> Result<(f64, f64)> {
    let (g1, g2) = solve_loads(a, gamma_i, gamma_ii, s_r)?;
    Ok((g1.norm() - 1.0, g2.norm() - 1.0))
}

/// Residuals of the two phase-domain conditions for `|gamma1| = |gamma2| = 1`
/// given unit-magnitude basis loads at phases `theta_i`, `theta_ii`.
///
/// Each is `q / (+-sin theta_s) * sin((theta_i - theta_ii)/2) - f`, where
/// `q = (1 - |Delta|^2)/(1 + |Delta|^2) * (1 - |s_r|^2)/(2|s_r|)` and `f` is the
/// pairing function. For `|s_r| = 1` (within 1e-12) the first term vanishes
/// and both reduce to `-f`. A real `s_r` off the unit circle gives infinities.
pub fn constraint_residuals(a: &SymmetricThreePort, theta_i: f64, theta_ii: f64, s_r: Complex64) -> (f64, f64) {
    let f = pairing_function(a, theta_i, theta_ii);
    let mag = s_r.norm();
    if (mag - 1.0).abs() <= 1e-12 {
        return (-f, -f);
    }
    let d2 = a.delta().norm_sqr();
    let q = (1.0 - d2) / (1.0 + d2) * (1.0 - mag * mag) / (2.0 * mag);
    let t = q * ((theta_i - theta_ii) / 2.0).sin() / s_r.arg().sin();
    (t - f, -t - f)
}

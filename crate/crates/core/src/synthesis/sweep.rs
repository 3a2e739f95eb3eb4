use num_complex::Complex64;

use super::{build_table, reactive_partner_near, PskConstellation, DEFAULT_REACTIVE_TOL};
use crate::error::{Error, Result};
use crate::symmetric3::{basis_powers_lossless, SymmetricThreePort};

/// Control-port reactances of one state; `None` marks an open circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepStateLoads {
    pub state: usize,
    pub ratio: Complex64,
    pub x1: Option<f64>,
    pub x2: Option<f64>,
}

/// One design point of a reactance sweep. `error` is set when the point failed
/// and the remaining fields are then empty.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x_i: f64,
    pub error: Option<String>,
    pub x_ii: Option<f64>,
    pub x_ii_open: bool,
    pub states: Vec<SweepStateLoads>,
    pub gamma_tot_mag: Option<f64>,
    pub return_loss_db: Option<f64>,
    pub r: Option<f64>,
    pub multiple_roots: bool,
}

impl SweepRow {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }

    fn failed(x_i: f64, e: &Error) -> Self {
        SweepRow {
            x_i,
            error: Some(e.to_string()),
            x_ii: None,
            x_ii_open: false,
            states: Vec::new(),
            gamma_tot_mag: None,
            return_loss_db: None,
            r: None,
            multiple_roots: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub order: usize,
    pub rows: Vec<SweepRow>,
}

/// Synthesizes a reactive design for every `X_I` on the grid. Failures are
/// recorded per row; the root choice follows the previous successful row.
pub fn sweep_reactances(a: &SymmetricThreePort, grid: &[f64], c: &PskConstellation) -> Result<SweepTable> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("reactance grid is empty".into()));
    }
    if let Some(x) = grid.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("reactance grid contains {x}")));
    }
    let mut hint = None;
    let rows = grid
        .iter()
        .map(|&x_i| match sweep_point(a, x_i, c, hint) {
            Ok((row, theta_ii)) => {
                hint = Some(theta_ii);
                row
            }
            Err(e) => SweepRow::failed(x_i, &e),
        })
        .collect();
    Ok(SweepTable { order: c.order(), rows })
}

fn sweep_point(a: &SymmetricThreePort, x_i: f64, c: &PskConstellation, hint: Option<f64>) -> Result<(SweepRow, f64)> {
    let pair = reactive_partner_near(a, x_i, hint)?;
    let table = build_table(a, pair.gamma_i, pair.gamma_ii, c, DEFAULT_REACTIVE_TOL)?;
    let powers = basis_powers_lossless(a, &table.basis)?;
    let mag = table.gamma_tot.norm();
    let states = table
        .entries
        .iter()
        .map(|e| SweepStateLoads {
            state: e.state,
            ratio: e.ratio.value,
            x1: e.load1.reactance(),
            x2: e.load2.reactance(),
        })
        .collect();
    let row = SweepRow {
        x_i,
        error: None,
        x_ii: pair.x_ii(),
        x_ii_open: pair.x_ii().is_none(),
        states,
        gamma_tot_mag: Some(mag),
        return_loss_db: Some(-20.0 * mag.log10()),
        r: Some(powers.r),
        multiple_roots: pair.roots > 1,
    };
    Ok((row, pair.theta_ii))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn failing_point_is_flagged_without_aborting() {
        let a = SymmetricThreePort::from_parts(c(0.0, 0.0), c(0.1, 0.0), c(0.0, 0.5), c(0.0, -0.5), 50.0).unwrap();
        let q = PskConstellation::new(4).unwrap();
        let t = sweep_reactances(&a, &[-100.0, -50.0, 0.0], &q).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.rows[1].x_i, -50.0);
        assert!(t.rows[1].error.as_deref().unwrap().contains("no reactive partner"));
        assert!(t.rows[1].states.is_empty());
    }

    #[test]
    fn empty_or_non_finite_grid_rejected() {
        let a = SymmetricThreePort::from_parts(c(0.2, 0.0), c(0.3, 0.0), c(0.1, 0.1), c(0.0, 0.2), 50.0).unwrap();
        let q = PskConstellation::new(4).unwrap();
        assert!(sweep_reactances(&a, &[], &q).is_err());
        assert!(sweep_reactances(&a, &[1.0, f64::INFINITY], &q).is_err());
    }
}

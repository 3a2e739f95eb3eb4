use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiport::{gamma_from_reactance, impedance_from_gamma, Impedance};
use crate::symmetric3::SymmetricThreePort;

const SCAN_POINTS: usize = 720;
const BISECT_WIDTH: f64 = 1e-13;
const FLAT_TOL: f64 = 1e-12;

/// A reactive basis pair `(X_I, X_II)` whose PSK states are all reactive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactivePair {
    pub x_i: f64,
    /// Partner reactance; open circuit when `gamma_ii == 1`.
    pub z_ii: Impedance,
    pub gamma_i: Complex64,
    pub gamma_ii: Complex64,
    pub theta_i: f64,
    pub theta_ii: f64,
    /// `|f(theta_ii)|` of the scalar pairing equation.
    pub residual: f64,
    /// Number of distinct roots found on `(-pi, pi]`.
    pub roots: usize,
}

impl ReactivePair {
    /// Partner reactance in ohms, `None` for an open circuit.
    pub fn x_ii(&self) -> Option<f64> {
        match self.z_ii {
            Impedance::Finite(z) => Some(z.im),
            Impedance::Open => None,
        }
    }
}

/// Scalar pairing condition on the basis-load phases:
/// `cos((theta_i - theta_ii)/2) - k cos(theta_delta + (theta_i + theta_ii)/2)`
/// with `k = 2|Delta| / (1 + |Delta|^2)`.
pub fn pairing_function(a: &SymmetricThreePort, theta_i: f64, theta_ii: f64) -> f64 {
    let delta = a.delta();
    let k = 2.0 * delta.norm() / (1.0 + delta.norm_sqr());
    ((theta_i - theta_ii) / 2.0).cos() - k * (delta.arg() + (theta_i + theta_ii) / 2.0).cos()
}

/// Partner of `X_I` nearest to the principal-branch preference.
pub fn reactive_partner(a: &SymmetricThreePort, x_i: f64) -> Result<ReactivePair> {
    reactive_partner_near(a, x_i, None)
}

/// Partner of `X_I`; with several roots the one closest to `hint` (a phase of
/// `gamma_ii`) wins, otherwise the one closest to `theta_i + pi`.
pub fn reactive_partner_near(a: &SymmetricThreePort, x_i: f64, hint: Option<f64>) -> Result<ReactivePair> {
    if !x_i.is_finite() {
        return Err(Error::InvalidInput(format!("reactance must be finite, got {x_i}")));
    }
    let gamma_i = gamma_from_reactance(x_i, a.z0());
    let theta_i = gamma_i.arg();
    let f = |t: f64| pairing_function(a, theta_i, t);

    let grid: Vec<(f64, f64)> = (0..=SCAN_POINTS)
        .map(|j| {
            let t = -PI + TAU * j as f64 / SCAN_POINTS as f64;
            (t, f(t))
        })
        .collect();
    let (lo, hi) = grid
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &(_, v)| (lo.min(v.abs()), hi.max(v.abs())));
    if hi < FLAT_TOL {
        return Err(Error::RootNotFound {
            min_residual: lo,
            max_residual: hi,
        });
    }

    let mut roots: Vec<f64> = Vec::new();
    for w in grid.windows(2) {
        let ((t0, f0), (t1, f1)) = (w[0], w[1]);
        let root = if f0 == 0.0 {
            Some(t0)
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            Some(bisect(&f, t0, t1, f0))
        } else {
            None
        };
        if let Some(r) = root {
            let r = principal(r);
            if roots.iter().all(|&q| circular_distance(q, r) > 1e-9) {
                roots.push(r);
            }
        }
    }
    let target = hint.unwrap_or(theta_i + PI);
    let theta_ii = roots
        .iter()
        .copied()
        .min_by(|p, q| circular_distance(*p, target).total_cmp(&circular_distance(*q, target)))
        .ok_or(Error::RootNotFound {
            min_residual: lo,
            max_residual: hi,
        })?;

    let gamma_ii = Complex64::from_polar(1.0, theta_ii);
    Ok(ReactivePair {
        x_i,
        z_ii: impedance_from_gamma(gamma_ii, a.z0()).z,
        gamma_i,
        gamma_ii,
        theta_i,
        theta_ii,
        residual: f(theta_ii).abs(),
        roots: roots.len(),
    })
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > BISECT_WIDTH {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Maps a phase onto `(-pi, pi]`.
pub(crate) fn principal(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

pub(crate) fn circular_distance(a: f64, b: f64) -> f64 {
    principal(a - b).abs()
}

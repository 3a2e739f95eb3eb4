//! Generic N-port scattering-parameter algebra.
//!
//! Holds the [`ScatteringMatrix`] container, the lossless beam-coupling
//! identity `X = I - S^H S`, and conversions between load impedances and
//! reflection coefficients. Touchstone ingestion lives in [`touchstone`].

pub mod touchstone;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numfmt::fmt_complex;

/// Default tolerance on the eigenvalues of `I - S^H S` for the passivity check.
///
/// Loose enough for S-parameters printed to two decimals.
pub const DEFAULT_PASSIVITY_TOL: f64 = 1e-6;

/// `|1 - gamma|` below which a reflection coefficient is treated as an open circuit.
pub const OPEN_TOL: f64 = 1e-12;

/// Square matrix of scattering parameters at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringMatrix {
    entries: DMatrix<Complex64>,
    z0: f64,
    freq: Option<f64>,
}

impl ScatteringMatrix {
    pub fn new(entries: DMatrix<Complex64>, z0: f64, freq: Option<f64>) -> Result<Self> {
        if entries.nrows() == 0 || entries.nrows() != entries.ncols() {
            return Err(Error::InvalidInput(format!(
                "scattering matrix must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if !(z0.is_finite() && z0 > 0.0) {
            return Err(Error::InvalidInput(format!(
                "reference impedance must be positive, got {z0}"
            )));
        }
        if let Some(f) = freq {
            if !f.is_finite() || f < 0.0 {
                return Err(Error::InvalidInput(format!("invalid frequency {f}")));
            }
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput(
                "scattering matrix has non-finite entries".into(),
            ));
        }
        Ok(Self { entries, z0, freq })
    }

    /// Builds a matrix from row slices.
    pub fn from_rows(rows: &[Vec<Complex64>], z0: f64, freq: Option<f64>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("rows must form a square matrix".into()));
        }
        let entries = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::new(entries, z0, freq)
    }

    pub fn n_ports(&self) -> usize {
        self.entries.nrows()
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn freq(&self) -> Option<f64> {
        self.freq
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Entry `S_ij` (row `i` receives, column `j` is driven).
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn with_freq(mut self, freq: Option<f64>) -> Self {
        self.freq = freq;
        self
    }

    /// Smallest eigenvalue of `I - S^H S`. Non-negative for a passive network.
    pub fn passivity_margin(&self) -> f64 {
        dissipation_matrix(&self.entries)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn check_passive(&self, tol: f64) -> Result<()> {
        let min_eigenvalue = self.passivity_margin();
        if min_eigenvalue < -tol {
            return Err(Error::NotPassive { min_eigenvalue, tol });
        }
        Ok(())
    }

    /// Largest `|S_ij - S_ji|` over all port pairs.
    pub fn reciprocity_residual(&self) -> f64 {
        let n = self.n_ports();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).norm());
            }
        }
        worst
    }
}

fn dissipation_matrix(s: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = s.nrows();
    DMatrix::<Complex64>::identity(n, n) - s.adjoint() * s
}

/// Matrix of beam-coupling coefficients between the embedded port patterns.
///
/// Entry `(n, m)` is the overlap of pattern `m` with the conjugate of pattern `n`,
/// so that the radiated power for port excitation `a` is `a^H X a`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamCouplingMatrix {
    entries: DMatrix<Complex64>,
}

impl BeamCouplingMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn n_ports(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.entries[(n, m)]
    }

    /// `u^H X v` for weight vectors over the embedded patterns.
    pub fn coupling(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let n = self.n_ports();
        assert!(u.len() == n && v.len() == n, "weight vector length mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                acc += ui.conj() * self.entries[(i, j)] * vj;
            }
        }
        acc
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.n_ports();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// Beam-coupling matrix of a lossless radiator, `I - S^H S`.
///
/// Fails if the network is active beyond `passivity_tol`.
pub fn beam_coupling_lossless(s: &ScatteringMatrix, passivity_tol: f64) -> Result<BeamCouplingMatrix> {
    s.check_passive(passivity_tol)?;
    Ok(BeamCouplingMatrix {
        entries: dissipation_matrix(s.entries()),
    })
}

/// Fraction of unit incident power at port `n` radiated when all other ports
/// are matched, `1 - sum_p |S_pn|^2`.
pub fn radiated_power_per_port(s: &ScatteringMatrix, n: usize) -> Result<f64> {
    if n >= s.n_ports() {
        return Err(Error::PortIndex {
            index: n,
            n_ports: s.n_ports(),
        });
    }
    Ok(1.0 - s.entries().column(n).iter().map(|z| z.norm_sqr()).sum::<f64>())
}

/// A load impedance, with an explicit marker for the open circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Impedance {
    Finite(#[serde(serialize_with = "ser_complex")] Complex64),
    Open,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_complex(*z))
}

impl Impedance {
    pub fn reactive(x: f64) -> Self {
        Impedance::Finite(Complex64::new(0.0, x))
    }
}

/// A termination described by its reflection coefficient, with the derived impedance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexLoad {
    pub gamma: Complex64,
    pub z: Impedance,
}

impl ComplexLoad {
    /// Imaginary part of the impedance; `None` for an open circuit.
    pub fn reactance(&self) -> Option<f64> {
        match self.z {
            Impedance::Finite(z) => Some(z.im),
            Impedance::Open => None,
        }
    }

    pub fn is_open(&self) -> bool {
        matches!(self.z, Impedance::Open)
    }
}

/// `(z - z0) / (z + z0)`; the open marker maps to 1.
pub fn gamma_from_impedance(z: Impedance, z0: f64) -> Result<Complex64> {
    if !(z0.is_finite() && z0 > 0.0) {
        return Err(Error::InvalidInput(format!("reference impedance must be positive, got {z0}")));
    }
    match z {
        Impedance::Open => Ok(Complex64::new(1.0, 0.0)),
        Impedance::Finite(z) => {
            let den = z + z0;
            if den.norm() == 0.0 {
                return Err(Error::ImpedancePole(fmt_complex(z)));
            }
            Ok((z - z0) / den)
        }
    }
}

/// Reflection coefficient of the pure reactance `jx`. Always on the unit circle.
pub fn gamma_from_reactance(x: f64, z0: f64) -> Complex64 {
    let z = Complex64::new(0.0, x);
    (z - z0) / (z + z0)
}

/// Inverse of [`gamma_from_impedance`]: `z0 (1 + gamma) / (1 - gamma)`.
pub fn impedance_from_gamma(gamma: Complex64, z0: f64) -> ComplexLoad {
    let one = Complex64::new(1.0, 0.0);
    if (one - gamma).norm() <= OPEN_TOL {
        return ComplexLoad {
            gamma,
            z: Impedance::Open,
        };
    }
    ComplexLoad {
        gamma,
        z: Impedance::Finite(z0 * (one + gamma) / (one - gamma)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_square_and_bad_z0() {
        assert!(ScatteringMatrix::new(DMatrix::zeros(2, 3), 50.0, None).is_err());
        assert!(ScatteringMatrix::new(DMatrix::zeros(2, 2), 0.0, None).is_err());
        assert!(ScatteringMatrix::new(DMatrix::zeros(0, 0), 50.0, None).is_err());
    }

    #[test]
    fn zero_matrix_radiates_everything() {
        let s = ScatteringMatrix::new(DMatrix::zeros(3, 3), 50.0, None).unwrap();
        let x = beam_coupling_lossless(&s, DEFAULT_PASSIVITY_TOL).unwrap();
        assert_eq!(x.entries(), &DMatrix::<Complex64>::identity(3, 3));
        for n in 0..3 {
            assert_eq!(radiated_power_per_port(&s, n).unwrap(), 1.0);
        }
    }

    #[test]
    fn unitary_matrix_radiates_nothing() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = ScatteringMatrix::from_rows(
            &[vec![c(h, 0.0), c(0.0, h)], vec![c(0.0, h), c(h, 0.0)]],
            50.0,
            None,
        )
        .unwrap();
        let x = beam_coupling_lossless(&s, DEFAULT_PASSIVITY_TOL).unwrap();
        assert!(x.entries().iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn one_port_half_reflection() {
        let s = ScatteringMatrix::from_rows(&[vec![c(0.5, 0.0)]], 50.0, None).unwrap();
        assert_eq!(radiated_power_per_port(&s, 0).unwrap(), 0.75);
        assert!(matches!(
            radiated_power_per_port(&s, 1),
            Err(Error::PortIndex { index: 1, n_ports: 1 })
        ));
    }

    #[test]
    fn active_network_rejected() {
        let s = ScatteringMatrix::from_rows(&[vec![c(1.2, 0.0)]], 50.0, None).unwrap();
        assert!(matches!(
            beam_coupling_lossless(&s, DEFAULT_PASSIVITY_TOL),
            Err(Error::NotPassive { .. })
        ));
    }

    #[test]
    fn gamma_conversions() {
        assert_eq!(gamma_from_impedance(Impedance::Finite(c(50.0, 0.0)), 50.0).unwrap(), c(0.0, 0.0));
        assert_eq!(gamma_from_impedance(Impedance::Finite(c(0.0, 0.0)), 50.0).unwrap(), c(-1.0, 0.0));
        let g = gamma_from_impedance(Impedance::reactive(50.0), 50.0).unwrap();
        assert!((g - c(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(gamma_from_impedance(Impedance::Open, 50.0).unwrap(), c(1.0, 0.0));
        assert!(matches!(
            gamma_from_impedance(Impedance::Finite(c(-50.0, 0.0)), 50.0),
            Err(Error::ImpedancePole(_))
        ));

        assert_eq!(impedance_from_gamma(c(0.0, 0.0), 50.0).z, Impedance::Finite(c(50.0, 0.0)));
        assert_eq!(impedance_from_gamma(c(-1.0, 0.0), 50.0).z, Impedance::Finite(c(0.0, 0.0)));
        let j = impedance_from_gamma(c(0.0, 1.0), 50.0);
        assert!((j.reactance().unwrap() - 50.0).abs() < 1e-12);
        assert!(impedance_from_gamma(c(1.0, 0.0), 50.0).is_open());
    }

    #[test]
    fn unit_circle_maps_to_cotangent_reactance() {
        for k in 1..36 {
            let theta = k as f64 * 0.17;
            let load = impedance_from_gamma(Complex64::from_polar(1.0, theta), 50.0);
            let Impedance::Finite(z) = load.z else { panic!("open") };
            assert!(z.re.abs() < 1e-12);
            assert!((z.im - 50.0 / (theta / 2.0).tan()).abs() < 1e-9 * (1.0 + z.im.abs()));
        }
    }
}

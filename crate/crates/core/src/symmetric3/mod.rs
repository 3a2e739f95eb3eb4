//! Mirror-symmetric three-port radiator with one active feed.
//!
//! Port 0 is the active feed; ports 1 and 2 are control ports terminated by
//! loads with reflection coefficients `gamma1`, `gamma2`. Symmetry about the
//! plane through port 0 leaves four distinct scattering parameters:
//! `S00`, `S01 = S02`, `S11 = S22` and `S21 = S12`.

mod basis;

pub use basis::{basis_coupling, basis_from_loads, basis_powers_lossless, BasisPair, BasisPowerReport};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiport::ScatteringMatrix;

/// Default absolute tolerance per complex entry when validating mirror symmetry.
pub const DEFAULT_SYMMETRY_TOL: f64 = 5e-3;

/// Default lower bound on `|D|`, the shared denominator of the loaded-port waves.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-9;

/// Reduced parameters of a symmetric, reciprocal three-port.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricThreePort {
    pub s00: Complex64,
    pub s01: Complex64,
    pub s11: Complex64,
    pub s21: Complex64,
    z0: f64,
    singular_tol: f64,
    source: ScatteringMatrix,
}

/// Weights `[1, l1, l2]` of the embedded patterns for unit excitation of the feed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstantaneousPatternVector(pub [Complex64; 3]);

/// Validates symmetry and reciprocity of a 3-port and reduces it to four parameters.
///
/// Paired entries are averaged, so the reduced model is exactly symmetric
/// even when the input was rounded.
pub fn reduce_symmetric(s: &ScatteringMatrix, sym_tol: f64) -> Result<SymmetricThreePort> {
    if s.n_ports() != 3 {
        return Err(Error::PortCount {
            expected: 3,
            detail: format!("got a {}-port network", s.n_ports()),
        });
    }
    let pairs = [
        ((1, 1), (2, 2)),
        ((0, 1), (0, 2)),
        ((1, 0), (2, 0)),
        ((0, 1), (1, 0)),
        ((0, 2), (2, 0)),
        ((1, 2), (2, 1)),
    ];
    let (worst_pair, worst) = pairs
        .iter()
        .map(|&(p, q)| ((p, q), (s.get(p.0, p.1) - s.get(q.0, q.1)).norm()))
        .fold((pairs[0], 0.0f64), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    if worst > sym_tol {
        let ((a, b), (c, d)) = worst_pair;
        return Err(Error::Asymmetric {
            pair: format!("S({a},{b}) and S({c},{d})"),
            deviation: worst,
            tol: sym_tol,
        });
    }

    let s01 = (s.get(0, 1) + s.get(0, 2) + s.get(1, 0) + s.get(2, 0)) / 4.0;
    Ok(SymmetricThreePort {
        s00: s.get(0, 0),
        s01,
        s11: (s.get(1, 1) + s.get(2, 2)) / 2.0,
        s21: (s.get(1, 2) + s.get(2, 1)) / 2.0,
        z0: s.z0(),
        singular_tol: DEFAULT_SINGULAR_TOL,
        source: s.clone(),
    })
}

/// Largest deviation among the mirror-symmetry and reciprocity pairs of a 3-port.
pub fn symmetry_residual(s: &ScatteringMatrix) -> f64 {
    if s.n_ports() != 3 {
        return f64::INFINITY;
    }
    let d = |a: (usize, usize), b: (usize, usize)| (s.get(a.0, a.1) - s.get(b.0, b.1)).norm();
    [
        d((1, 1), (2, 2)),
        d((0, 1), (0, 2)),
        d((1, 0), (2, 0)),
        s.reciprocity_residual(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

impl SymmetricThreePort {
    /// Builds the model directly from its four parameters.
    pub fn from_parts(s00: Complex64, s01: Complex64, s11: Complex64, s21: Complex64, z0: f64) -> Result<Self> {
        let m = expand_parts(s00, s01, s11, s21);
        let source = ScatteringMatrix::new(m, z0, None)?;
        Ok(SymmetricThreePort {
            s00,
            s01,
            s11,
            s21,
            z0,
            singular_tol: DEFAULT_SINGULAR_TOL,
            source,
        })
    }

    pub fn with_singular_tol(mut self, tol: f64) -> Self {
        self.singular_tol = tol;
        self
    }

    pub fn singular_tol(&self) -> f64 {
        self.singular_tol
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    /// The matrix this model was validated from.
    pub fn source(&self) -> &ScatteringMatrix {
        &self.source
    }

    /// Exactly symmetric 3x3 matrix rebuilt from the reduced parameters.
    pub fn expand(&self) -> ScatteringMatrix {
        ScatteringMatrix::new(
            expand_parts(self.s00, self.s01, self.s11, self.s21),
            self.z0,
            self.source.freq(),
        )
        .expect("reduced parameters are finite")
    }

    /// `S11 - S21`, the difference-mode reflection of the control ports.
    pub fn delta(&self) -> Complex64 {
        self.s11 - self.s21
    }

    /// `1 - S11 (g1 + g2) + g1 g2 (S11^2 - S21^2)`.
    pub fn denominator(&self, gamma1: Complex64, gamma2: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0) - self.s11 * (gamma1 + gamma2)
            + gamma1 * gamma2 * (self.s11 * self.s11 - self.s21 * self.s21)
    }

    /// Normalized incident waves `l_k = gamma_k b_k / a_0` at the control ports.
    pub fn ell_coefficients(&self, gamma1: Complex64, gamma2: Complex64) -> Result<(Complex64, Complex64)> {
        let den = self.denominator(gamma1, gamma2);
        if den.norm() <= self.singular_tol {
            return Err(Error::Singular {
                magnitude: den.norm(),
                tol: self.singular_tol,
            });
        }
        let one = Complex64::new(1.0, 0.0);
        let delta = self.delta();
        let l1 = gamma1 * self.s01 * (one - gamma2 * delta) / den;
        let l2 = gamma2 * self.s01 * (one - gamma1 * delta) / den;
        Ok((l1, l2))
    }

    /// Reflection coefficient seen at the feed, `S00 + S01 (l1 + l2)`.
    pub fn total_reflection(&self, gamma1: Complex64, gamma2: Complex64) -> Result<Complex64> {
        let (l1, l2) = self.ell_coefficients(gamma1, gamma2)?;
        Ok(self.s00 + self.s01 * (l1 + l2))
    }

    pub fn instantaneous_pattern(&self, gamma1: Complex64, gamma2: Complex64) -> Result<InstantaneousPatternVector> {
        let (l1, l2) = self.ell_coefficients(gamma1, gamma2)?;
        Ok(InstantaneousPatternVector([Complex64::new(1.0, 0.0), l1, l2]))
    }

    /// `1 - conj(S11 - S21) (S11 + S21)`, the common denominator of the
    /// closed forms that hold once the basis loads are a reactive pair.
    fn reactive_denominator(&self) -> Complex64 {
        Complex64::new(1.0, 0.0) - self.delta().conj() * (self.s11 + self.s21)
    }

    /// Feed reflection coefficient shared by every state of a reactive design,
    /// expressed through the scattering parameters only.
    pub fn reactive_gamma_tot(&self) -> Complex64 {
        self.s00 + self.s01 * self.s01 * 2.0 * self.delta().conj() / self.reactive_denominator()
    }

    /// `(l_B1, |l_B2|^2)` for any reactive basis pair, as closed forms in the
    /// scattering parameters.
    pub fn reactive_basis_ell(&self) -> (Complex64, f64) {
        let den = self.reactive_denominator();
        let l_b1 = self.s01 * self.delta().conj() / den;
        let l_b2_sq = (self.s01 / den).norm_sqr();
        (l_b1, l_b2_sq)
    }
}

fn expand_parts(s00: Complex64, s01: Complex64, s11: Complex64, s21: Complex64) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(3, 3, &[s00, s01, s01, s01, s11, s21, s01, s21, s11])
}

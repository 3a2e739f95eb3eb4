use num_complex::Complex64;
use serde::Serialize;

use super::SymmetricThreePort;
use crate::error::{Error, Result};
use crate::multiport::BeamCouplingMatrix;

/// Basis vectors built from the two mirrored states `{Z_I, Z_II}` and `{Z_II, Z_I}`.
///
/// `v_b1 = [1, l_B1, l_B1]` is the even (sum) pattern and
/// `v_b2 = [0, l_B2, -l_B2]` the odd (difference) pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisPair {
    pub gamma_i: Complex64,
    pub gamma_ii: Complex64,
    pub ell_b1: Complex64,
    pub ell_b2: Complex64,
    pub v_b1: [Complex64; 3],
    pub v_b2: [Complex64; 3],
}

impl BasisPair {
    /// Plain (unconjugated) dot product `v_b1 . v_b2`.
    pub fn dot(&self) -> Complex64 {
        self.v_b1
            .iter()
            .zip(&self.v_b2)
            .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b)
    }
}

/// Radiated powers of the two basis patterns per unit feed power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisPowerReport {
    pub p_b1: f64,
    pub p_b2: f64,
    /// Imbalance ratio `p_b1 / p_b2`.
    pub r: f64,
}

/// Builds the basis from the basis loads `gamma_i` (port 1) and `gamma_ii` (port 2).
pub fn basis_from_loads(a: &SymmetricThreePort, gamma_i: Complex64, gamma_ii: Complex64) -> Result<BasisPair> {
    let den = a.denominator(gamma_i, gamma_ii);
    if den.norm() <= a.singular_tol() {
        return Err(Error::Singular {
            magnitude: den.norm(),
            tol: a.singular_tol(),
        });
    }
    let ell_b1 = 0.5 * a.s01 * (gamma_i + gamma_ii - 2.0 * gamma_i * gamma_ii * a.delta()) / den;
    let ell_b2 = 0.5 * a.s01 * (gamma_ii - gamma_i) / den;
    let zero = Complex64::new(0.0, 0.0);
    Ok(BasisPair {
        gamma_i,
        gamma_ii,
        ell_b1,
        ell_b2,
        v_b1: [Complex64::new(1.0, 0.0), ell_b1, ell_b1],
        v_b2: [zero, ell_b2, -ell_b2],
    })
}

/// Coupling between the two basis patterns from the port beam-coupling
/// coefficients. Zero for a mirror-symmetric radiator.
pub fn basis_coupling(x: &BeamCouplingMatrix, b: &BasisPair) -> Complex64 {
    let chi = |n, m| x.get(n, m);
    b.ell_b2 * (chi(0, 1) - chi(0, 2))
        + b.ell_b2 * b.ell_b1.conj() * (chi(1, 1) - chi(2, 2) + chi(2, 1) - chi(1, 2))
}

/// Basis powers of a lossless radiator from scattering parameters alone.
///
/// Port sums are taken over the symmetrized matrix so the mirror identities
/// hold exactly.
pub fn basis_powers_lossless(a: &SymmetricThreePort, b: &BasisPair) -> Result<BasisPowerReport> {
    let s = &a.expand();
    let col = |j: usize| (0..3).map(move |n| s.get(n, j));
    let p_e0 = 1.0 - col(0).map(|z| z.norm_sqr()).sum::<f64>();
    let p_e1 = 1.0 - col(1).map(|z| z.norm_sqr()).sum::<f64>();
    let c01: Complex64 = col(0).zip(col(1)).map(|(s0, s1)| s0.conj() * s1).sum();
    // Real for a symmetric matrix.
    let c21 = col(2).zip(col(1)).map(|(s2, s1)| s2.conj() * s1).sum::<Complex64>().re;

    let p_b1 = p_e0 - 4.0 * (b.ell_b1 * c01).re + 2.0 * b.ell_b1.norm_sqr() * (p_e1 - c21);
    let p_b2 = 2.0 * b.ell_b2.norm_sqr() * (p_e1 + c21);
    if p_b2 <= 1e-14 {
        return Err(Error::DegenerateBasis { p_b2 });
    }
    Ok(BasisPowerReport {
        p_b1,
        p_b2,
        r: p_b1 / p_b2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn model() -> SymmetricThreePort {
        SymmetricThreePort::from_parts(c(0.24, 0.19), c(-0.13, 0.47), c(0.46, -0.27), c(0.14, 0.13), 50.0).unwrap()
    }

    #[test]
    fn equal_loads_give_degenerate_basis() {
        let a = model();
        let g = c(0.0, -1.0);
        let b = basis_from_loads(&a, g, g).unwrap();
        assert_eq!(b.ell_b2, c(0.0, 0.0));
        assert!(matches!(basis_powers_lossless(&a, &b), Err(Error::DegenerateBasis { .. })));
    }

    #[test]
    fn basis_vectors_are_exactly_orthogonal() {
        let a = model();
        for k in 0..50 {
            let gi = Complex64::from_polar(1.0, 0.13 * k as f64);
            let gii = Complex64::from_polar(0.9, -0.29 * k as f64 + 1.0);
            let b = basis_from_loads(&a, gi, gii).unwrap();
            assert_eq!(b.dot(), c(0.0, 0.0));
        }
    }
}

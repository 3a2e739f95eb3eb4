#![allow(dead_code)]

use beamspace::multiport::ScatteringMatrix;
use beamspace::symmetric3::SymmetricThreePort;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const DESIGN_PARTS: [(f64, f64); 4] = [(0.24, 0.19), (-0.13, 0.47), (0.46, -0.27), (0.14, 0.13)];

pub fn design() -> SymmetricThreePort {
    let p = DESIGN_PARTS.map(|(re, im)| c(re, im));
    SymmetricThreePort::from_parts(p[0], p[1], p[2], p[3], 50.0).unwrap()
}

pub fn design_path() -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/design_example.s3p")
}

fn largest_singular_value(m: &DMatrix<Complex64>) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

/// Symmetric reciprocal radiator from eight parameters in `[-1, 1]`, scaled so
/// the largest singular value of its scattering matrix equals `gain < 1`.
pub fn radiator_from_params(p: &[f64; 8], gain: f64) -> SymmetricThreePort {
    let parts = [c(p[0], p[1]), c(p[2], p[3]), c(p[4], p[5]), c(p[6], p[7])];
    let raw = SymmetricThreePort::from_parts(parts[0], parts[1], parts[2], parts[3], 50.0).unwrap();
    let sigma = largest_singular_value(raw.expand().entries()).max(1e-9);
    let k = gain / sigma;
    SymmetricThreePort::from_parts(parts[0] * k, parts[1] * k, parts[2] * k, parts[3] * k, 50.0).unwrap()
}

pub fn random_radiator(rng: &mut impl Rng) -> SymmetricThreePort {
    let p: [f64; 8] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    radiator_from_params(&p, rng.random_range(0.3..0.98))
}

pub fn random_matrix(rng: &mut impl Rng, n: usize, gain: f64) -> ScatteringMatrix {
    let m = DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let sigma = largest_singular_value(&m);
    ScatteringMatrix::new(m * Complex64::from(gain / sigma), 50.0, Some(1e9)).unwrap()
}

/// Reflection coefficient of a random passive load, optionally on the unit circle.
pub fn random_gamma(rng: &mut impl Rng, reactive: bool) -> Complex64 {
    let phase = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let mag = if reactive { 1.0 } else { rng.random_range(0.0..1.0) };
    Complex64::from_polar(mag, phase)
}

/// Dissipation matrix `I - S^H S`, computed directly.
pub fn coupling_matrix(s: &ScatteringMatrix) -> DMatrix<Complex64> {
    let e = s.entries();
    DMatrix::identity(e.nrows(), e.ncols()) - e.adjoint() * e
}

pub fn quad(x: &DMatrix<Complex64>, u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let mut acc = c(0.0, 0.0);
    for i in 0..u.len() {
        for j in 0..v.len() {
            acc += u[i].conj() * x[(i, j)] * v[j];
        }
    }
    acc
}

pub fn circular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

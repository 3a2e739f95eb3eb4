//! Acceptance gate. Prints one line per criterion and fails if any does.

mod common;

use std::time::{Duration, Instant};

use beamspace::channel::{capacity_curves, CapacityResult, ChannelConfig};
use beamspace::multiport::beam_coupling_lossless;
use beamspace::multiport::touchstone::{parse_touchstone, serialize_touchstone_with, NumberFormat};
use beamspace::symmetric3::{basis_coupling, basis_powers_lossless, symmetry_residual, BasisPair, BasisPowerReport, SymmetricThreePort};
use beamspace::synthesis::{
    constant_matching, solve_loads, sweep_reactances, synthesize_psk_table, verify_multiplexing, LoadTable,
    PskConstellation, DEFAULT_REACTIVE_TOL,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn radiators(seed: u64, n: usize) -> Vec<SymmetricThreePort> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_radiator(&mut rng)).collect()
}

fn table(a: &SymmetricThreePort, x_i: f64, m: usize) -> LoadTable {
    synthesize_psk_table(a, x_i, &PskConstellation::new(m).unwrap()).unwrap().1
}

fn x_i_for(k: usize) -> f64 {
    -290.0 + 37.0 * (k % 16) as f64
}

fn return_loss() -> Outcome {
    let start = Instant::now();
    let a = design();
    let mut worst: f64 = 0.0;
    let mut rls = Vec::new();
    for x_i in [-100.0, -250.0, -30.0, 0.0, 60.0, 300.0] {
        let rep = constant_matching(&a, &table(&a, x_i, 4), DEFAULT_REACTIVE_TOL).unwrap();
        worst = worst.max((rep.return_loss_db - 10.4).abs());
        rls.push(rep.return_loss_db);
    }
    let t = start.elapsed();
    outcome(
        worst <= 0.2 && t < Duration::from_secs(1),
        format!("return loss {:.4} dB at X_I = -100 ohm, max |RL - 10.4| = {worst:.4} over 6 X_I, {t:.2?}", rls[0]),
    )
}

fn constant_matching_random() -> Outcome {
    let start = Instant::now();
    let (mut spread, mut dev) = (0.0f64, 0.0f64);
    for (k, a) in radiators(2, 100).iter().enumerate() {
        let rep = constant_matching(a, &table(a, x_i_for(k), 4), DEFAULT_REACTIVE_TOL).unwrap();
        spread = spread.max(rep.max_spread);
        dev = dev.max(rep.closed_form_deviation);
    }
    let t = start.elapsed();
    outcome(
        spread < 1e-10 && dev < 1e-9 && t < Duration::from_secs(10),
        format!("100 radiators: max spread {spread:.2e}, max closed-form deviation {dev:.2e}, {t:.2?}"),
    )
}

fn reactivity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut loads = 0;
    for (k, a) in radiators(3, 50).iter().enumerate() {
        for m in [2, 4, 8] {
            for e in &table(a, x_i_for(k), m).entries {
                worst = worst.max((e.gamma1.norm() - 1.0).abs()).max((e.gamma2.norm() - 1.0).abs());
                loads += 2;
            }
        }
    }
    outcome(worst < 1e-8, format!("{loads} loads, max ||gamma| - 1| = {worst:.2e}"))
}

fn bpsk_degeneracy() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut all = radiators(4, 50);
    all.push(design());
    for (k, a) in all.iter().enumerate() {
        let t = table(a, x_i_for(k), 4);
        let (gi, gii) = (t.basis.gamma_i, t.basis.gamma_ii);
        let (p1, p2) = solve_loads(a, gi, gii, c(1.0, 0.0)).unwrap();
        let (m1, m2) = solve_loads(a, gi, gii, c(-1.0, 0.0)).unwrap();
        for d in [p1 - gii, p2 - gi, m1 - gi, m2 - gii] {
            worst = worst.max(d.norm());
        }
    }
    outcome(worst < 1e-12, format!("51 radiators: max deviation from basis loads {worst:.2e}"))
}

fn multiplexing() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut flagged = 0;
    for (k, a) in radiators(5, 50).iter().enumerate() {
        let t = table(a, x_i_for(k), 4);
        let rep = verify_multiplexing(a, &t.basis, &t, 1000, k as u64).unwrap();
        worst = worst.max(rep.max_residual);
        flagged += rep.flagged.len();
    }
    outcome(worst < 1e-9 && flagged == 0, format!("50 radiators x 1000 pairs: max residual {worst:.2e}"))
}

fn swap_symmetry() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for (k, a) in radiators(6, 50).iter().enumerate() {
        for m in [2, 4, 8] {
            let t = table(a, x_i_for(k), m);
            for e in &t.entries {
                let n = t.entry_for_ratio(-e.ratio.value).unwrap();
                worst = worst.max((n.gamma1 - e.gamma2).norm()).max((n.gamma2 - e.gamma1).norm());
                pairs += 1;
            }
        }
    }
    outcome(worst < 1e-12, format!("{pairs} entries: max swap deviation {worst:.2e}"))
}

fn relative_spread(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    (hi - lo) / hi.abs().max(lo.abs())
}

fn x_i_independence() -> Outcome {
    let a = design();
    let grid: Vec<f64> = (0..20).map(|k| -285.0 + 30.0 * k as f64).collect();
    let sweep = sweep_reactances(&a, &grid, &PskConstellation::new(4).unwrap()).unwrap();
    let failed = sweep.rows.iter().filter(|r| !r.ok()).count();
    let r_spread = relative_spread(sweep.rows.iter().filter_map(|r| r.r));
    let tables: Vec<LoadTable> = grid.iter().map(|&x| table(&a, x, 4)).collect();
    let g0 = tables[0].gamma_tot;
    let g_spread = tables.iter().map(|t| (t.gamma_tot - g0).norm()).fold(0.0, f64::max) / g0.norm();
    let r = sweep.rows[0].r.unwrap_or(f64::NAN);
    outcome(
        failed == 0 && r_spread < 1e-9 && g_spread < 1e-9,
        format!("20 X_I points: lossless r = {r:.6} (spread {r_spread:.2e}), gamma_tot spread {g_spread:.2e}"),
    )
}

fn orthogonality() -> Outcome {
    let mut bases: Vec<(SymmetricThreePort, BasisPair)> = Vec::new();
    let a = design();
    for k in 0..20 {
        bases.push((a.clone(), table(&a, -285.0 + 30.0 * k as f64, 4).basis));
    }
    for (k, r) in radiators(8, 100).into_iter().enumerate() {
        let b = table(&r, x_i_for(k), [2, 4, 8][k % 3]).basis;
        bases.push((r, b));
    }
    let mut nonzero_dot = 0;
    let mut worst: f64 = 0.0;
    for (a, b) in &bases {
        if b.dot() != c(0.0, 0.0) {
            nonzero_dot += 1;
        }
        let x = beam_coupling_lossless(&a.expand(), 1e-9).unwrap();
        worst = worst.max(basis_coupling(&x, b).norm());
    }
    outcome(
        nonzero_dot == 0 && worst < 1e-10,
        format!("{} bases: {nonzero_dot} nonzero dot products, max |chi_B1B2| = {worst:.2e}", bases.len()),
    )
}

fn desk(grid: Vec<f64>, efficiency: f64) -> ChannelConfig {
    ChannelConfig {
        snr_grid_db: grid,
        n_realizations: 2000,
        n_symbols: 1000,
        seed: 2024,
        efficiency,
        p_in: 1.0,
    }
}

fn design_powers() -> BasisPowerReport {
    let a = design();
    let t = table(&a, -100.0, 4);
    let p = basis_powers_lossless(&a, &t.basis).unwrap();
    let mean = 0.5 * (p.p_b1 + p.p_b2);
    BasisPowerReport { p_b1: p.p_b1 / mean, p_b2: p.p_b2 / mean, r: p.r }
}

fn capacity() -> Outcome {
    let start = Instant::now();
    let grid = vec![0.0, 10.0, 20.0, 30.0, 35.0, 40.0];
    let shift = 10.0 * 0.56f64.log10();
    let run = |p: &BasisPowerReport, g: Vec<f64>, eff: f64| -> CapacityResult { capacity_curves(p, &desk(g, eff)).unwrap() };

    let balanced = run(&BasisPowerReport { p_b1: 1.0, p_b2: 1.0, r: 1.0 }, grid.clone(), 1.0);
    let powers = design_powers();
    let lossy = run(&powers, grid.clone(), 0.56);
    let ideal_shifted = run(&powers, grid.iter().map(|g| g + shift).collect(), 1.0);
    let elapsed = start.elapsed();

    let high: Vec<f64> = balanced
        .rows
        .iter()
        .chain(&lossy.rows)
        .filter(|r| r.snr_db >= 35.0)
        .map(|r| r.qpsk_mi)
        .collect();
    let sat = high.iter().map(|mi| (mi - 4.0).abs()).fold(0.0, f64::max);
    let iid_gap = balanced.rows.iter().map(|r| (r.gaussian_capacity - r.iid_gaussian_capacity).abs()).fold(0.0, f64::max);
    let shift_gap = lossy
        .rows
        .iter()
        .zip(&ideal_shifted.rows)
        .map(|(a, b)| (a.gaussian_capacity - b.gaussian_capacity).abs())
        .fold(0.0, f64::max);
    // Each run covers 6 SNR points; the full desk-scale budget is per run.
    let per_run = elapsed / 3;
    outcome(
        sat <= 0.02 && iid_gap <= 0.05 && shift_gap <= 0.05 && per_run < Duration::from_secs(60),
        format!(
            "(a) max |MI - 4| at >= 35 dB {sat:.2e}; (b) max |beam - iid| {iid_gap:.2e}; (c) max |eff 0.56 - shifted| {shift_gap:.2e}; {per_run:.2?} per run"
        ),
    )
}

fn parser() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.random_range(1..5);
        let nets: Vec<_> = (0..3).map(|k| random_matrix(&mut rng, n, 0.95).with_freq(Some(1e9 * (k + 1) as f64))).collect();
        for f in [NumberFormat::Ri, NumberFormat::Ma, NumberFormat::Db] {
            let back = parse_touchstone(&serialize_touchstone_with(&nets, f).unwrap(), n).unwrap();
            for (x, y) in nets.iter().zip(&back) {
                for (u, v) in x.entries().iter().zip(y.entries().iter()) {
                    worst = worst.max((u - v).norm() / u.norm().max(1e-300));
                }
            }
        }
    }
    let text = std::fs::read_to_string(design_path()).unwrap();
    let sym = symmetry_residual(&parse_touchstone(&text, 3).unwrap()[0]);
    outcome(
        worst < 1e-12 && sym == 0.0,
        format!("max relative round-trip error {worst:.2e} over RI/MA/DB; design file symmetry residual {sym}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("return loss", return_loss),
        ("constant matching", constant_matching_random),
        ("reactivity", reactivity),
        ("BPSK degeneracy", bpsk_degeneracy),
        ("multiplexing identity", multiplexing),
        ("swap symmetry", swap_symmetry),
        ("X_I independence", x_i_independence),
        ("orthogonality", orthogonality),
        ("capacity behaviour", capacity),
        ("parser", parser),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !o.pass {
            failed += 1;
        }
        println!("criterion {}: {} {name}: {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}

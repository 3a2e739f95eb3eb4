use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;

use super::args::{Command, Design};
use super::output::{Cell, Report};
use super::{parse_grid, read_networks, CliError, CliResult, Outcome, Settings, Tolerances};
use crate::channel::{capacity_curves, ChannelConfig};
use crate::multiport::{beam_coupling_lossless, radiated_power_per_port, ScatteringMatrix};
use crate::symmetric3::{
    basis_coupling, basis_powers_lossless, reduce_symmetric, symmetry_residual, BasisPowerReport, SymmetricThreePort,
};
use crate::synthesis::{
    constant_matching, solve_loads, sweep_reactances, synthesize_psk_table_with, verify_multiplexing_with, LoadTable,
    PskConstellation, ReactivePair,
};

const DEFAULT_X_I: f64 = -100.0;
const DEFAULT_M: usize = 4;
const DEFAULT_SAMPLES: usize = 1000;
const DEFAULT_RANGE: &str = "-300:300:10";
const DEFAULT_SNR: &str = "-10:40:5";

const PARTNER_TOL: f64 = 1e-12;
const SPREAD_TOL: f64 = 1e-10;
const CLOSED_FORM_TOL: f64 = 1e-9;
const COUPLING_TOL: f64 = 1e-10;
const SWAP_TOL: f64 = 1e-12;
const ENERGY_TOL: f64 = 1e-9;

pub(crate) fn dispatch(cmd: Command, s: &Settings) -> CliResult<(Report, Outcome)> {
    let f = &s.file_config;
    match cmd {
        Command::Inspect { file } => inspect(&file, &s.tol),
        Command::Synth { design, seed } => {
            let seed = Settings::pick(seed, &f.seed).unwrap_or(0);
            synth(&design, s, seed)
        }
        Command::Sweep { design, range } => {
            let range = Settings::pick(range, &f.range).unwrap_or_else(|| DEFAULT_RANGE.into());
            sweep(&design, s, &range)
        }
        Command::Verify { design, samples, seed } => {
            let samples = Settings::pick(samples, &f.samples).unwrap_or(DEFAULT_SAMPLES);
            let seed = Settings::pick(seed, &f.seed).unwrap_or(0);
            if samples == 0 {
                return Err(CliError::Input("--samples must be at least 1".into()));
            }
            verify(&design, s, samples, seed)
        }
        Command::Capacity {
            design,
            snr,
            realizations,
            symbols,
            seed,
            efficiency,
            raw_powers,
        } => {
            let cfg = ChannelConfig {
                snr_grid_db: parse_grid(&Settings::pick(snr, &f.snr).unwrap_or_else(|| DEFAULT_SNR.into()), "SNR grid")?,
                n_realizations: Settings::pick(realizations, &f.realizations).unwrap_or(2000),
                n_symbols: Settings::pick(symbols, &f.symbols).unwrap_or(1000),
                seed: Settings::pick(seed, &f.seed).unwrap_or(0),
                efficiency: Settings::pick(efficiency, &f.efficiency).unwrap_or(1.0),
                p_in: 1.0,
            };
            cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;
            let raw = raw_powers || f.raw_powers.unwrap_or(false);
            capacity(&design, s, &cfg, raw)
        }
    }
}

struct Resolved {
    net: ScatteringMatrix,
    x_i: f64,
    constellation: PskConstellation,
}

fn resolve(d: &Design, s: &Settings) -> CliResult<Resolved> {
    let f = &s.file_config;
    let x_i = Settings::pick(d.x_i, &f.x_i).unwrap_or(DEFAULT_X_I);
    if !x_i.is_finite() {
        return Err(CliError::Input(format!("--x-i must be finite, got {x_i}")));
    }
    let m = Settings::pick(d.m, &f.m).unwrap_or(DEFAULT_M);
    let constellation = PskConstellation::new(m).map_err(|e| CliError::Input(e.to_string()))?;
    let nets = read_networks(&d.file)?;
    let net = select_frequency(nets, Settings::pick(d.freq, &f.freq))?;
    Ok(Resolved { net, x_i, constellation })
}

fn select_frequency(nets: Vec<ScatteringMatrix>, freq: Option<f64>) -> CliResult<ScatteringMatrix> {
    let Some(target) = freq else {
        return Ok(nets.into_iter().next().expect("parser returns at least one point"));
    };
    if !target.is_finite() {
        return Err(CliError::Input(format!("--freq must be finite, got {target}")));
    }
    nets.into_iter()
        .min_by(|a, b| {
            let da = (a.freq().unwrap_or(f64::NAN) - target).abs();
            let db = (b.freq().unwrap_or(f64::NAN) - target).abs();
            da.total_cmp(&db)
        })
        .ok_or_else(|| CliError::Input("file holds no frequency points".into()))
}

fn radiator(net: &ScatteringMatrix, tol: &Tolerances) -> CliResult<SymmetricThreePort> {
    if net.n_ports() != 3 {
        return Err(CliError::Input(format!("expected 3 ports: got a {}-port network", net.n_ports())));
    }
    net.check_passive(tol.passivity)?;
    Ok(reduce_symmetric(net, tol.symmetry)?.with_singular_tol(tol.singular))
}

fn reactance_cell(x: Option<f64>) -> Cell {
    match x {
        Some(x) => Cell::Real(x),
        None => Cell::Text("open".into()),
    }
}

fn design_meta(r: &mut Report, net: &ScatteringMatrix, m: usize) {
    r.meta("freq_hz", net.freq()).meta("z0", net.z0()).meta("m", m);
}

fn inspect(file: &PathBuf, tol: &Tolerances) -> CliResult<(Report, Outcome)> {
    let nets = read_networks(file)?;
    let n = nets[0].n_ports();
    if n != 3 {
        return Err(CliError::Input(format!("expected 3 ports: got a {n}-port network")));
    }
    let mut r = Report::new("inspect");
    r.meta("file", file.display().to_string())
        .meta("n_ports", n)
        .meta("n_frequencies", nets.len())
        .meta("z0", nets[0].z0())
        .meta("tol_passivity", tol.passivity)
        .meta("tol_symmetry", tol.symmetry);
    r.column("freq_hz")
        .column("symmetry_residual")
        .column("passivity_margin")
        .column("passive")
        .column("symmetric")
        .complex_column("gamma_tot_matched")
        .column("return_loss_matched_db")
        .column("p_rad_0")
        .column("p_rad_1")
        .column("p_rad_2");
    let mut failures = Vec::new();
    for net in &nets {
        let sym = symmetry_residual(net);
        let margin = net.passivity_margin();
        let passive = margin >= -tol.passivity;
        let symmetric = sym <= tol.symmetry;
        let label = net.freq().map_or_else(|| "?".to_string(), |f| format!("{f} Hz"));
        if !passive {
            failures.push(format!("passivity at {label}: smallest eigenvalue of I - S^H S is {margin:.3e}"));
        }
        if !symmetric {
            failures.push(format!("symmetry at {label}: residual {sym:.3e}"));
        }
        let s00 = net.get(0, 0);
        let mut row: Vec<Cell> = vec![
            net.freq().into(),
            sym.into(),
            margin.into(),
            passive.into(),
            symmetric.into(),
            s00.into(),
            (-20.0 * s00.norm().log10()).into(),
        ];
        for p in 0..3 {
            row.push(radiated_power_per_port(net, p)?.into());
        }
        r.push_row(row);
    }
    Ok((r, Outcome { failures }))
}

/// One named structural check.
struct Check {
    name: &'static str,
    value: f64,
    tol: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.value <= self.tol
    }
}

struct Design3 {
    a: SymmetricThreePort,
    pair: ReactivePair,
    table: LoadTable,
    powers: BasisPowerReport,
}

fn design(res: &Resolved, tol: &Tolerances) -> CliResult<Design3> {
    let a = radiator(&res.net, tol)?;
    let (pair, table) = synthesize_psk_table_with(&a, res.x_i, &res.constellation, tol.reactive)?;
    let powers = basis_powers_lossless(&a, &table.basis)?;
    Ok(Design3 { a, pair, table, powers })
}

fn structural_checks(d: &Design3, tol: &Tolerances, samples: usize, seed: u64) -> CliResult<Vec<Check>> {
    let (a, t) = (&d.a, &d.table);
    let mut checks = vec![Check {
        name: "partner_residual",
        value: d.pair.residual,
        tol: PARTNER_TOL,
    }];

    let reactivity = t
        .entries
        .iter()
        .map(|e| (e.gamma1.norm() - 1.0).abs().max((e.gamma2.norm() - 1.0).abs()))
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "reactivity",
        value: reactivity,
        tol: tol.reactive,
    });

    let mux = verify_multiplexing_with(a, &t.basis, t, samples, seed, tol.multiplex)?;
    checks.push(Check {
        name: "multiplexing",
        value: mux.max_residual,
        tol: tol.multiplex,
    });

    let matching = constant_matching(a, t, tol.reactive)?;
    checks.push(Check {
        name: "matching_spread",
        value: matching.max_spread,
        tol: SPREAD_TOL,
    });
    checks.push(Check {
        name: "matching_closed_form",
        value: matching.closed_form_deviation,
        tol: CLOSED_FORM_TOL,
    });

    checks.push(Check {
        name: "basis_dot",
        value: t.basis.dot().norm(),
        tol: 0.0,
    });
    let x = beam_coupling_lossless(&a.expand(), tol.passivity)?;
    checks.push(Check {
        name: "basis_coupling",
        value: basis_coupling(&x, &t.basis).norm(),
        tol: COUPLING_TOL,
    });

    let mut swap = 0.0f64;
    for e in &t.entries {
        if let Some(neg) = t.entry_for_ratio(-e.ratio.value) {
            swap = swap.max((neg.gamma1 - e.gamma2).norm()).max((neg.gamma2 - e.gamma1).norm());
        }
    }
    checks.push(Check {
        name: "swap_symmetry",
        value: swap,
        tol: SWAP_TOL,
    });

    let one = Complex64::new(1.0, 0.0);
    let (gi, gii) = (d.pair.gamma_i, d.pair.gamma_ii);
    let (p1, p2) = solve_loads(a, gi, gii, one)?;
    let (m1, m2) = solve_loads(a, gi, gii, -one)?;
    let bpsk = [(p1 - gii).norm(), (p2 - gi).norm(), (m1 - gi).norm(), (m2 - gii).norm()]
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "bpsk_degeneracy",
        value: bpsk,
        tol: SWAP_TOL,
    });

    checks.push(Check {
        name: "energy_balance",
        value: (d.powers.p_b1 + d.powers.p_b2 - (1.0 - t.gamma_tot.norm_sqr())).abs(),
        tol: ENERGY_TOL,
    });
    Ok(checks)
}

fn failures_of(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.pass())
        .map(|c| format!("{} = {:.3e} exceeds {:.1e}", c.name, c.value, c.tol))
        .collect()
}

fn return_loss_db(g: Complex64) -> f64 {
    -20.0 * g.norm().log10()
}

fn synth(d: &Design, s: &Settings, seed: u64) -> CliResult<(Report, Outcome)> {
    let res = resolve(d, s)?;
    let des = design(&res, &s.tol)?;
    let checks = structural_checks(&des, &s.tol, DEFAULT_SAMPLES, seed)?;
    let failures = failures_of(&checks);

    let mut r = Report::new("synth");
    design_meta(&mut r, &res.net, res.constellation.order());
    r.meta("x_i", res.x_i)
        .meta("x_ii", reactance_cell(des.pair.x_ii()))
        .meta("theta_i", des.pair.theta_i)
        .meta("theta_ii", des.pair.theta_ii)
        .meta("partner_residual", des.pair.residual)
        .meta("gamma_tot", des.table.gamma_tot)
        .meta("gamma_tot_mag", des.table.gamma_tot.norm())
        .meta("return_loss_db", return_loss_db(des.table.gamma_tot))
        .meta("p_b1", des.powers.p_b1)
        .meta("p_b2", des.powers.p_b2)
        .meta("r", des.powers.r)
        .meta("verified", failures.is_empty());
    r.column("state")
        .complex_column("s_r")
        .column("s_r_phase_deg")
        .complex_column("gamma1")
        .complex_column("gamma2")
        .column("x1")
        .column("x2")
        .column("gamma_tot_mag")
        .column("return_loss_db")
        .column("r");
    for e in &des.table.entries {
        let g = des.a.total_reflection(e.gamma1, e.gamma2)?;
        r.push_row(vec![
            e.state.into(),
            e.ratio.value.into(),
            (e.ratio.value.arg().rem_euclid(2.0 * PI).to_degrees()).into(),
            e.gamma1.into(),
            e.gamma2.into(),
            reactance_cell(e.load1.reactance()),
            reactance_cell(e.load2.reactance()),
            g.norm().into(),
            return_loss_db(g).into(),
            des.powers.r.into(),
        ]);
    }
    Ok((r, Outcome { failures }))
}

fn sweep(d: &Design, s: &Settings, range: &str) -> CliResult<(Report, Outcome)> {
    let grid = parse_grid(range, "reactance range")?;
    let res = resolve(d, s)?;
    let a = radiator(&res.net, &s.tol)?;
    let table = sweep_reactances(&a, &grid, &res.constellation)?;
    let m = res.constellation.order();

    let mut r = Report::new("sweep");
    design_meta(&mut r, &res.net, m);
    let ok: Vec<_> = table.rows.iter().filter(|row| row.ok()).collect();
    let spread = |vals: Vec<f64>| -> Option<f64> {
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
        (!vals.is_empty() && scale > 0.0).then(|| (max - min) / scale)
    };
    r.meta("n_points", table.rows.len())
        .meta("n_failed", table.rows.len() - ok.len())
        .meta("r_relative_spread", spread(ok.iter().filter_map(|row| row.r).collect()))
        .meta(
            "gamma_tot_relative_spread",
            spread(ok.iter().filter_map(|row| row.gamma_tot_mag).collect()),
        );
    r.column("x_i").column("status").column("error").column("x_ii");
    let names: Vec<(String, String)> = (1..=m).map(|k| (format!("x1_state{k}"), format!("x2_state{k}"))).collect();
    for (n1, n2) in &names {
        r.column(n1).column(n2);
    }
    r.column("gamma_tot_mag").column("return_loss_db").column("r").column("multiple_roots");
    for row in &table.rows {
        let mut cells: Vec<Cell> = vec![
            row.x_i.into(),
            if row.ok() { "ok" } else { "failed" }.into(),
            row.error.clone().into(),
            if row.ok() { reactance_cell(row.x_ii) } else { Cell::Empty },
        ];
        if row.ok() {
            for st in &row.states {
                cells.push(reactance_cell(st.x1));
                cells.push(reactance_cell(st.x2));
            }
        } else {
            cells.extend((0..2 * m).map(|_| Cell::Empty));
        }
        cells.extend([
            row.gamma_tot_mag.into(),
            row.return_loss_db.into(),
            row.r.into(),
            row.multiple_roots.into(),
        ]);
        r.push_row(cells);
    }
    let failures = if ok.is_empty() {
        vec!["no grid point produced a reactive design".to_string()]
    } else {
        Vec::new()
    };
    Ok((r, Outcome { failures }))
}

fn verify(d: &Design, s: &Settings, samples: usize, seed: u64) -> CliResult<(Report, Outcome)> {
    let res = resolve(d, s)?;
    let tol = &s.tol;
    if res.net.n_ports() != 3 {
        return Err(CliError::Input(format!("expected 3 ports: got a {}-port network", res.net.n_ports())));
    }
    let mut checks = vec![
        Check {
            name: "passivity",
            value: (-res.net.passivity_margin()).max(0.0),
            tol: tol.passivity,
        },
        Check {
            name: "symmetry",
            value: symmetry_residual(&res.net),
            tol: tol.symmetry,
        },
    ];
    let mut r = Report::new("verify");
    design_meta(&mut r, &res.net, res.constellation.order());
    r.meta("x_i", res.x_i).meta("samples", samples).meta("seed", seed);
    if checks.iter().all(Check::pass) {
        let des = design(&res, tol)?;
        checks.extend(structural_checks(&des, tol, samples, seed)?);
        r.meta("gamma_tot", des.table.gamma_tot)
            .meta("return_loss_db", return_loss_db(des.table.gamma_tot))
            .meta("r", des.powers.r);
    }
    let mut failures = failures_of(&checks);
    if let Err(e) = reduce_symmetric(&res.net, tol.symmetry) {
        r.meta("symmetry_violation", e.to_string());
        failures.push(e.to_string());
    }
    r.column("check").column("value").column("tol").column("pass");
    for c in &checks {
        r.push_row(vec![c.name.into(), c.value.into(), c.tol.into(), c.pass().into()]);
    }
    Ok((r, Outcome { failures }))
}

fn capacity(d: &Design, s: &Settings, cfg: &ChannelConfig, raw: bool) -> CliResult<(Report, Outcome)> {
    let res = resolve(d, s)?;
    let des = design(&res, &s.tol)?;
    let lossless = des.powers;
    let powers = if raw {
        lossless
    } else {
        let mean = 0.5 * (lossless.p_b1 + lossless.p_b2);
        BasisPowerReport {
            p_b1: lossless.p_b1 / mean,
            p_b2: lossless.p_b2 / mean,
            r: lossless.r,
        }
    };
    let result = capacity_curves(&powers, cfg)?;

    let mut r = Report::new("capacity");
    design_meta(&mut r, &res.net, res.constellation.order());
    r.meta("x_i", res.x_i)
        .meta("seed", cfg.seed)
        .meta("n_realizations", cfg.n_realizations)
        .meta("n_symbols", cfg.n_symbols)
        .meta("efficiency", cfg.efficiency)
        .meta("p_in", cfg.p_in)
        .meta("normalized_powers", !raw)
        .meta("p_b1", result.p_b1)
        .meta("p_b2", result.p_b2)
        .meta("r", lossless.r)
        .meta("snr_definition", result.snr_definition)
        .meta("estimator", result.estimator);
    r.column("snr_db")
        .column("gaussian_capacity")
        .column("qpsk_mi")
        .column("iid_gaussian_capacity")
        .column("iid_qpsk_mi")
        .column("siso_capacity")
        .column("siso_qpsk_mi");
    for row in &result.rows {
        r.push_row(vec![
            row.snr_db.into(),
            row.gaussian_capacity.into(),
            row.qpsk_mi.into(),
            row.iid_gaussian_capacity.into(),
            row.iid_qpsk_mi.into(),
            row.siso_capacity.into(),
            row.siso_qpsk_mi.into(),
        ]);
    }
    Ok((r, Outcome { failures: Vec::new() }))
}

//! Touchstone version 1 reader and writer (`.s1p`, `.s2p`, `.s3p`, ...).
//!
//! Only S-parameters are accepted. Each frequency record holds
//! `1 + 2 N^2` numbers; for three or more ports the record is written one
//! matrix row per line with at most four pairs per line, and rows may wrap.
//! Two-port records use the historical `S11 S21 S12 S22` column order.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ScatteringMatrix;
use crate::error::{Error, Result};

/// Number representation of the parameter pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberFormat {
    /// Real and imaginary parts.
    Ri,
    /// Linear magnitude and angle in degrees.
    Ma,
    /// Magnitude in dB (20 log10) and angle in degrees.
    Db,
}

impl NumberFormat {
    fn keyword(self) -> &'static str {
        match self {
            NumberFormat::Ri => "RI",
            NumberFormat::Ma => "MA",
            NumberFormat::Db => "DB",
        }
    }

    fn decode(self, a: f64, b: f64) -> Complex64 {
        match self {
            NumberFormat::Ri => Complex64::new(a, b),
            NumberFormat::Ma => Complex64::from_polar(a, b.to_radians()),
            NumberFormat::Db => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
        }
    }

    fn encode(self, z: Complex64) -> (f64, f64) {
        match self {
            NumberFormat::Ri => (z.re, z.im),
            NumberFormat::Ma => (z.norm(), z.arg().to_degrees()),
            NumberFormat::Db => {
                let db = if z.norm() > 0.0 {
                    20.0 * z.norm().log10()
                } else {
                    DB_FLOOR
                };
                (db, z.arg().to_degrees())
            }
        }
    }
}

impl FromStr for NumberFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "RI" => Ok(NumberFormat::Ri),
            "MA" => Ok(NumberFormat::Ma),
            "DB" => Ok(NumberFormat::Db),
            other => Err(Error::InvalidInput(format!("unknown number format {other:?}"))),
        }
    }
}

/// Magnitude written for an exact zero in DB format.
const DB_FLOOR: f64 = -1000.0;

const MAX_PAIRS_PER_LINE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
struct OptionLine {
    freq_scale: f64,
    format: NumberFormat,
    z0: f64,
}

impl Default for OptionLine {
    fn default() -> Self {
        OptionLine {
            freq_scale: 1e9,
            format: NumberFormat::Ma,
            z0: 50.0,
        }
    }
}

fn parse_option_line(body: &str, line: usize) -> Result<OptionLine> {
    let err = |message: String| Error::Parse { line, message };
    let mut opt = OptionLine::default();
    let mut tokens = body.split_whitespace();
    while let Some(tok) = tokens.next() {
        match tok.to_ascii_uppercase().as_str() {
            "HZ" => opt.freq_scale = 1.0,
            "KHZ" => opt.freq_scale = 1e3,
            "MHZ" => opt.freq_scale = 1e6,
            "GHZ" => opt.freq_scale = 1e9,
            "S" => {}
            p @ ("Y" | "Z" | "H" | "G") => {
                return Err(err(format!("parameter type {p} is not supported, only S")));
            }
            "RI" => opt.format = NumberFormat::Ri,
            "MA" => opt.format = NumberFormat::Ma,
            "DB" => opt.format = NumberFormat::Db,
            "R" => {
                let value = tokens
                    .next()
                    .ok_or_else(|| err("option line: R without a resistance value".into()))?;
                let r: f64 = value
                    .parse()
                    .map_err(|_| err(format!("option line: invalid resistance {value:?}")))?;
                if !(r.is_finite() && r > 0.0) {
                    return Err(err(format!("option line: resistance must be positive, got {r}")));
                }
                opt.z0 = r;
            }
            _ => return Err(err(format!("option line: unrecognized token {tok:?}"))),
        }
    }
    Ok(opt)
}

/// Position of entry `k` of a record's parameter list in the matrix.
fn entry_position(n_ports: usize, k: usize) -> (usize, usize) {
    if n_ports == 2 {
        // S11 S21 S12 S22
        [(0, 0), (1, 0), (0, 1), (1, 1)][k]
    } else {
        (k / n_ports, k % n_ports)
    }
}

/// Parses a Touchstone v1 file holding `expected_ports`-port S-parameters.
///
/// Returns one matrix per frequency point, in file order.
pub fn parse_touchstone(text: &str, expected_ports: usize) -> Result<Vec<ScatteringMatrix>> {
    if expected_ports == 0 {
        return Err(Error::InvalidInput("port count must be positive".into()));
    }
    let record_len = 1 + 2 * expected_ports * expected_ports;
    let mut option: Option<OptionLine> = None;
    let mut record: Vec<f64> = Vec::with_capacity(record_len);
    let mut record_line = 0usize;
    let mut raw: Vec<(usize, Vec<f64>)> = Vec::new();

    for (idx, full_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = full_line.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            return Err(Error::Parse {
                line,
                message: format!("Touchstone 2 keyword {content:?} is not supported"),
            });
        }
        if let Some(body) = content.strip_prefix('#') {
            if option.is_some() {
                // Only the first option line counts.
                continue;
            }
            if !raw.is_empty() || !record.is_empty() {
                return Err(Error::Parse {
                    line,
                    message: "option line after network data".into(),
                });
            }
            option = Some(parse_option_line(body, line)?);
            continue;
        }
        if option.is_none() {
            return Err(Error::Parse {
                line,
                message: "network data before the option line".into(),
            });
        }

        let tokens: Vec<&str> = content.split_whitespace().collect();
        for (t, tok) in tokens.iter().enumerate() {
            let value: f64 = tok.parse().map_err(|_| Error::Parse {
                line,
                message: format!("non-numeric token {tok:?}"),
            })?;
            if record.is_empty() {
                if t != 0 {
                    return Err(Error::PortCount {
                        expected: expected_ports,
                        detail: format!(
                            "line {line}: frequency record does not start a new line \
                             ({record_len} values per frequency expected)"
                        ),
                    });
                }
                record_line = line;
            }
            record.push(value);
            if record.len() == record_len {
                raw.push((record_line, std::mem::take(&mut record)));
                if t + 1 != tokens.len() {
                    return Err(Error::PortCount {
                        expected: expected_ports,
                        detail: format!(
                            "line {line}: {} extra values after a complete {record_len}-value record",
                            tokens.len() - t - 1
                        ),
                    });
                }
            }
        }
    }

    if !record.is_empty() {
        return Err(Error::PortCount {
            expected: expected_ports,
            detail: format!(
                "line {record_line}: incomplete record with {} of {record_len} values",
                record.len()
            ),
        });
    }
    let opt = option.ok_or(Error::Parse {
        line: 0,
        message: "missing option line".into(),
    })?;
    if raw.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no network data".into(),
        });
    }

    let mut nets = Vec::with_capacity(raw.len());
    let mut prev_freq = f64::NEG_INFINITY;
    for (line, values) in raw {
        let freq = values[0] * opt.freq_scale;
        if !(freq.is_finite() && freq >= 0.0) {
            return Err(Error::Parse {
                line,
                message: format!("invalid frequency {}", values[0]),
            });
        }
        if freq <= prev_freq {
            let hint = if expected_ports == 2 {
                " (noise parameter blocks are not supported)"
            } else {
                ""
            };
            return Err(Error::Parse {
                line,
                message: format!("frequencies must be strictly increasing{hint}"),
            });
        }
        prev_freq = freq;

        let mut entries = DMatrix::zeros(expected_ports, expected_ports);
        for (k, pair) in values[1..].chunks_exact(2).enumerate() {
            entries[entry_position(expected_ports, k)] = opt.format.decode(pair[0], pair[1]);
        }
        let net = ScatteringMatrix::new(entries, opt.z0, Some(freq)).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        nets.push(net);
    }
    Ok(nets)
}

/// Writes networks as a Touchstone v1 file in RI format.
pub fn serialize_touchstone(nets: &[ScatteringMatrix]) -> Result<String> {
    serialize_touchstone_with(nets, NumberFormat::Ri)
}

/// Writes networks as a Touchstone v1 file in the given number format.
///
/// Values are written with the shortest decimal text that parses back to the
/// same `f64`, so RI output round-trips exactly. Frequencies are written in Hz;
/// a missing frequency is written as 0.
pub fn serialize_touchstone_with(nets: &[ScatteringMatrix], format: NumberFormat) -> Result<String> {
    let first = nets
        .first()
        .ok_or_else(|| Error::InvalidInput("no networks to serialize".into()))?;
    let n = first.n_ports();
    let z0 = first.z0();
    let mut prev = f64::NEG_INFINITY;
    for net in nets {
        if net.n_ports() != n {
            return Err(Error::InvalidInput(format!(
                "inconsistent port counts: {} and {}",
                n,
                net.n_ports()
            )));
        }
        if net.z0() != z0 {
            return Err(Error::InvalidInput(format!(
                "inconsistent reference impedances: {} and {}",
                z0,
                net.z0()
            )));
        }
        let f = net.freq().unwrap_or(0.0);
        if f <= prev {
            return Err(Error::InvalidInput(
                "frequencies must be strictly increasing".into(),
            ));
        }
        prev = f;
    }

    let mut out = String::new();
    let _ = writeln!(out, "! {n}-port S-parameters");
    let _ = writeln!(out, "# HZ S {} R {:?}", format.keyword(), z0);
    for net in nets {
        let pairs: Vec<(f64, f64)> = (0..n * n)
            .map(|k| format.encode(net.entries()[entry_position(n, k)]))
            .collect();
        let freq = net.freq().unwrap_or(0.0);
        let _ = write!(out, "{freq:?}");
        if n <= 2 {
            for (a, b) in &pairs {
                let _ = write!(out, "\t{a:?}\t{b:?}");
            }
            out.push('\n');
            continue;
        }
        for (row, row_pairs) in pairs.chunks(n).enumerate() {
            for (chunk_idx, chunk) in row_pairs.chunks(MAX_PAIRS_PER_LINE).enumerate() {
                if row > 0 || chunk_idx > 0 {
                    out.push('\t');
                }
                for (a, b) in chunk {
                    let _ = write!(out, "\t{a:?}\t{b:?}");
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

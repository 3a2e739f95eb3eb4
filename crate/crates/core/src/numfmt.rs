//! Fixed-precision text rendering of real and complex values.
//!
//! All report outputs go through these helpers so that the JSON and CSV
//! encodings of one run carry the same decimal values.

use num_complex::Complex64;

/// Significant digits used for every numeric value written by the CLI.
pub const SIG_DIGITS: usize = 12;

/// Rounds `x` to [`SIG_DIGITS`] significant decimal digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Shortest decimal text of the rounded value, in exponent form outside
/// `[1e-5, 1e15)`.
pub fn fmt_real(x: f64) -> String {
    let r = round_sig(x);
    if r.is_nan() {
        "nan".to_string()
    } else if r.is_infinite() {
        if r > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if r != 0.0 && !(1e-5..1e15).contains(&r.abs()) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Rectangular `a+bj` form, both parts rounded to [`SIG_DIGITS`].
pub fn fmt_complex(z: Complex64) -> String {
    let im = round_sig(z.im);
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}j", fmt_real(z.re), sign, fmt_real(im.abs()))
}

/// Parses the output of [`fmt_complex`] (or any `a+bj` / `a-bj` literal).
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let t = text.trim();
    let body = t.strip_suffix('j')?;
    // Split at the last sign that is not part of an exponent or the leading sign.
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let i = split?;
    let re: f64 = body[..i].parse().ok()?;
    let im: f64 = body[i..].parse().ok()?;
    Some(Complex64::new(re, im))
}

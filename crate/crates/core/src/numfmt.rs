//! Fixed-width number formatting for reproducible CLI output.

/// Significant digits in every printed number.
pub const SIG_DIGITS: usize = 9;

/// Formats `v` with nine significant digits, switching to lowercase
/// scientific notation when `|v| < 1e−4` or `|v| ≥ 1e6`. Zero prints as `0`.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    // Round once in scientific form so the exponent reflects any carry.
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        return format!("{mantissa}e{exp}");
    }
    let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
    format!("{:.*}", decimals, v)
}

/// `v` rounded to what [`fmt_sig`] prints.
pub fn round_sig(v: f64) -> f64 {
    fmt_sig(v).parse().unwrap_or(v)
}

//! Locale-free number formatting for CSV output.

/// Significant digits used in every CSV file.
pub const CSV_DIGITS: usize = 12;

/// Formats `v` like C's `%.{digits}g`: `digits` significant digits, trailing
/// zeros dropped, scientific notation for exponents below -4 or at least
/// `digits`.
pub fn sig(v: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    // Rounding to `digits` may bump the exponent (9.99.. -> 1.0e+1), so take
    // it from the rounded scientific form.
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");

    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

/// [`sig`] with [`CSV_DIGITS`].
pub fn csv_num(v: f64) -> String {
    sig(v, CSV_DIGITS)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

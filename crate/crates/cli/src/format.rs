//! Number formatting for CSV output: 10 significant digits, `NA` for absent
//! values.

/// Token written for absent values.
pub const NA: &str = "NA";

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Formats `x` with 10 significant digits in the style of C's `%.10g`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "Inf".into() } else { "-Inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..10).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs());
    }
    let decimals = (9 - exp).max(0) as usize;
    trim_fraction(&format!("{x:.decimals$}")).to_string()
}

pub fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), num)
}

/// Column label for a probability, e.g. `0.25`.
pub fn prob_label(p: f64) -> String {
    num(p)
}

use std::ops::RangeInclusive;

/// `x` with 12 significant digits, trailing zeros dropped.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{}", if x == 0.0 { 0.0 } else { x });
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.11e}");
        match s.split_once('e') {
            Some((mantissa, e)) => format!("{}e{e}", trim_zeros(mantissa.to_string())),
            None => s,
        }
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Text form of a spectrum entry: eigenvalues below `1e-12` relative to the
/// largest one print as `0`.
pub fn sig12_clean(x: f64, scale: f64) -> String {
    if x.abs() <= 1e-12 * scale.max(1.0) {
        "0".into()
    } else {
        sig12(x)
    }
}

/// Parses `a`, `a..b`, `a..=b` or a comma-separated list of those.
pub fn parse_range(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if part.is_empty() {
            return Err(format!("empty item in range {text:?}"));
        }
        if let Some((lo, hi)) = part.split_once("..=") {
            out.extend(bounds(lo, hi, part)?);
        } else if let Some((lo, hi)) = part.split_once("..") {
            let r = bounds(lo, hi, part)?;
            if r.is_empty() || r.start() == r.end() {
                return Err(format!("empty range {part:?}"));
            }
            out.extend(*r.start()..*r.end());
        } else {
            out.push(number(part)?);
        }
    }
    Ok(out)
}

fn bounds(lo: &str, hi: &str, part: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = (number(lo)?, number(hi)?);
    if lo > hi {
        return Err(format!("empty range {part:?}"));
    }
    Ok(lo..=hi)
}

fn number(s: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("not a non-negative integer: {s:?}"))
}

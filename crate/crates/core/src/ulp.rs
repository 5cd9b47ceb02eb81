//! Unit-in-the-last-place helpers and hexadecimal float literals.

/// Spacing to the next representable double above `|v|`.
pub fn ulp(v: f64) -> f64 {
    let a = v.abs();
    if !a.is_finite() {
        return f64::NAN;
    }
    a.next_up() - a
}

/// Error of `v_hat` in ulps of the reference, `|v̂ − v_ref| / (nextUp(v_ref) − v_ref)`.
pub fn ulp_error(v_hat: f64, v_ref: f64) -> f64 {
    (v_hat - v_ref).abs() / (v_ref.next_up() - v_ref)
}

/// Lossless hexadecimal rendering, e.g. `0x1.999999999999ap-4`.
pub fn to_hex(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    if exp == 0 && mant == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, e) = if exp == 0 { (0, -1022) } else { (1, exp - 1023) };
    let mut digits = format!("{mant:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    if digits.is_empty() {
        format!("{sign}0x{lead}p{e:+}")
    } else {
        format!("{sign}0x{lead}.{digits}p{e:+}")
    }
}

/// Parses a decimal or hexadecimal (`0x1.8p-3`) float literal.
pub fn parse_f64(s: &str) -> Option<f64> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    if body.starts_with("0x") || body.starts_with("0X") {
        let mut lit = body.to_ascii_lowercase();
        if !lit.contains('p') {
            lit.push_str("p0");
        }
        let v = hexf_parse::parse_hexf64(&lit, false).ok()?;
        return Some(if neg { -v } else { v });
    }
    t.parse::<f64>().ok()
}

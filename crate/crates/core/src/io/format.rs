/// Renders `v` as a plain decimal with at most `digits` significant digits.
///
/// No exponent notation and no trailing zeros, so the text is identical on
/// every platform.
pub fn decimal(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i64 = exp.parse().expect("integer exponent");
    let mant: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let point = exp + 1;
    let mut out = String::new();
    if v < 0.0 {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&mant);
    } else if point as usize >= mant.len() {
        out.push_str(&mant);
        out.extend(std::iter::repeat_n('0', point as usize - mant.len()));
    } else {
        out.push_str(&mant[..point as usize]);
        out.push('.');
        out.push_str(&mant[point as usize..]);
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

/// Twelve significant digits, the precision used in every emitted document.
pub fn decimal12(v: f64) -> String {
    decimal(v, 12)
}

/// Fraction as a percent string with `places` decimals.
pub fn percent(v: f64, places: usize) -> String {
    format!("{:.*}", places, v * 100.0)
}

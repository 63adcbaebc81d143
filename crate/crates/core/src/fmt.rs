//! Round-trip-safe number formatting used by every text output.

/// 17 significant digits; positional for decimal exponents in `[-5, 16]`,
/// scientific otherwise. Non-finite values print as `nan`, `inf`, `-inf`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let e: i32 = exp.parse().expect("integer exponent");
    if !(-5..=16).contains(&e) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if e >= 0 {
        let split = e as usize + 1;
        let (int, frac) = digits.split_at(split);
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{sign}{int}.{frac}")
    } else {
        format!("{sign}0.{}{digits}", "0".repeat((-e - 1) as usize))
    }
}

/// Like [`num`], but `None` prints as an empty field.
pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [
            0.1,
            6.0 / 7.0,
            -1e-300,
            12345.678,
            f64::MIN_POSITIVE,
            0.0,
            -0.0,
            9.999999999999999e15,
            1e17,
            -2.5e-5,
            1.0 - 1e-16,
            f64::MAX,
        ] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x, "{}", num(x));
        }
    }

    #[test]
    fn layouts() {
        assert_eq!(num(6.0 / 7.0), "0.85714285714285710");
        assert_eq!(num(-2.0), "-2.0000000000000000");
        assert_eq!(num(2f64.powi(-20)), "9.5367431640625000e-7");
        assert_eq!(num(1.5e-5), "0.000015000000000000000");
        assert_eq!(num(1e16), "10000000000000000.0");
        assert_eq!(num(f64::NAN), "nan");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
    }
}

//! Exact-rational helpers for density thresholds.
//!
//! Density comparisons near a tolerance boundary must not depend on float
//! rounding, so densities and tolerances travel as `Ratio<i64>` built from
//! decimal strings (`"0.45"` ⇒ 9/20), not from `f64` bit patterns.

use crate::{Error, Result};
use num_rational::Ratio;

pub type Rat = Ratio<i64>;

/// Parses `"3/4"`, `"0.45"`, `"2"`, or `"-0.5"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::invalid("empty rational"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad numerator '{num}'")))?;
        let d: i64 = den
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad denominator '{den}'")))?;
        if d == 0 {
            return Err(Error::invalid("zero denominator"));
        }
        return Ok(Ratio::new(n, d));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::invalid(format!("bad rational '{s}'")));
    }
    let digits = |t: &str| -> Result<i64> {
        if t.is_empty() {
            return Ok(0);
        }
        if !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::invalid(format!("bad digits '{t}' in '{s}'")));
        }
        t.parse()
            .map_err(|_| Error::invalid(format!("bad digits '{t}' in '{s}'")))
    };
    let whole = digits(int_part)?;
    let frac = digits(frac_part)?;
    let scale = 10i64
        .checked_pow(frac_part.len() as u32)
        .ok_or_else(|| Error::invalid(format!("too many decimal places in '{s}'")))?;
    Ok(Ratio::new(sign * (whole * scale + frac), scale))
}

/// Lossy view for display and diagnostics only — never for comparisons.
pub fn to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), Ratio::new(3, 4));
        assert_eq!(parse_rational("0.45").unwrap(), Ratio::new(9, 20));
        assert_eq!(parse_rational("2").unwrap(), Ratio::new(2, 1));
        assert_eq!(parse_rational("-0.5").unwrap(), Ratio::new(-1, 2));
        assert_eq!(parse_rational(".25").unwrap(), Ratio::new(1, 4));
        assert_eq!(parse_rational("1.").unwrap(), Ratio::new(1, 1));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "a", "1/0", "1.2.3", "--1", "0x2"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }
}

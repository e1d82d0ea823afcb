//! Parsers for command-line values.

use std::collections::BTreeMap;

use graphfn::rational::{parse_rational, to_f64};
use num_complex::Complex64;

fn real(text: &str) -> Result<f64, String> {
    let text = text.trim();
    if let Some(r) = parse_rational(text) {
        return Ok(to_f64(&r));
    }
    text.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("invalid number `{text}`"))
}

/// `i`, `-2i`, `0.5+0.75i`, `1/2-3/4i`, `2`, or `re,im`.
pub fn complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((re, im)) = t.split_once(',') {
        return Ok(Complex64::new(real(re)?, real(im)?));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(real(&t)?, 0.0));
    };
    // split before the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => real(other)?,
    };
    Ok(Complex64::new(re, im))
}

/// `name=k` with a non-negative integer `k`.
pub fn derivative_order(text: &str) -> Result<(String, u32), String> {
    let (name, k) = text
        .split_once('=')
        .ok_or_else(|| format!("expected <edge>=<order>, got `{text}`"))?;
    let k = k
        .trim()
        .parse::<u32>()
        .map_err(|_| format!("invalid derivative order `{k}`"))?;
    Ok((name.trim().to_string(), k))
}

/// `a,b=value`, or `ab=value` for one-character labels.
pub fn distance(text: &str) -> Result<((String, String), f64), String> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected <label>,<label>=<value>, got `{text}`"))?;
    let pair = match key.split_once(',') {
        Some((a, b)) => (a.trim().to_string(), b.trim().to_string()),
        None => {
            let chars: Vec<char> = key.trim().chars().collect();
            if chars.len() != 2 {
                return Err(format!("cannot split `{key}` into two labels; use a,b=value"));
            }
            (chars[0].to_string(), chars[1].to_string())
        }
    };
    Ok((pair, real(value)?))
}

pub fn distances(items: &[String]) -> Result<BTreeMap<(String, String), f64>, String> {
    items.iter().map(|s| distance(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(complex("0.5+0.75i").unwrap(), Complex64::new(0.5, 0.75));
        assert_eq!(complex("1/2 - 3/4i").unwrap(), Complex64::new(0.5, -0.75));
        assert_eq!(complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(complex("-3i").unwrap(), Complex64::new(0.0, -3.0));
        assert_eq!(complex("1e-1+2e+1i").unwrap(), Complex64::new(0.1, 20.0));
        assert_eq!(complex("0.25,-1").unwrap(), Complex64::new(0.25, -1.0));
        assert!(complex("x").is_err());
    }

    #[test]
    fn orders_and_distances() {
        assert_eq!(derivative_order("e1=2").unwrap(), ("e1".into(), 2));
        assert!(derivative_order("e1=-1").is_err());
        assert_eq!(distance("0z=2").unwrap(), (("0".into(), "z".into()), 2.0));
        assert_eq!(distance("a,bc=1/4").unwrap(), (("a".into(), "bc".into()), 0.25));
        assert!(distance("abc=1").is_err());
    }
}

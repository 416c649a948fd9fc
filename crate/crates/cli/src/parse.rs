use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;

/// Parses `1.5`, `-i`, `2i`, `1-2.5i`, `3e-2+1e1i`.
pub fn complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        bail!("empty complex number");
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(t.parse().with_context(|| format!("bad number '{s}'"))?, 0.0));
    };
    // split before the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() { 0.0 } else { re.parse().with_context(|| format!("bad real part in '{s}'"))? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse().with_context(|| format!("bad imaginary part in '{s}'"))?,
    };
    Ok(Complex64::new(re, im))
}

pub fn complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(complex).collect()
}

pub fn real_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("bad coordinate '{p}'")))
        .collect()
}

/// `key=value` override for one tolerance.
pub fn tolerance(s: &str) -> Result<(String, f64)> {
    let (k, v) = s.split_once('=').ok_or_else(|| anyhow!("expected KEY=VALUE, got '{s}'"))?;
    let v: f64 = v.parse().with_context(|| format!("bad tolerance value '{v}'"))?;
    if !(v > 0.0) {
        bail!("tolerance {k} must be positive");
    }
    Ok((k.to_string(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let cases = [
            ("i", (0.0, 1.0)),
            ("-i", (0.0, -1.0)),
            ("2i", (0.0, 2.0)),
            ("0", (0.0, 0.0)),
            ("-1.5", (-1.5, 0.0)),
            ("1+2i", (1.0, 2.0)),
            ("1-i", (1.0, -1.0)),
            ("3e-2+1e1i", (0.03, 10.0)),
            ("-2e-1-4e-3i", (-0.2, -0.004)),
        ];
        for (s, (re, im)) in cases {
            assert_eq!(complex(s).unwrap(), Complex64::new(re, im), "{s}");
        }
        assert!(complex("x").is_err());
        assert!(complex("").is_err());
        assert!(complex("1+xi").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(complex_list("i,0").unwrap(), vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(real_list("1, -1").unwrap(), vec![1.0, -1.0]);
        assert!(tolerance("sub=0").is_err());
        assert_eq!(tolerance("sub=1e-6").unwrap(), ("sub".to_string(), 1e-6));
    }
}

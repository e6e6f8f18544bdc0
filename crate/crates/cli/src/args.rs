use num_complex::Complex64;

use povmkit::arcs::parse_angle;

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i` and polar `r@θ` (θ may use `pi`).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number '{s}'");
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((r, theta)) = t.split_once('@') {
        let r: f64 = r.parse().map_err(|_| bad())?;
        let theta = parse_angle(theta, false).map_err(|_| bad())?;
        return Ok(Complex64::from_polar(r, theta));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split before the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("0.5i").unwrap(), c(0.0, 0.5));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("0.3-0.2i").unwrap(), c(0.3, -0.2));
        assert_eq!(parse_complex("1e-3+2e-3i").unwrap(), c(1e-3, 2e-3));
        let p = parse_complex("2@pi/2").unwrap();
        assert!((p - c(0.0, 2.0)).norm() < 1e-15);
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }
}

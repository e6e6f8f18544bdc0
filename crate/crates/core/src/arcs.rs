//! Finite unions of half-open arcs of the circle `[0, 2π)`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Sorted, pairwise disjoint, non-adjacent half-open arcs `[a, b)` with
/// `0 <= a < b <= 2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSet {
    arcs: Vec<(f64, f64)>,
}

impl ArcSet {
    /// Canonicalizes arbitrary `[a, b)` pairs: endpoints are reduced mod 2π,
    /// wrapped arcs are split at 0, and overlaps are merged.
    pub fn new<I: IntoIterator<Item = (f64, f64)>>(arcs: I) -> Result<Self> {
        let mut pieces = Vec::new();
        for (a, b) in arcs {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidParameter(format!("non-finite arc [{a}, {b})")));
            }
            if b < a {
                return Err(Error::InvalidParameter(format!("arc [{a}, {b}) has b < a")));
            }
            if b == a {
                continue;
            }
            if b - a >= TAU {
                return Ok(Self::full());
            }
            let start = a.rem_euclid(TAU);
            let end = start + (b - a);
            if end <= TAU {
                pieces.push((start, end));
            } else {
                pieces.push((start, TAU));
                pieces.push((0.0, end - TAU));
            }
        }
        pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(Self { arcs: merged })
    }

    pub fn full() -> Self {
        Self { arcs: vec![(0.0, TAU)] }
    }

    pub fn empty() -> Self {
        Self { arcs: Vec::new() }
    }

    pub fn single(a: f64, b: f64) -> Result<Self> {
        Self::new([(a, b)])
    }

    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs == [(0.0, TAU)]
    }

    /// Lebesgue measure `ℓ(X)`.
    pub fn length(&self) -> f64 {
        self.arcs.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, theta: f64) -> bool {
        let t = theta.rem_euclid(TAU);
        self.arcs.iter().any(|&(a, b)| a <= t && t < b)
    }

    /// `X' = [0, 2π) \ X`.
    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.arcs.len() + 1);
        let mut cursor = 0.0;
        for &(a, b) in &self.arcs {
            if a > cursor {
                out.push((cursor, a));
            }
            cursor = b;
        }
        if cursor < TAU {
            out.push((cursor, TAU));
        }
        Self { arcs: out }
    }

    /// `X ∔ x`: rotation by `x` modulo 2π.
    pub fn shift(&self, x: f64) -> Self {
        Self::new(self.arcs.iter().map(|&(a, b)| (a + x, b + x)))
            .expect("rotating a valid arc set stays valid")
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(self.arcs.iter().chain(other.arcs.iter()).copied())
            .expect("union of valid arc sets is valid")
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.arcs
            .iter()
            .all(|&(a, b)| other.arcs.iter().all(|&(c, d)| b <= c || d <= a))
    }

    /// `(1/2π) ∫_X e^{ikx} dx`.
    pub fn fourier(&self, k: i64) -> Complex64 {
        if k == 0 {
            return Complex64::new(self.length() / TAU, 0.0);
        }
        let kf = k as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(a, b) in &self.arcs {
            acc += Complex64::from_polar(1.0, kf * b) - Complex64::from_polar(1.0, kf * a);
        }
        acc / Complex64::new(0.0, TAU * kf)
    }

    /// Parses `"a1:b1,a2:b2"`. Endpoints accept `pi` expressions such as
    /// `pi/2`, `3pi/4`, `1.5*pi`; with `pi_units` bare numbers are
    /// multiples of π.
    pub fn parse(s: &str, pi_units: bool) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.eq_ignore_ascii_case("empty") {
            return Ok(Self::empty());
        }
        if s.eq_ignore_ascii_case("full") {
            return Ok(Self::full());
        }
        let mut arcs = Vec::new();
        for part in s.split(',') {
            let (a, b) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("arc '{part}' is not of the form a:b")))?;
            arcs.push((parse_angle(a, pi_units)?, parse_angle(b, pi_units)?));
        }
        Self::new(arcs)
    }
}

/// `(1/2π) ∫_X e^{ikx} dx` as a free function.
pub fn arc_fourier(x: &ArcSet, k: i64) -> Complex64 {
    x.fourier(k)
}

impl fmt::Display for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.arcs.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parses a real number, optionally containing `pi`.
pub fn parse_angle(token: &str, pi_units: bool) -> Result<f64> {
    let t = token.trim().to_ascii_lowercase().replace(['*', ' '], "");
    let bad = || Error::Parse(format!("cannot parse angle '{token}'"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.to_string(), Some(d.parse::<f64>().map_err(|_| bad())?)),
        None => (t.clone(), None),
    };
    let value = if let Some(coef) = num.strip_suffix("pi") {
        let c = match coef {
            "" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        c * PI
    } else {
        let v = num.parse::<f64>().map_err(|_| bad())?;
        if pi_units {
            v * PI
        } else {
            v
        }
    };
    Ok(match den {
        Some(d) if d != 0.0 => value / d,
        Some(_) => return Err(bad()),
        None => value,
    })
}

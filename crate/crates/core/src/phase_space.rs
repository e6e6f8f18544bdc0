//! The phase-space observable `Z ↦ (1/π)∫_Z |z><z| dλ(z)` generated by the
//! vacuum, its number/angle margins, and its Cartesian margins (unsharp
//! position and momentum), all in the truncated number basis.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use num_complex::Complex64;

use crate::arcs::{parse_angle, ArcSet};
use crate::effect::{Effect, ToleranceConfig};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ComplexVector};
use crate::phase::Truncation;
use crate::quadrature::{composite_rule, integrate_with_breakpoints};
use crate::special::{erf, ln_factorial, ln_gamma, poisson_tail};
use crate::tcs::{angle_density, TcsParams};

/// Absolute tolerance of the adaptive radial quadrature.
pub const RADIAL_TOL: f64 = 1e-12;

/// Annular sector `[r1, r2) × Θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarRegion {
    r1: f64,
    r2: f64,
    angular: ArcSet,
}

impl PolarRegion {
    pub fn new(r1: f64, r2: f64, angular: ArcSet) -> Result<Self> {
        if !(r1 >= 0.0 && r1 < r2 && r1.is_finite()) || r2.is_nan() {
            return Err(Error::InvalidParameter(format!("radial interval [{r1}, {r2}) is not valid")));
        }
        Ok(Self { r1, r2, angular })
    }

    pub fn full_plane() -> Self {
        Self { r1: 0.0, r2: f64::INFINITY, angular: ArcSet::full() }
    }

    pub fn disk(r: f64) -> Result<Self> {
        Self::new(0.0, r, ArcSet::full())
    }

    pub fn sector(angular: ArcSet) -> Self {
        Self { r1: 0.0, r2: f64::INFINITY, angular }
    }

    pub fn radial(&self) -> (f64, f64) {
        (self.r1, self.r2)
    }

    pub fn angular(&self) -> &ArcSet {
        &self.angular
    }

    /// Lebesgue measure `λ(Z) = ℓ(Θ)(r2² - r1²)/2`.
    pub fn area(&self) -> f64 {
        if self.angular.is_empty() {
            return 0.0;
        }
        0.5 * self.angular.length() * (self.r2 * self.r2 - self.r1 * self.r1)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        self.r1 <= r && r < self.r2 && self.angular.contains(z.arg())
    }

    /// Parses `"r1:r2@a1:b1,a2:b2"`; without `@` the angular part is the
    /// full circle. `inf` is accepted as `r2`.
    pub fn parse(s: &str, pi_units: bool) -> Result<Self> {
        let (radial, angular) = match s.split_once('@') {
            Some((r, a)) => (r, ArcSet::parse(a, pi_units)?),
            None => (s, ArcSet::full()),
        };
        let (a, b) = radial
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("radial interval '{radial}' is not of the form r1:r2")))?;
        Self::new(parse_real(a)?, parse_real(b)?, angular)
    }
}

impl fmt::Display for PolarRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}@{}", self.r1, self.r2, self.angular)
    }
}

/// Finite union of disjoint intervals of ℝ, possibly unbounded. Endpoints are
/// immaterial for the absolutely continuous margins.
#[derive(Debug, Clone, PartialEq)]
pub struct RealRegion {
    intervals: Vec<(f64, f64)>,
}

impl RealRegion {
    pub fn new<I: IntoIterator<Item = (f64, f64)>>(intervals: I) -> Result<Self> {
        let mut v: Vec<(f64, f64)> = Vec::new();
        for (a, b) in intervals {
            if a.is_nan() || b.is_nan() || b < a {
                return Err(Error::InvalidParameter(format!("interval ({a}, {b}) is not valid")));
            }
            if a < b {
                v.push((a, b));
            }
        }
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn whole_line() -> Self {
        Self { intervals: vec![(f64::NEG_INFINITY, f64::INFINITY)] }
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new([(a, b)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_bounded(&self) -> bool {
        self.intervals.iter().all(|&(a, b)| a.is_finite() && b.is_finite())
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cursor = f64::NEG_INFINITY;
        for &(a, b) in &self.intervals {
            if a > cursor {
                out.push((cursor, a));
            }
            cursor = b;
        }
        if cursor < f64::INFINITY {
            out.push((cursor, f64::INFINITY));
        }
        Self { intervals: out }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a < x && x < b)
    }

    /// Parses `"a:b,c:d"`; `inf`, `-inf` and `pi` expressions are accepted.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") || s.eq_ignore_ascii_case("R") {
            return Ok(Self::whole_line());
        }
        if s.is_empty() || s.eq_ignore_ascii_case("empty") {
            return Ok(Self { intervals: Vec::new() });
        }
        let mut v = Vec::new();
        for part in s.split(',') {
            let (a, b) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("interval '{part}' is not of the form a:b")))?;
            v.push((parse_real(a)?, parse_real(b)?));
        }
        Self::new(v)
    }
}

impl fmt::Display for RealRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.intervals.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn parse_real(token: &str) -> Result<f64> {
    match token.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        _ => parse_angle(token, false),
    }
}

/// Cartesian axis of the phase-space variable `z = x + iy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// `<n|z> = e^{-|z|²/2} zⁿ/√n!`, evaluated in log space.
pub fn coherent_overlap(n: usize, z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return if n == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
    }
    let ln_mod = -0.5 * r * r + n as f64 * r.ln() - 0.5 * ln_factorial(n);
    Complex64::from_polar(ln_mod.exp(), n as f64 * z.arg())
}

/// Coherent state truncated to the first `d` number states (not renormalized).
pub fn coherent_state(z: Complex64, d: usize) -> ComplexVector {
    ComplexVector::from_iterator(d, (0..d).map(|n| coherent_overlap(n, z)))
}

/// Truncation heuristic `d >= s² + 10s + 10` for coherent amplitude `s`.
pub fn coherent_truncation(s: f64) -> usize {
    (s * s + 10.0 * s + 10.0).ceil().max(2.0) as usize
}

/// `(1/√(n!m!)) · 2∫_{r1}^{r2} r^{n+m+1} e^{-r²} dr`.
pub fn radial_factor(n: usize, m: usize, r1: f64, r2: f64) -> Result<f64> {
    let k = n + m;
    let ln_norm = -0.5 * (ln_factorial(n) + ln_factorial(m));
    if k % 2 == 0 {
        // ½∫ u^{k/2} e^{-u} du over [r1², r2²] is a regularized gamma difference
        let j = k / 2;
        let scale = (ln_factorial(j) + ln_norm).exp();
        let upper = if r2.is_infinite() { 1.0 } else { poisson_tail(j, r2 * r2) };
        let lower = poisson_tail(j, r1 * r1);
        return Ok(scale * (upper - lower));
    }
    if r1 == 0.0 && r2.is_infinite() {
        return Ok((ln_gamma(k as f64 / 2.0 + 1.0) + ln_norm).exp());
    }
    let p = (k + 1) as f64;
    let integrand = |r: f64| {
        if r <= 0.0 {
            0.0
        } else {
            2.0 * (p * r.ln() - r * r + ln_norm).exp()
        }
    };
    let peak = (p / 2.0).sqrt();
    let hi = r2.min(peak.max(r1) + 12.0);
    let mut points = vec![r1];
    if peak > r1 && peak < hi {
        points.push(peak);
    }
    points.push(hi);
    integrate_with_breakpoints(integrand, &points, RADIAL_TOL)
}

fn assemble(d: usize, entry: impl Fn(usize, usize) -> Result<Complex64>) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let v = entry(i, j)?;
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    Ok(m)
}

/// `<n|A(Z)|m> = arc_fourier(Θ, n-m) · radial_factor(n, m)`.
pub fn phase_space_matrix(z: &PolarRegion, d: usize) -> Result<ComplexMatrix> {
    let (r1, r2) = z.radial();
    let theta = z.angular();
    let coeffs: Vec<Complex64> = (0..d as i64).map(|k| theta.fourier(-k)).collect();
    assemble(d, |n, m| {
        let f = coeffs[m - n];
        if f.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(f * radial_factor(n, m, r1, r2)?)
    })
}

pub fn phase_space_effect(z: &PolarRegion, d: Truncation) -> Result<Effect> {
    Effect::validate(phase_space_matrix(z, d.dim())?, &ToleranceConfig::default())
}

/// Number margin `A^r(R)`: diagonal `P(n+1, r2²) - P(n+1, r1²)`.
pub fn number_margin(r1: f64, r2: f64, d: Truncation) -> Result<Effect> {
    PolarRegion::new(r1, r2, ArcSet::full())?;
    let diag: Vec<f64> = (0..d.dim())
        .map(|n| {
            let upper = if r2.is_infinite() { 1.0 } else { poisson_tail(n, r2 * r2) };
            upper - poisson_tail(n, r1 * r1)
        })
        .collect();
    Effect::from_diagonal(&diag, &ToleranceConfig::default())
}

pub fn angle_margin_matrix(theta: &ArcSet, d: usize) -> ComplexMatrix {
    let ln_fact: Vec<f64> = (0..d).map(ln_factorial).collect();
    let coeffs: Vec<Complex64> = (0..d as i64).map(|k| theta.fourier(-k)).collect();
    assemble(d, |n, m| {
        let f = coeffs[m - n];
        let ln_r = ln_gamma((n + m) as f64 / 2.0 + 1.0) - 0.5 * (ln_fact[n] + ln_fact[m]);
        Ok(f * ln_r.exp())
    })
    .expect("angle margin entries are infallible")
}

/// Angle margin `A^θ(Θ)`: entries `arc_fourier(Θ, n-m) Γ((n+m)/2+1)/√(n!m!)`.
pub fn angle_margin(theta: &ArcSet, d: Truncation) -> Result<Effect> {
    Effect::validate(angle_margin_matrix(theta, d.dim()), &ToleranceConfig::default())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSample {
    pub amplitude: f64,
    pub dim: usize,
    pub probability: f64,
    /// `1 - probability`, integrated directly over the complement of `Θ` so
    /// that it keeps relative precision after `probability` rounds to 1.
    pub deficit: f64,
}

/// `<α|A^θ(Θ)|α>` for `α = s e^{iθ₀}` at each amplitude. With `dim = None`
/// the truncation follows [`coherent_truncation`] for the largest amplitude.
pub fn angle_margin_norm1_probe(
    theta: &ArcSet,
    theta0: f64,
    amplitudes: &[f64],
    dim: Option<usize>,
) -> Result<Vec<ProbeSample>> {
    let inside = theta.arcs().iter().any(|&(a, b)| {
        let t = theta0.rem_euclid(std::f64::consts::TAU);
        a < t && t < b
    }) || theta.is_full();
    if !inside {
        return Err(Error::InvalidParameter(format!("θ₀ = {theta0} is not interior to Θ")));
    }
    if amplitudes.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(Error::InvalidParameter("amplitudes must be finite and nonnegative".into()));
    }
    let s_max = amplitudes.iter().copied().fold(0.0, f64::max);
    let required = coherent_truncation(s_max);
    let d = match dim {
        Some(d) if d < required => {
            return Err(Error::TruncationTooSmall { d, amplitude: s_max, required });
        }
        Some(d) => d,
        None => required,
    };
    let a = angle_margin_matrix(theta, d);
    let outside = theta.complement();
    Ok(amplitudes
        .iter()
        .map(|&s| {
            let beta = Complex64::from_polar(s, theta0);
            let v = coherent_state(beta, d);
            let p = TcsParams::coherent(beta);
            let deficit = outside
                .arcs()
                .iter()
                .map(|&(lo, hi)| {
                    let (nodes, weights) = composite_rule(lo, hi, 128, 16);
                    nodes.iter().zip(&weights).map(|(&t, &w)| w * angle_density(&p, t)).sum::<f64>()
                })
                .sum();
            ProbeSample { amplitude: s, dim: d, probability: linalg::expectation(&a, &v).re, deficit }
        })
        .collect())
}

/// Symbol `h` of the Cartesian margin: `A^x(X) = h(Q)` and `A^y(X) = h(P)`
/// with `h(q) = Σ ½[erf(q - √2 a) - erf(q - √2 b)]` over the intervals of `X`.
#[derive(Debug, Clone)]
pub struct CartesianSymbol {
    region: RealRegion,
}

impl CartesianSymbol {
    pub fn new(region: RealRegion) -> Self {
        Self { region }
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.region
            .intervals()
            .iter()
            .map(|&(a, b)| 0.5 * (erf(q - SQRT_2 * a) - erf(q - SQRT_2 * b)))
            .sum()
    }

    /// `sup h`, attained at a midpoint of one interval for bounded regions
    /// and equal to 1 when some interval is unbounded.
    pub fn sup(&self) -> f64 {
        if !self.region.is_bounded() && !self.region.intervals().is_empty() {
            return 1.0;
        }
        let mut best: f64 = 0.0;
        for &(a, b) in self.region.intervals() {
            let lo = SQRT_2 * a;
            let hi = SQRT_2 * b;
            // golden-section refinement around the interval centre
            let (mut l, mut r) = (lo - 1.0, hi + 1.0);
            for _ in 0..200 {
                let m1 = l + (r - l) * 0.381_966_011_250_105;
                let m2 = r - (r - l) * 0.381_966_011_250_105;
                if self.eval(m1) < self.eval(m2) {
                    l = m1;
                } else {
                    r = m2;
                }
            }
            best = best.max(self.eval(0.5 * (l + r))).max(self.eval(0.5 * (lo + hi)));
        }
        best
    }
}

pub fn cartesian_symbol(region: &RealRegion) -> CartesianSymbol {
    CartesianSymbol::new(region.clone())
}

/// Normalized Hermite functions `ψ_0..ψ_{d-1}` at `q`.
pub fn hermite_functions(q: f64, d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d];
    if d == 0 {
        return out;
    }
    out[0] = PI.powf(-0.25) * (-0.5 * q * q).exp();
    if d > 1 {
        out[1] = SQRT_2 * q * out[0];
    }
    for n in 1..d.saturating_sub(1) {
        let nf = n as f64;
        out[n + 1] = (2.0 / (nf + 1.0)).sqrt() * q * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
    }
    out
}

/// Real matrix `∫ h(q) ψ_n(q) ψ_m(q) dq` by composite Gauss–Legendre
/// quadrature over the classically allowed region plus a margin.
fn symbol_matrix(h: &CartesianSymbol, d: usize) -> Vec<Vec<f64>> {
    let half = (2.0 * d as f64 + 1.0).sqrt() + 9.0;
    let panels = (4 * d).max(32);
    let (nodes, weights) = composite_rule(-half, half, panels, 16);
    let mut acc = vec![vec![0.0; d]; d];
    for (&q, &w) in nodes.iter().zip(&weights) {
        let hw = h.eval(q) * w;
        if hw == 0.0 {
            continue;
        }
        let psi = hermite_functions(q, d);
        for n in 0..d {
            let a = hw * psi[n];
            for m in n..d {
                acc[n][m] += a * psi[m];
            }
        }
    }
    acc
}

pub fn cartesian_margin_matrix(region: &RealRegion, axis: Axis, d: usize) -> ComplexMatrix {
    let h = cartesian_symbol(region);
    let real = symbol_matrix(&h, d);
    let mut m = ComplexMatrix::zeros(d, d);
    for n in 0..d {
        for k in n..d {
            let v = match axis {
                Axis::X => Complex64::new(real[n][k], 0.0),
                // ψ_n is an eigenfunction of the Fourier transform with eigenvalue (-i)^n
                Axis::Y => Complex64::i().powu(((n + 4 * d - k) % 4) as u32) * real[n][k],
            };
            m[(n, k)] = v;
            m[(k, n)] = v.conj();
        }
    }
    m
}

/// `A^x(X) = h(Q)` or `A^y(X) = h(P)` in the truncated number basis.
pub fn cartesian_margin_effect(region: &RealRegion, axis: Axis, d: Truncation) -> Result<Effect> {
    Effect::validate(cartesian_margin_matrix(region, axis, d.dim()), &ToleranceConfig::default())
}

/// Vacuum probability `<0|A^x(X)|0>`: `Q` has variance ½ in the vacuum, so the
/// phase-space variable `x` is normally distributed with variance ½.
pub fn vacuum_cartesian_probability(region: &RealRegion) -> f64 {
    region.intervals().iter().map(|&(a, b)| 0.5 * (erf(b) - erf(a))).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_adaptive;

    fn t(d: usize) -> Truncation {
        Truncation::new(d).unwrap()
    }

    #[test]
    fn coherent_overlap_values() {
        assert_eq!(coherent_overlap(0, Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        for &s in &[0.5, 2.0, 5.0] {
            let z = Complex64::from_polar(s, 0.7);
            let d = coherent_truncation(s);
            let norm: f64 = coherent_state(z, d).norm_squared();
            assert!((norm - 1.0).abs() < 1e-12, "s = {s}: {norm}");
        }
        // ln|<100|3>| = -4.5 + 100 ln 3 - ½ ln 100!
        let v = coherent_overlap(100, Complex64::new(3.0, 0.0));
        let reference = (-4.5 + 100.0 * 3f64.ln() - 0.5 * 363.739_375_555_563_5_f64).exp();
        assert!(v.re.is_finite() && ((v.re - reference) / reference).abs() < 1e-12);
    }

    #[test]
    fn full_plane_is_identity() {
        let a = phase_space_effect(&PolarRegion::full_plane(), t(12)).unwrap();
        assert!(a.is_identity());
        assert!(linalg::max_abs_diff(a.matrix(), &ComplexMatrix::identity(12, 12)) < 1e-13);
    }

    #[test]
    fn radial_factor_odd_matches_full_range_closed_form() {
        // split [0, ∞) at 1.3 and compare the pieces with the gamma value
        let inner = radial_factor(2, 3, 0.0, 1.3).unwrap();
        let outer = radial_factor(2, 3, 1.3, f64::INFINITY).unwrap();
        let full = radial_factor(2, 3, 0.0, f64::INFINITY).unwrap();
        assert!((inner + outer - full).abs() < 1e-12);
        let direct = integrate_adaptive(|r| 2.0 * r.powi(6) * (-r * r).exp(), 0.0, 1.3, 1e-14).unwrap()
            / (2.0f64 * 6.0).sqrt();
        assert!((inner - direct).abs() < 1e-12);
    }

    #[test]
    fn number_margin_vacuum_entry() {
        for &r in &[0.1, 0.7, 2.0] {
            let a = number_margin(0.0, r, t(6)).unwrap();
            let expected = 1.0 - (-r * r as f64).exp();
            assert!((a.matrix()[(0, 0)].re - expected).abs() < 1e-15);
            assert!((a.operator_norm() - expected).abs() < 1e-15);
            assert!(a.operator_norm() <= r * r);
        }
        assert!(number_margin(0.0, f64::INFINITY, t(8)).unwrap().is_identity());
        let small = number_margin(0.0, 0.3, t(8)).unwrap();
        assert!(!small.is_regular().unwrap());
    }

    #[test]
    fn angle_margin_entries() {
        assert!(angle_margin(&ArcSet::full(), t(16)).unwrap().is_identity());
        let half = ArcSet::single(0.0, PI).unwrap();
        let a = angle_margin(&half, t(8)).unwrap();
        for n in 0..8 {
            assert!((a.matrix()[(n, n)].re - 0.5).abs() < 1e-15);
        }
        // arc_fourier([0,π), -1) = -i/π and Γ(3/2) = √π/2
        let expected = Complex64::new(0.0, -0.5 / PI.sqrt());
        assert!((a.matrix()[(0, 1)] - expected).norm() < 1e-15);
    }

    #[test]
    fn angle_probe_concentrates() {
        let half = ArcSet::single(0.0, PI).unwrap();
        let p = angle_margin_norm1_probe(&half, PI / 2.0, &[0.0, 1.0, 2.0, 4.0], None).unwrap();
        assert!((p[0].probability - 0.5).abs() < 1e-14);
        for w in p.windows(2) {
            assert!(w[1].probability > w[0].probability);
        }
        let r = angle_margin_norm1_probe(&half, PI / 2.0, &[4.0], Some(20));
        assert!(matches!(r, Err(Error::TruncationTooSmall { .. })));
        assert!(angle_margin_norm1_probe(&half, 4.0, &[1.0], None).is_err());
    }

    #[test]
    fn cartesian_symbol_values() {
        let all = cartesian_symbol(&RealRegion::whole_line());
        assert_eq!(all.eval(0.3), 1.0);
        let x = RealRegion::interval(-0.4, 0.4).unwrap();
        let h = cartesian_symbol(&x);
        assert!((h.sup() - erf(SQRT_2 * 0.4)).abs() < 1e-14);
        assert_eq!(cartesian_symbol(&x.complement()).sup(), 1.0);
    }

    #[test]
    fn cartesian_margin_of_line_is_identity() {
        for axis in [Axis::X, Axis::Y] {
            let a = cartesian_margin_effect(&RealRegion::whole_line(), axis, t(16)).unwrap();
            assert!(linalg::max_abs_diff(a.matrix(), &ComplexMatrix::identity(16, 16)) < 1e-12);
        }
    }

    #[test]
    fn cartesian_vacuum_probability_is_erf() {
        let x = RealRegion::interval(-0.4, 0.4).unwrap();
        let a = cartesian_margin_effect(&x, Axis::X, t(4)).unwrap();
        assert!((a.matrix()[(0, 0)].re - erf(0.4)).abs() < 1e-12);
        assert!((vacuum_cartesian_probability(&x) - erf(0.4)).abs() < 1e-16);
    }

    #[test]
    fn region_parsing() {
        let z = PolarRegion::parse("0.5:2@0:pi", false).unwrap();
        assert_eq!(z.radial(), (0.5, 2.0));
        assert!((z.area() - 0.5 * PI * (4.0 - 0.25)).abs() < 1e-14);
        assert_eq!(PolarRegion::parse("0:inf", false).unwrap(), PolarRegion::full_plane());
        assert!(PolarRegion::parse("2:1", false).is_err());
        let x = RealRegion::parse("-inf:-1, 1:inf").unwrap();
        assert_eq!(x.intervals().len(), 2);
        assert_eq!(x.complement(), RealRegion::interval(-1.0, 1.0).unwrap());
    }
}

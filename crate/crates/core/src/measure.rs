//! Desk-scale measure models: a multiplication POM built on a fat Cantor set,
//! the Haar identity on cyclic groups, a covariant POM on `ℤ_N`, and norm
//! limits along compact exhaustions.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::effect::{Effect, ToleranceConfig};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};

/// Deepest construction level handled exactly.
pub const MAX_CANTOR_DEPTH: u32 = 24;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow2(e: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << e as usize)
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Smith–Volterra–Cantor set: at step `j` a middle gap of length `4^{-(j+1)}`
/// is removed from each of the `2^j` remaining intervals, so that
/// `λ(C_k) = ½ + 2^{-(k+1)}` and `λ(C) = ½`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatCantorModel {
    depth: u32,
}

impl FatCantorModel {
    pub fn new(depth: u32) -> Result<Self> {
        if depth > MAX_CANTOR_DEPTH {
            return Err(Error::InvalidParameter(format!("depth {depth} exceeds {MAX_CANTOR_DEPTH}")));
        }
        Ok(Self { depth })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `λ(C_k) = 1 - Σ_{j<k} 2^j 4^{-(j+1)}`.
    pub fn measure_at(k: u32) -> BigRational {
        (0..k).fold(BigRational::one(), |acc, j| acc - pow2(j) / pow2(2 * (j + 1)))
    }

    pub fn limit_measure() -> BigRational {
        rat(1, 2)
    }

    /// `λ(C_k) - λ(C)` at the model depth.
    pub fn tail(&self) -> BigRational {
        Self::measure_at(self.depth) - Self::limit_measure()
    }

    /// Length of each of the `2^j` intervals of `C_j`.
    fn level_length(j: u32) -> BigRational {
        (0..j).fold(BigRational::one(), |len, i| (len - BigRational::one() / pow2(2 * (i + 1))) / pow2(1))
    }

    /// Gaps removed at step `j` (exposed for small `j` only).
    pub fn gaps_at_level(&self, j: u32) -> Result<Vec<(BigRational, BigRational)>> {
        if j >= self.depth || j > 16 {
            return Err(Error::InvalidParameter(format!("level {j} not listed at depth {}", self.depth)));
        }
        let len = Self::level_length(j);
        let gap = BigRational::one() / pow2(2 * (j + 1));
        let mut out = Vec::with_capacity(1 << j);
        let mut starts = vec![BigRational::zero()];
        for i in 0..j {
            let l = Self::level_length(i);
            let child = Self::level_length(i + 1);
            starts = starts.into_iter().flat_map(|s| [s.clone(), s + &l - &child]).collect();
        }
        for s in starts {
            let a = &s + (&len - &gap) / pow2(1);
            out.push((a.clone(), a + &gap));
        }
        Ok(out)
    }

    /// `λ(U ∩ C_k)` for a union of intervals, by descending the construction
    /// tree and only splitting intervals that straddle a boundary of `U`.
    pub fn intersection_measure(&self, u: &IntervalUnion) -> BigRational {
        let share = Self::measure_at(self.depth);
        self.descend(u, BigRational::zero(), 0, &share)
    }

    fn descend(&self, u: &IntervalUnion, start: BigRational, j: u32, total: &BigRational) -> BigRational {
        let len = Self::level_length(j);
        let end = &start + &len;
        if !u.overlaps(&start, &end) {
            return BigRational::zero();
        }
        if u.covers(&start, &end) {
            return total / pow2(j);
        }
        if j == self.depth {
            return u.measure_within(&start, &end);
        }
        let child = Self::level_length(j + 1);
        let right = &end - &child;
        self.descend(u, start, j + 1, total) + self.descend(u, right, j + 1, total)
    }
}

/// Sorted, merged union of intervals of `[0, 1]` with exact endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalUnion {
    parts: Vec<(BigRational, BigRational)>,
}

impl IntervalUnion {
    pub fn from_f64(intervals: &[(f64, f64)]) -> Result<Self> {
        let mut parts = Vec::with_capacity(intervals.len());
        for &(a, b) in intervals {
            if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || b < a {
                return Err(Error::InvalidParameter(format!("interval ({a}, {b}) not within [0, 1]")));
            }
            let ra = BigRational::from_float(a).ok_or(Error::NonFinite)?;
            let rb = BigRational::from_float(b).ok_or(Error::NonFinite)?;
            parts.push((ra, rb));
        }
        Ok(Self::from_rationals(parts))
    }

    pub fn from_rationals(mut parts: Vec<(BigRational, BigRational)>) -> Self {
        parts.retain(|(a, b)| a < b);
        parts.sort();
        let mut merged: Vec<(BigRational, BigRational)> = Vec::with_capacity(parts.len());
        for (a, b) in parts {
            match merged.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        Self { parts: merged }
    }

    pub fn unit() -> Self {
        Self { parts: vec![(BigRational::zero(), BigRational::one())] }
    }

    pub fn parts(&self) -> &[(BigRational, BigRational)] {
        &self.parts
    }

    pub fn measure(&self) -> BigRational {
        self.parts.iter().fold(BigRational::zero(), |acc, (a, b)| acc + b - a)
    }

    fn overlaps(&self, s: &BigRational, e: &BigRational) -> bool {
        self.parts.iter().any(|(a, b)| a < e && s < b)
    }

    fn covers(&self, s: &BigRational, e: &BigRational) -> bool {
        self.parts.iter().any(|(a, b)| a <= s && e <= b)
    }

    fn measure_within(&self, s: &BigRational, e: &BigRational) -> BigRational {
        self.parts.iter().fold(BigRational::zero(), |acc, (a, b)| {
            let lo = if a > s { a } else { s };
            let hi = if b < e { b } else { e };
            if lo < hi {
                acc + hi - lo
            } else {
                acc
            }
        })
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.parts.iter().all(|(a, b)| other.covers(a, b))
    }
}

/// Borel sets handled by the multiplication POM on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BorelDescriptor {
    Intervals(IntervalUnion),
    Cantor,
    IntervalsMinusCantor(IntervalUnion),
    IntervalsIntersectCantor(IntervalUnion),
}

impl BorelDescriptor {
    /// Parses `cantor`, `empty`, `a:b,c:d`, `a:b,c:d-cantor` and
    /// `a:b,c:d&cantor`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("cantor") {
            return Ok(Self::Cantor);
        }
        let (body, kind) = if let Some(b) = s.strip_suffix("-cantor") {
            (b, 1)
        } else if let Some(b) = s.strip_suffix("&cantor") {
            (b, 2)
        } else {
            (s, 0)
        };
        let mut v = Vec::new();
        if !(body.is_empty() || body.eq_ignore_ascii_case("empty")) {
            for part in body.split(',') {
                let (a, b) = part
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("interval '{part}' is not of the form a:b")))?;
                let pa = a.trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{a}': {e}")))?;
                let pb = b.trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{b}': {e}")))?;
                v.push((pa, pb));
            }
        }
        let u = IntervalUnion::from_f64(&v)?;
        Ok(match kind {
            0 => Self::Intervals(u),
            1 => Self::IntervalsMinusCantor(u),
            _ => Self::IntervalsIntersectCantor(u),
        })
    }
}

/// Brackets for `λ(X \ C)` and `λ(X ∩ C)` plus the resolved norm.
#[derive(Debug, Clone, PartialEq)]
pub struct CantorNorm {
    pub norm: f64,
    pub outside: (f64, f64),
    pub inside: (f64, f64),
}

/// `||E(X)||` for `(E(X)ψ)(x) = χ_X(x) f(x) ψ(x)`, `f = ½` on `C` and 1 off
/// it: the essential supremum of `fχ_X`.
pub fn cantor_effect_norm(m: &FatCantorModel, x: &BorelDescriptor) -> Result<CantorNorm> {
    let tail = m.tail();
    let zero = BigRational::zero();
    let clip = |r: BigRational| if r.is_negative() { BigRational::zero() } else { r };
    // exact brackets [lo, hi] for λ(X \ C) and λ(X ∩ C)
    let (outside, inside) = match x {
        BorelDescriptor::Cantor => ((zero.clone(), zero.clone()), (rat(1, 2), rat(1, 2))),
        BorelDescriptor::Intervals(u) => {
            let total = u.measure();
            let in_k = m.intersection_measure(u);
            let in_lo = clip(&in_k - &tail);
            ((&total - &in_k, &total - &in_lo), (in_lo, in_k))
        }
        BorelDescriptor::IntervalsMinusCantor(u) => {
            let total = u.measure();
            let in_k = m.intersection_measure(u);
            let in_lo = clip(&in_k - &tail);
            ((&total - &in_k, &total - &in_lo), (zero.clone(), zero.clone()))
        }
        BorelDescriptor::IntervalsIntersectCantor(u) => {
            let in_k = m.intersection_measure(u);
            ((zero.clone(), zero.clone()), (clip(&in_k - &tail), in_k))
        }
    };
    let pair = |p: &(BigRational, BigRational)| (to_f64(&p.0), to_f64(&p.1));
    let undecided = |p: &(BigRational, BigRational)| p.0.is_zero() && p.1.is_positive();
    let norm = if outside.0.is_positive() {
        1.0
    } else if undecided(&outside) {
        return Err(Error::DepthInsufficient { depth: m.depth(), lower: to_f64(&outside.0), upper: to_f64(&outside.1) });
    } else if inside.0.is_positive() {
        0.5
    } else if undecided(&inside) {
        return Err(Error::DepthInsufficient { depth: m.depth(), lower: to_f64(&inside.0), upper: to_f64(&inside.1) });
    } else {
        0.0
    };
    Ok(CantorNorm { norm, outside: pair(&outside), inside: pair(&inside) })
}

/// Every sampled open union has norm 1 while `E(C)` has norm ½.
pub fn cantor_norm1_on_opens_check(m: &FatCantorModel, samples: &[IntervalUnion]) -> Result<bool> {
    for u in samples {
        if u.measure().is_zero() {
            continue;
        }
        if cantor_effect_norm(m, &BorelDescriptor::Intervals(u.clone()))?.norm != 1.0 {
            return Ok(false);
        }
    }
    Ok(cantor_effect_norm(m, &BorelDescriptor::Cantor)?.norm == 0.5)
}

/// `(|X|, (1/α(ℤ_N)) Σ_ω α({ω - x : x ∈ X}))` in exact arithmetic.
pub fn haar_identity_check(n: usize, alpha: &[BigRational], x: &[usize]) -> Result<(BigRational, BigRational)> {
    if alpha.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: alpha.len() });
    }
    if alpha.iter().any(Signed::is_negative) {
        return Err(Error::InvalidParameter("α must be a nonnegative measure".into()));
    }
    let total = alpha.iter().fold(BigRational::zero(), |a, b| a + b);
    if total.is_zero() {
        return Err(Error::ZeroTotalMeasure);
    }
    let mut set = x.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&bad) = set.iter().find(|&&k| k >= n) {
        return Err(Error::InvalidParameter(format!("element {bad} not in ℤ_{n}")));
    }
    let lhs = BigRational::from_integer(BigInt::from(set.len()));
    let mut sum = BigRational::zero();
    for omega in 0..n {
        for &k in &set {
            sum += &alpha[(omega + n - k) % n];
        }
    }
    Ok((lhs, sum / total))
}

/// `E(X) = Σ_{k∈X} U(k) E₀ U(k)*` on `ℂ^d` with `U(k) = diag(e^{i2πnk/N})`.
#[derive(Debug, Clone)]
pub struct CyclicCovarianceModel {
    order: usize,
    seed: ComplexMatrix,
}

impl CyclicCovarianceModel {
    pub fn new(order: usize, seed: ComplexMatrix) -> Result<Self> {
        let d = seed.nrows();
        if seed.ncols() != d {
            return Err(Error::NotSquare { rows: d, cols: seed.ncols() });
        }
        if d == 0 || d > order {
            return Err(Error::InvalidParameter(format!("dimension {d} must be in 1..={order}")));
        }
        Effect::validate(seed.clone(), &ToleranceConfig::default())?;
        let model = Self { order, seed };
        let total = model.effect_matrix(&(0..order).collect::<Vec<_>>())?;
        let deviation = linalg::max_abs_diff(&total, &ComplexMatrix::identity(d, d));
        if deviation > 1e-12 * order as f64 {
            return Err(Error::NotNormalizedPovm { deviation, tol: 1e-12 * order as f64 });
        }
        Ok(model)
    }

    /// Discrete canonical phase: `E₀ = (1/N)·(all ones)`.
    pub fn discrete_phase(order: usize, d: usize) -> Result<Self> {
        let seed = ComplexMatrix::from_element(d, d, Complex64::new(1.0 / order as f64, 0.0));
        Self::new(order, seed)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.seed.nrows()
    }

    pub fn unitary(&self, k: usize) -> ComplexMatrix {
        let d = self.dim();
        let mut u = ComplexMatrix::zeros(d, d);
        for n in 0..d {
            let angle = std::f64::consts::TAU * ((n * k) % self.order) as f64 / self.order as f64;
            u[(n, n)] = Complex64::from_polar(1.0, angle);
        }
        u
    }

    fn conjugated(&self, k: usize) -> ComplexMatrix {
        let u = self.unitary(k);
        &u * &self.seed * u.adjoint()
    }

    fn effect_matrix(&self, x: &[usize]) -> Result<ComplexMatrix> {
        let mut set = x.to_vec();
        set.sort_unstable();
        set.dedup();
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for k in set {
            if k >= self.order {
                return Err(Error::InvalidParameter(format!("element {k} not in ℤ_{}", self.order)));
            }
            m += self.conjugated(k);
        }
        Ok(m)
    }

    pub fn effect(&self, x: &[usize]) -> Result<Effect> {
        Effect::validate(self.effect_matrix(x)?, &ToleranceConfig::default())
    }

    /// `max_{j,k} |U(j)E({k})U(j)* - E({k+j})|`.
    pub fn covariance_deviation(&self) -> f64 {
        let singles: Vec<ComplexMatrix> = (0..self.order).map(|k| self.conjugated(k)).collect();
        let mut worst: f64 = 0.0;
        for j in 0..self.order {
            let u = self.unitary(j);
            for (k, e) in singles.iter().enumerate() {
                let moved = &u * e * u.adjoint();
                worst = worst.max(linalg::max_abs_diff(&moved, &singles[(k + j) % self.order]));
            }
        }
        worst
    }
}

/// `E(X) = O` exactly when `X = ∅`, the only null set of counting measure.
pub fn covariant_null_check(m: &CyclicCovarianceModel, x: &[usize]) -> Result<bool> {
    let e = m.effect(x)?;
    Ok(e.is_zero() == x.is_empty())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Exhaustion {
    pub inner_norms: Vec<f64>,
    pub outer_norm: f64,
    pub monotone: bool,
    pub bounded: bool,
}

impl Exhaustion {
    pub fn gap(&self) -> f64 {
        self.inner_norms.last().map_or(self.outer_norm, |n| self.outer_norm - n)
    }
}

/// Norms along increasing inner regions, compared with the norm over `outer`.
pub fn compact_exhaustion_norm<R, F>(construct: F, outer: &R, inner: &[R]) -> Result<Exhaustion>
where
    F: Fn(&R) -> Result<Effect>,
{
    const SLACK: f64 = 1e-12;
    let outer_norm = construct(outer)?.operator_norm();
    let inner_norms = inner
        .iter()
        .map(|r| construct(r).map(|e| e.operator_norm()))
        .collect::<Result<Vec<f64>>>()?;
    let monotone = inner_norms.windows(2).all(|w| w[1] >= w[0] - SLACK);
    let bounded = inner_norms.iter().all(|&n| n <= outer_norm + SLACK);
    Ok(Exhaustion { inner_norms, outer_norm, monotone, bounded })
}

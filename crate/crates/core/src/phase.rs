//! Phase-shift covariant observables on the truncated number basis.
//!
//! A phase observable is fixed by the Gram data `g_nm = <ξ_n, ξ_m>` of a
//! sequence of unit vectors; its effect on an arc set `X` has number-basis
//! entries `g_nm · (1/2π) ∫_X e^{i(n-m)x} dx`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::arcs::ArcSet;
use crate::effect::{Effect, ToleranceConfig};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::quadrature::gauss_legendre;

/// Tolerance on the Gram block's smallest eigenvalue.
pub const GRAM_PSD_TOL: f64 = 1e-10;

/// Fock-space truncation `|0>, ..., |d-1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation(usize);

impl Truncation {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!("truncation d = {d} < 2")));
        }
        Ok(Self(d))
    }

    pub fn dim(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GramKernel {
    /// `ξ_n = ξ` for all `n`: every `g_nm = 1`.
    Canonical,
    /// Orthonormal `ξ_n`: `g_nm = δ_nm`.
    Trivial,
    /// `g_nm = δ_nm` except `g_st = z`, `g_ts = conj(z)`.
    Elementary { s: usize, t: usize, z: Complex64 },
    /// Gram matrix given explicitly; must cover the truncation.
    Explicit(ComplexMatrix),
}

impl GramKernel {
    pub fn elementary(s: usize, t: usize, z: Complex64) -> Result<Self> {
        if s == t {
            return Err(Error::InvalidParameter("elementary kernel needs s != t".into()));
        }
        let r = z.norm();
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(format!("elementary kernel needs 0 < |z| < 1, got {r}")));
        }
        Ok(Self::Elementary { s, t, z })
    }

    pub fn entry(&self, n: usize, m: usize) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match self {
            Self::Canonical => one,
            Self::Trivial => {
                if n == m {
                    one
                } else {
                    zero
                }
            }
            Self::Elementary { s, t, z } => {
                if n == m {
                    one
                } else if n == *s && m == *t {
                    *z
                } else if n == *t && m == *s {
                    z.conj()
                } else {
                    zero
                }
            }
            Self::Explicit(g) => g[(n, m)],
        }
    }

    /// Checks unit diagonal, `|g_nm| <= 1` and positivity of the `d x d` block.
    pub fn validate(&self, d: usize) -> Result<()> {
        match self {
            Self::Canonical | Self::Trivial => Ok(()),
            Self::Elementary { z, .. } => {
                if z.norm() < 1.0 {
                    Ok(())
                } else {
                    Err(Error::GramNotPsd { min_eigenvalue: 1.0 - z.norm() })
                }
            }
            Self::Explicit(g) => {
                if g.nrows() < d || g.ncols() < d {
                    return Err(Error::DimensionMismatch { expected: d, found: g.nrows().min(g.ncols()) });
                }
                let block = g.view((0, 0), (d, d)).into_owned();
                for n in 0..d {
                    if (block[(n, n)] - Complex64::new(1.0, 0.0)).norm() > GRAM_PSD_TOL {
                        return Err(Error::InvalidParameter(format!("g_{n}{n} != 1")));
                    }
                }
                if block.iter().any(|v| v.norm() > 1.0 + GRAM_PSD_TOL) {
                    return Err(Error::InvalidParameter("Gram entry exceeds 1 in modulus".into()));
                }
                let dev = linalg::hermiticity_deviation(&block);
                if dev > GRAM_PSD_TOL {
                    return Err(Error::NotHermitian { deviation: dev, tol: GRAM_PSD_TOL });
                }
                let min_eigenvalue = linalg::min_eigenvalue(&linalg::hermitize(&block))?;
                if min_eigenvalue < -GRAM_PSD_TOL {
                    return Err(Error::GramNotPsd { min_eigenvalue });
                }
                Ok(())
            }
        }
    }
}

/// Raw entries `g_nm · arc_fourier(X, n - m)` without validation.
pub fn phase_matrix(g: &GramKernel, x: &ArcSet, d: usize) -> ComplexMatrix {
    let coeffs: Vec<Complex64> = (0..2 * d).map(|k| x.fourier(k as i64 - d as i64)).collect();
    ComplexMatrix::from_fn(d, d, |n, m| g.entry(n, m) * coeffs[n + d - m])
}

pub fn phase_effect(g: &GramKernel, x: &ArcSet, d: Truncation) -> Result<Effect> {
    g.validate(d.dim())?;
    Effect::validate(phase_matrix(g, x, d.dim()), &ToleranceConfig::default())
}

/// Closed-form spectrum of an elementary phase effect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementaryEigenvalues {
    pub minus: f64,
    pub zero: f64,
    pub plus: f64,
}

/// `e_± = ℓ(X)/2π ± |z| |(1/2π) ∫_X e^{i(s-t)x} dx|`, `e_0 = ℓ(X)/2π`.
pub fn elementary_eigenvalues(s: usize, t: usize, z: Complex64, x: &ArcSet) -> Result<ElementaryEigenvalues> {
    GramKernel::elementary(s, t, z)?;
    let e0 = x.length() / TAU;
    let spread = z.norm() * x.fourier(s as i64 - t as i64).norm();
    Ok(ElementaryEigenvalues { minus: e0 - spread, zero: e0, plus: e0 + spread })
}

/// Counts of regular and irregular elementary effects over arcs
/// `[a, a + len)` on a `grid x grid` lattice of starts and lengths.
pub fn elementary_regularity_scan(s: usize, t: usize, z: Complex64, grid: usize) -> Result<(usize, usize)> {
    let (mut regular, mut irregular) = (0, 0);
    for i in 0..grid {
        for j in 1..grid {
            let a = TAU * i as f64 / grid as f64;
            let len = TAU * j as f64 / grid as f64;
            let e = elementary_eigenvalues(s, t, z, &ArcSet::single(a, a + len)?)?;
            if e.minus < 0.5 && e.plus > 0.5 {
                regular += 1;
            } else {
                irregular += 1;
            }
        }
    }
    Ok((regular, irregular))
}

/// `max_nm |E(X ∔ x)_nm - e^{i(n-m)x} E(X)_nm|`.
pub fn covariance_check(g: &GramKernel, x: &ArcSet, shift: f64, d: Truncation) -> Result<f64> {
    g.validate(d.dim())?;
    let base = phase_matrix(g, x, d.dim());
    let moved = phase_matrix(g, &x.shift(shift), d.dim());
    let mut dev = 0.0f64;
    for n in 0..d.dim() {
        for m in 0..d.dim() {
            let rotated = base[(n, m)] * Complex64::from_polar(1.0, (n as f64 - m as f64) * shift);
            dev = dev.max((moved[(n, m)] - rotated).norm());
        }
    }
    Ok(dev)
}

/// Norm of a truncated canonical phase effect, with `1 - norm` resolved in
/// log space where double precision cannot see it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSample {
    pub d: usize,
    /// Largest eigenvalue from the dense eigensolver.
    pub eigen_norm: f64,
    /// `ln(1 - ||E_d(X)||)`; `-inf` when the norm is exactly one.
    pub ln_deficit: f64,
}

impl NormSample {
    pub fn norm(&self) -> f64 {
        -(self.ln_deficit.exp_m1())
    }

    pub fn log10_deficit(&self) -> f64 {
        self.ln_deficit / std::f64::consts::LN_10
    }
}

/// Norms of `E_can(X)` truncated to each `d` in `dims`.
pub fn canonical_norm_scan(x: &ArcSet, dims: &[usize]) -> Result<Vec<NormSample>> {
    if x.is_empty() {
        return Err(Error::InvalidParameter("arc set has zero length".into()));
    }
    dims.iter()
        .map(|&d| {
            let d = Truncation::new(d)?.dim();
            let eigen_norm = linalg::max_eigenvalue(&phase_matrix(&GramKernel::Canonical, x, d))?;
            let ln_deficit = if x.is_full() {
                f64::NEG_INFINITY
            } else {
                canonical_ln_deficit(x, d)?
            };
            Ok(NormSample { d, eigen_norm, ln_deficit })
        })
        .collect()
}

fn arc_nodes(x: &ArcSet, max_frequency: usize) -> (Vec<Complex64>, Vec<f64>) {
    const ORDER: usize = 16;
    const PHASE_PER_PANEL: f64 = 8.0;
    let (gx, gw) = gauss_legendre(ORDER);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for &(a, b) in x.arcs() {
        let panels = (((b - a) * max_frequency as f64) / PHASE_PER_PANEL).ceil().max(1.0) as usize;
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (xi, wi) in gx.iter().zip(&gw) {
                nodes.push(Complex64::from_polar(1.0, lo + 0.5 * h * (xi + 1.0)));
                weights.push(0.5 * h * wi / TAU);
            }
        }
    }
    (nodes, weights)
}

/// `ln(1 - ||E_can,d(X)||)`.
///
/// `1 - ||E_d(X)||` is the smallest eigenvalue of `E_d(X')`, i.e. the minimum
/// over polynomials `p` of degree `< d` of `∫_{X'}|p|² / ∫_T |p|²`. In the
/// basis `φ_k` orthonormal on `X'` this is `1 / (1 + μ)` with `μ` the top
/// eigenvalue of the Gram matrix of the `φ_k` over `X`. The `φ_k` come from
/// the Szegő recursion on a quadrature discretization of `X'`; on `X` they
/// grow geometrically and are carried with per-degree log scales.
fn canonical_ln_deficit(x: &ArcSet, d: usize) -> Result<f64> {
    let inner = x.complement();
    let (zo, wo) = arc_nodes(&inner, 2 * d);
    let (zi, wi) = arc_nodes(x, 2 * d);
    let mass: f64 = wo.iter().sum();
    let phi0 = Complex64::new(1.0 / mass.sqrt(), 0.0);

    // values on X' (bounded) and on X (rescaled), plus reversed polynomials
    let mut po = vec![phi0; zo.len()];
    let mut ps_o = po.clone();
    let mut pi = vec![phi0; zi.len()];
    let mut ps_i = pi.clone();
    let mut log_scale = 0.0f64;
    let mut columns: Vec<(Vec<Complex64>, f64)> = vec![(pi.clone(), log_scale)];

    for _ in 1..d {
        let c: Complex64 = zo
            .iter()
            .zip(&po)
            .zip(&ps_o)
            .zip(&wo)
            .map(|(((z, p), ps), w)| z * p * ps.conj() * *w)
            .sum();
        let mut next_o: Vec<Complex64> = zo.iter().zip(&po).zip(&ps_o).map(|((z, p), ps)| z * p - c * ps).collect();
        let rho = next_o.iter().zip(&wo).map(|(v, w)| v.norm_sqr() * w).sum::<f64>().sqrt();
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::EigenNonConvergence);
        }
        let next_so: Vec<Complex64> =
            zo.iter().zip(&po).zip(&ps_o).map(|((z, p), ps)| (ps - c.conj() * z * p) / rho).collect();
        next_o.iter_mut().for_each(|v| *v /= rho);
        po = next_o;
        ps_o = next_so;

        let mut next_i: Vec<Complex64> = zi.iter().zip(&pi).zip(&ps_i).map(|((z, p), ps)| (z * p - c * ps) / rho).collect();
        let mut next_si: Vec<Complex64> =
            zi.iter().zip(&pi).zip(&ps_i).map(|((z, p), ps)| (ps - c.conj() * z * p) / rho).collect();
        let peak = next_i.iter().chain(&next_si).map(|v| v.norm()).fold(0.0, f64::max);
        if peak > 1e100 {
            next_i.iter_mut().for_each(|v| *v /= peak);
            next_si.iter_mut().for_each(|v| *v /= peak);
            log_scale += peak.ln();
        }
        pi = next_i;
        ps_i = next_si;
        columns.push((pi.clone(), log_scale));
    }

    // column k of the scaled design matrix: sqrt(w_i) φ_k(x_i) e^{L_k - L_ref}
    let col_mag = |c: &(Vec<Complex64>, f64)| {
        let m = c.0.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if m > 0.0 {
            m.ln() + c.1
        } else {
            f64::NEG_INFINITY
        }
    };
    let reference = columns.iter().map(col_mag).fold(f64::NEG_INFINITY, f64::max);
    let kept: Vec<&(Vec<Complex64>, f64)> = columns.iter().filter(|c| col_mag(c) - reference > -50.0).collect();
    let k = kept.len();
    let mut gram = ComplexMatrix::zeros(k, k);
    for a in 0..k {
        let sa = (kept[a].1 - reference).exp();
        for b in a..k {
            let sb = (kept[b].1 - reference).exp();
            let v: Complex64 = kept[a]
                .0
                .iter()
                .zip(&kept[b].0)
                .zip(&wi)
                .map(|((pa, pb), w)| pa.conj() * pb * *w)
                .sum::<Complex64>()
                * sa
                * sb;
            gram[(a, b)] = v;
            gram[(b, a)] = v.conj();
        }
    }
    let top = linalg::max_eigenvalue(&gram)?;
    if !(top > 0.0) {
        return Err(Error::EigenNonConvergence);
    }
    let ln_mu = top.ln() + 2.0 * reference;
    // ln(1 / (1 + μ))
    Ok(if ln_mu > 35.0 {
        -ln_mu - (-ln_mu).exp()
    } else {
        -(ln_mu.exp().ln_1p())
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumFill {
    pub d: usize,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Largest distance between consecutive eigenvalues, with the endpoints
    /// 0 and 1 included.
    pub max_gap: f64,
}

pub fn canonical_spectrum_fill(x: &ArcSet, d: Truncation) -> Result<SpectrumFill> {
    let vals = linalg::eigenvalues(&phase_matrix(&GramKernel::Canonical, x, d.dim()))?;
    let mut max_gap = 0.0f64;
    for w in vals.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    let lo = vals[0];
    let hi = vals[vals.len() - 1];
    if !x.is_full() && !x.is_empty() {
        max_gap = max_gap.max(lo.max(0.0)).max((1.0 - hi).max(0.0));
    }
    Ok(SpectrumFill { d: d.dim(), min_eigenvalue: lo, max_eigenvalue: hi, max_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn half() -> ArcSet {
        ArcSet::single(0.0, PI).unwrap()
    }

    #[test]
    fn full_circle_gives_identity() {
        let d = Truncation::new(6).unwrap();
        for g in [
            GramKernel::Canonical,
            GramKernel::Trivial,
            GramKernel::elementary(1, 3, Complex64::new(0.3, 0.4)).unwrap(),
        ] {
            let e = phase_effect(&g, &ArcSet::full(), d).unwrap();
            assert!(linalg::max_abs_diff(e.matrix(), &ComplexMatrix::identity(6, 6)) < 1e-15);
        }
    }

    #[test]
    fn canonical_diagonal_is_relative_length() {
        let x = ArcSet::new([(0.2, 1.0), (3.0, 4.5)]).unwrap();
        let e = phase_effect(&GramKernel::Canonical, &x, Truncation::new(5).unwrap()).unwrap();
        for n in 0..5 {
            assert!((e.matrix()[(n, n)].re - x.length() / TAU).abs() < 1e-15);
        }
    }

    #[test]
    fn elementary_block_structure() {
        let g = GramKernel::elementary(0, 1, Complex64::new(0.5, 0.0)).unwrap();
        let e = phase_effect(&g, &half(), Truncation::new(8).unwrap()).unwrap();
        let m = e.matrix();
        // (0,1): z · arc_fourier(X, -1) = 0.5 · (-i/π)
        assert!((m[(0, 1)] - Complex64::new(0.0, -0.5 / PI)).norm() < 1e-15);
        assert!((m[(1, 0)] - Complex64::new(0.0, 0.5 / PI)).norm() < 1e-15);
        for n in 0..8 {
            for k in 0..8 {
                if (n, k) != (0, 1) && (n, k) != (1, 0) {
                    let expect = if n == k { 0.5 } else { 0.0 };
                    assert!((m[(n, k)] - Complex64::new(expect, 0.0)).norm() < 1e-15);
                }
            }
        }
        let ev = elementary_eigenvalues(0, 1, Complex64::new(0.5, 0.0), &half()).unwrap();
        assert!((ev.plus - (0.5 + 0.5 / PI)).abs() < 1e-15);
        assert!((ev.plus - 0.659_154_943_091_895_3).abs() < 1e-12);
        assert!((ev.minus - 0.340_845_056_908_104_7).abs() < 1e-12);
        let vals = e.eigenvalues();
        assert!((vals[0] - ev.minus).abs() < 1e-12 && (vals[7] - ev.plus).abs() < 1e-12);
    }

    #[test]
    fn elementary_rejects_bad_parameters() {
        assert!(GramKernel::elementary(2, 2, Complex64::new(0.5, 0.0)).is_err());
        assert!(GramKernel::elementary(0, 1, Complex64::new(1.0, 0.0)).is_err());
        assert!(GramKernel::elementary(0, 1, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn explicit_gram_must_be_psd() {
        let mut g = ComplexMatrix::identity(3, 3);
        g[(0, 1)] = Complex64::new(0.9, 0.0);
        g[(1, 0)] = Complex64::new(0.9, 0.0);
        g[(1, 2)] = Complex64::new(0.9, 0.0);
        g[(2, 1)] = Complex64::new(0.9, 0.0);
        g[(0, 2)] = Complex64::new(-0.9, 0.0);
        g[(2, 0)] = Complex64::new(-0.9, 0.0);
        let r = phase_effect(&GramKernel::Explicit(g), &half(), Truncation::new(3).unwrap());
        assert!(matches!(r, Err(Error::GramNotPsd { .. })));
    }

    #[test]
    fn covariance_is_exact() {
        let d = Truncation::new(32).unwrap();
        assert_eq!(covariance_check(&GramKernel::Canonical, &half(), 0.0, d).unwrap(), 0.0);
        assert!(covariance_check(&GramKernel::Canonical, &half(), PI / 3.0, d).unwrap() <= 1e-12);
    }

    #[test]
    fn deficit_matches_eigensolver_where_resolvable() {
        for d in [4, 6, 8, 12] {
            let s = canonical_norm_scan(&half(), &[d]).unwrap()[0];
            let direct = 1.0 - s.eigen_norm;
            let via_log = s.ln_deficit.exp();
            assert!(
                ((direct - via_log) / via_log).abs() < 1e-7,
                "d={d}: {direct:e} vs {via_log:e}"
            );
        }
        let irregular = ArcSet::new([(0.3, 1.1), (2.0, 4.0)]).unwrap();
        let s = canonical_norm_scan(&irregular, &[10]).unwrap()[0];
        let direct = 1.0 - s.eigen_norm;
        assert!(((direct - s.ln_deficit.exp()) / direct).abs() < 1e-6);
    }

    #[test]
    fn full_circle_scan_is_one() {
        for s in canonical_norm_scan(&ArcSet::full(), &[4, 16]).unwrap() {
            assert!((s.eigen_norm - 1.0).abs() < 1e-14);
            assert_eq!(s.norm(), 1.0);
        }
        let f = canonical_spectrum_fill(&ArcSet::full(), Truncation::new(8).unwrap()).unwrap();
        assert!((f.min_eigenvalue - 1.0).abs() < 1e-14 && f.max_gap < 1e-14);
    }

    #[test]
    fn regularity_scan_finds_both_kinds() {
        let (r, i) = elementary_regularity_scan(0, 1, Complex64::new(0.8, 0.0), 24).unwrap();
        assert!(r > 0 && i > 0);
    }
}

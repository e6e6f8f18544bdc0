//! Effects: Hermitian operators `O <= A <= I` on a finite-dimensional space.
//!
//! An [`Effect`] caches its ascending spectrum at construction and computes
//! eigenvectors lazily, since most predicates only need eigenvalues.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    self, hermiticity_deviation, hermitize, ComplexMatrix, ComplexVector, SpectralDecomposition,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Maximum `|a_ij - conj(a_ji)|` accepted before symmetrization.
    pub hermiticity_tol: f64,
    /// Slack on eigenvalue sign checks (`A <= B` iff `min eig(B - A) >= -psd_tol`).
    pub psd_tol: f64,
    /// Eigenvalues within `spectral_rtol * dim` of 0 or 1 count as 0 or 1.
    pub spectral_rtol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { hermiticity_tol: 1e-9, psd_tol: 1e-9, spectral_rtol: 1e-10 }
    }
}

impl ToleranceConfig {
    pub fn eigen_threshold(&self, dim: usize) -> f64 {
        self.spectral_rtol * dim.max(1) as f64
    }
}

#[derive(Debug, Clone)]
pub struct Effect {
    matrix: ComplexMatrix,
    cfg: ToleranceConfig,
    eigenvalues: Vec<f64>,
    spectral: OnceLock<SpectralDecomposition>,
}

/// Checks hermiticity and spectrum, symmetrizes, and clamps the spectrum
/// into `[0, 1]`.
pub fn validate_effect(m: ComplexMatrix, cfg: &ToleranceConfig) -> Result<Effect> {
    Effect::validate(m, cfg)
}

impl Effect {
    pub fn validate(m: ComplexMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let deviation = hermiticity_deviation(&m);
        if deviation > cfg.hermiticity_tol {
            return Err(Error::NotHermitian { deviation, tol: cfg.hermiticity_tol });
        }
        let m = hermitize(&m);
        let eigenvalues = linalg::eigenvalues(&m)?;
        let (lo, hi) = match (eigenvalues.first(), eigenvalues.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => return Ok(Self::from_parts(m, *cfg, eigenvalues)),
        };
        if lo < -cfg.psd_tol {
            return Err(Error::SpectrumOutOfRange { eigenvalue: lo, tol: cfg.psd_tol });
        }
        if hi > 1.0 + cfg.psd_tol {
            return Err(Error::SpectrumOutOfRange { eigenvalue: hi, tol: cfg.psd_tol });
        }
        if lo >= 0.0 && hi <= 1.0 {
            return Ok(Self::from_parts(m, *cfg, eigenvalues));
        }
        let mut sd = linalg::spectral_decomposition(&m)?;
        for v in sd.eigenvalues.iter_mut() {
            *v = v.clamp(0.0, 1.0);
        }
        let clamped = sd.reconstruct();
        Ok(Self::with_spectral(clamped, *cfg, sd))
    }

    fn from_parts(matrix: ComplexMatrix, cfg: ToleranceConfig, eigenvalues: Vec<f64>) -> Self {
        Self { matrix, cfg, eigenvalues, spectral: OnceLock::new() }
    }

    fn with_spectral(matrix: ComplexMatrix, cfg: ToleranceConfig, sd: SpectralDecomposition) -> Self {
        let eigenvalues = sd.eigenvalues.clone();
        let spectral = OnceLock::new();
        let _ = spectral.set(sd);
        Self { matrix, cfg, eigenvalues, spectral }
    }

    /// Effect `f(A)` for a map `f: [0,1] -> [0,1]` applied through the spectral
    /// decomposition of `self`.
    fn map_spectrum<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        let sd = self.spectral()?;
        let mut mapped = sd.clone();
        for v in mapped.eigenvalues.iter_mut() {
            *v = f(*v).clamp(0.0, 1.0);
        }
        let matrix = mapped.reconstruct();
        let mut order: Vec<usize> = (0..mapped.dim()).collect();
        order.sort_by(|&a, &b| mapped.eigenvalues[a].total_cmp(&mapped.eigenvalues[b]));
        if order.iter().enumerate().any(|(i, &k)| i != k) {
            let vals = order.iter().map(|&k| mapped.eigenvalues[k]).collect();
            let mut vecs = ComplexMatrix::zeros(mapped.dim(), mapped.dim());
            for (dst, &src) in order.iter().enumerate() {
                vecs.set_column(dst, &mapped.eigenvectors.column(src));
            }
            mapped = SpectralDecomposition { eigenvalues: vals, eigenvectors: vecs };
        }
        Ok(Self::with_spectral(matrix, self.cfg, mapped))
    }

    pub fn from_diagonal(values: &[f64], cfg: &ToleranceConfig) -> Result<Self> {
        Self::validate(linalg::real_diag(values), cfg)
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_parts(ComplexMatrix::zeros(dim, dim), ToleranceConfig::default(), vec![0.0; dim])
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_parts(
            ComplexMatrix::identity(dim, dim),
            ToleranceConfig::default(),
            vec![1.0; dim],
        )
    }

    /// `c * I` for `c` in `[0, 1]`.
    pub fn scaled_identity(dim: usize, c: f64) -> Result<Self> {
        Self::from_diagonal(&vec![c; dim], &ToleranceConfig::default())
    }

    /// `P[phi]` for a unit vector `phi`.
    pub fn projector(phi: &ComplexVector, cfg: &ToleranceConfig) -> Result<Self> {
        check_unit(phi, cfg.psd_tol)?;
        Self::validate(linalg::outer(phi), cfg)
    }

    pub fn with_config(mut self, cfg: &ToleranceConfig) -> Self {
        self.cfg = *cfg;
        self
    }

    pub fn config(&self) -> &ToleranceConfig {
        &self.cfg
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Ascending, clamped to `[0, 1]` only if validation had to clamp.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn spectral(&self) -> Result<&SpectralDecomposition> {
        if let Some(s) = self.spectral.get() {
            return Ok(s);
        }
        let s = linalg::spectral_decomposition(&self.matrix)?;
        Ok(self.spectral.get_or_init(|| s))
    }

    /// Equal to the largest eigenvalue since effects are positive.
    pub fn operator_norm(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0).max(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.operator_norm() <= self.cfg.psd_tol
    }

    pub fn is_identity(&self) -> bool {
        self.min_eigenvalue() >= 1.0 - self.cfg.psd_tol
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0 || self.is_zero() || self.is_identity()
    }

    /// `A' = I - A`.
    pub fn complement(&self) -> Self {
        let d = self.dim();
        let matrix = ComplexMatrix::identity(d, d) - &self.matrix;
        let eigenvalues = self.eigenvalues.iter().rev().map(|v| 1.0 - v).collect();
        Self::from_parts(matrix, self.cfg, eigenvalues)
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.map_spectrum(f64::sqrt)
    }

    /// Spectrum extends strictly below and above one half.
    pub fn is_regular(&self) -> Result<bool> {
        if self.is_trivial() {
            return Err(Error::TrivialEffect);
        }
        let tol = self.cfg.psd_tol;
        Ok(self.min_eigenvalue() < 0.5 - tol && self.operator_norm() > 0.5 + tol)
    }

    fn is_extreme_eigenvalue(&self, lam: f64) -> bool {
        let thr = self.cfg.eigen_threshold(self.dim());
        lam <= thr || lam >= 1.0 - thr
    }

    /// `A` and `I - A` with the 0- and 1-eigenspaces of `A` removed.
    pub fn reduced_operators(&self) -> Result<(Self, Self)> {
        let reduced = self.map_spectrum(|l| if self.is_extreme_eigenvalue(l) { 0.0 } else { l })?;
        let reduced_complement =
            self.map_spectrum(|l| if self.is_extreme_eigenvalue(l) { 0.0 } else { 1.0 - l })?;
        Ok((reduced, reduced_complement))
    }

    /// The infimum `A ∧ (I - A)` in the effect order, if it exists.
    ///
    /// It exists exactly when the reduced operators are comparable, and then
    /// equals `min(λ, 1 - λ)` applied to the spectrum of `A`.
    pub fn infimum_with_complement(&self) -> Result<Option<Self>> {
        let (reduced, reduced_complement) = self.reduced_operators()?;
        let comparable = psd_leq(&reduced, &reduced_complement, &self.cfg)?
            || psd_leq(&reduced_complement, &reduced, &self.cfg)?;
        if !comparable {
            return Ok(None);
        }
        self.map_spectrum(|l| l.min(1.0 - l)).map(Some)
    }

    /// Greatest lower bound of an invertible `A` and the rank-one projector
    /// `P[phi]`: `λ P[phi]` with `λ = 1 / <phi, A^{-1} phi>`.
    pub fn glb_with_rank1(&self, phi: &ComplexVector) -> Result<(f64, Self)> {
        let d = self.dim();
        if phi.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: phi.len() });
        }
        check_unit(phi, self.cfg.psd_tol)?;
        let min_eigenvalue = self.min_eigenvalue();
        if min_eigenvalue <= self.cfg.psd_tol {
            return Err(Error::NotInvertible { min_eigenvalue });
        }
        let sd = self.spectral()?;
        let coeffs = sd.eigenvectors.adjoint() * phi;
        let quad: f64 = coeffs
            .iter()
            .zip(&sd.eigenvalues)
            .map(|(c, &l)| c.norm_sqr() / l)
            .sum();
        let lambda = (1.0 / quad).min(1.0);
        let bound = Self::validate(linalg::outer(phi).scale(lambda), &self.cfg)?;
        Ok((lambda, bound))
    }

    /// Sum of effects; validated, so the sum must still be below `I`.
    pub fn sum<'a, I>(dim: usize, effects: I, cfg: &ToleranceConfig) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Effect>,
    {
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for e in effects {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.dim() });
            }
            acc += &e.matrix;
        }
        Self::validate(acc, cfg)
    }

    /// `<phi, A phi>`, real since `A` is Hermitian.
    pub fn expectation(&self, phi: &ComplexVector) -> f64 {
        linalg::expectation(&self.matrix, phi).re
    }
}

pub fn operator_norm(a: &Effect) -> f64 {
    a.operator_norm()
}

pub fn complement(a: &Effect) -> Effect {
    a.complement()
}

pub fn sqrt_effect(a: &Effect) -> Result<Effect> {
    a.sqrt()
}

fn check_unit(phi: &ComplexVector, tol: f64) -> Result<()> {
    let norm = phi.norm();
    if (norm - 1.0).abs() > tol.max(1e-12) {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

fn same_dim(a: &Effect, b: &Effect) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

/// `A <= B` in the positive-operator order.
pub fn psd_leq(a: &Effect, b: &Effect, cfg: &ToleranceConfig) -> Result<bool> {
    same_dim(a, b)?;
    let diff = b.matrix() - a.matrix();
    Ok(linalg::min_eigenvalue(&diff)? >= -cfg.psd_tol)
}

/// `C <= A` and `C <= B`.
pub fn is_lower_bound(c: &Effect, a: &Effect, b: &Effect, cfg: &ToleranceConfig) -> Result<bool> {
    same_dim(a, b)?;
    Ok(psd_leq(c, a, cfg)? && psd_leq(c, b, cfg)?)
}

pub fn is_regular(a: &Effect) -> Result<bool> {
    a.is_regular()
}

pub fn reduced_operators(a: &Effect) -> Result<(Effect, Effect)> {
    a.reduced_operators()
}

pub fn infimum_with_complement(a: &Effect) -> Result<Option<Effect>> {
    a.infimum_with_complement()
}

pub fn glb_with_rank1(a: &Effect, phi: &ComplexVector) -> Result<(f64, Effect)> {
    a.glb_with_rank1(phi)
}

/// Unit vector from real amplitudes, for tests and the CLI.
pub fn real_unit_vector(amplitudes: &[f64]) -> Result<ComplexVector> {
    let v = ComplexVector::from_iterator(
        amplitudes.len(),
        amplitudes.iter().map(|&a| Complex64::new(a, 0.0)),
    );
    let n = v.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::InvalidParameter("zero vector".into()));
    }
    Ok(v.unscale(n))
}

//! Two-photon coherent states `|β; μ, ν>`: overlaps with coherent states,
//! Husimi densities, Cartesian and angle margins.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase_space::{Axis, RealRegion};
use crate::quadrature::composite_rule;
use crate::special::{erf, exp_times_one_plus_erf};

/// Tolerance on `|μ|² - |ν|² = 1`.
pub const UNIMODULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcsParams {
    beta: Complex64,
    mu: Complex64,
    nu: Complex64,
}

impl TcsParams {
    pub fn new(beta: Complex64, mu: Complex64, nu: Complex64) -> Result<Self> {
        if ![beta.re, beta.im, mu.re, mu.im, nu.re, nu.im].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let defect = mu.norm_sqr() - nu.norm_sqr() - 1.0;
        if defect.abs() > UNIMODULAR_TOL * mu.norm_sqr().max(1.0) {
            return Err(Error::InvalidParameter(format!("|μ|² - |ν|² - 1 = {defect:e}")));
        }
        Ok(Self { beta, mu, nu })
    }

    /// `μ = 1/√(1-|w|²)` real and `ν = wμ`.
    pub fn from_w(beta: Complex64, w: Complex64) -> Result<Self> {
        if !(w.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!("|w| = {} is not below 1", w.norm())));
        }
        let mu = 1.0 / (1.0 - w.norm_sqr()).sqrt();
        Self::new(beta, Complex64::new(mu, 0.0), w * mu)
    }

    /// `μ = cosh r`, `ν = e^{iφ} sinh r`.
    pub fn squeezed(beta: Complex64, r: f64, phase: f64) -> Result<Self> {
        Self::new(beta, Complex64::new(r.cosh(), 0.0), Complex64::from_polar(r.sinh(), phase))
    }

    pub fn coherent(beta: Complex64) -> Self {
        Self { beta, mu: Complex64::new(1.0, 0.0), nu: Complex64::new(0.0, 0.0) }
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn nu(&self) -> Complex64 {
        self.nu
    }

    /// `γ = μ̄β - νβ̄`.
    pub fn gamma(&self) -> Complex64 {
        self.mu.conj() * self.beta - self.nu * self.beta.conj()
    }

    /// `w = ν/μ`.
    pub fn w(&self) -> Complex64 {
        self.nu / self.mu
    }

    /// Same `μ, ν` with `β` replaced.
    pub fn with_beta(&self, beta: Complex64) -> Self {
        Self { beta, ..*self }
    }

    /// Centred copy: `β = 0`.
    pub fn centred(&self) -> Self {
        self.with_beta(Complex64::new(0.0, 0.0))
    }
}

/// `<z|β;μ,ν>` with the principal branch of `√μ`.
pub fn tcs_overlap(p: &TcsParams, z: Complex64) -> Complex64 {
    let (b, mu, nu) = (p.beta, p.mu, p.nu);
    let zc = z.conj();
    let exponent = -0.5 * z.norm_sqr() - 0.5 * b.norm_sqr() - nu / (2.0 * mu) * zc * zc
        + nu.conj() / (2.0 * mu) * b * b
        + zc * b / mu;
    exponent.exp() / mu.sqrt()
}

/// Husimi density `|<z|β;μ,ν>|² = (1/|μ|) exp[-|z'|² - Re(w z̄'²)]`, `z' = z - γ`.
pub fn q_density(p: &TcsParams, z: Complex64) -> f64 {
    let zp = z - p.gamma();
    let zc = zp.conj();
    (-zp.norm_sqr() - (p.w() * zc * zc).re).exp() / p.mu.norm()
}

/// Mean and variance of the Gaussian Cartesian margin along `axis`.
fn margin_moments(p: &TcsParams, axis: Axis) -> (f64, f64) {
    let g = p.gamma();
    (
        match axis {
            Axis::X => g.re,
            Axis::Y => g.im,
        },
        marginal_variance(p, axis),
    )
}

/// `Var_x = (1 - Re w)/(2(1 - |w|²))`, `Var_y = (1 + Re w)/(2(1 - |w|²))`.
pub fn marginal_variance(p: &TcsParams, axis: Axis) -> f64 {
    let w = p.w();
    let sign = match axis {
        Axis::X => -1.0,
        Axis::Y => 1.0,
    };
    (1.0 + sign * w.re) / (2.0 * (1.0 - w.norm_sqr()))
}

/// `Var_x Var_y = (1 - (Re w)²)/(4(1 - |w|²)²)`.
pub fn uncertainty_product(p: &TcsParams) -> f64 {
    marginal_variance(p, Axis::X) * marginal_variance(p, Axis::Y)
}

/// Density of the Cartesian margin at `t`.
pub fn cartesian_marginal_density(p: &TcsParams, axis: Axis, t: f64) -> f64 {
    let (mean, var) = margin_moments(p, axis);
    (-(t - mean).powi(2) / (2.0 * var)).exp() / (TAU * var).sqrt()
}

/// Probability that the Cartesian margin falls in `region`.
pub fn cartesian_marginal_prob(p: &TcsParams, axis: Axis, region: &RealRegion) -> f64 {
    let (mean, var) = margin_moments(p, axis);
    let scale = 1.0 / (2.0 * var).sqrt();
    region
        .intervals()
        .iter()
        .map(|&(a, b)| 0.5 * (erf((b - mean) * scale) - erf((a - mean) * scale)))
        .sum()
}

/// Angle-margin density `g(θ) = (1/π)∫_0^∞ Q(re^{iθ}) r dr` in closed form.
///
/// With `s = |β|`, `φ = arg β`:
/// `g = (1/|μ|) e^{-(1-|w|cos(2φ-θ_μ-θ_ν))s²} [1/(2πa) + b e^{b²/a}(1+erf(b/√a))/(2√π a^{3/2})]`,
/// `a = 1 + |w|cos(2θ+θ_μ-θ_ν)`, `b = s cos(θ+θ_μ-φ)/|μ|`.
pub fn angle_density(p: &TcsParams, theta: f64) -> f64 {
    let s = p.beta.norm();
    let phi = p.beta.arg();
    let (theta_mu, theta_nu) = (p.mu.arg(), p.nu.arg());
    let wn = p.w().norm();
    let mu_abs = p.mu.norm();
    let e = -(1.0 - wn * (2.0 * phi - theta_mu - theta_nu).cos()) * s * s;
    let a = 1.0 + wn * (2.0 * theta + theta_mu - theta_nu).cos();
    let b = s * (theta + theta_mu - phi).cos() / mu_abs;
    let first = e.exp() / (TAU * a);
    let second = if b == 0.0 {
        0.0
    } else {
        b / (2.0 * PI.sqrt() * a.powf(1.5)) * exp_times_one_plus_erf(e + b * b / a, b / a.sqrt())
    };
    ((first + second) / mu_abs).max(0.0)
}

/// Peak locations of the angle density in the two limiting families.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitFamily {
    /// Coherent states `s e^{iφ}` with growing `s`; one peak at `φ`.
    Coherent { phi: f64, amplitudes: Vec<f64> },
    /// Squeezed vacua `β = 0`, `μ = e^{iθ_μ}cosh r`, `ν = e^{iθ_ν}sinh r` with
    /// growing `|ν| = sinh r`; two peaks at `(θ_ν - θ_μ)/2 + π/2` mod π.
    Squeezed { theta_mu: f64, theta_nu: f64, nu_moduli: Vec<f64> },
}

impl LimitFamily {
    fn members(&self) -> Result<Vec<(f64, TcsParams)>> {
        match self {
            Self::Coherent { phi, amplitudes } => Ok(amplitudes
                .iter()
                .map(|&s| (s, TcsParams::coherent(Complex64::from_polar(s, *phi))))
                .collect()),
            Self::Squeezed { theta_mu, theta_nu, nu_moduli } => nu_moduli
                .iter()
                .map(|&n| {
                    let mu = Complex64::from_polar((1.0 + n * n).sqrt(), *theta_mu);
                    let nu = Complex64::from_polar(n, *theta_nu);
                    TcsParams::new(Complex64::new(0.0, 0.0), mu, nu).map(|p| (n, p))
                })
                .collect(),
        }
    }

    pub fn peaks(&self) -> Vec<f64> {
        match self {
            Self::Coherent { phi, .. } => vec![phi.rem_euclid(TAU)],
            Self::Squeezed { theta_mu, theta_nu, .. } => {
                let first = ((theta_nu - theta_mu) / 2.0 + PI / 2.0).rem_euclid(PI);
                vec![first, first + PI]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationSample {
    /// `s` for the coherent family, `|ν|` for the squeezed family.
    pub parameter: f64,
    pub total_mass: f64,
    /// Mass within `half_width` of each predicted peak.
    pub window_masses: Vec<f64>,
}

/// Composite Gauss–Legendre integral of the angle density over `[a, b]`.
pub fn angle_mass(p: &TcsParams, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = composite_rule(a, b, panels, 16);
    x.iter().zip(&w).map(|(&t, &wt)| wt * angle_density(p, t)).sum()
}

/// Total mass and window masses around the predicted peaks along a family.
/// `panels` sets the composite quadrature resolution on `[0, 2π)`.
pub fn angle_density_limits(family: &LimitFamily, half_width: f64, panels: usize) -> Result<Vec<ConcentrationSample>> {
    if !(half_width > 0.0 && half_width < PI / 2.0) {
        return Err(Error::InvalidParameter(format!("window half-width {half_width} not in (0, π/2)")));
    }
    if panels == 0 {
        return Err(Error::InvalidParameter("panels must be positive".into()));
    }
    let peaks = family.peaks();
    let window_panels = (panels as f64 * half_width / PI).ceil().max(8.0) as usize;
    family
        .members()?
        .into_iter()
        .map(|(parameter, p)| {
            let total_mass = angle_mass(&p, 0.0, TAU, panels);
            let window_masses = peaks
                .iter()
                .map(|&c| angle_mass(&p, c - half_width, c + half_width, window_panels))
                .collect();
            Ok(ConcentrationSample { parameter, total_mass, window_masses })
        })
        .collect()
}

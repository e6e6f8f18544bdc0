//! Seeded generators for randomized sweeps. All draws go through
//! `ChaCha8Rng`, so a seed fixes every sample on every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::arcs::ArcSet;
use crate::effect::{Effect, ToleranceConfig};
use crate::error::Result;
use crate::linalg::{self, ComplexMatrix, ComplexVector};
use crate::phase_space::PolarRegion;
use crate::povm::PartitionPovm;
use crate::tcs::TcsParams;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut SeededRng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_unit_vector(d: usize, rng: &mut SeededRng) -> ComplexVector {
    loop {
        let v = ComplexVector::from_fn(d, |_, _| gaussian(rng));
        let n = v.norm();
        if n > 1e-8 {
            return v.unscale(n);
        }
    }
}

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix.
pub fn random_unitary(d: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `U diag(values) U*` for a Haar-random `U`.
pub fn random_effect_with_spectrum(values: &[f64], rng: &mut SeededRng) -> Result<Effect> {
    let u = random_unitary(values.len(), rng);
    let m = &u * linalg::real_diag(values) * u.adjoint();
    Effect::validate(linalg::hermitize(&m), &ToleranceConfig::default())
}

/// Random effect whose eigenvalues are uniform on `[0, 1]`, with each one
/// replaced by an exact 0 or 1 with probability `edge_prob`.
pub fn random_effect(d: usize, edge_prob: f64, rng: &mut SeededRng) -> Result<Effect> {
    let values: Vec<f64> = (0..d)
        .map(|_| {
            if rng.random::<f64>() < edge_prob {
                if rng.random::<bool>() {
                    1.0
                } else {
                    0.0
                }
            } else {
                rng.random::<f64>()
            }
        })
        .collect();
    random_effect_with_spectrum(&values, rng)
}

/// Union of up to `max_arcs` random arcs with total length strictly between
/// 0 and 2π.
pub fn random_arcset(max_arcs: usize, rng: &mut SeededRng) -> ArcSet {
    loop {
        let k = rng.random_range(1..=max_arcs.max(1));
        let arcs: Vec<(f64, f64)> = (0..k)
            .map(|_| {
                let a = rng.random_range(0.0..std::f64::consts::TAU);
                (a, a + rng.random_range(0.05..3.0))
            })
            .collect();
        let x = ArcSet::new(arcs).expect("random arcs are finite and ordered");
        if !x.is_full() && x.length() > 0.0 {
            return x;
        }
    }
}

/// A random POVM with `n` outcomes on `ℂ^d`: sharp (random basis split into
/// groups) with probability `sharp_prob`, otherwise `S^{-1/2} R_i S^{-1/2}`
/// normalized from random positive `R_i`.
pub fn random_povm(n: usize, d: usize, sharp_prob: f64, rng: &mut SeededRng) -> Result<PartitionPovm> {
    let cfg = ToleranceConfig::default();
    if rng.random::<f64>() < sharp_prob {
        let u = random_unitary(d, rng);
        let mut groups = vec![Vec::new(); n];
        for k in 0..d {
            groups[rng.random_range(0..n)].push(k);
        }
        return PartitionPovm::projective(&u, &groups, None, &cfg);
    }
    // ranks add up to at least d so that the sum is invertible
    let mut remaining = d;
    let parts: Vec<ComplexMatrix> = (0..n)
        .map(|i| {
            let drawn = rng.random_range(1..=d);
            let rank = if i + 1 == n { drawn.max(remaining) } else { drawn };
            remaining = remaining.saturating_sub(rank);
            let g = ComplexMatrix::from_fn(d, rank, |_, _| gaussian(rng));
            &g * g.adjoint()
        })
        .collect();
    let total = parts.iter().fold(ComplexMatrix::zeros(d, d), |a, b| a + b);
    let inv_sqrt = linalg::spectral_decomposition(&total)?.apply(|x| 1.0 / x.sqrt());
    let effects = parts
        .iter()
        .map(|r| Effect::validate(linalg::hermitize(&(&inv_sqrt * r * &inv_sqrt)), &cfg))
        .collect::<Result<Vec<_>>>()?;
    PartitionPovm::from_effects(effects, &cfg)
}

/// `β` uniform in the disk of radius `beta_max`, `w` uniform in the disk of
/// radius `w_max`.
pub fn random_tcs(beta_max: f64, w_max: f64, rng: &mut SeededRng) -> Result<TcsParams> {
    let beta = Complex64::from_polar(beta_max * rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
    let w = Complex64::from_polar(w_max * rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let p = TcsParams::from_w(beta, w)?;
    // rotate μ and ν together so that arg μ is not always 0
    TcsParams::new(beta, p.mu() * Complex64::from_polar(1.0, phase), p.nu() * Complex64::from_polar(1.0, phase))
}

/// Annular sector with `r2 <= r_max` and a single random arc.
pub fn random_polar_region(r_max: f64, rng: &mut SeededRng) -> PolarRegion {
    let r1 = rng.random_range(0.0..0.7 * r_max);
    let r2 = rng.random_range(r1 + 0.05 * r_max..=r_max);
    let a = rng.random_range(0.0..std::f64::consts::TAU);
    let arc = ArcSet::single(a, a + rng.random_range(0.1..std::f64::consts::TAU - 0.1)).expect("valid arc");
    PolarRegion::new(r1, r2, arc).expect("ordered radii")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded(7);
        let u = random_unitary(5, &mut rng);
        let err = linalg::max_abs_diff(&(&u * u.adjoint()), &ComplexMatrix::identity(5, 5));
        assert!(err < 1e-13);
    }

    #[test]
    fn same_seed_same_draws() {
        let a = random_effect(4, 0.2, &mut seeded(11)).unwrap();
        let b = random_effect(4, 0.2, &mut seeded(11)).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn povms_are_normalized() {
        let mut rng = seeded(3);
        for k in 0..20 {
            let p = random_povm(2 + k % 3, 3, 0.5, &mut rng).unwrap();
            assert_eq!(p.len(), 2 + k % 3);
        }
    }
}

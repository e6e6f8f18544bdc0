use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use povmkit::arcs::ArcSet;
use povmkit::effect::{psd_leq, real_unit_vector, Effect, ToleranceConfig};
use povmkit::linalg::{self, ComplexMatrix};
use povmkit::phase::{elementary_eigenvalues, phase_effect, GramKernel, Truncation};
use povmkit::phase_space::coherent_state;
use povmkit::povm::{distribution_variance, epsilon_decider, spectrum_endpoints_check, CheckMode, PartitionPovm, StateVector};
use povmkit::random;
use povmkit::Error;

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn half_circle_partition(g: &GramKernel, d: usize) -> PartitionPovm {
    let upper = ArcSet::single(0.0, PI).unwrap();
    let lower = upper.complement();
    let t = Truncation::new(d).unwrap();
    PartitionPovm::from_effects(vec![phase_effect(g, &upper, t).unwrap(), phase_effect(g, &lower, t).unwrap()], &cfg()).unwrap()
}

fn counterexample(lambda: f64) -> PartitionPovm {
    let a = Effect::from_diagonal(&[lambda, 1.0 - lambda], &cfg()).unwrap();
    PartitionPovm::from_effects(vec![a.clone(), a.complement()], &cfg()).unwrap()
}

#[test]
fn algebra_of_subsets() {
    let p = random::random_povm(4, 3, 0.0, &mut random::seeded(2)).unwrap();
    assert!(p.algebra_effect(&[]).unwrap().is_zero());
    assert!(linalg::max_abs_diff(p.algebra_effect(&[0, 1, 2, 3]).unwrap().matrix(), &ComplexMatrix::identity(3, 3)) < 1e-12);
    let a = p.algebra_effect(&[0, 2]).unwrap();
    let b = p.algebra_effect(&[1, 3]).unwrap();
    assert!(linalg::max_abs_diff(a.complement().matrix(), b.matrix()) < 1e-12);
    assert!(matches!(p.algebra_effect(&[4]), Err(Error::InvalidParameter(_))));
}

#[test]
fn unnormalized_effects_are_rejected() {
    let a = Effect::from_diagonal(&[0.5, 0.5], &cfg()).unwrap();
    assert!(matches!(
        PartitionPovm::from_effects(vec![a.clone(), a.clone(), a], &cfg()),
        Err(Error::NotNormalizedPovm { .. })
    ));
}

#[test]
fn norm1_property_examples() {
    let phi = real_unit_vector(&[1.0, 1.0, 0.0]).unwrap();
    let p = Effect::projector(&phi, &cfg()).unwrap();
    let sharp = PartitionPovm::from_effects(vec![p.clone(), p.complement()], &cfg()).unwrap();
    assert!(sharp.has_norm1_property().unwrap());
    assert!(sharp.is_regular_povm().unwrap());

    let el = half_circle_partition(&GramKernel::elementary(0, 1, Complex64::new(0.5, 0.0)).unwrap(), 8);
    assert!(!el.has_norm1_property().unwrap());
    assert!(el.norm1_implies_regular_check().unwrap());

    let half = Effect::scaled_identity(2, 0.5).unwrap();
    let halves = PartitionPovm::from_effects(vec![half.clone(), half], &cfg()).unwrap();
    assert!(!halves.has_norm1_property().unwrap());
}

#[test]
fn regular_povm_without_norm1_property() {
    let p = counterexample(0.3);
    assert!(p.is_regular_povm().unwrap());
    assert!(!p.has_norm1_property().unwrap());
    assert!(p.norm1_implies_regular_check().unwrap());
    let norms = p.algebra_norms().unwrap();
    assert!(norms.iter().any(|&(_, n)| (n - 0.7).abs() < 1e-12));

    let quarter = Effect::scaled_identity(2, 0.25).unwrap();
    let q = PartitionPovm::from_effects(vec![quarter.clone(), quarter.complement()], &cfg()).unwrap();
    assert!(!q.is_regular_povm().unwrap());
}

#[test]
fn epsilon_decider_examples() {
    let phi = real_unit_vector(&[0.0, 3.0, 4.0]).unwrap();
    let p = Effect::projector(&phi, &cfg()).unwrap();
    let psi = epsilon_decider(&p, 0.01).unwrap();
    assert!((p.expectation(psi.as_vector()) - 1.0).abs() < 1e-12);

    let z = Complex64::new(0.5, 0.0);
    let x = ArcSet::single(0.0, PI).unwrap();
    let e = phase_effect(&GramKernel::elementary(0, 1, z).unwrap(), &x, Truncation::new(8).unwrap()).unwrap();
    let e_plus = elementary_eigenvalues(0, 1, z, &x).unwrap().plus;
    assert!(matches!(epsilon_decider(&e, 0.5 * (1.0 - e_plus)), Err(Error::NotDecidable { .. })));
    let psi = epsilon_decider(&e, 1.0 - e_plus + 1e-3).unwrap();
    assert!((e.expectation(psi.as_vector()) - e_plus).abs() < 1e-12);

    let canonical = phase_effect(&GramKernel::Canonical, &x, Truncation::new(128).unwrap()).unwrap();
    let psi = epsilon_decider(&canonical, 0.1).unwrap();
    assert!(canonical.expectation(psi.as_vector()) >= 0.9);
}

#[test]
fn spectrum_endpoints_examples() {
    let phi = real_unit_vector(&[1.0, 0.0]).unwrap();
    let p = Effect::projector(&phi, &cfg()).unwrap();
    assert!(spectrum_endpoints_check(&p, CheckMode::Exact).unwrap());
    let d = Effect::from_diagonal(&[0.0, 1.0, 0.5], &cfg()).unwrap();
    assert!(spectrum_endpoints_check(&d, CheckMode::Exact).unwrap());
    let x = ArcSet::single(0.0, PI).unwrap();
    let c = phase_effect(&GramKernel::Canonical, &x, Truncation::new(256).unwrap()).unwrap();
    assert!(spectrum_endpoints_check(&c, CheckMode::Asymptotic).unwrap());
    assert!(matches!(spectrum_endpoints_check(&Effect::identity(2), CheckMode::Exact), Err(Error::TrivialEffect)));
}

#[test]
fn variance_examples() {
    let basis = ComplexMatrix::identity(2, 2);
    let p = PartitionPovm::projective(&basis, &[vec![0], vec![1]], Some(&[0.0, 1.0]), &cfg()).unwrap();
    let e0 = StateVector::new(basis.column(0).into_owned()).unwrap();
    assert_eq!(p.variance(&e0).unwrap(), 0.0);
    let third = 1.0 / 3.0;
    assert!((distribution_variance(&[-1.0, 0.0, 1.0], &[third, third, third]) - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(distribution_variance(&[-1.0, 0.0, 1.0], &[0.0, 1.0, 0.0]), 0.0);
    let unlabeled = counterexample(0.3);
    assert!(matches!(unlabeled.variance(&e0), Err(Error::InvalidParameter(_))));
}

#[test]
fn lueders_map_examples() {
    let p = random::random_povm(3, 4, 0.0, &mut random::seeded(12)).unwrap();
    let id = p.lueders_coarse_graining(&Effect::identity(4)).unwrap();
    assert!(linalg::max_abs_diff(id.matrix(), &ComplexMatrix::identity(4, 4)) < 1e-12);

    // projections with a commuting B leave B unchanged
    let basis = ComplexMatrix::identity(3, 3);
    let sharp = PartitionPovm::projective(&basis, &[vec![0, 2], vec![1]], None, &cfg()).unwrap();
    let b = Effect::from_diagonal(&[0.2, 0.9, 0.4], &cfg()).unwrap();
    assert!(linalg::max_abs_diff(sharp.lueders_coarse_graining(&b).unwrap().matrix(), b.matrix()) < 1e-14);

    // canonical half-circle partition against dense arithmetic with explicit roots
    let c = half_circle_partition(&GramKernel::Canonical, 64);
    let ramp: Vec<f64> = (0..64).map(|k| k as f64 / 63.0).collect();
    let b = Effect::from_diagonal(&ramp, &cfg()).unwrap();
    let mut expected = ComplexMatrix::zeros(64, 64);
    for a in c.effects() {
        let s = linalg::spectral_decomposition(a.matrix()).unwrap();
        let root = s.apply(|x| x.max(0.0).sqrt());
        expected += &root * b.matrix() * &root;
    }
    assert!(linalg::max_abs_diff(c.lueders_coarse_graining(&b).unwrap().matrix(), &expected) < 1e-12);
}

#[test]
fn coarse_graining_gaps() {
    let basis = ComplexMatrix::identity(3, 3);
    let sharp = PartitionPovm::projective(&basis, &[vec![0], vec![1, 2]], None, &cfg()).unwrap();
    let b = Effect::from_diagonal(&[0.3, 0.6, 0.9], &cfg()).unwrap();
    let psi = StateVector::new(basis.column(0).into_owned()).unwrap();
    let gaps = sharp.coarse_graining_limit_check(&b, &[psi.clone(), psi], 0).unwrap();
    assert!(gaps.iter().all(|g| g.gap == 0.0));

    // coherent states aimed at the middle of the upper half circle
    let d = 160;
    let c = half_circle_partition(&GramKernel::Canonical, d);
    let ramp: Vec<f64> = (0..d).map(|k| 0.5 + 0.5 * (k as f64 / d as f64)).collect();
    let b = Effect::from_diagonal(&ramp, &cfg()).unwrap();
    let states: Vec<StateVector> = [0.5, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&s| StateVector::normalized(coherent_state(Complex64::from_polar(s, PI / 2.0), d)).unwrap())
        .collect();
    let gaps = c.coarse_graining_limit_check(&b, &states, 0).unwrap();
    assert!(gaps.windows(2).all(|w| w[1].gap < w[0].gap));
    assert!(gaps.last().unwrap().gap < 1e-2);
    for g in &gaps {
        assert!(g.gap <= g.tight_bound + 1e-14 && g.tight_bound <= g.bound + 1e-14);
    }
}

#[test]
fn povm_round_trips_through_a_directory() {
    let p = random::random_povm(3, 3, 0.0, &mut random::seeded(21)).unwrap();
    let dir = std::env::temp_dir().join(format!("povmkit-roundtrip-{}", std::process::id()));
    p.write_dir(&dir).unwrap();
    let q = PartitionPovm::read_dir(&dir, &cfg()).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(p.len(), q.len());
    for (a, b) in p.effects().iter().zip(q.effects()) {
        assert!(linalg::max_abs_diff(a.matrix(), b.matrix()) < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn norm1_implies_regular(n in 2usize..=5, d in 2usize..=5, seed in any::<u64>()) {
        let p = random::random_povm(n, d, 0.5, &mut random::seeded(seed)).unwrap();
        prop_assert!(p.norm1_implies_regular_check().unwrap());
    }

    #[test]
    fn norm1_matches_decidability(n in 2usize..=4, d in 2usize..=4, seed in any::<u64>()) {
        let p = random::random_povm(n, d, 0.5, &mut random::seeded(seed)).unwrap();
        // decidable for every ε: the fixed levels, plus one below the smallest norm gap
        let mut effects = Vec::new();
        for mask in 1u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let e = p.algebra_effect(&subset).unwrap();
            if !e.is_zero() {
                effects.push(e);
            }
        }
        let gap = effects.iter().map(|e| 1.0 - e.operator_norm()).fold(0.0, f64::max);
        let mut levels = vec![0.1, 0.01, 1e-6, 1e-9];
        if gap > 2e-9 {
            levels.push(gap / 2.0);
        }
        let decidable = effects.iter().all(|e| levels.iter().all(|&eps| epsilon_decider(e, eps).is_ok()));
        prop_assert_eq!(p.has_norm1_property().unwrap(), decidable);
    }

    #[test]
    fn norm1_effects_reach_both_spectrum_ends(n in 2usize..=4, d in 2usize..=4, seed in any::<u64>()) {
        let p = random::random_povm(n, d, 0.7, &mut random::seeded(seed)).unwrap();
        if p.has_norm1_property().unwrap() {
            for mask in 1u32..(1 << n) {
                let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let e = p.algebra_effect(&subset).unwrap();
                if !e.is_trivial() && e.complement().operator_norm() >= 1.0 - 1e-9 {
                    prop_assert!(spectrum_endpoints_check(&e, CheckMode::Exact).unwrap());
                }
            }
        }
    }

    #[test]
    fn variance_is_nonnegative(n in 2usize..=5, d in 2usize..=5, seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let p = random::random_povm(n, d, 0.5, &mut rng).unwrap();
        let values: Vec<f64> = (0..n).map(|i| (i as f64 * 1.7).sin() * 3.0).collect();
        let p = PartitionPovm::with_values(p.effects().to_vec(), &values, &cfg()).unwrap();
        let phi = StateVector::normalized(random::random_unit_vector(d, &mut rng)).unwrap();
        prop_assert!(p.variance(&phi).unwrap() >= 0.0);
    }

    #[test]
    fn lueders_map_is_unital_and_monotone(n in 2usize..=4, d in 2usize..=4, seed in any::<u64>(), t in 0.0..1.0f64) {
        let mut rng = random::seeded(seed);
        let p = random::random_povm(n, d, 0.3, &mut rng).unwrap();
        let b2 = random::random_effect(d, 0.1, &mut rng).unwrap();
        let b1 = Effect::validate(b2.matrix().scale(t), &cfg()).unwrap();
        let u1 = p.lueders_coarse_graining(&b1).unwrap();
        let u2 = p.lueders_coarse_graining(&b2).unwrap();
        prop_assert!(psd_leq(&u1, &u2, &cfg()).unwrap());
        let id = p.lueders_coarse_graining(&Effect::identity(d)).unwrap();
        prop_assert!(linalg::max_abs_diff(id.matrix(), &ComplexMatrix::identity(d, d)) < 1e-10);
    }
}

#[test]
fn half_circle_partition_sums_to_identity() {
    for d in [4, 16, 33] {
        let c = half_circle_partition(&GramKernel::Canonical, d);
        let sum = c.effects()[0].matrix() + c.effects()[1].matrix();
        assert!(linalg::max_abs_diff(&sum, &ComplexMatrix::identity(d, d)) < 1e-14);
    }
}

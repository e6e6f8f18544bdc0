//! Finite-outcome POVMs and the predicates that live on the finite algebra
//! they generate: norm-1 property, regularity, ε-decidability.

use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::effect::{Effect, ToleranceConfig};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ComplexVector};

/// Exhaustive subset enumeration limit (2^20 algebra elements).
pub const MAX_OUTCOMES: usize = 20;

/// Exact models: a nonzero algebra effect has the norm-1 property if its
/// norm is at least `1 - NORM1_EXACT_TOL`.
pub const NORM1_EXACT_TOL: f64 = 1e-9;

/// Exact finite-dimensional models versus truncations of infinite-dimensional
/// observables, whose norms fall short of 1 by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckMode {
    #[default]
    Exact,
    Asymptotic,
}

impl CheckMode {
    pub fn endpoint_tol(self) -> f64 {
        match self {
            Self::Exact => 1e-9,
            Self::Asymptotic => 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(ComplexVector);

impl StateVector {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(v: ComplexVector) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(v))
    }

    pub fn normalized(v: ComplexVector) -> Result<Self> {
        let norm = v.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(v.unscale(norm)))
    }

    pub fn as_vector(&self) -> &ComplexVector {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub label: String,
    pub value: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct PartitionPovm {
    outcomes: Vec<Outcome>,
    effects: Vec<Effect>,
    cfg: ToleranceConfig,
}

impl PartitionPovm {
    pub fn new(outcomes: Vec<Outcome>, effects: Vec<Effect>, cfg: &ToleranceConfig) -> Result<Self> {
        if outcomes.len() != effects.len() {
            return Err(Error::DimensionMismatch { expected: outcomes.len(), found: effects.len() });
        }
        let dim = effects.first().map(Effect::dim).ok_or_else(|| {
            Error::InvalidParameter("a POVM needs at least one outcome".into())
        })?;
        let mut total = ComplexMatrix::zeros(dim, dim);
        for e in &effects {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.dim() });
            }
            total += e.matrix();
        }
        total -= ComplexMatrix::identity(dim, dim);
        let vals = linalg::eigenvalues(&linalg::hermitize(&total))?;
        let deviation = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let tol = cfg.psd_tol * effects.len() as f64;
        if deviation > tol {
            return Err(Error::NotNormalizedPovm { deviation, tol });
        }
        let effects = effects.into_iter().map(|e| e.with_config(cfg)).collect();
        Ok(Self { outcomes, effects, cfg: *cfg })
    }

    /// Outcomes labelled `0..n`.
    pub fn from_effects(effects: Vec<Effect>, cfg: &ToleranceConfig) -> Result<Self> {
        let outcomes = (0..effects.len())
            .map(|i| Outcome { label: i.to_string(), value: None })
            .collect();
        Self::new(outcomes, effects, cfg)
    }

    /// Real-valued outcomes `values[i]`.
    pub fn with_values(effects: Vec<Effect>, values: &[f64], cfg: &ToleranceConfig) -> Result<Self> {
        let outcomes = values
            .iter()
            .map(|&v| Outcome { label: format!("{v}"), value: Some(v) })
            .collect();
        Self::new(outcomes, effects, cfg)
    }

    /// Sharp observable: outcome `i` is the projector onto the columns of
    /// `basis` listed in `groups[i]`.
    pub fn projective(basis: &ComplexMatrix, groups: &[Vec<usize>], values: Option<&[f64]>, cfg: &ToleranceConfig) -> Result<Self> {
        let d = basis.nrows();
        let mut effects = Vec::with_capacity(groups.len());
        for g in groups {
            let mut p = ComplexMatrix::zeros(d, d);
            for &k in g {
                let col = basis.column(k).into_owned();
                p += linalg::outer(&col);
            }
            effects.push(Effect::validate(p, cfg)?);
        }
        match values {
            Some(v) => Self::with_values(effects, v, cfg),
            None => Self::from_effects(effects, cfg),
        }
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn config(&self) -> &ToleranceConfig {
        &self.cfg
    }

    /// `E(∪_{i in subset} X_i)`.
    pub fn algebra_effect(&self, subset: &[usize]) -> Result<Effect> {
        for &i in subset {
            if i >= self.len() {
                return Err(Error::InvalidParameter(format!("outcome index {i} out of range")));
            }
        }
        let mut seen = vec![false; self.len()];
        let picked = subset.iter().filter(|&&i| !std::mem::replace(&mut seen[i], true));
        Effect::sum(self.dim(), picked.map(|&i| &self.effects[i]), &self.cfg)
    }

    fn mask_effect(&self, mask: u32) -> Result<Effect> {
        let picked = (0..self.len()).filter(|i| mask >> i & 1 == 1).map(|i| &self.effects[i]);
        Effect::sum(self.dim(), picked, &self.cfg)
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.len() > MAX_OUTCOMES {
            return Err(Error::TooManyOutcomes { count: self.len(), max: MAX_OUTCOMES });
        }
        Ok(())
    }

    /// `(subset mask, algebra effect)` summary for every nonempty subset,
    /// reduced with `f` in parallel.
    fn for_all_subsets<F>(&self, f: F) -> Result<bool>
    where
        F: Fn(&Effect) -> Result<bool> + Sync,
    {
        self.check_enumerable()?;
        let count = 1u32 << self.len();
        (1..count)
            .into_par_iter()
            .map(|mask| self.mask_effect(mask).and_then(|e| f(&e)))
            .try_reduce(|| true, |a, b| Ok(a && b))
    }

    /// Norms of all nonzero algebra effects, by subset bit mask.
    pub fn algebra_norms(&self) -> Result<Vec<(u32, f64)>> {
        self.check_enumerable()?;
        let count = 1u32 << self.len();
        let norms: Result<Vec<(u32, f64)>> = (1..count)
            .into_par_iter()
            .map(|mask| self.mask_effect(mask).map(|e| (mask, e.operator_norm())))
            .collect();
        Ok(norms?.into_iter().filter(|&(_, n)| n > self.cfg.psd_tol).collect())
    }

    /// Every nonzero algebra effect has norm 1 (exact mode threshold).
    pub fn has_norm1_property(&self) -> Result<bool> {
        let tol = self.cfg.psd_tol;
        self.for_all_subsets(|e| Ok(e.is_zero() || e.operator_norm() >= 1.0 - NORM1_EXACT_TOL.max(tol)))
    }

    /// Every nontrivial algebra effect is regular.
    pub fn is_regular_povm(&self) -> Result<bool> {
        self.for_all_subsets(|e| if e.is_trivial() { Ok(true) } else { e.is_regular() })
    }

    /// `norm-1 ⇒ regular` evaluated on this POVM.
    pub fn norm1_implies_regular_check(&self) -> Result<bool> {
        Ok(!self.has_norm1_property()? || self.is_regular_povm()?)
    }

    /// `Var(E, φ) = Σ x_i² p_i - (Σ x_i p_i)²` with `p_i = <φ, A_i φ>`.
    pub fn variance(&self, phi: &StateVector) -> Result<f64> {
        if phi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: phi.dim() });
        }
        let values = self
            .outcomes
            .iter()
            .map(|o| o.value.ok_or_else(|| Error::InvalidParameter(format!("outcome '{}' has no value", o.label))))
            .collect::<Result<Vec<f64>>>()?;
        let probs: Vec<f64> = self.effects.iter().map(|e| e.expectation(phi.as_vector())).collect();
        Ok(distribution_variance(&values, &probs))
    }

    /// `u_C(B) = Σ_i A_i^{1/2} B A_i^{1/2}`.
    pub fn lueders_coarse_graining(&self, b: &Effect) -> Result<Effect> {
        if b.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: b.dim() });
        }
        let mut acc = ComplexMatrix::zeros(self.dim(), self.dim());
        for a in &self.effects {
            let r = a.sqrt()?;
            acc += r.matrix() * b.matrix() * r.matrix();
        }
        Effect::validate(acc, &self.cfg)
    }

    /// Along states concentrating on outcome `i`, the gap between
    /// `<ψ, u_C(B) ψ>` and `<ψ, A_i^{1/2} B A_i^{1/2} ψ>`.
    pub fn coarse_graining_limit_check(&self, b: &Effect, states: &[StateVector], i: usize) -> Result<Vec<GapSample>> {
        if i >= self.len() {
            return Err(Error::InvalidParameter(format!("outcome index {i} out of range")));
        }
        let roots = self.effects.iter().map(Effect::sqrt).collect::<Result<Vec<_>>>()?;
        let b_norm = b.operator_norm();
        let mut out: Vec<GapSample> = Vec::with_capacity(states.len());
        for (step, psi) in states.iter().enumerate() {
            if psi.dim() != self.dim() {
                return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
            }
            let v = psi.as_vector();
            let probability = self.effects[i].expectation(v);
            if let Some(prev) = out.last() {
                if probability < prev.probability - 1e-12 {
                    return Err(Error::SequenceNotConcentrating { index: i, step });
                }
            }
            let mut gap = 0.0;
            let mut bound = 0.0;
            let mut tight_bound = 0.0;
            for (j, r) in roots.iter().enumerate() {
                if j == i {
                    continue;
                }
                let w = r.matrix() * v;
                gap += linalg::expectation(b.matrix(), &w).re;
                let n = w.norm();
                bound += b_norm * n;
                tight_bound += b_norm * n * n;
            }
            out.push(GapSample { probability, gap: gap.abs(), bound, tight_bound });
        }
        if let (Some(last), true) = (out.last(), out.len() > 1) {
            if last.probability <= out[0].probability && last.probability < 1.0 - 1e-12 {
                return Err(Error::SequenceNotConcentrating { index: i, step: out.len() - 1 });
            }
        }
        Ok(out)
    }

    /// Writes `manifest.txt` (`label,value,filename` per line) and one matrix
    /// CSV per outcome into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut manifest = BufWriter::new(fs::File::create(dir.join("manifest.txt"))?);
        for (k, (o, e)) in self.outcomes.iter().zip(&self.effects).enumerate() {
            let file = format!("effect_{k}.csv");
            let value = o.value.map(|v| format!("{v:e}")).unwrap_or_default();
            writeln!(manifest, "{},{},{}", o.label, value, file)?;
            let w = BufWriter::new(fs::File::create(dir.join(&file))?);
            linalg::write_matrix_csv(e.matrix(), w)?;
        }
        manifest.flush()?;
        Ok(())
    }

    pub fn read_dir(dir: &Path, cfg: &ToleranceConfig) -> Result<Self> {
        let text = fs::read_to_string(dir.join("manifest.txt"))?;
        let mut outcomes = Vec::new();
        let mut effects = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!("manifest line {}: expected label,value,filename", lineno + 1)));
            }
            let value = if fields[1].is_empty() {
                None
            } else {
                Some(fields[1].parse::<f64>().map_err(|e| Error::Parse(format!("manifest line {}: {e}", lineno + 1)))?)
            };
            let m = linalg::read_matrix_csv(BufReader::new(fs::File::open(dir.join(fields[2]))?))?;
            outcomes.push(Outcome { label: fields[0].to_string(), value });
            effects.push(Effect::validate(m, cfg)?);
        }
        Self::new(outcomes, effects, cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSample {
    /// `<ψ, A_i ψ>`.
    pub probability: f64,
    pub gap: f64,
    /// `||B|| Σ_{j≠i} ||A_j^{1/2} ψ||`.
    pub bound: f64,
    /// `||B|| Σ_{j≠i} ||A_j^{1/2} ψ||²`.
    pub tight_bound: f64,
}

/// Variance of a discrete distribution, computed around the mean so that
/// the result is never negative.
pub fn distribution_variance(values: &[f64], probs: &[f64]) -> f64 {
    let mean: f64 = values.iter().zip(probs).map(|(x, p)| x * p).sum();
    values.iter().zip(probs).map(|(x, p)| p * (x - mean).powi(2)).sum()
}

/// Top eigenvector of `A` if `||A|| >= 1 - ε`; it gives outcome probability
/// `||A||`.
pub fn epsilon_decider(a: &Effect, epsilon: f64) -> Result<StateVector> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} not in (0, 1)")));
    }
    let norm = a.operator_norm();
    if norm < 1.0 - epsilon {
        return Err(Error::NotDecidable { norm, epsilon });
    }
    StateVector::normalized(a.spectral()?.top_eigenvector())
}

/// `min σ(A) <= tol` and `max σ(A) >= 1 - tol` for a nontrivial effect.
pub fn spectrum_endpoints_check(a: &Effect, mode: CheckMode) -> Result<bool> {
    if a.is_trivial() {
        return Err(Error::TrivialEffect);
    }
    let tol = mode.endpoint_tol();
    Ok(a.min_eigenvalue() <= tol && a.operator_norm() >= 1.0 - tol)
}

/// One row of the variance construction: the state decides
/// `E((x-η, x+η))` at level `ε = η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceDemoRow {
    pub eta: f64,
    pub probability: f64,
    pub variance: f64,
    /// `15 η α³`.
    pub bound: f64,
}

/// Sharp POM with `grid` equally spaced values on `[-α, α]` (one basis
/// vector per value), evaluated at the midpoint `x = 0` for each `η`.
pub fn variance_demo(alpha: f64, grid: usize, etas: &[f64]) -> Result<Vec<VarianceDemoRow>> {
    if !(alpha > 0.0 && alpha.is_finite()) || grid < 2 {
        return Err(Error::InvalidParameter(format!("need α > 0 and at least 2 grid points, got α = {alpha}, grid = {grid}")));
    }
    let cfg = ToleranceConfig::default();
    let values: Vec<f64> = (0..grid).map(|i| -alpha + 2.0 * alpha * i as f64 / (grid - 1) as f64).collect();
    let basis = ComplexMatrix::identity(grid, grid);
    let groups: Vec<Vec<usize>> = (0..grid).map(|i| vec![i]).collect();
    let pom = PartitionPovm::projective(&basis, &groups, Some(&values), &cfg)?;
    let centre = 0.0;
    etas.iter()
        .map(|&eta| {
            let window: Vec<usize> = (0..grid).filter(|&i| (values[i] - centre).abs() < eta).collect();
            let effect = pom.algebra_effect(&window)?;
            let phi = epsilon_decider(&effect, eta)?;
            Ok(VarianceDemoRow {
                eta,
                probability: effect.expectation(phi.as_vector()),
                variance: pom.variance(&phi)?,
                bound: 15.0 * eta * alpha.powi(3),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effect::real_unit_vector;
    use crate::linalg::real_diag;
    use num_complex::Complex64;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn diag(v: &[f64]) -> Effect {
        Effect::from_diagonal(v, &cfg()).unwrap()
    }

    fn two_outcome(a: Effect) -> PartitionPovm {
        let b = a.complement();
        PartitionPovm::from_effects(vec![a, b], &cfg()).unwrap()
    }

    #[test]
    fn algebra_effect_examples() {
        let p = two_outcome(diag(&[0.3, 0.9, 0.0]));
        assert!(p.algebra_effect(&[]).unwrap().is_zero());
        assert!(p.algebra_effect(&[0, 1]).unwrap().is_identity());
        let a = p.algebra_effect(&[0]).unwrap();
        let b = p.algebra_effect(&[1]).unwrap();
        assert!(linalg::max_abs_diff(b.matrix(), a.complement().matrix()) < 1e-15);
        assert!(p.algebra_effect(&[2]).is_err());
    }

    #[test]
    fn non_normalized_rejected() {
        let r = PartitionPovm::from_effects(vec![diag(&[0.5, 0.5]), diag(&[0.4, 0.5])], &cfg());
        assert!(matches!(r, Err(Error::NotNormalizedPovm { .. })));
    }

    #[test]
    fn norm1_examples() {
        let proj = two_outcome(diag(&[1.0, 0.0, 1.0]));
        assert!(proj.has_norm1_property().unwrap());
        assert!(proj.is_regular_povm().unwrap());
        let halves = two_outcome(diag(&[0.5, 0.5]));
        assert!(!halves.has_norm1_property().unwrap());
    }

    #[test]
    fn regular_but_not_norm1_counterexample() {
        // A = 0.3 P[φ] + 0.7 P[ψ] with φ ⊥ ψ
        let phi = real_unit_vector(&[1.0, 1.0]).unwrap();
        let psi = real_unit_vector(&[1.0, -1.0]).unwrap();
        let m = linalg::outer(&phi).scale(0.3) + linalg::outer(&psi).scale(0.7);
        let a = Effect::validate(m, &cfg()).unwrap();
        let p = two_outcome(a);
        assert!(p.is_regular_povm().unwrap());
        assert!(!p.has_norm1_property().unwrap());
        assert!(p.norm1_implies_regular_check().unwrap());
        let quarter = two_outcome(diag(&[0.25, 0.25]));
        assert!(!quarter.is_regular_povm().unwrap());
    }

    #[test]
    fn too_many_outcomes() {
        let effects: Vec<Effect> = (0..21).map(|_| diag(&[1.0 / 21.0])).collect();
        let p = PartitionPovm::from_effects(effects, &cfg()).unwrap();
        assert!(matches!(p.has_norm1_property(), Err(Error::TooManyOutcomes { .. })));
    }

    #[test]
    fn decider_examples() {
        let phi = real_unit_vector(&[0.6, 0.8]).unwrap();
        let p = Effect::projector(&phi, &cfg()).unwrap();
        let got = epsilon_decider(&p, 0.01).unwrap();
        assert!((p.expectation(got.as_vector()) - 1.0).abs() < 1e-14);
        let e = diag(&[0.2, 0.6]);
        assert!(matches!(epsilon_decider(&e, 0.3), Err(Error::NotDecidable { .. })));
        assert!(epsilon_decider(&e, 0.5).is_ok());
    }

    #[test]
    fn endpoints_examples() {
        assert!(spectrum_endpoints_check(&diag(&[0.0, 1.0]), CheckMode::Exact).unwrap());
        assert!(spectrum_endpoints_check(&diag(&[0.0, 1.0, 0.5]), CheckMode::Exact).unwrap());
        assert!(!spectrum_endpoints_check(&diag(&[0.1, 1.0]), CheckMode::Exact).unwrap());
        assert!(matches!(
            spectrum_endpoints_check(&Effect::identity(2), CheckMode::Exact),
            Err(Error::TrivialEffect)
        ));
    }

    #[test]
    fn variance_examples() {
        let p = PartitionPovm::with_values(vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])], &[0.0, 1.0], &cfg()).unwrap();
        let e0 = StateVector::new(real_unit_vector(&[1.0, 0.0]).unwrap()).unwrap();
        assert_eq!(p.variance(&e0).unwrap(), 0.0);
        let third = 1.0 / 3.0;
        assert!((distribution_variance(&[-1.0, 0.0, 1.0], &[third; 3]) - 2.0 / 3.0).abs() < 1e-15);
        let unlabeled = two_outcome(diag(&[1.0, 0.0]));
        assert!(unlabeled.variance(&e0).is_err());
    }

    #[test]
    fn variance_demo_respects_bound() {
        let rows = variance_demo(2.0, 401, &[0.1, 0.01]).unwrap();
        for r in &rows {
            assert!(r.variance <= r.bound);
            assert!((r.probability - 1.0).abs() < 1e-12);
        }
        assert!(rows[1].variance <= rows[0].variance);
        assert!(variance_demo(2.0, 1, &[0.1]).is_err());
    }

    #[test]
    fn lueders_examples() {
        let p = two_outcome(diag(&[1.0, 0.0, 1.0]));
        let id = p.lueders_coarse_graining(&Effect::identity(3)).unwrap();
        assert!(id.is_identity());
        let b = diag(&[0.2, 0.5, 0.9]);
        let u = p.lueders_coarse_graining(&b).unwrap();
        assert!(linalg::max_abs_diff(u.matrix(), b.matrix()) < 1e-14);
    }

    #[test]
    fn limit_check_projective_gap_is_zero() {
        let p = two_outcome(diag(&[1.0, 1.0, 0.0]));
        let b = Effect::validate(
            {
                let mut m = real_diag(&[0.5, 0.5, 0.5]);
                m[(0, 2)] = Complex64::new(0.2, 0.0);
                m[(2, 0)] = Complex64::new(0.2, 0.0);
                m
            },
            &cfg(),
        )
        .unwrap();
        let states: Vec<StateVector> = [[1.0, 0.0, 0.0], [0.6, 0.8, 0.0]]
            .iter()
            .map(|a| StateVector::new(real_unit_vector(a).unwrap()).unwrap())
            .collect();
        let gaps = p.coarse_graining_limit_check(&b, &states, 0).unwrap();
        assert!(gaps.iter().all(|g| g.gap < 1e-15));
    }

    #[test]
    fn limit_check_rejects_receding_sequence() {
        let p = two_outcome(diag(&[0.9, 0.1]));
        let states: Vec<StateVector> = [[1.0, 0.0], [0.0, 1.0]]
            .iter()
            .map(|a| StateVector::new(real_unit_vector(a).unwrap()).unwrap())
            .collect();
        let r = p.coarse_graining_limit_check(&diag(&[0.5, 0.5]), &states, 0);
        assert!(matches!(r, Err(Error::SequenceNotConcentrating { .. })));
    }

    #[test]
    fn manifest_round_trip() {
        let dir = std::env::temp_dir().join(format!("povmkit-manifest-{}", std::process::id()));
        let p = PartitionPovm::with_values(vec![diag(&[0.25, 1.0]), diag(&[0.75, 0.0])], &[-1.0, 2.5], &cfg()).unwrap();
        p.write_dir(&dir).unwrap();
        let q = PartitionPovm::read_dir(&dir, &cfg()).unwrap();
        assert_eq!(q.outcomes(), p.outcomes());
        for (a, b) in p.effects().iter().zip(q.effects()) {
            assert!(linalg::max_abs_diff(a.matrix(), b.matrix()) == 0.0);
        }
        std::fs::remove_dir_all(&dir).ok();
    }
}

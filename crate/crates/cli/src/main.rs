//! `povmkit` command-line driver. Every subcommand writes one CSV table.

mod args;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::Rng;

use povmkit::arcs::ArcSet;
use povmkit::effect::{Effect, ToleranceConfig};
use povmkit::linalg::{self, ComplexVector};
use povmkit::measure::{cantor_effect_norm, BorelDescriptor, FatCantorModel, IntervalUnion};
use povmkit::phase::{canonical_norm_scan, covariance_check, phase_effect, GramKernel, Truncation};
use povmkit::phase_space::{
    angle_margin, angle_margin_norm1_probe, cartesian_margin_effect, number_margin, phase_space_effect, Axis, PolarRegion,
    RealRegion,
};
use povmkit::povm::{variance_demo, PartitionPovm};
use povmkit::random::{self, SeededRng};
use povmkit::tcs::{angle_density, angle_density_limits, marginal_variance, uncertainty_product, LimitFamily, TcsParams};
use povmkit::Error;

use args::parse_complex;
use output::{emit, Destination, Table};

#[derive(Parser)]
#[command(name = "povmkit", version, about = "Numerical experiments on effects, POVMs and the norm-1 property")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random draw; echoed in the output header.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the table to this file instead of the default destination.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Directory receiving `<subcommand>.csv` when no --output is given.
    /// Without it the table goes to standard output.
    #[arg(long, global = true, env = "POVMKIT_OUTPUT_DIR")]
    out_dir: Option<PathBuf>,
    /// Hermiticity tolerance for user-supplied matrices.
    #[arg(long, global = true)]
    hermiticity_tol: Option<f64>,
    /// Tolerance of positive-semidefinite checks.
    #[arg(long, global = true)]
    psd_tol: Option<f64>,
    /// Relative threshold for treating eigenvalues as exactly 0 or 1.
    #[arg(long, global = true)]
    spectral_rtol: Option<f64>,
}

impl Global {
    fn tolerances(&self) -> ToleranceConfig {
        let mut cfg = ToleranceConfig::default();
        if let Some(t) = self.hermiticity_tol {
            cfg.hermiticity_tol = t;
        }
        if let Some(t) = self.psd_tol {
            cfg.psd_tol = t;
        }
        if let Some(t) = self.spectral_rtol {
            cfg.spectral_rtol = t;
        }
        cfg
    }

    fn destination(&self, command: &str) -> Destination {
        match (&self.output, &self.out_dir) {
            (Some(path), _) => Destination::File(path.clone()),
            (None, Some(dir)) => Destination::File(dir.join(format!("{command}.csv"))),
            (None, None) => Destination::Stdout,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Norms of truncated phase effects E(X) over a list of sizes
    /// (drives phase::canonical_norm_scan and phase::phase_effect).
    PhaseNorms(PhaseNorms),
    /// Eigenvalues of a truncated phase effect (drives phase::phase_effect).
    PhaseSpectrum(PhaseSpectrum),
    /// Infimum of an effect and its complement, if it exists
    /// (drives Effect::infimum_with_complement).
    Infimum(Infimum),
    /// Greatest lower bound of an effect and a rank-one projection
    /// (drives Effect::glb_with_rank1).
    #[command(name = "glb-rank1")]
    Glb(GlbRank1),
    /// Norm-1 and regularity checks on a finite POVM (drives
    /// PartitionPovm::has_norm1_property and PartitionPovm::is_regular_povm).
    PovmCheck(PovmCheck),
    /// Spectrum of a phase-space observable or one of its margins (drives
    /// phase_space::phase_space_effect, number_margin, angle_margin and
    /// cartesian_margin_effect).
    Margins(Margins),
    /// Coherent-state probabilities of an angle-margin effect (drives
    /// phase_space::angle_margin_norm1_probe).
    AngleProbe(AngleProbe),
    /// Marginal variances and their product for two-photon coherent states
    /// (drives tcs::marginal_variance and tcs::uncertainty_product).
    TcsTable(TcsTable),
    /// Angle density of a two-photon coherent state, or its concentration
    /// along a limiting family (drives tcs::angle_density and
    /// tcs::angle_density_limits).
    AngleDensity(AngleDensity),
    /// Norm of E(X) in the fat-Cantor multiplication model, with measure
    /// brackets (drives measure::cantor_effect_norm).
    Cantor(Cantor),
    /// Deviation from the shift covariance identity of a phase effect
    /// (drives phase::covariance_check).
    CovarianceCheck(CovarianceCheck),
    /// Variance bound for states deciding a window of a sharp observable
    /// (drives povm::variance_demo).
    VarianceDemo(VarianceDemo),
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Canonical,
    Trivial,
    Elementary,
}

#[derive(Args)]
struct KernelArgs {
    /// Gram kernel of the phase observable.
    #[arg(long, value_enum, default_value = "canonical")]
    kind: KernelKind,
    /// First index of the elementary kernel.
    #[arg(long, default_value_t = 0)]
    s: usize,
    /// Second index of the elementary kernel.
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Off-diagonal entry of the elementary kernel (a+bi or r@angle).
    #[arg(long, value_parser = parse_complex, default_value = "0.5")]
    z: Complex64,
}

impl KernelArgs {
    fn kernel(&self) -> Result<GramKernel, Error> {
        Ok(match self.kind {
            KernelKind::Canonical => GramKernel::Canonical,
            KernelKind::Trivial => GramKernel::Trivial,
            KernelKind::Elementary => GramKernel::elementary(self.s, self.t, self.z)?,
        })
    }
}

fn parse_arcs(s: &str) -> Result<ArcSet, String> {
    ArcSet::parse(s, false).map_err(|e| e.to_string())
}

#[derive(Args)]
struct PhaseNorms {
    #[command(flatten)]
    kernel: KernelArgs,
    /// Arc set, e.g. `0:pi` or `0:pi/4,pi:3pi/2`.
    #[arg(long, value_parser = parse_arcs, default_value = "0:pi")]
    arc: ArcSet,
    /// Truncation sizes.
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128")]
    dims: Vec<usize>,
}

#[derive(Args)]
struct PhaseSpectrum {
    #[command(flatten)]
    kernel: KernelArgs,
    #[arg(long, value_parser = parse_arcs, default_value = "0:pi")]
    arc: ArcSet,
    /// Truncation size.
    #[arg(long, short, default_value_t = 16)]
    d: usize,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
struct EffectSource {
    /// Diagonal effect from a list of eigenvalues.
    #[arg(long, value_delimiter = ',', group = "source")]
    diag: Option<Vec<f64>>,
    /// Effect read from a CSV of `re,im` pairs per row.
    #[arg(long, group = "source")]
    matrix: Option<PathBuf>,
    /// Random effect of this dimension drawn from the seed.
    #[arg(long, group = "source")]
    random_dim: Option<usize>,
}

impl EffectSource {
    fn load(&self, cfg: &ToleranceConfig, rng: &mut SeededRng) -> Result<Effect, Error> {
        if let Some(v) = &self.diag {
            return Effect::from_diagonal(v, cfg);
        }
        if let Some(path) = &self.matrix {
            let file = std::fs::File::open(path)?;
            let m = linalg::read_matrix_csv(std::io::BufReader::new(file))?;
            return Effect::validate(m, cfg);
        }
        let d = self.random_dim.expect("clap enforces one source");
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        Ok(random::random_effect(d, 0.2, rng)?.with_config(cfg))
    }
}

#[derive(Args)]
struct Infimum {
    #[command(flatten)]
    source: EffectSource,
    /// Also write the infimum matrix to this CSV file when it exists.
    #[arg(long)]
    write_matrix: Option<PathBuf>,
}

#[derive(Args)]
struct GlbRank1 {
    #[command(flatten)]
    source: EffectSource,
    /// Real amplitudes of φ (normalized); random from the seed if omitted.
    #[arg(long, value_delimiter = ',')]
    phi: Option<Vec<f64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    /// Half-circle partition of the elementary phase observable.
    Elementary,
    /// {A, I-A} with A = λP[φ] + (1-λ)P[ψ].
    Counterexample,
    /// Half-circle partition of the canonical phase observable.
    CanonicalHalf,
    /// Random sharp POVM.
    Projective,
    /// Random POVM, sharp or unsharp.
    Random,
}

#[derive(Args)]
struct PovmCheck {
    /// Built-in POVM family.
    #[arg(long, value_enum, default_value = "counterexample", conflicts_with = "dir")]
    builtin: Builtin,
    /// Directory with manifest.txt and one effect CSV per outcome.
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Hilbert space dimension for the built-in families.
    #[arg(long, short, default_value_t = 8)]
    d: usize,
    /// Number of outcomes for the random families.
    #[arg(long, default_value_t = 3)]
    outcomes: usize,
    /// Weight λ of the counterexample.
    #[arg(long, default_value_t = 0.3)]
    lambda: f64,
    /// Write the checked POVM to this directory.
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MarginKind {
    /// Full phase-space observable on a polar region `r1:r2@arcs`.
    Polar,
    /// Number margin on a radial interval `r1:r2`.
    Number,
    /// Angle margin on an arc set.
    Angle,
    /// Cartesian x margin on a real region.
    X,
    /// Cartesian y margin on a real region.
    Y,
}

#[derive(Args)]
struct Margins {
    #[arg(long, value_enum, default_value = "polar")]
    kind: MarginKind,
    /// Region in the syntax of the chosen kind.
    #[arg(long, default_value = "0:1@0:pi")]
    region: String,
    #[arg(long, short, default_value_t = 16)]
    d: usize,
}

#[derive(Args)]
struct AngleProbe {
    #[arg(long, value_parser = parse_arcs, default_value = "0:pi")]
    arc: ArcSet,
    /// Direction of the coherent amplitudes; must be interior to the arcs.
    #[arg(long, default_value = "pi/2", value_parser = parse_angle_arg)]
    theta0: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
    amplitudes: Vec<f64>,
    /// Truncation; defaults to the heuristic for the largest amplitude.
    #[arg(long, short)]
    d: Option<usize>,
}

fn parse_angle_arg(s: &str) -> Result<f64, String> {
    povmkit::arcs::parse_angle(s, false).map_err(|e| e.to_string())
}

#[derive(Args)]
struct TcsTable {
    /// Values of w = ν/μ (a+bi or r@angle).
    #[arg(long, value_delimiter = ',', value_parser = parse_complex)]
    w: Vec<Complex64>,
    /// Additional random w drawn from the seed, uniform in |w| < 0.95.
    #[arg(long, default_value_t = 0)]
    random: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Coherent,
    Squeezed,
}

#[derive(Args)]
struct AngleDensity {
    /// Displacement β.
    #[arg(long, value_parser = parse_complex, default_value = "0")]
    beta: Complex64,
    /// w = ν/μ.
    #[arg(long, value_parser = parse_complex, default_value = "0")]
    w: Complex64,
    /// Number of equally spaced angles in [0, 2π).
    #[arg(long, default_value_t = 64)]
    points: usize,
    /// Report window masses along a limiting family instead.
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Amplitudes s (coherent) or moduli |ν| (squeezed).
    #[arg(long, value_delimiter = ',', default_value = "2,5,10")]
    values: Vec<f64>,
    /// Direction φ of the coherent family.
    #[arg(long, default_value_t = 1.0)]
    phi: f64,
    /// arg μ of the squeezed family.
    #[arg(long, default_value_t = 0.0)]
    theta_mu: f64,
    /// arg ν of the squeezed family.
    #[arg(long, default_value_t = 0.0)]
    theta_nu: f64,
    /// Half width of the windows around the peaks.
    #[arg(long, default_value_t = 0.3)]
    half_width: f64,
    /// Gauss–Legendre panels over the circle.
    #[arg(long, default_value_t = 1024)]
    panels: usize,
}

#[derive(Args)]
struct Cantor {
    /// Borel sets: `a:b,..`, `cantor`, `empty`, `a:b,..-cantor`, `a:b,..&cantor`.
    #[arg(long = "set")]
    sets: Vec<String>,
    /// Additional random open unions drawn from the seed.
    #[arg(long, default_value_t = 0)]
    random_opens: usize,
    /// Construction depth (at most 24).
    #[arg(long, default_value_t = 24)]
    depth: u32,
}

#[derive(Args)]
struct CovarianceCheck {
    #[command(flatten)]
    kernel: KernelArgs,
    #[arg(long, value_parser = parse_arcs, default_value = "0:pi")]
    arc: ArcSet,
    /// Shifts x in X ∔ x.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle_arg, default_value = "pi/3")]
    shifts: Vec<f64>,
    /// Additional random (arc set, shift) pairs drawn from the seed.
    #[arg(long, default_value_t = 0)]
    random: usize,
    #[arg(long, short, default_value_t = 32)]
    d: usize,
}

#[derive(Args)]
struct VarianceDemo {
    /// Support half-width α.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Number of grid values in [-α, α].
    #[arg(long, default_value_t = 401)]
    grid: usize,
    /// Window half-widths η.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.01")]
    etas: Vec<f64>,
}

fn truncation(d: usize) -> Result<Truncation, Error> {
    Truncation::new(d)
}

fn phase_norms(a: &PhaseNorms) -> Result<Table, Error> {
    let mut table = Table::new(&["d", "norm", "log10_deficit"]);
    match a.kernel.kind {
        KernelKind::Canonical => {
            for s in canonical_norm_scan(&a.arc, &a.dims)? {
                table.push(row![s.d, s.norm(), s.log10_deficit()]);
            }
        }
        _ => {
            let g = a.kernel.kernel()?;
            for &d in &a.dims {
                let norm = phase_effect(&g, &a.arc, truncation(d)?)?.operator_norm();
                table.push(row![d, norm, (1.0 - norm).log10()]);
            }
        }
    }
    Ok(table)
}

fn phase_spectrum(a: &PhaseSpectrum) -> Result<Table, Error> {
    let e = phase_effect(&a.kernel.kernel()?, &a.arc, truncation(a.d)?)?;
    let mut table = Table::new(&["k", "eigenvalue"]);
    for (k, &l) in e.eigenvalues().iter().enumerate() {
        table.push(row![k, l]);
    }
    Ok(table)
}

fn joined(values: &[f64]) -> String {
    values.iter().map(|&x| output::sig12(x)).collect::<Vec<_>>().join(";")
}

fn infimum(a: &Infimum, cfg: &ToleranceConfig, rng: &mut SeededRng) -> Result<Table, Error> {
    let e = a.source.load(cfg, rng)?;
    let mut table = Table::new(&["status", "dim", "regular", "eigenvalues"]);
    let regular = if e.is_trivial() { "trivial".to_string() } else { e.is_regular()?.to_string() };
    match e.infimum_with_complement()? {
        Some(c) => {
            if let Some(path) = &a.write_matrix {
                linalg::write_matrix_csv(c.matrix(), std::fs::File::create(path)?)?;
            }
            table.push(row!["exists", e.dim(), regular, joined(c.eigenvalues())]);
        }
        None => table.push(row!["does not exist", e.dim(), regular, ""]),
    }
    Ok(table)
}

fn glb(a: &GlbRank1, cfg: &ToleranceConfig, rng: &mut SeededRng) -> Result<Table, Error> {
    let e = a.source.load(cfg, rng)?;
    let phi: ComplexVector = match &a.phi {
        Some(v) => povmkit::effect::real_unit_vector(v)?,
        None => random::random_unit_vector(e.dim(), rng),
    };
    if phi.len() != e.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: phi.len() });
    }
    let (lambda, _) = e.glb_with_rank1(&phi)?;
    // independent check: largest t with A - tP positive semidefinite
    let p = linalg::outer(&phi);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if linalg::min_eigenvalue(&(e.matrix() - p.scale(mid)))? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut table = Table::new(&["lambda", "bisection", "difference"]);
    table.push(row![lambda, lo, lambda - lo]);
    Ok(table)
}

fn half_circle(g: &GramKernel, d: usize, cfg: &ToleranceConfig) -> Result<PartitionPovm, Error> {
    let upper = ArcSet::single(0.0, std::f64::consts::PI)?;
    let lower = upper.complement();
    let t = truncation(d)?;
    PartitionPovm::from_effects(vec![phase_effect(g, &upper, t)?, phase_effect(g, &lower, t)?], cfg)
}

fn povm_check(a: &PovmCheck, cfg: &ToleranceConfig, rng: &mut SeededRng) -> Result<Table, Error> {
    let pom = match (&a.dir, a.builtin) {
        (Some(dir), _) => PartitionPovm::read_dir(dir, cfg)?,
        (None, Builtin::Elementary) => half_circle(&GramKernel::elementary(0, 1, Complex64::new(0.5, 0.0))?, a.d, cfg)?,
        (None, Builtin::CanonicalHalf) => half_circle(&GramKernel::Canonical, a.d, cfg)?,
        (None, Builtin::Counterexample) => {
            if !(0.0..=1.0).contains(&a.lambda) {
                return Err(Error::InvalidParameter(format!("λ = {} not in [0, 1]", a.lambda)));
            }
            let u = random::random_unitary(2, rng);
            let e = Effect::validate(&u * linalg::real_diag(&[a.lambda, 1.0 - a.lambda]) * u.adjoint(), cfg)?;
            PartitionPovm::from_effects(vec![e.clone(), e.complement()], cfg)?
        }
        (None, Builtin::Projective) => random::random_povm(a.outcomes, a.d, 1.0, rng)?,
        (None, Builtin::Random) => random::random_povm(a.outcomes, a.d, 0.5, rng)?,
    };
    if let Some(dir) = &a.export {
        pom.write_dir(dir)?;
    }
    let norms = pom.algebra_norms()?;
    let min_norm = norms.iter().map(|&(_, n)| n).fold(f64::INFINITY, f64::min);
    let mut table = Table::new(&["check", "value"]);
    table.push(row!["outcomes", pom.len()]);
    table.push(row!["dim", pom.dim()]);
    table.push(row!["min_algebra_norm", min_norm]);
    table.push(row!["has_norm1_property", pom.has_norm1_property()?]);
    table.push(row!["is_regular_povm", pom.is_regular_povm()?]);
    table.push(row!["norm1_implies_regular", pom.norm1_implies_regular_check()?]);
    Ok(table)
}

fn radial_interval(s: &str) -> Result<(f64, f64), Error> {
    let r = PolarRegion::parse(s, false)?;
    if !r.angular().is_full() {
        return Err(Error::Parse(format!("number margin takes a radial interval r1:r2, got '{s}'")));
    }
    Ok(r.radial())
}

fn margins(a: &Margins) -> Result<Table, Error> {
    let t = truncation(a.d)?;
    let e = match a.kind {
        MarginKind::Polar => phase_space_effect(&PolarRegion::parse(&a.region, false)?, t)?,
        MarginKind::Number => {
            let (r1, r2) = radial_interval(&a.region)?;
            number_margin(r1, r2, t)?
        }
        MarginKind::Angle => angle_margin(&ArcSet::parse(&a.region, false)?, t)?,
        MarginKind::X => cartesian_margin_effect(&RealRegion::parse(&a.region)?, Axis::X, t)?,
        MarginKind::Y => cartesian_margin_effect(&RealRegion::parse(&a.region)?, Axis::Y, t)?,
    };
    let mut table = Table::new(&["k", "eigenvalue"]);
    for (k, &l) in e.eigenvalues().iter().enumerate() {
        table.push(row![k, l]);
    }
    Ok(table)
}

fn angle_probe(a: &AngleProbe) -> Result<Table, Error> {
    let mut table = Table::new(&["amplitude", "d", "probability", "deficit"]);
    for s in angle_margin_norm1_probe(&a.arc, a.theta0, &a.amplitudes, a.d)? {
        table.push(row![s.amplitude, s.dim, s.probability, s.deficit]);
    }
    Ok(table)
}

fn tcs_table(a: &TcsTable, rng: &mut SeededRng) -> Result<Table, Error> {
    let mut ws = a.w.clone();
    for _ in 0..a.random {
        let r = 0.95 * rng.random::<f64>().sqrt();
        ws.push(Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU)));
    }
    if ws.is_empty() {
        return Err(Error::InvalidParameter("give --w values or --random".into()));
    }
    let mut table = Table::new(&["w_re", "w_im", "var_x", "var_y", "product"]);
    for w in ws {
        let p = TcsParams::from_w(Complex64::new(0.0, 0.0), w)?;
        table.push(row![
            w.re,
            w.im,
            marginal_variance(&p, Axis::X),
            marginal_variance(&p, Axis::Y),
            uncertainty_product(&p)
        ]);
    }
    Ok(table)
}

fn angle_density_cmd(a: &AngleDensity) -> Result<Table, Error> {
    if let Some(family) = a.family {
        let fam = match family {
            Family::Coherent => LimitFamily::Coherent { phi: a.phi, amplitudes: a.values.clone() },
            Family::Squeezed => {
                LimitFamily::Squeezed { theta_mu: a.theta_mu, theta_nu: a.theta_nu, nu_moduli: a.values.clone() }
            }
        };
        let peaks = fam.peaks();
        let samples = angle_density_limits(&fam, a.half_width, a.panels)?;
        let mut table = match peaks.len() {
            1 => Table::new(&["parameter", "total_mass", "peak_0", "mass_0"]),
            _ => Table::new(&["parameter", "total_mass", "peak_0", "mass_0", "peak_1", "mass_1"]),
        };
        for s in samples {
            let mut r = row![s.parameter, s.total_mass];
            for (p, m) in peaks.iter().zip(&s.window_masses) {
                r.extend(row![*p, *m]);
            }
            table.push(r);
        }
        return Ok(table);
    }
    if a.points == 0 {
        return Err(Error::InvalidParameter("--points must be positive".into()));
    }
    let p = TcsParams::from_w(a.beta, a.w)?;
    let mut table = Table::new(&["theta", "density"]);
    for k in 0..a.points {
        let theta = std::f64::consts::TAU * k as f64 / a.points as f64;
        table.push(row![theta, angle_density(&p, theta)]);
    }
    Ok(table)
}

fn cantor(a: &Cantor, rng: &mut SeededRng) -> Result<Table, Error> {
    let model = FatCantorModel::new(a.depth)?;
    let mut sets: Vec<(String, BorelDescriptor)> =
        a.sets.iter().map(|s| BorelDescriptor::parse(s).map(|d| (s.clone(), d))).collect::<Result<_, _>>()?;
    for _ in 0..a.random_opens {
        let k = rng.random_range(1..=4);
        let parts: Vec<(f64, f64)> = (0..k)
            .map(|_| {
                let len = 10f64.powf(rng.random_range(-6.0..-0.5));
                let start = rng.random_range(0.0..1.0 - len);
                (start, start + len)
            })
            .collect();
        let label = parts.iter().map(|(x, y)| format!("{}:{}", output::sig12(*x), output::sig12(*y))).collect::<Vec<_>>();
        sets.push((label.join(" "), BorelDescriptor::Intervals(IntervalUnion::from_f64(&parts)?)));
    }
    if sets.is_empty() {
        return Err(Error::InvalidParameter("give --set or --random-opens".into()));
    }
    let mut table = Table::new(&["set", "norm", "outside_lo", "outside_hi", "inside_lo", "inside_hi"]);
    for (label, set) in sets {
        let n = cantor_effect_norm(&model, &set)?;
        table.push(row![label, n.norm, n.outside.0, n.outside.1, n.inside.0, n.inside.1]);
    }
    Ok(table)
}

fn covariance(a: &CovarianceCheck, rng: &mut SeededRng) -> Result<Table, Error> {
    let g = a.kernel.kernel()?;
    let t = truncation(a.d)?;
    let mut cases: Vec<(ArcSet, f64)> = a.shifts.iter().map(|&x| (a.arc.clone(), x)).collect();
    for _ in 0..a.random {
        let x = random::random_arcset(3, rng);
        cases.push((x, rng.random_range(-10.0..10.0)));
    }
    let mut table = Table::new(&["arcs", "shift", "d", "deviation"]);
    for (x, shift) in cases {
        let label = x.arcs().iter().map(|(p, q)| format!("{}:{}", output::sig12(*p), output::sig12(*q))).collect::<Vec<_>>();
        table.push(row![label.join(" "), shift, a.d, covariance_check(&g, &x, shift, t)?]);
    }
    Ok(table)
}

fn variance(a: &VarianceDemo) -> Result<Table, Error> {
    let mut table = Table::new(&["eta", "probability", "variance", "bound"]);
    for r in variance_demo(a.alpha, a.grid, &a.etas)? {
        table.push(row![r.eta, r.probability, r.variance, r.bound]);
    }
    Ok(table)
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = cli.global.tolerances();
    let mut rng = random::seeded(cli.global.seed);
    let (name, table) = match &cli.command {
        Command::PhaseNorms(a) => ("phase-norms", phase_norms(a)?),
        Command::PhaseSpectrum(a) => ("phase-spectrum", phase_spectrum(a)?),
        Command::Infimum(a) => ("infimum", infimum(a, &cfg, &mut rng)?),
        Command::Glb(a) => ("glb-rank1", glb(a, &cfg, &mut rng)?),
        Command::PovmCheck(a) => ("povm-check", povm_check(a, &cfg, &mut rng)?),
        Command::Margins(a) => ("margins", margins(a)?),
        Command::AngleProbe(a) => ("angle-probe", angle_probe(a)?),
        Command::TcsTable(a) => ("tcs-table", tcs_table(a, &mut rng)?),
        Command::AngleDensity(a) => ("angle-density", angle_density_cmd(a)?),
        Command::Cantor(a) => ("cantor", cantor(a, &mut rng)?),
        Command::CovarianceCheck(a) => ("covariance-check", covariance(a, &mut rng)?),
        Command::VarianceDemo(a) => ("variance-demo", variance(a)?),
    };
    emit(&cli.global.destination(name), &table.to_csv(name, cli.global.seed))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

//! One function per subcommand. Each reads its keys from the configuration,
//! runs the core routine and returns the files it wrote.

use std::f64::consts::TAU;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use opuc_core::bernstein_szego::{
    bs_density, bs_density_resolved, comparison_constant_sweep, log_spaced, minimum_length, MAX_COMPARISON_LENGTH,
    RESOLUTION_FACTOR,
};
use opuc_core::generators::{
    coulomb_family, constant, estimate_log_constant, geometric, point_mass_family, random_disk, read_sequence,
    wigner_von_neumann, write_sequence, PhaseRule,
};
use opuc_core::pruefer::{pruefer_evolve, uniform_angles};
use opuc_core::resonance::{abel_log_bound, kmax_check, pruefer_abel_sweep, resonant_angles, ResonanceConfig, ResonantAngle};
use opuc_core::scan::{
    density_peaks, detect_atoms, epsilon_energy, level_for, local_scaling_exponent, serialize_extended,
    singular_interval_scan, AtomConfig, AtomProbe, ScanConfig,
};
use opuc_core::{verblunsky_from_measure, Complex64, VerblunskySequence};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::output::{json_bytes, write_atomic, Csv, Meta};
use crate::{CliError, Command};

/// Longest sequence `scan` generates when `length` is not given.
const SCAN_DEFAULT_LENGTH: usize = 1_000_000;

struct Context<'a> {
    config: &'a Config,
    meta: Meta,
    seed: u64,
    out: &'a Path,
}

impl Context<'_> {
    fn csv(&self, name: &str, csv: Csv) -> Result<PathBuf, CliError> {
        write_atomic(self.out, name, &csv.into_bytes())
    }

    fn json<T: Serialize>(&self, name: &str, result: &T) -> Result<PathBuf, CliError> {
        write_atomic(self.out, name, &json_bytes(&self.meta, result)?)
    }

    fn new_csv(&self, header: &[&str]) -> Csv {
        Csv::new(&self.meta, header)
    }
}

pub fn dispatch(
    command: Command,
    config: &Config,
    config_bytes: &[u8],
    seed_override: Option<u64>,
    out: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let seed = match seed_override {
        Some(s) => {
            config.raw("seed");
            s
        }
        None => config.get_or("seed", 0u64)?,
    };
    let ctx = Context {
        config,
        meta: Meta::new(&command.name(), seed, config_bytes),
        seed,
        out,
    };
    let run = match command {
        Command::Generate => generate,
        Command::Evolve => evolve,
        Command::BsDensity => density,
        Command::Moments => moments,
        Command::CompareIntervals => compare_intervals,
        Command::Resonances => resonances,
        Command::KmaxCheck => kmax,
        Command::AbelBound => abel_bound,
        Command::Energy => energy,
        Command::Scan => scan,
        Command::Decompose => decompose,
        Command::Roundtrip => roundtrip,
    };
    // validate every key before the computation starts
    let job = run(&ctx)?;
    config.finish()?;
    job(&ctx)
}

type Job = Box<dyn FnOnce(&Context) -> Result<Vec<PathBuf>, CliError>>;

fn sequence(cfg: &Config, seed: u64, default_family: &str, default_length: usize) -> Result<VerblunskySequence, CliError> {
    let family = cfg.raw("family").unwrap_or(default_family).to_string();
    if family == "file" {
        let path: PathBuf = cfg
            .get("path")?
            .ok_or_else(|| CliError::usage("family = file needs `path`"))?;
        let file = File::open(&path).map_err(|e| CliError::io(&path, e))?;
        let seq = read_sequence(BufReader::new(file))?;
        return Ok(match cfg.get::<usize>("length")? {
            Some(n) => seq.truncated(n),
            None => seq,
        });
    }
    let n = cfg.get_or("length", default_length)?;
    let seq = match family.as_str() {
        "zero" => VerblunskySequence::zeros(n),
        "coulomb" => {
            let c = cfg.get_or("c", 0.2)?;
            let rule = match cfg.raw("phase").unwrap_or("zero") {
                "zero" => PhaseRule::Zero,
                "frequency" => PhaseRule::Frequency(cfg.get_or("omega", 1.0)?),
                "random" => PhaseRule::Random { seed },
                other => return Err(CliError::usage(format!("unknown phase rule `{other}`"))),
            };
            coulomb_family(c, rule, n)?
        }
        "random-disk" => random_disk(cfg.get_or("radius", 0.5)?, n, seed)?,
        "geometric" => geometric(cfg.get_or("a", 0.5)?, n)?,
        "constant" => constant(Complex64::new(cfg.get_or("a", 0.5)?, cfg.get_or("a_im", 0.0)?), n)?,
        "wvn" => wigner_von_neumann(cfg.get_or("c", 0.2)?, cfg.get_or("omega", 1.0)?, n)?,
        "point-mass" => point_mass_family(cfg.get_or("gamma", 0.3)?, n)?,
        other => return Err(CliError::usage(format!("unknown family `{other}`"))),
    };
    Ok(seq)
}

fn level(cfg: &Config, default: usize) -> Result<usize, CliError> {
    let n = cfg.get_or("n", default)?;
    if n == 0 {
        return Err(CliError::usage("`n` must be positive"));
    }
    Ok(n)
}

fn require_length(alpha: &VerblunskySequence, n: usize) -> Result<(), CliError> {
    if alpha.len() < n {
        return Err(CliError::usage(format!(
            "sequence has {} coefficients but level {n} needs at least {n}",
            alpha.len()
        )));
    }
    Ok(())
}

fn default_grid(n: usize, factor: usize) -> usize {
    (factor * n).max(64).next_power_of_two()
}

fn resonance_config(cfg: &Config) -> Result<ResonanceConfig, CliError> {
    let d = ResonanceConfig::default();
    Ok(ResonanceConfig {
        divisor: cfg.get_or("divisor", d.divisor)?,
        separation_factor: cfg.get_or("separation_factor", d.separation_factor)?,
        grid_size: cfg.get_or("grid_size", d.grid_size)?,
    })
}

fn atom_config(cfg: &Config) -> Result<AtomConfig, CliError> {
    let d = AtomConfig::default();
    Ok(AtomConfig {
        threshold: cfg.get_or("atom_threshold", d.threshold)?,
        stability: cfg.get_or("atom_stability", d.stability)?,
        growth: cfg.get_or("atom_growth", d.growth)?,
    })
}

fn generate(ctx: &Context) -> Result<Job, CliError> {
    let alpha = sequence(ctx.config, ctx.seed, "coulomb", 1000)?;
    Ok(Box::new(move |ctx| {
        let mut bytes = ctx.meta.comment().into_bytes();
        write_sequence(&alpha, &mut bytes).map_err(|e| CliError::io(ctx.out, e))?;
        Ok(vec![write_atomic(ctx.out, "sequence.txt", &bytes)?])
    }))
}

fn evolve(ctx: &Context) -> Result<Job, CliError> {
    let cfg = ctx.config;
    let n = level(cfg, 1000)?;
    let alpha = sequence(cfg, ctx.seed, "coulomb", n)?;
    let eta_count = cfg.get_or("eta_count", 64usize)?;
    let beta = cfg.get_or("beta", 0.0)?;
    let stride = cfg.get_or("stride", 1usize)?.max(1);
    Ok(Box::new(move |ctx| {
        let etas = uniform_angles(eta_count);
        let trajectories = etas
            .par_iter()
            .map(|&eta| pruefer_evolve(&alpha, eta, beta, n))
            .collect::<Result<Vec<_>, _>>()?;
        let mut csv = ctx.new_csv(&["eta", "j", "log_radius", "phase", "accumulator_re", "accumulator_im"]);
        for t in &trajectories {
            for j in (0..=n).filter(|&j| j % stride == 0 || j == n) {
                csv.row(&[
                    t.eta.into(),
                    j.into(),
                    t.radii_log[j].into(),
                    t.phases[j].into(),
                    t.accumulator[j].re.into(),
                    t.accumulator[j].im.into(),
                ]);
            }
        }
        Ok(vec![ctx.csv("evolve.csv", csv)?])
    }))
}

fn density(ctx: &Context) -> Result<Job, CliError> {
    let cfg = ctx.config;
    let n = level(cfg, 16)?;
    let alpha = sequence(cfg, ctx.seed, "coulomb", n)?;
    let grid = cfg.get_or("grid", default_grid(n, RESOLUTION_FACTOR))?;
    require_length(&alpha, n)?;
    Ok(Box::new(move |ctx| {
        let m = bs_density(&alpha, n, grid)?;
        let mut csv = ctx.new_csv(&["eta", "density"]);
        for (k, &d) in m.density().iter().enumerate() {
            csv.row(&[m.node(k).into(), d.into()]);
        }
        Ok(vec![ctx.csv("bs_density.csv", csv)?])
    }))
}

fn moments(ctx: &Context) -> Result<Job, CliError> {
    let cfg = ctx.config;
    let n = level(cfg, 16)?;
    let alpha = sequence(cfg, ctx.seed, "coulomb", n)?;
    let order = cfg.get_or("order", n)?;
    let grid = cfg.get_or("grid", default_grid(n.max(order), 64))?;
    require_length(&alpha, n)?;
    Ok(Box::new(move |ctx| {
        let m = bs_density(&alpha, n, grid)?;
        let moments = m.moments_through(order)?;
        let mut csv = ctx.new_csv(&["k", "re", "im"]);
        for (k, c) in moments.iter().enumerate() {
            csv.row(&[k.into(), c.re.into(), c.im.into()]);
        }
        Ok(vec![ctx.csv("moments.csv", csv)?])
    }))
}

fn compare_intervals(ctx: &Context) -> Result<Job, CliError> {
    let cfg = ctx.config;
    let n = level(cfg, 64)?;
    let alpha = sequence(cfg, ctx.seed, "coulomb", 2 * n)?;
    let kappa = cfg.get_or("kappa", 1.0)?;
    let lengths = cfg.get_or("lengths", 10usize)?;
    let centers = cfg.get_or("centers", 64usize)?;
    let grid = cfg.get_or("grid", default_grid(2 * n, 32))?;
    require_length(&alpha, 2 * n)?;
    Ok(Box::new(move |ctx| {
        let mu = bs_density(&alpha, 2 * n, grid)?;
        let nu = bs_density(&alpha, n, grid)?;
        let deltas = log_spaced(minimum_length(n, kappa), MAX_COMPARISON_LENGTH, lengths);
        let sweep = comparison_constant_sweep(&mu, &nu, n, kappa, &deltas, centers)?;
        let mut csv = ctx.new_csv(&["center", "delta", "mu_interval", "nu_tripled", "excess", "implied_constant"]);
        for r in &sweep.records {
            csv.row(&[
                r.interval.center.into(),
                r.delta.into(),
                r.mu_interval.into(),
                r.nu_tripled.into(),
                r.excess.into(),
                r.implied_constant.into(),
            ]);
        }
        let csv_path = ctx.csv("compare_intervals.csv", csv)?;
        Ok(vec![csv_path, ctx.json("compare_intervals.json", &SweepSummary::from(&sweep))?])
    }))
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    n: usize,
    kappa: f64,
    moment_mismatch: f64,
    moments_match: bool,
    per_length: &'a [opuc_core::bernstein_szego::LengthConstant],
    fitted_constant: f64,
    #[serde(serialize_with = "serialize_extended")]
    variation: f64,
    holds_everywhere: bool,
    samples: usize,
}

impl<'a> From<&'a opuc_core::bernstein_szego::ComparisonSweep> for SweepSummary<'a> {
    fn from(s: &'a opuc_core::bernstein_szego::ComparisonSweep) -> Self {
        Self {
            n: s.n,
            kappa: s.kappa,
            moment_mismatch: s.moment_mismatch,
            moments_match: s.moments_match,
            per_length: &s.per_length,
            fitted_constant: s.fitted_constant,
            variation: s.variation,
            holds_everywhere: s.holds_everywhere,
            samples: s.records.len(),
        }
    }
}

#[derive(Serialize)]
struct ResonanceReport {
    n: usize,
    threshold: f64,
    grid_size: usize,
    count: usize,
    angles: Vec<ResonantAngle>,
}

fn resonances(ctx: &Context) -> Result<Job, CliError> {
    let cfg = ctx.config;
    let n = level(cfg, 10_000)?;
    let alpha = sequence(cfg, ctx.seed, "coulomb", n)?;
    let rc = resonance_config(cfg)?;
    Ok(Box::new(move |ctx| {
        let angles = resonant_angles(&alpha, n, &rc)?;
        let report = ResonanceReport {
            n,
            threshold: rc.threshold(n),
            grid_size: rc.grid_size,
            count: angles.len(),
            angles,
        };
        Ok(vec![ctx.json("resonances.json", &report)?])
    }))
}

fn kmax(ctx: &Context) -> Result<Job, CliError> {
    let cfg = ctx.config;
    let n = level(cfg, 10_000)?;
    let alpha = sequence(cfg, ctx.seed, "coulomb", n)?;
    let rc = resonance_config(cfg)?;
    Ok(Box::new(move |ctx| {
        let report = kmax_check(&alpha, n, &rc)?;
        Ok(vec![ctx.json("kmax_check.json", &report)?])
    }))
}

fn abel_bound(ctx: &Context) -> Result<Job, CliError> {
    let cfg = ctx.config;
    let n = level(cfg, 100_000)?;
    let alpha = sequence(cfg, ctx.seed, "coulomb", n)?;
    let eta = cfg.get_or("eta", 1.0)?;
    let xi_min = cfg.get_or("xi_min", 1e-4)?;
    let xi_max = cfg.get_or("xi_max", 0.5)?;
    let xi_count = cfg.get_or("xi_count", 12usize)?;
    if !(xi_min > 0.0 && xi_min < xi_max) {
        return Err(CliError::usage("need 0 < xi_min < xi_max"));
    }
    Ok(Box::new(move |ctx| {
        let xis = log_spaced(xi_min, xi_max, xi_count);
        let fit = abel_log_bound(pruefer_abel_sweep(&alpha, eta, &xis, n)?)?;
        let mut csv = ctx.new_csv(&["xi", "log_inv_xi", "sup_partial", "final_re", "final_im", "abel_discrepancy"]);
        for p in &fit.points {
            csv.row(&[
                p.xi.into(),
                (-p.xi.ln()).into(),
                p.sup_partial.into(),
                p.final_partial.re.into(),
                p.final_partial.im.into(),
                p.abel_discrepancy.into(),
            ]);
        }
        let csv_path = ctx.csv("abel_bound.csv", csv)?;
        Ok(vec![csv_path, ctx.json("abel_bound.json", &fit)?])
    }))
}

fn energy(ctx: &Context) -> Result<Job, CliError> {
    let cfg = ctx.config;
    let n = level(cfg, 64)?;
    let alpha = sequence(cfg, ctx.seed, "coulomb", n)?;
    let grid = cfg.get_or("grid", default_grid(n, 16).max(1024))?;
    let exponents = cfg.list("eps")?.unwrap_or_else(|| vec![0.25, 0.5, 0.75]);
    require_length(&alpha, n)?;
    Ok(Box::new(move |ctx| {
        let m = bs_density(&alpha, n, grid)?;
        let values = exponents
            .iter()
            .map(|&e| epsilon_energy(&m, e))
            .collect::<Result<Vec<_>, _>>()?;
        let mut csv = ctx.new_csv(&["eps", "energy"]);
        for (&e, &v) in exponents.iter().zip(&values) {
            csv.row(&[e.into(), v.into()]);
        }
        Ok(vec![ctx.csv("energy.csv", csv)?])
    }))
}

fn scan(ctx: &Context) -> Result<Job, CliError> {
    let cfg = ctx.config;
    let d = ScanConfig::default();
    let config = ScanConfig {
        eps0: cfg.get_or("eps0", d.eps0)?,
        m_max: cfg.get_or("m_max", d.m_max)?,
        n0: cfg.get_or("n0", d.n0)?,
        k_max: cfg.get("k_max")?,
        work_budget: cfg.get_or("work_budget", d.work_budget)?,
        resonance: resonance_config(cfg)?,
        atoms: atom_config(cfg)?,
    };
    if !(config.eps0 > 0.0 && config.eps0 < 1.0) {
        return Err(CliError::usage("eps0 must lie in (0, 1)"));
    }
    let deepest = level_for(config.eps0.powi(config.m_max as i32)).min(SCAN_DEFAULT_LENGTH);
    let alpha = sequence(cfg, ctx.seed, "coulomb", deepest)?;
    Ok(Box::new(move |ctx| {
        let report = singular_interval_scan(&alpha, &config)?;
        Ok(vec![ctx.json("scan.json", &report)?])
    }))
}

#[derive(Serialize)]
struct LocalScaling {
    center: f64,
    deltas: Vec<f64>,
    /// `μ_n(B(center, δ)) / (2δ)^{1/2}`.
    ratios: Vec<f64>,
}

#[derive(Serialize)]
struct Decomposition {
    n: usize,
    a_est: f64,
    atom_budget: usize,
    candidates: usize,
    atoms: Vec<AtomProbe>,
    atom_mass: f64,
    continuous_mass: f64,
    scaling: Vec<LocalScaling>,
}

fn decompose(ctx: &Context) -> Result<Job, CliError> {
    let cfg = ctx.config;
    let n = level(cfg, 4096)?;
    let alpha = sequence(cfg, ctx.seed, "coulomb", n)?;
    let grid = cfg.get_or("grid", default_grid(n, RESOLUTION_FACTOR))?;
    let peaks = cfg.get_or("peaks", 16usize)?;
    let uniform = cfg.get_or("uniform", 64usize)?;
    let atoms = atom_config(cfg)?;
    require_length(&alpha, n)?;
    Ok(Box::new(move |ctx| {
        let a_est = estimate_log_constant(&alpha.truncated(n))?.a_est;
        let m = bs_density(&alpha, n, grid)?;
        let mut candidates = density_peaks(&m, peaks);
        candidates.extend(uniform_angles(uniform));
        let found: Vec<AtomProbe> = detect_atoms(&alpha, n, &candidates, &atoms)?
            .into_iter()
            .filter(|p| p.mass > 0.0)
            .collect();
        let atom_mass: f64 = found.iter().map(|p| p.mass).sum();
        let base = (8.0 * TAU / n as f64).min(std::f64::consts::PI);
        let deltas: Vec<f64> = (0..4).map(|k| base / 4f64.powi(k)).collect();
        let centers: Vec<f64> = found.iter().map(|p| p.angle).chain(density_peaks(&m, 4)).collect();
        let scaling = centers
            .into_iter()
            .map(|center| {
                Ok(LocalScaling {
                    center,
                    ratios: local_scaling_exponent(&m, center, &deltas)?,
                    deltas: deltas.clone(),
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let report = Decomposition {
            n,
            a_est,
            atom_budget: (4.0 * a_est).floor() as usize,
            candidates: candidates.len(),
            atoms: found,
            atom_mass,
            continuous_mass: 1.0 - atom_mass,
            scaling,
        };
        Ok(vec![ctx.json("decompose.json", &report)?])
    }))
}

#[derive(Serialize)]
struct RoundTrip {
    n: usize,
    grid: usize,
    mass_defect: f64,
    max_error: f64,
    errors: Vec<f64>,
}

fn roundtrip(ctx: &Context) -> Result<Job, CliError> {
    let cfg = ctx.config;
    let n = level(cfg, 16)?;
    let alpha = sequence(cfg, ctx.seed, "random-disk", n)?;
    let tol = cfg.get_or("mass_tolerance", 1e-10)?;
    let max_grid = cfg.get_or("max_grid", 1usize << 22)?;
    require_length(&alpha, n)?;
    Ok(Box::new(move |ctx| {
        let m = bs_density_resolved(&alpha, n, default_grid(n, 64), tol, max_grid)?;
        let recovered = verblunsky_from_measure(&m, n)?;
        let errors: Vec<f64> = (0..n).map(|j| (recovered.get(j) - alpha.get(j)).norm()).collect();
        let report = RoundTrip {
            n,
            grid: m.grid_size(),
            mass_defect: m.total_mass() - 1.0,
            max_error: errors.iter().copied().fold(0.0, f64::max),
            errors,
        };
        Ok(vec![ctx.json("roundtrip.json", &report)?])
    }))
}

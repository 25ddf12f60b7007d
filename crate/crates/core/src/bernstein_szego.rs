//! Bernstein–Szegő approximants, Fejér smoothing of indicators and the
//! interval comparison `μ(I) ≤ ν(3I) + Cδ^κ` for measures sharing their
//! first `n` coefficients.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{OpucError, Result};
use crate::model::{CircleMeasure, IntervalOnCircle, VerblunskySequence};
use crate::pruefer::pruefer_endpoint;

/// Minimum grid points per unit of level for [`bs_density`].
pub const RESOLUTION_FACTOR: usize = 8;

/// Quadrature points per Fejér period used by [`fejer_smooth_indicator`].
pub const FEJER_RESOLUTION: usize = 16;

/// Moment mismatch above which an [`IntervalComparison`] flags its inputs.
pub const MOMENT_TOLERANCE: f64 = 1e-6;

/// The measure `dη / (2π|φ_n(e^{iη})|²)` of the coefficients
/// `α_0, …, α_{n-1}, 0, 0, …`, sampled on `grid_size` nodes.
pub fn bs_density(alpha: &VerblunskySequence, n: usize, grid_size: usize) -> Result<CircleMeasure> {
    let required = (RESOLUTION_FACTOR * n).max(1);
    if grid_size < required {
        return Err(OpucError::Resolution {
            grid: grid_size,
            level: n,
            required,
        });
    }
    let coeffs = alpha.truncated(n);
    let log_norm = coeffs.log_norm_product(n);
    let density = (0..grid_size)
        .into_par_iter()
        .map(|k| {
            let eta = TAU * k as f64 / grid_size as f64;
            let end = pruefer_endpoint(coeffs.values(), eta, 0.0, n);
            (log_norm - 2.0 * end.log_radius).exp() / TAU
        })
        .collect();
    CircleMeasure::new(density, Vec::new())
}

/// [`bs_density`] on grids doubling from `start` until the total mass is
/// within `tol` of one. The mass of a Bernstein–Szegő measure is exactly
/// one, so the defect measures how well the grid resolves the density.
pub fn bs_density_resolved(
    alpha: &VerblunskySequence,
    n: usize,
    start: usize,
    tol: f64,
    max_grid: usize,
) -> Result<CircleMeasure> {
    let mut grid = start.max(RESOLUTION_FACTOR * n).max(1);
    loop {
        let m = bs_density(alpha, n, grid)?;
        if (m.total_mass() - 1.0).abs() <= tol {
            return Ok(m);
        }
        if grid >= max_grid {
            return Err(OpucError::Resolution {
                grid,
                level: n,
                required: 2 * grid,
            });
        }
        grid = (2 * grid).min(max_grid);
    }
}

/// Fejér kernel `F_n(η) = (1/(n+1)) (sin((n+1)η/2) / sin(η/2))²`.
pub fn fejer_value(n: usize, eta: f64) -> f64 {
    let m = (n + 1) as f64;
    // reduce to (-π, π] so the denominator only vanishes at 0
    let x = eta - TAU * (eta / TAU).round();
    let s = (0.5 * x).sin();
    if s.abs() < 1e-9 {
        let t = m * m - 1.0;
        return m * (1.0 - t * x * x / 12.0);
    }
    let r = (0.5 * m * x).sin() / s;
    r * r / m
}

pub fn fejer_kernel(n: usize, etas: &[f64]) -> Vec<f64> {
    etas.iter().map(|&e| fejer_value(n, e)).collect()
}

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// `(1/2π) ∫_lo^hi F_n(τ) dτ` by composite 5-point Gauss–Legendre with at
/// least `FEJER_RESOLUTION` panels per period `2π/(n+1)`.
pub fn fejer_integral(n: usize, lo: f64, hi: f64) -> f64 {
    let len = hi - lo;
    if len <= 0.0 {
        return 0.0;
    }
    let panels = ((FEJER_RESOLUTION * (n + 1)) as f64 * len / TAU).ceil().max(1.0) as usize;
    let h = len / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
            acc += w * fejer_value(n, mid + 0.5 * h * x);
        }
    }
    acc * 0.5 * h / TAU
}

/// `σ_n = F_n * χ_{2I}` at each angle, where `2I` has the centre of `I` and
/// twice its length.
pub fn fejer_smooth_indicator(interval: &IntervalOnCircle, n: usize, etas: &[f64]) -> Vec<f64> {
    let doubled = interval.dilated(2.0);
    if doubled.is_full_circle() {
        return vec![1.0; etas.len()];
    }
    let w = doubled.half_width;
    etas.par_iter()
        .map(|&eta| {
            let offset = eta - doubled.center;
            fejer_integral(n, offset - w, offset + w)
        })
        .collect()
}

/// `n^{-1/(2+κ)}`, the shortest admissible interval at level `n`.
pub fn minimum_length(n: usize, kappa: f64) -> f64 {
    (n as f64).powf(-1.0 / (2.0 + kappa))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalComparison {
    pub interval: IntervalOnCircle,
    pub delta: f64,
    pub mu_interval: f64,
    pub nu_tripled: f64,
    pub delta_kappa: f64,
    /// `μ(I) - ν(3I)`, possibly negative.
    pub excess: f64,
    /// `max(0, μ(I) - ν(3I)) / δ^κ`.
    pub implied_constant: f64,
    /// `max_{0≤k≤n} |μ̂(k) - ν̂(k)|`.
    pub moment_mismatch: f64,
    /// False when the mismatch exceeds [`MOMENT_TOLERANCE`].
    pub moments_match: bool,
}

/// Largest difference between the moments of orders `0..=n`.
pub fn moment_mismatch(mu: &CircleMeasure, nu: &CircleMeasure, n: usize) -> Result<f64> {
    let a = mu.moments_through(n)?;
    let b = nu.moments_through(n)?;
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
}

fn compare_one(
    mu: &CircleMeasure,
    nu: &CircleMeasure,
    interval: &IntervalOnCircle,
    n: usize,
    kappa: f64,
    mismatch: f64,
) -> Result<IntervalComparison> {
    let delta = interval.length();
    let minimum = minimum_length(n, kappa);
    if delta < minimum {
        return Err(OpucError::IntervalTooShort {
            delta,
            minimum,
            level: n,
        });
    }
    let mu_interval = mu.interval_mass(interval);
    let nu_tripled = nu.interval_mass(&interval.tripled());
    let delta_kappa = delta.powf(kappa);
    let excess = mu_interval - nu_tripled;
    Ok(IntervalComparison {
        interval: *interval,
        delta,
        mu_interval,
        nu_tripled,
        delta_kappa,
        excess,
        implied_constant: excess.max(0.0) / delta_kappa,
        moment_mismatch: mismatch,
        moments_match: mismatch <= MOMENT_TOLERANCE,
    })
}

pub fn interval_comparison(
    mu: &CircleMeasure,
    nu: &CircleMeasure,
    interval: &IntervalOnCircle,
    n: usize,
    kappa: f64,
) -> Result<IntervalComparison> {
    let mismatch = moment_mismatch(mu, nu, n)?;
    compare_one(mu, nu, interval, n, kappa, mismatch)
}

/// [`interval_comparison`] over many intervals, computing the moment
/// mismatch once.
pub fn comparison_sweep(
    mu: &CircleMeasure,
    nu: &CircleMeasure,
    intervals: &[IntervalOnCircle],
    n: usize,
    kappa: f64,
) -> Result<Vec<IntervalComparison>> {
    let mismatch = moment_mismatch(mu, nu, n)?;
    intervals
        .iter()
        .map(|i| compare_one(mu, nu, i, n, kappa, mismatch))
        .collect()
}

/// `count` lengths spaced geometrically from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
            .collect(),
    }
}

/// Longest interval for which `3I` still fits on the circle.
pub const MAX_COMPARISON_LENGTH: f64 = TAU / 3.0;

/// Tightest constant at one interval length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthConstant {
    pub delta: f64,
    /// `sup_I (μ(I) - ν(3I)) / δ^κ`; negative when every sampled interval
    /// has slack.
    pub signed: f64,
    /// `max(0, signed)`.
    pub clamped: f64,
    pub worst_center: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonSweep {
    pub n: usize,
    pub kappa: f64,
    pub moment_mismatch: f64,
    pub moments_match: bool,
    pub per_length: Vec<LengthConstant>,
    /// `max(0, max_δ signed)`: the smallest `C ≥ 0` that works for every
    /// sampled interval.
    pub fitted_constant: f64,
    /// `max |signed| / min |signed|` across lengths, infinite when the
    /// signed constants vanish or change sign.
    #[serde(serialize_with = "crate::scan::serialize_extended")]
    pub variation: f64,
    /// `μ(I) ≤ ν(3I) + fitted_constant · δ^κ` at every sample.
    pub holds_everywhere: bool,
    pub records: Vec<IntervalComparison>,
}

/// Compare `μ(I)` with `ν(3I)` for every length in `deltas` and `centers`
/// equally spaced centres.
pub fn comparison_constant_sweep(
    mu: &CircleMeasure,
    nu: &CircleMeasure,
    n: usize,
    kappa: f64,
    deltas: &[f64],
    centers: usize,
) -> Result<ComparisonSweep> {
    if deltas.is_empty() || centers == 0 {
        return Err(OpucError::invalid("sweep needs at least one length and one centre"));
    }
    let mismatch = moment_mismatch(mu, nu, n)?;
    let mut records = Vec::with_capacity(deltas.len() * centers);
    let mut per_length = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let intervals = (0..centers)
            .map(|k| IntervalOnCircle::with_length(TAU * k as f64 / centers as f64, delta))
            .collect::<Result<Vec<_>>>()?;
        let batch: Vec<IntervalComparison> = intervals
            .par_iter()
            .map(|i| compare_one(mu, nu, i, n, kappa, mismatch))
            .collect::<Result<_>>()?;
        let worst = batch
            .iter()
            .max_by(|a, b| a.excess.total_cmp(&b.excess).then(b.interval.center.total_cmp(&a.interval.center)))
            .expect("at least one centre");
        let signed = worst.excess / worst.delta_kappa;
        per_length.push(LengthConstant {
            delta,
            signed,
            clamped: signed.max(0.0),
            worst_center: worst.interval.center,
        });
        records.extend(batch);
    }
    let fitted_constant = per_length.iter().map(|c| c.clamped).fold(0.0, f64::max);
    let same_sign = per_length.iter().all(|c| c.signed > 0.0) || per_length.iter().all(|c| c.signed < 0.0);
    let variation = if same_sign {
        let mags = per_length.iter().map(|c| c.signed.abs());
        let hi = mags.clone().fold(0.0, f64::max);
        let lo = mags.fold(f64::INFINITY, f64::min);
        hi / lo
    } else {
        f64::INFINITY
    };
    let holds_everywhere = records
        .iter()
        .all(|r| r.mu_interval <= r.nu_tripled + fitted_constant * r.delta_kappa + 1e-12);
    Ok(ComparisonSweep {
        n,
        kappa,
        moment_mismatch: mismatch,
        moments_match: mismatch <= MOMENT_TOLERANCE,
        per_length,
        fitted_constant,
        variation,
        holds_everywhere,
        records,
    })
}

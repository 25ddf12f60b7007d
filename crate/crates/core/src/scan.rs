//! ε-energies, the stopped exponential-sum inequality, local scaling
//! ratios, Christoffel-function atom detection and the multiscale scan for
//! singular intervals.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bernstein_szego::bs_density;
use crate::error::{OpucError, Result};
use crate::generators::estimate_log_constant;
use crate::model::{circular_distance, normalize_angle, Atom, CircleMeasure, IntervalOnCircle, VerblunskySequence};
use crate::pruefer::pruefer_evolve;
use crate::resonance::{kmax_check, resonant_angles, ResonanceConfig, ResonantAngle};

/// Serialize a float, writing non-finite values as the strings `"inf"`,
/// `"-inf"` or `"nan"`.
pub fn serialize_extended<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

// h^{-(2-ε)} ∫_cell ∫_cell' |x - y|^{-ε} for cells k apart
fn cell_pair_kernel(k: usize, eps: f64) -> f64 {
    let p = 2.0 - eps;
    let norm = (1.0 - eps) * p;
    if k == 0 {
        return 2.0 / norm;
    }
    let kf = k as f64;
    ((kf + 1.0).powf(p) - 2.0 * kf.powf(p) + (kf - 1.0).powf(p)) / norm
}

/// `∬ (1 + |x - y|^{-ε}) dν(x) dν(y)` with `|x - y|` the circular distance.
///
/// The density is treated as constant on each grid cell and every cell pair
/// is integrated exactly, so the diagonal singularity is handled in closed
/// form. Any atom gives `+∞`.
pub fn epsilon_energy(m: &CircleMeasure, eps: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) {
        return Err(OpucError::invalid(format!("energy exponent {eps} must lie in [0, 1)")));
    }
    if !m.atoms().is_empty() {
        return Ok(f64::INFINITY);
    }
    let size = m.grid_size();
    let h = m.cell_width();
    let d = m.density();
    let kernel: Vec<f64> = (0..size)
        .map(|k| cell_pair_kernel(k.min(size - k), eps) * h.powf(2.0 - eps))
        .collect();
    let rows: Vec<f64> = (0..size)
        .into_par_iter()
        .map(|a| {
            let mut acc = 0.0;
            for (b, db) in d.iter().enumerate() {
                let off = if a >= b { a - b } else { a + size - b };
                acc += kernel[off] * db;
            }
            acc * d[a]
        })
        .collect();
    let mass: f64 = d.iter().sum::<f64>() * h;
    Ok(mass * mass + rows.iter().sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SalemZygmund {
    /// `(∫ |Σ_{n≤m(η)} α_n e^{-inη}| dν)²`.
    pub lhs: f64,
    /// `E_ε(ν) Σ_n (n+1)^{1-ε} |α_n|²` over `n ≤ max m`.
    pub rhs: f64,
    pub ratio: f64,
    pub energy: f64,
}

// partial sums Σ_{n≤m} α_n e^{-inη} at one angle, for m = 0..=n_max
fn partial_sums(alpha: &VerblunskySequence, eta: f64, n_max: usize) -> Vec<Complex64> {
    let step = Complex64::from_polar(1.0, -eta);
    let mut z = Complex64::new(1.0, 0.0);
    let mut s = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n % 256 == 0 {
            z = Complex64::from_polar(1.0, -(n as f64) * eta);
        }
        s += alpha.get(n) * z;
        out.push(s);
        z *= step;
    }
    out
}

/// Compare both sides of the stopped-sum energy inequality. `stopping[k]`
/// is the stopping time `m(η_k)` at grid node `k` of `nu`.
pub fn salem_zygmund_test(
    alpha: &VerblunskySequence,
    nu: &CircleMeasure,
    eps: f64,
    stopping: &[usize],
) -> Result<SalemZygmund> {
    if stopping.len() != nu.grid_size() {
        return Err(OpucError::invalid(format!(
            "{} stopping times for a grid of {}",
            stopping.len(),
            nu.grid_size()
        )));
    }
    let energy = epsilon_energy(nu, eps)?;
    if !energy.is_finite() {
        return Err(OpucError::InfiniteEnergy);
    }
    let h = nu.cell_width();
    let integrand: Vec<f64> = (0..nu.grid_size())
        .into_par_iter()
        .map(|k| {
            let stop = stopping[k];
            let s = partial_sums(alpha, nu.node(k), stop);
            s[stop].norm() * nu.density()[k]
        })
        .collect();
    let integral = integrand.iter().sum::<f64>() * h;
    let top = stopping.iter().copied().max().unwrap_or(0);
    let weighted: f64 = (0..=top)
        .map(|n| ((n + 1) as f64).powf(1.0 - eps) * alpha.get(n).norm_sqr())
        .sum();
    let lhs = integral * integral;
    let rhs = energy * weighted;
    Ok(SalemZygmund {
        lhs,
        rhs,
        ratio: if rhs > 0.0 { lhs / rhs } else { 0.0 },
        energy,
    })
}

/// At each node of `nu`, the stopping time among `2^k - 1 ≤ n_max` and
/// `n_max` itself that maximises the partial sum.
pub fn dyadic_argmax_stopping(alpha: &VerblunskySequence, nu: &CircleMeasure, n_max: usize) -> Vec<usize> {
    let mut times: Vec<usize> = (0..usize::BITS)
        .map(|k| (1usize << k) - 1)
        .take_while(|&t| t <= n_max)
        .collect();
    if times.last() != Some(&n_max) {
        times.push(n_max);
    }
    (0..nu.grid_size())
        .into_par_iter()
        .map(|k| {
            let s = partial_sums(alpha, nu.node(k), n_max);
            let mut best = times[0];
            for &t in &times {
                if s[t].norm() > s[best].norm() {
                    best = t;
                }
            }
            best
        })
        .collect()
}

/// `μ(k - δ, k + δ) / (2δ)^{1/2}` for each `δ`.
pub fn local_scaling_exponent(m: &CircleMeasure, center: f64, deltas: &[f64]) -> Result<Vec<f64>> {
    if deltas.iter().any(|&d| !(d > 0.0 && d <= PI)) {
        return Err(OpucError::invalid("scale radii must lie in (0, π]"));
    }
    if deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(OpucError::invalid("scale radii must be strictly decreasing"));
    }
    deltas
        .iter()
        .map(|&d| {
            let i = IntervalOnCircle::new(center, d)?;
            Ok(m.interval_mass(&i) / (2.0 * d).sqrt())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomConfig {
    /// Smallest mass reported as an atom.
    pub threshold: f64,
    /// Largest relative change between the two extrapolated masses.
    pub stability: f64,
    /// Largest `S(n) / S(n/2)` still counted as subexponential growth.
    pub growth: f64,
}

impl Default for AtomConfig {
    fn default() -> Self {
        Self {
            threshold: 1e-4,
            stability: 0.25,
            growth: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomProbe {
    pub angle: f64,
    /// Extrapolated mass, zero when rejected.
    pub mass: f64,
    /// `(Σ_{j<n} |φ_j(e^{iη})|²)^{-1}`.
    pub christoffel: f64,
    pub extrapolated: f64,
    pub stable: bool,
    pub subexponential: bool,
}

fn aitken(x0: f64, x1: f64, x2: f64) -> f64 {
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let den = d2 - d1;
    if den.abs() <= 1e-300 || !den.is_finite() {
        return x2;
    }
    x2 - d2 * d2 / den
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Probe one angle: `log Σ_{j<c} |φ_j|²` at the checkpoints `n/8, n/4,
/// n/2, n`, Aitken extrapolation of the reciprocal on the first and last
/// three, and the acceptance tests.
pub fn probe_atom(alpha: &VerblunskySequence, n: usize, angle: f64, config: &AtomConfig) -> Result<AtomProbe> {
    if n < 8 {
        return Err(OpucError::invalid(format!("atom probe needs n ≥ 8, got {n}")));
    }
    let traj = pruefer_evolve(alpha, angle, 0.0, n)?;
    let checkpoints = [n / 8, n / 4, n / 2, n];
    let mut log_sum = f64::NEG_INFINITY;
    let mut log_norm = 0.0;
    let mut at = [0.0; 4];
    let mut next = 0;
    for j in 0..n {
        // |φ_j|² = R_j² / ∏_{i<j}(1 - |α_i|²)
        log_sum = log_add(log_sum, 2.0 * traj.radii_log[j] - log_norm);
        log_norm += (-alpha.get(j).norm_sqr()).ln_1p();
        while next < 4 && checkpoints[next] == j + 1 {
            at[next] = log_sum;
            next += 1;
        }
    }
    let lambda: Vec<f64> = at.iter().map(|l| (-l).exp()).collect();
    let christoffel = lambda[3];
    let early = aitken(lambda[0], lambda[1], lambda[2]).clamp(0.0, christoffel.max(lambda[2]));
    let late = aitken(lambda[1], lambda[2], lambda[3]).clamp(0.0, christoffel);
    let stable = late > 0.0 && (late - early).abs() <= config.stability * late;
    let subexponential = (at[3] - at[2]).exp() <= config.growth;
    let accepted = stable && subexponential && late >= config.threshold;
    Ok(AtomProbe {
        angle: normalize_angle(angle),
        mass: if accepted { late } else { 0.0 },
        christoffel,
        extrapolated: late,
        stable,
        subexponential,
    })
}

/// Probe every candidate, then drop accepted atoms lying within `4π/n` of a
/// heavier one so a single point mass is not counted twice.
pub fn detect_atoms(
    alpha: &VerblunskySequence,
    n: usize,
    candidates: &[f64],
    config: &AtomConfig,
) -> Result<Vec<AtomProbe>> {
    let mut probes: Vec<AtomProbe> = candidates
        .par_iter()
        .map(|&c| probe_atom(alpha, n, c, config))
        .collect::<Result<_>>()?;
    let window = 2.0 * TAU / n as f64;
    let mut order: Vec<usize> = (0..probes.len()).filter(|&i| probes[i].mass > 0.0).collect();
    order.sort_by(|&a, &b| probes[b].mass.total_cmp(&probes[a].mass).then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if kept
            .iter()
            .any(|&k| circular_distance(probes[k].angle, probes[i].angle) < window)
        {
            probes[i].mass = 0.0;
        } else {
            kept.push(i);
        }
    }
    Ok(probes)
}

/// The `count` highest local maxima of the grid density, in angle order.
pub fn density_peaks(m: &CircleMeasure, count: usize) -> Vec<f64> {
    let d = m.density();
    let size = d.len();
    let mut peaks: Vec<usize> = (0..size)
        .filter(|&k| d[k] >= d[(k + size - 1) % size] && d[k] > d[(k + 1) % size])
        .collect();
    peaks.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));
    peaks.truncate(count);
    peaks.sort_unstable();
    peaks.into_iter().map(|k| m.node(k)).collect()
}

/// Per-`β` boundedness of the Prüfer radius at a fixed angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusBoundedness {
    pub beta: f64,
    /// `max_{j ≤ n/2} |log R_j|`.
    pub early_sup: f64,
    /// `max_{n/2 < j ≤ n} |log R_j|`.
    pub late_sup: f64,
    /// `late_sup ≤ early_sup + 1`.
    pub bounded: bool,
}

/// Sample `β` on `beta_count` equally spaced values in `[0, 2π)`.
pub fn radius_boundedness(
    alpha: &VerblunskySequence,
    eta: f64,
    n: usize,
    beta_count: usize,
) -> Result<Vec<RadiusBoundedness>> {
    (0..beta_count)
        .into_par_iter()
        .map(|b| {
            let beta = TAU * b as f64 / beta_count as f64;
            let t = pruefer_evolve(alpha, eta, beta, n)?;
            let half = n / 2;
            let sup = |r: &[f64]| r.iter().map(|x| x.abs()).fold(0.0, f64::max);
            let early_sup = sup(&t.radii_log[..=half]);
            let late_sup = sup(&t.radii_log[half + 1..]);
            Ok(RadiusBoundedness {
                beta,
                early_sup,
                late_sup,
                bounded: late_sup <= early_sup + 1.0,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub eps0: f64,
    pub m_max: usize,
    /// Level below which the counting lemma is not expected to apply; only
    /// reported.
    pub n0: usize,
    /// Fixed `K_max`; computed by [`kmax_check`] at level `max(n_1, n0)` if
    /// unset.
    pub k_max: Option<usize>,
    /// Largest `n_m × grid` attempted.
    pub work_budget: f64,
    pub resonance: ResonanceConfig,
    pub atoms: AtomConfig,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            eps0: 0.1,
            m_max: 4,
            n0: 1000,
            k_max: None,
            work_budget: 4e9,
            resonance: ResonanceConfig::default(),
            atoms: AtomConfig::default(),
        }
    }
}

/// `n_m = ⌈ε_m^{-3}⌉`, ignoring rounding noise just above an integer.
pub fn level_for(epsilon: f64) -> usize {
    let x = epsilon.powi(-3);
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

/// Minimal number of arcs of length `len` covering the union of `arcs`
/// (given as `(start, length)`).
pub fn minimal_cover(arcs: &[(f64, f64)], len: f64) -> usize {
    if arcs.is_empty() {
        return 0;
    }
    if len >= TAU {
        return 1;
    }
    let mut sorted: Vec<(f64, f64)> = arcs.iter().map(|&(s, l)| (normalize_angle(s), l)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let count = sorted.len();
    (0..count)
        .map(|start| {
            // unroll the circle at sorted[start]
            let origin = sorted[start].0;
            let mut pieces: Vec<(f64, f64)> = (0..count)
                .map(|i| {
                    let (s, l) = sorted[(start + i) % count];
                    let a = (s - origin).rem_euclid(TAU);
                    (a, a + l)
                })
                .collect();
            pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut covers = 0;
            let mut reach = f64::NEG_INFINITY;
            for (a, b) in pieces {
                let mut from = a.max(reach);
                while from < b - 1e-12 {
                    covers += 1;
                    reach = from + len;
                    from = reach;
                }
            }
            covers
        })
        .min()
        .unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TileRecord {
    pub center: f64,
    pub bs_mass: f64,
    /// Bernstein–Szegő mass minus detected atoms in the tile.
    pub proxy_mass: f64,
    /// `μ_{n_m}(3J)`.
    pub tripled_mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingProbe {
    pub center: f64,
    pub deltas: [f64; 4],
    pub ratios: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleReport {
    pub scale: usize,
    pub epsilon: f64,
    pub n: usize,
    pub grid: usize,
    pub below_n0: bool,
    pub tile_count: usize,
    pub tile_length: f64,
    pub singular_threshold: f64,
    pub singular: Vec<TileRecord>,
    pub separation: f64,
    pub separated: Vec<TileRecord>,
    pub separated_count: usize,
    pub cover_length: f64,
    pub cover_count: usize,
    pub cover_budget: usize,
    pub count_ok: bool,
    pub cover_ok: bool,
    /// `max_l max(0, proxy(J_l) - μ_{n_m}(3J_l)) / ε_m`.
    pub bridge_constant: f64,
    pub atoms: Vec<AtomProbe>,
    pub resonant: Vec<ResonantAngle>,
    pub scaling: Vec<ScalingProbe>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exhaustion {
    pub scale: usize,
    pub n: usize,
    pub reason: String,
    pub last_completed: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub eps0: f64,
    pub m_max: usize,
    pub n0: usize,
    pub a_est: f64,
    pub k_max: usize,
    pub proxy: &'static str,
    pub scales: Vec<ScaleReport>,
    pub exhausted: Option<Exhaustion>,
    /// Every completed scale satisfies the count and cover budgets.
    pub all_ok: bool,
}

/// Description of the singular-mass proxy, embedded in every report.
pub const PROXY_NOTE: &str =
    "singular mass approximated by the Bernstein-Szego measure at level n_m minus detected atom masses";

fn grid_for(n: usize, tiles: usize) -> usize {
    (8 * n).max(16 * tiles).max(64).next_power_of_two()
}

/// Multiscale scan: at scale `m` the circle is cut into equal tiles of
/// length at most `ε_m = eps0^m`, and a tile is singular when its proxy mass
/// at level `n_m = ⌈ε_m^{-3}⌉` exceeds `ε_m^{1/2}`.
pub fn singular_interval_scan(alpha: &VerblunskySequence, config: &ScanConfig) -> Result<ScanReport> {
    if !(config.eps0 > 0.0 && config.eps0 < 1.0) {
        return Err(OpucError::invalid(format!("eps0 {} must lie in (0, 1)", config.eps0)));
    }
    if config.m_max == 0 {
        return Err(OpucError::invalid("need at least one scale"));
    }
    let a_est = estimate_log_constant(alpha)?.a_est;
    // the counting lemma only applies from n0 on
    let first_level = level_for(config.eps0).max(config.n0).min(alpha.len()).max(3);
    let k_max = match config.k_max {
        Some(k) => k.max(1),
        None => kmax_check(alpha, first_level, &config.resonance)?.k_max,
    };
    let mut scales = Vec::new();
    let mut exhausted = None;
    for m in 1..=config.m_max {
        let epsilon = config.eps0.powi(m as i32);
        let n = level_for(epsilon);
        let tiles = (TAU / epsilon).ceil() as usize;
        let grid = grid_for(n, tiles);
        let last_completed = scales.last().map(|s: &ScaleReport| s.scale);
        if n > alpha.len() {
            exhausted = Some(Exhaustion {
                scale: m,
                n,
                reason: format!("level {n} exceeds the {} stored coefficients", alpha.len()),
                last_completed,
            });
            break;
        }
        let work = n as f64 * grid as f64;
        if work > config.work_budget {
            exhausted = Some(Exhaustion {
                scale: m,
                n,
                reason: format!("work {work:e} exceeds budget {:e}", config.work_budget),
                last_completed,
            });
            break;
        }
        scales.push(scan_scale(alpha, m, epsilon, n, tiles, grid, k_max, config)?);
    }
    let all_ok = scales.iter().all(|s| s.count_ok && s.cover_ok);
    Ok(ScanReport {
        eps0: config.eps0,
        m_max: config.m_max,
        n0: config.n0,
        a_est,
        k_max,
        proxy: PROXY_NOTE,
        scales,
        exhausted,
        all_ok,
    })
}

#[allow(clippy::too_many_arguments)]
fn scan_scale(
    alpha: &VerblunskySequence,
    scale: usize,
    epsilon: f64,
    n: usize,
    tiles: usize,
    grid: usize,
    k_max: usize,
    config: &ScanConfig,
) -> Result<ScaleReport> {
    let measure = bs_density(alpha, n, grid)?;
    let tile_length = TAU / tiles as f64;
    let threshold = epsilon.sqrt();
    let tile = |t: usize| IntervalOnCircle::with_length((t as f64 + 0.5) * tile_length, tile_length);
    let bs_masses: Vec<f64> = (0..tiles)
        .map(|t| Ok(measure.interval_mass(&tile(t)?)))
        .collect::<Result<_>>()?;

    // atom candidates: the density maximum inside each heavy tile
    let per_tile = grid / tiles;
    let candidates: Vec<f64> = (0..tiles)
        .filter(|&t| bs_masses[t] > threshold)
        .map(|t| {
            let lo = ((t as f64 * tile_length) / measure.cell_width()).floor() as usize;
            let hi = (lo + per_tile + 1).min(grid);
            let best = (lo..hi)
                .max_by(|&a, &b| measure.density()[a].total_cmp(&measure.density()[b]).then(b.cmp(&a)))
                .unwrap_or(lo);
            measure.node(best)
        })
        .collect();
    let atoms = if n >= 8 {
        detect_atoms(alpha, n, &candidates, &config.atoms)?
    } else {
        Vec::new()
    };
    let found: Vec<Atom> = atoms
        .iter()
        .filter(|a| a.mass > 0.0)
        .map(|a| Atom {
            angle: a.angle,
            mass: a.mass,
        })
        .collect();

    let mut singular = Vec::new();
    for (t, &bs_mass) in bs_masses.iter().enumerate() {
        let j = tile(t)?;
        let pp: f64 = found.iter().filter(|a| j.contains(a.angle)).map(|a| a.mass).sum();
        let proxy_mass = (bs_mass - pp).max(0.0);
        if proxy_mass > threshold {
            singular.push(TileRecord {
                center: j.center,
                bs_mass,
                proxy_mass,
                tripled_mass: measure.interval_mass(&j.tripled()),
            });
        }
    }

    let k2 = (k_max * k_max) as f64;
    let separation = 3.0 * epsilon.powf(1.0 / k2);
    let mut by_mass = singular.clone();
    by_mass.sort_by(|a, b| b.proxy_mass.total_cmp(&a.proxy_mass).then(a.center.total_cmp(&b.center)));
    let mut separated: Vec<TileRecord> = Vec::new();
    for cand in by_mass {
        if separated
            .iter()
            .all(|s| circular_distance(s.center, cand.center) > separation)
        {
            separated.push(cand);
        }
    }
    separated.sort_by(|a, b| a.center.total_cmp(&b.center));

    let cover_length = epsilon.powf(1.0 / k2);
    let arcs: Vec<(f64, f64)> = singular
        .iter()
        .map(|s| (s.center - 0.5 * tile_length, tile_length))
        .collect();
    let cover_count = minimal_cover(&arcs, cover_length);
    let cover_budget = 8 * k_max;
    let bridge_constant = separated
        .iter()
        .map(|s| (s.proxy_mass - s.tripled_mass).max(0.0) / epsilon)
        .fold(0.0, f64::max);

    let resonant = if n >= 3 {
        resonant_angles(alpha, n, &config.resonance)?
    } else {
        Vec::new()
    };
    let scaling = separated
        .iter()
        .map(|s| {
            let base = (2.0 * tile_length).min(PI);
            let deltas = [base, base / 2.0, base / 4.0, base / 8.0];
            let r = local_scaling_exponent(&measure, s.center, &deltas)?;
            Ok(ScalingProbe {
                center: s.center,
                deltas,
                ratios: [r[0], r[1], r[2], r[3]],
            })
        })
        .collect::<Result<_>>()?;

    Ok(ScaleReport {
        scale,
        epsilon,
        n,
        grid,
        below_n0: n < config.n0,
        tile_count: tiles,
        tile_length,
        singular_threshold: threshold,
        separated_count: separated.len(),
        count_ok: separated.len() <= k_max,
        cover_ok: cover_count <= cover_budget,
        singular,
        separation,
        separated,
        cover_length,
        cover_count,
        cover_budget,
        bridge_constant,
        atoms,
        resonant,
        scaling,
    })
}

//! Weighted sequence spaces, almost-orthogonality, the summation-by-parts
//! logarithmic bound and the search for resonant angles where the
//! accumulator `|A(n, η)|` reaches `log n / 14`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{OpucError, Result};
use crate::generators::estimate_log_constant;
use crate::model::{circular_distance, normalize_angle, VerblunskySequence};
use crate::pruefer::{phase_lift, pruefer_endpoint, pruefer_evolve};
use crate::stats::linear_fit;

/// Slack allowed on `lhs ≤ rhs` for floating point roundoff.
pub const ROUNDOFF_SLACK: f64 = 1e-12;

/// Element of `ℓ²` on `{0, …, n-1}` with weight `1 + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedVector {
    pub entries: Vec<Complex64>,
}

impl WeightedVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `⟨f, g⟩ = Σ conj(f_j) g_j (1+j)` over the common length.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .enumerate()
            .map(|(j, (f, g))| f.conj() * g * (j + 1) as f64)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries
            .iter()
            .enumerate()
            .map(|(j, f)| f.norm_sqr() * (j + 1) as f64)
            .sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sq().sqrt();
        if !(norm > 0.0) {
            return Err(OpucError::invalid("cannot normalise the zero vector"));
        }
        Ok(Self::new(self.entries.iter().map(|f| f / norm).collect()))
    }
}

/// `E_n = Σ_{j<n} 1/(1+j)`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).rev().map(|k| 1.0 / k as f64).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalityRecord {
    /// `K · max_{k≠l} |⟨e_k, e_l⟩|`.
    pub q: f64,
    /// `Σ_l |⟨g, e_l⟩|²`.
    pub lhs: f64,
    /// `(1 + Q)‖g‖²`.
    pub rhs: f64,
    /// `None` when `Q ≥ 1`, where the inequality is not claimed.
    pub holds: Option<bool>,
}

/// Check `Σ_l |⟨g, e_l⟩|² ≤ (1 + Q)‖g‖²` for a family of unit vectors.
pub fn almost_orthogonality_bound(
    vectors: &[WeightedVector],
    g: &WeightedVector,
) -> Result<OrthogonalityRecord> {
    for (l, e) in vectors.iter().enumerate() {
        let norm = e.norm_sq().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(OpucError::invalid(format!(
                "vector {l} has norm {norm}, expected 1"
            )));
        }
    }
    let k = vectors.len();
    let mut max_overlap: f64 = 0.0;
    for a in 0..k {
        for b in a + 1..k {
            max_overlap = max_overlap.max(vectors[a].inner(&vectors[b]).norm());
        }
    }
    let q = k as f64 * max_overlap;
    let lhs: f64 = vectors.iter().map(|e| g.inner(e).norm_sqr()).sum();
    let rhs = (1.0 + q) * g.norm_sq();
    let holds = (q < 1.0).then(|| lhs <= rhs * (1.0 + ROUNDOFF_SLACK) + ROUNDOFF_SLACK);
    Ok(OrthogonalityRecord { q, lhs, rhs, holds })
}

/// `e(j) = E_n^{-1/2} e^{i[(j+1)η + 2θ_j(η, 0)]} / (1+j)` for `j < n`.
pub fn resonance_unit_vector(alpha: &VerblunskySequence, eta: f64, n: usize) -> Result<WeightedVector> {
    let theta = phase_lift(alpha, eta, n)?;
    let scale = harmonic(n).sqrt().recip();
    Ok(WeightedVector::new(
        (0..n)
            .map(|j| {
                Complex64::from_polar(scale / (j + 1) as f64, (j + 1) as f64 * eta + 2.0 * theta[j])
            })
            .collect(),
    ))
}

/// `g(j) = conj(α_j)`, for which `⟨g, e⟩ = E_n^{-1/2} A(n, η)` exactly.
pub fn coefficient_vector(alpha: &VerblunskySequence, n: usize) -> WeightedVector {
    WeightedVector::new((0..n).map(|j| alpha.get(j).conj()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbelSum {
    pub xi: f64,
    /// `sup_{1≤n≤N} |Σ_{j=1}^n j^{-1} e^{i[jξ + g(j)]}|`.
    pub sup_partial: f64,
    pub final_partial: Complex64,
    /// Difference between the direct sum at `N` and the summation-by-parts
    /// evaluation.
    pub abel_discrepancy: f64,
}

/// Partial sums of `Σ j^{-1} e^{i[jξ + g(j)]}` up to `n_max`, cross-checked
/// at the end by summation by parts against `a(j) = -Σ_{k≥j} z^k/k`.
/// `g` is read at `0..=n_max`.
pub fn abel_partial_sup(xi: f64, g: impl Fn(usize) -> f64, n_max: usize) -> AbelSum {
    let mut s = Complex64::new(0.0, 0.0);
    let mut sup: f64 = 0.0;
    for j in 1..=n_max {
        s += Complex64::from_polar(1.0 / j as f64, j as f64 * xi + g(j));
        sup = sup.max(s.norm());
    }
    // a(1) = log(1 - z), a(j+1) = a(j) + z^j / j
    let z = Complex64::from_polar(1.0, xi);
    let mut a = (Complex64::new(1.0, 0.0) - z).ln();
    let mut b_prev = Complex64::from_polar(1.0, g(0));
    let mut by_parts = -a * b_prev;
    for j in 1..=n_max {
        let b = Complex64::from_polar(1.0, g(j));
        by_parts -= a * (b - b_prev);
        a += Complex64::from_polar(1.0 / j as f64, j as f64 * xi);
        b_prev = b;
    }
    by_parts += a * b_prev;
    AbelSum {
        xi,
        sup_partial: sup,
        final_partial: s,
        abel_discrepancy: (s - by_parts).norm(),
    }
}

/// `g(j) = 2θ_{j-1}(η + ξ) - 2θ_{j-1}(η)` for `j = 1..=n`, with `g(0) = 0`.
pub fn pruefer_phase_difference(
    alpha: &VerblunskySequence,
    eta: f64,
    xi: f64,
    n: usize,
) -> Result<Vec<f64>> {
    let shifted = phase_lift(alpha, eta + xi, n)?;
    let base = phase_lift(alpha, eta, n)?;
    let mut g = Vec::with_capacity(n + 1);
    g.push(0.0);
    g.extend((1..=n).map(|j| 2.0 * (shifted[j - 1] - base[j - 1])));
    Ok(g)
}

/// Affine fit `sup_partial ≈ C1 log(1/ξ) + C2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbelFit {
    pub c1: f64,
    pub c2: f64,
    pub r_squared: f64,
    pub points: Vec<AbelSum>,
}

pub fn abel_log_bound(samples: Vec<AbelSum>) -> Result<AbelFit> {
    let xy: Vec<(f64, f64)> = samples.iter().map(|s| (-s.xi.ln(), s.sup_partial)).collect();
    let fit = linear_fit(&xy)
        .ok_or_else(|| OpucError::invalid("need at least two distinct ξ values for the fit"))?;
    Ok(AbelFit {
        c1: fit.slope,
        c2: fit.intercept,
        r_squared: fit.r_squared,
        points: samples,
    })
}

/// [`abel_partial_sup`] with Prüfer phase differences of `alpha` based at
/// `eta`, for each `ξ`.
pub fn pruefer_abel_sweep(
    alpha: &VerblunskySequence,
    eta: f64,
    xis: &[f64],
    n_max: usize,
) -> Result<Vec<AbelSum>> {
    xis.par_iter()
        .map(|&xi| {
            let g = pruefer_phase_difference(alpha, eta, xi, n_max)?;
            Ok(abel_partial_sup(xi, |j| g[j], n_max))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceConfig {
    /// Threshold `log n / divisor`.
    pub divisor: f64,
    /// Separation `n^{-1/(factor·K²)}`.
    pub separation_factor: f64,
    pub grid_size: usize,
}

impl Default for ResonanceConfig {
    fn default() -> Self {
        Self {
            divisor: 14.0,
            separation_factor: 3.0,
            grid_size: 1 << 14,
        }
    }
}

impl ResonanceConfig {
    pub fn threshold(&self, n: usize) -> f64 {
        (n as f64).ln() / self.divisor
    }

    pub fn separation(&self, n: usize, k: usize) -> f64 {
        (n as f64).powf(-1.0 / (self.separation_factor * (k * k) as f64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonantAngle {
    pub eta: f64,
    pub magnitude: f64,
}

/// `|A(n, η, 0)|` at each angle.
pub fn accumulator_magnitudes(alpha: &VerblunskySequence, n: usize, etas: &[f64]) -> Vec<f64> {
    let coeffs = alpha.values();
    etas.par_iter()
        .map(|&eta| pruefer_endpoint(coeffs, eta, 0.0, n).accumulator.norm())
        .collect()
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Local maxima of `|A(n, ·)|` on the grid that reach `0.9 × threshold`,
/// refined by golden-section search, kept if the refined value reaches the
/// threshold, then thinned greedily (largest first) so that the accepted
/// family of size `K` is pairwise `n^{-1/(3K²)}`-separated.
pub fn resonant_angles(
    alpha: &VerblunskySequence,
    n: usize,
    config: &ResonanceConfig,
) -> Result<Vec<ResonantAngle>> {
    if n < 3 {
        return Err(OpucError::invalid(format!("need n ≥ 3, got {n}")));
    }
    let size = config.grid_size;
    if size < 3 {
        return Err(OpucError::invalid("resonance grid needs at least 3 points"));
    }
    let threshold = config.threshold(n);
    let etas: Vec<f64> = (0..size).map(|k| TAU * k as f64 / size as f64).collect();
    let values = accumulator_magnitudes(alpha, n, &etas);
    let step = TAU / size as f64;
    let peaks: Vec<usize> = (0..size)
        .filter(|&k| {
            let v = values[k];
            v >= 0.9 * threshold
                && v >= values[(k + size - 1) % size]
                && v > values[(k + 1) % size]
        })
        .collect();
    let coeffs = alpha.values();
    let mut candidates: Vec<ResonantAngle> = peaks
        .par_iter()
        .map(|&k| {
            let f = |eta: f64| pruefer_endpoint(coeffs, eta, 0.0, n).accumulator.norm();
            let (eta, magnitude) = golden_max(f, etas[k] - step, etas[k] + step, 40);
            if magnitude >= values[k] {
                ResonantAngle {
                    eta: normalize_angle(eta),
                    magnitude,
                }
            } else {
                ResonantAngle {
                    eta: etas[k],
                    magnitude: values[k],
                }
            }
        })
        .filter(|r| r.magnitude >= threshold)
        .collect();
    candidates.sort_by(|a, b| {
        b.magnitude
            .total_cmp(&a.magnitude)
            .then(a.eta.total_cmp(&b.eta))
    });
    let mut accepted: Vec<ResonantAngle> = Vec::new();
    for cand in candidates {
        let sep = config.separation(n, accepted.len() + 1);
        let family_ok = accepted.iter().enumerate().all(|(i, a)| {
            circular_distance(a.eta, cand.eta) >= sep
                && accepted[i + 1..]
                    .iter()
                    .all(|b| circular_distance(a.eta, b.eta) >= sep)
        });
        if family_ok {
            accepted.push(cand);
        }
    }
    Ok(accepted)
}

/// Number of `ξ` values used by [`kmax_check`] for its fitted constant.
pub const KMAX_ABEL_POINTS: usize = 8;

/// Upper bound on the smallest `ξ` in the [`kmax_check`] fit.
pub const KMAX_ABEL_XI_MIN: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KmaxReport {
    pub n: usize,
    pub k_found: usize,
    pub a_est: f64,
    pub bound_392a: f64,
    /// `(C1 log n / 3 + C2) / E_n`: the fitted bound on `|⟨e_k, e_l⟩|` at
    /// the sparsest admissible separation `n^{-1/3}`.
    pub c_fit: f64,
    pub k_max: usize,
    pub holds: bool,
    pub e_n: f64,
    pub e_n_minus_log_n: f64,
    pub resonant: Vec<ResonantAngle>,
    pub abel: AbelFit,
}

/// `max(1, ⌊max(C_fit, 392 A)⌋)`.
pub fn k_max_from(c_fit: f64, a_est: f64) -> usize {
    (c_fit.max(392.0 * a_est).floor() as usize).max(1)
}

/// Count resonant angles and compare with `max(C_fit, 392·A_est)`.
pub fn kmax_check(
    alpha: &VerblunskySequence,
    n: usize,
    config: &ResonanceConfig,
) -> Result<KmaxReport> {
    let resonant = resonant_angles(alpha, n, config)?;
    let a_est = estimate_log_constant(&alpha.truncated(n.max(crate::generators::LOG_CONSTANT_MIN_N)))?.a_est;
    let lo = (n as f64).powf(-1.0 / 3.0).min(KMAX_ABEL_XI_MIN);
    let xis = crate::bernstein_szego::log_spaced(lo, 0.5, KMAX_ABEL_POINTS);
    let abel = abel_log_bound(pruefer_abel_sweep(alpha, 0.0, &xis, n)?)?;
    let e_n = harmonic(n);
    let log_n = (n as f64).ln();
    let c_fit = (abel.c1 * log_n / 3.0 + abel.c2) / e_n;
    let bound_392a = 392.0 * a_est;
    let k_found = resonant.len();
    Ok(KmaxReport {
        n,
        k_found,
        a_est,
        bound_392a,
        c_fit,
        k_max: k_max_from(c_fit, a_est),
        holds: k_found as f64 <= c_fit.max(bound_392a),
        e_n,
        e_n_minus_log_n: e_n - log_n,
        resonant,
        abel,
    })
}

/// Trajectory-based accumulator, used to cross-check the grid kernel.
pub fn accumulator_at(alpha: &VerblunskySequence, eta: f64, n: usize) -> Result<Complex64> {
    Ok(pruefer_evolve(alpha, eta, 0.0, n)?.final_accumulator())
}

//! Prüfer radius/phase evolution along a coefficient sequence.
//!
//! Writing `Φ_n(e^{iη}, β) = R_n exp(i(nη + θ_n))` for the polynomials of the
//! rotated coefficients `e^{iβ}α_j`, one step with
//! `w_j = α_j e^{i[(j+1)η + β + 2θ_j]}` reads
//!
//! ```text
//! R_{j+1}² / R_j² = |1 - w_j|² = 1 + |α_j|² - 2 Re w_j
//! e^{-i(θ_{j+1} - θ_j)} = (1 - w_j) / |1 - w_j|
//! ```
//!
//! and the resonance accumulator is `A(j, η, β) = Σ_{k<j} w_k`. Since
//! `Re(1 - w_j) > 0`, the phase increment is the principal argument and the
//! phase is kept as a continuous real lift.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{OpucError, Result};
use crate::model::VerblunskySequence;

/// One Prüfer trajectory at fixed `(η, β)`. Index `j` runs over `0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrueferTrajectory {
    pub eta: f64,
    pub beta: f64,
    pub radii_log: Vec<f64>,
    pub phases: Vec<f64>,
    pub accumulator: Vec<Complex64>,
}

impl PrueferTrajectory {
    pub fn len(&self) -> usize {
        self.radii_log.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `log R_n` at the final step.
    pub fn final_log_radius(&self) -> f64 {
        *self.radii_log.last().expect("trajectory holds j = 0")
    }

    pub fn final_accumulator(&self) -> Complex64 {
        *self.accumulator.last().expect("trajectory holds j = 0")
    }
}

// e^{ikη} with the rounding error of the product kη folded back in
#[inline]
fn cis_multiple(k: usize, eta: f64) -> Complex64 {
    let kf = k as f64;
    let p = kf * eta;
    let err = kf.mul_add(eta, -p);
    let base = Complex64::from_polar(1.0, p);
    base * Complex64::new(1.0, err)
}

#[inline]
fn radius_factor(w: Complex64) -> f64 {
    let re = 1.0 - w.re;
    re * re + w.im * w.im
}

// Error-free transformations for the compensated phase. A phase is kept as
// an unevaluated sum `hi + lo`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[inline]
fn dd_add(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let (s, e) = two_sum(a.0, b.0);
    let e = e + a.1 + b.1;
    let hi = s + e;
    (hi, e - (hi - s))
}

// low word of 2π
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// `e^{i(hi + lo)}` with the argument reduced modulo 2π in double-double.
#[inline]
fn cis_compensated(angle: (f64, f64)) -> Complex64 {
    let k = (angle.0 / TAU).round();
    let (p, pe) = two_prod(k, TAU);
    let (s, se) = two_sum(angle.0, -p);
    let tail = se - pe + angle.1 - k * TAU_LO;
    let hi = s + tail;
    let lo = tail - (hi - s);
    Complex64::from_polar(1.0, hi) * Complex64::new(1.0, lo)
}

/// Evolve `R_j`, `θ_j` and `A(j, η, β)` for `j = 0..=n` from `R_0 = 1`,
/// `θ_0 = 0`. Coefficients past the end of `alpha` are zero.
///
/// The phase `(j+1)η + β + 2θ_j` is formed and reduced in double-double:
/// near-cancellation in `1 - w_j` amplifies phase rounding, and a plain
/// `f64` phase loses about three digits of `R_n` by `n = 1000`.
pub fn pruefer_evolve(
    alpha: &VerblunskySequence,
    eta: f64,
    beta: f64,
    n: usize,
) -> Result<PrueferTrajectory> {
    let mut radii_log = Vec::with_capacity(n + 1);
    let mut phases = Vec::with_capacity(n + 1);
    let mut accumulator = Vec::with_capacity(n + 1);
    let (mut log_r, mut theta, mut acc) = (0.0, (0.0, 0.0), Complex64::new(0.0, 0.0));
    radii_log.push(log_r);
    phases.push(0.0);
    accumulator.push(acc);
    for j in 0..n {
        let a = alpha.get(j);
        let base = dd_add(two_prod((j + 1) as f64, eta), (beta, 0.0));
        let gamma = dd_add(base, (2.0 * theta.0, 2.0 * theta.1));
        let w = a * cis_compensated(gamma);
        let factor = radius_factor(w);
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(OpucError::NonpositiveRadius { step: j });
        }
        let small = a.norm_sqr() - 2.0 * w.re;
        log_r += if small > -0.5 {
            0.5 * small.ln_1p()
        } else {
            0.5 * factor.ln()
        };
        theta = dd_add(theta, (w.im.atan2(1.0 - w.re), 0.0));
        acc += w;
        radii_log.push(log_r);
        phases.push(theta.0);
        accumulator.push(acc);
    }
    Ok(PrueferTrajectory {
        eta,
        beta,
        radii_log,
        phases,
        accumulator,
    })
}

/// Final values of a trajectory, without the history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrueferEndpoint {
    pub log_radius: f64,
    pub accumulator: Complex64,
    /// `e^{iθ_n}`.
    pub phase: Complex64,
}

/// Same recursion as [`pruefer_evolve`] but keeping only the endpoint, with
/// the phase carried as a unit complex number and the radius logged in
/// batches. Used for dense angle grids.
pub fn pruefer_endpoint(alpha: &[Complex64], eta: f64, beta: f64, n: usize) -> PrueferEndpoint {
    const RESET: usize = 256;
    const LOG_BATCH: usize = 32;
    let steps = n.min(alpha.len());
    let step_rot = Complex64::from_polar(1.0, eta);
    let rb = Complex64::from_polar(1.0, beta);
    let mut zpow = Complex64::new(1.0, 0.0);
    let mut u = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut log_r = 0.0;
    let mut prod = 1.0;
    for (j, &a) in alpha[..steps].iter().enumerate() {
        if j % RESET == 0 {
            zpow = cis_multiple(j + 1, eta) * rb;
            u /= u.norm();
        } else {
            zpow *= step_rot;
        }
        let w = a * zpow * u * u;
        acc += w;
        let factor = radius_factor(w);
        prod *= factor;
        if j % LOG_BATCH == LOG_BATCH - 1 {
            log_r += 0.5 * prod.ln();
            prod = 1.0;
        }
        u *= Complex64::new(1.0 - w.re, w.im) / factor.sqrt();
    }
    log_r += 0.5 * prod.ln();
    PrueferEndpoint {
        log_radius: log_r,
        accumulator: acc,
        phase: u / u.norm(),
    }
}

/// `exp(-Re A(j, η, β))` for every step: the right-hand proxy for `R_j` in
/// the ℓ² asymptotics.
pub fn asymptotic_proxy(traj: &PrueferTrajectory) -> Vec<f64> {
    traj.accumulator.iter().map(|a| (-a.re).exp()).collect()
}

/// `log(R_j / proxy_j) = log R_j + Re A(j, η, β)`.
pub fn proxy_log_ratio(traj: &PrueferTrajectory) -> Vec<f64> {
    traj.radii_log
        .iter()
        .zip(&traj.accumulator)
        .map(|(r, a)| r + a.re)
        .collect()
}

/// A partial tail sum together with its oscillation over the final dyadic
/// block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailSum {
    pub value: Complex64,
    /// `max |S(M) - S(N)|` over `M` in the upper half of `[n, N]`.
    pub cauchy_variation: f64,
}

/// `Σ_{j=n}^{N} α_j e^{ijη}`.
pub fn alpha_tail(alpha: &VerblunskySequence, eta: f64, n: usize, upper: usize) -> Result<TailSum> {
    if n > upper {
        return Err(OpucError::invalid(format!(
            "tail lower index {n} exceeds upper index {upper}"
        )));
    }
    let mid = n + (upper - n) / 2;
    let mut partial = Vec::with_capacity(upper - mid + 1);
    let mut s = Complex64::new(0.0, 0.0);
    for j in n..=upper {
        s += alpha.get(j) * cis_multiple(j, eta);
        if j >= mid {
            partial.push(s);
        }
    }
    let cauchy_variation = partial.iter().map(|p| (p - s).norm()).fold(0.0, f64::max);
    Ok(TailSum {
        value: s,
        cauchy_variation,
    })
}

// hat[j] = Σ_{k=j}^{L-1} α_k e^{ikη}, with hat[L] = 0
fn tail_sums(alpha: &VerblunskySequence, eta: f64) -> Vec<Complex64> {
    let l = alpha.len();
    let mut hat = vec![Complex64::new(0.0, 0.0); l + 1];
    for k in (0..l).rev() {
        hat[k] = hat[k + 1] + alpha.get(k) * cis_multiple(k, eta);
    }
    hat
}

/// `Σ_{j=1}^{N} |α̂(η, j)| |α_{j-1}|`, the tail sums running to the end of
/// the stored sequence.
pub fn fsr_criterion(alpha: &VerblunskySequence, eta: f64, terms: usize) -> f64 {
    let hat = tail_sums(alpha, eta);
    (1..=terms.min(alpha.len()))
        .map(|j| hat[j].norm() * alpha.get(j - 1).norm())
        .sum()
}

/// Partial sums of [`fsr_criterion`] at dyadic `N`, with the fitted exponent
/// `p` of `S(N) ≈ a N^p` over the upper half of the checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FsrProfile {
    pub checkpoints: Vec<(usize, f64)>,
    pub growth_exponent: f64,
}

pub fn fsr_profile(alpha: &VerblunskySequence, eta: f64) -> FsrProfile {
    let hat = tail_sums(alpha, eta);
    let mut checkpoints = Vec::new();
    let mut s = 0.0;
    let mut next = 1usize;
    for j in 1..=alpha.len() {
        s += hat[j].norm() * alpha.get(j - 1).norm();
        if j == next || j == alpha.len() {
            checkpoints.push((j, s));
            next *= 2;
        }
    }
    let usable: Vec<(f64, f64)> = checkpoints
        .iter()
        .skip(checkpoints.len() / 2)
        .filter(|(_, v)| *v > 0.0)
        .map(|&(n, v)| ((n as f64).ln(), v.ln()))
        .collect();
    let growth_exponent = crate::stats::linear_fit(&usable).map_or(0.0, |f| f.slope);
    FsrProfile {
        checkpoints,
        growth_exponent,
    }
}

/// Phase lifts `θ_j(η, 0)` for `j = 0..=n`.
pub fn phase_lift(alpha: &VerblunskySequence, eta: f64, n: usize) -> Result<Vec<f64>> {
    Ok(pruefer_evolve(alpha, eta, 0.0, n)?.phases)
}

/// `2π`-periodic grid `2πk/size`.
pub fn uniform_angles(size: usize) -> Vec<f64> {
    (0..size).map(|k| TAU * k as f64 / size as f64).collect()
}

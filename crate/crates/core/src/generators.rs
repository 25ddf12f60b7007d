//! Verblunsky families in and around the logarithmic class
//! `Σ_{n≤N} (n+1)|α_n|² ≤ A log N`, the estimator for `A`, and the plain
//! text sequence file format.

use std::f64::consts::TAU;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{OpucError, Result};
use crate::model::VerblunskySequence;

/// Phase rule for [`coulomb_family`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseRule {
    /// `φ_j = 0`.
    Zero,
    /// `φ_j = -ω(j+1)`: a single frequency, resonant near `η = ω`.
    Frequency(f64),
    /// `φ_j` i.i.d. uniform on `[0, 2π)` from a ChaCha stream keyed by the seed.
    Random { seed: u64 },
}

impl PhaseRule {
    fn tag(&self) -> String {
        match self {
            PhaseRule::Zero => "zero".into(),
            PhaseRule::Frequency(w) => format!("frequency({w})"),
            PhaseRule::Random { seed } => format!("random(seed={seed})"),
        }
    }
}

/// `α_j = c e^{iφ_j} / (j+1)`.
pub fn coulomb_family(c: f64, rule: PhaseRule, n: usize) -> Result<VerblunskySequence> {
    if !(0.0..1.0).contains(&c) {
        return Err(OpucError::invalid(format!("coulomb strength {c} must lie in [0, 1)")));
    }
    let mut rng = match rule {
        PhaseRule::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let values = (0..n)
        .map(|j| {
            let phase = match rule {
                PhaseRule::Zero => 0.0,
                PhaseRule::Frequency(w) => -w * (j + 1) as f64,
                PhaseRule::Random { .. } => rng.as_mut().map_or(0.0, |r| r.gen::<f64>() * TAU),
            };
            Complex64::from_polar(c / (j + 1) as f64, phase)
        })
        .collect();
    Ok(VerblunskySequence::new(values)?.with_tag(format!(
        "coulomb c={c} phase={} n={n}",
        rule.tag()
    )))
}

/// Coefficients uniform in the disk of the given radius.
pub fn random_disk(radius: f64, n: usize, seed: u64) -> Result<VerblunskySequence> {
    if !(0.0..1.0).contains(&radius) {
        return Err(OpucError::invalid(format!("radius {radius} must lie in [0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen::<f64>() * TAU)
        })
        .collect();
    Ok(VerblunskySequence::new(values)?.with_tag(format!(
        "random-disk radius={radius} seed={seed} n={n}"
    )))
}

/// `α_j = a^{j+1}`.
pub fn geometric(a: f64, n: usize) -> Result<VerblunskySequence> {
    let values = (0..n).map(|j| Complex64::new(a.powi(j as i32 + 1), 0.0)).collect();
    Ok(VerblunskySequence::new(values)?.with_tag(format!("geometric a={a} n={n}")))
}

/// `α_j = a` for every `j`.
pub fn constant(a: Complex64, n: usize) -> Result<VerblunskySequence> {
    Ok(VerblunskySequence::new(vec![a; n])?.with_tag(format!("constant a={a} n={n}")))
}

/// `α_j = c cos(ω(j+1)) / (j+1)`, the circle analogue of the
/// Wigner–von Neumann potential.
pub fn wigner_von_neumann(c: f64, omega: f64, n: usize) -> Result<VerblunskySequence> {
    let values = (0..n)
        .map(|j| Complex64::new(c * (omega * (j + 1) as f64).cos() / (j + 1) as f64, 0.0))
        .collect();
    Ok(VerblunskySequence::new(values)?.with_tag(format!("wvn c={c} omega={omega} n={n}")))
}

/// Coefficients of `(1 - γ) dη/2π + γ δ_0`, a uniform measure with one point
/// mass at angle zero: `α_j = γ / (1 + jγ)`.
pub fn point_mass_family(gamma: f64, n: usize) -> Result<VerblunskySequence> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(OpucError::invalid(format!("atom weight {gamma} must lie in (0, 1)")));
    }
    let values = (0..n)
        .map(|j| Complex64::new(gamma / (1.0 + j as f64 * gamma), 0.0))
        .collect();
    Ok(VerblunskySequence::new(values)?.with_tag(format!("point-mass gamma={gamma} n={n}")))
}

/// `‖(α_0, …, α_{n-1})‖²` in the weight `1 + j`.
pub fn weighted_norm_sq(alpha: &VerblunskySequence, n: usize) -> f64 {
    (0..n).map(|j| alpha.get(j).norm_sqr() * (j + 1) as f64).sum()
}

/// Smallest `N` used by [`estimate_log_constant`].
pub const LOG_CONSTANT_MIN_N: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogConstant {
    pub a_est: f64,
    /// The `N` attaining the maximum.
    pub argmax: usize,
    /// `(N, Σ_{n≤N}(n+1)|α_n|² / log N)` at dyadic `N` and at the end.
    pub profile: Vec<(usize, f64)>,
}

/// `A_est = max_{10 ≤ N < len} Σ_{n≤N}(n+1)|α_n|² / log N`.
pub fn estimate_log_constant(alpha: &VerblunskySequence) -> Result<LogConstant> {
    if alpha.len() < LOG_CONSTANT_MIN_N {
        return Err(OpucError::invalid(format!(
            "need at least {LOG_CONSTANT_MIN_N} coefficients, got {}",
            alpha.len()
        )));
    }
    let last = (alpha.len() - 1).max(LOG_CONSTANT_MIN_N);
    let mut s = 0.0;
    let mut a_est = 0.0;
    let mut argmax = LOG_CONSTANT_MIN_N;
    let mut profile = Vec::new();
    let mut next_dyadic = 16;
    for n in 0..=last {
        s += alpha.get(n).norm_sqr() * (n + 1) as f64;
        if n < LOG_CONSTANT_MIN_N {
            continue;
        }
        let ratio = s / (n as f64).ln();
        if ratio > a_est {
            a_est = ratio;
            argmax = n;
        }
        if n == next_dyadic || n == last {
            profile.push((n, ratio));
            if n == next_dyadic {
                next_dyadic *= 2;
            }
        }
    }
    Ok(LogConstant {
        a_est,
        argmax,
        profile,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionalL1 {
    /// `|α_0| + Σ_{n≥1} n^{-ε/4}|α_n|`.
    pub direct: f64,
    /// Cauchy–Schwarz on each dyadic block `[2^l, 2^{l+1})`:
    /// `(Σ (n+1)|α_n|²)^{1/2} (Σ n^{-ε/2}/(n+1))^{1/2}`, summed over blocks.
    pub dyadic_bound: f64,
}

pub fn ell1_fractional_check(alpha: &VerblunskySequence, eps: f64) -> Result<FractionalL1> {
    if !(eps > 0.0) {
        return Err(OpucError::invalid(format!("exponent {eps} must be positive")));
    }
    let a0 = alpha.get(0).norm();
    let weight = |n: usize| (n as f64).powf(-eps / 4.0);
    let direct = a0
        + (1..alpha.len())
            .map(|n| weight(n) * alpha.get(n).norm())
            .sum::<f64>();
    let mut dyadic_bound = a0;
    let mut lo = 1usize;
    while lo < alpha.len() {
        let hi = (2 * lo).min(alpha.len());
        let energy: f64 = (lo..hi).map(|n| (n + 1) as f64 * alpha.get(n).norm_sqr()).sum();
        let weights: f64 = (lo..hi)
            .map(|n| (n as f64).powf(-eps / 2.0) / (n + 1) as f64)
            .sum();
        dyadic_bound += (energy * weights).sqrt();
        lo *= 2;
    }
    Ok(FractionalL1 {
        direct,
        dyadic_bound,
    })
}

/// Write one coefficient per line as `re im` after a `# generator:` header.
pub fn write_sequence<W: Write>(seq: &VerblunskySequence, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# generator: {}", seq.generator_tag().unwrap_or("unknown"))?;
    for a in seq.values() {
        writeln!(out, "{:.16e} {:.16e}", a.re, a.im)?;
    }
    Ok(())
}

pub fn read_sequence<R: BufRead>(input: R) -> Result<VerblunskySequence> {
    let mut tag = None;
    let mut values = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| OpucError::invalid(format!("read error: {e}")))?;
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(t) = rest.trim().strip_prefix("generator:") {
                tag.get_or_insert_with(|| t.trim().to_string());
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let mut next = || -> Result<f64> {
            parts
                .next()
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| OpucError::invalid(format!("line {}: expected `re im`", lineno + 1)))
        };
        let re = next()?;
        let im = next()?;
        if parts.next().is_some() {
            return Err(OpucError::invalid(format!("line {}: trailing fields", lineno + 1)));
        }
        values.push(Complex64::new(re, im));
    }
    let seq = VerblunskySequence::new(values)?;
    Ok(match tag {
        Some(t) => seq.with_tag(t),
        None => seq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_strength_is_zero_sequence() {
        let s = coulomb_family(0.0, PhaseRule::Random { seed: 3 }, 50).unwrap();
        assert_eq!(s.max_modulus(), 0.0);
        assert_eq!(estimate_log_constant(&s).unwrap().a_est, 0.0);
    }

    #[test]
    fn direct_formula() {
        let s = coulomb_family(0.2, PhaseRule::Zero, 10).unwrap();
        assert!((s.get(4) - Complex64::new(0.04, 0.0)).norm() < 1e-17);
        assert!(coulomb_family(1.0, PhaseRule::Zero, 3).is_err());
    }

    #[test]
    fn seeded_phases_are_reproducible() {
        let a = coulomb_family(0.3, PhaseRule::Random { seed: 11 }, 100).unwrap();
        let b = coulomb_family(0.3, PhaseRule::Random { seed: 11 }, 100).unwrap();
        let c = coulomb_family(0.3, PhaseRule::Random { seed: 12 }, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn short_sequences_rejected() {
        assert!(estimate_log_constant(&VerblunskySequence::zeros(9)).is_err());
    }

    #[test]
    fn fractional_sums() {
        let zero = VerblunskySequence::zeros(100);
        let z = ell1_fractional_check(&zero, 1.0).unwrap();
        assert_eq!((z.direct, z.dyadic_bound), (0.0, 0.0));
        let s = coulomb_family(0.2, PhaseRule::Zero, 4096).unwrap();
        let coarse = ell1_fractional_check(&s, 1.0).unwrap();
        let fine = ell1_fractional_check(&s, 0.5).unwrap();
        assert!(coarse.dyadic_bound >= coarse.direct);
        assert!(fine.direct > coarse.direct);
        assert!(ell1_fractional_check(&s, 0.0).is_err());
    }

    #[test]
    fn sequence_file_round_trip() {
        let s = random_disk(0.9, 25, 5).unwrap();
        let mut buf = Vec::new();
        write_sequence(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# generator: random-disk"));
        let back = read_sequence(buf.as_slice()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn malformed_sequence_lines() {
        assert!(read_sequence("0.1\n".as_bytes()).is_err());
        assert!(read_sequence("0.1 0.2 0.3\n".as_bytes()).is_err());
        assert!(read_sequence("1.0 0.0\n".as_bytes()).is_err());
    }
}

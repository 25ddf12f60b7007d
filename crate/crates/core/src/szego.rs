//! Forward Szegő recursion (coefficients to polynomials) and the inverse map
//! from a measure back to its Verblunsky coefficients by Gram–Schmidt.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{OpucError, Result};
use crate::model::{CircleMeasure, VerblunskySequence};

/// Condition estimate above which the moment matrix is considered singular.
pub const CONDITION_LIMIT: f64 = 1e12;

/// The pair `Φ_n`, `Φ_n^*` together with `log ∏_{j<n}(1 - |α_j|²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPair {
    phi: Vec<Complex64>,
    phi_star: Vec<Complex64>,
    log_norm_sq: f64,
}

impl Default for MonicPair {
    fn default() -> Self {
        Self::identity()
    }
}

impl MonicPair {
    /// `Φ_0 = Φ_0^* = 1`.
    pub fn identity() -> Self {
        let one = vec![Complex64::new(1.0, 0.0)];
        Self {
            phi: one.clone(),
            phi_star: one,
            log_norm_sq: 0.0,
        }
    }

    /// Run the recursion over the first `n` coefficients of `alpha`.
    pub fn from_sequence(alpha: &VerblunskySequence, n: usize) -> Result<Self> {
        (0..n).try_fold(Self::identity(), |state, j| szego_step(&state, alpha.get(j)))
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Coefficients of `Φ_n`, lowest degree first.
    pub fn phi(&self) -> &[Complex64] {
        &self.phi
    }

    pub fn phi_star(&self) -> &[Complex64] {
        &self.phi_star
    }

    /// `‖Φ_n‖² = ∏_{j<n}(1 - |α_j|²)`.
    pub fn norm_sq(&self) -> f64 {
        self.log_norm_sq.exp()
    }

    pub fn log_norm_sq(&self) -> f64 {
        self.log_norm_sq
    }

    /// `Φ_n(z)` by Horner's rule.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        horner(&self.phi, z)
    }

    pub fn evaluate_star(&self, z: Complex64) -> Complex64 {
        horner(&self.phi_star, z)
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// One step `Φ_{n+1}(z) = zΦ_n(z) - conj(α_n) Φ_n^*(z)`.
pub fn szego_step(state: &MonicPair, alpha_n: Complex64) -> Result<MonicPair> {
    let modulus = alpha_n.norm();
    if !(modulus < 1.0) {
        return Err(OpucError::OutsideDisk {
            index: state.degree(),
            modulus,
        });
    }
    let n = state.degree();
    let ac = alpha_n.conj();
    let mut phi = Vec::with_capacity(n + 2);
    phi.push(-ac * state.phi_star[0]);
    for k in 1..=n {
        phi.push(state.phi[k - 1] - ac * state.phi_star[k]);
    }
    phi.push(state.phi[n]);
    let phi_star = phi.iter().rev().map(|c| c.conj()).collect();
    Ok(MonicPair {
        phi,
        phi_star,
        log_norm_sq: state.log_norm_sq + (-alpha_n.norm_sqr()).ln_1p(),
    })
}

/// `Φ_n(e^{iη})` for every angle, by Horner's rule on the stored
/// coefficients.
pub fn evaluate_on_circle(state: &MonicPair, etas: &[f64]) -> Vec<Complex64> {
    etas.par_iter()
        .map(|&eta| state.evaluate(Complex64::from_polar(1.0, eta)))
        .collect()
}

/// Orthonormal values `φ_n(e^{iη}) = Φ_n(e^{iη}) / ‖Φ_n‖`.
pub fn orthonormal_on_circle(state: &MonicPair, etas: &[f64]) -> Vec<Complex64> {
    let scale = (-0.5 * state.log_norm_sq).exp();
    evaluate_on_circle(state, etas)
        .into_iter()
        .map(|v| v * scale)
        .collect()
}

/// Point value of the recursion at `z = e^{iη}` without forming
/// coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleValue {
    /// `Φ_n(e^{iη}) / e^{log_scale}`.
    pub phi: Complex64,
    /// `Φ_n^*(e^{iη}) / e^{log_scale}`.
    pub phi_star: Complex64,
    pub log_scale: f64,
}

impl CircleValue {
    pub fn log_modulus(&self) -> f64 {
        self.phi.norm().ln() + self.log_scale
    }
}

/// Run the vector recursion `(Φ, Φ^*) ↦ (zΦ - conj(α)Φ^*, Φ^* - αzΦ)` at a
/// single point of the circle, rescaling to stay in range.
pub fn evaluate_by_recursion(alpha: &VerblunskySequence, n: usize, eta: f64) -> CircleValue {
    let mut phi = Complex64::new(1.0, 0.0);
    let mut phi_star = Complex64::new(1.0, 0.0);
    let mut log_scale = 0.0;
    for j in 0..n {
        let z = Complex64::from_polar(1.0, eta);
        let a = alpha.get(j);
        let zphi = z * phi;
        let next = zphi - a.conj() * phi_star;
        let next_star = phi_star - a * zphi;
        phi = next;
        phi_star = next_star;
        if j % 32 == 31 {
            let s = phi.norm().max(phi_star.norm());
            if s > 0.0 && !(1e-100..1e100).contains(&s) {
                phi /= s;
                phi_star /= s;
                log_scale += s.ln();
            }
        }
    }
    CircleValue {
        phi,
        phi_star,
        log_scale,
    }
}

/// Recover `α_0, …, α_{n-1}` from a measure: modified Gram–Schmidt on
/// `1, z, …, z^n` in `L²(dμ)`, with the inner product taken from the
/// Toeplitz matrix of moments, reading `α_k = -conj(Φ_{k+1}(0))`.
///
/// The condition estimate is `(n+1)·max|c_k| / min_k ‖Φ_k‖²`: the numerator
/// bounds the largest eigenvalue of the moment matrix and each monic norm
/// bounds the smallest from above.
pub fn verblunsky_from_measure(m: &CircleMeasure, n: usize) -> Result<VerblunskySequence> {
    let moments = m.moments_through(n)?;
    let c0 = moments[0].re;
    if !(c0 > 0.0) {
        return Err(OpucError::invalid("measure has zero total mass"));
    }
    // normalise so the inner product is that of a probability measure
    let moments: Vec<Complex64> = moments.iter().map(|c| c / c0).collect();
    // ⟨z^a, z^b⟩ = ∫ e^{i(b-a)η} dμ = c_{a-b}, c_{-k} = conj(c_k)
    let gram = |a: usize, b: usize| -> Complex64 {
        if a >= b {
            moments[a - b]
        } else {
            moments[b - a].conj()
        }
    };
    let inner = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, ua) in u.iter().enumerate() {
            if *ua == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut row = Complex64::new(0.0, 0.0);
            for (b, vb) in v.iter().enumerate() {
                row += gram(a, b) * vb;
            }
            acc += ua.conj() * row;
        }
        acc
    };
    let lambda_max = (n + 1) as f64 * moments.iter().map(|c| c.norm()).fold(0.0, f64::max);

    let mut basis: Vec<(Vec<Complex64>, f64)> = Vec::with_capacity(n + 1);
    let mut alphas = Vec::with_capacity(n);
    let mut min_norm = f64::INFINITY;
    for k in 0..=n {
        let mut p = vec![Complex64::new(0.0, 0.0); k + 1];
        p[k] = Complex64::new(1.0, 0.0);
        for (q, q_norm) in &basis {
            let coeff = inner(q, &p) / *q_norm;
            for (pi, qi) in p.iter_mut().zip(q) {
                *pi -= coeff * qi;
            }
        }
        let norm = inner(&p, &p).re;
        min_norm = min_norm.min(norm);
        let condition = lambda_max / min_norm.max(0.0);
        if !(norm > 0.0) || !(condition < CONDITION_LIMIT) {
            return Err(OpucError::IllConditioned {
                degree: k,
                condition,
            });
        }
        if k > 0 {
            alphas.push(-p[0].conj());
        }
        basis.push((p, norm));
    }
    if let Some((index, a)) = alphas.iter().enumerate().find(|(_, a)| a.norm() >= 1.0) {
        return Err(OpucError::IllConditioned {
            degree: index + 1,
            condition: a.norm(),
        });
    }
    Ok(VerblunskySequence::new(alphas)?.with_tag(format!("recovered from measure, n={n}")))
}

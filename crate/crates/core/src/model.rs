//! Domain types shared by every module: coefficient sequences, measures on
//! the circle and arcs.
//!
//! Measures are stored as values of the absolutely continuous density on the
//! uniform grid `η_k = 2πk/M` together with an explicit list of atoms.
//! Integrals of the density use the periodic trapezoid rule, which is
//! spectrally accurate for the smooth densities produced by this crate.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{OpucError, Result};

/// Reduce an angle to `[0, 2π)`.
pub fn normalize_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two angles along the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// A truncated sequence of Verblunsky coefficients. Entries past the stored
/// length are treated as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct VerblunskySequence {
    values: Vec<Complex64>,
    generator_tag: Option<String>,
}

impl VerblunskySequence {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        for (index, a) in values.iter().enumerate() {
            let modulus = a.norm();
            if !modulus.is_finite() || modulus >= 1.0 {
                return Err(OpucError::OutsideDisk { index, modulus });
            }
        }
        Ok(Self {
            values,
            generator_tag: None,
        })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); len],
            generator_tag: Some(format!("zero n={len}")),
        }
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.generator_tag = Some(tag.into());
        self
    }

    pub fn generator_tag(&self) -> Option<&str> {
        self.generator_tag.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `α_j`, or zero beyond the stored range.
    #[inline]
    pub fn get(&self, j: usize) -> Complex64 {
        self.values
            .get(j)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// The first `n` coefficients, zero-padded if the sequence is shorter.
    pub fn truncated(&self, n: usize) -> Self {
        let values = (0..n).map(|j| self.get(j)).collect();
        Self {
            values,
            generator_tag: self.generator_tag.clone(),
        }
    }

    /// Coefficients `e^{iβ} α_j`.
    pub fn rotated(&self, beta: f64) -> Self {
        let rot = Complex64::from_polar(1.0, beta);
        Self {
            values: self.values.iter().map(|a| a * rot).collect(),
            generator_tag: self.generator_tag.clone(),
        }
    }

    /// Scale every coefficient by `t`, which must keep them inside the disk.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        let seq = Self::new(self.values.iter().map(|a| a * t).collect())?;
        Ok(match &self.generator_tag {
            Some(tag) => seq.with_tag(format!("{tag} scaled={t}")),
            None => seq,
        })
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// `log ∏_{j<n} (1 - |α_j|²)`.
    pub fn log_norm_product(&self, n: usize) -> f64 {
        (0..n.min(self.len()))
            .map(|j| (-self.values[j].norm_sqr()).ln_1p())
            .sum()
    }
}

/// A point mass on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub angle: f64,
    pub mass: f64,
}

/// A finite measure on `[0, 2π)`: grid density plus atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleMeasure {
    density: Vec<f64>,
    atoms: Vec<Atom>,
    // cumulative[k] = ∫_0^{η_k} of the piecewise-linear interpolant
    cumulative: Vec<f64>,
}

impl CircleMeasure {
    pub fn new(density: Vec<f64>, mut atoms: Vec<Atom>) -> Result<Self> {
        if density.is_empty() {
            return Err(OpucError::invalid("measure grid must be nonempty"));
        }
        if let Some(k) = density.iter().position(|d| !d.is_finite() || *d < 0.0) {
            return Err(OpucError::invalid(format!(
                "density entry {k} is negative or not finite"
            )));
        }
        for atom in atoms.iter_mut() {
            if !(atom.mass.is_finite() && atom.mass > 0.0 && atom.angle.is_finite()) {
                return Err(OpucError::invalid("atoms need finite angle and positive mass"));
            }
            atom.angle = normalize_angle(atom.angle);
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].iter().any(|b| b.angle == a.angle) {
                return Err(OpucError::invalid(format!(
                    "duplicate atom angle {}",
                    a.angle
                )));
            }
        }
        let m = density.len();
        let h = TAU / m as f64;
        let mut cumulative = Vec::with_capacity(m + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for k in 0..m {
            acc += 0.5 * h * (density[k] + density[(k + 1) % m]);
            cumulative.push(acc);
        }
        Ok(Self {
            density,
            atoms,
            cumulative,
        })
    }

    /// Normalised Lebesgue measure `dη/2π` on a grid of `grid_size` points.
    pub fn uniform(grid_size: usize) -> Result<Self> {
        Self::new(vec![1.0 / TAU; grid_size], Vec::new())
    }

    pub fn grid_size(&self) -> usize {
        self.density.len()
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn cell_width(&self) -> f64 {
        TAU / self.grid_size() as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        TAU * k as f64 / self.grid_size() as f64
    }

    pub fn ac_mass(&self) -> f64 {
        self.cumulative[self.grid_size()]
    }

    pub fn total_mass(&self) -> f64 {
        self.ac_mass() + self.atoms.iter().map(|a| a.mass).sum::<f64>()
    }

    /// Same density and atoms added (or replaced by) `atoms`.
    pub fn with_atoms(&self, atoms: Vec<Atom>) -> Result<Self> {
        Self::new(self.density.clone(), atoms)
    }

    /// Rescale so the total mass is one.
    pub fn normalized(&self) -> Result<Self> {
        let total = self.total_mass();
        if !(total > 0.0) {
            return Err(OpucError::invalid("cannot normalise a zero measure"));
        }
        let density = self.density.iter().map(|d| d / total).collect();
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                angle: a.angle,
                mass: a.mass / total,
            })
            .collect();
        Self::new(density, atoms)
    }

    // ∫_0^x of the periodic piecewise-linear interpolant, for any real x
    fn primitive(&self, x: f64) -> f64 {
        let m = self.grid_size();
        let h = self.cell_width();
        let turns = (x / TAU).floor();
        let r = x - turns * TAU;
        let mut k = (r / h).floor() as usize;
        if k >= m {
            k = m - 1;
        }
        let t = r - k as f64 * h;
        let d0 = self.density[k];
        let d1 = self.density[(k + 1) % m];
        turns * self.ac_mass() + self.cumulative[k] + t * d0 + 0.5 * t * t / h * (d1 - d0)
    }

    /// `μ(I)`: the density is integrated by linear interpolation between
    /// grid nodes (the periodic trapezoid rule over the full circle) and
    /// atoms inside the open arc contribute their full mass.
    pub fn interval_mass(&self, interval: &IntervalOnCircle) -> f64 {
        let total = self.total_mass();
        if interval.is_full_circle() {
            return total;
        }
        let a = interval.center - interval.half_width;
        let b = interval.center + interval.half_width;
        let ac = self.primitive(b) - self.primitive(a);
        let pp: f64 = self
            .atoms
            .iter()
            .filter(|atom| interval.contains(atom.angle))
            .map(|atom| atom.mass)
            .sum();
        (ac + pp).clamp(0.0, total)
    }

    /// Largest admissible `|k|` for [`CircleMeasure::moment`].
    pub fn moment_limit(&self) -> usize {
        self.grid_size() / 4
    }

    /// `∫ e^{-ikη} dμ(η)`.
    pub fn moment(&self, k: i64) -> Result<Complex64> {
        self.check_order(k)?;
        Ok(self.moment_with(&twiddles(self.grid_size()), k))
    }

    /// Moments of orders `0..=max_order`, sharing one twiddle table.
    pub fn moments_through(&self, max_order: usize) -> Result<Vec<Complex64>> {
        self.check_order(max_order as i64)?;
        let table = twiddles(self.grid_size());
        Ok((0..=max_order as i64)
            .map(|k| self.moment_with(&table, k))
            .collect())
    }

    fn check_order(&self, k: i64) -> Result<()> {
        let limit = self.moment_limit();
        if k.unsigned_abs() as usize > limit {
            return Err(OpucError::Aliasing { order: k, limit });
        }
        Ok(())
    }

    fn moment_with(&self, table: &[Complex64], k: i64) -> Complex64 {
        let m = self.grid_size();
        // e^{-ikη_j} = table[(-k j) mod M]
        let step = (-k).rem_euclid(m as i64) as usize;
        let mut idx = 0usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for &d in &self.density {
            acc += table[idx] * d;
            idx += step;
            if idx >= m {
                idx -= m;
            }
        }
        acc *= self.cell_width();
        for atom in &self.atoms {
            acc += Complex64::from_polar(atom.mass, -(k as f64) * atom.angle);
        }
        acc
    }
}

/// `e^{2πir/M}` for `r = 0..M`, built symmetric so that entry `M - r` is
/// the exact conjugate of entry `r`.
pub(crate) fn twiddles(m: usize) -> Vec<Complex64> {
    let mut table = vec![Complex64::new(1.0, 0.0); m];
    for r in 1..=m / 2 {
        let t = Complex64::from_polar(1.0, TAU * r as f64 / m as f64);
        let t = if 2 * r == m { Complex64::new(-1.0, 0.0) } else { t };
        table[r] = t;
        table[m - r] = t.conj();
    }
    table
}

/// An open arc `(center - half_width, center + half_width)` on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalOnCircle {
    pub center: f64,
    pub half_width: f64,
}

impl IntervalOnCircle {
    pub fn new(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width <= PI) || !center.is_finite() {
            return Err(OpucError::invalid(format!(
                "arc half-width {half_width} must lie in (0, π]"
            )));
        }
        Ok(Self {
            center: normalize_angle(center),
            half_width,
        })
    }

    /// The arc of total length `length` centred at `center`.
    pub fn with_length(center: f64, length: f64) -> Result<Self> {
        Self::new(center, 0.5 * length)
    }

    pub fn length(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn is_full_circle(&self) -> bool {
        self.half_width >= PI
    }

    /// `kI`: same centre, `k` times the length (capped at the whole circle).
    pub fn dilated(&self, factor: f64) -> Self {
        Self {
            center: self.center,
            half_width: (self.half_width * factor).min(PI),
        }
    }

    pub fn tripled(&self) -> Self {
        self.dilated(3.0)
    }

    pub fn contains(&self, angle: f64) -> bool {
        self.is_full_circle() || circular_distance(angle, self.center) < self.half_width
    }
}

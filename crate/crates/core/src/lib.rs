//! Orthogonal polynomials on the unit circle with Verblunsky coefficients
//! of Coulomb-type decay: Szegő and Prüfer recursions, Bernstein–Szegő
//! approximants, resonance counting and a multiscale scan for singular
//! spectral mass.

pub mod bernstein_szego;
pub mod error;
pub mod generators;
pub mod model;
pub mod pruefer;
pub mod resonance;
pub mod scan;
pub mod stats;
pub mod szego;

pub use error::{OpucError, Result};
pub use model::{circular_distance, normalize_angle, Atom, CircleMeasure, IntervalOnCircle, VerblunskySequence};
pub use num_complex::Complex64;
pub use pruefer::{pruefer_evolve, PrueferTrajectory};
pub use szego::{szego_step, verblunsky_from_measure, MonicPair};

/// Crate version embedded in generated artifacts.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

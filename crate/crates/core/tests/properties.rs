use std::f64::consts::TAU;

use opuc_core::bernstein_szego::{bs_density, fejer_smooth_indicator};
use opuc_core::generators::{coulomb_family, estimate_log_constant, weighted_norm_sq, PhaseRule};
use opuc_core::pruefer::pruefer_evolve;
use opuc_core::resonance::{almost_orthogonality_bound, WeightedVector};
use opuc_core::scan::{detect_atoms, epsilon_energy, local_scaling_exponent, AtomConfig};
use opuc_core::{Atom, CircleMeasure, Complex64, IntervalOnCircle, MonicPair, VerblunskySequence};
use proptest::prelude::*;

fn coefficients(max_len: usize, radius: f64) -> impl Strategy<Value = VerblunskySequence> {
    prop::collection::vec((0.0..radius, 0.0..TAU), 1..max_len).prop_map(|v| {
        VerblunskySequence::new(v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect()).unwrap()
    })
}

fn unit(entries: Vec<(f64, f64)>) -> WeightedVector {
    WeightedVector::new(entries.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
        .normalized()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reversed_polynomial_is_conjugate_reflection(alpha in coefficients(24, 0.95)) {
        let p = MonicPair::from_sequence(&alpha, alpha.len()).unwrap();
        let n = p.degree();
        for k in 0..=n {
            prop_assert_eq!(p.phi_star()[k], p.phi()[n - k].conj());
        }
        prop_assert_eq!(p.phi()[n], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn norm_is_the_product(alpha in coefficients(24, 0.95)) {
        let p = MonicPair::from_sequence(&alpha, alpha.len()).unwrap();
        let direct: f64 = alpha.values().iter().map(|a| 1.0 - a.norm_sqr()).product();
        prop_assert!((p.norm_sq() - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn moduli_agree_on_the_circle(alpha in coefficients(24, 0.9), eta in 0.0..TAU) {
        let p = MonicPair::from_sequence(&alpha, alpha.len()).unwrap();
        let z = Complex64::from_polar(1.0, eta);
        let a = p.evaluate(z).norm();
        let b = p.evaluate_star(z).norm();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn pruefer_radius_is_rotated_polynomial(alpha in coefficients(40, 0.9), eta in 0.0..TAU, beta in 0.0..TAU) {
        let n = alpha.len();
        let t = pruefer_evolve(&alpha, eta, beta, n).unwrap();
        let p = MonicPair::from_sequence(&alpha.rotated(beta), n).unwrap();
        let direct = p.evaluate(Complex64::from_polar(1.0, eta)).norm().ln();
        prop_assert!((t.final_log_radius() - direct).abs() < 1e-9);
    }

    #[test]
    fn moments_are_hermitian(density in prop::collection::vec(0.0..2.0f64, 64..256), k in 1i64..16) {
        let m = CircleMeasure::new(density, vec![Atom { angle: 0.3, mass: 0.1 }]).unwrap();
        prop_assert_eq!(m.moment(-k).unwrap(), m.moment(k).unwrap().conj());
    }

    #[test]
    fn log_constant_is_scale_quadratic(seed in 0u64..1000, t in 0.05..1.0f64) {
        let alpha = coulomb_family(0.5, PhaseRule::Random { seed }, 200).unwrap();
        let a = estimate_log_constant(&alpha).unwrap().a_est;
        let b = estimate_log_constant(&alpha.scaled(t).unwrap()).unwrap().a_est;
        prop_assert!((b - t * t * a).abs() <= 1e-12 * a);
    }

    #[test]
    fn weighted_norm_below_log_bound(seed in 0u64..1000, c in 0.0..0.99f64, n in 11usize..300) {
        let alpha = coulomb_family(c, PhaseRule::Random { seed }, 300).unwrap();
        let a = estimate_log_constant(&alpha).unwrap().a_est;
        prop_assert!(weighted_norm_sq(&alpha, n) <= a * (n as f64).ln() * (1.0 + 1e-12));
    }

    #[test]
    fn coulomb_seeds_reproduce(seed in any::<u64>()) {
        let a = coulomb_family(0.3, PhaseRule::Random { seed }, 64).unwrap();
        let b = coulomb_family(0.3, PhaseRule::Random { seed }, 64).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn smoothed_indicator_in_unit_range(center in 0.0..TAU, length in 0.05..3.0f64, n in 1usize..200) {
        let i = IntervalOnCircle::with_length(center, length).unwrap();
        let etas: Vec<f64> = (0..64).map(|k| TAU * k as f64 / 64.0).collect();
        for s in fejer_smooth_indicator(&i, n, &etas) {
            prop_assert!((-1e-6..=1.0 + 1e-6).contains(&s));
        }
    }

    #[test]
    fn bessel_holds_for_near_orthogonal_pairs(
        e1 in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 6),
        e2 in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 6),
        g in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 6),
    ) {
        prop_assume!(e1.iter().any(|p| p.0 != 0.0) && e2.iter().any(|p| p.0 != 0.0));
        let family = [unit(e1), unit(e2)];
        let g = WeightedVector::new(g.into_iter().map(|(a, b)| Complex64::new(a, b)).collect());
        let r = almost_orthogonality_bound(&family, &g).unwrap();
        if r.q < 1.0 {
            prop_assert_eq!(r.holds, Some(true));
        } else {
            prop_assert_eq!(r.holds, None);
        }
    }

    #[test]
    fn energy_is_reflection_invariant(density in prop::collection::vec(0.0..1.0f64, 32..96), eps in 0.05..0.95f64) {
        prop_assume!(density.iter().any(|&d| d > 0.0));
        let m = CircleMeasure::new(density.clone(), vec![]).unwrap();
        // η ↦ -η maps node k to node -k
        let mut reflected = vec![density[0]];
        reflected.extend(density[1..].iter().rev());
        let r = CircleMeasure::new(reflected, vec![]).unwrap();
        let (a, b) = (epsilon_energy(&m, eps).unwrap(), epsilon_energy(&r, eps).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn ac_measures_have_vanishing_scaling_ratios(seed in 0u64..200, center in 0.0..TAU) {
        let alpha = coulomb_family(0.3, PhaseRule::Random { seed }, 16).unwrap();
        let m = bs_density(&alpha, 16, 1 << 14).unwrap();
        let deltas = [0.1, 0.01, 0.001, 0.0001];
        let r = local_scaling_exponent(&m, center, &deltas).unwrap();
        prop_assert!(r[3] < r[0]);
        let atomic = m.with_atoms(vec![Atom { angle: center, mass: 0.05 }]).unwrap();
        let ra = local_scaling_exponent(&atomic, center, &deltas).unwrap();
        prop_assert!(ra.windows(2).all(|w| w[1] > w[0]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn detected_masses_are_a_sub_probability(seed in 0u64..100, c in 0.1..0.95f64) {
        let alpha = coulomb_family(c, PhaseRule::Random { seed }, 1024).unwrap();
        let candidates: Vec<f64> = (0..32).map(|k| TAU * k as f64 / 32.0).collect();
        let probes = detect_atoms(&alpha, 1024, &candidates, &AtomConfig::default()).unwrap();
        prop_assert!(probes.iter().all(|p| p.mass >= 0.0));
        prop_assert!(probes.iter().map(|p| p.mass).sum::<f64>() <= 1.0 + 1e-6);
    }
}

//! Property tests over randomly drawn inputs.

use proptest::prelude::*;
use softarm::statics::single::{equivalent_force_arm, tip_force_arm};
use softarm::statics::{baseline_forward, baseline_inverse, equivalent_force, tip_force};
use softarm::types::{normalize_angle, BendingConfig, SectionParams};

fn cross2(a: &nalgebra::Vector2<f64>, b: &nalgebra::Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

proptest! {
    #[test]
    fn normalized_angles_land_in_one_turn(angle in -50.0..50.0f64, turns in -3i32..=3) {
        let shifted = angle + turns as f64 * std::f64::consts::TAU;
        let a = normalize_angle(angle);
        let b = normalize_angle(shifted);
        prop_assert!((0.0..std::f64::consts::TAU).contains(&a));
        prop_assert!((b - a).abs() < 1e-9 || (b - a).abs() > std::f64::consts::TAU - 1e-9);
    }

    #[test]
    fn baseline_roundtrip_recovers_configuration(
        kappa in 1e-4..0.33f64,
        gamma in 0.0..std::f64::consts::TAU,
    ) {
        let p = SectionParams::prototype();
        let cfg = BendingConfig::new(kappa, gamma).unwrap();
        let lengths = baseline_inverse(&cfg, &p).unwrap();
        let (rec, misfit) = baseline_forward(&lengths, &p).unwrap();
        prop_assert!((rec.curvature() - kappa).abs() < 1e-10);
        prop_assert!(
            softarm::wrap_angle(rec.orientation() - cfg.orientation()).abs() < 1e-9
        );
        prop_assert!(misfit < 1e-10);
    }

    #[test]
    fn cable_forces_balance(
        tension in 0.0..10.0f64,
        phi_b in 1e-3..std::f64::consts::PI,
        frac in 0.0..0.999f64,
    ) {
        let theta0 = frac * 0.5 * phi_b;
        let f_eq = equivalent_force(tension, theta0, phi_b).unwrap();
        let f_t = tip_force(tension, theta0, phi_b);
        let f_r = tension * nalgebra::Vector2::new(-theta0.sin(), theta0.cos());
        prop_assert!((f_eq + f_t + f_r).norm() < 1e-12 * tension.max(1.0));
    }

    #[test]
    fn cable_moment_reduces_to_closed_form(
        tension in 0.0..10.0f64,
        d in 0.1..3.0f64,
        r_d in 0.2..50.0f64,
        phi_b in 1e-3..std::f64::consts::PI,
        frac in 0.0..0.999f64,
    ) {
        let theta0 = frac * 0.5 * phi_b;
        let f_eq = equivalent_force(tension, theta0, phi_b).unwrap();
        let f_t = tip_force(tension, theta0, phi_b);
        let total = cross2(&equivalent_force_arm(d, r_d, phi_b), &f_eq)
            + cross2(&tip_force_arm(d, r_d, phi_b), &f_t);
        let expect = tension * d * theta0.cos();
        prop_assert!((total - expect).abs() <= 1e-9 * (tension * d).max(1e-9));
    }
}

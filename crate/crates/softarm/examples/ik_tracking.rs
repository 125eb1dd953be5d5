//! Damped-least-squares inverse kinematics: regulate the tip to a fixed
//! target, then follow a circular reference.

use nalgebra::{DVector, Vector3};
use softarm::kinematics::{forward_kinematics, ik_point, ik_track, ArmConfig, IkSettings};
use softarm::trajectory::{gen_trajectory, TrajectoryKind, TrajectorySpec};
use softarm::{Arm, SectionParams};

fn main() {
    let p = SectionParams::prototype();
    let arm = Arm::uniform(p, 2).unwrap();
    let st = IkSettings::default();

    // Point regulation.
    let target = Vector3::new(6.0, 3.0, 16.0);
    let q0 = ArmConfig::from_vector(DVector::from_vec(vec![0.5, 0.1, 0.5, 0.1])).unwrap();
    let sol = ik_point(&target, &q0, &arm, &st).expect("point solve");
    let (tip, _) = forward_kinematics(&arm, &sol.config).unwrap();
    println!("target {target:?}");
    println!(
        "reached {tip:?} in {} steps (‖E‖ = {:.2e} cm)",
        sol.steps, sol.error_norm
    );

    // Circle tracking: one revolution of radius 5 cm.
    let spec = TrajectorySpec {
        kind: TrajectoryKind::Circle {
            center: [0.0, 0.0, 17.0],
            radius: 5.0,
            normal: [0.0, 0.0, 1.0],
        },
        duration: 12.0,
        dt: 0.02,
    };
    let samples = gen_trajectory(&spec).unwrap();
    let settled = ik_point(&samples[0].position, &q0, &arm, &st).expect("settle at start");
    let steps = ik_track(&samples, &settled.config, &arm, &st).expect("track");

    let max_err = steps.iter().fold(0.0_f64, |m, s| m.max(s.error_norm));
    let mean_err: f64 = steps.iter().map(|s| s.error_norm).sum::<f64>() / steps.len() as f64;
    println!("\ncircle tracking over {} samples:", steps.len());
    println!("  mean lag {:.3e} cm, max lag {:.3e} cm", mean_err, max_err);

    for k in (0..steps.len()).step_by(steps.len() / 6) {
        let s = &steps[k];
        let q = s.config.as_vector();
        println!(
            "  t = {:5.2} s: ‖E‖ = {:.2e} cm, q = [{:.2} {:.3} {:.2} {:.3}]",
            s.time, s.error_norm, q[0], q[1], q[2], q[3]
        );
    }
}

//! Full tracking experiment in simulation: inverse kinematics produces
//! configuration references, a controller model turns them into cable
//! commands, and the plant model answers with what the arm actually does.
//! Running the ideal-geometry controller against the full-model plant
//! shows the cost of ignoring cable transverse deformation.

use nalgebra::Vector3;
use softarm::kinematics::IkSettings;
use softarm::sim::{section_tip_circle, simulate_tracking};
use softarm::trajectory::{TrajectoryKind, TrajectorySpec};
use softarm::{Arm, ModelKind, SectionParams, SolverSettings};

fn main() {
    let p = SectionParams::prototype();
    let s = SolverSettings::default();
    let ik = IkSettings {
        target_tol: 1e-4,
        gain: Vector3::new(4.0, 4.0, 4.0),
        ..IkSettings::default()
    };

    // A circle the single section can reach exactly: the tip locus of a
    // 60° bend swept around the axis.
    let kappa = 60f64.to_radians() / p.length;
    let (center, radius) = section_tip_circle(&p, kappa).unwrap();
    let single_circle = TrajectorySpec {
        kind: TrajectoryKind::Circle {
            center: [0.0, 0.0, center.z],
            radius,
            normal: [0.0, 0.0, 1.0],
        },
        duration: 8.0,
        dt: 0.05,
    };
    let two_circle = TrajectorySpec {
        kind: TrajectoryKind::Circle {
            center: [0.0, 0.0, 17.0],
            radius: 5.0,
            normal: [0.0, 0.0, 1.0],
        },
        duration: 8.0,
        dt: 0.05,
    };
    let two_line = TrajectorySpec {
        kind: TrajectoryKind::Line {
            start: [4.0, 2.0, 18.0],
            end: [-3.0, 5.0, 17.0],
        },
        duration: 6.0,
        dt: 0.05,
    };

    let runs = [
        ("single-section circle", 1usize, single_circle),
        ("two-section circle", 2, two_circle),
        ("two-section line", 2, two_line),
    ];

    println!("plant: full static model; tracking errors in cm\n");
    println!("{:<24} {:>16} {:>16}", "scenario", "full controller", "ideal controller");
    for (label, m, spec) in runs {
        let arm = Arm::uniform(p, m).unwrap();
        let full = simulate_tracking(&spec, ModelKind::Proposed, ModelKind::Proposed, &arm, &ik, &s)
            .expect("self-consistent run");
        let ideal =
            simulate_tracking(&spec, ModelKind::Proposed, ModelKind::Baseline, &arm, &ik, &s)
                .expect("mismatch run");
        println!(
            "{:<24} {:>16.3e} {:>16.3e}",
            label, full.mean_error, ideal.mean_error
        );
    }
}

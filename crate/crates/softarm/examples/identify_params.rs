//! Stiffness identification from synthetic bend-test data: generate
//! measurements with known constants, then recover them.

use softarm::identify::{identify_kb, identify_kc, BendSample};
use softarm::statics::solve_inverse_single;
use softarm::{SectionParams, SolverSettings};

fn main() {
    let truth = SectionParams::prototype();
    let s = SolverSettings::default();

    // Small-angle tension tests: T·d = K_b·κ_b when the incident angle is
    // negligible.
    let kb_data: Vec<BendSample> = [2.0_f64, 4.0, 6.0, 8.0, 10.0, 12.0]
        .iter()
        .map(|&deg| {
            let phi = deg.to_radians();
            BendSample {
                phi_b: phi,
                value: truth.bending_stiffness * (phi / truth.length) / truth.cable_offset,
                replicate: 0,
            }
        })
        .collect();
    let kb = identify_kb(&kb_data, &truth).expect("K_b fit");
    println!(
        "K_b: true {} N·cm², identified {:.6} N·cm² from {} bend angles",
        truth.bending_stiffness, kb.value, kb.groups
    );

    // Contraction sweep: the transverse deformation bends the Δl(φ_b)
    // curve away from the ideal line; the misfit minimum sits at K_c.
    let kc_data: Vec<BendSample> = (1..=6)
        .map(|k| {
            let phi = (30.0 * k as f64).to_radians();
            let sol = solve_inverse_single(phi / truth.length, &truth, &s).unwrap();
            BendSample {
                phi_b: phi,
                value: truth.length - sol.length,
                replicate: 0,
            }
        })
        .collect();
    let kc = identify_kc(&kc_data, &truth, &s).expect("K_c fit");
    println!(
        "K_c: true {} N/cm², identified {:.6} N/cm² (misfit {:.2e} cm²)",
        truth.cutting_stiffness, kc.value, kc.sse
    );
}

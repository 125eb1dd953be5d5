//! Single-cable section statics: solve the inverse and forward mappings
//! and inspect the solved state.

use softarm::statics::{single_cable_detail, solve_forward_single, solve_inverse_single};
use softarm::{SectionParams, SolverSettings};

fn main() {
    let p = SectionParams::prototype();
    let s = SolverSettings::default();

    println!("section: L = {} cm, d = {} cm, K_b = {} N·cm², K_c = {} N/cm²\n",
        p.length, p.cable_offset, p.bending_stiffness, p.cutting_stiffness);

    println!("{:>8} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "φ_b [°]", "l [cm]", "Δl [cm]", "T [N]", "θ0 [°]", "Δl ideal");
    for phi_deg in [15.0_f64, 30.0, 60.0, 90.0, 120.0, 150.0, 180.0] {
        let kappa = phi_deg.to_radians() / p.length;
        let sol = solve_inverse_single(kappa, &p, &s).expect("inverse solve");
        let ideal = kappa * p.length * p.cable_offset;
        println!("{:>8.1} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            phi_deg,
            sol.length,
            p.length - sol.length,
            sol.tension,
            sol.theta0.to_degrees(),
            ideal);
    }

    // Forward mapping recovers the bend angle from the cable length.
    let kappa = 90f64.to_radians() / p.length;
    let inv = solve_inverse_single(kappa, &p, &s).unwrap();
    let fwd = solve_forward_single(inv.length, &p, &s).unwrap();
    println!("\nroundtrip at 90°: commanded κ_b = {kappa:.6}, recovered {:.6} (|Δ| = {:.1e})",
        fwd.kappa_b, (fwd.kappa_b - kappa).abs());

    // The force terms close at the solved state.
    let detail = single_cable_detail(&inv, &p).unwrap();
    let closure = detail.equivalent_force + detail.tip_force + detail.reaction_force;
    println!("force closure norm: {:.2e} N", closure.norm());
    println!("transverse deformation Δh = {:.4} cm, support moment {:.4} N·cm",
        detail.max_transverse_deformation, detail.support_moment);
}

//! Three-cable section: inverse mapping with slack-cable selection and
//! the forward recovery of the commanded configuration.

use softarm::statics::{select_slack_cable, solve_forward_multi, solve_inverse_multi};
use softarm::{BendingConfig, SectionParams, SolverSettings};

fn main() {
    let p = SectionParams::prototype();
    let s = SolverSettings::default();

    let phi_deg = 90.0_f64;
    let gamma_deg = 30.0_f64;
    let cfg = BendingConfig::new(phi_deg.to_radians() / p.length, gamma_deg.to_radians()).unwrap();

    println!("target: φ_b = {phi_deg}°, γ = {gamma_deg}°");
    println!("most-opposed cable: {}", select_slack_cable(p.cable_count, cfg.orientation()));

    let state = solve_inverse_multi(&cfg, &p, &s).expect("inverse solve");
    println!("\n{:>6} {:>10} {:>10} {:>10} {:>8} {:>6}",
        "cable", "l [cm]", "T [N]", "θ0 [°]", "β [°]", "slack");
    for (i, c) in state.cables.iter().enumerate() {
        println!("{:>6} {:>10.4} {:>10.4} {:>10.4} {:>8.1} {:>6}",
            i + 1,
            c.length,
            c.tension,
            c.incident_angle.to_degrees(),
            c.bend_offset_angle.to_degrees(),
            c.slack);
    }

    let lateral: f64 = state.lateral_moments(&p).iter().sum();
    println!("\nlateral moment balance: {:.2e} N·cm", lateral);

    // Feeding the commanded lengths back through the forward mapping
    // recovers the configuration.
    let recovered = solve_forward_multi(&state.lengths(), &p, &s).expect("forward solve");
    println!(
        "forward recovery: φ_b = {:.4}° (Δ {:.1e}), γ = {:.4}° (Δ {:.1e})",
        recovered.config.bend_angle(&p).to_degrees(),
        (recovered.config.curvature() - cfg.curvature()).abs(),
        recovered.config.orientation().to_degrees(),
        (recovered.config.orientation() - cfg.orientation()).abs()
    );
}

//! Forward kinematics of a two-section arm: section transforms chain into
//! the tip position.

use softarm::kinematics::{forward_kinematics, section_transform, ArmConfig};
use softarm::{Arm, BendingConfig, SectionParams};

fn main() {
    let p = SectionParams::prototype();
    let arm = Arm::uniform(p, 2).unwrap();

    // One section: straight endcap, arc, straight endcap.
    let cfg = BendingConfig::new(90f64.to_radians() / p.length, 0.0).unwrap();
    let t = section_transform(&cfg, &p);
    println!("single section at φ_b = 90°: tip {:?}", t.translation());
    println!("rigidity defect: {:.2e}\n", t.rigidity_defect());

    println!("{:>24} {:>26}", "q = [γ1°, φ1°, γ2°, φ2°]", "tip [cm]");
    for (g1, phi1, g2, phi2) in [
        (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64),
        (0.0, 60.0, 0.0, 60.0),
        (0.0, 60.0, 180.0, 60.0),
        (45.0, 90.0, 270.0, 45.0),
    ] {
        let q = ArmConfig::from_sections(&[
            BendingConfig::new(phi1.to_radians() / p.length, g1.to_radians())
                .unwrap(),
            BendingConfig::new(phi2.to_radians() / p.length, g2.to_radians())
                .unwrap(),
        ]);
        let (tip, _) = forward_kinematics(&arm, &q).unwrap();
        println!(
            "[{:>5.0} {:>5.0} {:>5.0} {:>5.0}]    [{:>7.3} {:>7.3} {:>7.3}]",
            g1, phi1, g2, phi2, tip.x, tip.y, tip.z
        );
    }

    let reach = 2.0 * (p.length + 2.0 * p.endcap_thickness);
    println!("\nfull reach (straight arm): {reach} cm");
}

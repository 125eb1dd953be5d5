//! Shared domain types and unit conventions.
//!
//! Everything in this library works in centimeters, radians, and Newtons.
//! Degrees are accepted only at the command-line boundary.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Geometric and stiffness constants of one arm section.
///
/// All values are in cm-based units: lengths in cm, bending stiffness in
/// N·cm², cutting-in stiffness in N/cm².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionParams {
    /// Backbone length L (cm).
    #[serde(rename = "L")]
    pub length: f64,
    /// Distance d from the backbone to each cable incident point (cm).
    #[serde(rename = "d")]
    pub cable_offset: f64,
    /// Bending stiffness K_b (N·cm²) relating curvature to elastic moment.
    #[serde(rename = "K_b")]
    pub bending_stiffness: f64,
    /// Cutting-in stiffness K_c (N/cm²) of the cable/body interaction.
    #[serde(rename = "K_c")]
    pub cutting_stiffness: f64,
    /// Number of evenly distributed cables.
    #[serde(rename = "n")]
    pub cable_count: usize,
    /// Endcap thickness h (cm). Rig-specific: measured on the prototype,
    /// not identified.
    #[serde(rename = "h")]
    pub endcap_thickness: f64,
}

impl SectionParams {
    /// Identified constants of the prototype section, with the measured
    /// 1.0 cm endcap.
    pub fn prototype() -> Self {
        SectionParams {
            length: 9.30,
            cable_offset: 1.25,
            bending_stiffness: 20.02,
            cutting_stiffness: 3.10,
            cable_count: 3,
            endcap_thickness: 1.0,
        }
    }

    /// Largest admissible backbone curvature (bend angle capped at π).
    pub fn max_curvature(&self) -> f64 {
        std::f64::consts::PI / self.length
    }

    /// Checks every parameter invariant, reporting the first violation.
    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0) {
            return Err(Error::InvalidParams("L must be > 0".into()));
        }
        if !(self.cable_offset > 0.0) {
            return Err(Error::InvalidParams("d must be > 0".into()));
        }
        if !(self.bending_stiffness > 0.0) {
            return Err(Error::InvalidParams("K_b must be > 0".into()));
        }
        if !(self.cutting_stiffness > 0.0) {
            return Err(Error::InvalidParams("K_c must be > 0".into()));
        }
        if self.cable_count < 3 {
            return Err(Error::InvalidParams("n must be ≥ 3".into()));
        }
        if !(self.endcap_thickness >= 0.0) {
            return Err(Error::InvalidParams("h must be ≥ 0".into()));
        }
        // The cable must stay on the finite-radius side for every curvature
        // this library admits (bend angle up to π).
        if self.cable_offset * self.max_curvature() >= 1.0 {
            return Err(Error::InvalidParams(
                "d must be < L/π so that d < 1/κ_b for all admissible κ_b".into(),
            ));
        }
        Ok(())
    }
}

/// Returns the parameters unchanged if all invariants hold.
pub fn validate_params(p: SectionParams) -> Result<SectionParams> {
    p.validate()?;
    Ok(p)
}

/// One section's bending configuration: backbone curvature κ_b (1/cm) and
/// bending orientation γ (rad, normalized to [0, 2π)).
///
/// A straight section (κ_b = 0) stores γ = 0 by convention since the
/// orientation is undefined there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BendingConfig {
    curvature: f64,
    orientation: f64,
}

impl BendingConfig {
    pub fn new(curvature: f64, orientation: f64) -> Result<Self> {
        if !curvature.is_finite() || curvature < 0.0 {
            return Err(Error::InvalidInput(format!(
                "curvature must be finite and ≥ 0, got {curvature}"
            )));
        }
        if !orientation.is_finite() {
            return Err(Error::InvalidInput("orientation must be finite".into()));
        }
        let orientation = if curvature == 0.0 {
            0.0
        } else {
            normalize_angle(orientation)
        };
        Ok(BendingConfig {
            curvature,
            orientation,
        })
    }

    pub fn straight() -> Self {
        BendingConfig {
            curvature: 0.0,
            orientation: 0.0,
        }
    }

    /// Backbone curvature κ_b (1/cm).
    pub fn curvature(&self) -> f64 {
        self.curvature
    }

    /// Bending orientation γ (rad in [0, 2π)).
    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    /// Bend angle φ_b = L·κ_b at the section tip.
    pub fn bend_angle(&self, p: &SectionParams) -> f64 {
        p.length * self.curvature
    }

    /// Half bend angle α = φ_b/2.
    pub fn half_angle(&self, p: &SectionParams) -> f64 {
        0.5 * self.bend_angle(p)
    }
}

/// Per-cable solved quantities of one section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CableSolution {
    /// In-section cable length l_i (cm).
    pub length: f64,
    /// Cable tension T_i (N); exactly 0 for a slack cable.
    pub tension: f64,
    /// Incident angle θ0_i (rad).
    pub incident_angle: f64,
    /// Cable curvature κ_c_i (1/cm); 0 denotes a straight cable.
    pub curvature: f64,
    /// Angle β_i between the cable orientation and the bending direction.
    pub bend_offset_angle: f64,
    /// Signed distance d_i from the incident point to the neutral plane (cm).
    pub neutral_distance: f64,
    /// Whether this cable's tension was pinned to zero.
    pub slack: bool,
}

/// Circular-arc radii of a cable and its backbone in one bending plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CableArcGeometry {
    /// Backbone radius R_b = 1/κ_b (cm).
    pub backbone_radius: f64,
    /// Deformed cable radius R_c = 1/κ_c (cm).
    pub cable_radius: f64,
    /// Undeformed cable radius R_d = 1/κ_b − d_i (cm).
    pub undeformed_radius: f64,
}

impl CableArcGeometry {
    /// Builds the radii from curvatures and the signed neutral-plane
    /// distance of the cable. Requires κ_b > 0 and κ_c > 0.
    pub fn new(kappa_b: f64, kappa_c: f64, neutral_distance: f64) -> Result<Self> {
        if !(kappa_b > 0.0) || !(kappa_c > 0.0) {
            return Err(Error::InvalidInput(
                "arc geometry needs strictly positive curvatures".into(),
            ));
        }
        Ok(CableArcGeometry {
            backbone_radius: 1.0 / kappa_b,
            cable_radius: 1.0 / kappa_c,
            undeformed_radius: 1.0 / kappa_b - neutral_distance,
        })
    }
}

/// Settings of the dense Newton solver used by both static models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    /// Convergence threshold on the scaled residual infinity norm.
    pub residual_tol: f64,
    /// Newton iteration budget.
    pub max_iter: usize,
    /// Initial step scale of the damped Newton update.
    pub damping_init: f64,
    /// Curvature threshold below which straight-section limits are used.
    pub delta_kappa: f64,
    /// Relative finite-difference step for the Jacobian.
    pub fd_step: f64,
    /// Tension negativity tolerance (N): solved tensions below −tol are an
    /// infeasibility error.
    #[serde(rename = "tol_T")]
    pub tol_tension: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            residual_tol: 1e-9,
            max_iter: 100,
            damping_init: 1.0,
            delta_kappa: 1e-6,
            fd_step: 1e-7,
            tol_tension: 1e-9,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.residual_tol > 0.0
            && self.damping_init > 0.0
            && self.delta_kappa > 0.0
            && self.fd_step > 0.0
            && self.tol_tension > 0.0)
        {
            return Err(Error::InvalidParams(
                "solver settings must all be strictly positive".into(),
            ));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidParams("max_iter must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// A multi-section arm; sections are identical in the default build.
#[derive(Debug, Clone, PartialEq)]
pub struct Arm {
    sections: Vec<SectionParams>,
}

impl Arm {
    /// An arm of `m` identical sections.
    pub fn uniform(section: SectionParams, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("arm needs at least one section".into()));
        }
        section.validate()?;
        Ok(Arm {
            sections: vec![section; m],
        })
    }

    pub fn from_sections(sections: Vec<SectionParams>) -> Result<Self> {
        if sections.is_empty() {
            return Err(Error::InvalidInput("arm needs at least one section".into()));
        }
        for s in &sections {
            s.validate()?;
        }
        Ok(Arm { sections })
    }

    pub fn section_count(&self) -> usize {
        self.sections.len()
    }

    pub fn section(&self, i: usize) -> &SectionParams {
        &self.sections[i]
    }

    pub fn sections(&self) -> &[SectionParams] {
        &self.sections
    }
}

/// Which section model maps between cable lengths and bending
/// configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Nonlinear static model including the cable transverse deformation.
    Proposed,
    /// Ideal-geometry model ignoring transverse deformation.
    Baseline,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelKind::Proposed => write!(f, "proposed"),
            ModelKind::Baseline => write!(f, "baseline"),
        }
    }
}

/// Normalizes an angle to [0, 2π).
pub fn normalize_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Wraps an angle to (−π, π].
pub fn wrap_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > std::f64::consts::PI {
        r - TAU
    } else {
        r
    }
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg.to_radians()
}

pub fn rad_to_deg(rad: f64) -> f64 {
    rad.to_degrees()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prototype_params_are_valid() {
        let p = SectionParams::prototype();
        assert_eq!(validate_params(p).unwrap(), p);
    }

    #[test]
    fn too_few_cables_rejected() {
        let p = SectionParams {
            cable_count: 2,
            ..SectionParams::prototype()
        };
        let err = validate_params(p).unwrap_err();
        assert_eq!(err, Error::InvalidParams("n must be ≥ 3".into()));
    }

    #[test]
    fn zero_length_rejected() {
        let p = SectionParams {
            length: 0.0,
            ..SectionParams::prototype()
        };
        let err = validate_params(p).unwrap_err();
        assert_eq!(err, Error::InvalidParams("L must be > 0".into()));
    }

    #[test]
    fn offset_exceeding_min_radius_rejected() {
        // d ≥ L/π puts the cable past the arc center at full bend.
        let p = SectionParams {
            cable_offset: 3.1,
            ..SectionParams::prototype()
        };
        assert!(validate_params(p).is_err());
    }

    #[test]
    fn straight_config_zeroes_orientation() {
        let c = BendingConfig::new(0.0, 1.7).unwrap();
        assert_eq!(c.orientation(), 0.0);
        assert_eq!(c.curvature(), 0.0);
    }

    #[test]
    fn orientation_normalized() {
        let c = BendingConfig::new(0.1, -0.5).unwrap();
        assert!((0.0..TAU).contains(&c.orientation()));
        assert!((c.orientation() - (TAU - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn negative_curvature_rejected() {
        assert!(BendingConfig::new(-0.1, 0.0).is_err());
    }

    #[test]
    fn arc_geometry_radii() {
        let g = CableArcGeometry::new(0.2, 0.25, 1.25).unwrap();
        assert_eq!(g.backbone_radius, 5.0);
        assert_eq!(g.cable_radius, 4.0);
        // R_d = R_b − d_i exactly.
        assert_eq!(g.undeformed_radius, g.backbone_radius - 1.25);
        // Signed distances flip the undeformed radius to the far side.
        let g = CableArcGeometry::new(0.2, 0.25, -1.25).unwrap();
        assert_eq!(g.undeformed_radius, 6.25);
        assert!(CableArcGeometry::new(0.0, 0.25, 1.0).is_err());
    }

    #[test]
    fn angle_conversions_roundtrip() {
        for k in 0..1000 {
            let deg = -720.0 + 1.47 * k as f64;
            let back = rad_to_deg(deg_to_rad(deg));
            assert!((back - deg).abs() < 1e-12 * deg.abs().max(1.0));
        }
    }

    #[test]
    fn normalize_angle_period() {
        for k in -5..=5 {
            let g = 1.234;
            let shifted = normalize_angle(g + TAU * k as f64);
            assert!((shifted - g).abs() < 1e-12);
        }
        assert_eq!(normalize_angle(0.0), 0.0);
        assert_eq!(normalize_angle(TAU), 0.0);
    }

    #[test]
    fn wrap_angle_range() {
        use std::f64::consts::PI;
        assert!((wrap_angle(4.0 * PI / 3.0) + 2.0 * PI / 3.0).abs() < 1e-12);
        assert!((wrap_angle(PI) - PI).abs() < 1e-15);
    }
}

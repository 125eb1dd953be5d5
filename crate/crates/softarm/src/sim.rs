//! Simulated tracking experiments and model-comparison sweeps.
//!
//! The tracking pipeline mirrors the physical control chain: inverse
//! kinematics turns the reference position into per-section bending
//! configurations, the controller model converts those into cable-length
//! commands, and the plant model answers with the configuration an arm
//! obeying that model would actually reach. Running different models on
//! the two sides quantifies the consequence of model mismatch; with the
//! same model on both sides the loop is self-consistent and the error
//! reduces to the inverse-kinematics tolerance.

use nalgebra::Vector3;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinematics::{
    forward_kinematics, ik_point, section_cable_lengths, ArmConfig, IkSettings,
};
use crate::statics::{baseline_forward, baseline_inverse, solve_forward_multi, solve_inverse_multi};
use crate::trajectory::{gen_trajectory, TrajectorySpec};
use crate::types::{Arm, BendingConfig, ModelKind, SectionParams, SolverSettings};

/// One recorded step of a simulated tracking run.
#[derive(Debug, Clone, Serialize)]
pub struct TrackingStep {
    pub time: f64,
    pub target: [f64; 3],
    pub achieved: [f64; 3],
    pub error: f64,
    /// Stacked configuration commanded by the controller.
    pub config: Vec<f64>,
    /// Commanded cable lengths, flattened per section then per cable.
    pub cable_lengths: Vec<f64>,
}

/// Full report of a simulated tracking run.
#[derive(Debug, Clone, Serialize)]
pub struct TrackingReport {
    pub controller: ModelKind,
    pub plant: ModelKind,
    pub steps: Vec<TrackingStep>,
    /// Arithmetic mean of the per-step error norms (cm).
    pub mean_error: f64,
    pub max_error: f64,
}

impl TrackingReport {
    fn from_steps(controller: ModelKind, plant: ModelKind, steps: Vec<TrackingStep>) -> Self {
        let mean_error = if steps.is_empty() {
            0.0
        } else {
            steps.iter().map(|s| s.error).sum::<f64>() / steps.len() as f64
        };
        let max_error = steps.iter().fold(0.0_f64, |m, s| m.max(s.error));
        TrackingReport {
            controller,
            plant,
            steps,
            mean_error,
            max_error,
        }
    }
}

/// Maps commanded cable lengths back to the configuration a plant obeying
/// the given model reaches.
fn plant_response(
    lengths: &[f64],
    p: &SectionParams,
    plant: ModelKind,
    s: &SolverSettings,
) -> Result<BendingConfig> {
    match plant {
        ModelKind::Proposed => Ok(solve_forward_multi(lengths, p, s)?.config),
        ModelKind::Baseline => Ok(baseline_forward(lengths, p)?.0),
    }
}

/// Runs the full simulated experiment: closed-loop IK on the reference,
/// controller-model cable commands, plant-model response, achieved tip.
///
/// Each waypoint's configuration is regulated to the IK target tolerance
/// before being converted to cable lengths, matching the quasi-static
/// experimental protocol.
pub fn simulate_tracking(
    spec: &TrajectorySpec,
    plant: ModelKind,
    controller: ModelKind,
    arm: &Arm,
    ik: &IkSettings,
    solver: &SolverSettings,
) -> Result<TrackingReport> {
    let samples = gen_trajectory(spec)?;
    let mut q = ArmConfig::straight(arm.section_count());
    let mut steps = Vec::with_capacity(samples.len());
    for (k, sample) in samples.iter().enumerate() {
        let tag = |e: Error, section: usize| Error::AtStep {
            step: k,
            section,
            source: Box::new(e),
        };
        q = ik_point(&sample.position, &q, arm, ik)
            .map_err(|e| tag(e, 0))?
            .config;

        let mut cable_lengths = Vec::with_capacity(arm.section_count() * 3);
        let mut achieved_sections = Vec::with_capacity(arm.section_count());
        for (i, p) in arm.sections().iter().enumerate() {
            let lengths =
                section_cable_lengths(&q, i, p, controller, solver).map_err(|e| tag(e, i))?;
            let response = plant_response(&lengths, p, plant, solver).map_err(|e| tag(e, i))?;
            achieved_sections.push(response);
            cable_lengths.extend(lengths);
        }
        let q_plant = ArmConfig::from_sections(&achieved_sections);
        let (achieved, _) = forward_kinematics(arm, &q_plant)?;
        let error = (sample.position - achieved).norm();
        steps.push(TrackingStep {
            time: sample.time,
            target: [sample.position.x, sample.position.y, sample.position.z],
            achieved: [achieved.x, achieved.y, achieved.z],
            error,
            config: q.as_vector().iter().copied().collect(),
            cable_lengths,
        });
    }
    Ok(TrackingReport::from_steps(controller, plant, steps))
}

/// A circle lying in the reachable set of a single-section arm: the locus
/// of the tip as the orientation sweeps at fixed curvature.
pub fn section_tip_circle(p: &SectionParams, kappa: f64) -> Result<(Vector3<f64>, f64)> {
    let arm = Arm::uniform(*p, 1)?;
    let cfg = BendingConfig::new(kappa, 0.0)?;
    let (tip, _) = forward_kinematics(&arm, &ArmConfig::from_sections(&[cfg]))?;
    Ok((Vector3::new(0.0, 0.0, tip.z), tip.x))
}

/// One row of a model-comparison sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    /// Bend angle φ_b (rad).
    pub phi_b: f64,
    /// Bending orientation γ (rad).
    pub gamma: f64,
    /// Cable index, 1-based.
    pub cable: usize,
    pub l_proposed: Option<f64>,
    pub l_baseline: f64,
    pub tension: Option<f64>,
    pub theta0: Option<f64>,
    /// "ok", or the failure reported by the proposed-model solve.
    pub status: String,
}

/// Sweeps both inverse models over a (φ_b, γ) grid and emits per-cable
/// rows. Rows where the proposed solve fails carry the failure in the
/// status column rather than being dropped. The γ = 0 column doubles as
/// the single-cable contraction sweep (cable 1 active).
pub fn compare_models(
    p: &SectionParams,
    phi_grid: &[f64],
    gamma_grid: &[f64],
    s: &SolverSettings,
) -> Result<Vec<CompareRow>> {
    p.validate()?;
    let mut rows = Vec::with_capacity(phi_grid.len() * gamma_grid.len() * p.cable_count);
    for &phi in phi_grid {
        if !(0.0..=std::f64::consts::PI + 1e-12).contains(&phi) {
            return Err(Error::InvalidInput(format!(
                "bend angle {phi} outside [0, π]"
            )));
        }
        for &gamma in gamma_grid {
            let kappa = phi / p.length;
            let cfg = BendingConfig::new(kappa, gamma)?;
            let baseline = baseline_inverse(&cfg, p)?;
            let proposed = solve_inverse_multi(&cfg, p, s);
            for i in 1..=p.cable_count {
                let (l_proposed, tension, theta0, status) = match &proposed {
                    Ok(state) => {
                        let c = &state.cables[i - 1];
                        (
                            Some(c.length),
                            Some(c.tension),
                            Some(c.incident_angle),
                            "ok".to_string(),
                        )
                    }
                    Err(e) => (None, None, None, format!("{e}")),
                };
                rows.push(CompareRow {
                    phi_b: phi,
                    gamma: cfg.orientation(),
                    cable: i,
                    l_proposed,
                    l_baseline: baseline[i - 1],
                    tension,
                    theta0,
                    status,
                });
            }
        }
    }
    Ok(rows)
}

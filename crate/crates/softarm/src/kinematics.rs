//! Constant-curvature kinematics of multi-section arms and
//! damped-least-squares inverse kinematics for the tip position.
//!
//! Each section is modeled as straight endcap / circular arc / straight
//! endcap. Sections chain by homogeneous transforms; the tip Jacobian is
//! taken by central finite differences and inverted with damped least
//! squares, which stays well behaved near straight (singular)
//! configurations.

use nalgebra::{DMatrix, DVector, Matrix3, Matrix4, Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::statics::{baseline_inverse, solve_inverse_multi};
use crate::trajectory::TrajectorySample;
use crate::types::{normalize_angle, Arm, BendingConfig, ModelKind, SectionParams, SolverSettings};

/// Curvature threshold for the straight-section series forms.
pub const DELTA_KAPPA: f64 = 1e-6;

/// Relative step of the kinematic finite-difference Jacobian.
const JACOBIAN_FD_STEP: f64 = 1e-6;

/// A rigid transform: 4×4 homogeneous matrix with orthonormal rotation
/// block and bottom row (0, 0, 0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    m: Matrix4<f64>,
}

impl Transform {
    pub fn identity() -> Self {
        Transform {
            m: Matrix4::identity(),
        }
    }

    pub fn from_parts(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&translation);
        Transform { m }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn rotation(&self) -> Matrix3<f64> {
        self.m.fixed_view::<3, 3>(0, 0).into_owned()
    }

    pub fn translation(&self) -> Vector3<f64> {
        self.m.fixed_view::<3, 1>(0, 3).into_owned()
    }

    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation() * p + self.translation()
    }

    /// Largest deviation from the rigid-transform invariants: RᵀR = I,
    /// det R = 1, bottom row (0, 0, 0, 1).
    pub fn rigidity_defect(&self) -> f64 {
        let r = self.rotation();
        let ortho = (r.transpose() * r - Matrix3::identity()).abs().max();
        let det = (r.determinant() - 1.0).abs();
        let bottom = (self.m[(3, 0)].abs())
            .max(self.m[(3, 1)].abs())
            .max(self.m[(3, 2)].abs())
            .max((self.m[(3, 3)] - 1.0).abs());
        ortho.max(det).max(bottom)
    }
}

impl std::ops::Mul for Transform {
    type Output = Transform;
    fn mul(self, rhs: Transform) -> Transform {
        Transform { m: self.m * rhs.m }
    }
}

impl std::ops::Mul<&Transform> for &Transform {
    type Output = Transform;
    fn mul(self, rhs: &Transform) -> Transform {
        Transform { m: self.m * rhs.m }
    }
}

/// Stacked bending configuration q = [γ_1, κ_b,1, …, γ_m, κ_b,m] of an
/// m-section arm.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmConfig {
    q: DVector<f64>,
}

impl ArmConfig {
    pub fn from_vector(q: DVector<f64>) -> Result<Self> {
        if q.len() < 2 || q.len() % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "configuration vector must have even length ≥ 2, got {}",
                q.len()
            )));
        }
        for i in 0..q.len() / 2 {
            if !q[2 * i].is_finite() || !q[2 * i + 1].is_finite() || q[2 * i + 1] < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "section {i}: curvature must be finite and ≥ 0"
                )));
            }
        }
        Ok(ArmConfig { q })
    }

    pub fn from_sections(sections: &[BendingConfig]) -> Self {
        let mut q = DVector::zeros(2 * sections.len());
        for (i, c) in sections.iter().enumerate() {
            q[2 * i] = c.orientation();
            q[2 * i + 1] = c.curvature();
        }
        ArmConfig { q }
    }

    pub fn straight(m: usize) -> Self {
        ArmConfig {
            q: DVector::zeros(2 * m),
        }
    }

    pub fn section_count(&self) -> usize {
        self.q.len() / 2
    }

    pub fn orientation(&self, section: usize) -> f64 {
        self.q[2 * section]
    }

    pub fn curvature(&self, section: usize) -> f64 {
        self.q[2 * section + 1]
    }

    pub fn section_config(&self, section: usize) -> Result<BendingConfig> {
        BendingConfig::new(self.curvature(section), self.orientation(section))
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.q
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.q
    }
}

/// Settings of the damped-least-squares tracking controller.
#[derive(Debug, Clone, PartialEq)]
pub struct IkSettings {
    /// Damping constant k of the pseudo-inverse.
    pub damping: f64,
    /// Diagonal of the positive feedback gain matrix K (1/s).
    pub gain: Vector3<f64>,
    /// Integration step Δt (s).
    pub dt: f64,
    /// Iteration budget per tracking run or point solve.
    pub max_steps: usize,
    /// Position tolerance for point solves (cm).
    pub target_tol: f64,
    /// Curvature regularization of the Jacobian evaluation point.
    pub delta_kappa: f64,
    /// Error norm that counts as divergence when exceeded for ten
    /// consecutive steps (cm).
    pub diverge_bound: f64,
    /// Preferred configuration velocity projected through the null space;
    /// zero (minimum energy) when absent.
    pub null_velocity: Option<DVector<f64>>,
}

impl Default for IkSettings {
    fn default() -> Self {
        IkSettings {
            damping: 1e-2,
            gain: Vector3::new(1.0, 1.0, 1.0),
            dt: 0.02,
            max_steps: 2000,
            target_tol: 1e-3,
            delta_kappa: DELTA_KAPPA,
            diverge_bound: 1e3,
            null_velocity: None,
        }
    }
}

impl IkSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0) {
            return Err(Error::InvalidParams("ik damping k must be > 0".into()));
        }
        // Zero gain is admitted: it degenerates the update to open-loop
        // velocity integration.
        if !(self.gain.iter().all(|&g| g >= 0.0)) {
            return Err(Error::InvalidParams("ik gains must be ≥ 0".into()));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidParams("ik Δt must be > 0".into()));
        }
        Ok(())
    }
}

/// In-plane arc displacement components (x and z) of one section body.
fn arc_displacement(kappa: f64, p: &SectionParams) -> (f64, f64) {
    let phi = p.length * kappa;
    if kappa.abs() < DELTA_KAPPA {
        // Series of the closed form; accurate to O(φ⁴) relative.
        (
            p.length * (0.5 * phi - phi * phi * phi / 24.0),
            p.length * (1.0 - phi * phi / 6.0),
        )
    } else {
        let s = (0.5 * phi).sin();
        (2.0 * s * s / kappa, phi.sin() / kappa)
    }
}

/// Series-form displacement, exposed for the continuity check against the
/// closed form around the branch threshold.
pub fn arc_displacement_series(kappa: f64, p: &SectionParams) -> (f64, f64) {
    let phi = p.length * kappa;
    (
        p.length * (0.5 * phi - phi * phi * phi / 24.0),
        p.length * (1.0 - phi * phi / 6.0),
    )
}

fn section_transform_raw(gamma: f64, kappa: f64, p: &SectionParams) -> Transform {
    let phi = p.length * kappa;
    let rz = Rotation3::from_axis_angle(&Vector3::z_axis(), gamma);
    let ry = Rotation3::from_axis_angle(&Vector3::y_axis(), phi);
    let rotation = rz * ry * rz.inverse();
    let (px, pz) = arc_displacement(kappa, p);
    let cap = Vector3::new(0.0, 0.0, p.endcap_thickness);
    let translation = cap + rz * (Vector3::new(px, 0.0, pz) + ry * cap);
    Transform::from_parts(rotation.into_inner(), translation)
}

/// Homogeneous transform of one section: straight endcap, circular arc in
/// the plane set by the orientation, straight endcap.
pub fn section_transform(cfg: &BendingConfig, p: &SectionParams) -> Transform {
    section_transform_raw(cfg.orientation(), cfg.curvature(), p)
}

fn fk_raw(arm: &Arm, q: &DVector<f64>) -> (Vector3<f64>, Transform) {
    let mut chain = Transform::identity();
    for (i, p) in arm.sections().iter().enumerate() {
        chain = chain * section_transform_raw(q[2 * i], q[2 * i + 1], p);
    }
    (chain.translation(), chain)
}

/// Tip position and chained transform of the whole arm.
pub fn forward_kinematics(arm: &Arm, q: &ArmConfig) -> Result<(Vector3<f64>, Transform)> {
    if q.section_count() != arm.section_count() {
        return Err(Error::InvalidInput(format!(
            "configuration has {} sections, arm has {}",
            q.section_count(),
            arm.section_count()
        )));
    }
    Ok(fk_raw(arm, q.as_vector()))
}

fn jacobian_raw(arm: &Arm, q: &DVector<f64>, delta_kappa: f64) -> DMatrix<f64> {
    let mut q_eval = q.clone();
    for i in 0..arm.section_count() {
        if q_eval[2 * i + 1] < delta_kappa {
            q_eval[2 * i + 1] += delta_kappa;
        }
    }
    let dim = q.len();
    let mut jac = DMatrix::zeros(3, dim);
    for j in 0..dim {
        let h = JACOBIAN_FD_STEP * q_eval[j].abs().max(1.0);
        let mut qp = q_eval.clone();
        qp[j] += h;
        let mut qm = q_eval.clone();
        qm[j] -= h;
        let (tp, _) = fk_raw(arm, &qp);
        let (tm, _) = fk_raw(arm, &qm);
        let col = (tp - tm) / (2.0 * h);
        for r in 0..3 {
            jac[(r, j)] = col[r];
        }
    }
    jac
}

/// Central finite-difference Jacobian of the tip position with respect to
/// the stacked configuration. Sections with curvature below δ_κ are
/// evaluated at κ + δ_κ for numerical stability.
pub fn jacobian(arm: &Arm, q: &ArmConfig, st: &IkSettings) -> Result<DMatrix<f64>> {
    if q.section_count() != arm.section_count() {
        return Err(Error::InvalidInput(format!(
            "configuration has {} sections, arm has {}",
            q.section_count(),
            arm.section_count()
        )));
    }
    Ok(jacobian_raw(arm, q.as_vector(), st.delta_kappa))
}

/// Damped pseudo-inverse J† = Jᵀ(JJᵀ + k²I)⁻¹ via a dense solve of the
/// 3×3 normal matrix.
pub fn damped_pseudoinverse(jac: &DMatrix<f64>, damping: f64) -> DMatrix<f64> {
    let regularized = jac * jac.transpose() + damping * damping * DMatrix::identity(3, 3);
    let solved = match regularized.clone().cholesky() {
        Some(chol) => chol.solve(jac),
        None => regularized
            .lu()
            .solve(jac)
            .expect("JJᵀ + k²I is invertible for k > 0"),
    };
    solved.transpose()
}

/// Projects an integration step back into the admissible configuration
/// set: a negative curvature flips to the opposite orientation, curvature
/// is capped at π/L, and orientations wrap into [0, 2π).
pub fn clamp_config_step(q: &mut DVector<f64>, arm: &Arm) {
    for (i, p) in arm.sections().iter().enumerate() {
        let gamma = &mut q[2 * i];
        *gamma = normalize_angle(*gamma);
        if q[2 * i + 1] < 0.0 {
            q[2 * i + 1] = -q[2 * i + 1];
            q[2 * i] = normalize_angle(q[2 * i] + std::f64::consts::PI);
        }
        if q[2 * i + 1] > p.max_curvature() {
            q[2 * i + 1] = p.max_curvature();
        }
    }
}

/// One recorded step of a tracking run.
#[derive(Debug, Clone)]
pub struct IkStep {
    pub time: f64,
    pub config: ArmConfig,
    pub error_norm: f64,
}

fn ik_velocity(
    arm: &Arm,
    q: &DVector<f64>,
    task_velocity: &Vector3<f64>,
    st: &IkSettings,
) -> DVector<f64> {
    let jac = jacobian_raw(arm, q, st.delta_kappa);
    let jdag = damped_pseudoinverse(&jac, st.damping);
    let v = DVector::from_column_slice(task_velocity.as_slice());
    let mut qdot = &jdag * v;
    if let Some(q0dot) = &st.null_velocity {
        if q0dot.len() == q.len() {
            let null_proj = DMatrix::identity(q.len(), q.len()) - &jdag * &jac;
            qdot += null_proj * q0dot;
        }
    }
    qdot
}

/// Closed-loop tracking of a sampled trajectory.
///
/// Each step records the configuration and tracking error at the sample,
/// then integrates q̇ = J†(ẋ_d + K·E) over Δt. Runs over the samples (at
/// most `max_steps` of them) and reports the per-step error norms; errors
/// past the divergence bound for ten consecutive steps abort the run.
pub fn ik_track(
    samples: &[TrajectorySample],
    q0: &ArmConfig,
    arm: &Arm,
    st: &IkSettings,
) -> Result<Vec<IkStep>> {
    st.validate()?;
    if q0.section_count() != arm.section_count() {
        return Err(Error::InvalidInput(
            "initial configuration does not match the arm".into(),
        ));
    }
    let mut q = q0.as_vector().clone();
    let mut steps = Vec::with_capacity(samples.len().min(st.max_steps));
    let mut over_bound = 0usize;
    for (k, sample) in samples.iter().take(st.max_steps).enumerate() {
        let (tip, _) = fk_raw(arm, &q);
        let e = sample.position - tip;
        let e_norm = e.norm();
        steps.push(IkStep {
            time: sample.time,
            config: ArmConfig { q: q.clone() },
            error_norm: e_norm,
        });
        if e_norm > st.diverge_bound {
            over_bound += 1;
            if over_bound >= 10 {
                return Err(Error::Diverged { step: k });
            }
        } else {
            over_bound = 0;
        }
        let task_v = sample.velocity + st.gain.component_mul(&e);
        let qdot = ik_velocity(arm, &q, &task_v, st);
        q += qdot * st.dt;
        clamp_config_step(&mut q, arm);
    }
    Ok(steps)
}

/// Result of regulating the tip to a fixed target.
#[derive(Debug, Clone)]
pub struct IkPointSolution {
    pub config: ArmConfig,
    pub error_norm: f64,
    pub steps: usize,
}

/// Drives the tip to a fixed target with the closed-loop update and zero
/// feedforward velocity, stopping once the error drops below the target
/// tolerance.
pub fn ik_point(
    target: &Vector3<f64>,
    q0: &ArmConfig,
    arm: &Arm,
    st: &IkSettings,
) -> Result<IkPointSolution> {
    st.validate()?;
    let mut q = q0.as_vector().clone();
    let mut over_bound = 0usize;
    let mut e_norm = f64::INFINITY;
    for k in 0..st.max_steps {
        let (tip, _) = fk_raw(arm, &q);
        let e = target - tip;
        e_norm = e.norm();
        if e_norm < st.target_tol {
            return Ok(IkPointSolution {
                config: ArmConfig { q },
                error_norm: e_norm,
                steps: k,
            });
        }
        if e_norm > st.diverge_bound {
            over_bound += 1;
            if over_bound >= 10 {
                return Err(Error::Diverged { step: k });
            }
        } else {
            over_bound = 0;
        }
        let task_v = st.gain.component_mul(&e);
        let qdot = ik_velocity(arm, &q, &task_v, st);
        q += qdot * st.dt;
        clamp_config_step(&mut q, arm);
    }
    Err(Error::NoConvergence {
        best: q.iter().copied().collect(),
        residual_norm: e_norm,
        iterations: st.max_steps,
    })
}

/// Cable-length commands for a sequence of configurations, per step,
/// section, and cable, under the chosen section model.
pub fn configs_to_cable_lengths(
    configs: &[ArmConfig],
    model: ModelKind,
    arm: &Arm,
    s: &SolverSettings,
) -> Result<Vec<Vec<Vec<f64>>>> {
    let mut out = Vec::with_capacity(configs.len());
    for (step, q) in configs.iter().enumerate() {
        let mut per_section = Vec::with_capacity(arm.section_count());
        for (i, p) in arm.sections().iter().enumerate() {
            let lengths = section_cable_lengths(q, i, p, model, s).map_err(|e| Error::AtStep {
                step,
                section: i,
                source: Box::new(e),
            })?;
            per_section.push(lengths);
        }
        out.push(per_section);
    }
    Ok(out)
}

pub(crate) fn section_cable_lengths(
    q: &ArmConfig,
    section: usize,
    p: &SectionParams,
    model: ModelKind,
    s: &SolverSettings,
) -> Result<Vec<f64>> {
    let cfg = q.section_config(section)?;
    match model {
        ModelKind::Proposed => Ok(solve_inverse_multi(&cfg, p, s)?.lengths()),
        ModelKind::Baseline => baseline_inverse(&cfg, p),
    }
}

//! Static model of one section driven by a single cable.
//!
//! The cable presses into the soft body while it is tensioned, so its arc
//! is straighter than the ideal guide path. The model couples four
//! relations: the moment balance at the base, the incident-angle geometry,
//! the linear cutting-in law linking tension to the transverse deformation,
//! and the arclength relation giving the in-section cable length.

use nalgebra::{DVector, Vector2};

use crate::error::{Error, Result};
use crate::nlsolve::{solve_system, ResidualSystem};
use crate::types::{SectionParams, SolverSettings};

/// Solved state of a single-cable section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleCableSolution {
    /// Backbone curvature κ_b (1/cm).
    pub kappa_b: f64,
    /// Incident angle θ0 (rad).
    pub theta0: f64,
    /// Cable curvature κ_c (1/cm); 0 denotes the straight limit.
    pub kappa_c: f64,
    /// Cable tension T (N).
    pub tension: f64,
    /// In-section cable length l (cm).
    pub length: f64,
}

/// Force and moment terms of the single-cable model at one state, all in
/// the base frame of the bending plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleCableDetail {
    /// Transverse force density ρ = T·κ_c (N/cm).
    pub force_density: f64,
    /// Accumulated transverse force F_ρ = T·(φ_b − 2θ0) (N).
    pub transverse_force: f64,
    /// Equivalent total transverse force F_eq (N).
    pub equivalent_force: Vector2<f64>,
    /// Tip contraction force F_T (N).
    pub tip_force: Vector2<f64>,
    /// Support reaction force F_r (N).
    pub reaction_force: Vector2<f64>,
    /// Moment applied by the cable about the base point, T·d·cos θ0 (N·cm).
    pub cable_moment: f64,
    /// Support moment magnitude M_r (N·cm), equal to the cable moment.
    pub support_moment: f64,
    /// Moment arm of F_eq (cm).
    pub equivalent_arm: Vector2<f64>,
    /// Moment arm of F_T (cm).
    pub tip_arm: Vector2<f64>,
    /// Maximum transverse deformation Δh (cm).
    pub max_transverse_deformation: f64,
    /// Chord ordinate Δy = (1/κ_b − d)·sin α (cm).
    pub chord_ordinate: f64,
}

/// Equivalent total transverse force between cable and body.
///
/// Closed form of the integrated force density over the wrapped arc:
/// T·[−sin(φ_b−θ0)+sin θ0, cos(φ_b−θ0)−cos θ0]. Zero tension exerts no
/// force regardless of the angles.
pub fn equivalent_force(tension: f64, theta0: f64, phi_b: f64) -> Result<Vector2<f64>> {
    if tension == 0.0 {
        return Ok(Vector2::zeros());
    }
    if theta0 < 0.0 || phi_b < 0.0 || theta0 > 0.5 * phi_b {
        return Err(Error::InvalidInput(format!(
            "incident angle {theta0} outside [0, φ_b/2] with φ_b = {phi_b}"
        )));
    }
    let psi = phi_b - theta0;
    Ok(tension * Vector2::new(-psi.sin() + theta0.sin(), psi.cos() - theta0.cos()))
}

/// Contraction force applied by the cable tip to the section.
pub fn tip_force(tension: f64, theta0: f64, phi_b: f64) -> Vector2<f64> {
    let psi = phi_b - theta0;
    tension * Vector2::new(psi.sin(), -psi.cos())
}

/// Support reaction force; closes the force balance with the equivalent
/// and tip forces.
pub fn reaction_force(tension: f64, theta0: f64) -> Vector2<f64> {
    tension * Vector2::new(-theta0.sin(), theta0.cos())
}

/// Magnitude of the support moment, T·d·cos θ0. The reaction opposes the
/// cable moment; this library stores magnitudes and orients moments by the
/// bending plane.
pub fn support_moment(tension: f64, offset: f64, theta0: f64) -> f64 {
    tension * offset * theta0.cos()
}

/// Moment arm of the tip force about the base point.
pub fn tip_force_arm(offset: f64, undeformed_radius: f64, phi_b: f64) -> Vector2<f64> {
    let half = 0.5 * phi_b;
    let (s, c) = (half.sin(), half.cos());
    Vector2::new(
        -offset - 2.0 * undeformed_radius * s * s,
        2.0 * undeformed_radius * s * c,
    )
}

/// Moment arm of the equivalent transverse force about the base point.
/// The force lies on the mirror-symmetry axis of the bent section, so any
/// point of action on that axis gives the same moment.
pub fn equivalent_force_arm(offset: f64, undeformed_radius: f64, phi_b: f64) -> Vector2<f64> {
    let half = 0.5 * phi_b;
    let (s, c) = (half.sin(), half.cos());
    Vector2::new(
        -offset - undeformed_radius * s * s,
        undeformed_radius * s * c,
    )
}

/// z-component of the planar cross product a × b.
pub fn cross2(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Incident angle of the cable at the base surface:
/// θ0 = α − arcsin((1 − κ_b d)·(κ_c/κ_b)·sin α).
///
/// The undeformed cable at a half-turn bend sits exactly on the arcsine
/// boundary, where rounding can overshoot 1 by a few ulp; a small
/// tolerance band clamps that case while genuine violations still error.
pub fn incident_angle(kappa_b: f64, kappa_c: f64, offset: f64, alpha: f64) -> Result<f64> {
    if !(kappa_b > 0.0) {
        return Err(Error::InvalidInput(format!(
            "incident angle needs κ_b > 0, got {kappa_b}"
        )));
    }
    let arg = (1.0 - kappa_b * offset) * (kappa_c / kappa_b) * alpha.sin();
    if arg.abs() > 1.0 + 1e-12 {
        return Err(Error::ArcsinDomain { arg });
    }
    Ok(alpha - arg.clamp(-1.0, 1.0).asin())
}

/// 1 − cos x without cancellation for small x.
#[inline]
fn one_minus_cos(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    2.0 * s * s
}

/// Maximum transverse deformation of the cable:
/// Δh = (1/κ_b − d)(1 − cos α) − (1/κ_c)(1 − cos(α − θ0)).
pub fn transverse_deformation(
    kappa_b: f64,
    kappa_c: f64,
    offset: f64,
    alpha: f64,
    theta0: f64,
) -> f64 {
    let omc_a = one_minus_cos(alpha);
    let omc_t = one_minus_cos(alpha - theta0);
    omc_a / kappa_b - offset * omc_a - omc_t / kappa_c
}

/// Cable curvature of the ideal (undeformed) guide path at curvature κ_b.
pub fn undeformed_cable_curvature(kappa_b: f64, neutral_distance: f64) -> f64 {
    kappa_b / (1.0 - kappa_b * neutral_distance)
}

/// Incident-angle relation in sine form:
/// sin(α − θ0) − (1 − κ_b d)·(κ_c/κ_b)·sin α.
///
/// Equivalent to the arcsine relation on the physical branch
/// (θ0 ∈ [0, π/2], α ≤ π/2) but with a Jacobian that stays finite at the
/// undeformed state of a half-turn bend, where the arcsine form folds.
/// The Newton solvers iterate on this form; the public residuals keep the
/// arcsine rows.
pub(crate) fn incident_residual_sine(
    kappa_b: f64,
    kappa_c: f64,
    neutral_distance: f64,
    alpha: f64,
    theta0: f64,
) -> f64 {
    (alpha - theta0).sin() - (1.0 - kappa_b * neutral_distance) * (kappa_c / kappa_b) * alpha.sin()
}

/// Which quantity is known when evaluating the single-cable residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingleKnown {
    /// Cable length known; x = [κ_b, θ0, κ_c, T].
    Length(f64),
    /// Backbone curvature known; x = [l, θ0, κ_c, T].
    Curvature(f64),
}

/// Four-row residual of the single-cable model.
///
/// Rows: moment balance, incident-angle relation, tension law, length
/// relation. Each row is divided by a characteristic magnitude
/// (K_b/L², 1, K_c/L, 1) so that N·cm, rad, N, and cm rows mix in one norm.
pub fn residual_single(
    x: &DVector<f64>,
    p: &SectionParams,
    known: SingleKnown,
) -> Result<DVector<f64>> {
    let (kappa_b, length) = match known {
        SingleKnown::Length(l) => (x[0], l),
        SingleKnown::Curvature(k) => (k, x[0]),
    };
    let (theta0, kappa_c, tension) = (x[1], x[2], x[3]);
    if !(kappa_b > 0.0) || !(kappa_c > 0.0) {
        return Err(Error::InvalidInput(
            "residual needs κ_b > 0 and κ_c > 0".into(),
        ));
    }
    let d = p.cable_offset;
    let alpha = 0.5 * p.length * kappa_b;

    let moment_scale = p.bending_stiffness / (p.length * p.length);
    let tension_scale = p.cutting_stiffness / p.length;

    let r_moment = p.bending_stiffness * kappa_b - tension * d * theta0.cos();
    let theta0_model = incident_angle(kappa_b, kappa_c, d, alpha)?;
    let r_incident = theta0 - theta0_model;
    let dh = transverse_deformation(kappa_b, kappa_c, d, alpha, theta0);
    let r_tension = tension - (p.cutting_stiffness / kappa_c) * dh;
    let r_length = length - (p.length * kappa_b - 2.0 * theta0) / kappa_c;

    Ok(DVector::from_vec(vec![
        r_moment / moment_scale,
        r_incident,
        r_tension / tension_scale,
        r_length,
    ]))
}

fn straight_forward(l: f64) -> SingleCableSolution {
    SingleCableSolution {
        kappa_b: 0.0,
        theta0: 0.0,
        kappa_c: 0.0,
        tension: 0.0,
        length: l,
    }
}

/// Internal solver residual: the four model rows with the incident
/// relation in its regular sine form.
fn solver_rows_single(
    x: &DVector<f64>,
    p: &SectionParams,
    known: SingleKnown,
) -> Result<DVector<f64>> {
    let (kappa_b, length) = match known {
        SingleKnown::Length(l) => (x[0], l),
        SingleKnown::Curvature(k) => (k, x[0]),
    };
    let (theta0, kappa_c, tension) = (x[1], x[2], x[3]);
    if !(kappa_b > 0.0) || !(kappa_c > 0.0) {
        return Err(Error::InvalidInput(
            "residual needs κ_b > 0 and κ_c > 0".into(),
        ));
    }
    let d = p.cable_offset;
    let alpha = 0.5 * p.length * kappa_b;
    let moment_scale = p.bending_stiffness / (p.length * p.length);
    let tension_scale = p.cutting_stiffness / p.length;
    let dh = transverse_deformation(kappa_b, kappa_c, d, alpha, theta0);
    Ok(DVector::from_vec(vec![
        (p.bending_stiffness * kappa_b - tension * d * theta0.cos()) / moment_scale,
        incident_residual_sine(kappa_b, kappa_c, d, alpha, theta0),
        (tension - (p.cutting_stiffness / kappa_c) * dh) / tension_scale,
        length - (p.length * kappa_b - 2.0 * theta0) / kappa_c,
    ]))
}

fn solver_bounds_forward(p: &SectionParams) -> Vec<(f64, f64)> {
    vec![
        (1e-9, p.max_curvature()),
        (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
        (1e-9, 1e3),
        (-1e9, 1e9),
    ]
}

fn solver_bounds_inverse(p: &SectionParams) -> Vec<(f64, f64)> {
    vec![
        (1e-9, 2.0 * p.length),
        (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
        (1e-9, 1e3),
        (-1e9, 1e9),
    ]
}

/// Solves the single-cable model for the backbone curvature given the
/// commanded cable length.
///
/// The initial guess assumes no transverse deformation (θ0 = 0): the
/// ideal-geometry curvature and zero tension, solved in closed form.
pub fn solve_forward_single(
    l: f64,
    p: &SectionParams,
    s: &SolverSettings,
) -> Result<SingleCableSolution> {
    p.validate()?;
    s.validate()?;
    if !(l > 0.0) || l > p.length {
        return Err(Error::InvalidInput(format!(
            "cable length {l} outside (0, L = {}]",
            p.length
        )));
    }
    // Contraction small enough that the implied curvature sits below the
    // straight-section threshold.
    if p.length - l <= p.length * p.cable_offset * s.delta_kappa {
        return Ok(straight_forward(l));
    }

    let solve_at = |length: f64, warm: Option<&DVector<f64>>| -> Result<DVector<f64>> {
        let x0 = match warm {
            Some(x) => x.clone(),
            None => {
                let kappa_guess = ((p.length - length) / (p.length * p.cable_offset))
                    .clamp(s.delta_kappa, p.max_curvature());
                DVector::from_vec(vec![
                    kappa_guess,
                    0.0,
                    undeformed_cable_curvature(kappa_guess, p.cable_offset),
                    0.0,
                ])
            }
        };
        let sys = ResidualSystem::new(4, move |x| {
            solver_rows_single(x, p, SingleKnown::Length(length))
        })
        .with_bounds(solver_bounds_forward(p));
        Ok(solve_system(&sys, &x0, s)?.x)
    };
    // Direct solve first; strongly deformed regimes fall back to walking
    // the contraction up from the straight side.
    let x = match solve_at(l, None) {
        Ok(x) => x,
        Err(first_err) => {
            continuation(|frac, warm| solve_at(p.length + frac * (l - p.length), warm))
                .map_err(|_| first_err)?
        }
    };
    let sol = SingleCableSolution {
        kappa_b: x[0],
        theta0: x[1],
        kappa_c: x[2],
        tension: x[3],
        length: l,
    };
    if sol.tension < -s.tol_tension {
        return Err(Error::Infeasible {
            cable: 1,
            tension: sol.tension,
        });
    }
    Ok(sol)
}

/// Adaptive homotopy in a load fraction: solve at increasing fractions of
/// the target, warm-starting from the last success, halving the increment
/// after a failure. Returns the solution at fraction 1.
pub(crate) fn continuation<F>(mut solve_at_fraction: F) -> Result<DVector<f64>>
where
    F: FnMut(f64, Option<&DVector<f64>>) -> Result<DVector<f64>>,
{
    let mut solved_frac = 0.0_f64;
    let mut warm: Option<DVector<f64>> = None;
    let mut step = 0.5_f64;
    loop {
        let frac = (solved_frac + step).min(1.0);
        match solve_at_fraction(frac, warm.as_ref()) {
            Ok(x) => {
                if frac >= 1.0 {
                    return Ok(x);
                }
                solved_frac = frac;
                warm = Some(x);
                step = (step * 2.0).min(1.0 - solved_frac);
            }
            Err(e) => {
                step *= 0.5;
                if step < 1e-3 {
                    return Err(e);
                }
            }
        }
    }
}

/// Solves the single-cable model for the cable length that produces a
/// desired backbone curvature.
pub fn solve_inverse_single(
    kappa_b: f64,
    p: &SectionParams,
    s: &SolverSettings,
) -> Result<SingleCableSolution> {
    p.validate()?;
    s.validate()?;
    if !(kappa_b >= 0.0) || kappa_b > p.max_curvature() * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "curvature {kappa_b} outside [0, π/L = {}]",
            p.max_curvature()
        )));
    }
    if kappa_b < s.delta_kappa {
        return Ok(SingleCableSolution {
            kappa_b,
            theta0: 0.0,
            kappa_c: undeformed_cable_curvature(kappa_b, p.cable_offset),
            tension: 0.0,
            length: p.length,
        });
    }

    let solve_at = |kappa: f64, warm: Option<&DVector<f64>>| -> Result<DVector<f64>> {
        let x0 = match warm {
            Some(x) => x.clone(),
            None => DVector::from_vec(vec![
                p.length * (1.0 - kappa * p.cable_offset),
                0.0,
                undeformed_cable_curvature(kappa, p.cable_offset),
                0.0,
            ]),
        };
        let sys = ResidualSystem::new(4, move |x| {
            solver_rows_single(x, p, SingleKnown::Curvature(kappa))
        })
        .with_bounds(solver_bounds_inverse(p));
        Ok(solve_system(&sys, &x0, s)?.x)
    };
    let x = match solve_at(kappa_b, None) {
        Ok(x) => x,
        Err(first_err) => {
            continuation(|frac, warm| solve_at(kappa_b * frac, warm)).map_err(|_| first_err)?
        }
    };
    let sol = SingleCableSolution {
        kappa_b,
        theta0: x[1],
        kappa_c: x[2],
        tension: x[3],
        length: x[0],
    };
    if sol.tension < -s.tol_tension {
        return Err(Error::Infeasible {
            cable: 1,
            tension: sol.tension,
        });
    }
    Ok(sol)
}

/// Assembles every force/moment term of the model at a solved state.
pub fn single_cable_detail(
    sol: &SingleCableSolution,
    p: &SectionParams,
) -> Result<SingleCableDetail> {
    let phi_b = p.length * sol.kappa_b;
    let d = p.cable_offset;
    let alpha = 0.5 * phi_b;
    let f_eq = equivalent_force(sol.tension, sol.theta0, phi_b)?;
    let f_t = tip_force(sol.tension, sol.theta0, phi_b);
    let f_r = reaction_force(sol.tension, sol.theta0);
    let (r_d, dh, dy) = if sol.kappa_b > 0.0 && sol.kappa_c > 0.0 {
        let r_d = 1.0 / sol.kappa_b - d;
        (
            r_d,
            transverse_deformation(sol.kappa_b, sol.kappa_c, d, alpha, sol.theta0),
            r_d * alpha.sin(),
        )
    } else {
        (f64::INFINITY, 0.0, 0.0)
    };
    Ok(SingleCableDetail {
        force_density: sol.tension * sol.kappa_c,
        transverse_force: sol.tension * (phi_b - 2.0 * sol.theta0),
        equivalent_force: f_eq,
        tip_force: f_t,
        reaction_force: f_r,
        cable_moment: sol.tension * d * sol.theta0.cos(),
        support_moment: support_moment(sol.tension, d, sol.theta0),
        equivalent_arm: equivalent_force_arm(d, r_d, phi_b),
        tip_arm: tip_force_arm(d, r_d, phi_b),
        max_transverse_deformation: dh,
        chord_ordinate: dy,
    })
}

//! Static model of one section driven by n evenly distributed cables, the
//! slack-cable strategy that resolves actuation redundancy, and the
//! ideal-geometry baseline model used for comparison.

use std::f64::consts::TAU;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::nlsolve::{solve_system, ResidualSystem};
use crate::statics::single::{
    incident_angle, incident_residual_sine, transverse_deformation, undeformed_cable_curvature,
};
use crate::types::{BendingConfig, CableSolution, SectionParams, SolverSettings};

/// Solved state of a multi-cable section.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiCableState {
    pub config: BendingConfig,
    pub cables: Vec<CableSolution>,
}

impl MultiCableState {
    pub fn lengths(&self) -> Vec<f64> {
        self.cables.iter().map(|c| c.length).collect()
    }

    pub fn tensions(&self) -> Vec<f64> {
        self.cables.iter().map(|c| c.tension).collect()
    }

    /// Lateral moments M_p,i = T_i·d·cos θ0,i·sin β_i about the base; they
    /// sum to zero at any solution.
    pub fn lateral_moments(&self, p: &SectionParams) -> Vec<f64> {
        self.cables
            .iter()
            .map(|c| c.tension * p.cable_offset * c.incident_angle.cos() * c.bend_offset_angle.sin())
            .collect()
    }

    /// Lateral moment arms r_p,i = d·sin β_i.
    pub fn lateral_arms(&self, p: &SectionParams) -> Vec<f64> {
        self.cables
            .iter()
            .map(|c| p.cable_offset * c.bend_offset_angle.sin())
            .collect()
    }
}

/// Orientation angle β_i of cable `i` relative to the bending direction,
/// and its signed distance d_i to the neutral plane. Cables are indexed
/// from 1, counterclockwise, with cable 1 on the base-frame x axis.
pub fn cable_geometry(index: usize, count: usize, gamma: f64, offset: f64) -> (f64, f64) {
    debug_assert!(index >= 1 && index <= count);
    let beta = TAU * (index - 1) as f64 / count as f64 - gamma;
    (beta, offset * beta.cos())
}

const SLACK_TIE_TOL: f64 = 1e-9;

/// Index (1-based) of the cable most opposed to the bending direction:
/// the one whose wrapped angle to the bending plane is closest to π, i.e.
/// with minimal cos β_i. Ties within a small tolerance resolve to the
/// lowest index.
pub fn select_slack_cable(count: usize, gamma: f64) -> usize {
    slack_set(count, gamma)[0]
}

/// The n−2 most-opposed cables, in selection order. Pinning their tensions
/// to zero makes the inverse mapping square for any n ≥ 3; for n = 3 this
/// is a single cable.
pub fn slack_set(count: usize, gamma: f64) -> Vec<usize> {
    let cos_beta: Vec<f64> = (1..=count)
        .map(|i| cable_geometry(i, count, gamma, 1.0).0.cos())
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(count.saturating_sub(2));
    while chosen.len() + 2 < count {
        let mut min_c = f64::INFINITY;
        for (i, &c) in cos_beta.iter().enumerate() {
            if !chosen.contains(&(i + 1)) && c < min_c {
                min_c = c;
            }
        }
        let pick = (0..count)
            .find(|i| !chosen.contains(&(i + 1)) && cos_beta[*i] <= min_c + SLACK_TIE_TOL)
            .expect("at least one unchosen cable");
        chosen.push(pick + 1);
    }
    chosen
}

/// What is known when evaluating the multi-cable residual.
#[derive(Debug, Clone, Copy)]
pub enum MultiKnown<'a> {
    /// Cable lengths known (forward mapping);
    /// x = [κ_b, γ, (θ0_i, κ_c_i, T_i) × n].
    Lengths(&'a [f64]),
    /// Bending configuration known (inverse mapping);
    /// x = [(θ0_i, κ_c_i, T_i, l_i) × n].
    Config { kappa_b: f64, gamma: f64 },
}

/// Full (3n+2)-row residual of the multi-cable model.
///
/// Rows: planar moment balance, lateral moment balance, n incident-angle
/// rows, n tension rows, n length rows, with the same row scaling as the
/// single-cable residual. When `slack` names a cable its tension is pinned
/// to zero regardless of the trial value.
pub fn residual_multi(
    x: &DVector<f64>,
    p: &SectionParams,
    known: MultiKnown,
    slack: Option<usize>,
) -> Result<DVector<f64>> {
    let n = p.cable_count;
    type CableVars = Vec<(f64, f64, f64, f64)>;
    let (kappa_b, gamma, vars): (f64, f64, CableVars) = match known {
        MultiKnown::Lengths(lengths) => {
            if lengths.len() != n {
                return Err(Error::InvalidInput(format!(
                    "expected {n} cable lengths, got {}",
                    lengths.len()
                )));
            }
            if x.len() != 3 * n + 2 {
                return Err(Error::InvalidInput(format!(
                    "expected state of length {}, got {}",
                    3 * n + 2,
                    x.len()
                )));
            }
            let vars = (0..n)
                .map(|i| (x[2 + 3 * i], x[3 + 3 * i], x[4 + 3 * i], lengths[i]))
                .collect();
            (x[0], x[1], vars)
        }
        MultiKnown::Config { kappa_b, gamma } => {
            if x.len() != 4 * n {
                return Err(Error::InvalidInput(format!(
                    "expected state of length {}, got {}",
                    4 * n,
                    x.len()
                )));
            }
            let vars = (0..n)
                .map(|i| (x[4 * i], x[4 * i + 1], x[4 * i + 2], x[4 * i + 3]))
                .collect();
            (kappa_b, gamma, vars)
        }
    };

    if !(kappa_b > 0.0) {
        return Err(Error::InvalidInput("residual needs κ_b > 0".into()));
    }
    let alpha = 0.5 * p.length * kappa_b;
    let moment_scale = p.bending_stiffness / (p.length * p.length);
    let tension_scale = p.cutting_stiffness / p.length;

    let mut planar = -p.bending_stiffness * kappa_b;
    let mut lateral = 0.0;
    let mut incident_rows = Vec::with_capacity(n);
    let mut tension_rows = Vec::with_capacity(n);
    let mut length_rows = Vec::with_capacity(n);

    for i in 1..=n {
        let (theta0, kappa_c, tension_raw, length) = vars[i - 1];
        let tension = if slack == Some(i) { 0.0 } else { tension_raw };
        if !(kappa_c > 0.0) {
            return Err(Error::InvalidInput("residual needs κ_c > 0".into()));
        }
        let (beta, d_i) = cable_geometry(i, n, gamma, p.cable_offset);
        let m_i = tension * p.cable_offset * theta0.cos();
        planar += m_i * beta.cos();
        lateral += m_i * beta.sin();
        let theta0_model = incident_angle(kappa_b, kappa_c, d_i, alpha)?;
        incident_rows.push(theta0 - theta0_model);
        let dh = transverse_deformation(kappa_b, kappa_c, d_i, alpha, theta0);
        tension_rows.push((tension - (p.cutting_stiffness / kappa_c) * dh) / tension_scale);
        length_rows.push(length - (p.length * kappa_b - 2.0 * theta0) / kappa_c);
    }

    let mut rows = Vec::with_capacity(3 * n + 2);
    rows.push(planar / moment_scale);
    rows.push(lateral / moment_scale);
    rows.extend(incident_rows);
    rows.extend(tension_rows);
    rows.extend(length_rows);
    Ok(DVector::from_vec(rows))
}

/// Internal square system over the active cables only. A pinned cable
/// carries zero tension, so its tension row forces zero transverse
/// deformation and its state is the closed-form undeformed geometry; it
/// contributes nothing to the moment rows and is reconstructed after the
/// solve. The incident relation is iterated in its regular sine form.
struct MultiLayout<'a> {
    p: &'a SectionParams,
    pinned: Vec<bool>,
    /// Some(lengths) for the forward mapping, None for the inverse.
    lengths: Option<&'a [f64]>,
    /// Fixed configuration for the inverse mapping.
    fixed: Option<(f64, f64)>,
}

impl<'a> MultiLayout<'a> {
    fn n(&self) -> usize {
        self.p.cable_count
    }

    fn active_count(&self) -> usize {
        self.pinned.iter().filter(|&&pin| !pin).count()
    }

    fn dim(&self) -> usize {
        3 * self.active_count() + if self.lengths.is_some() { 2 } else { 0 }
    }

    /// Expands the packed state to per-cable (θ0, κ_c, T), filling pinned
    /// cables with their undeformed zero-tension geometry.
    fn unpack(&self, x: &DVector<f64>) -> (f64, f64, Vec<(f64, f64, f64)>) {
        let mut k = 0;
        let (kappa_b, gamma) = match self.fixed {
            Some(fix) => fix,
            None => {
                k = 2;
                (x[0], x[1])
            }
        };
        let mut cables = Vec::with_capacity(self.n());
        for (i, &pin) in self.pinned.iter().enumerate() {
            if pin {
                let (_, d_i) = cable_geometry(i + 1, self.n(), gamma, self.p.cable_offset);
                cables.push((0.0, undeformed_cable_curvature(kappa_b, d_i), 0.0));
            } else {
                cables.push((x[k], x[k + 1], x[k + 2]));
                k += 3;
            }
        }
        (kappa_b, gamma, cables)
    }

    fn residual(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let p = self.p;
        let n = self.n();
        let (kappa_b, gamma, cables) = self.unpack(x);
        if !(kappa_b > 0.0) {
            return Err(Error::InvalidInput("trial κ_b must be positive".into()));
        }
        let alpha = 0.5 * p.length * kappa_b;
        let moment_scale = p.bending_stiffness / (p.length * p.length);
        let tension_scale = p.cutting_stiffness / p.length;

        let mut planar = -p.bending_stiffness * kappa_b;
        let mut lateral = 0.0;
        let mut incident_rows = Vec::with_capacity(self.active_count());
        let mut tension_rows = Vec::with_capacity(self.active_count());
        let mut length_rows = Vec::new();

        for i in 1..=n {
            if self.pinned[i - 1] {
                continue;
            }
            let (theta0, kappa_c, tension) = cables[i - 1];
            if !(kappa_c > 0.0) {
                return Err(Error::InvalidInput("trial κ_c must be positive".into()));
            }
            let (beta, d_i) = cable_geometry(i, n, gamma, p.cable_offset);
            let m_i = tension * p.cable_offset * theta0.cos();
            planar += m_i * beta.cos();
            lateral += m_i * beta.sin();
            incident_rows.push(incident_residual_sine(kappa_b, kappa_c, d_i, alpha, theta0));
            let dh = transverse_deformation(kappa_b, kappa_c, d_i, alpha, theta0);
            tension_rows.push((tension - (p.cutting_stiffness / kappa_c) * dh) / tension_scale);
            if let Some(lengths) = self.lengths {
                length_rows.push(lengths[i - 1] - (p.length * kappa_b - 2.0 * theta0) / kappa_c);
            }
        }

        let mut rows = Vec::with_capacity(self.dim());
        rows.push(planar / moment_scale);
        rows.push(lateral / moment_scale);
        rows.extend(incident_rows);
        rows.extend(tension_rows);
        rows.extend(length_rows);
        debug_assert_eq!(rows.len(), self.dim());
        Ok(DVector::from_vec(rows))
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        let mut b = Vec::with_capacity(self.dim());
        if self.lengths.is_some() {
            b.push((1e-9, self.p.max_curvature()));
            b.push((-1e9, 1e9));
        }
        for &pin in &self.pinned {
            if !pin {
                b.push((-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2));
                b.push((1e-9, 1e3));
                b.push((-1e9, 1e9));
            }
        }
        b
    }

    /// Undeformed-cable initial guess. With `distribute_tension` the active
    /// tensions start from the planar moment row instead of zero, which
    /// keeps the lateral row's Jacobian nonsingular when only one cable
    /// remains active.
    fn initial_guess(&self, kappa_b: f64, gamma: f64, distribute_tension: bool) -> DVector<f64> {
        let n = self.n();
        let mut tension_init = vec![0.0; n];
        if distribute_tension {
            let mut weight_sq = 0.0;
            let mut weights = vec![0.0; n];
            for i in 1..=n {
                if !self.pinned[i - 1] {
                    let (beta, _) = cable_geometry(i, n, gamma, self.p.cable_offset);
                    weights[i - 1] = beta.cos().max(0.0);
                    weight_sq += weights[i - 1] * weights[i - 1];
                }
            }
            if weight_sq > 0.0 {
                let scale = self.p.bending_stiffness * kappa_b / (self.p.cable_offset * weight_sq);
                for i in 0..n {
                    tension_init[i] = scale * weights[i];
                }
            }
        }
        let mut x = Vec::with_capacity(self.dim());
        if self.lengths.is_some() {
            x.push(kappa_b);
            x.push(gamma);
        }
        for i in 1..=n {
            if self.pinned[i - 1] {
                continue;
            }
            let (_, d_i) = cable_geometry(i, n, gamma, self.p.cable_offset);
            x.push(0.0);
            x.push(undeformed_cable_curvature(kappa_b, d_i));
            x.push(tension_init[i - 1]);
        }
        DVector::from_vec(x)
    }
}

fn length_from_row(p: &SectionParams, kappa_b: f64, theta0: f64, kappa_c: f64) -> f64 {
    (p.length * kappa_b - 2.0 * theta0) / kappa_c
}

fn cable_solutions(
    p: &SectionParams,
    kappa_b: f64,
    gamma: f64,
    cables: &[(f64, f64, f64)],
    pinned: &[bool],
    commanded: Option<&[f64]>,
) -> Vec<CableSolution> {
    (1..=p.cable_count)
        .map(|i| {
            let (beta, d_i) = cable_geometry(i, p.cable_count, gamma, p.cable_offset);
            let (theta0, kappa_c, tension) = cables[i - 1];
            let length = match commanded {
                Some(ls) if !pinned[i - 1] => ls[i - 1],
                _ => length_from_row(p, kappa_b, theta0, kappa_c),
            };
            CableSolution {
                length,
                tension,
                incident_angle: theta0,
                curvature: kappa_c,
                bend_offset_angle: beta,
                neutral_distance: d_i,
                slack: pinned[i - 1],
            }
        })
        .collect()
}

fn straight_state(p: &SectionParams, lengths: Option<&[f64]>) -> MultiCableState {
    let slack = slack_set(p.cable_count, 0.0);
    let cables = (1..=p.cable_count)
        .map(|i| {
            let (beta, d_i) = cable_geometry(i, p.cable_count, 0.0, p.cable_offset);
            CableSolution {
                length: lengths.map_or(p.length, |l| l[i - 1]),
                tension: 0.0,
                incident_angle: 0.0,
                curvature: 0.0,
                bend_offset_angle: beta,
                neutral_distance: d_i,
                slack: slack.contains(&i),
            }
        })
        .collect();
    MultiCableState {
        config: BendingConfig::straight(),
        cables,
    }
}

/// Solves the multi-cable model for (κ_b, γ) and all per-cable quantities
/// given the commanded cable lengths.
///
/// No slack assignment is presumed: the square system with all tensions
/// free is solved first, and a cable whose solved tension is negative
/// beyond tolerance is pinned to zero (its length row is dropped, since a
/// slack cable's commanded length no longer binds) and the solve retried.
/// Lengths may exceed L: released cables are handled by the pinning retry.
pub fn solve_forward_multi(
    lengths: &[f64],
    p: &SectionParams,
    s: &SolverSettings,
) -> Result<MultiCableState> {
    p.validate()?;
    s.validate()?;
    let n = p.cable_count;
    if lengths.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} cable lengths, got {}",
            lengths.len()
        )));
    }
    if lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidInput("cable lengths must be positive".into()));
    }
    let max_contraction = lengths
        .iter()
        .fold(0.0_f64, |m, &l| m.max(p.length - l));
    if max_contraction <= p.length * p.cable_offset * s.delta_kappa {
        return Ok(straight_state(p, Some(lengths)));
    }

    let (fit_a, fit_b, _) = baseline_fit(lengths, p);
    let kappa_guess = fit_a.hypot(fit_b).clamp(s.delta_kappa, p.max_curvature());
    let gamma_guess = fit_b.atan2(fit_a);

    let mut pinned = vec![false; n];
    let mut last_err = None;
    for _attempt in 0..n {
        let pins = pinned.iter().filter(|&&x| x).count();
        let solve_at = |blend: f64, warm: Option<&DVector<f64>>| -> Result<DVector<f64>> {
            let blended: Vec<f64> = lengths
                .iter()
                .map(|&l| p.length + blend * (l - p.length))
                .collect();
            let layout = MultiLayout {
                p,
                pinned: pinned.clone(),
                lengths: Some(&blended),
                fixed: None,
            };
            let sys = ResidualSystem::new(layout.dim(), |x| layout.residual(x))
                .with_bounds(layout.bounds());
            let x0 = match warm {
                Some(x) => x.clone(),
                None => layout.initial_guess(
                    (blend * kappa_guess).clamp(s.delta_kappa, p.max_curvature()),
                    gamma_guess,
                    pins > 0,
                ),
            };
            Ok(solve_system(&sys, &x0, s)?.x)
        };
        let attempt = solve_at(1.0, None).or_else(|first_err| {
            crate::statics::single::continuation(&solve_at).map_err(|_| first_err)
        });
        let layout = MultiLayout {
            p,
            pinned: pinned.clone(),
            lengths: Some(lengths),
            fixed: None,
        };
        match attempt {
            Ok(solved) => {
                let (kappa_b, gamma, cables) = layout.unpack(&solved);
                // Find the worst active tension; pin it and retry if it is
                // negative beyond tolerance.
                let mut worst: Option<(usize, f64)> = None;
                for (i, &(_, _, t)) in cables.iter().enumerate() {
                    let beats = worst.is_none_or(|(_, wt)| t < wt);
                    if !pinned[i] && t < -s.tol_tension && beats {
                        worst = Some((i, t));
                    }
                }
                match worst {
                    Some((i, t)) => {
                        pinned[i] = true;
                        if pinned.iter().filter(|&&x| x).count() >= n {
                            return Err(Error::Infeasible {
                                cable: i + 1,
                                tension: t,
                            });
                        }
                        last_err = Some(Error::Infeasible {
                            cable: i + 1,
                            tension: t,
                        });
                    }
                    None => {
                        let config = BendingConfig::new(kappa_b, gamma)?;
                        let cables = cable_solutions(
                            p,
                            kappa_b,
                            config.orientation(),
                            &cables,
                            &pinned,
                            Some(lengths),
                        );
                        return Ok(MultiCableState { config, cables });
                    }
                }
            }
            Err(e) => {
                // An unpinned solve can stall on an over-released cable;
                // pin the most-opposed candidate and retry once per cable.
                last_err = Some(e);
                let candidates = slack_set(n, gamma_guess);
                match candidates.iter().find(|&&i| !pinned[i - 1]) {
                    Some(&i) => pinned[i - 1] = true,
                    None => break,
                }
            }
        }
    }
    Err(last_err.unwrap_or(Error::SingularJacobian))
}

/// Solves the multi-cable model for the cable lengths that realize a
/// desired bending configuration.
///
/// The most-opposed cables (one for n = 3) are pinned slack, which makes
/// the system square; the slack cable's commanded length comes from its
/// own length row at the zero-tension solution.
pub fn solve_inverse_multi(
    cfg: &BendingConfig,
    p: &SectionParams,
    s: &SolverSettings,
) -> Result<MultiCableState> {
    p.validate()?;
    s.validate()?;
    let n = p.cable_count;
    if cfg.curvature() > p.max_curvature() * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "curvature {} outside [0, π/L = {}]",
            cfg.curvature(),
            p.max_curvature()
        )));
    }
    if cfg.curvature() < s.delta_kappa {
        return Ok(straight_state(p, None));
    }
    let kappa_b = cfg.curvature();
    let gamma = cfg.orientation();

    let slack = slack_set(n, gamma);
    let mut pinned = vec![false; n];
    for &i in &slack {
        pinned[i - 1] = true;
    }

    let solve_at = |kappa: f64, warm: Option<&DVector<f64>>| -> Result<DVector<f64>> {
        let layout = MultiLayout {
            p,
            pinned: pinned.clone(),
            lengths: None,
            fixed: Some((kappa, gamma)),
        };
        let sys = ResidualSystem::new(layout.dim(), |x| layout.residual(x))
            .with_bounds(layout.bounds());
        let x0 = match warm {
            Some(x) => x.clone(),
            None => layout.initial_guess(kappa, gamma, false),
        };
        Ok(solve_system(&sys, &x0, s)?.x)
    };
    let x = match solve_at(kappa_b, None) {
        Ok(x) => x,
        Err(first_err) => {
            crate::statics::single::continuation(|frac, warm| solve_at(kappa_b * frac, warm))
                .map_err(|_| first_err)?
        }
    };
    let layout = MultiLayout {
        p,
        pinned: pinned.clone(),
        lengths: None,
        fixed: Some((kappa_b, gamma)),
    };
    let (_, _, cables) = layout.unpack(&x);
    for (i, &(_, _, t)) in cables.iter().enumerate() {
        if t < -s.tol_tension {
            return Err(Error::Infeasible {
                cable: i + 1,
                tension: t,
            });
        }
    }
    let cables = cable_solutions(p, kappa_b, gamma, &cables, &pinned, None);
    Ok(MultiCableState {
        config: *cfg,
        cables,
    })
}

fn baseline_fit(lengths: &[f64], p: &SectionParams) -> (f64, f64, f64) {
    let n = lengths.len();
    let scale = p.length * p.cable_offset;
    let (mut saa, mut sab, mut sbb, mut ya, mut yb) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, &l) in lengths.iter().enumerate() {
        let psi = TAU * i as f64 / n as f64;
        let (c, si) = (psi.cos(), psi.sin());
        let dl = (p.length - l) / scale;
        saa += c * c;
        sab += c * si;
        sbb += si * si;
        ya += dl * c;
        yb += dl * si;
    }
    let det = saa * sbb - sab * sab;
    let a = (sbb * ya - sab * yb) / det;
    let b = (saa * yb - sab * ya) / det;
    let mut misfit = 0.0;
    for (i, &l) in lengths.iter().enumerate() {
        let psi = TAU * i as f64 / n as f64;
        let r = (p.length - l) - scale * (a * psi.cos() + b * psi.sin());
        misfit += r * r;
    }
    (a, b, misfit.sqrt())
}

/// Ideal-geometry cable lengths l_i = L·(1 − κ_b·d_i) for a bending
/// configuration, ignoring transverse deformation.
pub fn baseline_inverse(cfg: &BendingConfig, p: &SectionParams) -> Result<Vec<f64>> {
    p.validate()?;
    if cfg.curvature() * p.cable_offset >= 1.0 {
        return Err(Error::InvalidInput(
            "baseline needs κ_b·d < 1 (cable inside the arc center)".into(),
        ));
    }
    Ok((1..=p.cable_count)
        .map(|i| {
            let (_, d_i) = cable_geometry(i, p.cable_count, cfg.orientation(), p.cable_offset);
            p.length * (1.0 - cfg.curvature() * d_i)
        })
        .collect())
}

/// Ideal-geometry bending configuration fitted to measured cable lengths.
///
/// The contraction pattern Δl_i = L·d·(a·cos ψ_i + b·sin ψ_i) is fitted by
/// least squares over all cables, which is exact on consistent data and
/// deterministic on noisy data. Returns the configuration and the
/// root-sum-square length misfit (cm).
pub fn baseline_forward(lengths: &[f64], p: &SectionParams) -> Result<(BendingConfig, f64)> {
    p.validate()?;
    if lengths.len() != p.cable_count {
        return Err(Error::InvalidInput(format!(
            "expected {} cable lengths, got {}",
            p.cable_count,
            lengths.len()
        )));
    }
    if lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidInput("cable lengths must be positive".into()));
    }
    let (a, b, misfit) = baseline_fit(lengths, p);
    let kappa = a.hypot(b);
    let cfg = if kappa < 1e-14 {
        BendingConfig::straight()
    } else {
        BendingConfig::new(kappa, b.atan2(a))?
    };
    Ok((cfg, misfit))
}

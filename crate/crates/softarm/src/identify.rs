//! Identification of the bending stiffness K_b and the cutting-in
//! stiffness K_c from bend-test data.

use crate::error::{Error, Result};
use crate::statics::solve_inverse_single;
use crate::types::{SectionParams, SolverSettings};

/// One measurement of a single-section bend test. The value column holds
/// the cable tension (N) for K_b identification and the cable contraction
/// Δl = L − l (cm) for K_c identification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendSample {
    /// Bend angle φ_b (rad).
    pub phi_b: f64,
    /// Measured tension or contraction, depending on the fit.
    pub value: f64,
    /// Run id; replicates of the same bend angle are averaged before
    /// fitting.
    pub replicate: u32,
}

/// Result of a K_b fit.
#[derive(Debug, Clone, PartialEq)]
pub struct KbFit {
    /// Identified bending stiffness (N·cm²).
    pub value: f64,
    /// Number of distinct bend angles used.
    pub groups: usize,
    /// Non-fatal notes, e.g. bend angles beyond the small-angle regime.
    pub warnings: Vec<String>,
}

/// Result of a K_c fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KcFit {
    /// Identified cutting-in stiffness (N/cm²).
    pub value: f64,
    /// Number of distinct bend angles used.
    pub groups: usize,
    /// Sum of squared length residuals at the optimum (cm²).
    pub sse: f64,
}

const GROUP_TOL: f64 = 1e-9;

/// Averages replicates that share a bend angle; returns (φ_b, mean value)
/// sorted by φ_b.
fn group_replicates(samples: &[BendSample]) -> Vec<(f64, f64)> {
    let mut sorted: Vec<&BendSample> = samples.iter().collect();
    sorted.sort_by(|a, b| a.phi_b.total_cmp(&b.phi_b));
    let mut groups: Vec<(f64, f64, usize)> = Vec::new();
    for s in sorted {
        match groups.last_mut() {
            Some((phi, sum, count)) if (s.phi_b - *phi).abs() <= GROUP_TOL => {
                *sum += s.value;
                *count += 1;
            }
            _ => groups.push((s.phi_b, s.value, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(phi, sum, count)| (phi, sum / count as f64))
        .collect()
}

/// Identifies K_b from (tension, bend angle) pairs taken at small bends,
/// where the incident angle is negligible and the moment balance reduces
/// to T·d = K_b·κ_b.
///
/// Returns the zero-intercept least-squares slope of T·d against
/// κ_b = φ_b/L. Needs at least two distinct bend angles.
pub fn identify_kb(samples: &[BendSample], p: &SectionParams) -> Result<KbFit> {
    p.validate()?;
    let groups = group_replicates(samples);
    if groups.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: groups.len(),
        });
    }
    let mut warnings = Vec::new();
    let small_angle = 15f64.to_radians();
    for &(phi, value) in &groups {
        if !(phi > 0.0) {
            return Err(Error::InvalidInput(format!(
                "bend angle must be positive, got {phi}"
            )));
        }
        if !(value > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tension must be positive, got {value}"
            )));
        }
        if phi > small_angle {
            warnings.push(format!(
                "bend angle {:.1}° exceeds the 15° small-angle regime of the fit",
                phi.to_degrees()
            ));
        }
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for &(phi, tension) in &groups {
        let kappa = phi / p.length;
        num += tension * p.cable_offset * kappa;
        den += kappa * kappa;
    }
    Ok(KbFit {
        value: num / den,
        groups: groups.len(),
        warnings,
    })
}

/// Golden-section minimization of a unimodal objective on [lo, hi].
/// Probes that fail to evaluate count as infinitely bad, which shrinks the
/// bracket away from them.
fn golden_section_min<F>(f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let eval = |x: f64| f(x).unwrap_or(f64::INFINITY);
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..max_iter {
        if (b - a).abs() < tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = eval(x2);
        }
    }
    let x = 0.5 * (a + b);
    if f(x).is_none() {
        return Err(Error::NoConvergence {
            best: vec![x],
            residual_norm: f64::INFINITY,
            iterations: max_iter,
        });
    }
    Ok(x)
}

/// Sum of squared contraction residuals of the single-cable model at a
/// trial cutting-in stiffness; `None` when an inner solve fails.
pub fn kc_objective(
    kc: f64,
    groups: &[(f64, f64)],
    p: &SectionParams,
    s: &SolverSettings,
) -> Option<f64> {
    let trial = SectionParams {
        cutting_stiffness: kc,
        ..*p
    };
    let mut sse = 0.0;
    for &(phi, dl) in groups {
        let kappa = phi / p.length;
        let sol = solve_inverse_single(kappa, &trial, s).ok()?;
        let model_dl = p.length - sol.length;
        sse += (model_dl - dl) * (model_dl - dl);
    }
    Some(sse)
}

/// Identifies K_c from (contraction, bend angle) pairs by least squares:
/// the single-cable model is solved in the inverse direction per sample
/// and the squared contraction misfit is minimized over K_c by
/// golden-section search on [0.1, 100] N/cm².
pub fn identify_kc(
    samples: &[BendSample],
    p: &SectionParams,
    s: &SolverSettings,
) -> Result<KcFit> {
    p.validate()?;
    s.validate()?;
    let groups = group_replicates(samples);
    if groups.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: groups.len(),
        });
    }
    for &(phi, dl) in &groups {
        if !(phi > 0.0) || phi > std::f64::consts::PI {
            return Err(Error::InvalidInput(format!(
                "bend angle must be in (0, π], got {phi}"
            )));
        }
        if !(dl >= 0.0) || dl >= p.length {
            return Err(Error::InvalidInput(format!(
                "contraction must be in [0, L), got {dl}"
            )));
        }
    }
    let (lo, hi) = (0.1, 100.0);
    let value = golden_section_min(
        |kc| kc_objective(kc, &groups, p, s),
        lo,
        hi,
        1e-7,
        120,
    )?;
    let sse = kc_objective(value, &groups, p, s).ok_or(Error::NoConvergence {
        best: vec![value],
        residual_norm: f64::INFINITY,
        iterations: 120,
    })?;
    Ok(KcFit {
        value,
        groups: groups.len(),
        sse,
    })
}

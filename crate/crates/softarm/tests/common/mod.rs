//! Independent oracle for the section statics, used to cross-check the
//! Newton-based solvers.
//!
//! Everything here reduces the model to scalar root-finding solved by
//! bisection only, with its own copies of the geometric formulas; no code
//! path is shared with the damped-Newton implementation it checks.

#![allow(dead_code)]

use nalgebra::Vector2;
use softarm::nlsolve::solve_scalar_bisection;
use softarm::types::SectionParams;

#[derive(Debug, Clone, Copy)]
pub struct OracleSingle {
    pub kappa_b: f64,
    pub theta0: f64,
    pub kappa_c: f64,
    pub tension: f64,
    pub length: f64,
}

/// Incident angle as a function of the trial cable curvature, with the
/// arcsine argument clamped at the bracket edge where rounding can push it
/// a few ulp past 1.
fn theta0_of(kappa_b: f64, d_i: f64, alpha: f64, kappa_c: f64) -> f64 {
    let arg = ((1.0 - kappa_b * d_i) * (kappa_c / kappa_b) * alpha.sin()).clamp(-1.0, 1.0);
    alpha - arg.asin()
}

fn deformation_of(kappa_b: f64, d_i: f64, alpha: f64, kappa_c: f64) -> f64 {
    let theta0 = theta0_of(kappa_b, d_i, alpha, kappa_c);
    (1.0 / kappa_b - d_i) * (1.0 - alpha.cos()) - (1.0 / kappa_c) * (1.0 - (alpha - theta0).cos())
}

/// Single-cable inverse solve: given the backbone curvature, bisect the
/// cable curvature where the moment-row tension meets the cutting-in law.
pub fn oracle_inverse_single(kappa_b: f64, p: &SectionParams) -> OracleSingle {
    let d = p.cable_offset;
    let alpha = 0.5 * p.length * kappa_b;
    let kc0 = kappa_b / (1.0 - kappa_b * d);
    let f = |kc: f64| {
        let theta0 = theta0_of(kappa_b, d, alpha, kc);
        let moment_tension = p.bending_stiffness * kappa_b / (d * theta0.cos());
        moment_tension * kc - p.cutting_stiffness * deformation_of(kappa_b, d, alpha, kc)
    };
    let mut lo = kc0 * 1e-6;
    while f(lo) > 0.0 {
        lo *= 0.1;
        assert!(lo > 1e-30, "no oracle bracket for κ_b = {kappa_b}");
    }
    let kappa_c = solve_scalar_bisection(f, lo, kc0, 1e-15 * kc0).unwrap();
    let theta0 = theta0_of(kappa_b, d, alpha, kappa_c);
    let tension = p.bending_stiffness * kappa_b / (d * theta0.cos());
    let length = (p.length * kappa_b - 2.0 * theta0) / kappa_c;
    OracleSingle {
        kappa_b,
        theta0,
        kappa_c,
        tension,
        length,
    }
}

/// Single-cable forward solve: bisect the backbone curvature whose
/// inverse-solution length matches the commanded one.
pub fn oracle_forward_single(length: f64, p: &SectionParams) -> OracleSingle {
    let g = |kappa_b: f64| oracle_inverse_single(kappa_b, p).length - length;
    let lo = 1e-6;
    let hi = std::f64::consts::PI / p.length;
    let kappa_b = solve_scalar_bisection(g, lo, hi, 1e-13).unwrap();
    oracle_inverse_single(kappa_b, p)
}

#[derive(Debug, Clone, Copy)]
pub struct OracleCable {
    pub beta: f64,
    pub d_i: f64,
    pub theta0: f64,
    pub kappa_c: f64,
    pub tension: f64,
    pub length: f64,
    pub slack: bool,
}

/// Most-opposed cable (1-based), ties to the lowest index.
pub fn oracle_slack_index(n: usize, gamma: f64) -> usize {
    let cos_beta: Vec<f64> = (0..n)
        .map(|i| (std::f64::consts::TAU * i as f64 / n as f64 - gamma).cos())
        .collect();
    let min = cos_beta.iter().cloned().fold(f64::INFINITY, f64::min);
    cos_beta.iter().position(|&c| c <= min + 1e-9).unwrap() + 1
}

/// Three-cable inverse solve. The two moment rows are linear in the
/// per-cable moments m_i = T_i·d·cos θ0,i, so they are solved directly;
/// each active cable's curvature is then bisected where its tension-row
/// moment matches, with the tension taken from the cutting-in law.
pub fn oracle_inverse_multi(kappa_b: f64, gamma: f64, p: &SectionParams) -> Vec<OracleCable> {
    assert_eq!(p.cable_count, 3, "oracle is specific to three cables");
    let d = p.cable_offset;
    let alpha = 0.5 * p.length * kappa_b;
    let betas: Vec<f64> = (0..3)
        .map(|i| std::f64::consts::TAU * i as f64 / 3.0 - gamma)
        .collect();
    let slack = oracle_slack_index(3, gamma);
    let active: Vec<usize> = (1..=3).filter(|&i| i != slack).collect();
    let (ba, bb) = (betas[active[0] - 1], betas[active[1] - 1]);
    let det = ba.cos() * bb.sin() - bb.cos() * ba.sin();
    let rhs = p.bending_stiffness * kappa_b;
    let m_star = [rhs * bb.sin() / det, -rhs * ba.sin() / det];

    let mut cables = Vec::new();
    for i in 1..=3 {
        let beta = betas[i - 1];
        let d_i = d * beta.cos();
        let kc0 = kappa_b / (1.0 - kappa_b * d_i);
        if i == slack {
            cables.push(OracleCable {
                beta,
                d_i,
                theta0: 0.0,
                kappa_c: kc0,
                tension: 0.0,
                length: p.length * (1.0 - kappa_b * d_i),
                slack: true,
            });
            continue;
        }
        let target = m_star[active.iter().position(|&a| a == i).unwrap()];
        assert!(
            target >= -1e-12 * rhs.abs(),
            "active cable {i} would need negative moment {target}"
        );
        if target <= 1e-14 * rhs.abs() {
            cables.push(OracleCable {
                beta,
                d_i,
                theta0: 0.0,
                kappa_c: kc0,
                tension: 0.0,
                length: p.length * (1.0 - kappa_b * d_i),
                slack: false,
            });
            continue;
        }
        let m_of = |kc: f64| {
            let theta0 = theta0_of(kappa_b, d_i, alpha, kc);
            let tension = (p.cutting_stiffness / kc) * deformation_of(kappa_b, d_i, alpha, kc);
            tension * d * theta0.cos()
        };
        let g = |kc: f64| m_of(kc) - target;
        let mut lo = kc0 * 1e-6;
        while g(lo) < 0.0 {
            lo *= 0.1;
            assert!(lo > 1e-30, "no oracle bracket for cable {i}");
        }
        let kappa_c = solve_scalar_bisection(g, lo, kc0, 1e-15 * kc0).unwrap();
        let theta0 = theta0_of(kappa_b, d_i, alpha, kappa_c);
        let tension = (p.cutting_stiffness / kappa_c) * deformation_of(kappa_b, d_i, alpha, kappa_c);
        cables.push(OracleCable {
            beta,
            d_i,
            theta0,
            kappa_c,
            tension,
            length: (p.length * kappa_b - 2.0 * theta0) / kappa_c,
            slack: false,
        });
    }
    cables
}

/// Composite-Simpson integration of the transverse force density over the
/// wrapped arc, in the base frame: ∫ T·[−cos θ, −sin θ] dθ.
pub fn quad_equivalent_force(tension: f64, theta0: f64, phi_b: f64, intervals: usize) -> Vector2<f64> {
    assert!(intervals % 2 == 0);
    let a = theta0;
    let b = phi_b - theta0;
    let h = (b - a) / intervals as f64;
    let f = |theta: f64| tension * Vector2::new(-theta.cos(), -theta.sin());
    let mut sum = f(a) + f(b);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + k as f64 * h);
    }
    sum * (h / 3.0)
}

/// z-component of the planar cross product.
pub fn cross2(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

//! Small dense nonlinear-system solver and scalar bisection.
//!
//! The Newton solver uses a central finite-difference Jacobian and damps the
//! step by halving whenever the residual norm does not decrease. Bisection
//! is derivative-free and serves as the independent cross-check for Newton
//! results throughout the test suite.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::types::SolverSettings;

/// A square residual map r(x) with optional per-variable bounds.
///
/// The evaluation returns `Err` for trial points outside the map's domain
/// (for example an arcsine argument past 1); the solver treats such points
/// as rejected steps.
pub struct ResidualSystem<'a> {
    dim: usize,
    bounds: Vec<(f64, f64)>,
    eval: Box<dyn Fn(&DVector<f64>) -> Result<DVector<f64>> + 'a>,
}

impl<'a> ResidualSystem<'a> {
    pub fn new<F>(dim: usize, eval: F) -> Self
    where
        F: Fn(&DVector<f64>) -> Result<DVector<f64>> + 'a,
    {
        ResidualSystem {
            dim,
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); dim],
            eval: Box::new(eval),
        }
    }

    /// Replaces the variable bounds; iterates are projected onto them.
    pub fn with_bounds(mut self, bounds: Vec<(f64, f64)>) -> Self {
        assert_eq!(bounds.len(), self.dim);
        self.bounds = bounds;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let r = (self.eval)(x)?;
        debug_assert_eq!(r.len(), self.dim);
        Ok(r)
    }

    fn project(&self, x: &mut DVector<f64>) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.bounds.iter()) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

/// Result of a successful [`solve_system`] call.
#[derive(Debug, Clone)]
pub struct Solved {
    pub x: DVector<f64>,
    pub iterations: usize,
    pub residual_norm: f64,
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |m, a| m.max(a.abs()))
}

/// Damped Newton iteration with a finite-difference Jacobian.
///
/// Takes the full Newton step first, then halves it (up to 30 times) until
/// the residual norm decreases; iterates are projected onto the variable
/// bounds. Returns [`Error::NoConvergence`] with the best iterate when the
/// budget is exhausted or the step stagnates, and
/// [`Error::SingularJacobian`] when the linear solve fails.
pub fn solve_system(sys: &ResidualSystem, x0: &DVector<f64>, s: &SolverSettings) -> Result<Solved> {
    if x0.len() != sys.dim() {
        return Err(Error::InvalidInput(format!(
            "initial guess has length {}, system dimension is {}",
            x0.len(),
            sys.dim()
        )));
    }
    let mut x = x0.clone();
    sys.project(&mut x);
    let mut r = sys.eval(&x)?;
    let mut rnorm = inf_norm(&r);
    // The step is damped on the squared 2-norm merit; convergence is
    // declared on the infinity norm.
    let mut merit = r.norm_squared();
    let mut best_x = x.clone();
    let mut best_norm = rnorm;

    for iter in 0..s.max_iter {
        if rnorm < s.residual_tol {
            return Ok(Solved {
                x,
                iterations: iter,
                residual_norm: rnorm,
            });
        }

        let jac = match fd_jacobian(sys, &x, &r, s) {
            Ok(j) => j,
            Err(_) => break,
        };
        let neg_r = -&r;
        let delta = match jac.lu().solve(&neg_r) {
            Some(d) if d.iter().all(|v| v.is_finite()) => d,
            _ => return Err(Error::SingularJacobian),
        };

        let mut step = s.damping_init;
        let mut accepted = false;
        for _ in 0..30 {
            let mut cand = &x + &delta * step;
            sys.project(&mut cand);
            if let Ok(rc) = sys.eval(&cand) {
                let rcn = inf_norm(&rc);
                let mc = rc.norm_squared();
                if mc.is_finite() && (mc < merit || rcn < s.residual_tol) {
                    x = cand;
                    r = rc;
                    rnorm = rcn;
                    merit = mc;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        if rnorm < best_norm {
            best_norm = rnorm;
            best_x = x.clone();
        }
    }

    if rnorm < s.residual_tol {
        Ok(Solved {
            x,
            iterations: s.max_iter,
            residual_norm: rnorm,
        })
    } else {
        Err(Error::NoConvergence {
            best: best_x.iter().copied().collect(),
            residual_norm: best_norm,
            iterations: s.max_iter,
        })
    }
}

/// Central-difference Jacobian with per-variable step max(h, h·|x_j|).
///
/// Perturbed points are clamped to the bounds. If one side of a column
/// fails to evaluate, the one-sided difference through the center residual
/// is used; if both fail, the step shrinks and the column is retried.
fn fd_jacobian(
    sys: &ResidualSystem,
    x: &DVector<f64>,
    r_center: &DVector<f64>,
    s: &SolverSettings,
) -> Result<DMatrix<f64>> {
    let n = sys.dim();
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut h = s.fd_step.max(s.fd_step * x[j].abs());
        let mut col = None;
        for _ in 0..8 {
            let (lo, hi) = sys.bounds[j];
            let xp_j = (x[j] + h).min(hi);
            let xm_j = (x[j] - h).max(lo);
            let mut xp = x.clone();
            xp[j] = xp_j;
            let mut xm = x.clone();
            xm[j] = xm_j;
            let rp = sys.eval(&xp).ok();
            let rm = sys.eval(&xm).ok();
            col = match (rp, rm) {
                (Some(rp), Some(rm)) if xp_j > xm_j => Some((rp - rm) / (xp_j - xm_j)),
                (Some(rp), _) if xp_j > x[j] => Some((rp - r_center) / (xp_j - x[j])),
                (_, Some(rm)) if xm_j < x[j] => Some((r_center - rm) / (x[j] - xm_j)),
                _ => None,
            };
            if col.is_some() {
                break;
            }
            h *= 0.25;
        }
        let col = col.ok_or_else(|| {
            Error::InvalidInput(format!("finite-difference column {j} failed to evaluate"))
        })?;
        jac.set_column(j, &col);
    }
    Ok(jac)
}

/// Bisection root finding on [lo, hi]; requires a sign change.
///
/// Brackets the root to a width ≤ tol and returns the interval midpoint.
/// Derivative-free, so it serves as an independent oracle for Newton
/// results.
pub fn solve_scalar_bisection<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidInput(
            "bisection needs lo < hi and tol > 0".into(),
        ));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::NoBracket { f_lo: fa, f_hi: fb });
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // interval at floating-point resolution
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

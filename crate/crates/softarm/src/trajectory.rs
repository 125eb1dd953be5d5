//! Reference trajectory generation for the tracking experiments.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parametric reference curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TrajectoryKind {
    /// Full circle traversed once over the duration, starting on the `u`
    /// axis of the plane spanned perpendicular to `normal`.
    Circle {
        center: [f64; 3],
        radius: f64,
        normal: [f64; 3],
    },
    /// Straight segment at constant velocity.
    Line { start: [f64; 3], end: [f64; 3] },
    /// Fixed point with zero velocity.
    Point { at: [f64; 3] },
}

/// A sampled reference trajectory specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySpec {
    #[serde(flatten)]
    pub kind: TrajectoryKind,
    /// Total duration (s).
    pub duration: f64,
    /// Sampling step Δt (s).
    pub dt: f64,
}

/// One sample of the reference: position and exact parametric velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub time: f64,
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
}

impl TrajectorySpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0) {
            return Err(Error::InvalidInput("trajectory duration must be > 0".into()));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidInput("trajectory Δt must be > 0".into()));
        }
        if let TrajectoryKind::Circle { radius, normal, .. } = self.kind {
            if !(radius > 0.0) {
                return Err(Error::InvalidInput("circle radius must be > 0".into()));
            }
            let n = Vector3::from(normal);
            if n.norm() < 1e-12 {
                return Err(Error::InvalidInput("circle normal must be nonzero".into()));
            }
        }
        Ok(())
    }
}

/// Orthonormal in-plane axes perpendicular to the given normal.
fn plane_axes(normal: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let n = normal.normalize();
    let seed = if n.z.abs() < 0.9 {
        Vector3::z()
    } else {
        Vector3::x()
    };
    let u = n.cross(&seed).normalize();
    let v = n.cross(&u);
    (u, v)
}

/// Densely samples the trajectory on [0, duration] inclusive, with
/// velocities from exact differentiation of the parametric curve.
pub fn gen_trajectory(spec: &TrajectorySpec) -> Result<Vec<TrajectorySample>> {
    spec.validate()?;
    let steps = (spec.duration / spec.dt).round().max(1.0) as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    match spec.kind {
        TrajectoryKind::Circle {
            center,
            radius,
            normal,
        } => {
            let c = Vector3::from(center);
            let (u, v) = plane_axes(&Vector3::from(normal));
            let omega = std::f64::consts::TAU / spec.duration;
            for k in 0..=steps {
                let t = k as f64 * spec.dt;
                let (s, co) = (omega * t).sin_cos();
                samples.push(TrajectorySample {
                    time: t,
                    position: c + radius * (co * u + s * v),
                    velocity: radius * omega * (-s * u + co * v),
                });
            }
        }
        TrajectoryKind::Line { start, end } => {
            let a = Vector3::from(start);
            let b = Vector3::from(end);
            let vel = (b - a) / spec.duration;
            for k in 0..=steps {
                let t = k as f64 * spec.dt;
                samples.push(TrajectorySample {
                    time: t,
                    position: a + vel * t,
                    velocity: vel,
                });
            }
        }
        TrajectoryKind::Point { at } => {
            let pos = Vector3::from(at);
            for k in 0..=steps {
                samples.push(TrajectorySample {
                    time: k as f64 * spec.dt,
                    position: pos,
                    velocity: Vector3::zeros(),
                });
            }
        }
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_samples_stay_on_circle() {
        let spec = TrajectorySpec {
            kind: TrajectoryKind::Circle {
                center: [1.0, -2.0, 10.0],
                radius: 5.0,
                normal: [0.0, 0.0, 1.0],
            },
            duration: 9.9,
            dt: 0.1,
        };
        let samples = gen_trajectory(&spec).unwrap();
        assert_eq!(samples.len(), 100);
        let c = Vector3::new(1.0, -2.0, 10.0);
        for s in &samples {
            assert!(((s.position - c).norm() - 5.0).abs() < 1e-12);
            // Velocity tangent to the circle.
            assert!((s.position - c).dot(&s.velocity).abs() < 1e-9);
        }
    }

    #[test]
    fn line_has_constant_velocity() {
        let spec = TrajectorySpec {
            kind: TrajectoryKind::Line {
                start: [0.0, 0.0, 18.0],
                end: [4.0, 2.0, 16.0],
            },
            duration: 2.0,
            dt: 0.1,
        };
        let samples = gen_trajectory(&spec).unwrap();
        let expect = Vector3::new(2.0, 1.0, -1.0);
        for s in &samples {
            assert!((s.velocity - expect).norm() < 1e-12);
        }
        assert!((samples.last().unwrap().position - Vector3::new(4.0, 2.0, 16.0)).norm() < 1e-12);
    }

    #[test]
    fn point_has_zero_velocity() {
        let spec = TrajectorySpec {
            kind: TrajectoryKind::Point {
                at: [0.5, 0.0, 20.0],
            },
            duration: 1.0,
            dt: 0.02,
        };
        let samples = gen_trajectory(&spec).unwrap();
        assert_eq!(samples.len(), 51);
        for s in &samples {
            assert_eq!(s.velocity, Vector3::zeros());
            assert_eq!(s.position, Vector3::new(0.5, 0.0, 20.0));
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        let bad = TrajectorySpec {
            kind: TrajectoryKind::Circle {
                center: [0.0; 3],
                radius: 0.0,
                normal: [0.0, 0.0, 1.0],
            },
            duration: 1.0,
            dt: 0.1,
        };
        assert!(gen_trajectory(&bad).is_err());
    }
}

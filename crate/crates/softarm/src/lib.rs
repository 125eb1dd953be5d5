//! Modeling library for cable-driven soft robotic arms.
//!
//! A tensioned actuation cable does not follow its ideal guide path: it
//! presses into the soft body of the arm, and the transverse deformation
//! changes how much cable must be pulled for a given bend. This crate
//! implements a nonlinear static model of that effect for sections driven
//! by one or many cables, a purely geometric baseline model for
//! comparison, constant-curvature kinematics of multi-section arms with
//! damped-least-squares inverse kinematics, parameter identification for
//! the two stiffness constants, and a simulation harness that plays
//! controller and plant models against each other on reference
//! trajectories.
//!
//! Units are fixed library-wide: centimeters, radians, Newtons. Degrees
//! are accepted only at the command-line boundary.
//!
//! The `examples/` directory has one runnable program per capability;
//! `softarm --help` lists the equivalent command-line entry points.

// Validations use `!(x > 0.0)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod identify;
pub mod kinematics;
pub mod nlsolve;
pub mod report;
pub mod sim;
pub mod statics;
pub mod trajectory;
pub mod types;

pub mod cli;

pub use error::{Error, Result};
pub use types::{
    deg_to_rad, normalize_angle, rad_to_deg, validate_params, wrap_angle, Arm, BendingConfig,
    CableArcGeometry, CableSolution, ModelKind, SectionParams, SolverSettings,
};

//! Static models of one cable-driven section: the single-cable model with
//! cable transverse deformation, its n-cable generalization with slack
//! selection, and the ideal-geometry baseline.

pub mod multi;
pub mod single;

pub use multi::{
    baseline_forward, baseline_inverse, cable_geometry, residual_multi, select_slack_cable,
    slack_set, solve_forward_multi, solve_inverse_multi, MultiCableState, MultiKnown,
};
pub use single::{
    equivalent_force, incident_angle, residual_single, single_cable_detail, solve_forward_single,
    solve_inverse_single, support_moment, tip_force, transverse_deformation,
    undeformed_cable_curvature, SingleCableDetail, SingleCableSolution, SingleKnown,
};

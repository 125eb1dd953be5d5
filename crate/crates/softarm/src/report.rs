//! CSV and JSON serialization of solver outputs.
//!
//! CSV columns are fixed per command and floating-point values are written
//! with 17 significant digits, so identical runs produce byte-identical
//! files.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinematics::{IkStep, Transform};
use crate::sim::{CompareRow, TrackingReport};
use crate::statics::MultiCableState;
use crate::trajectory::TrajectorySample;
use crate::types::BendingConfig;

/// 17-significant-digit scientific notation; round-trips any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn csv_line(fields: &[String]) -> String {
    fields.join(",")
}

/// Serializable view of a solved section state.
#[derive(Debug, Serialize)]
pub struct SectionStateOut {
    pub kappa_b: f64,
    pub gamma: f64,
    pub cables: Vec<CableOut>,
}

#[derive(Debug, Serialize)]
pub struct CableOut {
    pub cable: usize,
    pub length: f64,
    pub tension: f64,
    pub theta0: f64,
    pub kappa_c: f64,
    pub beta: f64,
    pub d_i: f64,
    pub slack: bool,
}

impl SectionStateOut {
    pub fn from_state(state: &MultiCableState) -> Self {
        SectionStateOut {
            kappa_b: state.config.curvature(),
            gamma: state.config.orientation(),
            cables: state
                .cables
                .iter()
                .enumerate()
                .map(|(i, c)| CableOut {
                    cable: i + 1,
                    length: c.length,
                    tension: c.tension,
                    theta0: c.incident_angle,
                    kappa_c: c.curvature,
                    beta: c.bend_offset_angle,
                    d_i: c.neutral_distance,
                    slack: c.slack,
                })
                .collect(),
        }
    }
}

pub fn csv_multi_state(state: &MultiCableState) -> String {
    let out = SectionStateOut::from_state(state);
    let mut lines =
        vec!["kappa_b,gamma,cable,length,tension,theta0,kappa_c,beta,d_i,slack".to_string()];
    for c in &out.cables {
        lines.push(csv_line(&[
            fmt_f64(out.kappa_b),
            fmt_f64(out.gamma),
            c.cable.to_string(),
            fmt_f64(c.length),
            fmt_f64(c.tension),
            fmt_f64(c.theta0),
            fmt_f64(c.kappa_c),
            fmt_f64(c.beta),
            fmt_f64(c.d_i),
            c.slack.to_string(),
        ]));
    }
    lines.join("\n") + "\n"
}

#[derive(Debug, Serialize)]
pub struct BaselineLengthsOut {
    pub kappa_b: f64,
    pub gamma: f64,
    pub lengths: Vec<f64>,
}

pub fn csv_baseline_lengths(cfg: &BendingConfig, lengths: &[f64]) -> String {
    let mut lines = vec!["kappa_b,gamma,cable,length".to_string()];
    for (i, &l) in lengths.iter().enumerate() {
        lines.push(csv_line(&[
            fmt_f64(cfg.curvature()),
            fmt_f64(cfg.orientation()),
            (i + 1).to_string(),
            fmt_f64(l),
        ]));
    }
    lines.join("\n") + "\n"
}

#[derive(Debug, Serialize)]
pub struct BaselineConfigOut {
    pub kappa_b: f64,
    pub gamma: f64,
    pub misfit: f64,
}

pub fn csv_baseline_config(cfg: &BendingConfig, misfit: f64) -> String {
    let mut lines = vec!["kappa_b,gamma,misfit".to_string()];
    lines.push(csv_line(&[
        fmt_f64(cfg.curvature()),
        fmt_f64(cfg.orientation()),
        fmt_f64(misfit),
    ]));
    lines.join("\n") + "\n"
}

#[derive(Debug, Serialize)]
pub struct FkOut {
    pub tip: [f64; 3],
    pub transform: Vec<Vec<f64>>,
}

impl FkOut {
    pub fn new(tip: nalgebra::Vector3<f64>, chain: &Transform) -> Self {
        let m = chain.matrix();
        FkOut {
            tip: [tip.x, tip.y, tip.z],
            transform: (0..4)
                .map(|r| (0..4).map(|c| m[(r, c)]).collect())
                .collect(),
        }
    }
}

pub fn csv_fk(out: &FkOut) -> String {
    let mut header = vec!["tip_x".into(), "tip_y".into(), "tip_z".into()];
    for r in 0..4 {
        for c in 0..4 {
            header.push(format!("m{r}{c}"));
        }
    }
    let mut fields: Vec<String> = out.tip.iter().map(|&v| fmt_f64(v)).collect();
    for row in &out.transform {
        fields.extend(row.iter().map(|&v| fmt_f64(v)));
    }
    format!("{}\n{}\n", csv_line(&header), csv_line(&fields))
}

#[derive(Debug, Serialize)]
pub struct IkStepOut {
    pub t: f64,
    pub target: [f64; 3],
    pub error: f64,
    pub config: Vec<f64>,
}

pub fn ik_steps_out(steps: &[IkStep], samples: &[TrajectorySample]) -> Vec<IkStepOut> {
    steps
        .iter()
        .zip(samples.iter())
        .map(|(st, sa)| IkStepOut {
            t: st.time,
            target: [sa.position.x, sa.position.y, sa.position.z],
            error: st.error_norm,
            config: st.config.as_vector().iter().copied().collect(),
        })
        .collect()
}

pub fn csv_ik_steps(rows: &[IkStepOut], sections: usize) -> String {
    let mut header = vec![
        "t".to_string(),
        "xd_x".to_string(),
        "xd_y".to_string(),
        "xd_z".to_string(),
        "err".to_string(),
    ];
    for i in 1..=sections {
        header.push(format!("gamma_{i}"));
        header.push(format!("kappa_{i}"));
    }
    let mut lines = vec![csv_line(&header)];
    for row in rows {
        let mut fields = vec![
            fmt_f64(row.t),
            fmt_f64(row.target[0]),
            fmt_f64(row.target[1]),
            fmt_f64(row.target[2]),
            fmt_f64(row.error),
        ];
        fields.extend(row.config.iter().map(|&v| fmt_f64(v)));
        lines.push(csv_line(&fields));
    }
    lines.join("\n") + "\n"
}

pub fn csv_tracking(report: &TrackingReport, sections: usize, cables: usize) -> String {
    let mut header = vec![
        "t".to_string(),
        "xd_x".to_string(),
        "xd_y".to_string(),
        "xd_z".to_string(),
        "x_x".to_string(),
        "x_y".to_string(),
        "x_z".to_string(),
        "err".to_string(),
    ];
    for i in 1..=sections {
        header.push(format!("gamma_{i}"));
        header.push(format!("kappa_{i}"));
    }
    for i in 1..=sections {
        for c in 1..=cables {
            header.push(format!("l_{i}_{c}"));
        }
    }
    let mut lines = vec![csv_line(&header)];
    for s in &report.steps {
        let mut fields = vec![fmt_f64(s.time)];
        fields.extend(s.target.iter().map(|&v| fmt_f64(v)));
        fields.extend(s.achieved.iter().map(|&v| fmt_f64(v)));
        fields.push(fmt_f64(s.error));
        fields.extend(s.config.iter().map(|&v| fmt_f64(v)));
        fields.extend(s.cable_lengths.iter().map(|&v| fmt_f64(v)));
        lines.push(csv_line(&fields));
    }
    lines.join("\n") + "\n"
}

pub fn csv_compare(rows: &[CompareRow]) -> String {
    let mut lines =
        vec!["phi_b,gamma,cable,l_proposed,l_baseline,tension,theta0,status".to_string()];
    for r in rows {
        lines.push(csv_line(&[
            fmt_f64(r.phi_b),
            fmt_f64(r.gamma),
            r.cable.to_string(),
            fmt_opt(r.l_proposed),
            fmt_f64(r.l_baseline),
            fmt_opt(r.tension),
            fmt_opt(r.theta0),
            r.status.clone(),
        ]));
    }
    lines.join("\n") + "\n"
}

#[derive(Debug, Serialize)]
pub struct KbOut {
    #[serde(rename = "K_b")]
    pub k_b: f64,
    pub groups: usize,
    pub warnings: Vec<String>,
}

pub fn csv_kb(out: &KbOut) -> String {
    format!(
        "K_b,groups\n{},{}\n",
        fmt_f64(out.k_b),
        out.groups
    )
}

#[derive(Debug, Serialize)]
pub struct KcOut {
    #[serde(rename = "K_c")]
    pub k_c: f64,
    pub groups: usize,
    pub sse: f64,
}

pub fn csv_kc(out: &KcOut) -> String {
    format!(
        "K_c,groups,sse\n{},{},{}\n",
        fmt_f64(out.k_c),
        out.groups,
        fmt_f64(out.sse)
    )
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Io(format!("json serialization failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_17_significant_digits() {
        let s = fmt_f64(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        let back: f64 = s.parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn float_format_roundtrips_extremes() {
        for &x in &[1e-300, -2.5e300, 0.1, -0.0, 123456.789] {
            let back: f64 = fmt_f64(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}

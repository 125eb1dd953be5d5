//! Command-line front end. Angles cross this boundary in degrees and are
//! converted to radians immediately; all file formats stay in radians and
//! cm-based units.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::identify::{identify_kb, identify_kc, BendSample};
use crate::kinematics::{forward_kinematics, ik_track, ArmConfig};
use crate::report;
use crate::sim::{compare_models, simulate_tracking};
use crate::statics::{baseline_forward, baseline_inverse, solve_forward_multi, solve_inverse_multi};
use crate::trajectory::{gen_trajectory, TrajectoryKind, TrajectorySpec};
use crate::types::{Arm, BendingConfig, ModelKind};

#[derive(Debug, Parser)]
#[command(
    name = "softarm",
    version,
    about = "Statics, kinematics and tracking simulation for cable-driven soft arms"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Proposed,
    Baseline,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> ModelKind {
        match m {
            ModelArg::Proposed => ModelKind::Proposed,
            ModelArg::Baseline => ModelKind::Baseline,
        }
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Configuration file (TOML); prototype section and default settings
    /// when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct TrajectoryArgs {
    /// Trajectory kind.
    #[arg(long, value_parser = ["circle", "line", "point"])]
    kind: String,
    /// Circle center, cm (x,y,z).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Option<Vec<f64>>,
    /// Circle radius, cm.
    #[arg(long)]
    radius: Option<f64>,
    /// Circle plane normal (x,y,z).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    normal: Option<Vec<f64>>,
    /// Line start, cm (x,y,z).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    start: Option<Vec<f64>>,
    /// Line end, cm (x,y,z).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    end: Option<Vec<f64>>,
    /// Point target, cm (x,y,z).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    at: Option<Vec<f64>>,
    /// Duration, s.
    #[arg(long)]
    duration: f64,
    /// Sample step, s; the IK integration step from the config when
    /// omitted.
    #[arg(long)]
    dt: Option<f64>,
}

impl TrajectoryArgs {
    fn to_spec(&self, default_dt: f64) -> Result<TrajectorySpec> {
        let vec3 = |v: &Option<Vec<f64>>, name: &str| -> Result<[f64; 3]> {
            let v = v
                .as_ref()
                .ok_or_else(|| Error::InvalidInput(format!("--{name} is required")))?;
            if v.len() != 3 {
                return Err(Error::InvalidInput(format!(
                    "--{name} needs three comma-separated values"
                )));
            }
            Ok([v[0], v[1], v[2]])
        };
        let kind = match self.kind.as_str() {
            "circle" => TrajectoryKind::Circle {
                center: vec3(&self.center, "center")?,
                radius: self
                    .radius
                    .ok_or_else(|| Error::InvalidInput("--radius is required".into()))?,
                normal: match &self.normal {
                    Some(v) if v.len() == 3 => [v[0], v[1], v[2]],
                    Some(_) => {
                        return Err(Error::InvalidInput(
                            "--normal needs three comma-separated values".into(),
                        ))
                    }
                    None => [0.0, 0.0, 1.0],
                },
            },
            "line" => TrajectoryKind::Line {
                start: vec3(&self.start, "start")?,
                end: vec3(&self.end, "end")?,
            },
            "point" => TrajectoryKind::Point {
                at: vec3(&self.at, "at")?,
            },
            other => return Err(Error::InvalidInput(format!("unknown kind {other}"))),
        };
        let spec = TrajectorySpec {
            kind,
            duration: self.duration,
            dt: self.dt.unwrap_or(default_dt),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cable lengths → bending configuration of one section.
    SolveForward {
        /// Commanded cable lengths, cm (comma separated, one per cable).
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<f64>,
        /// Section model.
        #[arg(long, value_enum, default_value = "proposed")]
        model: ModelArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Bending configuration → cable lengths of one section.
    SolveInverse {
        /// Bend angle φ_b in degrees.
        #[arg(long)]
        phi_deg: f64,
        /// Bending orientation γ in degrees.
        #[arg(long, default_value_t = 0.0)]
        gamma_deg: f64,
        #[arg(long, value_enum, default_value = "proposed")]
        model: ModelArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Ideal-geometry model in either direction: give --phi-deg for the
    /// inverse mapping or --lengths for the forward fit.
    Baseline {
        #[arg(long)]
        phi_deg: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        gamma_deg: f64,
        #[arg(long, value_delimiter = ',')]
        lengths: Option<Vec<f64>>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Forward kinematics of the arm tip for per-section bend angles and
    /// orientations.
    Fk {
        /// Per-section bend angles φ_b in degrees.
        #[arg(long, value_delimiter = ',', required = true)]
        phis_deg: Vec<f64>,
        /// Per-section orientations γ in degrees.
        #[arg(long, value_delimiter = ',', required = true)]
        gammas_deg: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Closed-loop inverse-kinematics tracking of a reference trajectory;
    /// emits per-step configurations and errors.
    IkTrack {
        #[command(flatten)]
        traj: TrajectoryArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Simulated tracking experiment: IK, controller-model cable commands,
    /// plant-model response.
    Simulate {
        #[command(flatten)]
        traj: TrajectoryArgs,
        #[arg(long, value_enum, default_value = "proposed")]
        plant: ModelArg,
        #[arg(long, value_enum, default_value = "proposed")]
        controller: ModelArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Proposed vs baseline inverse solutions over a (φ_b, γ) grid.
    Compare {
        /// Bend-angle grid in degrees.
        #[arg(long, value_delimiter = ',', required = true)]
        phi_deg: Vec<f64>,
        /// Orientation grid in degrees.
        #[arg(long, value_delimiter = ',', required = true)]
        gamma_deg: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Identify the bending stiffness from a tension/bend-angle CSV
    /// (columns: phi_b, T, replicate; radians and Newtons).
    IdentifyKb {
        /// Sample CSV path.
        #[arg(long)]
        samples: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Identify the cutting-in stiffness from a contraction/bend-angle CSV
    /// (columns: phi_b, delta_l, replicate; radians and cm).
    IdentifyKc {
        #[arg(long)]
        samples: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn load_config(common: &CommonArgs) -> Result<Config> {
    match &common.config {
        Some(path) => Config::load(path),
        None => Ok(Config::default()),
    }
}

fn write_output(common: &CommonArgs, payload: &str) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn parse_samples(path: &Path) -> Result<Vec<BendSample>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 && line.chars().next().is_some_and(|c| c.is_alphabetic()) {
            continue; // header
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 2 {
            return Err(Error::Config(format!(
                "{}:{}: expected phi_b,value[,replicate]",
                path.display(),
                lineno + 1
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|e| {
                Error::Config(format!("{}:{}: bad number {s}: {e}", path.display(), lineno + 1))
            })
        };
        samples.push(BendSample {
            phi_b: parse(fields[0])?,
            value: parse(fields[1])?,
            replicate: fields
                .get(2)
                .map(|s| s.parse::<u32>().unwrap_or(0))
                .unwrap_or(0),
        });
    }
    Ok(samples)
}

fn section_config_deg(cfg: &Config, phi_deg: f64, gamma_deg: f64) -> Result<BendingConfig> {
    let phi = phi_deg.to_radians();
    if !(0.0..=180.0 + 1e-9).contains(&phi_deg) {
        return Err(Error::InvalidInput(format!(
            "bend angle {phi_deg}° outside [0°, 180°]"
        )));
    }
    BendingConfig::new(phi / cfg.section.length, gamma_deg.to_radians())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SolveForward {
            lengths,
            model,
            common,
        } => {
            let cfg = load_config(&common)?;
            match ModelKind::from(model) {
                ModelKind::Proposed => {
                    let state = solve_forward_multi(&lengths, &cfg.section, &cfg.solver)?;
                    let payload = match common.format {
                        FormatArg::Csv => report::csv_multi_state(&state),
                        FormatArg::Json => {
                            report::to_json(&report::SectionStateOut::from_state(&state))?
                        }
                    };
                    write_output(&common, &payload)
                }
                ModelKind::Baseline => {
                    let (bc, misfit) = baseline_forward(&lengths, &cfg.section)?;
                    let payload = match common.format {
                        FormatArg::Csv => report::csv_baseline_config(&bc, misfit),
                        FormatArg::Json => report::to_json(&report::BaselineConfigOut {
                            kappa_b: bc.curvature(),
                            gamma: bc.orientation(),
                            misfit,
                        })?,
                    };
                    write_output(&common, &payload)
                }
            }
        }
        Command::SolveInverse {
            phi_deg,
            gamma_deg,
            model,
            common,
        } => {
            let cfg = load_config(&common)?;
            let bc = section_config_deg(&cfg, phi_deg, gamma_deg)?;
            match ModelKind::from(model) {
                ModelKind::Proposed => {
                    let state = solve_inverse_multi(&bc, &cfg.section, &cfg.solver)?;
                    let payload = match common.format {
                        FormatArg::Csv => report::csv_multi_state(&state),
                        FormatArg::Json => {
                            report::to_json(&report::SectionStateOut::from_state(&state))?
                        }
                    };
                    write_output(&common, &payload)
                }
                ModelKind::Baseline => {
                    let lengths = baseline_inverse(&bc, &cfg.section)?;
                    let payload = match common.format {
                        FormatArg::Csv => report::csv_baseline_lengths(&bc, &lengths),
                        FormatArg::Json => report::to_json(&report::BaselineLengthsOut {
                            kappa_b: bc.curvature(),
                            gamma: bc.orientation(),
                            lengths,
                        })?,
                    };
                    write_output(&common, &payload)
                }
            }
        }
        Command::Baseline {
            phi_deg,
            gamma_deg,
            lengths,
            common,
        } => {
            let cfg = load_config(&common)?;
            match (phi_deg, lengths) {
                (Some(phi), None) => {
                    let bc = section_config_deg(&cfg, phi, gamma_deg)?;
                    let lengths = baseline_inverse(&bc, &cfg.section)?;
                    let payload = match common.format {
                        FormatArg::Csv => report::csv_baseline_lengths(&bc, &lengths),
                        FormatArg::Json => report::to_json(&report::BaselineLengthsOut {
                            kappa_b: bc.curvature(),
                            gamma: bc.orientation(),
                            lengths,
                        })?,
                    };
                    write_output(&common, &payload)
                }
                (None, Some(ls)) => {
                    let (bc, misfit) = baseline_forward(&ls, &cfg.section)?;
                    let payload = match common.format {
                        FormatArg::Csv => report::csv_baseline_config(&bc, misfit),
                        FormatArg::Json => report::to_json(&report::BaselineConfigOut {
                            kappa_b: bc.curvature(),
                            gamma: bc.orientation(),
                            misfit,
                        })?,
                    };
                    write_output(&common, &payload)
                }
                _ => Err(Error::InvalidInput(
                    "give exactly one of --phi-deg (inverse) or --lengths (forward)".into(),
                )),
            }
        }
        Command::Fk {
            phis_deg,
            gammas_deg,
            common,
        } => {
            let cfg = load_config(&common)?;
            if phis_deg.len() != gammas_deg.len() {
                return Err(Error::InvalidInput(
                    "--phis-deg and --gammas-deg must have the same length".into(),
                ));
            }
            let arm = Arm::uniform(cfg.section, phis_deg.len())?;
            let mut q = DVector::zeros(2 * phis_deg.len());
            for (i, (&phi, &gamma)) in phis_deg.iter().zip(&gammas_deg).enumerate() {
                let bc = section_config_deg(&cfg, phi, gamma)?;
                q[2 * i] = bc.orientation();
                q[2 * i + 1] = bc.curvature();
            }
            let q = ArmConfig::from_vector(q)?;
            let (tip, chain) = forward_kinematics(&arm, &q)?;
            let out = report::FkOut::new(tip, &chain);
            let payload = match common.format {
                FormatArg::Csv => report::csv_fk(&out),
                FormatArg::Json => report::to_json(&out)?,
            };
            write_output(&common, &payload)
        }
        Command::IkTrack { traj, common } => {
            let cfg = load_config(&common)?;
            let ik = cfg.ik_settings();
            let spec = traj.to_spec(ik.dt)?;
            let samples = gen_trajectory(&spec)?;
            let arm = cfg.arm()?;
            let q0 = ArmConfig::straight(arm.section_count());
            let steps = ik_track(&samples, &q0, &arm, &ik)?;
            let rows = report::ik_steps_out(&steps, &samples);
            let payload = match common.format {
                FormatArg::Csv => report::csv_ik_steps(&rows, arm.section_count()),
                FormatArg::Json => report::to_json(&rows)?,
            };
            write_output(&common, &payload)
        }
        Command::Simulate {
            traj,
            plant,
            controller,
            common,
        } => {
            let cfg = load_config(&common)?;
            let ik = cfg.ik_settings();
            let spec = traj.to_spec(ik.dt)?;
            let arm = cfg.arm()?;
            let rep = simulate_tracking(
                &spec,
                plant.into(),
                controller.into(),
                &arm,
                &ik,
                &cfg.solver,
            )?;
            eprintln!(
                "mean error {:.6} cm, max error {:.6} cm over {} steps",
                rep.mean_error,
                rep.max_error,
                rep.steps.len()
            );
            let payload = match common.format {
                FormatArg::Csv => {
                    report::csv_tracking(&rep, arm.section_count(), cfg.section.cable_count)
                }
                FormatArg::Json => report::to_json(&rep)?,
            };
            write_output(&common, &payload)
        }
        Command::Compare {
            phi_deg,
            gamma_deg,
            common,
        } => {
            let cfg = load_config(&common)?;
            let phis: Vec<f64> = phi_deg.iter().map(|d| d.to_radians()).collect();
            let gammas: Vec<f64> = gamma_deg.iter().map(|d| d.to_radians()).collect();
            let rows = compare_models(&cfg.section, &phis, &gammas, &cfg.solver)?;
            let payload = match common.format {
                FormatArg::Csv => report::csv_compare(&rows),
                FormatArg::Json => report::to_json(&rows)?,
            };
            write_output(&common, &payload)
        }
        Command::IdentifyKb { samples, common } => {
            let cfg = load_config(&common)?;
            let data = parse_samples(&samples)?;
            let fit = identify_kb(&data, &cfg.section)?;
            for w in &fit.warnings {
                eprintln!("warning: {w}");
            }
            let out = report::KbOut {
                k_b: fit.value,
                groups: fit.groups,
                warnings: fit.warnings,
            };
            let payload = match common.format {
                FormatArg::Csv => report::csv_kb(&out),
                FormatArg::Json => report::to_json(&out)?,
            };
            write_output(&common, &payload)
        }
        Command::IdentifyKc { samples, common } => {
            let cfg = load_config(&common)?;
            let data = parse_samples(&samples)?;
            let fit = identify_kc(&data, &cfg.section, &cfg.solver)?;
            let out = report::KcOut {
                k_c: fit.value,
                groups: fit.groups,
                sse: fit.sse,
            };
            let payload = match common.format {
                FormatArg::Csv => report::csv_kc(&out),
                FormatArg::Json => report::to_json(&out)?,
            };
            write_output(&common, &payload)
        }
    }
}

/// Exit code classes: 0 success, 2 solver infeasibility or non-convergence,
/// 3 configuration and input errors.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. }
        | Error::SingularJacobian
        | Error::Infeasible { .. }
        | Error::ArcsinDomain { .. }
        | Error::NoBracket { .. }
        | Error::Diverged { .. } => 2,
        Error::AtStep { source, .. } => exit_code(source),
        Error::InvalidParams(_)
        | Error::InvalidInput(_)
        | Error::InsufficientData { .. }
        | Error::Config(_)
        | Error::Io(_) => 3,
    }
}

/// Parses the process arguments, runs the command, and returns the process
/// exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

//! TOML configuration file: arm layout, section constants, solver and IK
//! settings. Every table is optional and falls back to the prototype
//! section with default settings.

use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::IkSettings;
use crate::types::{Arm, SectionParams, SolverSettings};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ArmTable {
    /// Number of sections m.
    pub m: usize,
}

impl Default for ArmTable {
    fn default() -> Self {
        ArmTable { m: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IkTable {
    /// Damping constant k of the pseudo-inverse.
    pub k: f64,
    /// Diagonal of the feedback gain matrix (1/s).
    #[serde(rename = "K")]
    pub gain: [f64; 3],
    /// Integration step Δt (s).
    pub dt: f64,
    pub max_steps: usize,
    /// Point-solve tolerance (cm).
    pub target_tol: f64,
    pub delta_kappa: f64,
    pub diverge_bound: f64,
}

impl Default for IkTable {
    fn default() -> Self {
        let d = IkSettings::default();
        IkTable {
            k: d.damping,
            gain: [d.gain.x, d.gain.y, d.gain.z],
            dt: d.dt,
            max_steps: d.max_steps,
            target_tol: d.target_tol,
            delta_kappa: d.delta_kappa,
            diverge_bound: d.diverge_bound,
        }
    }
}

impl IkTable {
    pub fn to_settings(&self) -> IkSettings {
        IkSettings {
            damping: self.k,
            gain: Vector3::new(self.gain[0], self.gain[1], self.gain[2]),
            dt: self.dt,
            max_steps: self.max_steps,
            target_tol: self.target_tol,
            delta_kappa: self.delta_kappa,
            diverge_bound: self.diverge_bound,
            null_velocity: None,
        }
    }
}

/// Parsed configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub arm: ArmTable,
    pub section: SectionParams,
    pub solver: SolverSettings,
    pub ik: IkTable,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            arm: ArmTable::default(),
            section: SectionParams::prototype(),
            solver: SolverSettings::default(),
            ik: IkTable::default(),
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config> {
        let cfg: Config =
            toml::from_str(text).map_err(|e| Error::Config(format!("cannot parse config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.arm.m == 0 {
            return Err(Error::Config("arm.m must be ≥ 1".into()));
        }
        self.section
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.solver
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.ik
            .to_settings()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn arm(&self) -> Result<Arm> {
        Arm::uniform(self.section, self.arm.m)
    }

    pub fn ik_settings(&self) -> IkSettings {
        self.ik.to_settings()
    }
}

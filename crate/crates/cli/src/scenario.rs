//! Scenario files: JSON description of a run, with defaults matching the
//! reference deep-ocean setup.

use roguewave::model::{build_configuration, min_wavelength, solve_max_qref};
use roguewave::profiles::profile_extent;
use roguewave::{PhysicalConstants64, WaveConfig64};
use serde::Deserialize;
use std::path::Path;

use crate::CliError;

/// `q_ref` is either an explicit depth or the token `"max"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum QRef {
    Value(f64),
    Token(String),
}

impl Default for QRef {
    fn default() -> Self {
        QRef::Token("max".to_string())
    }
}

fn default_k() -> f64 {
    0.45
}
fn default_g() -> f64 {
    9.81
}
fn default_c_s() -> f64 {
    1647.0
}
fn default_n() -> u32 {
    25
}
fn default_t_end() -> f64 {
    1000.0
}
fn default_dt() -> f64 {
    1.0
}
fn default_x1() -> f64 {
    -5e4
}
// Wide enough that the junction (moving at roughly a_ref) stays inside the
// material window through the default horizon.
fn default_x2() -> f64 {
    2.5e5
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub q_star: f64,
    pub q_0: f64,
    #[serde(default)]
    pub q_ref: QRef,
    #[serde(default = "default_k")]
    pub k: f64,
    #[serde(default = "default_g")]
    pub g: f64,
    #[serde(default = "default_c_s")]
    pub c_s: f64,
    #[serde(default = "default_n")]
    pub n_interactions: u32,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub output_times: Option<Vec<f64>>,
    #[serde(default = "default_x1")]
    pub x1: f64,
    #[serde(default = "default_x2")]
    pub x2: f64,
    #[serde(default)]
    pub strict_admissibility: bool,
}

/// A parsed scenario with the configuration solved and the admissibility
/// verdict evaluated.
pub struct Resolved {
    pub file: ScenarioFile,
    pub config: WaveConfig64,
    pub lambda_min: f64,
    pub west_extent: f64,
    pub east_extent: f64,
    pub admissible: bool,
    /// SHA-256 of the scenario file bytes, for reproducibility reports.
    pub hash: String,
}

impl ScenarioFile {
    fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [
            ("q_star", self.q_star),
            ("q_0", self.q_0),
            ("k", self.k),
            ("g", self.g),
            ("c_s", self.c_s),
        ] {
            if !(v > 0.0) {
                return Err(CliError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.q_star < self.q_0) {
            return Err(CliError::Config(format!(
                "ordering violated: q_star < q_0 (got {} >= {})",
                self.q_star, self.q_0
            )));
        }
        if !(self.t_end >= 0.0) {
            return Err(CliError::Config(format!("t_end must be nonnegative, got {}", self.t_end)));
        }
        if !(self.dt > 0.0) {
            return Err(CliError::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.x1 < 0.0 && 0.0 < self.x2) {
            return Err(CliError::Config(format!(
                "material bracket must straddle the origin: x1 = {}, x2 = {}",
                self.x1, self.x2
            )));
        }
        Ok(())
    }

    /// Output times for `simulate`: explicit list, or every 100 s.
    pub fn output_times(&self) -> Vec<f64> {
        match &self.output_times {
            Some(ts) => ts.clone(),
            None => {
                let mut out = Vec::new();
                let mut t = 0.0;
                while t <= self.t_end + 1e-9 {
                    out.push(t);
                    t += 100.0;
                }
                out
            }
        }
    }
}

/// Load, solve, and admissibility-check a scenario file. `strict` promotes
/// an inadmissible construction from a warning to [`CliError::Admissibility`].
pub fn load(path: &Path, strict: bool) -> Result<Resolved, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let file: ScenarioFile = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Config(format!("invalid scenario {}: {e}", path.display())))?;
    file.validate()?;

    use sha2::{Digest, Sha256};
    let hash = format!("{:x}", Sha256::digest(&bytes));

    let consts = PhysicalConstants64 {
        g: file.g,
        c_s: file.c_s,
        k: file.k,
        n_interactions: file.n_interactions,
    };
    consts.validate().map_err(|e| CliError::Config(e.to_string()))?;

    let q_ref = match &file.q_ref {
        QRef::Value(v) => *v,
        QRef::Token(t) if t == "max" => solve_max_qref(file.q_star, file.q_0, &consts)
            .map_err(|e| CliError::Numerical(e.to_string()))?,
        QRef::Token(t) => {
            return Err(CliError::Config(format!("q_ref must be a depth or \"max\", got {t:?}")))
        }
    };
    let config = build_configuration(file.q_star, file.q_0, q_ref, &consts)
        .map_err(|e| CliError::Config(e.to_string()))?;

    let lambda_min = min_wavelength(file.q_star, file.n_interactions, &consts)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let west_extent = profile_extent(&config.west_branch(), &config)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let east_extent = profile_extent(&config.east_branch(), &config)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let admissible = west_extent >= lambda_min && east_extent >= lambda_min;

    if !admissible {
        let msg = format!(
            "profile extents (west {west_extent:.1} m, east {east_extent:.1} m) fall short of \
             the minimum wavelength {lambda_min:.1} m"
        );
        if strict || file.strict_admissibility {
            return Err(CliError::Admissibility(msg));
        }
        eprintln!("warning: {msg}");
    }

    Ok(Resolved {
        file,
        config,
        lambda_min,
        west_extent,
        east_extent,
        admissible,
        hash,
    })
}

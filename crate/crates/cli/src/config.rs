use std::path::{Path, PathBuf};

use serde::Deserialize;

use cubesurf::export::BeamProfile;
use cubesurf::optimizer::{AgentKind, SignMode};
use cubesurf::projection::ScreenFrom;

/// Settings read from a `--config` TOML file. Every key is optional; command-line
/// flags override them.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub state: Option<String>,
    pub s0: Option<String>,
    pub r: Option<f64>,
    pub c5: Option<f64>,
    pub c4: Option<f64>,
    pub screen_from: Option<ScreenFrom>,
    pub count_adjacent_edges: Option<bool>,
    pub sigma_prop: Option<usize>,
    pub sign_mode: Option<SignMode>,
    pub agent: Option<AgentKind>,
    pub seed: Option<u64>,
    pub seeds: Option<Vec<u64>>,
    pub budget: Option<String>,
    pub exploration: Option<f64>,
    pub learning_rate: Option<f64>,
    pub gamma: Option<f64>,
    pub weights: Option<[f64; 4]>,
    pub log: Option<PathBuf>,
    pub best_out: Option<PathBuf>,
    pub panels: Option<bool>,
    pub profile: Option<BeamProfile>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, crate::Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            crate::Failure::io(format!("cannot read config {}: {e}", path.display()))
        })?;
        toml::from_str(&text)
            .map_err(|e| crate::Failure::invalid(format!("config {}: {e}", path.display())))
    }
}

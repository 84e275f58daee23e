use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this total clearance the relative change in `L` is undefined.
pub const CLEARANCE_EPS: f64 = 1e-12;

/// How the difference quotients in the rewards are signed.
///
/// `Verbatim` uses the printed quotients, which are positive when counts grow.
/// `Corrected` flips them so that reducing intersections and overlaps is rewarded,
/// and rewards growth of the total clearance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignMode {
    Verbatim,
    #[default]
    Corrected,
}

impl fmt::Display for SignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignMode::Verbatim => "verbatim",
            SignMode::Corrected => "corrected",
        })
    }
}

impl FromStr for SignMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verbatim" => Ok(SignMode::Verbatim),
            "corrected" => Ok(SignMode::Corrected),
            other => Err(Error::InvalidConfig(format!(
                "unknown sign mode `{other}` (expected verbatim or corrected)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewardConfig {
    pub sigma_prop: usize,
    /// Beam radius; `None` derives it from the first initial scene.
    pub r: Option<f64>,
    pub gamma: f64,
    pub sign_mode: SignMode,
    pub weights: [f64; 4],
}

impl Default for RewardConfig {
    fn default() -> Self {
        RewardConfig {
            sigma_prop: 0,
            r: None,
            gamma: 0.9,
            sign_mode: SignMode::Corrected,
            weights: [1.0; 4],
        }
    }
}

impl RewardConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::InvalidConfig(format!(
                "discount must lie in [0, 1), got {}",
                self.gamma
            )));
        }
        if let Some(r) = self.r {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "beam radius must be positive, got {r}"
                )));
            }
        }
        if self.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidConfig("reward weights must be finite".into()));
        }
        Ok(())
    }
}

fn target_bonus(sigma_next: usize, sigma_prop: usize) -> f64 {
    10.0 * (1.0 - sigma_next as f64 + sigma_prop as f64)
}

/// Intersection reward from `Sigma(s)` to `Sigma(s')`.
pub fn reward_r1(sigma: usize, sigma_next: usize, cfg: &RewardConfig) -> f64 {
    if sigma_next <= cfg.sigma_prop {
        return target_bonus(sigma_next, cfg.sigma_prop);
    }
    let denom = sigma.max(1) as f64;
    let (now, next) = (sigma as f64, sigma_next as f64);
    match cfg.sign_mode {
        SignMode::Verbatim => (next - now) / denom,
        SignMode::Corrected => (now - next) / denom,
    }
}

/// Overlap reward, active only once intersections are at or below the target.
pub fn reward_r2(
    overlaps: usize,
    overlaps_next: usize,
    sigma_next: usize,
    cfg: &RewardConfig,
) -> f64 {
    if sigma_next > cfg.sigma_prop {
        return 0.0;
    }
    if overlaps == 0 {
        return target_bonus(sigma_next, cfg.sigma_prop);
    }
    let (now, next) = (overlaps as f64, overlaps_next as f64);
    match cfg.sign_mode {
        SignMode::Verbatim => (next - now) / now,
        SignMode::Corrected => (now - next) / now,
    }
}

/// Relative change of the total clearance.
pub fn reward_r3(l: f64, l_next: f64, mode: SignMode) -> Result<f64> {
    if l <= CLEARANCE_EPS {
        return Err(Error::ZeroClearanceTotal);
    }
    Ok(match mode {
        SignMode::Verbatim => (l - l_next) / l,
        SignMode::Corrected => (l_next - l) / l,
    })
}

/// 1 when `l` sets a new record against every earlier value: a strict minimum in
/// verbatim mode, a strict maximum in corrected mode. 0 for an empty history.
pub fn reward_r4(l: f64, history: &[f64], mode: SignMode) -> f64 {
    if history.is_empty() {
        return 0.0;
    }
    let record = match mode {
        SignMode::Verbatim => l < history.iter().copied().fold(f64::INFINITY, f64::min),
        SignMode::Corrected => l > history.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    };
    if record {
        1.0
    } else {
        0.0
    }
}

/// Weighted components and their sum.
pub fn total_reward(components: [f64; 4], weights: &[f64; 4]) -> ([f64; 4], f64) {
    let mut weighted = [0.0; 4];
    for i in 0..4 {
        weighted[i] = components[i] * weights[i];
    }
    (weighted, weighted.iter().sum())
}

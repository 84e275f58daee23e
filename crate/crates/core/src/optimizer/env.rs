use serde::{Deserialize, Serialize};

use crate::complex::CubicalComplex;
use crate::error::{Error, Result};
use crate::metrics::{MetricsPlan, WidthConfig};
use crate::projection::{apply_state, wrap_state, EmbeddingState, ProjectionConstants};

use super::reward::{reward_r1, reward_r2, reward_r3, reward_r4, total_reward, RewardConfig};

/// Reward for a rejected step.
pub const PENALTY: f64 = -1.0;

/// The 24 unit moves: `+/-delta` on each camera distance, then `+/-epsilon` on each angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionSet {
    pub delta: f64,
    pub epsilon: f64,
}

impl Default for ActionSet {
    fn default() -> Self {
        ActionSet {
            delta: 0.5,
            epsilon: std::f64::consts::PI / 180.0,
        }
    }
}

impl ActionSet {
    pub const LEN: usize = 24;

    pub fn len(&self) -> usize {
        Self::LEN
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Action `i` as a vector in `R^12`.
    pub fn vector(&self, i: usize) -> [f64; 12] {
        assert!(i < Self::LEN, "action index {i} out of range");
        let axis = i / 2;
        let step = if axis < 2 { self.delta } else { self.epsilon };
        let mut v = [0.0; 12];
        v[axis] = if i.is_multiple_of(2) { step } else { -step };
        v
    }

    /// `wrap_state(s + a_i)`.
    pub fn apply(&self, s: &EmbeddingState, i: usize) -> EmbeddingState {
        let mut v = s.to_vector();
        for (x, a) in v.iter_mut().zip(self.vector(i)) {
            *x += a;
        }
        wrap_state(&EmbeddingState::from_vector(&v))
    }
}

/// Counts and clearance of one state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    pub sigma: usize,
    pub overlaps: usize,
    #[serde(rename = "L")]
    pub l: f64,
}

/// One line of the episode log. Reward components are logged after weighting, so
/// `r1 + r2 + r3 + r4 + penalty == reward`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    #[serde(default)]
    pub episode: usize,
    pub t: usize,
    pub action_index: usize,
    pub state: EmbeddingState,
    pub sigma: usize,
    pub overlaps: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    pub reward: f64,
    pub penalty: f64,
}

impl StepRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

/// Result of trying an action without committing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub action_index: usize,
    /// Next state; equal to the current state when the step is rejected.
    pub state: EmbeddingState,
    pub measures: Measures,
    pub components: [f64; 4],
    pub penalty: f64,
    pub reward: f64,
}

impl Outcome {
    pub fn rejected(&self) -> bool {
        self.penalty != 0.0
    }
}

/// Deterministic environment over embedding states of a fixed complex.
#[derive(Clone, Debug)]
pub struct MdpEnv {
    complex: CubicalComplex,
    plan: MetricsPlan,
    constants: ProjectionConstants,
    reward: RewardConfig,
    width: WidthConfig,
    actions: ActionSet,
    state: EmbeddingState,
    measures: Measures,
    l_history: Vec<f64>,
    log: Vec<StepRecord>,
}

impl MdpEnv {
    /// Starts an episode at `s0`. The beam radius is `reward.r` if set, otherwise
    /// 2% of the bounding-box diagonal of the projection at `s0`.
    pub fn new(
        complex: &CubicalComplex,
        constants: ProjectionConstants,
        reward: RewardConfig,
        s0: &EmbeddingState,
    ) -> Result<Self> {
        reward.validate()?;
        let invalid = |e: Error| Error::InvalidInitialState(e.to_string());
        let s0 = wrap_state(s0);
        let scene = apply_state(complex, &s0, &constants).map_err(invalid)?;
        let width = match reward.r {
            Some(r) => WidthConfig::new(r)?,
            None => WidthConfig::relative_to(&scene).map_err(invalid)?,
        };
        let plan = MetricsPlan::new(complex);
        let mut env = MdpEnv {
            complex: complex.clone(),
            plan,
            constants,
            reward,
            width,
            actions: ActionSet::default(),
            state: s0,
            measures: Measures {
                sigma: 0,
                overlaps: 0,
                l: 0.0,
            },
            l_history: Vec::new(),
            log: Vec::new(),
        };
        env.measures = env.measure(&s0).map_err(invalid)?;
        if env.measures.l <= super::reward::CLEARANCE_EPS {
            return Err(Error::InvalidInitialState(
                Error::ZeroClearanceTotal.to_string(),
            ));
        }
        env.l_history.push(env.measures.l);
        Ok(env)
    }

    pub fn with_actions(mut self, actions: ActionSet) -> Self {
        self.actions = actions;
        self
    }

    /// Restarts at `s0` with an empty history, keeping the beam radius.
    pub fn reset(&mut self, s0: &EmbeddingState) -> Result<()> {
        let s0 = wrap_state(s0);
        let m = self
            .measure(&s0)
            .map_err(|e| Error::InvalidInitialState(e.to_string()))?;
        if m.l <= super::reward::CLEARANCE_EPS {
            return Err(Error::InvalidInitialState(
                Error::ZeroClearanceTotal.to_string(),
            ));
        }
        self.state = s0;
        self.measures = m;
        self.l_history.clear();
        self.l_history.push(m.l);
        self.log.clear();
        Ok(())
    }

    pub fn measure(&self, s: &EmbeddingState) -> Result<Measures> {
        let scene = apply_state(&self.complex, s, &self.constants)?;
        let faces = self.plan.face_intersections(&scene, &self.complex)?;
        let (edges, l) = self
            .plan
            .edge_measures(&scene, &self.complex, &self.width)?;
        Ok(Measures {
            sigma: faces.len(),
            overlaps: edges.len(),
            l,
        })
    }

    /// Evaluates action `i` from the current state. Pure.
    pub fn preview(&self, i: usize) -> Outcome {
        let next = self.actions.apply(&self.state, i);
        let scored = self.measure(&next).and_then(|m| {
            let cfg = &self.reward;
            let r3 = reward_r3(self.measures.l, m.l, cfg.sign_mode)?;
            let parts = [
                reward_r1(self.measures.sigma, m.sigma, cfg),
                reward_r2(self.measures.overlaps, m.overlaps, m.sigma, cfg),
                r3,
                reward_r4(m.l, &self.l_history, cfg.sign_mode),
            ];
            Ok((m, parts))
        });
        match scored {
            Ok((m, parts)) => {
                let (weighted, total) = total_reward(parts, &self.reward.weights);
                Outcome {
                    action_index: i,
                    state: next,
                    measures: m,
                    components: weighted,
                    penalty: 0.0,
                    reward: total,
                }
            }
            Err(_) => Outcome {
                action_index: i,
                state: self.state,
                measures: self.measures,
                components: [0.0; 4],
                penalty: PENALTY,
                reward: PENALTY,
            },
        }
    }

    /// Takes action `i`: guard or degeneracy failures leave the state unchanged and
    /// earn the fixed penalty.
    pub fn step(&mut self, i: usize) -> &StepRecord {
        let outcome = self.preview(i);
        self.commit(outcome)
    }

    /// Applies a previewed outcome.
    pub fn commit(&mut self, o: Outcome) -> &StepRecord {
        if !o.rejected() {
            self.state = o.state;
            self.measures = o.measures;
        }
        self.l_history.push(self.measures.l);
        let t = self.log.len();
        self.log.push(StepRecord {
            episode: 0,
            t,
            action_index: o.action_index,
            state: self.state,
            sigma: self.measures.sigma,
            overlaps: self.measures.overlaps,
            l: self.measures.l,
            r1: o.components[0],
            r2: o.components[1],
            r3: o.components[2],
            r4: o.components[3],
            reward: o.reward,
            penalty: o.penalty,
        });
        self.log.last().expect("just pushed")
    }

    pub fn state(&self) -> &EmbeddingState {
        &self.state
    }

    pub fn measures(&self) -> Measures {
        self.measures
    }

    pub fn width(&self) -> WidthConfig {
        self.width
    }

    pub fn constants(&self) -> &ProjectionConstants {
        &self.constants
    }

    pub fn reward_config(&self) -> &RewardConfig {
        &self.reward
    }

    pub fn complex(&self) -> &CubicalComplex {
        &self.complex
    }

    pub fn plan(&self) -> &MetricsPlan {
        &self.plan
    }

    pub fn actions(&self) -> &ActionSet {
        &self.actions
    }

    pub fn log(&self) -> &[StepRecord] {
        &self.log
    }
}

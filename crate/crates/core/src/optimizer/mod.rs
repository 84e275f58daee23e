//! Embedding search as a deterministic MDP over [`EmbeddingState`]s: 24 unit moves,
//! four reward terms, and two seeded agents.

mod env;
mod reward;

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::CubicalComplex;
use crate::error::{Error, Result};
use crate::metrics::{MetricsReport, WidthConfig};
use crate::projection::{apply_state, EmbeddingState, ProjectionConstants, WORLD_RADIUS};

pub use env::{ActionSet, MdpEnv, Measures, Outcome, StepRecord, PENALTY};
pub use reward::{
    reward_r1, reward_r2, reward_r3, reward_r4, total_reward, RewardConfig, SignMode, CLEARANCE_EPS,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    #[default]
    #[serde(alias = "greedy-lookahead")]
    GreedyLookahead,
    #[serde(alias = "q-learning")]
    QLearning,
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AgentKind::GreedyLookahead => "greedy_lookahead",
            AgentKind::QLearning => "q_learning",
        })
    }
}

impl FromStr for AgentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "greedy_lookahead" | "greedy" => Ok(AgentKind::GreedyLookahead),
            "q_learning" | "q" => Ok(AgentKind::QLearning),
            other => Err(Error::InvalidConfig(format!(
                "unknown agent `{other}` (expected greedy_lookahead or q_learning)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentPolicy {
    pub kind: AgentKind,
    /// Probability of a uniformly random action.
    pub exploration: f64,
    /// Step size of the temporal-difference update (q_learning only).
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for AgentPolicy {
    fn default() -> Self {
        AgentPolicy {
            kind: AgentKind::GreedyLookahead,
            exploration: 0.1,
            learning_rate: 0.01,
            seed: 0,
        }
    }
}

impl AgentPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.exploration) {
            return Err(Error::InvalidConfig(format!(
                "exploration must lie in [0, 1], got {}",
                self.exploration
            )));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub episodes: usize,
    pub steps: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            episodes: 64,
            steps: 512,
        }
    }
}

impl Budget {
    pub fn total(&self) -> usize {
        self.episodes * self.steps
    }
}

/// Accepts `EPISODESxSTEPS` or a plain total step count (one episode).
impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidConfig(format!(
                "bad budget `{s}` (expected EPISODESxSTEPS or STEPS)"
            ))
        };
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let b = match s.split_once(['x', 'X']) {
            Some((e, n)) => Budget {
                episodes: parse(e)?,
                steps: parse(n)?,
            },
            None => Budget {
                episodes: 1,
                steps: parse(s)?,
            },
        };
        if b.episodes == 0 || b.steps == 0 {
            return Err(bad());
        }
        Ok(b)
    }
}

/// Initial-state distribution: `d5 = c5 + sqrt(5)/2 + 1`, `d4 = c4/2 + sqrt(5)`, angles
/// uniform in `[0, 2pi)`.
pub fn sample_initial_state(k: &ProjectionConstants, rng: &mut impl Rng) -> EmbeddingState {
    let mut phi = [0.0; 10];
    for a in phi.iter_mut() {
        *a = rng.random_range(0.0..TAU);
    }
    EmbeddingState::new(
        k.c5 + WORLD_RADIUS + 1.0,
        k.c4 / 2.0 + 2.0 * WORLD_RADIUS,
        phi,
    )
}

/// True when `a` ranks ahead of `b`: fewer intersections, then fewer overlaps, then
/// larger clearance (smaller in verbatim mode).
pub fn ranks_before(a: &Measures, b: &Measures, mode: SignMode) -> bool {
    use std::cmp::Ordering::*;
    match (a.sigma, a.overlaps).cmp(&(b.sigma, b.overlaps)) {
        Less => true,
        Greater => false,
        Equal => match mode {
            SignMode::Corrected => a.l > b.l,
            SignMode::Verbatim => a.l < b.l,
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizeResult {
    pub best_state: EmbeddingState,
    pub best_measures: Measures,
    pub best_report: MetricsReport,
    pub width: WidthConfig,
    pub initial_states: Vec<EmbeddingState>,
    pub log: Vec<StepRecord>,
    /// The best state meets `Sigma <= sigma_prop` with no overlaps.
    pub reached_target: bool,
}

const FEATURES: usize = 23;

fn features(s: &EmbeddingState, k: &ProjectionConstants) -> [f64; FEATURES] {
    let mut x = [0.0; FEATURES];
    for (i, a) in s.phi.iter().enumerate() {
        x[2 * i] = a.sin();
        x[2 * i + 1] = a.cos();
    }
    x[20] = s.d5 / (k.c5 + WORLD_RADIUS + 1.0);
    x[21] = s.d4 / (k.c4 / 2.0 + 2.0 * WORLD_RADIUS);
    x[22] = 1.0;
    x
}

/// Linear action values `Q(s, a) = w_a . x(s)`.
struct LinearQ {
    w: Vec<[f64; FEATURES]>,
}

impl LinearQ {
    fn new() -> Self {
        LinearQ {
            w: vec![[0.0; FEATURES]; ActionSet::LEN],
        }
    }

    fn value(&self, a: usize, x: &[f64; FEATURES]) -> f64 {
        self.w[a].iter().zip(x).map(|(w, x)| w * x).sum()
    }

    fn best(&self, x: &[f64; FEATURES]) -> (usize, f64) {
        let mut best = (0, self.value(0, x));
        for a in 1..ActionSet::LEN {
            let v = self.value(a, x);
            if v > best.1 {
                best = (a, v);
            }
        }
        best
    }

    fn update(&mut self, a: usize, x: &[f64; FEATURES], td: f64, rate: f64) {
        for (w, xi) in self.w[a].iter_mut().zip(x) {
            *w += rate * td * xi;
        }
    }
}

fn greedy_choice(env: &MdpEnv) -> Outcome {
    let mut best = env.preview(0);
    for i in 1..ActionSet::LEN {
        let o = env.preview(i);
        if o.reward > best.reward {
            best = o;
        }
    }
    best
}

/// Runs the agent for the given budget and returns the best state visited.
///
/// With `s0` every episode starts there; otherwise each episode draws a fresh
/// initial state from the run seed. The beam radius is fixed by the first episode.
pub fn optimize(
    complex: &CubicalComplex,
    s0: Option<&EmbeddingState>,
    policy: &AgentPolicy,
    budget: Budget,
    reward: &RewardConfig,
    constants: &ProjectionConstants,
) -> Result<OptimizeResult> {
    policy.validate()?;
    reward.validate()?;
    if budget.episodes == 0 || budget.steps == 0 {
        return Err(Error::InvalidConfig("budget must be positive".into()));
    }
    if let Some(s) = s0 {
        if !s.is_valid(constants) {
            return Err(Error::InvalidInitialState(format!(
                "{s} violates the camera guard (d5 >= {:.4}, d4 >= {:.4})",
                constants.min_d5(),
                constants.min_d4(s.d5)
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let draw = |rng: &mut ChaCha8Rng| -> EmbeddingState {
        match s0 {
            Some(s) => *s,
            None => sample_initial_state(constants, rng),
        }
    };

    let first = draw(&mut rng);
    let mut env = MdpEnv::new(complex, *constants, reward.clone(), &first)?;
    let mode = reward.sign_mode;
    let done = |m: &Measures| m.sigma <= reward.sigma_prop && m.overlaps == 0;

    let mut best_state = *env.state();
    let mut best = env.measures();
    let mut initial_states = vec![best_state];
    let mut log = Vec::with_capacity(budget.total());
    let mut q = LinearQ::new();

    'episodes: for episode in 0..budget.episodes {
        if episode > 0 {
            let s = draw(&mut rng);
            env.reset(&s)?;
            initial_states.push(*env.state());
            let m = env.measures();
            if ranks_before(&m, &best, mode) {
                best = m;
                best_state = *env.state();
            }
        }
        if done(&best) {
            break;
        }
        for _ in 0..budget.steps {
            let explore = policy.exploration > 0.0 && rng.random_bool(policy.exploration);
            let record = match policy.kind {
                AgentKind::GreedyLookahead => {
                    let outcome = if explore {
                        env.preview(rng.random_range(0..ActionSet::LEN))
                    } else {
                        greedy_choice(&env)
                    };
                    env.commit(outcome).clone()
                }
                AgentKind::QLearning => {
                    let x = features(env.state(), constants);
                    let a = if explore {
                        rng.random_range(0..ActionSet::LEN)
                    } else {
                        q.best(&x).0
                    };
                    let rec = env.step(a).clone();
                    let x_next = features(env.state(), constants);
                    let target = rec.reward + reward.gamma * q.best(&x_next).1;
                    let td = target - q.value(a, &x);
                    q.update(a, &x, td, policy.learning_rate);
                    rec
                }
            };
            let m = env.measures();
            if ranks_before(&m, &best, mode) {
                best = m;
                best_state = *env.state();
            }
            log.push(StepRecord { episode, ..record });
            if done(&best) {
                break 'episodes;
            }
        }
    }

    let scene = apply_state(complex, &best_state, constants)?;
    let best_report = env.plan().report(&scene, complex, &env.width())?;
    Ok(OptimizeResult {
        best_state,
        best_measures: best,
        best_report,
        width: env.width(),
        initial_states,
        log,
        reached_target: done(&best),
    })
}

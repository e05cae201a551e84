use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Largest instance space an exhaustive run will accept unless raised.
pub const DEFAULT_CAP: u64 = 1 << 33;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    /// Look for a zero-cycle-free weighting of the complete digraph on `n` vertices.
    FBound,
    TheoremMain,
    TheoremCorollary,
    TheoremUndirected,
    LemmaInc,
    Question1,
    Question2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Exhaustive,
    Random,
    LocalSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    /// Cyclic factors of the group; undirected tasks only. Overrides `k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Strategy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Node budget for each oracle call.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Moves per restart for local search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(default = "default_cap")]
    pub cap: u64,
    /// Skip weightings that are not canonical under vertex relabeling.
    #[serde(default = "default_true")]
    pub prune: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

fn default_cap() -> u64 {
    DEFAULT_CAP
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn new(task: Task) -> Self {
        ExperimentConfig {
            task,
            k: None,
            group: None,
            n: None,
            k_max: None,
            strategy: None,
            trials: None,
            seed: None,
            budget: None,
            steps: None,
            cap: DEFAULT_CAP,
            prune: true,
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::Domain(format!("bad experiment config: {e}")))
    }

    pub(crate) fn strategy_or(&self, default: Strategy) -> Strategy {
        self.strategy.unwrap_or(default)
    }

    pub(crate) fn need_k(&self) -> Result<u32> {
        match self.k {
            Some(k) if k >= 2 => Ok(k),
            Some(k) => domain(format!("k must be at least 2, got {k}")),
            None => domain("this task needs k"),
        }
    }

    pub(crate) fn need_seed(&self, strategy: Strategy) -> Result<u64> {
        match (strategy, self.seed) {
            (Strategy::Exhaustive, _) => Ok(self.seed.unwrap_or(0)),
            (_, Some(s)) => Ok(s),
            (_, None) => domain("a seed is required for random and local_search strategies"),
        }
    }

    pub(crate) fn need_trials(&self) -> Result<u64> {
        match self.trials {
            Some(t) if t > 0 => Ok(t),
            _ => domain("trials must be given and positive for sampled runs"),
        }
    }

    pub(crate) fn check_cap(&self, space: Option<u64>, what: &str) -> Result<u64> {
        match space {
            Some(s) if s <= self.cap => Ok(s),
            Some(s) => domain(format!("{what}: {s} instances exceed the exhaustive cap {}", self.cap)),
            None => domain(format!("{what}: instance space overflows; cap is {}", self.cap)),
        }
    }
}

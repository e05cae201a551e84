//! Desk-scale experiments: theorem sweeps, exact small bounds on `f(k)`, the
//! near-AP classifier check and searches for the two open questions.
//!
//! Every run is a scan over an indexed instance space (all weightings, or
//! seeded random instances keyed by index). Instances are processed in
//! parallel chunks and the reported witness is always the one with the
//! smallest index, so serial and parallel runs produce identical reports.

mod canon;
mod config;
mod scan;
mod tasks;

pub use config::{ExperimentConfig, Strategy, Task, DEFAULT_CAP};
pub use tasks::{
    probe_f_lower, question1_search, question2_probe, run_experiment, verify_lemma_inc, verify_theorem_sweep,
};

use serde::Serialize;

/// Counters summed over the instances scanned up to (and including) the
/// reported witness, or over the whole space when there is none.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Size of the instance space.
    pub instances_total: u64,
    pub instances_tested: u64,
    /// Skipped as non-canonical relabelings.
    pub pruned: u64,
    pub cycles_enumerated: u64,
    pub oracle_fallbacks: u64,
    /// Instances whose search ran out of budget.
    pub budget_exceeded: u64,
}

impl std::ops::AddAssign for Counters {
    fn add_assign(&mut self, o: Counters) {
        self.instances_tested += o.instances_tested;
        self.pruned += o.pruned;
        self.cycles_enumerated += o.cycles_enumerated;
        self.oracle_fallbacks += o.oracle_fallbacks;
        self.budget_exceeded += o.budget_exceeded;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    WitnessFound,
    ExhaustedNoWitness,
    BudgetExhausted,
}

impl Outcome {
    /// 0 completed, 2 witness found, 3 budget exhausted.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::ExhaustedNoWitness => 0,
            Outcome::WitnessFound => 2,
            Outcome::BudgetExhausted => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub task: ExperimentConfig,
    pub outcome: Outcome,
    /// `exhaustive` when the whole space was covered, otherwise `sampled`.
    pub evidence: &'static str,
    pub counters: Counters,
    pub findings: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl BoundReport {
    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code()
    }

    /// The report without its timing field; equal configs give equal strings.
    pub fn deterministic_json(&self) -> String {
        let mut r = self.clone();
        r.timing = None;
        serde_json::to_string_pretty(&r).expect("reports serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

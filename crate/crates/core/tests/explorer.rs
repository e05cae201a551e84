mod common;

use common::*;
use zerocycle::codec::{self, AnyGraph};
use zerocycle::explorer::{run_experiment, ExperimentConfig, Strategy, Task};
use zerocycle::WeightedAdjacency;

fn cfg(task: Task) -> ExperimentConfig {
    ExperimentConfig::new(task)
}

#[test]
fn serial_and_parallel_reports_match() {
    let mut configs = Vec::new();
    for (strategy, seed, trials) in [
        (Strategy::Exhaustive, None, None),
        (Strategy::Random, Some(5), Some(3000)),
        (Strategy::LocalSearch, Some(5), Some(40)),
    ] {
        configs.push(ExperimentConfig {
            k: Some(3),
            n: Some(3),
            strategy: Some(strategy),
            seed,
            trials,
            steps: Some(50),
            ..cfg(Task::FBound)
        });
    }
    configs.push(ExperimentConfig {
        k: Some(4),
        strategy: Some(Strategy::Random),
        seed: Some(9),
        trials: Some(500),
        ..cfg(Task::TheoremMain)
    });
    configs.push(ExperimentConfig {
        k: Some(2),
        strategy: Some(Strategy::Random),
        seed: Some(9),
        trials: Some(300),
        ..cfg(Task::TheoremUndirected)
    });
    configs.push(ExperimentConfig {
        n: Some(3),
        strategy: Some(Strategy::Random),
        seed: Some(2),
        trials: Some(2000),
        ..cfg(Task::Question1)
    });
    configs.push(ExperimentConfig {
        k: Some(2),
        seed: Some(4),
        trials: Some(500),
        ..cfg(Task::Question2)
    });
    for c in configs {
        let serial = run_experiment(&c, 1).unwrap().deterministic_json();
        let parallel = run_experiment(&c, 4).unwrap().deterministic_json();
        let again = run_experiment(&c, 3).unwrap().deterministic_json();
        assert_eq!(serial, parallel, "{c:?}");
        assert_eq!(serial, again, "{c:?}");
    }
}

#[test]
fn f_bound_witness_is_zero_cycle_free() {
    for (k, n) in [(2, 2), (3, 3), (4, 4)] {
        let c = ExperimentConfig {
            k: Some(k),
            n: Some(n),
            ..cfg(Task::FBound)
        };
        let rep = run_experiment(&c, 0).unwrap();
        assert_eq!(rep.exit_code(), 2);
        let w = rep.witness.unwrap();
        let AnyGraph::Directed(g) = codec::parse(&w["graph"].to_string()).unwrap() else {
            panic!("directed witness expected")
        };
        assert_eq!(g.order(), n);
        assert!(!has_zero_cycle(&g, &(0..n).collect::<Vec<_>>(), 2));
    }
}

#[test]
fn pruned_and_unpruned_runs_agree() {
    for (k, n) in [(2, 3), (3, 3)] {
        let base = ExperimentConfig {
            k: Some(k),
            n: Some(n),
            ..cfg(Task::FBound)
        };
        let pruned = run_experiment(&base, 0).unwrap();
        let full = run_experiment(&ExperimentConfig { prune: false, ..base }, 0).unwrap();
        assert_eq!(pruned.outcome, full.outcome);
        assert_eq!(pruned.witness, full.witness);
    }
}

#[test]
fn cap_and_seed_rules() {
    let too_big = ExperimentConfig {
        k: Some(3),
        n: Some(5),
        cap: 1000,
        ..cfg(Task::FBound)
    };
    assert!(matches!(run_experiment(&too_big, 1), Err(zerocycle::Error::Domain(_))));
    let no_seed = ExperimentConfig {
        k: Some(3),
        n: Some(3),
        strategy: Some(Strategy::Random),
        trials: Some(5),
        ..cfg(Task::FBound)
    };
    assert!(run_experiment(&no_seed, 1).is_err());
}

#[test]
fn question2_reports_the_boundary_construction() {
    let c = ExperimentConfig {
        k: Some(3),
        seed: Some(1),
        trials: Some(50),
        ..cfg(Task::Question2)
    };
    let rep = run_experiment(&c, 0).unwrap();
    let boundary = rep.findings["boundary"].as_array().unwrap();
    assert_eq!(boundary.len(), 4);
    for b in boundary {
        let n = b["n"].as_i64().unwrap();
        assert_eq!(b["edges"].as_i64().unwrap(), 3 * n - 6);
        assert_eq!(b["min_degree"].as_i64().unwrap(), 3);
    }
}

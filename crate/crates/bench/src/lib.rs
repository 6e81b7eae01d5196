//! Fixed workloads shared by the benchmarks.

use upo_core::generate::{generate, random_assignment, GeneratorConfig};
use upo_core::{serial_dictatorship, AgentId, Assignment, LotteryModel, Permutation, Profile, UncertaintyModel};

/// A seeded lottery instance with `k` uncertain agents and an assignment
/// that is the serial dictatorship outcome of one of its realizations, so
/// its probability is positive.
pub fn lottery_workload(n: usize, k: usize, support: usize, seed: u64) -> (LotteryModel, Assignment) {
    let model = match generate(&GeneratorConfig::lottery(n, k, support, seed)).expect("valid config").model {
        UncertaintyModel::Lottery(m) => m,
        UncertaintyModel::Joint(_) => unreachable!("lottery requested"),
    };
    let last = |a: usize| model.support(AgentId(a)).len() - 1;
    let profile = model.realize(&(0..n).map(last).collect::<Vec<_>>());
    let picks = Permutation::from_indices(&random_assignment(n, seed).indices()).expect("permutation");
    let assignment = serial_dictatorship(&profile, &picks).expect("matching sizes");
    (model, assignment)
}

/// A random profile of `n` agents.
pub fn profile_workload(n: usize, seed: u64) -> Profile {
    let rows: Vec<Vec<usize>> = (0..n as u64).map(|i| random_assignment(n, seed ^ (i << 32)).indices()).collect();
    Profile::from_indices(&rows).expect("permutations")
}

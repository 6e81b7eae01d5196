//! Pareto optimality of assignments when agent preferences are uncertain.
//!
//! Agents hold strict orders over as many items as there are agents. Their
//! preferences are known only through a probability model: independent
//! lotteries per agent ([`LotteryModel`]) or a distribution over whole
//! profiles ([`JointModel`]). The crate answers, exactly, how likely a given
//! assignment is to be Pareto optimal, whether it is so with probability
//! zero or one, and which assignment is best.

mod error;
mod graph;

pub mod decide;
pub mod generate;
pub mod io;
pub mod limits;
pub mod model;
pub mod prob;
pub mod reductions;
pub mod search;
pub mod uncertainty;

pub use decide::{
    certainly_dominated, is_po_probability_nonzero, is_po_probability_one, joint_is_po_probability_nonzero,
    joint_is_po_probability_one, nonzero_witness, SdWitness,
};
pub use error::{Error, Result, Violation, ViolationKind};
pub use limits::Limits;
pub use model::{
    enumerate_po_assignments, find_trading_cycle, is_pareto_optimal, serial_dictatorship, AgentId, Assignment, ItemId,
    Permutation, PreferenceOrder, Profile, TradingCycle,
};
pub use prob::{po_probability, Engine};
pub use search::{best_assignment, exists_certainly_po};
pub use uncertainty::{
    format_probability, parse_probability, rational, JointEntry, JointModel, LotteryEntry, LotteryModel, Rational,
    UncertaintyModel,
};

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::model::PreferenceOrder;
    use crate::uncertainty::{rational, LotteryEntry, LotteryModel};

    /// Three agents, items a, b, c. Agent 1 ranks a,b,c with 3/5 and b,a,c
    /// with 2/5; agent 2 ranks b,a,c; agent 3 ranks c,b,a.
    pub fn example_lottery() -> LotteryModel {
        let o = |v: &[usize]| PreferenceOrder::from_indices(v).unwrap();
        LotteryModel::new(vec![
            vec![
                LotteryEntry::new(o(&[0, 1, 2]), rational(3, 5)),
                LotteryEntry::new(o(&[1, 0, 2]), rational(2, 5)),
            ],
            vec![LotteryEntry::new(o(&[1, 0, 2]), rational(1, 1))],
            vec![LotteryEntry::new(o(&[2, 1, 0]), rational(1, 1))],
        ])
        .unwrap()
    }
}

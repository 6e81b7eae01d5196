//! Polynomial-time zero/one decisions about PO probability.

use crate::error::Result;
use crate::graph;
use crate::model::{is_pareto_optimal, AgentId, Assignment, ItemId, Permutation, Profile};
use crate::uncertainty::{CertainlyPreferredRelation, JointModel, LotteryModel};

/// Agent graph where `i` points to the holder of item `o` whenever
/// `wants(i, o)`; own items never count.
fn envy_graph_has_cycle(
    assignment: &Assignment,
    wants: impl Fn(AgentId, ItemId) -> bool,
) -> bool {
    let n = assignment.n();
    graph::has_cycle(n, |i| {
        let own = assignment.item_of(AgentId(i));
        (0..n)
            .map(ItemId)
            .filter(|&o| o != own && wants(AgentId(i), o))
            .map(|o| assignment.holder_of(o).0)
            .collect::<Vec<_>>()
    })
}

/// Whether some other assignment Pareto dominates `assignment` in every
/// realizable profile. This holds exactly when the graph of certainly
/// preferred improvements has a cycle.
pub fn certainly_dominated(model: &LotteryModel, assignment: &Assignment) -> Result<bool> {
    assignment.check_dimension(model.n())?;
    let rel = CertainlyPreferredRelation::of_lottery(model);
    Ok(envy_graph_has_cycle(assignment, |i, o| {
        rel.prefers(i, o, assignment.item_of(i))
    }))
}

/// PO with probability one iff no cycle exists in the graph where each agent
/// points to every item it does not certainly rank below its own.
pub fn is_po_probability_one(model: &LotteryModel, assignment: &Assignment) -> Result<bool> {
    assignment.check_dimension(model.n())?;
    let rel = CertainlyPreferredRelation::of_lottery(model);
    Ok(!envy_graph_has_cycle(assignment, |i, o| {
        !rel.prefers(i, assignment.item_of(i), o)
    }))
}

/// A realizable profile and picking sequence whose serial dictatorship
/// outcome is the queried assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdWitness {
    pub permutation: Permutation,
    /// Index into each agent's support of the order used.
    pub chosen: Vec<usize>,
    pub profile: Profile,
}

/// A candidate step of the greedy: `agent` can take its item next using the
/// order at `order` in its support.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GreedyMove {
    pub agent: AgentId,
    pub order: usize,
}

pub fn is_po_probability_nonzero(model: &LotteryModel, assignment: &Assignment) -> Result<bool> {
    Ok(nonzero_witness(model, assignment)?.is_some())
}

/// Canonical greedy: the lowest-indexed eligible agent, and its lowest-indexed
/// qualifying order, moves first.
pub fn nonzero_witness(model: &LotteryModel, assignment: &Assignment) -> Result<Option<SdWitness>> {
    nonzero_witness_with(model, assignment, |_| 0)
}

/// Builds a serial dictatorship sequence consistent with `assignment`.
///
/// At every step the eligible moves (remaining agents whose assigned item is
/// the top remaining item in one of their support orders) are listed in
/// ascending `(agent, order)` order and `choose` picks one by index. Returns
/// `None` once no remaining agent is eligible.
pub fn nonzero_witness_with(
    model: &LotteryModel,
    assignment: &Assignment,
    mut choose: impl FnMut(&[GreedyMove]) -> usize,
) -> Result<Option<SdWitness>> {
    let n = model.n();
    assignment.check_dimension(n)?;
    let mut available = vec![true; n];
    let mut remaining = vec![true; n];
    let mut sequence = Vec::with_capacity(n);
    let mut chosen = vec![0usize; n];

    for _ in 0..n {
        let moves: Vec<GreedyMove> = (0..n)
            .filter(|&a| remaining[a])
            .flat_map(|a| {
                let agent = AgentId(a);
                let target = assignment.item_of(agent);
                let available = &available;
                model
                    .support(agent)
                    .iter()
                    .enumerate()
                    .filter(move |(_, e)| e.order.top_available(available) == Some(target))
                    .map(move |(j, _)| GreedyMove { agent, order: j })
            })
            .collect();
        if moves.is_empty() {
            return Ok(None);
        }
        let pick = moves[choose(&moves).min(moves.len() - 1)];
        let agent = pick.agent;
        remaining[agent.0] = false;
        available[assignment.item_of(agent).0] = false;
        chosen[agent.0] = pick.order;
        sequence.push(agent);
    }

    Ok(Some(SdWitness {
        permutation: Permutation::new(sequence)?,
        profile: model.realize(&chosen),
        chosen,
    }))
}

/// PO in at least one support profile.
pub fn joint_is_po_probability_nonzero(model: &JointModel, assignment: &Assignment) -> Result<bool> {
    assignment.check_dimension(model.n())?;
    for entry in model.entries() {
        if is_pareto_optimal(&entry.profile, assignment)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// PO in every support profile.
pub fn joint_is_po_probability_one(model: &JointModel, assignment: &Assignment) -> Result<bool> {
    assignment.check_dimension(model.n())?;
    for entry in model.entries() {
        if !is_pareto_optimal(&entry.profile, assignment)? {
            return Ok(false);
        }
    }
    Ok(true)
}

//! Exact exponential solvers for the existence of a certainly PO assignment
//! and for an assignment of highest PO probability.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::decide::{
    is_po_probability_nonzero, is_po_probability_one, joint_is_po_probability_nonzero,
    joint_is_po_probability_one,
};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::{enumerate_po_assignments, factorial, AgentId, Assignment, ItemId, Permutations, Profile};
use crate::prob::{po_probability, po_probability_joint, Engine};
use crate::uncertainty::{advance, CertainlyPreferredRelation, Rational, UncertaintyModel};

/// Depth-first search over partial assignments, agents in index order and
/// items ascending, so the first hit is the smallest certainly PO assignment.
///
/// A partial assignment is abandoned as soon as its assigned agents already
/// form a cycle that survives every completion: for a lottery model, a cycle
/// of possible improvements; for a joint model, a trading cycle in some
/// support profile.
pub fn exists_certainly_po(model: &UncertaintyModel, limits: &Limits) -> Result<Option<Assignment>> {
    let n = model.n();
    if n > limits.max_certain_search_agents {
        return Err(Error::guard(
            "agents for certainly-PO search",
            n as u128,
            limits.max_certain_search_agents as u128,
        ));
    }
    let relation = match model {
        UncertaintyModel::Lottery(m) => Some(CertainlyPreferredRelation::of_lottery(m)),
        UncertaintyModel::Joint(_) => None,
    };
    let profiles: Vec<&Profile> = match model {
        UncertaintyModel::Lottery(_) => Vec::new(),
        UncertaintyModel::Joint(m) => m.entries().iter().map(|e| &e.profile).collect(),
    };

    let mut state = PartialAssignment::new(n);
    let closes_cycle = |state: &PartialAssignment, agent: usize| -> bool {
        match &relation {
            Some(rel) => {
                state.reaches_self(agent, |i, own, o| !rel.prefers(AgentId(i), ItemId(own), ItemId(o)))
            }
            None => profiles.iter().any(|p| {
                state.reaches_self(agent, |i, own, o| p.order(AgentId(i)).prefers(ItemId(o), ItemId(own)))
            }),
        }
    };

    if !search(&mut state, 0, &closes_cycle) {
        return Ok(None);
    }
    let found = Assignment::from_indices(&state.item_of.iter().map(|o| o.expect("complete")).collect::<Vec<_>>())?;
    let verified = match model {
        UncertaintyModel::Lottery(m) => is_po_probability_one(m, &found)?,
        UncertaintyModel::Joint(m) => joint_is_po_probability_one(m, &found)?,
    };
    debug_assert!(verified, "pruning rule and probability-one check disagree");
    Ok(verified.then_some(found))
}

fn search(state: &mut PartialAssignment, agent: usize, closes_cycle: &dyn Fn(&PartialAssignment, usize) -> bool) -> bool {
    let n = state.item_of.len();
    if agent == n {
        return true;
    }
    for item in 0..n {
        if state.holder[item].is_some() {
            continue;
        }
        state.assign(agent, item);
        if !closes_cycle(state, agent) && search(state, agent + 1, closes_cycle) {
            return true;
        }
        state.unassign(agent, item);
    }
    false
}

struct PartialAssignment {
    item_of: Vec<Option<usize>>,
    holder: Vec<Option<usize>>,
}

impl PartialAssignment {
    fn new(n: usize) -> Self {
        Self {
            item_of: vec![None; n],
            holder: vec![None; n],
        }
    }

    fn assign(&mut self, agent: usize, item: usize) {
        self.item_of[agent] = Some(item);
        self.holder[item] = Some(agent);
    }

    fn unassign(&mut self, agent: usize, item: usize) {
        self.item_of[agent] = None;
        self.holder[item] = None;
    }

    /// Whether `start` lies on a cycle of the envy graph among assigned
    /// agents, where `i` points to the holder of `o` iff `wants(i, own, o)`.
    fn reaches_self(&self, start: usize, wants: impl Fn(usize, usize, usize) -> bool) -> bool {
        let n = self.item_of.len();
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let own = self.item_of[i].expect("assigned");
            for o in 0..n {
                if o == own {
                    continue;
                }
                let Some(h) = self.holder[o] else { continue };
                if !wants(i, own, o) {
                    continue;
                }
                if h == start {
                    return true;
                }
                if !seen[h] {
                    seen[h] = true;
                    stack.push(h);
                }
            }
        }
        false
    }
}

/// An assignment of maximum PO probability and that probability. Among
/// maximizers the smallest assignment (item of agent 0, then agent 1, ...)
/// is returned.
pub fn best_assignment(model: &UncertaintyModel, limits: &Limits) -> Result<(Assignment, Rational)> {
    let n = model.n();
    if n > limits.max_best_search_agents {
        return Err(Error::guard(
            "agents for best-assignment search",
            n as u128,
            limits.max_best_search_agents as u128,
        ));
    }
    let candidates = candidates(model, limits)?;
    let mut best: Option<(Assignment, Rational)> = None;
    for candidate in candidates {
        let p = match model {
            UncertaintyModel::Joint(m) => po_probability_joint(m, &candidate)?,
            UncertaintyModel::Lottery(_) => po_probability(model, &candidate, Engine::Auto, limits)?,
        };
        if best.as_ref().is_none_or(|(_, b)| p > *b) {
            let done = p.is_one();
            best = Some((candidate, p));
            if done {
                break;
            }
        }
    }
    Ok(match best {
        Some((a, p)) if !p.is_zero() => (a, p),
        _ => (Assignment::identity(n), Rational::zero()),
    })
}

/// Assignments that are PO in at least one support profile, ascending.
fn candidates(model: &UncertaintyModel, limits: &Limits) -> Result<BTreeSet<Assignment>> {
    let n = model.n();
    let support = match model {
        UncertaintyModel::Lottery(m) => m.profile_count(),
        UncertaintyModel::Joint(m) => m.entries().len() as u128,
    };
    let mut out = BTreeSet::new();
    if support.saturating_mul(factorial(n)) <= limits.max_profiles {
        match model {
            UncertaintyModel::Joint(m) => {
                for e in m.entries() {
                    out.extend(enumerate_po_assignments(&e.profile, limits)?);
                }
            }
            UncertaintyModel::Lottery(m) => {
                let mut choice = vec![0usize; n];
                loop {
                    out.extend(enumerate_po_assignments(&m.realize(&choice), limits)?);
                    if !advance(&mut choice, |a| m.support(AgentId(a)).len()) {
                        break;
                    }
                }
            }
        }
    } else {
        for perm in Permutations::new(n) {
            let a = Assignment::from_indices(&perm)?;
            let possible = match model {
                UncertaintyModel::Lottery(m) => is_po_probability_nonzero(m, &a)?,
                UncertaintyModel::Joint(m) => joint_is_po_probability_nonzero(m, &a)?,
            };
            if possible {
                out.insert(a);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example_lottery;
    use crate::model::PreferenceOrder;
    use crate::uncertainty::{rational, LotteryEntry, LotteryModel};

    fn symmetric_pair() -> UncertaintyModel {
        let o = |v: &[usize]| PreferenceOrder::from_indices(v).unwrap();
        let agent = || {
            vec![
                LotteryEntry::new(o(&[0, 1]), rational(1, 2)),
                LotteryEntry::new(o(&[1, 0]), rational(1, 2)),
            ]
        };
        LotteryModel::new(vec![agent(), agent()]).unwrap().into()
    }

    #[test]
    fn example_has_certainly_po_abc() {
        let m: UncertaintyModel = example_lottery().into();
        let found = exists_certainly_po(&m, &Limits::default()).unwrap();
        assert_eq!(found, Some(Assignment::identity(3)));
        let (best, p) = best_assignment(&m, &Limits::default()).unwrap();
        assert_eq!(best, Assignment::identity(3));
        assert_eq!(p, rational(1, 1));
    }

    #[test]
    fn symmetric_pair_has_no_certainly_po() {
        let m = symmetric_pair();
        assert_eq!(exists_certainly_po(&m, &Limits::default()).unwrap(), None);
        let (best, p) = best_assignment(&m, &Limits::default()).unwrap();
        assert_eq!(p, rational(3, 4));
        assert_eq!(best, Assignment::identity(2));
    }

    #[test]
    fn certain_model_always_has_answer() {
        let p = Profile::from_indices(&[vec![1, 2, 0], vec![1, 0, 2], vec![0, 1, 2]]).unwrap();
        let m: UncertaintyModel = LotteryModel::certain(&p).into();
        let found = exists_certainly_po(&m, &Limits::default()).unwrap().unwrap();
        assert!(enumerate_po_assignments(&p, &Limits::default()).unwrap().contains(&found));
        assert_eq!(best_assignment(&m, &Limits::default()).unwrap().1, rational(1, 1));
    }

    #[test]
    fn both_candidate_routes_agree() {
        let m = symmetric_pair();
        let small = Limits::default().with_max_profiles(1);
        assert_eq!(
            candidates(&m, &small).unwrap(),
            candidates(&m, &Limits::default()).unwrap()
        );
        assert_eq!(best_assignment(&m, &small).unwrap().1, rational(3, 4));
    }

    #[test]
    fn guards() {
        let p = Profile::new(vec![PreferenceOrder::identity(11); 11]).unwrap();
        let m: UncertaintyModel = LotteryModel::certain(&p).into();
        assert!(exists_certainly_po(&m, &Limits::default()).is_err());
        assert!(best_assignment(&m, &Limits::default()).is_err());
    }
}

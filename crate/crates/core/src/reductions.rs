//! Gadgets from the hardness constructions, plus brute-force solvers for
//! their source problems.
//!
//! * Serial dictatorship feasibility (can some picking order give item `o`
//!   to agent `i`?) maps to certainly-PO existence, for both the joint and
//!   the lottery model.
//! * Monotone #2SAT maps to PO probability of the identity assignment in a
//!   lottery model with two equally likely orders per agent.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::{serial_dictatorship, AgentId, Assignment, ItemId, Permutation, Permutations, PreferenceOrder, Profile};
use crate::uncertainty::{rational, JointEntry, JointModel, LotteryEntry, LotteryModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdfInstance {
    pub profile: Profile,
    pub agent: AgentId,
    pub item: ItemId,
}

impl SdfInstance {
    pub fn new(profile: Profile, agent: AgentId, item: ItemId) -> Result<Self> {
        let n = profile.n();
        if agent.0 >= n || item.0 >= n {
            return Err(Error::Precondition(format!("{agent} or {item} out of range for {n} agents")));
        }
        Ok(Self { profile, agent, item })
    }
}

/// Tries every picking order; returns one that gives the target item to the
/// target agent.
pub fn brute_sdf(instance: &SdfInstance, limits: &Limits) -> Result<Option<Permutation>> {
    let n = instance.profile.n();
    if n > limits.max_sdf_agents {
        return Err(Error::guard("agents for feasibility brute force", n as u128, limits.max_sdf_agents as u128));
    }
    for perm in Permutations::new(n) {
        let perm = Permutation::from_indices(&perm)?;
        if serial_dictatorship(&instance.profile, &perm)?.item_of(instance.agent) == instance.item {
            return Ok(Some(perm));
        }
    }
    Ok(None)
}

fn move_to_front(order: &PreferenceOrder, item: ItemId) -> PreferenceOrder {
    let mut ranking = vec![item];
    ranking.extend(order.ranking().iter().copied().filter(|&o| o != item));
    PreferenceOrder::new(ranking).expect("still a permutation")
}

fn move_to_back(order: &PreferenceOrder, item: ItemId) -> PreferenceOrder {
    let mut ranking: Vec<ItemId> = order.ranking().iter().copied().filter(|&o| o != item).collect();
    ranking.push(item);
    PreferenceOrder::new(ranking).expect("still a permutation")
}

/// The target agent ranks the target item first, every other agent last;
/// the remaining items keep their original relative order.
fn shifted_profile(instance: &SdfInstance) -> Profile {
    let orders = instance
        .profile
        .orders()
        .iter()
        .enumerate()
        .map(|(a, order)| {
            if a == instance.agent.0 {
                move_to_front(order, instance.item)
            } else {
                move_to_back(order, instance.item)
            }
        })
        .collect();
    Profile::new(orders).expect("same dimensions")
}

/// Two profiles at probability 1/2 each: the original one and the shifted
/// one. If they coincide the model has the single profile at probability 1.
pub fn reduce_sdf_to_joint(instance: &SdfInstance) -> Result<JointModel> {
    let shifted = shifted_profile(instance);
    let n = instance.profile.n();
    if shifted == instance.profile {
        return JointModel::new(n, vec![JointEntry::new(shifted, rational(1, 1))]);
    }
    JointModel::new(
        n,
        vec![
            JointEntry::new(instance.profile.clone(), rational(1, 2)),
            JointEntry::new(shifted, rational(1, 2)),
        ],
    )
}

/// Every agent draws its original order or its shifted order with
/// probability 1/2; coinciding orders merge into one certain entry.
pub fn reduce_sdf_to_lottery(instance: &SdfInstance) -> Result<LotteryModel> {
    let shifted = shifted_profile(instance);
    let supports = instance
        .profile
        .orders()
        .iter()
        .zip(shifted.orders())
        .map(|(original, moved)| {
            vec![
                LotteryEntry::new(original.clone(), rational(1, 2)),
                LotteryEntry::new(moved.clone(), rational(1, 2)),
            ]
        })
        .collect();
    LotteryModel::new_merging_duplicates(supports)
}

/// Negation-free 2CNF over variables `0..variables`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monotone2Sat {
    variables: usize,
    clauses: Vec<(usize, usize)>,
}

impl Monotone2Sat {
    /// Clauses are normalized to `(smaller, larger)`. Every variable must occur
    /// in some clause, clauses must be distinct and join two different variables.
    pub fn new(variables: usize, clauses: Vec<(usize, usize)>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::Precondition("formula has no clauses".into()));
        }
        let mut seen = BTreeSet::new();
        let mut occurs = vec![false; variables];
        let mut normalized = Vec::with_capacity(clauses.len());
        for (a, b) in clauses {
            if a >= variables || b >= variables {
                return Err(Error::Precondition(format!("clause ({a}, {b}) uses an unknown variable")));
            }
            if a == b {
                return Err(Error::Precondition(format!("clause ({a}, {b}) repeats a variable")));
            }
            let c = (a.min(b), a.max(b));
            if !seen.insert(c) {
                return Err(Error::Precondition(format!("clause ({a}, {b}) repeated")));
            }
            occurs[a] = true;
            occurs[b] = true;
            normalized.push(c);
        }
        if let Some(v) = occurs.iter().position(|&o| !o) {
            return Err(Error::Precondition(format!("variable {v} occurs in no clause")));
        }
        Ok(Self {
            variables,
            clauses: normalized,
        })
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn clauses(&self) -> &[(usize, usize)] {
        &self.clauses
    }

    /// Variables sharing a clause with `v`, ascending.
    pub fn partners(&self, v: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .clauses
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect();
        set.into_iter().collect()
    }
}

/// Agent `i` holds item `i`. With probability 1/2 it ranks its own item
/// first (variable true); otherwise its clause partners' items come first,
/// ascending, then its own. Unlisted items follow in ascending order.
pub fn reduce_m2sat_to_lottery(formula: &Monotone2Sat) -> Result<(LotteryModel, Assignment)> {
    let n = formula.variables();
    let supports = (0..n)
        .map(|i| {
            let mut own_first = vec![i];
            own_first.extend((0..n).filter(|&x| x != i));
            let partners = formula.partners(i);
            let mut partners_first = partners.clone();
            partners_first.push(i);
            partners_first.extend((0..n).filter(|&x| x != i && !partners.contains(&x)));
            Ok(vec![
                LotteryEntry::new(PreferenceOrder::from_indices(&own_first)?, rational(1, 2)),
                LotteryEntry::new(PreferenceOrder::from_indices(&partners_first)?, rational(1, 2)),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((LotteryModel::new(supports)?, Assignment::identity(n)))
}

/// Truth-table count of satisfying assignments.
pub fn brute_sat_count(formula: &Monotone2Sat, limits: &Limits) -> Result<u64> {
    let n = formula.variables();
    if n > limits.max_sat_variables {
        return Err(Error::guard("variables for truth table", n as u128, limits.max_sat_variables as u128));
    }
    let count = (0u64..1 << n)
        .filter(|bits| {
            formula
                .clauses()
                .iter()
                .all(|&(a, b)| bits >> a & 1 == 1 || bits >> b & 1 == 1)
        })
        .count();
    Ok(count as u64)
}

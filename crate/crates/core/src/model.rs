//! Deterministic assignment-problem primitives.
//!
//! An instance has `n` agents and `n` items. Preferences are strict total
//! orders, assignments are bijections. Pareto optimality is characterised
//! both by the absence of trading cycles and by being an outcome of serial
//! dictatorship; both characterisations are implemented here.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph;
use crate::limits::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub usize);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "agent#{}", self.0)
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "item#{}", self.0)
    }
}

/// A strict total order over all items, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PreferenceOrder {
    ranking: Vec<ItemId>,
    // position of each item in `ranking`
    rank: Vec<usize>,
}

impl PreferenceOrder {
    pub fn new(ranking: Vec<ItemId>) -> Result<Self> {
        let n = ranking.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, item) in ranking.iter().enumerate() {
            if item.0 >= n {
                return Err(Error::InvalidOrder(format!("{item} out of range for {n} items")));
            }
            if rank[item.0] != usize::MAX {
                return Err(Error::InvalidOrder(format!("{item} listed twice")));
            }
            rank[item.0] = pos;
        }
        Ok(Self { ranking, rank })
    }

    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| ItemId(i)).collect())
    }

    /// The order `0, 1, ..., n-1`.
    pub fn identity(n: usize) -> Self {
        Self {
            ranking: (0..n).map(ItemId).collect(),
            rank: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    pub fn ranking(&self) -> &[ItemId] {
        &self.ranking
    }

    pub fn rank_of(&self, item: ItemId) -> usize {
        self.rank[item.0]
    }

    /// `b` strictly preferred to `c`.
    pub fn prefers(&self, b: ItemId, c: ItemId) -> bool {
        self.rank[b.0] < self.rank[c.0]
    }

    /// Items strictly preferred to `item`, best first.
    pub fn better_than(&self, item: ItemId) -> &[ItemId] {
        &self.ranking[..self.rank[item.0]]
    }

    /// Most preferred item among those with `available[item] == true`.
    pub fn top_available(&self, available: &[bool]) -> Option<ItemId> {
        self.ranking.iter().copied().find(|o| available[o.0])
    }

    pub fn indices(&self) -> Vec<usize> {
        self.ranking.iter().map(|o| o.0).collect()
    }
}

/// One preference order per agent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    orders: Vec<PreferenceOrder>,
}

impl Profile {
    pub fn new(orders: Vec<PreferenceOrder>) -> Result<Self> {
        let n = orders.len();
        for order in &orders {
            if order.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "items per order",
                    expected: n,
                    found: order.len(),
                });
            }
        }
        Ok(Self { orders })
    }

    pub fn from_indices(rows: &[Vec<usize>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| PreferenceOrder::from_indices(r))
                .collect::<Result<_>>()?,
        )
    }

    pub fn n(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self, agent: AgentId) -> &PreferenceOrder {
        &self.orders[agent.0]
    }

    pub fn orders(&self) -> &[PreferenceOrder] {
        &self.orders
    }

    pub fn into_orders(self) -> Vec<PreferenceOrder> {
        self.orders
    }

    /// Lexicographic key used for canonical ordering of profiles.
    pub fn key(&self) -> Vec<Vec<usize>> {
        self.orders.iter().map(PreferenceOrder::indices).collect()
    }
}

/// A bijection from agents to items.
///
/// The derived ordering compares the item sequence agent by agent, which is
/// the canonical serialization used for tie-breaking.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    item_of: Vec<ItemId>,
    holder_of: Vec<AgentId>,
}

impl Assignment {
    pub fn new(item_of: Vec<ItemId>) -> Result<Self> {
        let n = item_of.len();
        let mut holder_of = vec![AgentId(usize::MAX); n];
        for (agent, item) in item_of.iter().enumerate() {
            if item.0 >= n {
                return Err(Error::InvalidAssignment(format!("{item} out of range for {n} items")));
            }
            if holder_of[item.0].0 != usize::MAX {
                return Err(Error::InvalidAssignment(format!("{item} assigned twice")));
            }
            holder_of[item.0] = AgentId(agent);
        }
        Ok(Self { item_of, holder_of })
    }

    pub fn from_indices(items: &[usize]) -> Result<Self> {
        Self::new(items.iter().map(|&i| ItemId(i)).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            item_of: (0..n).map(ItemId).collect(),
            holder_of: (0..n).map(AgentId).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.item_of.len()
    }

    pub fn item_of(&self, agent: AgentId) -> ItemId {
        self.item_of[agent.0]
    }

    pub fn holder_of(&self, item: ItemId) -> AgentId {
        self.holder_of[item.0]
    }

    pub fn items(&self) -> &[ItemId] {
        &self.item_of
    }

    pub fn indices(&self) -> Vec<usize> {
        self.item_of.iter().map(|o| o.0).collect()
    }

    pub(crate) fn check_dimension(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch {
                what: "agents in assignment",
                expected: n,
                found: self.n(),
            });
        }
        Ok(())
    }
}

/// An ordering of all agents, used as the picking sequence of serial dictatorship.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    order: Vec<AgentId>,
}

impl Permutation {
    pub fn new(order: Vec<AgentId>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for a in &order {
            if a.0 >= n || seen[a.0] {
                return Err(Error::InvalidPermutation(format!("{a} repeated or out of range")));
            }
            seen[a.0] = true;
        }
        Ok(Self { order })
    }

    pub fn from_indices(order: &[usize]) -> Result<Self> {
        Self::new(order.iter().map(|&a| AgentId(a)).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).map(AgentId).collect(),
        }
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TradeStep {
    pub agent: AgentId,
    pub held: ItemId,
    pub wants: ItemId,
}

/// Agents each strictly preferring the item held by the next agent in the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradingCycle {
    steps: Vec<TradeStep>,
}

impl TradingCycle {
    pub fn steps(&self) -> &[TradeStep] {
        &self.steps
    }

    pub fn agents(&self) -> Vec<AgentId> {
        self.steps.iter().map(|s| s.agent).collect()
    }

    /// Performs the exchange: every agent on the cycle receives the item it wants.
    pub fn apply(&self, assignment: &Assignment) -> Assignment {
        let mut items = assignment.items().to_vec();
        for step in &self.steps {
            items[step.agent.0] = step.wants;
        }
        Assignment::new(items).expect("a trading cycle permutes held items")
    }
}

fn check_instance(profile: &Profile, assignment: &Assignment) -> Result<()> {
    assignment.check_dimension(profile.n())
}

/// Searches the envy graph (agent `i` points to the holder of every item it
/// prefers to its own) for a cycle. Roots and successors are scanned in
/// ascending agent index.
pub fn find_trading_cycle(profile: &Profile, assignment: &Assignment) -> Result<Option<TradingCycle>> {
    check_instance(profile, assignment)?;
    let n = profile.n();
    let cycle = graph::find_cycle(n, |agent| {
        let own = assignment.item_of(AgentId(agent));
        let mut targets: Vec<usize> = profile
            .order(AgentId(agent))
            .better_than(own)
            .iter()
            .map(|&o| assignment.holder_of(o).0)
            .collect();
        targets.sort_unstable();
        targets
    });
    Ok(cycle.map(|agents| {
        let steps = agents
            .iter()
            .enumerate()
            .map(|(pos, &a)| {
                let next = agents[(pos + 1) % agents.len()];
                TradeStep {
                    agent: AgentId(a),
                    held: assignment.item_of(AgentId(a)),
                    wants: assignment.item_of(AgentId(next)),
                }
            })
            .collect();
        TradingCycle { steps }
    }))
}

pub fn is_pareto_optimal(profile: &Profile, assignment: &Assignment) -> Result<bool> {
    Ok(find_trading_cycle(profile, assignment)?.is_none())
}

/// Agents pick, in the order given by `permutation`, their most preferred
/// item that is still unallocated.
pub fn serial_dictatorship(profile: &Profile, permutation: &Permutation) -> Result<Assignment> {
    let n = profile.n();
    if permutation.len() != n {
        return Err(Error::DimensionMismatch {
            what: "agents in permutation",
            expected: n,
            found: permutation.len(),
        });
    }
    let mut available = vec![true; n];
    let mut items = vec![ItemId(0); n];
    for &agent in permutation.agents() {
        let pick = profile
            .order(agent)
            .top_available(&available)
            .expect("one item remains per remaining agent");
        available[pick.0] = false;
        items[agent.0] = pick;
    }
    Assignment::new(items)
}

/// All Pareto optimal assignments, obtained as the distinct serial
/// dictatorship outcomes over every permutation of agents.
pub fn enumerate_po_assignments(profile: &Profile, limits: &Limits) -> Result<BTreeSet<Assignment>> {
    let n = profile.n();
    if n > limits.max_enumerate_agents {
        return Err(Error::guard("agents to enumerate", n as u128, limits.max_enumerate_agents as u128));
    }
    let mut out = BTreeSet::new();
    for perm in Permutations::new(n) {
        let perm = Permutation::from_indices(&perm)?;
        out.insert(serial_dictatorship(profile, &perm)?);
    }
    Ok(out)
}

/// Lexicographic enumeration of the permutations of `0..n`.
#[derive(Clone, Debug)]
pub struct Permutations {
    current: Option<Vec<usize>>,
}

impl Permutations {
    pub fn new(n: usize) -> Self {
        Self {
            current: Some((0..n).collect()),
        }
    }
}

impl Iterator for Permutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.take()?;
        let mut next = current.clone();
        if next_permutation(&mut next) {
            self.current = Some(next);
        }
        Some(current)
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, x| acc.saturating_mul(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Items a, b, c = 0, 1, 2; agents 1, 2, 3 = 0, 1, 2.
    fn example_profile(first: [usize; 3]) -> Profile {
        Profile::from_indices(&[first.to_vec(), vec![1, 0, 2], vec![2, 1, 0]]).unwrap()
    }

    fn all_assignments(n: usize) -> Vec<Assignment> {
        Permutations::new(n)
            .map(|p| Assignment::from_indices(&p).unwrap())
            .collect()
    }

    fn dominates(profile: &Profile, q: &Assignment, p: &Assignment) -> bool {
        let mut strict = false;
        for a in 0..profile.n() {
            let order = profile.order(AgentId(a));
            let (qi, pi) = (q.item_of(AgentId(a)), p.item_of(AgentId(a)));
            if order.prefers(pi, qi) {
                return false;
            }
            strict |= order.prefers(qi, pi);
        }
        strict
    }

    #[test]
    fn example_swap_cycle_found() {
        let profile = example_profile([0, 1, 2]);
        let bac = Assignment::from_indices(&[1, 0, 2]).unwrap();
        let cycle = find_trading_cycle(&profile, &bac).unwrap().unwrap();
        assert_eq!(cycle.agents(), vec![AgentId(0), AgentId(1)]);
        assert_eq!(cycle.steps()[0].wants, ItemId(0));
        assert_eq!(cycle.steps()[1].wants, ItemId(1));
        assert!(!is_pareto_optimal(&profile, &bac).unwrap());
    }

    #[test]
    fn example_abc_is_pareto_optimal() {
        let profile = example_profile([0, 1, 2]);
        assert!(is_pareto_optimal(&profile, &Assignment::identity(3)).unwrap());
    }

    #[test]
    fn everyone_holding_top_choice_has_no_cycle() {
        let profile = Profile::from_indices(&[vec![2, 0, 1], vec![0, 1, 2], vec![1, 2, 0]]).unwrap();
        let p = Assignment::from_indices(&[2, 0, 1]).unwrap();
        assert!(find_trading_cycle(&profile, &p).unwrap().is_none());
    }

    #[test]
    fn single_agent_is_pareto_optimal() {
        let profile = Profile::from_indices(&[vec![0]]).unwrap();
        assert!(is_pareto_optimal(&profile, &Assignment::identity(1)).unwrap());
        assert_eq!(enumerate_po_assignments(&profile, &Limits::default()).unwrap().len(), 1);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let profile = example_profile([0, 1, 2]);
        assert!(matches!(
            find_trading_cycle(&profile, &Assignment::identity(2)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(serial_dictatorship(&profile, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn invalid_orders_and_assignments_rejected() {
        assert!(PreferenceOrder::from_indices(&[0, 0, 1]).is_err());
        assert!(PreferenceOrder::from_indices(&[0, 3, 1]).is_err());
        assert!(Assignment::from_indices(&[1, 1]).is_err());
        assert!(Permutation::from_indices(&[0, 0]).is_err());
    }

    #[test]
    fn serial_dictatorship_examples() {
        let tops = Profile::from_indices(&[vec![0, 1, 2], vec![1, 0, 2], vec![2, 0, 1]]).unwrap();
        for perm in Permutations::new(3) {
            let perm = Permutation::from_indices(&perm).unwrap();
            assert_eq!(serial_dictatorship(&tops, &perm).unwrap(), Assignment::identity(3));
        }
        let profile = example_profile([0, 1, 2]);
        let abc = serial_dictatorship(&profile, &Permutation::identity(3)).unwrap();
        assert_eq!(abc.indices(), vec![0, 1, 2]);
    }

    #[test]
    fn example_with_flipped_order_contains_bac() {
        let profile = example_profile([1, 0, 2]);
        let po = enumerate_po_assignments(&profile, &Limits::default()).unwrap();
        assert!(po.contains(&Assignment::from_indices(&[1, 0, 2]).unwrap()));
    }

    #[test]
    fn shared_order_po_set_matches_filter() {
        // With a common order every assignment is PO: no one can gain without
        // the holder of the better item losing it.
        let rows = vec![vec![0, 1, 2, 3]; 4];
        let profile = Profile::from_indices(&rows).unwrap();
        let po = enumerate_po_assignments(&profile, &Limits::default()).unwrap();
        assert_eq!(po.len(), 24);
    }

    #[test]
    fn enumeration_guard() {
        let profile = Profile::new(vec![PreferenceOrder::identity(11); 11]).unwrap();
        assert!(matches!(
            enumerate_po_assignments(&profile, &Limits::default()),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn trading_cycle_exchange_dominates() {
        let profile = Profile::from_indices(&[
            vec![3, 1, 0, 2],
            vec![2, 0, 1, 3],
            vec![0, 3, 2, 1],
            vec![1, 2, 3, 0],
        ])
        .unwrap();
        for p in all_assignments(4) {
            if let Some(cycle) = find_trading_cycle(&profile, &p).unwrap() {
                assert!(dominates(&profile, &cycle.apply(&p), &p));
            }
        }
    }

    #[test]
    fn permutations_are_lexicographic_and_complete() {
        let all: Vec<_> = Permutations::new(3).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[5], vec![2, 1, 0]);
        assert_eq!(Permutations::new(0).count(), 1);
        assert_eq!(factorial(5), 120);
    }
}

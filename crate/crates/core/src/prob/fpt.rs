//! PO probability parameterized by the number `k` of uncertain agents.
//!
//! After relabeling so that the assignment is the identity and the uncertain
//! agents come first, a layered graph is built whose source-to-target walks
//! correspond to the choices of orders for the uncertain agents that leave
//! no trading cycle. Each layer vertex carries the set of trading paths
//! between uncertain agents' items found so far. Choice edges are weighted
//! by probability numerators over a common denominator `d`, so the weighted
//! walk count divided by `d^k` is the probability.

use std::collections::HashMap;
use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph;
use crate::limits::Limits;
use crate::model::{is_pareto_optimal, AgentId, Assignment, ItemId, PreferenceOrder};
use crate::uncertainty::{LotteryEntry, LotteryModel, Rational};

/// Probabilities of the uncertain agents written as `numerator / d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonDenominatorForm {
    pub denominator: BigUint,
    /// Per listed agent, per support order.
    pub numerators: Vec<Vec<BigUint>>,
}

impl CommonDenominatorForm {
    /// Uses the least common multiple of the reduced denominators of the
    /// given agents' probabilities.
    pub fn of(model: &LotteryModel, agents: &[AgentId]) -> Self {
        let mut d = BigInt::one();
        for a in agents {
            for e in model.support(*a) {
                d = d.lcm(e.prob.denom());
            }
        }
        let numerators = agents
            .iter()
            .map(|a| {
                model
                    .support(*a)
                    .iter()
                    .map(|e| {
                        let scaled = &e.prob * Rational::from_integer(d.clone());
                        debug_assert!(scaled.is_integer());
                        scaled.to_integer().to_biguint().expect("probabilities are positive")
                    })
                    .collect()
            })
            .collect();
        Self {
            denominator: d.to_biguint().expect("positive"),
            numerators,
        }
    }
}

/// The instance with agents renumbered so that the uncertain agents come
/// first and agent `r` holds item `r`.
#[derive(Clone, Debug)]
pub struct RelabeledInstance {
    pub k: usize,
    pub model: LotteryModel,
    /// New agent index to the original agent.
    pub original_agents: Vec<AgentId>,
    /// New item index to the original item.
    pub original_items: Vec<ItemId>,
}

impl RelabeledInstance {
    pub fn new(model: &LotteryModel, assignment: &Assignment) -> Result<Self> {
        let n = model.n();
        assignment.check_dimension(n)?;
        let uncertain = model.uncertain_agents();
        let k = uncertain.len();
        let mut original_agents = uncertain;
        original_agents.extend((0..n).map(AgentId).filter(|&a| model.is_certain(a)));

        let mut new_agent = vec![0usize; n];
        for (r, a) in original_agents.iter().enumerate() {
            new_agent[a.0] = r;
        }
        let original_items: Vec<ItemId> = original_agents.iter().map(|&a| assignment.item_of(a)).collect();
        // item o is renamed after its holder
        let rename = |o: ItemId| ItemId(new_agent[assignment.holder_of(o).0]);

        let supports = original_agents
            .iter()
            .map(|&a| {
                model
                    .support(a)
                    .iter()
                    .map(|e| {
                        let order = PreferenceOrder::new(e.order.ranking().iter().map(|&o| rename(o)).collect())
                            .expect("renaming is a bijection");
                        LotteryEntry::new(order, e.prob.clone())
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            k,
            model: LotteryModel::new(supports)?,
            original_agents,
            original_items,
        })
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    /// The fixed order of a certain agent (index `>= k`).
    fn certain_order(&self, agent: usize) -> &PreferenceOrder {
        &self.model.support(AgentId(agent))[0].order
    }

    /// Whether the certain agents alone admit a trading cycle.
    pub fn certain_only_cycle(&self) -> bool {
        let (n, k) = (self.n(), self.k);
        graph::has_cycle(n - k, |x| {
            self.certain_order(x + k)
                .better_than(ItemId(x + k))
                .iter()
                .filter(|o| o.0 >= k)
                .map(|o| o.0 - k)
                .collect::<Vec<_>>()
        })
    }

    pub fn to_original_assignment(&self) -> Assignment {
        let mut items = vec![ItemId(0); self.n()];
        for (r, a) in self.original_agents.iter().enumerate() {
            items[a.0] = self.original_items[r];
        }
        Assignment::new(items).expect("bijection")
    }
}

/// Ordered pairs of uncertain agents' items, as a `k x k` bit matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReachabilitySet {
    k: usize,
    rows: Vec<u64>,
}

impl ReachabilitySet {
    pub fn empty(k: usize) -> Self {
        assert!(k <= 64, "at most 64 uncertain agents");
        Self { k, rows: vec![0; k] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn contains(&self, from: usize, to: usize) -> bool {
        self.rows[from] >> to & 1 == 1
    }

    pub fn insert(&mut self, from: usize, to: usize) {
        self.rows[from] |= 1 << to;
    }

    pub fn is_subset(&self, other: &ReachabilitySet) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    /// Some `(o_i, o_i)`: a trading cycle through an uncertain agent.
    pub fn has_diagonal(&self) -> bool {
        (0..self.k).any(|i| self.contains(i, i))
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.k)
            .flat_map(|a| (0..self.k).filter(move |&b| self.contains(a, b)).map(move |b| (a, b)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FptVertex {
    Source,
    Target,
    /// Before uncertain agent `layer` (1-based) chooses; `layer = k + 1` is final.
    Layer { layer: usize, reach: ReachabilitySet },
    /// Uncertain agent `agent` (1-based) has chosen its order at `order`.
    Choice { agent: usize, order: usize, reach: ReachabilitySet },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FptEdge {
    pub from: usize,
    pub to: usize,
    pub weight: BigUint,
}

/// The layered counting graph. Only vertices reachable from the source are
/// materialized.
#[derive(Clone, Debug)]
pub struct FptGraph {
    pub k: usize,
    pub denominators: CommonDenominatorForm,
    pub vertices: Vec<FptVertex>,
    pub edges: Vec<FptEdge>,
    pub source: usize,
    pub target: usize,
}

impl FptGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Edges leaving a layer vertex for a choice vertex.
    pub fn choice_edges(&self) -> impl Iterator<Item = &FptEdge> {
        self.edges
            .iter()
            .filter(|e| matches!(self.vertices[e.to], FptVertex::Choice { .. }))
    }

    /// Position of a vertex along any source-to-target walk.
    pub fn depth(&self, v: usize) -> usize {
        match &self.vertices[v] {
            FptVertex::Source => 0,
            FptVertex::Layer { layer, .. } => 2 * layer - 1,
            FptVertex::Choice { agent, .. } => 2 * agent,
            FptVertex::Target => 2 * self.k + 2,
        }
    }

    /// Weighted number of source-to-target walks: products of edge weights
    /// along each walk, summed. Every such walk has length `2k + 2`.
    pub fn weighted_walk_count(&self) -> BigUint {
        let mut count = vec![BigUint::zero(); self.vertices.len()];
        count[self.source] = BigUint::one();
        let mut order: Vec<&FptEdge> = self.edges.iter().collect();
        order.sort_by_key(|e| self.depth(e.from));
        for e in order {
            if count[e.from].is_zero() {
                continue;
            }
            let add = &count[e.from] * &e.weight;
            count[e.to] += add;
        }
        count[self.target].clone()
    }
}

/// Item-level trading graph with the certain agents' edges precomputed.
struct Closure<'a> {
    inst: &'a RelabeledInstance,
    certain_edges: Vec<Vec<usize>>,
}

impl<'a> Closure<'a> {
    fn new(inst: &'a RelabeledInstance) -> Self {
        let (n, k) = (inst.n(), inst.k);
        let certain_edges = (0..n)
            .map(|x| {
                if x < k {
                    Vec::new()
                } else {
                    inst.certain_order(x).better_than(ItemId(x)).iter().map(|o| o.0).collect()
                }
            })
            .collect();
        Self { inst, certain_edges }
    }

    /// Trading paths between uncertain items once agent `agent` (0-based)
    /// fixes `order`: paths in the graph with the certain agents' edges, the
    /// recorded pairs of `reach` as shortcuts, and `agent`'s edges under `order`.
    fn extend(&self, reach: &ReachabilitySet, agent: usize, order: &PreferenceOrder) -> ReachabilitySet {
        let (n, k) = (self.inst.n(), self.inst.k);
        let own: Vec<usize> = order.better_than(ItemId(agent)).iter().map(|o| o.0).collect();
        let successors = |x: usize| -> Vec<usize> {
            if x >= k {
                self.certain_edges[x].clone()
            } else {
                let mut out: Vec<usize> = (0..k).filter(|&b| reach.contains(x, b)).collect();
                if x == agent {
                    out.extend(&own);
                }
                out
            }
        };
        let mut next = ReachabilitySet::empty(k);
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for start in 0..k {
            seen.iter_mut().for_each(|s| *s = false);
            queue.clear();
            for y in successors(start) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
            while let Some(x) = queue.pop_front() {
                if x < k {
                    next.insert(start, x);
                }
                for y in successors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        next
    }
}

/// Builds the layered graph for a relabeled instance.
///
/// Requires that the certain agents alone admit no trading cycle; otherwise
/// diagonal pairs would not capture every cycle.
pub fn build_fpt_graph(inst: &RelabeledInstance, limits: &Limits) -> Result<FptGraph> {
    if inst.certain_only_cycle() {
        return Err(Error::Precondition(
            "certain agents alone admit a trading cycle; probability is zero".into(),
        ));
    }
    let k = inst.k;
    let uncertain: Vec<AgentId> = (0..k).map(AgentId).collect();
    let denominators = CommonDenominatorForm::of(&inst.model, &uncertain);
    let closure = Closure::new(inst);

    let mut vertices = vec![FptVertex::Source];
    let mut edges = Vec::new();
    let push = |vertices: &mut Vec<FptVertex>, v: FptVertex| -> Result<usize> {
        if vertices.len() >= limits.max_fpt_vertices {
            return Err(Error::guard(
                "counting graph vertices",
                vertices.len() as u128 + 1,
                limits.max_fpt_vertices as u128,
            ));
        }
        vertices.push(v);
        Ok(vertices.len() - 1)
    };

    let first = push(&mut vertices, FptVertex::Layer { layer: 1, reach: ReachabilitySet::empty(k) })?;
    edges.push(FptEdge { from: 0, to: first, weight: BigUint::one() });
    let mut layer: Vec<(ReachabilitySet, usize)> = vec![(ReachabilitySet::empty(k), first)];

    for i in 0..k {
        let mut next_layer: Vec<(ReachabilitySet, usize)> = Vec::new();
        let mut index: HashMap<ReachabilitySet, usize> = HashMap::new();
        for (reach, vid) in &layer {
            for (j, entry) in inst.model.support(AgentId(i)).iter().enumerate() {
                let cid = push(
                    &mut vertices,
                    FptVertex::Choice { agent: i + 1, order: j, reach: reach.clone() },
                )?;
                edges.push(FptEdge {
                    from: *vid,
                    to: cid,
                    weight: denominators.numerators[i][j].clone(),
                });
                let extended = closure.extend(reach, i, &entry.order);
                let nid = match index.get(&extended) {
                    Some(&nid) => nid,
                    None => {
                        let nid = push(
                            &mut vertices,
                            FptVertex::Layer { layer: i + 2, reach: extended.clone() },
                        )?;
                        index.insert(extended.clone(), nid);
                        next_layer.push((extended, nid));
                        nid
                    }
                };
                edges.push(FptEdge { from: cid, to: nid, weight: BigUint::one() });
            }
        }
        layer = next_layer;
    }

    let target = push(&mut vertices, FptVertex::Target)?;
    for (reach, vid) in &layer {
        if !reach.has_diagonal() {
            edges.push(FptEdge { from: *vid, to: target, weight: BigUint::one() });
        }
    }
    Ok(FptGraph { k, denominators, vertices, edges, source: 0, target })
}

pub fn po_probability_fpt(model: &LotteryModel, assignment: &Assignment, limits: &Limits) -> Result<Rational> {
    assignment.check_dimension(model.n())?;
    if model.k() == 0 {
        let profile = model.realize(&vec![0; model.n()]);
        let po = is_pareto_optimal(&profile, assignment)?;
        return Ok(if po { Rational::one() } else { Rational::zero() });
    }
    let inst = RelabeledInstance::new(model, assignment)?;
    if inst.certain_only_cycle() {
        return Ok(Rational::zero());
    }
    let graph = build_fpt_graph(&inst, limits)?;
    let walks = graph.weighted_walk_count();
    let scale = num_traits::pow(graph.denominators.denominator.clone(), graph.k);
    Ok(Rational::new(BigInt::from(walks), BigInt::from(scale)))
}

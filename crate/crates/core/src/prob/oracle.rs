//! Brute-force ground truth for the probability engines.
//!
//! Works on raw rank tables: every realizable profile is listed explicitly
//! and Pareto optimality is decided by a transitive closure of the item
//! trading graph. Nothing here goes through the trading-cycle search, the
//! model expansion or the engines it is used to check.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::Assignment;
use crate::uncertainty::{Rational, UncertaintyModel};

/// `ranks[agent][item]` = position of `item` in the agent's order.
type RankTable = Vec<Vec<usize>>;

fn rank_row(ranking: &[usize]) -> Vec<usize> {
    let mut row = vec![0; ranking.len()];
    for (pos, &item) in ranking.iter().enumerate() {
        row[item] = pos;
    }
    row
}

fn realizations(model: &UncertaintyModel, limits: &Limits) -> Result<Vec<(RankTable, Rational)>> {
    match model {
        UncertaintyModel::Joint(m) => Ok(m
            .entries()
            .iter()
            .map(|e| {
                let table = e.profile.orders().iter().map(|o| rank_row(&o.indices())).collect();
                (table, e.prob.clone())
            })
            .collect()),
        UncertaintyModel::Lottery(m) => {
            let per_agent: Vec<Vec<(Vec<usize>, Rational)>> = m
                .supports()
                .iter()
                .map(|s| s.iter().map(|e| (rank_row(&e.order.indices()), e.prob.clone())).collect())
                .collect();
            let mut total: u128 = 1;
            for s in &per_agent {
                total = total.saturating_mul(s.len() as u128);
                if total > limits.max_profiles {
                    return Err(Error::guard("oracle profiles", total, limits.max_profiles));
                }
            }
            // cartesian product, built agent by agent
            let mut acc: Vec<(RankTable, Rational)> = vec![(Vec::new(), Rational::one())];
            for options in &per_agent {
                let mut next = Vec::with_capacity(acc.len() * options.len());
                for (table, p) in &acc {
                    for (row, q) in options {
                        let mut t = table.clone();
                        t.push(row.clone());
                        next.push((t, p * q));
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
    }
}

/// Pareto optimal iff the closure of "holder of x would rather have y" has
/// no item reaching itself.
fn pareto_optimal(ranks: &RankTable, item_of: &[usize]) -> bool {
    let n = item_of.len();
    let mut holder = vec![0; n];
    for (agent, &item) in item_of.iter().enumerate() {
        holder[item] = agent;
    }
    let mut reach = vec![vec![false; n]; n];
    for x in 0..n {
        let h = holder[x];
        for y in 0..n {
            reach[x][y] = ranks[h][y] < ranks[h][x];
        }
    }
    for mid in 0..n {
        for x in 0..n {
            if reach[x][mid] {
                let via = reach[mid].clone();
                for (r, v) in reach[x].iter_mut().zip(via) {
                    *r |= v;
                }
            }
        }
    }
    (0..n).all(|x| !reach[x][x])
}

pub fn oracle_po_probability(model: &UncertaintyModel, assignment: &Assignment, limits: &Limits) -> Result<Rational> {
    assignment.check_dimension(model.n())?;
    let item_of = assignment.indices();
    let mut total = Rational::zero();
    for (table, p) in realizations(model, limits)? {
        if pareto_optimal(&table, &item_of) {
            total += p;
        }
    }
    Ok(total)
}

/// Brute force over all `n!` assignments: is there one that Pareto dominates
/// `assignment` in every realizable profile?
pub fn oracle_certainly_dominated(model: &UncertaintyModel, assignment: &Assignment, limits: &Limits) -> Result<bool> {
    let n = model.n();
    assignment.check_dimension(n)?;
    if n > limits.max_enumerate_agents {
        return Err(Error::guard("agents to enumerate", n as u128, limits.max_enumerate_agents as u128));
    }
    let tables = realizations(model, limits)?;
    let current = assignment.indices();
    let dominates = |ranks: &RankTable, q: &[usize]| {
        let mut strict = false;
        for a in 0..n {
            let (rq, rp) = (ranks[a][q[a]], ranks[a][current[a]]);
            if rq > rp {
                return false;
            }
            strict |= rq < rp;
        }
        strict
    };
    let mut q: Vec<usize> = (0..n).collect();
    loop {
        if tables.iter().all(|(t, _)| dominates(t, &q)) {
            return Ok(true);
        }
        if !next_lex(&mut q) {
            return Ok(false);
        }
    }
}

fn next_lex(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Largest oracle probability over every assignment; ties go to the
/// smallest assignment.
pub fn oracle_best_assignment(model: &UncertaintyModel, limits: &Limits) -> Result<(Assignment, Rational)> {
    let n = model.n();
    if n > limits.max_enumerate_agents {
        return Err(Error::guard("agents to enumerate", n as u128, limits.max_enumerate_agents as u128));
    }
    let tables = realizations(model, limits)?;
    let mut q: Vec<usize> = (0..n).collect();
    let mut best: Option<(Vec<usize>, Rational)> = None;
    loop {
        let p: Rational = tables
            .iter()
            .filter(|(t, _)| pareto_optimal(t, &q))
            .map(|(_, p)| p.clone())
            .fold(Rational::zero(), |a, b| a + b);
        if best.as_ref().is_none_or(|(_, b)| p > *b) {
            best = Some((q.clone(), p));
        }
        if !next_lex(&mut q) {
            break;
        }
    }
    let (items, p) = best.expect("at least one assignment");
    Ok((Assignment::from_indices(&items)?, p))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example_lottery;
    use crate::model::Profile;
    use crate::uncertainty::{rational, LotteryModel};

    #[test]
    fn example_values() {
        let m: UncertaintyModel = example_lottery().into();
        let lim = Limits::default();
        assert_eq!(oracle_po_probability(&m, &Assignment::identity(3), &lim).unwrap(), rational(1, 1));
        let bac = Assignment::from_indices(&[1, 0, 2]).unwrap();
        assert_eq!(oracle_po_probability(&m, &bac, &lim).unwrap(), rational(2, 5));
    }

    #[test]
    fn certain_model_is_zero_or_one() {
        let p = Profile::from_indices(&[vec![1, 0, 2], vec![0, 2, 1], vec![0, 1, 2]]).unwrap();
        let m: UncertaintyModel = LotteryModel::certain(&p).into();
        let lim = Limits::default();
        for perm in crate::model::Permutations::new(3) {
            let v = oracle_po_probability(&m, &Assignment::from_indices(&perm).unwrap(), &lim).unwrap();
            assert!(v == rational(0, 1) || v == rational(1, 1));
        }
    }

    #[test]
    fn guard_applies() {
        let m: UncertaintyModel = example_lottery().into();
        let lim = Limits::default().with_max_profiles(1);
        assert!(oracle_po_probability(&m, &Assignment::identity(3), &lim).is_err());
    }
}

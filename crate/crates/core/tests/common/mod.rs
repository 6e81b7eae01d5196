//! Brute force straight from the definitions, sharing no code with the
//! library beyond its data types.
#![allow(dead_code)]

use num_traits::{One, Zero};
use upo_core::generate::random_assignment;
use upo_core::{AgentId, Assignment, JointModel, LotteryModel, Rational, UncertaintyModel};

/// `rank[agent][item]`, 0 is best.
pub type Ranks = Vec<Vec<usize>>;

pub fn ranks_of(rankings: &[Vec<usize>]) -> Ranks {
    rankings
        .iter()
        .map(|r| {
            let mut rank = vec![0; r.len()];
            for (pos, &item) in r.iter().enumerate() {
                rank[item] = pos;
            }
            rank
        })
        .collect()
}

pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `b` gives nobody a worse item than `a` and somebody a better one.
pub fn dominates(ranks: &Ranks, b: &[usize], a: &[usize]) -> bool {
    let mut strict = false;
    for i in 0..a.len() {
        let (rb, ra) = (ranks[i][b[i]], ranks[i][a[i]]);
        if rb > ra {
            return false;
        }
        strict |= rb < ra;
    }
    strict
}

pub fn is_po(ranks: &Ranks, a: &[usize], perms: &[Vec<usize>]) -> bool {
    !perms.iter().any(|b| dominates(ranks, b, a))
}

/// Every realizable profile with its probability, as rank tables.
pub fn lottery_profiles(model: &LotteryModel) -> Vec<(Ranks, Rational)> {
    let mut out = vec![(Vec::new(), Rational::one())];
    for support in model.supports() {
        let mut next = Vec::new();
        for (prefix, p) in &out {
            for e in support {
                let mut rankings: Vec<Vec<usize>> = prefix.clone();
                rankings.push(e.order.indices());
                next.push((rankings, p * &e.prob));
            }
        }
        out = next;
    }
    out.into_iter().map(|(r, p)| (ranks_of(&r), p)).collect()
}

pub fn joint_profiles(model: &JointModel) -> Vec<(Ranks, Rational)> {
    model
        .entries()
        .iter()
        .map(|e| {
            let rankings: Vec<Vec<usize>> = e.profile.orders().iter().map(|o| o.indices()).collect();
            (ranks_of(&rankings), e.prob.clone())
        })
        .collect()
}

pub fn profiles(model: &UncertaintyModel) -> Vec<(Ranks, Rational)> {
    match model {
        UncertaintyModel::Lottery(m) => lottery_profiles(m),
        UncertaintyModel::Joint(m) => joint_profiles(m),
    }
}

pub fn probability(profiles: &[(Ranks, Rational)], a: &[usize]) -> Rational {
    let perms = all_perms(a.len());
    profiles
        .iter()
        .filter(|(r, _)| is_po(r, a, &perms))
        .fold(Rational::zero(), |acc, (_, p)| acc + p)
}

/// Some single assignment dominates `a` in every realizable profile.
pub fn certainly_dominated(profiles: &[(Ranks, Rational)], a: &[usize]) -> bool {
    all_perms(a.len())
        .iter()
        .any(|b| profiles.iter().all(|(r, _)| dominates(r, b, a)))
}

/// Maximum PO probability over all assignments.
pub fn max_probability(profiles: &[(Ranks, Rational)], n: usize) -> Rational {
    all_perms(n)
        .iter()
        .map(|a| probability(profiles, a))
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Serial dictatorship on rankings: `order` lists agents in picking order.
pub fn sd(rankings: &[Vec<usize>], order: &[usize]) -> Vec<usize> {
    let n = rankings.len();
    let mut taken = vec![false; n];
    let mut out = vec![usize::MAX; n];
    for &agent in order {
        let item = *rankings[agent].iter().find(|&&o| !taken[o]).unwrap();
        taken[item] = true;
        out[agent] = item;
    }
    out
}

pub fn sdf(rankings: &[Vec<usize>], agent: usize, item: usize) -> bool {
    all_perms(rankings.len()).iter().any(|p| sd(rankings, p)[agent] == item)
}

pub fn sat_count(n: usize, clauses: &[(usize, usize)]) -> u64 {
    (0u32..1 << n)
        .filter(|bits| clauses.iter().all(|&(a, b)| bits >> a & 1 == 1 || bits >> b & 1 == 1))
        .count() as u64
}

/// Half the time a random assignment, otherwise the serial dictatorship
/// outcome of a random realization, so that both zero and positive
/// probabilities are well represented.
pub fn test_assignment(model: &LotteryModel, seed: u64) -> Assignment {
    let n = model.n();
    if seed.is_multiple_of(2) {
        return random_assignment(n, seed.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    }
    let picks = random_assignment(n, seed ^ 0x5555).indices();
    let rankings: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            let support = model.support(AgentId(a));
            support[(seed as usize / 7 + a) % support.len()].order.indices()
        })
        .collect();
    Assignment::from_indices(&sd(&rankings, &picks)).unwrap()
}

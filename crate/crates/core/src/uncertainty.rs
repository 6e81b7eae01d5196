//! Lottery and joint probability models over preference profiles.
//!
//! All probabilities are exact rationals. A lottery model gives every agent
//! an independent distribution over strict orders; a joint model is a
//! distribution over whole profiles, stored as its explicit support.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result, Violation, ViolationKind};
use crate::limits::Limits;
use crate::model::{AgentId, ItemId, PreferenceOrder, Profile};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"3/5"`, `"0.6"` or `"1"` into an exact rational.
pub fn parse_probability(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::parse(format!("probability {text:?}"), "expected a fraction like 3/5 or a decimal like 0.6");
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::parse(format!("probability {text:?}"), "zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Reduced `"num/den"` form; one is `"1/1"`.
pub fn format_probability(p: &Rational) -> String {
    format!("{}/{}", p.numer(), p.denom())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LotteryEntry {
    pub order: PreferenceOrder,
    pub prob: Rational,
}

impl LotteryEntry {
    pub fn new(order: PreferenceOrder, prob: Rational) -> Self {
        Self { order, prob }
    }
}

/// Independent per-agent lotteries over strict orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LotteryModel {
    agents: Vec<Vec<LotteryEntry>>,
}

impl LotteryModel {
    pub fn new(agents: Vec<Vec<LotteryEntry>>) -> Result<Self> {
        validate_lottery(&agents).map_err(Error::InvalidModel)?;
        Ok(Self { agents })
    }

    /// Same as [`LotteryModel::new`] after merging repeated orders of an agent
    /// into one entry carrying the summed probability.
    pub fn new_merging_duplicates(agents: Vec<Vec<LotteryEntry>>) -> Result<Self> {
        Self::new(agents.into_iter().map(merge_duplicate_orders).collect())
    }

    /// Every agent certain of its order in `profile`.
    pub fn certain(profile: &Profile) -> Self {
        Self {
            agents: profile
                .orders()
                .iter()
                .map(|o| vec![LotteryEntry::new(o.clone(), Rational::one())])
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn support(&self, agent: AgentId) -> &[LotteryEntry] {
        &self.agents[agent.0]
    }

    pub fn supports(&self) -> &[Vec<LotteryEntry>] {
        &self.agents
    }

    pub fn is_certain(&self, agent: AgentId) -> bool {
        self.agents[agent.0].len() == 1
    }

    pub fn uncertain_agents(&self) -> Vec<AgentId> {
        (0..self.n()).map(AgentId).filter(|&a| !self.is_certain(a)).collect()
    }

    /// Number of uncertain agents.
    pub fn k(&self) -> usize {
        self.agents.iter().filter(|s| s.len() > 1).count()
    }

    /// Number of realizable profiles (product of support sizes), saturating.
    pub fn profile_count(&self) -> u128 {
        self.agents
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }

    /// The profile in which every agent takes its order at the given index.
    pub fn realize(&self, choice: &[usize]) -> Profile {
        Profile::new(
            self.agents
                .iter()
                .zip(choice)
                .map(|(s, &j)| s[j].order.clone())
                .collect(),
        )
        .expect("validated dimensions")
    }
}

fn merge_duplicate_orders(entries: Vec<LotteryEntry>) -> Vec<LotteryEntry> {
    let mut merged: Vec<LotteryEntry> = Vec::with_capacity(entries.len());
    for entry in entries {
        match merged.iter_mut().find(|e| e.order == entry.order) {
            Some(existing) => existing.prob += entry.prob,
            None => merged.push(entry),
        }
    }
    merged
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointEntry {
    pub profile: Profile,
    pub prob: Rational,
}

impl JointEntry {
    pub fn new(profile: Profile, prob: Rational) -> Self {
        Self { profile, prob }
    }
}

/// A distribution over whole profiles, kept sorted by profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointModel {
    n: usize,
    entries: Vec<JointEntry>,
}

impl JointModel {
    pub fn new(n: usize, mut entries: Vec<JointEntry>) -> Result<Self> {
        validate_joint(n, &entries).map_err(Error::InvalidModel)?;
        entries.sort_by(|a, b| a.profile.cmp(&b.profile));
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[JointEntry] {
        &self.entries
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UncertaintyModel {
    Lottery(LotteryModel),
    Joint(JointModel),
}

impl UncertaintyModel {
    pub fn n(&self) -> usize {
        match self {
            UncertaintyModel::Lottery(m) => m.n(),
            UncertaintyModel::Joint(m) => m.n(),
        }
    }
}

impl From<LotteryModel> for UncertaintyModel {
    fn from(m: LotteryModel) -> Self {
        UncertaintyModel::Lottery(m)
    }
}

impl From<JointModel> for UncertaintyModel {
    fn from(m: JointModel) -> Self {
        UncertaintyModel::Joint(m)
    }
}

fn violation(location: String, kind: ViolationKind) -> Violation {
    Violation { location, kind }
}

fn check_distribution<'a>(
    location: &str,
    probs: impl Iterator<Item = (String, &'a Rational)>,
    out: &mut Vec<Violation>,
) {
    let mut sum = Rational::zero();
    let mut count = 0;
    for (loc, p) in probs {
        count += 1;
        if !p.is_positive() {
            out.push(violation(loc, ViolationKind::NonPositiveProbability(format_probability(p))));
        }
        sum += p;
    }
    if count == 0 {
        out.push(violation(location.to_string(), ViolationKind::EmptySupport));
    } else if !sum.is_one() {
        out.push(violation(location.to_string(), ViolationKind::SumNotOne(format_probability(&sum))));
    }
}

pub fn validate_lottery(agents: &[Vec<LotteryEntry>]) -> Result<(), Vec<Violation>> {
    let n = agents.len();
    let mut out = Vec::new();
    for (a, support) in agents.iter().enumerate() {
        let loc = format!("agent {a}");
        check_distribution(
            &loc,
            support.iter().enumerate().map(|(j, e)| (format!("agent {a} order {j}"), &e.prob)),
            &mut out,
        );
        let mut seen = HashSet::new();
        for (j, e) in support.iter().enumerate() {
            if e.order.len() != n {
                out.push(violation(
                    format!("agent {a} order {j}"),
                    ViolationKind::Dimension { expected: n, found: e.order.len() },
                ));
            }
            if !seen.insert(&e.order) {
                out.push(violation(format!("agent {a} order {j}"), ViolationKind::DuplicateOrder));
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

pub fn validate_joint(n: usize, entries: &[JointEntry]) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    check_distribution(
        "profiles",
        entries.iter().enumerate().map(|(j, e)| (format!("profile {j}"), &e.prob)),
        &mut out,
    );
    let mut seen = HashSet::new();
    for (j, e) in entries.iter().enumerate() {
        if e.profile.n() != n {
            out.push(violation(
                format!("profile {j}"),
                ViolationKind::Dimension { expected: n, found: e.profile.n() },
            ));
        }
        if !seen.insert(&e.profile) {
            out.push(violation(format!("profile {j}"), ViolationKind::DuplicateProfile));
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

pub fn validate_model(model: &UncertaintyModel) -> Result<(), Vec<Violation>> {
    match model {
        UncertaintyModel::Lottery(m) => validate_lottery(&m.agents),
        UncertaintyModel::Joint(m) => validate_joint(m.n, &m.entries),
    }
}

/// `b ≻ c` for an agent iff `b` precedes `c` in every order of its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertainlyPreferredRelation {
    n: usize,
    // per agent, row-major n x n
    relation: Vec<Vec<bool>>,
}

impl CertainlyPreferredRelation {
    pub fn of_lottery(model: &LotteryModel) -> Self {
        let n = model.n();
        let relation = model
            .supports()
            .iter()
            .map(|support| {
                let mut rel = vec![true; n * n];
                for b in 0..n {
                    rel[b * n + b] = false;
                }
                for entry in support {
                    for b in 0..n {
                        for c in 0..n {
                            if b != c && !entry.order.prefers(ItemId(b), ItemId(c)) {
                                rel[b * n + c] = false;
                            }
                        }
                    }
                }
                rel
            })
            .collect();
        Self { n, relation }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prefers(&self, agent: AgentId, b: ItemId, c: ItemId) -> bool {
        self.relation[agent.0][b.0 * self.n + c.0]
    }

    /// Ordered pairs `(b, c)` with `b` certainly preferred to `c`.
    pub fn pairs(&self, agent: AgentId) -> Vec<(ItemId, ItemId)> {
        let n = self.n;
        (0..n * n)
            .filter(|&x| self.relation[agent.0][x])
            .map(|x| (ItemId(x / n), ItemId(x % n)))
            .collect()
    }
}

pub fn certainly_prefers(model: &LotteryModel, agent: AgentId, b: ItemId, c: ItemId) -> Result<bool> {
    if b == c {
        return Err(Error::Precondition("certainly_prefers needs two distinct items".into()));
    }
    if agent.0 >= model.n() || b.0 >= model.n() || c.0 >= model.n() {
        return Err(Error::Precondition("agent or item out of range".into()));
    }
    Ok(model
        .support(agent)
        .iter()
        .all(|e| e.order.prefers(b, c)))
}

/// Product distribution of a lottery model, one profile per combination of
/// per-agent orders.
pub fn expand_lottery_to_joint(model: &LotteryModel, limits: &Limits) -> Result<JointModel> {
    let count = model.profile_count();
    if count > limits.max_profiles {
        return Err(Error::guard("realizable profiles", count, limits.max_profiles));
    }
    let n = model.n();
    let mut entries = Vec::with_capacity(count as usize);
    let mut choice = vec![0usize; n];
    loop {
        let prob = model
            .supports()
            .iter()
            .zip(&choice)
            .fold(Rational::one(), |acc, (s, &j)| acc * &s[j].prob);
        entries.push(JointEntry::new(model.realize(&choice), prob));
        if !advance(&mut choice, |a| model.support(AgentId(a)).len()) {
            break;
        }
    }
    JointModel::new(n, entries)
}

/// Support of a joint model in canonical (lexicographic profile) order.
pub fn support_profiles(model: &JointModel) -> Vec<(Profile, Rational)> {
    model
        .entries()
        .iter()
        .map(|e| (e.profile.clone(), e.prob.clone()))
        .collect()
}

/// Mixed-radix odometer step; returns false after the last combination.
pub(crate) fn advance(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for pos in (0..digits.len()).rev() {
        digits[pos] += 1;
        if digits[pos] < radix(pos) {
            return true;
        }
        digits[pos] = 0;
    }
    false
}

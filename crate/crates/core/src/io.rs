//! JSON instance documents, assignment syntax, result reports and the
//! monotone 2SAT text format.
//!
//! A lottery instance:
//!
//! ```json
//! {
//!   "model": "lottery",
//!   "items": ["a", "b", "c"],
//!   "agents": ["1", "2", "3"],
//!   "preferences": {
//!     "1": [{"order": ["a", "b", "c"], "prob": "0.6"},
//!           {"order": ["b", "a", "c"], "prob": "2/5"}],
//!     "2": [{"order": ["b", "a", "c"], "prob": "1"}],
//!     "3": [{"order": ["c", "b", "a"], "prob": "1"}]
//!   }
//! }
//! ```
//!
//! A joint instance replaces `preferences` with
//! `"profiles": [{"prob": "1/2", "orders": {"1": [...], ...}}, ...]`.

use std::collections::HashMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::decide::SdWitness;
use crate::error::{Error, Result, Violation};
use crate::model::{AgentId, Assignment, ItemId, PreferenceOrder, Profile};
use crate::reductions::{Monotone2Sat, SdfInstance};
use crate::uncertainty::{
    format_probability, parse_probability, JointEntry, JointModel, LotteryEntry, LotteryModel, Rational,
    UncertaintyModel,
};

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Lottery,
    Joint,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub model: ModelKind,
    pub items: Vec<String>,
    pub agents: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preferences: Option<IndexMap<String, Vec<OrderDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profiles: Option<Vec<ProfileDoc>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct OrderDoc {
    pub order: Vec<String>,
    pub prob: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    pub prob: String,
    pub orders: IndexMap<String, Vec<String>>,
}

/// Agent and item names with their indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Names {
    agents: Vec<String>,
    items: Vec<String>,
    agent_index: HashMap<String, usize>,
    item_index: HashMap<String, usize>,
}

impl Names {
    pub fn new(agents: Vec<String>, items: Vec<String>) -> Result<Self> {
        if agents.len() != items.len() {
            return Err(Error::parse(
                "agents",
                format!("{} agents but {} items", agents.len(), items.len()),
            ));
        }
        let agent_index = index_names("agents", &agents)?;
        let item_index = index_names("items", &items)?;
        Ok(Self { agents, items, agent_index, item_index })
    }

    /// Agents `1..=n`, items `o1..=on`.
    pub fn numbered(n: usize) -> Self {
        Self::new(
            (1..=n).map(|i| i.to_string()).collect(),
            (1..=n).map(|i| format!("o{i}")).collect(),
        )
        .expect("distinct generated names")
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn agent(&self, a: AgentId) -> &str {
        &self.agents[a.0]
    }

    pub fn item(&self, o: ItemId) -> &str {
        &self.items[o.0]
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn agent_id(&self, name: &str, location: &str) -> Result<AgentId> {
        self.agent_index
            .get(name)
            .map(|&i| AgentId(i))
            .ok_or_else(|| Error::parse(location, format!("unknown agent {name:?}")))
    }

    pub fn item_id(&self, name: &str, location: &str) -> Result<ItemId> {
        self.item_index
            .get(name)
            .map(|&i| ItemId(i))
            .ok_or_else(|| Error::parse(location, format!("unknown item {name:?}")))
    }

    pub fn order(&self, names: &[String], location: &str) -> Result<PreferenceOrder> {
        if names.len() != self.n() {
            return Err(Error::parse(
                location,
                format!("order lists {} items, expected {}", names.len(), self.n()),
            ));
        }
        let ids = names
            .iter()
            .map(|s| self.item_id(s, location))
            .collect::<Result<Vec<_>>>()?;
        PreferenceOrder::new(ids).map_err(|e| Error::parse(location, e.to_string()))
    }

    pub fn order_names(&self, order: &PreferenceOrder) -> Vec<String> {
        order.ranking().iter().map(|&o| self.item(o).to_string()).collect()
    }

    pub fn assignment_map(&self, assignment: &Assignment) -> IndexMap<String, String> {
        (0..assignment.n())
            .map(|a| {
                let agent = AgentId(a);
                (self.agent(agent).to_string(), self.item(assignment.item_of(agent)).to_string())
            })
            .collect()
    }

    fn rename_violation(&self, v: Violation) -> Violation {
        // "agent 3 order 1" -> "agent \"x\" order 1"
        let location = match v.location.strip_prefix("agent ") {
            Some(rest) => {
                let (num, tail) = rest.split_once(' ').unwrap_or((rest, ""));
                match num.parse::<usize>().ok().and_then(|i| self.agents.get(i)) {
                    Some(name) if tail.is_empty() => format!("agent {name:?}"),
                    Some(name) => format!("agent {name:?} {tail}"),
                    None => v.location.clone(),
                }
            }
            None => v.location.clone(),
        };
        Violation { location, kind: v.kind }
    }
}

fn index_names(location: &str, names: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(Error::parse(location, format!("duplicate name {name:?}")));
        }
    }
    Ok(index)
}

/// A validated model together with the names used in its document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub names: Names,
    pub model: UncertaintyModel,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Merge repeated orders of one agent instead of rejecting them.
    pub merge_duplicates: bool,
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_instance_with(text, ParseOptions::default())
}

pub fn parse_instance_with(text: &str, options: ParseOptions) -> Result<Instance> {
    let doc: InstanceDocument = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    instance_from_document(&doc, options)
}

pub fn instance_from_document(doc: &InstanceDocument, options: ParseOptions) -> Result<Instance> {
    let names = Names::new(doc.agents.clone(), doc.items.clone())?;
    let n = names.n();
    let model = match doc.model {
        ModelKind::Lottery => {
            if doc.profiles.is_some() {
                return Err(Error::parse("profiles", "a lottery instance uses \"preferences\""));
            }
            let prefs = doc
                .preferences
                .as_ref()
                .ok_or_else(|| Error::parse("preferences", "missing for a lottery instance"))?;
            let mut supports: Vec<Option<Vec<LotteryEntry>>> = vec![None; n];
            for (agent_name, entries) in prefs {
                let loc = format!("preferences.{agent_name:?}");
                let agent = names.agent_id(agent_name, &loc)?;
                let support = entries
                    .iter()
                    .enumerate()
                    .map(|(j, e)| {
                        let loc = format!("{loc}[{j}]");
                        Ok(LotteryEntry::new(
                            names.order(&e.order, &format!("{loc}.order"))?,
                            parse_probability(&e.prob).map_err(|_| Error::parse(format!("{loc}.prob"), format!("bad probability {:?}", e.prob)))?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                supports[agent.0] = Some(support);
            }
            let supports = supports
                .into_iter()
                .enumerate()
                .map(|(a, s)| s.ok_or_else(|| Error::parse("preferences", format!("no entry for agent {:?}", names.agent(AgentId(a))))))
                .collect::<Result<Vec<_>>>()?;
            let built = if options.merge_duplicates {
                LotteryModel::new_merging_duplicates(supports)
            } else {
                LotteryModel::new(supports)
            };
            UncertaintyModel::Lottery(built.map_err(|e| rename_model_error(e, &names))?)
        }
        ModelKind::Joint => {
            if doc.preferences.is_some() {
                return Err(Error::parse("preferences", "a joint instance uses \"profiles\""));
            }
            let profiles = doc
                .profiles
                .as_ref()
                .ok_or_else(|| Error::parse("profiles", "missing for a joint instance"))?;
            let entries = profiles
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    let loc = format!("profiles[{j}]");
                    let profile = profile_from_orders(&names, &p.orders, &format!("{loc}.orders"))?;
                    let prob = parse_probability(&p.prob)
                        .map_err(|_| Error::parse(format!("{loc}.prob"), format!("bad probability {:?}", p.prob)))?;
                    Ok(JointEntry::new(profile, prob))
                })
                .collect::<Result<Vec<_>>>()?;
            UncertaintyModel::Joint(JointModel::new(n, entries)?)
        }
    };
    Ok(Instance { names, model })
}

fn profile_from_orders(names: &Names, orders: &IndexMap<String, Vec<String>>, loc: &str) -> Result<Profile> {
    let n = names.n();
    let mut slots: Vec<Option<PreferenceOrder>> = vec![None; n];
    for (agent_name, order) in orders {
        let agent = names.agent_id(agent_name, loc)?;
        slots[agent.0] = Some(names.order(order, &format!("{loc}.{agent_name:?}"))?);
    }
    let orders = slots
        .into_iter()
        .enumerate()
        .map(|(a, o)| o.ok_or_else(|| Error::parse(loc, format!("no order for agent {:?}", names.agent(AgentId(a))))))
        .collect::<Result<Vec<_>>>()?;
    Profile::new(orders)
}

fn rename_model_error(e: Error, names: &Names) -> Error {
    match e {
        Error::InvalidModel(vs) => Error::InvalidModel(vs.into_iter().map(|v| names.rename_violation(v)).collect()),
        other => other,
    }
}

impl Instance {
    /// Canonical document: probabilities as reduced fractions, agents in
    /// index order, joint profiles in canonical order.
    pub fn to_document(&self) -> InstanceDocument {
        let names = &self.names;
        let mut doc = InstanceDocument {
            model: ModelKind::Lottery,
            items: names.items.clone(),
            agents: names.agents.clone(),
            preferences: None,
            profiles: None,
        };
        match &self.model {
            UncertaintyModel::Lottery(m) => {
                doc.preferences = Some(
                    m.supports()
                        .iter()
                        .enumerate()
                        .map(|(a, support)| {
                            let entries = support
                                .iter()
                                .map(|e| OrderDoc {
                                    order: names.order_names(&e.order),
                                    prob: format_probability(&e.prob),
                                })
                                .collect();
                            (names.agent(AgentId(a)).to_string(), entries)
                        })
                        .collect(),
                );
            }
            UncertaintyModel::Joint(m) => {
                doc.model = ModelKind::Joint;
                doc.profiles = Some(
                    m.entries()
                        .iter()
                        .map(|e| ProfileDoc {
                            prob: format_probability(&e.prob),
                            orders: profile_names(names, &e.profile),
                        })
                        .collect(),
                );
            }
        }
        doc
    }

    pub fn to_json(&self) -> String {
        serialize_result(&self.to_document())
    }
}

fn profile_names(names: &Names, profile: &Profile) -> IndexMap<String, Vec<String>> {
    profile
        .orders()
        .iter()
        .enumerate()
        .map(|(a, o)| (names.agent(AgentId(a)).to_string(), names.order_names(o)))
        .collect()
}

/// Reads an assignment either as a JSON object `{"agent": "item", ...}` or
/// inline as `agent=item,agent=item,...`.
pub fn parse_assignment(text: &str, names: &Names) -> Result<Assignment> {
    let text = text.trim();
    let pairs: Vec<(String, String)> = if text.starts_with('{') {
        let map: IndexMap<String, String> = serde_json::from_str(text)
            .map_err(|e| Error::parse("assignment", e.to_string()))?;
        map.into_iter().collect()
    } else {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|pair| {
                pair.split_once('=')
                    .map(|(a, o)| (a.trim().to_string(), o.trim().to_string()))
                    .ok_or_else(|| Error::parse("assignment", format!("expected agent=item, got {pair:?}")))
            })
            .collect::<Result<_>>()?
    };
    let n = names.n();
    let mut items: Vec<Option<ItemId>> = vec![None; n];
    for (agent, item) in &pairs {
        let a = names.agent_id(agent, "assignment")?;
        if items[a.0].is_some() {
            return Err(Error::parse("assignment", format!("agent {agent:?} assigned twice")));
        }
        items[a.0] = Some(names.item_id(item, "assignment")?);
    }
    let items = items
        .into_iter()
        .enumerate()
        .map(|(a, o)| o.ok_or_else(|| Error::parse("assignment", format!("agent {:?} has no item", names.agent(AgentId(a))))))
        .collect::<Result<Vec<_>>>()?;
    Assignment::new(items).map_err(|e| Error::parse("assignment", e.to_string()))
}

/// Deterministic pretty JSON followed by a newline.
pub fn serialize_result<T: Serialize>(result: &T) -> String {
    let mut s = serde_json::to_string_pretty(result).expect("report types serialize");
    s.push('\n');
    s
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityReport {
    pub assignment: IndexMap<String, String>,
    pub probability: String,
}

impl ProbabilityReport {
    pub fn new(names: &Names, assignment: &Assignment, probability: &Rational) -> Self {
        Self {
            assignment: names.assignment_map(assignment),
            probability: format_probability(probability),
        }
    }
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub permutation: Vec<String>,
    pub orders: IndexMap<String, Vec<String>>,
}

impl WitnessReport {
    pub fn new(names: &Names, witness: &SdWitness) -> Self {
        Self {
            permutation: witness.permutation.agents().iter().map(|&a| names.agent(a).to_string()).collect(),
            orders: profile_names(names, &witness.profile),
        }
    }
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub question: String,
    pub assignment: IndexMap<String, String>,
    pub answer: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub goal: String,
    /// Explicit `null` when nothing qualifies.
    pub assignment: Option<IndexMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

pub const NO_CERTAINLY_PO: &str = "no certainly-PO assignment";

impl SolveReport {
    pub fn certain(names: &Names, found: Option<&Assignment>) -> Self {
        Self {
            goal: "certain".into(),
            assignment: found.map(|a| names.assignment_map(a)),
            probability: None,
            reason: found.is_none().then(|| NO_CERTAINLY_PO.to_string()),
        }
    }

    pub fn best(names: &Names, assignment: &Assignment, probability: &Rational) -> Self {
        Self {
            goal: "best".into(),
            assignment: Some(names.assignment_map(assignment)),
            probability: Some(format_probability(probability)),
            reason: None,
        }
    }
}

/// Serial dictatorship feasibility input.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SdfDocument {
    pub items: Vec<String>,
    pub agents: Vec<String>,
    pub profile: IndexMap<String, Vec<String>>,
    pub agent: String,
    pub item: String,
}

pub fn parse_sdf(text: &str) -> Result<(SdfInstance, Names)> {
    let doc: SdfDocument = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let names = Names::new(doc.agents.clone(), doc.items.clone())?;
    let profile = profile_from_orders(&names, &doc.profile, "profile")?;
    let agent = names.agent_id(&doc.agent, "agent")?;
    let item = names.item_id(&doc.item, "item")?;
    Ok((SdfInstance::new(profile, agent, item)?, names))
}

pub fn sdf_to_document(instance: &SdfInstance, names: &Names) -> SdfDocument {
    SdfDocument {
        items: names.items.clone(),
        agents: names.agents.clone(),
        profile: profile_names(names, &instance.profile),
        agent: names.agent(instance.agent).to_string(),
        item: names.item(instance.item).to_string(),
    }
}

/// Reads `p m2sat <n> <m>` followed by `m` lines `i j` (1-based). Blank
/// lines and lines starting with `c` are ignored.
pub fn parse_m2sat(text: &str) -> Result<Monotone2Sat> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let loc = format!("line {}", lineno + 1);
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if header.is_none() {
            match fields.as_slice() {
                ["p", "m2sat", n, m] => {
                    let n = n.parse().map_err(|_| Error::parse(&loc, "bad variable count"))?;
                    let m = m.parse().map_err(|_| Error::parse(&loc, "bad clause count"))?;
                    header = Some((n, m));
                }
                _ => return Err(Error::parse(&loc, "expected header \"p m2sat <n> <m>\"")),
            }
            continue;
        }
        let [a, b] = fields.as_slice() else {
            return Err(Error::parse(&loc, "expected a clause \"i j\""));
        };
        let parse = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::parse(&loc, format!("bad variable {s:?}; variables are positive, 1-based"))),
            }
        };
        clauses.push((parse(a)?, parse(b)?));
    }
    let (n, m) = header.ok_or_else(|| Error::parse("line 1", "missing header"))?;
    if clauses.len() != m {
        return Err(Error::parse("clauses", format!("header announces {m} clauses, found {}", clauses.len())));
    }
    Monotone2Sat::new(n, clauses)
}

pub fn write_m2sat(formula: &Monotone2Sat) -> String {
    let mut out = format!("p m2sat {} {}\n", formula.variables(), formula.clauses().len());
    for (a, b) in formula.clauses() {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

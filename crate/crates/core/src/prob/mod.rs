//! Exact computation of the probability that an assignment is Pareto optimal.

mod enumerate;
mod fpt;
mod joint;
mod oracle;

use std::fmt;
use std::str::FromStr;

pub use enumerate::po_probability_enum;
pub use fpt::{
    build_fpt_graph, po_probability_fpt, CommonDenominatorForm, FptEdge, FptGraph, FptVertex, ReachabilitySet,
    RelabeledInstance,
};
pub use joint::po_probability_joint;
pub use oracle::{oracle_best_assignment, oracle_certainly_dominated, oracle_po_probability};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::Assignment;
use crate::uncertainty::{expand_lottery_to_joint, Rational, UncertaintyModel};

/// Largest `k` for which `Engine::Auto` prefers the layered-graph engine.
pub const AUTO_FPT_MAX_K: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Auto,
    /// Expand to a joint model (if needed) and sum over its support.
    Joint,
    Enum,
    Fpt,
    Oracle,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Engine::Auto,
            "joint" => Engine::Joint,
            "enum" => Engine::Enum,
            "fpt" => Engine::Fpt,
            "oracle" => Engine::Oracle,
            other => return Err(Error::parse("engine", format!("unknown engine {other:?}"))),
        })
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Auto => "auto",
            Engine::Joint => "joint",
            Engine::Enum => "enum",
            Engine::Fpt => "fpt",
            Engine::Oracle => "oracle",
        })
    }
}

/// Runs the selected engine. `Auto` uses the layered-graph engine for lottery
/// models with at most [`AUTO_FPT_MAX_K`] uncertain agents, enumeration
/// otherwise, and support summation for joint models.
pub fn po_probability(
    model: &UncertaintyModel,
    assignment: &Assignment,
    engine: Engine,
    limits: &Limits,
) -> Result<Rational> {
    match (engine, model) {
        (Engine::Oracle, _) => oracle_po_probability(model, assignment, limits),
        (Engine::Joint | Engine::Auto, UncertaintyModel::Joint(m)) => po_probability_joint(m, assignment),
        (Engine::Joint, UncertaintyModel::Lottery(m)) => {
            po_probability_joint(&expand_lottery_to_joint(m, limits)?, assignment)
        }
        (Engine::Enum, UncertaintyModel::Lottery(m)) => po_probability_enum(m, assignment, limits),
        (Engine::Fpt, UncertaintyModel::Lottery(m)) => po_probability_fpt(m, assignment, limits),
        (Engine::Auto, UncertaintyModel::Lottery(m)) => {
            if m.k() <= AUTO_FPT_MAX_K {
                po_probability_fpt(m, assignment, limits)
            } else {
                po_probability_enum(m, assignment, limits)
            }
        }
        (Engine::Enum | Engine::Fpt, UncertaintyModel::Joint(_)) => Err(Error::Unsupported(format!(
            "engine {engine} needs a lottery model"
        ))),
    }
}

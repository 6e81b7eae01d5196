use num_traits::Zero;

use crate::error::Result;
use crate::model::{is_pareto_optimal, Assignment};
use crate::uncertainty::{JointModel, Rational};

/// Total weight of the support profiles in which `assignment` is PO.
pub fn po_probability_joint(model: &JointModel, assignment: &Assignment) -> Result<Rational> {
    assignment.check_dimension(model.n())?;
    let mut total = Rational::zero();
    for entry in model.entries() {
        if is_pareto_optimal(&entry.profile, assignment)? {
            total += &entry.prob;
        }
    }
    Ok(total)
}

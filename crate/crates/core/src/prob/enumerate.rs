use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::{is_pareto_optimal, Assignment};
use crate::uncertainty::{advance, LotteryModel, Rational};

/// Sums over every combination of the uncertain agents' orders; certain
/// agents stay fixed, so the loop runs over `∏ u_i` profiles.
pub fn po_probability_enum(model: &LotteryModel, assignment: &Assignment, limits: &Limits) -> Result<Rational> {
    assignment.check_dimension(model.n())?;
    let count = model.profile_count();
    if count > limits.max_profiles {
        return Err(Error::guard("realizable profiles", count, limits.max_profiles));
    }
    let uncertain = model.uncertain_agents();
    let mut choice = vec![0usize; model.n()];
    let mut digits = vec![0usize; uncertain.len()];
    let mut total = Rational::zero();
    loop {
        for (d, a) in digits.iter().zip(&uncertain) {
            choice[a.0] = *d;
        }
        let profile = model.realize(&choice);
        if is_pareto_optimal(&profile, assignment)? {
            let weight = uncertain
                .iter()
                .zip(&digits)
                .fold(Rational::one(), |acc, (a, &j)| acc * &model.support(*a)[j].prob);
            total += weight;
        }
        if !advance(&mut digits, |pos| model.support(uncertain[pos]).len()) {
            break;
        }
    }
    Ok(total)
}

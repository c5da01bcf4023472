//! Polynomial-time special cases.

pub mod complete;
pub mod general_factor;
pub mod maxmin_lowdeg;
pub mod mov_deg4;
pub mod two_colors;

pub use complete::{
    kappa_partition, realize, solve_complete, solve_complete_maxmin, solve_complete_mov, CountTable,
};
pub use general_factor::{solve_general_factor_exact, GNode, Gadget, GeneralFactorInstance};
pub use maxmin_lowdeg::{maxmin_lowdeg_gadget, solve_maxmin_lowdeg};
pub use mov_deg4::{mov_gadget, solve_mov_deg4};
pub use two_colors::{solve_two_colors, GadgetKit2C, GadgetShape, Marks, ADMISSIBLE};

use crate::error::{Error, Result};
use crate::model::{verify, Answer, Instance, Matching};

/// Instances where every left vertex has at most one neighbor: the only
/// candidate assignment is forced.
pub fn solve_direct(instance: &Instance) -> Result<Answer> {
    if instance.max_left_degree() > 1 {
        return Err(Error::input(format!(
            "direct solver needs left degrees at most 1, got {}",
            instance.max_left_degree()
        )));
    }
    let left_adj = instance.left_adj();
    if left_adj.iter().any(Vec::is_empty) {
        return Ok(Answer::No);
    }
    let matching = Matching::new(left_adj.iter().map(|a| a[0]).collect());
    Ok(if verify(instance, &matching)?.is_valid() {
        Answer::Yes(matching)
    } else {
        Answer::No
    })
}

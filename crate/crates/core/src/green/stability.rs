//! R- and L-stability of a morphism in a finite category.

use serde::{Deserialize, Serialize};

use super::{GreenData, Relation};
use crate::category::Category;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stability {
    /// `x·a J x` implies `x·a R x` for every `x` composable with `a`.
    pub r_stable: bool,
    /// `a·x J x` implies `a·x L x` for every `x` composable with `a`.
    pub l_stable: bool,
}

impl Stability {
    pub fn is_stable(self) -> bool {
        self.r_stable && self.l_stable
    }
}

pub fn stability(c: &Category, green: &GreenData, a: usize) -> Stability {
    let r_stable = c.left_composable(a).all(|x| {
        let xa = c.product(x, a);
        !green.related(Relation::J, xa, x) || green.related(Relation::R, xa, x)
    });
    let l_stable = c.right_composable(a).all(|x| {
        let ax = c.product(a, x);
        !green.related(Relation::J, ax, x) || green.related(Relation::L, ax, x)
    });
    Stability { r_stable, l_stable }
}

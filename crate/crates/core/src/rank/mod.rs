//! Rank, idempotent rank and their relative versions by exhaustive search,
//! and checks of the rank formulas for regular frames.

mod formulas;
mod search;

pub use formulas::{
    rank_formula_check, rect_group_check, sandwich_bound_check, sandwich_rank_lower_bound, RankFormulaReport,
    RectGroupReport, RectGroupSpec, SandwichBound, SandwichBoundReport,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::FiniteSemigroup;

use search::Problem;

/// Limits for one rank computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankBudget {
    /// Search nodes across all deepening rounds.
    pub max_nodes: u64,
    /// Largest semigroup the search accepts.
    pub max_elements: usize,
    pub max_seconds: Option<f64>,
}

impl Default for RankBudget {
    fn default() -> Self {
        Self {
            max_nodes: 2_000_000,
            max_elements: 400,
            max_seconds: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetMarker {
    Budget,
}

/// Either an exact value or the marker `"budget"` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RankValue {
    Exact(usize),
    #[serde(with = "budget_marker")]
    Budget,
}

mod budget_marker {
    use super::BudgetMarker;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        BudgetMarker::Budget.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        BudgetMarker::deserialize(d).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankResult {
    pub value: RankValue,
    /// Certified bounds; equal when the value is exact.
    pub lower: usize,
    pub upper: usize,
    /// A generating set of size `upper` (together with the fixed set, for
    /// relative ranks).
    pub witness: Vec<usize>,
    /// Bound the deepening started from.
    pub lower_bound_used: usize,
    pub nodes_explored: u64,
    pub seconds: f64,
}

impl RankResult {
    pub fn exact(&self) -> Option<usize> {
        match self.value {
            RankValue::Exact(v) => Some(v),
            RankValue::Budget => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact().is_some()
    }
}

fn check_subset(s: &FiniteSemigroup, a: &[usize]) -> Result<()> {
    match a.iter().find(|&&x| x >= s.len()) {
        Some(&x) => Err(Error::Malformed(format!("element {x} is out of range"))),
        None => Ok(()),
    }
}

/// Smallest subsemigroup containing `a`.
pub fn generated(s: &FiniteSemigroup, a: &[usize]) -> Result<Vec<usize>> {
    check_subset(s, a)?;
    Ok(s.generated(a))
}

pub fn rank(s: &FiniteSemigroup, budget: RankBudget) -> Result<RankResult> {
    relative_rank(s, &[], budget)
}

/// Least `|B|` with `⟨A ∪ B⟩ = S`.
pub fn relative_rank(s: &FiniteSemigroup, a: &[usize], budget: RankBudget) -> Result<RankResult> {
    check_subset(s, a)?;
    Ok(Problem::new(s, a, vec![true; s.len()], budget)?.solve())
}

pub fn idrank(s: &FiniteSemigroup, budget: RankBudget) -> Result<RankResult> {
    relative_idrank(s, &[], budget)
}

/// Least `|B|` with `B` a set of idempotents and `⟨A ∪ B⟩ = S`.
pub fn relative_idrank(s: &FiniteSemigroup, a: &[usize], budget: RankBudget) -> Result<RankResult> {
    check_subset(s, a)?;
    let allowed: Vec<bool> = s.elements().map(|x| s.is_idempotent(x)).collect();
    Problem::new(s, a, allowed, budget)
        .map_err(|e| match e {
            Error::Unsupported(_) => Error::Unsupported("not generated by its idempotents".into()),
            other => other,
        })
        .map(|p| p.solve())
}

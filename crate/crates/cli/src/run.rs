//! Per-instance analysis and run records.

use std::collections::BTreeSet;
use std::time::Instant;

use anyhow::Context;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sandwich_core::category::{build_category_with, BuildOptions, ObjectId};
use sandwich_core::error::Error;
use sandwich_core::fiber::{analyze_frame, build_frame, hat_analysis, is_sandwich_regular, FrameChecks, FrameReport};
use sandwich_core::rank::{rank_formula_check, sandwich_bound_check, RankFormulaReport, SandwichBoundReport};
use sandwich_core::report::{Checker, Violation};
use sandwich_core::sandwich::{
    green_transfer_check, invertibility_check, invertibility_flags, p_set_check, p_sets, regular_set, sandwich,
    stability_transfer_check, Ambient, ClassCounts, Invertibility, PSetSizes, SandwichSemigroup,
};

use crate::config::{Budgets, Check, RunConfig, Scope};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankSection {
    pub sandwich_bound: SandwichBoundReport,
    pub formulas: Option<RankFormulaReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceReport {
    pub i: usize,
    pub j: usize,
    /// Index of `a` inside `S_ji`, and its payload.
    pub a: usize,
    pub a_payload: String,
    pub size: usize,
    pub sandwich_regular: bool,
    pub flags: Invertibility,
    pub p_set_sizes: PSetSizes,
    pub regular_count: usize,
    pub green_class_counts: ClassCounts,
    pub frame: Option<FrameReport>,
    pub rank: Option<RankSection>,
    pub checks: usize,
    pub violations: Vec<Violation>,
    /// Some computation ran out of budget.
    pub budget_exhausted: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub config_hash: String,
    pub config: RunConfig,
    pub instances: Vec<InstanceReport>,
    pub violation_count: usize,
    pub budget_exhausted: bool,
    pub wall_clock_seconds: f64,
    pub tool_version: String,
}

impl RunRecord {
    pub fn new(config: &RunConfig, instances: Vec<InstanceReport>, wall_clock_seconds: f64) -> Self {
        RunRecord {
            config_hash: config.hash(),
            config: config.clone(),
            violation_count: instances.iter().map(|r| r.violations.len()).sum(),
            budget_exhausted: instances.iter().any(|r| r.budget_exhausted),
            instances,
            wall_clock_seconds,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.violation_count, self.budget_exhausted)
    }
}

/// 0 = all pass, 1 = a theorem check failed, 3 = a budget ran out.
pub fn exit_code(violations: usize, budget: bool) -> i32 {
    if violations > 0 {
        1
    } else if budget {
        3
    } else {
        0
    }
}

/// Build the ambient category for a config, honouring the element cap.
pub fn ambient(config: &RunConfig) -> anyhow::Result<Ambient> {
    let opts = BuildOptions {
        max_elements: config.budgets.element_cap,
        ..BuildOptions::default()
    };
    let cat = build_category_with(config.category.kind, &config.category.sizes, &opts)
        .with_context(|| format!("building {} {:?}", config.category.kind, config.category.sizes))?;
    config.validate(&cat)?;
    Ok(Ambient::new(cat)?)
}

/// The `(i, j, a)` triples in scope, with `a` global.
pub fn instances(amb: &Ambient, scope: &Scope) -> Vec<(ObjectId, ObjectId, usize)> {
    let c = amb.category();
    let pair = |i: usize, j: usize| {
        let (i, j) = (ObjectId(i), ObjectId(j));
        c.hom(j, i).map(move |a| (i, j, a))
    };
    match *scope {
        Scope::Single { i, j, a } => vec![(ObjectId(i), ObjectId(j), c.hom(ObjectId(j), ObjectId(i)).start + a)],
        Scope::AllA { i, j } => pair(i, j).collect(),
        Scope::AllPairs => c
            .objects()
            .flat_map(|i| c.objects().map(move |j| (i.0, j.0)))
            .flat_map(|(i, j)| pair(i, j))
            .collect(),
    }
}

fn frame_selection(checks: &BTreeSet<Check>) -> FrameChecks {
    FrameChecks {
        pullback: checks.contains(&Check::Pullback),
        hat: checks.contains(&Check::Hat),
        fiber: checks.contains(&Check::Fiber),
        mi: checks.contains(&Check::Mi),
        inverse: checks.contains(&Check::Inverse),
    }
}

fn rank_section(sw: &SandwichSemigroup, budgets: &Budgets, ck: &mut Checker) -> anyhow::Result<(RankSection, bool)> {
    let budget = budgets.rank();
    let bound = sandwich_bound_check(sw, budget)?;
    let mut exhausted = !bound.rank.as_ref().is_some_and(|r| r.is_exact());
    ck.absorb_prefixed("sandwich bound", bound.checks.clone());
    let formulas = if is_sandwich_regular(sw) {
        let frame = build_frame(sw, None)?;
        let hat = hat_analysis(&frame)?;
        match rank_formula_check(&frame, &hat, budget) {
            Ok(rep) => {
                exhausted |= !rep.undecided.is_empty();
                ck.absorb_prefixed("rank formulas", rep.checks.clone());
                Some(rep)
            }
            Err(Error::Budget { .. }) => {
                exhausted = true;
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    Ok((
        RankSection {
            sandwich_bound: bound,
            formulas,
        },
        exhausted,
    ))
}

/// Run the selected checks on one sandwich element.
pub fn analyze_instance(
    amb: &Ambient,
    (i, j, a): (ObjectId, ObjectId, usize),
    checks: &BTreeSet<Check>,
    budgets: &Budgets,
) -> anyhow::Result<InstanceReport> {
    let sw = sandwich(amb, i, j, a)?;
    let ps = p_sets(&sw);
    let inv = invertibility_flags(&sw);
    let mut ck = Checker::new();
    if checks.contains(&Check::Green) {
        ck.absorb_prefixed("green", sw.green().structural_check());
        ck.absorb_prefixed("transfer", green_transfer_check(&sw, &ps));
        ck.absorb_prefixed("stability", stability_transfer_check(&sw));
    }
    if checks.contains(&Check::Psets) {
        ck.absorb_prefixed("psets", p_set_check(&sw, &ps));
        ck.absorb_prefixed("invertibility", invertibility_check(&sw, &ps, &inv));
    }
    let regular = is_sandwich_regular(&sw);
    let selection = frame_selection(checks);
    let wants_frame = checks.iter().any(|c| c.needs_frame() && *c != Check::Rank);
    let frame = if regular && wants_frame {
        let rep = analyze_frame(&sw, selection)?;
        ck.checks += rep.checks;
        ck.violations.extend(rep.violations.iter().map(|v| Violation {
            clause: format!("frame: {}", v.clause),
            witness: v.witness.clone(),
        }));
        Some(rep)
    } else {
        None
    };
    let (rank, budget_exhausted) = if checks.contains(&Check::Rank) {
        let (section, exhausted) = rank_section(&sw, budgets, &mut ck)?;
        (Some(section), exhausted)
    } else {
        (None, false)
    };
    let c = amb.category();
    Ok(InstanceReport {
        i: i.0,
        j: j.0,
        a: a - c.hom(j, i).start,
        a_payload: c.morphism(a).payload_label(),
        size: sw.len(),
        sandwich_regular: regular,
        flags: inv,
        p_set_sizes: ps.sizes(),
        regular_count: regular_set(&sw).len(),
        green_class_counts: ClassCounts::of(sw.green()),
        frame,
        rank,
        checks: ck.checks,
        violations: ck.violations,
        budget_exhausted,
    })
}

/// Analyze every in-scope instance in parallel; the result keeps scope order.
pub fn run(config: &RunConfig) -> anyhow::Result<RunRecord> {
    let start = Instant::now();
    let amb = ambient(config)?;
    let list = instances(&amb, &config.scope);
    let instances = list
        .into_par_iter()
        .map(|t| analyze_instance(&amb, t, &config.checks, &config.budgets))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(RunRecord::new(config, instances, start.elapsed().as_secs_f64()))
}

//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Runs without the libtest harness so the lines are always
//! visible.

use std::time::{Duration, Instant};

use sandwich_core::category::{build_category, Kind, ObjectId};
use sandwich_core::fiber::{
    build_frame, hat_analysis, idempotent_fiber, inverse_case, is_sandwich_regular, mi_structure, pullback_check,
};
use sandwich_core::rank::{
    rank_formula_check, rect_group_check, sandwich_bound_check, RankBudget, RectGroupSpec,
};
use sandwich_core::sandwich::{green_transfer_check, p_sets, regular_set, sandwich, Ambient};
use sandwich_core::FiniteSemigroup;

/// Categories every criterion is evaluated on.
const SUITE: &[(Kind, &[usize])] = &[
    (Kind::PartialMap, &[2, 2]),
    (Kind::FullMap, &[2, 3]),
    (Kind::InjPartial, &[2, 2]),
    (Kind::MatF2, &[2, 2]),
];

/// Extra categories for the frame criteria, where the hat blocks are
/// non-trivial.
const FRAME_EXTRAS: &[(Kind, &[usize])] = &[
    (Kind::FullMap, &[3, 2]),
    (Kind::FullMap, &[3, 3]),
    (Kind::PartialMap, &[2, 3]),
    (Kind::InjPartial, &[2, 3]),
];

const CRITERION_1_LIMIT: Duration = Duration::from_secs(60);
const CRITERION_3_LIMIT: Duration = Duration::from_secs(30);
const CRITERION_7_INSTANCE_LIMIT: Duration = Duration::from_secs(120);
const CRITERION_7_MAX_P: usize = 150;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn ambients(list: &[(Kind, &[usize])]) -> Vec<(String, Ambient)> {
    list.iter()
        .map(|(kind, sizes)| {
            let cat = build_category(*kind, sizes).expect("catalog category builds");
            (format!("{kind} {sizes:?}"), Ambient::new(cat).expect("ambient Green's data"))
        })
        .collect()
}

/// Every `(i, j, a)` with `a ∈ S_ji`.
fn instances(amb: &Ambient) -> Vec<(ObjectId, ObjectId, usize)> {
    let c = amb.category();
    let mut out = Vec::new();
    for i in c.objects() {
        for j in c.objects() {
            out.extend(c.hom(j, i).map(|a| (i, j, a)));
        }
    }
    out
}

fn with_extras() -> Vec<(Kind, &'static [usize])> {
    SUITE.iter().chain(FRAME_EXTRAS).copied().collect()
}

fn green_transfer() -> Outcome {
    let start = Instant::now();
    let (mut count, mut violations) = (0, 0);
    for (_, amb) in ambients(SUITE) {
        for (i, j, a) in instances(&amb) {
            let sw = sandwich(&amb, i, j, a).unwrap();
            let ck = green_transfer_check(&sw, &p_sets(&sw));
            count += 1;
            violations += ck.violations.len();
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        violations == 0 && elapsed < CRITERION_1_LIMIT,
        format!("{count} sandwich elements, {violations} violations, {:.2}s < 60s", elapsed.as_secs_f64()),
    )
}

fn p_set_chain() -> Outcome {
    let (mut count, mut failures) = (0, 0);
    for (_, amb) in ambients(SUITE) {
        for (i, j, a) in instances(&amb) {
            let sw = sandwich(&amb, i, j, a).unwrap();
            let ps = p_sets(&sw);
            let reg = regular_set(&sw);
            let ok = reg.iter().all(|&x| ps.p[x])
                && (0..sw.len()).all(|x| !ps.p[x] || ps.p3[x])
                && ps.p == ps.p3;
            count += 1;
            failures += usize::from(!ok);
        }
    }
    Outcome::new(failures == 0, format!("{count} instances, {failures} failures"))
}

fn pullback() -> Outcome {
    let start = Instant::now();
    let (mut frames, mut failures) = (0, 0);
    for (_, amb) in ambients(&with_extras()) {
        for (i, j, a) in instances(&amb) {
            let sw = sandwich(&amb, i, j, a).unwrap();
            let frame = build_frame(&sw, None).unwrap();
            let pb = pullback_check(&frame);
            frames += 1;
            failures += usize::from(!(pb.pair_count == pb.p_size && pb.checks.is_clean()));
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        failures == 0 && elapsed < CRITERION_3_LIMIT,
        format!("{frames} frames, {failures} failures, {:.2}s < 30s", elapsed.as_secs_f64()),
    )
}

fn rectangular_inflation() -> Outcome {
    let (mut frames, mut violations, mut inflated) = (0, 0, 0);
    for (_, amb) in ambients(&with_extras()) {
        for (i, j, a) in instances(&amb) {
            let sw = sandwich(&amb, i, j, a).unwrap();
            let frame = build_frame(&sw, None).unwrap();
            let hat = hat_analysis(&frame).unwrap();
            frames += 1;
            violations += hat.checks.violations.len();
            violations += hat
                .blocks
                .iter()
                .filter(|b| b.group && b.rectangular_group != Some(true))
                .count();
            inflated += usize::from(hat.blocks.iter().any(|b| b.r * b.l > 1));
        }
    }
    Outcome::new(
        violations == 0 && inflated > 0,
        format!("{frames} frames, {inflated} with inflated blocks, {violations} violations"),
    )
}

fn idempotent_fiber_criterion() -> Outcome {
    let (mut frames, mut failures) = (0, 0);
    for (_, amb) in ambients(&with_extras()) {
        for (i, j, a) in instances(&amb) {
            let sw = sandwich(&amb, i, j, a).unwrap();
            let frame = build_frame(&sw, None).unwrap();
            let fib = idempotent_fiber(&frame, a as u64);
            let mut inside = vec![false; frame.w.len()];
            for &q in &fib.generated_w {
                inside[q] = true;
            }
            let preimage: Vec<usize> = frame.p.elements().filter(|&x| inside[frame.phi[x]]).collect();
            frames += 1;
            failures += usize::from(preimage != fib.generated_p || !fib.checks.is_clean());
        }
    }
    Outcome::new(failures == 0, format!("{frames} frames, {failures} failures"))
}

fn mi_criterion() -> Outcome {
    let (mut frames, mut violations, mut dominated) = (0, 0, 0);
    for (_, amb) in ambients(&with_extras()) {
        for (i, j, a) in instances(&amb) {
            let sw = sandwich(&amb, i, j, a).unwrap();
            let frame = build_frame(&sw, None).unwrap();
            let hat = hat_analysis(&frame).unwrap();
            let mi = mi_structure(&frame, &hat).unwrap();
            frames += 1;
            violations += mi.checks.violations.len();
            dominated += usize::from(mi.domination.mi_dominated);
        }
    }
    Outcome::new(
        violations == 0 && dominated == frames,
        format!("{frames} frames, {dominated} MI-dominated, {violations} violations"),
    )
}

fn rank_formulas() -> Outcome {
    let budget = RankBudget::default();
    let (mut frames, mut failures, mut slowest) = (0, 0, Duration::ZERO);
    let mut skipped = 0;
    for (name, amb) in ambients(&with_extras()) {
        for (i, j, a) in instances(&amb) {
            let sw = sandwich(&amb, i, j, a).unwrap();
            let frame = build_frame(&sw, None).unwrap();
            if frame.p.len() > CRITERION_7_MAX_P {
                skipped += 1;
                continue;
            }
            let start = Instant::now();
            let hat = hat_analysis(&frame).unwrap();
            let rep = rank_formula_check(&frame, &hat, budget).unwrap();
            let elapsed = start.elapsed();
            slowest = slowest.max(elapsed);
            frames += 1;
            let ok = rep.checks.is_clean()
                && rep.undecided.is_empty()
                && rep.ideal_hypothesis
                && rep.mi_dominated
                && elapsed < CRITERION_7_INSTANCE_LIMIT;
            if !ok {
                failures += 1;
                eprintln!("  rank formulas failed on {name} a={a}: {:?}", rep.checks.violations);
            }
        }
    }
    Outcome::new(
        failures == 0,
        format!(
            "{frames} frames, {skipped} above |P| = {CRITERION_7_MAX_P}, {failures} failures, slowest {:.2}s < 120s",
            slowest.as_secs_f64()
        ),
    )
}

fn ruskuc() -> Outcome {
    let groups = [
        ("trivial", FiniteSemigroup::trivial()),
        ("C2", FiniteSemigroup::cyclic_group(2)),
        ("C3", FiniteSemigroup::cyclic_group(3)),
        ("S3", FiniteSemigroup::symmetric_group(3)),
    ];
    let (mut count, mut failures) = (0, 0);
    let mut two_by_three = None;
    for (gname, g) in &groups {
        for r in 1..=3 {
            for l in 1..=3 {
                let spec = RectGroupSpec { r, l, group: g.clone() };
                let rep = rect_group_check(&spec, RankBudget::default()).unwrap();
                count += 1;
                let ok = rep.checks.is_clean() && rep.rank.is_exact() && rep.rank.exact() == rep.expected;
                failures += usize::from(!ok);
                if *gname == "trivial" && (r, l) == (2, 3) {
                    two_by_three = rep.rank.exact();
                }
            }
        }
    }
    Outcome::new(
        failures == 0 && two_by_three == Some(3),
        format!("{count} rectangular groups, {failures} failures, 2x3 trivial rank {}", two_by_three.map_or("budget".to_string(), |r| r.to_string())),
    )
}

fn inverse_criterion() -> Outcome {
    let (mut count, mut failures) = (0, 0);
    for (_, amb) in ambients(&[(Kind::InjPartial, &[2, 2]), (Kind::InjPartial, &[2, 3])]) {
        for (i, j, a) in instances(&amb) {
            let sw = sandwich(&amb, i, j, a).unwrap();
            count += 1;
            if !is_sandwich_regular(&sw) {
                failures += 1;
                continue;
            }
            let frame = build_frame(&sw, None).unwrap();
            let inv = inverse_case(&frame);
            let unique_inverses = frame.p.elements().all(|x| frame.p.inverses(x).len() == 1);
            let phi_bijective = {
                let mut img = frame.phi.clone();
                img.sort_unstable();
                img.dedup();
                img.len() == frame.p.len() && img.len() == frame.w.len()
            };
            let ok = inv.uniquely_sandwich_regular && inv.checks.is_clean() && unique_inverses && phi_bijective;
            failures += usize::from(!ok);
        }
    }
    Outcome::new(failures == 0, format!("{count} sandwich elements, {failures} failures"))
}

fn sandwich_bound() -> Outcome {
    let (mut count, mut computed, mut failures, mut tight) = (0, 0, 0, 0);
    for (_, amb) in ambients(SUITE) {
        for (i, j, a) in instances(&amb) {
            let sw = sandwich(&amb, i, j, a).unwrap();
            let rep = sandwich_bound_check(&sw, RankBudget::default()).unwrap();
            count += 1;
            if let Some(exact) = rep.rank.as_ref().and_then(|r| r.exact()) {
                computed += 1;
                failures += usize::from(rep.bound.bound > exact || !rep.checks.is_clean());
                tight += usize::from(rep.bound.bound == exact);
            }
        }
    }
    Outcome::new(
        failures == 0,
        format!("{count} instances, {computed} ranks computed, {failures} failures, bound exact on {tight}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Green-transfer case split", green_transfer),
        ("P-set chain", p_set_chain),
        ("pullback", pullback),
        ("rectangular-group inflation", rectangular_inflation),
        ("idempotent fiber", idempotent_fiber_criterion),
        ("mid-identity structure", mi_criterion),
        ("rank formulas", rank_formulas),
        ("rectangular-group rank", ruskuc),
        ("inverse case", inverse_criterion),
        ("sandwich rank lower bound", sandwich_bound),
    ];
    let mut failed = 0;
    for (n, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let verdict = if out.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {title}: {verdict} ({}; {:.2}s)",
            n + 1,
            out.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!out.passed);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

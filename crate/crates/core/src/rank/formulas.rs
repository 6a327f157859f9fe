//! Rank formulas: rectangular groups, regular frames and the lower bound for
//! a whole sandwich semigroup.

use serde::{Deserialize, Serialize};

use super::{idrank, rank, relative_idrank, relative_rank, RankBudget, RankResult};
use crate::error::{Error, Result};
use crate::fiber::{HatData, RegularFrame};
use crate::green::{domination_report, GreenData, Relation};
use crate::report::Checker;
use crate::sandwich::SandwichSemigroup;
use crate::semigroup::FiniteSemigroup;

/// Does the complement of `subset` fail to generate `s`? Then every
/// generating set meets `subset`.
fn unavoidable(s: &FiniteSemigroup, subset: &[usize]) -> bool {
    let rest: Vec<usize> = s.elements().filter(|x| !subset.contains(x)).collect();
    s.generated(&rest).len() < s.len()
}

fn interval(r: &RankResult) -> (usize, usize) {
    (r.lower, r.upper)
}

/// Compare `lhs ≥ rhs` (and `lhs = rhs` when `equal`) on certified
/// intervals. Returns false when the intervals cannot decide the clause.
fn compare(ck: &mut Checker, lhs: (usize, usize), rhs: (usize, usize), equal: bool, clause: &str) -> bool {
    let exact = lhs.0 == lhs.1 && rhs.0 == rhs.1;
    if exact {
        ck.expect(lhs.0 >= rhs.0, &format!("{clause} (inequality)"));
        if equal {
            ck.expect(lhs.0 == rhs.0, &format!("{clause} (equality)"));
        }
        return true;
    }
    if lhs.1 < rhs.0 {
        ck.expect(false, &format!("{clause} (inequality)"));
        return true;
    }
    lhs.0 >= rhs.1
}

fn add(a: (usize, usize), b: (usize, usize)) -> (usize, usize) {
    (a.0 + b.0, a.1 + b.1)
}

// ---- rectangular groups ----

#[derive(Debug, Clone)]
pub struct RectGroupSpec {
    pub r: usize,
    pub l: usize,
    pub group: FiniteSemigroup,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RectGroupReport {
    pub r: usize,
    pub l: usize,
    pub group_order: usize,
    pub group_rank: RankResult,
    pub rank: RankResult,
    /// `max(r, l, rank(G))`.
    pub expected: Option<usize>,
    pub checks: Checker,
}

/// Generating set of `I × G × J` built from maps of a set of size
/// `max(r, l, |gens|)` onto `I`, `J` and `gens`, each a bijection when the
/// sizes agree.
fn canonical_generators(r: usize, l: usize, order: usize, gens: &[usize]) -> Vec<usize> {
    let m = r.max(l).max(gens.len());
    (0..m)
        .map(|x| ((x % r) * order + gens[x % gens.len()]) * l + x % l)
        .collect()
}

pub fn rect_group_check(spec: &RectGroupSpec, budget: RankBudget) -> Result<RectGroupReport> {
    let (r, l, g) = (spec.r, spec.l, &spec.group);
    if r == 0 || l == 0 || !g.is_group() {
        return Err(Error::Unsupported("a rectangular group needs r, l ≥ 1 and a group".into()));
    }
    let t = FiniteSemigroup::rectangular_group(r, l, g);
    let green = GreenData::of_semigroup(&t)?;
    let mut ck = Checker::new();
    ck.expect(green.r().len() == r && green.l().len() == l, "R- and L-class counts are r and l");

    let group_rank = rank(g, budget)?;
    let t_rank = rank(&t, budget)?;
    let expected = group_rank.exact().map(|k| r.max(l).max(k));
    if let (Some(found), Some(want)) = (t_rank.exact(), expected) {
        ck.expect(found == want, "rank(T) = max(r, l, rank(G))");
    }

    for rel in [Relation::R, Relation::L] {
        let part = green.partition(rel);
        for (c, class) in part.classes().iter().enumerate() {
            ck.check(
                t_rank.witness.iter().any(|x| class.contains(x)),
                &format!("minimal generating set meets every {rel:?}-class"),
                || vec![c],
            );
            ck.check(
                unavoidable(&t, class),
                &format!("every generating set meets every {rel:?}-class"),
                || vec![c],
            );
        }
    }

    let omega = canonical_generators(r, l, g.len(), &group_rank.witness);
    ck.expect(t.generated(&omega).len() == t.len(), "canonical set generates T");
    if let Some(k) = t_rank.exact() {
        let cross_section = |rel: Relation| {
            let mut ids: Vec<usize> = omega.iter().map(|&x| green.partition(rel).class_of(x)).collect();
            ids.sort_unstable();
            ids.dedup();
            ids.len() == omega.len() && ids.len() == green.partition(rel).len()
        };
        if k == r {
            ck.expect(omega.len() == k && cross_section(Relation::R), "rank = r gives an R-cross-section witness");
        }
        if k == l {
            ck.expect(omega.len() == k && cross_section(Relation::L), "rank = l gives an L-cross-section witness");
        }
    }
    Ok(RectGroupReport {
        r,
        l,
        group_order: g.len(),
        group_rank,
        rank: t_rank,
        expected,
        checks: ck,
    })
}

// ---- regular frames ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankFormulaReport {
    pub r: usize,
    pub l: usize,
    pub mi_dominated: bool,
    /// `W ∖ G_W` is an ideal of `W`.
    pub ideal_hypothesis: bool,
    pub rank_p: RankResult,
    pub relative_rank_w: RankResult,
    pub rank_units: RankResult,
    pub rank_ep: RankResult,
    pub idrank_ep: RankResult,
    pub rank_ew: RankResult,
    pub idrank_ew: RankResult,
    /// Some rank ran out of budget and a clause could not be decided.
    pub undecided: Vec<String>,
    pub checks: Checker,
}

fn idempotent_generated(s: &FiniteSemigroup) -> Result<FiniteSemigroup> {
    s.sub(&s.generated(&s.idempotents()))
}

/// Is `m ∖ keep` closed under multiplication by all of `m`?
fn complement_is_ideal(m: &FiniteSemigroup, keep: &[usize]) -> bool {
    let outside: Vec<usize> = m.elements().filter(|x| !keep.contains(x)).collect();
    outside
        .iter()
        .all(|&x| m.elements().all(|y| !keep.contains(&m.mul(x, y)) && !keep.contains(&m.mul(y, x))))
}

/// Group of units of a monoid, as element indices.
fn units(m: &FiniteSemigroup, g: &GreenData) -> Vec<usize> {
    m.identity().map(|e| g.class(Relation::H, e).to_vec()).unwrap_or_default()
}

/// Check the decomposition of an idempotent-generated monoid into its
/// identity and the ideal below it.
fn idempotent_monoid_check(m: &FiniteSemigroup, rank_m: &RankResult, idrank_m: &RankResult, budget: RankBudget, ck: &mut Checker, undecided: &mut Vec<String>) -> Result<()> {
    let g = GreenData::of_semigroup(m)?;
    let id = m.identity().ok_or_else(|| Error::Unsupported("idempotent-generated part has no identity".into()))?;
    let gm = units(m, &g);
    ck.expect(gm == [id], "idempotent-generated monoid has trivial group of units");
    ck.expect(complement_is_ideal(m, &gm), "complement of the units is an ideal");
    let rel = relative_rank(m, &gm, budget)?;
    let idrel = relative_idrank(m, &gm, budget)?;
    if !compare(ck, interval(rank_m), add(interval(&rel), (1, 1)), true, "rank(M) = 1 + rank(M:G_M)") {
        undecided.push("rank(M) = 1 + rank(M:G_M)".into());
    }
    if !compare(ck, interval(idrank_m), add(interval(&idrel), (1, 1)), true, "idrank(M) = 1 + idrank(M:G_M)") {
        undecided.push("idrank(M) = 1 + idrank(M:G_M)".into());
    }
    Ok(())
}

/// Compute both sides of the rank formulas for `P`, `⟨E(P)⟩` and their
/// counterparts in `W`, and compare them.
pub fn rank_formula_check(frame: &RegularFrame, hat: &HatData, budget: RankBudget) -> Result<RankFormulaReport> {
    let (p, w) = (&frame.p, &frame.w);
    let (r, l) = hat.dimensions();
    let mi_dominated = domination_report(p)?.mi_dominated;
    let mut ck = Checker::new();
    let mut undecided = Vec::new();

    let gw = units(w, &hat.w_green);
    ck.expect(w.identity() == Some(frame.w_identity), "identity of W is a");
    let ideal_hypothesis = complement_is_ideal(w, &gw);
    ck.expect(ideal_hypothesis, "W ∖ G_W is an ideal of W");

    let rank_p = rank(p, budget)?;
    let relative_rank_w = relative_rank(w, &gw, budget)?;
    let rank_units = rank(&w.sub(&gw)?, budget)?;
    if ideal_hypothesis {
        let (ru, rl) = interval(&rank_units);
        let rhs = add(interval(&relative_rank_w), (r.max(l).max(ru), r.max(l).max(rl)));
        if !compare(&mut ck, interval(&rank_p), rhs, mi_dominated, "rank(P) vs rank(W:G_W) + max(r, l, rank(G_W))") {
            undecided.push("rank of P".into());
        }
    }

    let ep = idempotent_generated(p)?;
    let ew = idempotent_generated(w)?;
    let rank_ep = rank(&ep, budget)?;
    let idrank_ep = idrank(&ep, budget)?;
    let rank_ew = rank(&ew, budget)?;
    let idrank_ew = idrank(&ew, budget)?;
    let shift = r.max(l) - 1;
    for (name, lhs, rhs) in [("rank", &rank_ep, &rank_ew), ("idrank", &idrank_ep, &idrank_ew)] {
        let target = add(interval(rhs), (shift, shift));
        let clause = format!("{name}(E(P)) vs {name}(E(W)) + max(r, l) - 1");
        if !compare(&mut ck, interval(lhs), target, mi_dominated, &clause) {
            undecided.push(clause);
        }
    }
    idempotent_monoid_check(&ew, &rank_ew, &idrank_ew, budget, &mut ck, &mut undecided)?;

    let all_exact = [&rank_ep, &idrank_ep, &rank_ew, &idrank_ew].iter().all(|x| x.is_exact());
    if mi_dominated && all_exact {
        ck.expect(
            (rank_ew.lower == idrank_ew.lower) == (rank_ep.lower == idrank_ep.lower),
            "rank = idrank on E(W) iff on E(P)",
        );
    }
    Ok(RankFormulaReport {
        r,
        l,
        mi_dominated,
        ideal_hypothesis,
        rank_p,
        relative_rank_w,
        rank_units,
        rank_ep,
        idrank_ep,
        rank_ew,
        idrank_ew,
        undecided,
        checks: ck,
    })
}

// ---- whole sandwich semigroups ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandwichBound {
    /// Members (local indices) of each maximal ambient J-class within the
    /// hom-set, with their R- and L-class counts.
    pub maximal_classes: Vec<(Vec<usize>, usize, usize)>,
    /// Every element of `a·S_ij` is R-stable.
    pub r_stable: bool,
    /// Every element of `S_ij·a` is L-stable.
    pub l_stable: bool,
    pub bound: usize,
}

pub fn sandwich_rank_lower_bound(sw: &SandwichSemigroup) -> SandwichBound {
    let amb = sw.ambient();
    let g = amb.green();
    let n = sw.len();
    let gl: Vec<usize> = (0..n).map(|x| sw.global(x)).collect();
    let strictly_below = |x: usize, y: usize| g.leq_j(gl[x], gl[y]) && !g.leq_j(gl[y], gl[x]);
    let mut classes: Vec<(usize, Vec<usize>)> = Vec::new();
    for x in (0..n).filter(|&x| (0..n).all(|y| !strictly_below(x, y))) {
        let id = g.j().class_of(gl[x]);
        match classes.iter_mut().find(|(c, _)| *c == id) {
            Some((_, m)) => m.push(x),
            None => classes.push((id, vec![x])),
        }
    }
    let r_stable = (0..n).all(|x| amb.stability(sw.left_a(x)).r_stable);
    let l_stable = (0..n).all(|x| amb.stability(sw.right_a(x)).l_stable);
    let count = |members: &[usize], rel: Relation| {
        let mut ids: Vec<usize> = members.iter().map(|&x| g.partition(rel).class_of(gl[x])).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    };
    let maximal_classes: Vec<(Vec<usize>, usize, usize)> = classes
        .into_iter()
        .map(|(_, m)| {
            let (rows, cols) = (count(&m, Relation::R), count(&m, Relation::L));
            (m, rows, cols)
        })
        .collect();
    let bound = maximal_classes
        .iter()
        .map(|(_, rows, cols)| match (r_stable, l_stable) {
            (true, true) => *rows.max(cols),
            (true, false) => *rows,
            (false, true) => *cols,
            (false, false) => 1,
        })
        .sum();
    SandwichBound {
        maximal_classes,
        r_stable,
        l_stable,
        bound,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandwichBoundReport {
    pub bound: SandwichBound,
    pub rank: Option<RankResult>,
    pub checks: Checker,
}

/// Compare the lower bound with a brute-force rank of the sandwich
/// semigroup, and check that every generating set meets each maximal
/// J-class (and, under stability, each of its R- and L-classes).
pub fn sandwich_bound_check(sw: &SandwichSemigroup, budget: RankBudget) -> Result<SandwichBoundReport> {
    let bound = sandwich_rank_lower_bound(sw);
    let s = sw.semigroup();
    let mut ck = Checker::new();
    let g = sw.ambient().green();
    for (k, (members, _, _)) in bound.maximal_classes.iter().enumerate() {
        ck.check(unavoidable(s, members), "generating sets meet every maximal J-class", || vec![k]);
        for (rel, hyp) in [(Relation::R, bound.r_stable), (Relation::L, bound.l_stable)] {
            if !hyp {
                continue;
            }
            let mut ids: Vec<usize> = members.iter().map(|&x| g.partition(rel).class_of(sw.global(x))).collect();
            ids.sort_unstable();
            ids.dedup();
            for id in ids {
                let part: Vec<usize> = members
                    .iter()
                    .copied()
                    .filter(|&x| g.partition(rel).class_of(sw.global(x)) == id)
                    .collect();
                ck.check(
                    unavoidable(s, &part),
                    &format!("generating sets meet every {rel:?}-class of a maximal J-class"),
                    || part.clone(),
                );
            }
        }
    }
    let rank = match rank(s, budget) {
        Ok(res) => Some(res),
        Err(Error::Budget { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(res) = &rank {
        ck.expect(res.upper >= bound.bound, "lower bound ≤ rank of the sandwich semigroup");
    }
    Ok(SandwichBoundReport { bound, rank, checks: ck })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{build_category, Kind, ObjectId};
    use crate::fiber::{build_frame, hat_analysis};
    use crate::sandwich::{sandwich, Ambient};

    #[test]
    fn rectangular_groups() {
        for (r, l, g, want) in [
            (2, 3, FiniteSemigroup::trivial(), 3),
            (2, 2, FiniteSemigroup::cyclic_group(2), 2),
            (1, 1, FiniteSemigroup::symmetric_group(3), 2),
        ] {
            let rep = rect_group_check(&RectGroupSpec { r, l, group: g }, RankBudget::default()).unwrap();
            assert!(rep.checks.is_clean(), "{r}x{l}: {:?}", rep.checks.violations);
            assert_eq!(rep.rank.exact(), Some(want));
        }
        let not_group = RectGroupSpec {
            r: 1,
            l: 1,
            group: FiniteSemigroup::right_zero(2),
        };
        assert!(rect_group_check(&not_group, RankBudget::default()).is_err());
    }

    #[test]
    fn identity_frame_reduces_to_the_monoid() {
        let amb = Ambient::new(build_category(Kind::FullMap, &[2]).unwrap()).unwrap();
        let e = amb.category().identity(ObjectId(0)).unwrap();
        let sw = sandwich(&amb, ObjectId(0), ObjectId(0), e).unwrap();
        let frame = build_frame(&sw, None).unwrap();
        let hat = hat_analysis(&frame).unwrap();
        let rep = rank_formula_check(&frame, &hat, RankBudget::default()).unwrap();
        assert!(rep.checks.is_clean(), "{:?}", rep.checks.violations);
        assert_eq!((rep.r, rep.l), (1, 1));
        // T_2: rank 2 = rank(T_2 : S_2) + rank(S_2) = 1 + 1
        assert_eq!(rep.rank_p.exact(), Some(2));
        assert_eq!(rep.relative_rank_w.exact(), Some(1));
        assert_eq!(rep.rank_units.exact(), Some(1));
    }

    #[test]
    fn fullmap_three_two_frames_attain_equality() {
        let amb = Ambient::new(build_category(Kind::FullMap, &[3, 2]).unwrap()).unwrap();
        let c = amb.category();
        let mut inflated = false;
        for a in c.hom(ObjectId(1), ObjectId(0)) {
            let sw = sandwich(&amb, ObjectId(0), ObjectId(1), a).unwrap();
            let frame = build_frame(&sw, None).unwrap();
            let hat = hat_analysis(&frame).unwrap();
            let rep = rank_formula_check(&frame, &hat, RankBudget::default()).unwrap();
            assert!(rep.mi_dominated);
            assert!(rep.undecided.is_empty());
            assert!(rep.checks.is_clean(), "{a}: {:?}", rep.checks.violations);
            inflated |= rep.r.max(rep.l) > 1;
        }
        assert!(inflated);
    }

    #[test]
    fn injective_frames_have_unit_dimensions() {
        let amb = Ambient::new(build_category(Kind::InjPartial, &[2, 2]).unwrap()).unwrap();
        let c = amb.category();
        for a in c.hom(ObjectId(1), ObjectId(0)) {
            let sw = sandwich(&amb, ObjectId(0), ObjectId(1), a).unwrap();
            let frame = build_frame(&sw, None).unwrap();
            let hat = hat_analysis(&frame).unwrap();
            let rep = rank_formula_check(&frame, &hat, RankBudget::default()).unwrap();
            assert_eq!((rep.r, rep.l), (1, 1));
            assert_eq!(rep.rank_ep.exact(), rep.rank_ew.exact());
            assert_eq!(rep.idrank_ep.exact(), rep.idrank_ew.exact());
            assert!(rep.checks.is_clean());
        }
    }

    #[test]
    fn sandwich_bounds_hold() {
        let amb = Ambient::new(build_category(Kind::FullMap, &[2]).unwrap()).unwrap();
        let e = amb.category().identity(ObjectId(0)).unwrap();
        let sw = sandwich(&amb, ObjectId(0), ObjectId(0), e).unwrap();
        let rep = sandwich_bound_check(&sw, RankBudget::default()).unwrap();
        // T_2: the units form the single maximal J-class
        assert_eq!(rep.bound.maximal_classes.len(), 1);
        assert_eq!(rep.bound.bound, 1);
        assert_eq!(rep.rank.as_ref().and_then(|r| r.exact()), Some(2));
        assert!(rep.checks.is_clean());

        let amb = Ambient::new(build_category(Kind::PartialMap, &[2, 2]).unwrap()).unwrap();
        let c = amb.category();
        for a in c.hom(ObjectId(1), ObjectId(0)) {
            let sw = sandwich(&amb, ObjectId(0), ObjectId(1), a).unwrap();
            let rep = sandwich_bound_check(&sw, RankBudget::default()).unwrap();
            assert!(rep.checks.is_clean(), "{a}: {:?}", rep.checks.violations);
            if let [(_, rows, cols)] = rep.bound.maximal_classes.as_slice() {
                assert_eq!(rep.bound.bound, *rows.max(cols));
            }
        }
    }
}

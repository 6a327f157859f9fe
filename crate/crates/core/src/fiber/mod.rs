//! Structure of the regular part of a sandwich semigroup at a
//! sandwich-regular element.

mod frame;
mod hat;
mod idempotent;
mod inverse;
mod mi;
mod pullback;

pub use frame::{build_frame, is_sandwich_regular, RegularFrame};
pub use hat::{hat_analysis, HatBlock, HatData};
pub use idempotent::{idempotent_fiber, FiberSummary, SPOT_CHECKS};
pub use inverse::{inverse_case, InverseSummary};
pub use mi::{mi_structure, MiSummary};
pub use pullback::{pullback_check, PullbackSummary};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::green::{EggBox, Relation};
use crate::report::{Checker, Violation};
use crate::sandwich::SandwichSemigroup;

/// b-dependent checks are repeated for every inverse of `a` up to this many.
pub const ALL_INVERSES_LIMIT: usize = 8;

/// Which frame-level checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameChecks {
    pub pullback: bool,
    pub hat: bool,
    pub fiber: bool,
    pub mi: bool,
    pub inverse: bool,
}

impl FrameChecks {
    pub const ALL: FrameChecks = FrameChecks {
        pullback: true,
        hat: true,
        fiber: true,
        mi: true,
        inverse: true,
    };
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameReport {
    pub i: usize,
    pub j: usize,
    pub a: usize,
    pub b: usize,
    pub p_size: usize,
    pub w_size: usize,
    pub t1_size: usize,
    pub t2_size: usize,
    pub inverse_count: usize,
    /// Dimensions of the hat-H block over `b`, when the hat analysis ran.
    pub r: Option<usize>,
    pub l: Option<usize>,
    pub mi_dominated: Option<bool>,
    pub inverse_case: Option<bool>,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

/// Outcome of [`frame_checks`]: the tally, the hat data when computed, and
/// the MI-domination and inverse-case verdicts when those checks ran.
pub type FrameOutcome = (Checker, Option<HatData>, Option<bool>, Option<bool>);

/// Run the selected checks on the frame for one inverse `b`.
pub fn frame_checks(frame: &RegularFrame, which: FrameChecks) -> Result<FrameOutcome> {
    let mut ck = Checker::new();
    ck.absorb_prefixed("frame", frame.checks.clone());
    if which.pullback {
        ck.absorb_prefixed("pullback", pullback_check(frame).checks);
    }
    let need_hat = which.hat || which.mi;
    let hat = if need_hat { Some(hat_analysis(frame)?) } else { None };
    if let (true, Some(h)) = (which.hat, &hat) {
        ck.absorb_prefixed("hat", h.checks.clone());
    }
    if which.fiber {
        let seed = (frame.a() as u64) << 32 | frame.b() as u64;
        ck.absorb_prefixed("fiber", idempotent_fiber(frame, seed).checks);
    }
    let mut dominated = None;
    if let (true, Some(h)) = (which.mi, &hat) {
        let mi = mi_structure(frame, h)?;
        dominated = Some(mi.domination.mi_dominated);
        ck.absorb_prefixed("mi", mi.checks);
    }
    let mut inverse = None;
    if which.inverse {
        let inv = inverse_case(frame);
        inverse = Some(inv.uniquely_sandwich_regular);
        ck.absorb_prefixed("inverse", inv.checks);
    }
    Ok((ck, hat, dominated, inverse))
}

/// Build frames for the default inverse and (up to a limit) every other one,
/// run the selected checks on each, and report on the default frame.
pub fn analyze_frame(sw: &SandwichSemigroup, which: FrameChecks) -> Result<FrameReport> {
    let base = build_frame(sw, None)?;
    let (mut ck, hat, dominated, inverse) = frame_checks(&base, which)?;
    let inverses = base.inverses_of_a().to_vec();
    let base_block = hat.as_ref().map(|h| {
        let mut m: Vec<usize> = h.blocks[h.b_block].members.iter().map(|&x| base.p.label(x)).collect();
        m.sort_unstable();
        m
    });
    if inverses.len() <= ALL_INVERSES_LIMIT {
        for &b in inverses.iter().skip(1) {
            let fr = build_frame(sw, Some(b))?;
            let (other, h, _, _) = frame_checks(&fr, which)?;
            ck.absorb_prefixed(&format!("b={b}"), other);
            if let (Some(h), Some(base_block)) = (h, &base_block) {
                let mut m: Vec<usize> = h.blocks[h.b_block].members.iter().map(|&x| fr.p.label(x)).collect();
                m.sort_unstable();
                ck.check(&m == base_block, "hat H_b does not depend on b", || vec![b]);
            }
        }
    }
    let dims = hat.as_ref().map(|h| h.dimensions());
    Ok(FrameReport {
        i: sw.i().0,
        j: sw.j().0,
        a: sw.a(),
        b: base.b(),
        p_size: base.p.len(),
        w_size: base.w.len(),
        t1_size: base.t1.len(),
        t2_size: base.t2.len(),
        inverse_count: inverses.len(),
        r: dims.map(|d| d.0),
        l: dims.map(|d| d.1),
        mi_dominated: dominated,
        inverse_case: inverse,
        checks: ck.checks,
        violations: ck.violations,
    })
}

/// For each D-class of `P`: its egg-box with hat-R/hat-L blocks, paired with
/// the egg-box of the corresponding D-class of `W`.
pub fn paired_eggboxes(frame: &RegularFrame, hat: &HatData) -> Vec<(EggBox, EggBox)> {
    let blocks = |x: usize| {
        (
            hat.hat(Relation::R).class_of(x),
            hat.hat(Relation::L).class_of(x),
        )
    };
    hat.p_green
        .d()
        .classes()
        .iter()
        .enumerate()
        .map(|(d, class)| {
            let pbox = EggBox::from_green(&hat.p_green, d, Some(&blocks));
            let wd = hat.w_green.d().class_of(frame.phi[class[0]]);
            (pbox, hat.w_green.eggbox(wd))
        })
        .collect()
}

/// Text rendering of all paired egg-boxes, labelling elements by payload.
pub fn render_pairs_text(frame: &RegularFrame, pairs: &[(EggBox, EggBox)]) -> String {
    let c = frame.category();
    let p_label = |x: usize| c.morphism(frame.p_global(x)).payload_label();
    let w_label = |q: usize| c.morphism(frame.w.label(q)).payload_label();
    let mut out = String::new();
    for (pb, wb) in pairs {
        out.push_str("P ");
        out.push_str(&pb.render_text(&p_label));
        out.push_str("W ");
        out.push_str(&wb.render_text(&w_label));
        out.push('\n');
    }
    out
}

/// DOT rendering of all paired egg-boxes.
pub fn render_pairs_dot(frame: &RegularFrame, pairs: &[(EggBox, EggBox)]) -> String {
    let c = frame.category();
    let mut out = String::from("digraph eggbox {\n  node [fontname=\"monospace\"];\n");
    for (k, (pb, wb)) in pairs.iter().enumerate() {
        out.push_str(&pb.render_dot_cluster(&format!("P{k}"), &|x| c.morphism(frame.p_global(x)).payload_label()));
        out.push_str(&wb.render_dot_cluster(&format!("W{k}"), &|q| c.morphism(frame.w.label(q)).payload_label()));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{build_category, Kind, Morphism, ObjectId, Payload};
    use crate::sandwich::{sandwich, Ambient};

    fn amb(kind: Kind, sizes: &[usize]) -> Ambient {
        Ambient::new(build_category(kind, sizes).unwrap()).unwrap()
    }

    fn all_sandwiches(amb: &Ambient) -> Vec<(ObjectId, ObjectId, usize)> {
        let c = amb.category();
        let mut v = Vec::new();
        for i in c.objects() {
            for j in c.objects() {
                for a in c.hom(j, i) {
                    v.push((i, j, a));
                }
            }
        }
        v
    }

    #[test]
    fn identity_frame_is_trivial() {
        let amb = amb(Kind::FullMap, &[2]);
        let c = amb.category();
        let e = c.identity(ObjectId(0)).unwrap();
        let sw = sandwich(&amb, ObjectId(0), ObjectId(0), e).unwrap();
        let fr = build_frame(&sw, None).unwrap();
        assert_eq!(fr.b(), e);
        assert_eq!(fr.p.len(), 4);
        assert_eq!(fr.w.len(), 4);
        for x in fr.p.elements() {
            assert_eq!(fr.w.label(fr.phi[x]), fr.p_global(x));
        }
        let hat = hat_analysis(&fr).unwrap();
        assert!(hat.blocks.iter().all(|b| b.r == 1 && b.l == 1));
        let pb = pullback_check(&fr);
        assert_eq!(pb.pair_count, 4);
        let rep = analyze_frame(&sw, FrameChecks::ALL).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    }

    #[test]
    fn catalog_frames_are_clean() {
        for (kind, sizes) in [
            (Kind::FullMap, vec![2, 2]),
            (Kind::PartialMap, vec![2, 2]),
            (Kind::InjPartial, vec![2, 2]),
            (Kind::MatF2, vec![1, 2]),
        ] {
            let amb = amb(kind, &sizes);
            for (i, j, a) in all_sandwiches(&amb) {
                let sw = sandwich(&amb, i, j, a).unwrap();
                assert!(is_sandwich_regular(&sw));
                let rep = analyze_frame(&sw, FrameChecks::ALL).unwrap();
                assert!(rep.violations.is_empty(), "{kind} {a}: {:?}", rep.violations);
                assert_eq!(rep.mi_dominated, Some(true));
                if kind == Kind::InjPartial {
                    assert_eq!(rep.inverse_count, 1);
                    assert_eq!(rep.inverse_case, Some(true));
                }
            }
        }
    }

    #[test]
    fn fullmap_three_two_has_inflated_blocks() {
        let amb = amb(Kind::FullMap, &[3, 2]);
        let c = amb.category();
        let mut saw_inflation = false;
        for a in c.hom(ObjectId(1), ObjectId(0)) {
            let sw = sandwich(&amb, ObjectId(0), ObjectId(1), a).unwrap();
            let fr = build_frame(&sw, None).unwrap();
            let hat = hat_analysis(&fr).unwrap();
            assert!(hat.checks.is_clean());
            saw_inflation |= hat.blocks.iter().any(|b| b.r * b.l > 1 && b.rectangular_group == Some(true));
            let (r, l) = hat.dimensions();
            let va = fr.inverses_of_a().len();
            assert_eq!(r * l, va);
        }
        assert!(saw_inflation);
    }

    #[test]
    fn constant_in_fullmap_is_not_uniquely_regular() {
        let amb = amb(Kind::FullMap, &[2, 2]);
        let c = amb.category();
        let a = c
            .locate(&Morphism {
                src: ObjectId(1),
                dst: ObjectId(0),
                payload: Payload::Total(vec![1, 1]),
            })
            .unwrap();
        assert!(c.inverses(a).len() > 1);
        let sw = sandwich(&amb, ObjectId(0), ObjectId(1), a).unwrap();
        let fr = build_frame(&sw, None).unwrap();
        assert!(!inverse_case(&fr).uniquely_sandwich_regular);
    }

    #[test]
    fn non_sandwich_regular_fixture() {
        // {id, x = [2,-], empty} in partial maps on 2 points: x is nilpotent, not regular
        let full = build_category(Kind::PartialMap, &[2]).unwrap();
        let find = |v: &[u8]| {
            full.locate(&Morphism {
                src: ObjectId(0),
                dst: ObjectId(0),
                payload: Payload::Partial(v.to_vec()),
            })
            .unwrap()
        };
        let sub = full.restrict(&[find(&[1, 2]), find(&[2, 0]), find(&[0, 0])]).unwrap();
        let amb = Ambient::new(sub).unwrap();
        let c = amb.category();
        let e = c.identity(ObjectId(0)).unwrap();
        let sw = sandwich(&amb, ObjectId(0), ObjectId(0), e).unwrap();
        assert!(!is_sandwich_regular(&sw));
        assert!(build_frame(&sw, None).is_err());
        let x = c
            .locate(&Morphism {
                src: ObjectId(0),
                dst: ObjectId(0),
                payload: Payload::Partial(vec![2, 0]),
            })
            .unwrap();
        let sw = sandwich(&amb, ObjectId(0), ObjectId(0), x).unwrap();
        assert!(!is_sandwich_regular(&sw));
    }

    #[test]
    fn eggbox_pairs_render() {
        let amb = amb(Kind::FullMap, &[3, 2]);
        let c = amb.category();
        let a = c.hom(ObjectId(1), ObjectId(0)).find(|&a| c.morphism(a).payload.as_slice() == [1, 2]).unwrap();
        let sw = sandwich(&amb, ObjectId(0), ObjectId(1), a).unwrap();
        let fr = build_frame(&sw, None).unwrap();
        let hat = hat_analysis(&fr).unwrap();
        let pairs = paired_eggboxes(&fr, &hat);
        assert_eq!(pairs.len(), hat.p_green.d().len());
        let text = render_pairs_text(&fr, &pairs);
        assert!(text.contains('#'));
        let dot = render_pairs_dot(&fr, &pairs);
        assert!(dot.contains("cluster_P0") && dot.contains("cluster_W0"));
    }
}

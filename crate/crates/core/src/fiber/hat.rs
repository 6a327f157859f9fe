//! Green's relations of `W` pulled back to `P` through `x ↦ axa`, and the
//! rectangular groups they cut out.

use serde::{Deserialize, Serialize};

use super::RegularFrame;
use crate::error::Result;
use crate::green::{GreenData, Partition, Relation};
use crate::report::Checker;
use crate::sandwich::SandwichSemigroup;
use crate::semigroup::FiniteSemigroup;

/// One class of the pulled-back H relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HatBlock {
    /// Members, as indices into `P`.
    pub members: Vec<usize>,
    /// Number of R-classes of `P` meeting the block.
    pub r: usize,
    /// Number of L-classes of `P` meeting the block.
    pub l: usize,
    /// Does the block contain an idempotent?
    pub group: bool,
    /// Verdict of the rectangular-group test, for blocks over an idempotent.
    pub rectangular_group: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct HatData {
    /// Green's structure of `P` as a semigroup in its own right.
    pub p_green: GreenData,
    pub w_green: GreenData,
    /// Pulled-back relations, indexed like `Relation::ALL`.
    pub hat: Vec<Partition>,
    pub blocks: Vec<HatBlock>,
    /// Block containing the chosen inverse `b`.
    pub b_block: usize,
    pub checks: Checker,
}

impl HatData {
    pub fn hat(&self, rel: Relation) -> &Partition {
        let k = Relation::ALL.iter().position(|&r| r == rel).unwrap();
        &self.hat[k]
    }

    /// Dimensions `(r, l)` of the block over `b`.
    pub fn dimensions(&self) -> (usize, usize) {
        let blk = &self.blocks[self.b_block];
        (blk.r, blk.l)
    }
}

fn distinct(iter: impl Iterator<Item = usize>) -> usize {
    let mut v: Vec<usize> = iter.collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Is `members` (a subset of `s`) a rectangular group: closed, a union of
/// groups, with its idempotents a rectangular band, and of size `r·l·|H|`?
fn rectangular_group_test(s: &FiniteSemigroup, g: &GreenData, members: &[usize], r: usize, l: usize) -> bool {
    let closed = s.is_closed(members);
    let union_of_groups = members.iter().all(|&x| g.is_group_h(x));
    let idem: Vec<usize> = members.iter().copied().filter(|&x| s.is_idempotent(x)).collect();
    let band = idem
        .iter()
        .all(|&y| idem.iter().all(|&z| s.mul3(y, z, y) == y));
    let h = g.class(Relation::H, members[0]).len();
    closed && union_of_groups && band && idem.len() == r * l && members.len() == r * l * h
}

pub fn hat_analysis(frame: &RegularFrame) -> Result<HatData> {
    let p = &frame.p;
    let w = &frame.w;
    let phi = &frame.phi;
    let gp = GreenData::of_semigroup(p)?;
    let gw = GreenData::of_semigroup(w)?;
    let sw = frame.sandwich();
    let ga = sw.green();
    let hat: Vec<Partition> = Relation::ALL
        .iter()
        .map(|&rel| Partition::by_key(p.len(), |x| gw.partition(rel).class_of(phi[x])))
        .collect();
    let hat_of = |rel: Relation| &hat[Relation::ALL.iter().position(|&r| r == rel).unwrap()];
    let mut ck = Checker::new();
    let n = p.len();
    let lab = |x: usize| p.label(x);

    for x in 0..n {
        for y in 0..n {
            let w2 = || vec![x, y];
            // Green's relations of P agree with those of the sandwich, except J
            for rel in [Relation::R, Relation::L, Relation::H, Relation::D] {
                ck.check(
                    gp.related(rel, x, y) == ga.related(rel, lab(x), lab(y)),
                    "K on P = K^a restricted (K ≠ J)",
                    w2,
                );
            }
            let d = gp.related(Relation::D, x, y);
            for rel in [Relation::R, Relation::L, Relation::H] {
                let k = gp.related(rel, x, y);
                let kh = hat_of(rel).related(x, y);
                ck.check(!k || kh, "K^a ⊆ hat K", w2);
                ck.check(!kh || d, "hat K ⊆ D^a", w2);
            }
            ck.check(hat_of(Relation::D).related(x, y) == d, "hat D = D^a", w2);
            ck.check(
                hat_of(Relation::J).related(x, y) == gp.related(Relation::J, x, y),
                "hat J = J on P",
                w2,
            );
            ck.check(
                gp.leq_j(x, y) == gw.leq_j(phi[x], phi[y]),
                "J-orders of P and W correspond",
                w2,
            );
        }
    }

    // H-classes of W are those of the whole sandwich semigroup under b
    let swb = SandwichSemigroup::new(sw.ambient(), sw.j(), sw.i(), frame.b())?;
    for q in 0..w.len() {
        let mut via_w: Vec<usize> = gw.class(Relation::H, q).iter().map(|&t| w.label(t)).collect();
        via_w.sort_unstable();
        let local = swb.local(w.label(q)).expect("W lies in S_ji");
        let via_b: Vec<usize> = swb.green().class(Relation::H, local).iter().map(|&t| swb.global(t)).collect();
        ck.check(via_w == via_b, "H in W equals H in S_ji^b", || vec![q]);
    }

    // phi is a bijection from each H-class of P onto an H-class of W
    for class in gp.h().classes() {
        let x = class[0];
        let mut img: Vec<usize> = class.iter().map(|&u| phi[u]).collect();
        img.sort_unstable();
        let before = img.len();
        img.dedup();
        let target = gw.class(Relation::H, phi[x]);
        ck.check(before == img.len() && img == target, "phi bijects H^a_x onto H_x̄", || {
            class.clone()
        });
        let (gx, gq) = (gp.is_group_h(x), gw.is_group_h(phi[x]));
        ck.check(gx == gq, "H^a_x is a group iff H_x̄ is", || vec![x]);
        if gx && gq {
            let hom = class.iter().all(|&u| {
                class
                    .iter()
                    .all(|&v| phi[p.mul(u, v)] == w.mul(phi[u], phi[v]))
            });
            ck.check(hom, "phi restricts to a group isomorphism", || class.clone());
        }
    }

    let blocks: Vec<HatBlock> = hat_of(Relation::H)
        .classes()
        .iter()
        .map(|members| {
            let r = distinct(members.iter().map(|&x| gp.r().class_of(x)));
            let l = distinct(members.iter().map(|&x| gp.l().class_of(x)));
            let group = members.iter().any(|&x| p.is_idempotent(x));
            let rectangular_group = group.then(|| rectangular_group_test(p, &gp, members, r, l));
            HatBlock {
                members: members.clone(),
                r,
                l,
                group,
                rectangular_group,
            }
        })
        .collect();
    for (k, blk) in blocks.iter().enumerate() {
        if let Some(ok) = blk.rectangular_group {
            ck.check(ok, "hat H over an idempotent is a rectangular group", || vec![k]);
            // constituent groups are pairwise isomorphic via phi
            let groups: Vec<&Vec<usize>> = gp
                .h()
                .classes()
                .iter()
                .filter(|c| blk.members.contains(&c[0]))
                .collect();
            let sizes = distinct(groups.iter().map(|c| c.len()));
            ck.check(sizes == 1, "groups in a hat H block have equal order", || vec![k]);
        }
    }
    let b_block = hat_of(Relation::H).class_of(frame.b_in_p);
    Ok(HatData {
        p_green: gp,
        w_green: gw,
        hat,
        blocks,
        b_block,
        checks: ck,
    })
}

//! Mid-identities, regularity-preserving elements and local monoids of `P`.

use super::{HatData, RegularFrame};
use crate::error::Result;
use crate::green::{domination_report, mid_identities, regularity_preserving, DominationReport, Relation};
use crate::report::Checker;

#[derive(Debug, Clone)]
pub struct MiSummary {
    pub mid_identities: Vec<usize>,
    pub domination: DominationReport,
    pub checks: Checker,
}

pub fn mi_structure(frame: &RegularFrame, hat: &HatData) -> Result<MiSummary> {
    let (p, w, phi) = (&frame.p, &frame.w, &frame.phi);
    let mut ck = Checker::new();
    let mut va: Vec<usize> = frame
        .inverses_of_a()
        .iter()
        .map(|&g| frame.p_index(g).expect("inverses of a are regular"))
        .collect();
    va.sort_unstable();
    let hb = &hat.blocks[hat.b_block].members;
    let e_hb: Vec<usize> = hb.iter().copied().filter(|&x| p.is_idempotent(x)).collect();
    let mi = mid_identities(p);
    ck.check(mi == va, "MI(P) = V(a)", || mi.clone());
    ck.check(e_hb == va, "E_a(hat H_b) = V(a)", || e_hb.clone());
    let rp = regularity_preserving(p)?;
    ck.check(&rp == hb, "RP(P) = hat H_b", || rp.clone());

    let dom = domination_report(p)?;
    for &u in &mi {
        ck.check(dom.maximal_idempotents.contains(&u), "MI(P) ⊆ MaxE(P)", || vec![u]);
    }

    // local monoids at the inverses of a are copies of W
    let mut covered = vec![false; p.len()];
    for &e in &va {
        let we = p.local_monoid_elements(e);
        for &x in &we {
            covered[x] = true;
        }
        let img: Vec<usize> = we.iter().map(|&x| phi[x]).collect();
        let bijective = {
            let mut s = img.clone();
            s.sort_unstable();
            s.dedup();
            s.len() == we.len() && s.len() == w.len()
        };
        let hom = we
            .iter()
            .all(|&x| we.iter().all(|&y| phi[p.mul(x, y)] == w.mul(phi[x], phi[y])));
        ck.check(bijective && hom, "phi restricts to an isomorphism W_e → W", || vec![e]);
    }

    // in the finite monoid W, the J-class of the identity is its H-class
    let gw = &hat.w_green;
    let ia = frame.w_identity;
    ck.check(
        gw.class(Relation::J, ia) == gw.class(Relation::H, ia),
        "J_a = H_a in W",
        || vec![ia],
    );
    let gp = &hat.p_green;
    let b = frame.b_in_p;
    ck.check(gp.class(Relation::D, b) == hb.as_slice(), "hat H_b = D_b", || vec![b]);
    ck.check(gp.class(Relation::J, b) == hb.as_slice(), "hat H_b = J_b", || vec![b]);

    if dom.mi_dominated {
        ck.check(covered.iter().all(|&c| c), "P is the union of the W_e", Vec::new);
    }
    ck.absorb_prefixed("domination", dom.checks.clone());
    Ok(MiSummary {
        mid_identities: mi,
        domination: dom,
        checks: ck,
    })
}

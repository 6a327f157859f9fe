//! Comparison of the sandwich semigroup's Green's classes with the ambient ones.

use super::{PSets, SandwichSemigroup};
use crate::green::Relation;
use crate::report::Checker;

/// For every `x ∈ S_ij`, compare each sandwich class `K^a_x` with the class
/// predicted from the ambient relation and the P-sets.
pub fn green_transfer_check(sw: &SandwichSemigroup, ps: &PSets) -> Checker {
    let mut ck = Checker::new();
    let n = sw.len();
    let g = sw.green();
    let within = |rel: Relation, x: usize, set: &[bool]| -> Vec<usize> {
        sw.ambient_class(rel, x).into_iter().filter(|&y| set[y]).collect()
    };
    for x in 0..n {
        let single = vec![x];
        let r_exp = if ps.p1[x] { within(Relation::R, x, &ps.p1) } else { single.clone() };
        let l_exp = if ps.p2[x] { within(Relation::L, x, &ps.p2) } else { single.clone() };
        let h_exp = if ps.p[x] { sw.ambient_class(Relation::H, x) } else { single.clone() };
        let d_exp = match (ps.p1[x], ps.p2[x]) {
            (true, true) => within(Relation::D, x, &ps.p),
            (false, true) => l_exp.clone(),
            (true, false) => r_exp.clone(),
            (false, false) => single.clone(),
        };
        let j_exp = if ps.p3[x] { within(Relation::J, x, &ps.p3) } else { d_exp.clone() };
        let w = || vec![x];
        ck.check(g.class(Relation::R, x) == r_exp.as_slice(), "R^a case split", w);
        ck.check(g.class(Relation::L, x) == l_exp.as_slice(), "L^a case split", w);
        ck.check(g.class(Relation::H, x) == h_exp.as_slice(), "H^a case split", w);
        ck.check(g.class(Relation::D, x) == d_exp.as_slice(), "D^a case split", w);
        ck.check(g.class(Relation::J, x) == j_exp.as_slice(), "J^a case split", w);
        if !ps.p[x] {
            ck.check(
                g.class(Relation::H, x) == [x] && !g.is_group_h(x),
                "H^a outside P is a non-group singleton",
                w,
            );
        }
    }
    ck.check(
        g.d().classes() == g.j().classes(),
        "J^a = D^a",
        Vec::new,
    );
    ck
}

/// If every `a·x·a` is R-stable (resp. L-stable) in the category, every
/// element of the sandwich semigroup is R-stable (resp. L-stable) there.
pub fn stability_transfer_check(sw: &SandwichSemigroup) -> Checker {
    let mut ck = Checker::new();
    let n = sw.len();
    let amb = sw.ambient();
    let g = sw.green();
    let r_hyp = (0..n).all(|x| amb.stability(sw.sandwiched(x)).r_stable);
    let l_hyp = (0..n).all(|x| amb.stability(sw.sandwiched(x)).l_stable);
    let r_stable = (0..n).all(|t| {
        (0..n).all(|x| {
            let xt = sw.star(x, t);
            !g.related(Relation::J, xt, x) || g.related(Relation::R, xt, x)
        })
    });
    let l_stable = (0..n).all(|t| {
        (0..n).all(|x| {
            let tx = sw.star(t, x);
            !g.related(Relation::J, tx, x) || g.related(Relation::L, tx, x)
        })
    });
    ck.check(!r_hyp || r_stable, "aSa R-stable implies S^a R-stable", Vec::new);
    ck.check(!l_hyp || l_stable, "aSa L-stable implies S^a L-stable", Vec::new);
    ck
}

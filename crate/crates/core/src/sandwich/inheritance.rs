//! How Green's structure, stability and P-sets pass to a partial subsemigroup.

use super::{p_sets, Ambient, SandwichSemigroup};
use crate::error::{Error, Result};
use crate::green::Relation;
use crate::report::Checker;

/// Embed `sub` into `sup` by payload and verify it is a partial subsemigroup.
fn embedding(sup: &Ambient, sub: &Ambient) -> Result<Vec<usize>> {
    let (s, t) = (sup.category(), sub.category());
    if s.sizes() != t.sizes() {
        return Err(Error::Malformed("object lists differ".into()));
    }
    let emb = (0..t.len())
        .map(|x| {
            s.locate(t.morphism(x))
                .ok_or_else(|| Error::Malformed(format!("morphism {} is not in the category", t.morphism(x))))
        })
        .collect::<Result<Vec<_>>>()?;
    for x in 0..t.len() {
        for y in t.right_composable(x) {
            if emb[t.product(x, y)] != s.product(emb[x], emb[y]) {
                return Err(Error::NotClosed(x, y));
            }
        }
    }
    Ok(emb)
}

const ONE_SIDED: [Relation; 3] = [Relation::R, Relation::L, Relation::H];

/// Verify the inheritance statements for `sub ⊆ sup`, over every pair of
/// objects and every sandwich element of `sub`.
pub fn subsemigroup_inheritance(sup: &Ambient, sub: &Ambient) -> Result<Checker> {
    let emb = embedding(sup, sub)?;
    let t = sub.category();
    let (gs, gt) = (sup.green(), sub.green());
    let mut ck = Checker::new();

    // preorders agree below regular elements
    for x in 0..t.len() {
        for y in 0..t.len() {
            if !sub.is_regular(y) {
                continue;
            }
            let (ex, ey) = (emb[x], emb[y]);
            let w = || vec![x, y];
            ck.check(gs.leq_r(ex, ey) == gt.leq_r(x, y), "≤R agrees below regular", w);
            ck.check(gs.leq_l(ex, ey) == gt.leq_l(x, y), "≤L agrees below regular", w);
            ck.check(gs.leq_h(ex, ey) == gt.leq_h(x, y), "≤H agrees below regular", w);
            if sub.is_regular(x) {
                for rel in ONE_SIDED {
                    ck.check(
                        gs.related(rel, ex, ey) == gt.related(rel, x, y),
                        "K agrees on regular pairs",
                        w,
                    );
                }
            }
        }
    }

    let t_regular = (0..t.len()).all(|x| sub.is_regular(x));
    if t_regular {
        for x in 0..t.len() {
            let (ss, st) = (sup.stability(emb[x]), sub.stability(x));
            ck.check(!ss.r_stable || st.r_stable, "R-stability inherited", || vec![x]);
            ck.check(!ss.l_stable || st.l_stable, "L-stability inherited", || vec![x]);
        }
    }

    for i in t.objects() {
        for j in t.objects() {
            for a in t.hom(j, i) {
                let sw_t = SandwichSemigroup::new(sub, i, j, a)?;
                let sw_s = SandwichSemigroup::new(sup, i, j, emb[a])?;
                let (pt, ps) = (p_sets(&sw_t), p_sets(&sw_s));
                let lift = |x: usize| sw_s.local(emb[sw_t.global(x)]).expect("hom-set preserved");
                let n = sw_t.len();
                let reg = |g: usize| sub.is_regular(g);
                let base = (0..n).all(|x| reg(sw_t.global(x)));
                let cond_r = base && (0..n).all(|x| reg(sw_t.right_a(x)));
                let cond_l = base && (0..n).all(|x| reg(sw_t.left_a(x)));
                let cond_rl = cond_r && cond_l;
                let stable = sup.stability(emb[a]).is_stable();
                let sets = [
                    ("P1", &pt.p1, &ps.p1, cond_r),
                    ("P2", &pt.p2, &ps.p2, cond_l),
                    ("P", &pt.p, &ps.p, cond_rl),
                    ("P3", &pt.p3, &ps.p3, cond_rl && stable),
                ];
                for (name, in_t, in_s, cond) in sets {
                    for x in 0..n {
                        let w = || vec![a, x];
                        ck.check(
                            !in_t[x] || in_s[lift(x)],
                            &format!("{name}(T) ⊆ {name}(S) ∩ T"),
                            w,
                        );
                        if cond {
                            ck.check(
                                in_t[x] == in_s[lift(x)],
                                &format!("{name}(T) = {name}(S) ∩ T under regularity"),
                                w,
                            );
                        }
                    }
                }
                let (ga, gsa) = (sw_t.green(), sw_s.green());
                for (rel, cond) in [
                    (Relation::R, cond_r),
                    (Relation::L, cond_l),
                    (Relation::H, cond_rl),
                ] {
                    for x in 0..n {
                        for y in 0..n {
                            let (in_t, in_s) =
                                (ga.related(rel, x, y), gsa.related(rel, lift(x), lift(y)));
                            let w = || vec![a, x, y];
                            ck.check(!in_t || in_s, &format!("{rel:?}^a(T) ⊆ {rel:?}^a(S)"), w);
                            if cond {
                                ck.check(
                                    in_t == in_s,
                                    &format!("{rel:?}^a(T) = {rel:?}^a(S) under regularity"),
                                    w,
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(ck)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{build_category, Kind};

    fn amb(kind: Kind) -> Ambient {
        Ambient::new(build_category(kind, &[2, 2]).unwrap()).unwrap()
    }

    #[test]
    fn maps_inside_partial_maps() {
        let pt = amb(Kind::PartialMap);
        for kind in [Kind::FullMap, Kind::InjPartial, Kind::PartialMap] {
            let sub = amb(kind);
            let ck = subsemigroup_inheritance(&pt, &sub).unwrap();
            assert!(ck.is_clean(), "{kind}: {:?}", ck.violations);
            assert!(ck.checks > 0);
        }
    }

    #[test]
    fn foreign_morphisms_are_rejected() {
        let pt = amb(Kind::PartialMap);
        let m = amb(Kind::MatF2);
        assert!(matches!(
            subsemigroup_inheritance(&pt, &m),
            Err(Error::Malformed(_))
        ));
    }
}

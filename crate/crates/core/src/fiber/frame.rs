//! The regular part of a sandwich semigroup and the monoid it fibres over.
//!
//! With `b` an inverse of `a`, the frame holds
//! * `P`: the regular elements of `S_ij` under `⋆_a`,
//! * `W`: `a·S_ij·a` under `p ⊛ q = p·b·q`, a monoid with identity `a`,
//! * `T1`, `T2`: the regular parts of `(S_ij·a, ·)` and `(a·S_ij, ·)`,
//!
//! and the maps `x ↦ xa`, `x ↦ ax`, `g ↦ ag`, `h ↦ ha`, `x ↦ axa` between them.

use std::collections::HashMap;

use crate::category::Category;
use crate::error::{Error, Result};
use crate::report::Checker;
use crate::sandwich::{p_sets, PSets, SandwichSemigroup};
use crate::semigroup::{is_injective, FiniteSemigroup};

/// Is `a` regular with every `a·x·a` (for `x ∈ S_ij`) regular in the category?
pub fn is_sandwich_regular(sw: &SandwichSemigroup) -> bool {
    let amb = sw.ambient();
    amb.is_regular(sw.a()) && (0..sw.len()).all(|x| amb.is_regular(sw.sandwiched(x)))
}

#[derive(Debug, Clone)]
pub struct RegularFrame<'s, 'a> {
    sw: &'s SandwichSemigroup<'a>,
    /// Global index of the chosen inverse of `a`.
    b: usize,
    /// All inverses of `a`, global indices, increasing.
    inverses: Vec<usize>,
    psets: PSets,
    /// Labels: local indices in `S_ij`.
    pub p: FiniteSemigroup,
    /// Labels: global indices in `S_ji`.
    pub w: FiniteSemigroup,
    /// Labels: global indices in `S_i`.
    pub t1: FiniteSemigroup,
    /// Labels: global indices in `S_j`.
    pub t2: FiniteSemigroup,
    /// `P → T1`, `x ↦ xa`
    pub psi1: Vec<usize>,
    /// `P → T2`, `x ↦ ax`
    pub psi2: Vec<usize>,
    /// `T1 → W`, `g ↦ ag`
    pub phi1: Vec<usize>,
    /// `T2 → W`, `h ↦ ha`
    pub phi2: Vec<usize>,
    /// `P → W`, `x ↦ axa`
    pub phi: Vec<usize>,
    /// Index of `a` in `W`.
    pub w_identity: usize,
    /// Index of `b` in `P`.
    pub b_in_p: usize,
    /// Verification of the construction itself.
    pub checks: Checker,
}

fn index_by_label(s: &FiniteSemigroup) -> HashMap<usize, usize> {
    s.labels().iter().enumerate().map(|(t, &l)| (l, t)).collect()
}

/// The semigroup of `set` (global indices) under `f`, sorted by label.
fn table_on(set: &[usize], f: impl Fn(usize, usize) -> usize) -> Result<FiniteSemigroup> {
    let mut labels = set.to_vec();
    labels.sort_unstable();
    labels.dedup();
    FiniteSemigroup::from_labels(labels, f)
}

/// The regular elements of `s`, as a subsemigroup (errors if not closed).
fn regular_part(s: &FiniteSemigroup) -> Result<FiniteSemigroup> {
    s.sub(&s.regular_elements())
}

fn map_into(src: &FiniteSemigroup, dst: &FiniteSemigroup, f: impl Fn(usize) -> usize) -> Result<Vec<usize>> {
    let index = index_by_label(dst);
    src.labels()
        .iter()
        .map(|&l| {
            index
                .get(&f(l))
                .copied()
                .ok_or_else(|| Error::Malformed(format!("image of {l} lies outside the codomain")))
        })
        .collect()
}

fn is_surjective(f: &[usize], codomain: usize) -> bool {
    let mut hit = vec![false; codomain];
    for &y in f {
        hit[y] = true;
    }
    hit.into_iter().all(|h| h)
}

/// Check that `f: src → dst` is a surjective homomorphism.
fn epimorphism(ck: &mut Checker, name: &str, src: &FiniteSemigroup, dst: &FiniteSemigroup, f: &[usize]) {
    ck.check(
        src.is_homomorphism(dst, f),
        &format!("{name} is a homomorphism"),
        Vec::new,
    );
    ck.check(
        is_surjective(f, dst.len()),
        &format!("{name} is surjective"),
        Vec::new,
    );
}

impl<'s, 'a> RegularFrame<'s, 'a> {
    /// Build the frame; `b` defaults to the smallest inverse of `a`.
    pub fn build(sw: &'s SandwichSemigroup<'a>, b: Option<usize>) -> Result<Self> {
        if !is_sandwich_regular(sw) {
            return Err(Error::Unsupported("sandwich element is not sandwich-regular".into()));
        }
        let c = sw.category();
        let a = sw.a();
        let inverses = c.inverses(a);
        let b = match b {
            None => inverses[0],
            Some(b) if inverses.contains(&b) => b,
            Some(b) => {
                return Err(Error::Malformed(format!("{b} is not an inverse of the sandwich element")))
            }
        };
        let psets = p_sets(sw);
        let p_members = psets.p_members();
        let p = sw.semigroup().sub(&p_members)?.with_labels(p_members.clone());
        let n = sw.len();
        let all: Vec<usize> = (0..n).collect();

        let sa: Vec<usize> = all.iter().map(|&x| sw.right_a(x)).collect();
        let as_: Vec<usize> = all.iter().map(|&x| sw.left_a(x)).collect();
        let asa: Vec<usize> = all.iter().map(|&x| sw.sandwiched(x)).collect();
        let prod = |x: usize, y: usize| c.product(x, y);
        let sa_semi = table_on(&sa, prod)?;
        let as_semi = table_on(&as_, prod)?;
        let w = table_on(&asa, |x, y| c.product(c.product(x, b), y))?;
        let t1 = regular_part(&sa_semi)?;
        let t2 = regular_part(&as_semi)?;

        let psi1 = map_into(&p, &t1, |x| sw.right_a(x))?;
        let psi2 = map_into(&p, &t2, |x| sw.left_a(x))?;
        let phi1 = map_into(&t1, &w, |g| c.product(a, g))?;
        let phi2 = map_into(&t2, &w, |h| c.product(h, a))?;
        let phi = map_into(&p, &w, |x| sw.sandwiched(x))?;
        let w_identity = index_by_label(&w)[&a];
        let b_in_p = p
            .index_of_label(sw.local(b).expect("inverse lies in S_ij"))
            .ok_or_else(|| Error::Malformed("inverse of a is not regular in the sandwich".into()))?;

        let mut frame = Self {
            sw,
            b,
            inverses,
            psets,
            p,
            w,
            t1,
            t2,
            psi1,
            psi2,
            phi1,
            phi2,
            phi,
            w_identity,
            b_in_p,
            checks: Checker::new(),
        };
        frame.checks = frame.verify();
        Ok(frame)
    }

    pub fn sandwich(&self) -> &'s SandwichSemigroup<'a> {
        self.sw
    }

    pub fn category(&self) -> &'a Category {
        self.sw.category()
    }

    pub fn a(&self) -> usize {
        self.sw.a()
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn inverses_of_a(&self) -> &[usize] {
        &self.inverses
    }

    pub fn psets(&self) -> &PSets {
        &self.psets
    }

    /// Global morphism index of element `x` of `P`.
    pub fn p_global(&self, x: usize) -> usize {
        self.sw.global(self.p.label(x))
    }

    /// Index in `P` of a global morphism, if it lies there.
    pub fn p_index(&self, g: usize) -> Option<usize> {
        self.sw.local(g).and_then(|l| self.p.index_of_label(l))
    }

    /// Index in `W` of a global morphism, if it lies there.
    pub fn w_index(&self, g: usize) -> Option<usize> {
        self.w.index_of_label(g)
    }

    /// `x ⋆_a y` in `P`.
    pub fn star(&self, x: usize, y: usize) -> usize {
        self.p.mul(x, y)
    }

    /// `p ⊛ q` in `W`.
    pub fn circ(&self, p: usize, q: usize) -> usize {
        self.w.mul(p, q)
    }

    /// The diagram's maps as `(name, map, domain, codomain)`.
    pub fn maps(&self) -> [(&'static str, &[usize], &FiniteSemigroup, &FiniteSemigroup); 5] {
        [
            ("psi1", &self.psi1, &self.p, &self.t1),
            ("psi2", &self.psi2, &self.p, &self.t2),
            ("phi1", &self.phi1, &self.t1, &self.w),
            ("phi2", &self.phi2, &self.t2, &self.w),
            ("phi", &self.phi, &self.p, &self.w),
        ]
    }

    fn verify(&self) -> Checker {
        let mut ck = Checker::new();
        let sw = self.sw;
        let c = self.category();
        let a = self.a();
        let ps = &self.psets;
        let n = sw.len();

        // P is the regular part of the sandwich and a regular subsemigroup
        let reg: Vec<usize> = sw.semigroup().regular_elements();
        ck.check(reg == self.p.labels(), "Reg(S^a) = P", || reg.clone());
        ck.check(self.p.is_regular(), "P is regular", Vec::new);

        // T1 = Pa = P2·a and T2 = aP = a·P1
        let image = |set: &mut dyn Iterator<Item = usize>| {
            let mut v: Vec<usize> = set.collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let t1 = self.t1.labels().to_vec();
        let t2 = self.t2.labels().to_vec();
        let pa = image(&mut (0..n).filter(|&x| ps.p[x]).map(|x| sw.right_a(x)));
        let p2a = image(&mut (0..n).filter(|&x| ps.p2[x]).map(|x| sw.right_a(x)));
        let ap = image(&mut (0..n).filter(|&x| ps.p[x]).map(|x| sw.left_a(x)));
        let ap1 = image(&mut (0..n).filter(|&x| ps.p1[x]).map(|x| sw.left_a(x)));
        ck.check(t1 == pa, "Reg(S_ij a) = P a", || t1.clone());
        ck.check(t1 == p2a, "Reg(S_ij a) = P2 a", || t1.clone());
        ck.check(t2 == ap, "Reg(a S_ij) = a P", || t2.clone());
        ck.check(t2 == ap1, "Reg(a S_ij) = a P1", || t2.clone());
        ck.check(self.t1.is_regular() && self.t2.is_regular(), "T1 and T2 are regular", Vec::new);

        // W = aPa = aP1a = aP2a, a regular monoid with identity a
        let w = self.w.labels().to_vec();
        for (set, clause) in [(&ps.p, "W = aPa"), (&ps.p1, "W = aP1a"), (&ps.p2, "W = aP2a")] {
            let img = image(&mut (0..n).filter(|&x| set[x]).map(|x| sw.sandwiched(x)));
            ck.check(img == w, clause, || img.clone());
        }
        ck.check(self.w.is_regular(), "W is regular", Vec::new);
        ck.check(self.w.identity() == Some(self.w_identity), "W has identity a", || vec![a]);

        // the product on W does not depend on the inverse chosen
        for &other in &self.inverses {
            let same = self.w.elements().all(|x| {
                self.w.elements().all(|y| {
                    let (gx, gy) = (self.w.label(x), self.w.label(y));
                    c.product(c.product(gx, other), gy) == self.w.label(self.w.mul(x, y))
                })
            });
            ck.check(same, "product on W is independent of the inverse", || vec![other]);
        }

        // diagram: each map an epimorphism and both routes agree
        for (name, f, src, dst) in self.maps() {
            epimorphism(&mut ck, name, src, dst, f);
        }
        for x in self.p.elements() {
            let via1 = self.phi1[self.psi1[x]];
            let via2 = self.phi2[self.psi2[x]];
            ck.check(via1 == self.phi[x] && via2 == self.phi[x], "phi = psi1 phi1 = psi2 phi2", || {
                vec![x]
            });
        }

        // W is isomorphic to the local monoids ba S_i ba and ab S_j ab
        let b = self.b;
        let ba = c.product(b, a);
        let ab = c.product(a, b);
        for (e, left, clause) in [
            (ba, true, "W ≅ ba S_i ba via x ↦ bx"),
            (ab, false, "W ≅ ab S_j ab via x ↦ xb"),
        ] {
            let obj = c.src(e);
            let local: Vec<usize> = c
                .hom(obj, obj)
                .map(|s| c.product(c.product(e, s), e))
                .collect();
            let ok = table_on(&local, |x, y| c.product(x, y)).and_then(|lm| {
                let f = map_into(&self.w, &lm, |x| if left { c.product(b, x) } else { c.product(x, b) })?;
                Ok(self.w.is_isomorphism(&lm, &f))
            });
            ck.check(matches!(ok, Ok(true)), clause, || vec![e]);
        }

        // under both cancellation laws, x ↦ axa is injective on all of S_ij
        let cancel_r = is_injective(&(0..n).map(|x| sw.right_a(x)).collect::<Vec<_>>());
        let cancel_l = is_injective(&(0..n).map(|x| sw.left_a(x)).collect::<Vec<_>>());
        if cancel_r && cancel_l {
            let full: Vec<usize> = (0..n).map(|x| sw.sandwiched(x)).collect();
            ck.check(
                is_injective(&full) && full.len() == w.len(),
                "two-sided cancellation makes x ↦ axa a bijection onto W",
                Vec::new,
            );
            ck.check(self.p.len() == n, "two-sided cancellation makes S^a regular", Vec::new);
        }
        ck
    }
}

pub fn build_frame<'s, 'a>(sw: &'s SandwichSemigroup<'a>, b: Option<usize>) -> Result<RegularFrame<'s, 'a>> {
    RegularFrame::build(sw, b)
}

//! Sandwich semigroups `(S_ij, ⋆_a)` with `x ⋆_a y = x·a·y`, and the sets that
//! govern how Green's structure of the ambient category transfers to them.

mod inheritance;
mod transfer;

pub use inheritance::subsemigroup_inheritance;
pub use transfer::{green_transfer_check, stability_transfer_check};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::category::{Category, ObjectId};
use crate::error::{Error, Result};
use crate::green::{stability, GreenData, Relation, Stability};
use crate::report::{Checker, Violation};
use crate::semigroup::FiniteSemigroup;

/// A category together with its Green's structure, regular elements and
/// per-element stability. Everything here is computed once and shared by all
/// sandwich semigroups built on top.
#[derive(Debug, Clone)]
pub struct Ambient {
    cat: Category,
    green: GreenData,
    regular: Vec<bool>,
    stable: Vec<Stability>,
}

impl Ambient {
    pub fn new(cat: Category) -> Result<Self> {
        let green = GreenData::of_category(&cat)?;
        let regular = cat.regular_elements();
        let stable = (0..cat.len()).map(|a| stability(&cat, &green, a)).collect();
        Ok(Self {
            cat,
            green,
            regular,
            stable,
        })
    }

    pub fn category(&self) -> &Category {
        &self.cat
    }

    pub fn green(&self) -> &GreenData {
        &self.green
    }

    pub fn is_regular(&self, x: usize) -> bool {
        self.regular[x]
    }

    pub fn stability(&self, x: usize) -> Stability {
        self.stable[x]
    }

    pub fn related(&self, rel: Relation, x: usize, y: usize) -> bool {
        self.green.related(rel, x, y)
    }
}

/// Full-table associativity check up to this size; random triples above.
const FULL_ASSOC_LIMIT: usize = 128;
const SAMPLED_TRIPLES: usize = 20_000;

/// `S_ij` under `x ⋆_a y = x·a·y`. Elements are local indices `0..len()`;
/// `global(k)` gives the morphism index in the ambient category.
#[derive(Debug, Clone)]
pub struct SandwichSemigroup<'a> {
    amb: &'a Ambient,
    i: ObjectId,
    j: ObjectId,
    a: usize,
    offset: usize,
    table: FiniteSemigroup,
    green: GreenData,
}

impl<'a> SandwichSemigroup<'a> {
    pub fn new(amb: &'a Ambient, i: ObjectId, j: ObjectId, a: usize) -> Result<Self> {
        let c = amb.category();
        let homs = c.try_hom(i, j)?;
        if a >= c.len() || c.src(a) != j || c.dst(a) != i {
            return Err(Error::NotInHomSet { src: j.0, dst: i.0 });
        }
        let offset = homs.start;
        let n = homs.len();
        let xa: Vec<usize> = homs.clone().map(|x| c.product(x, a)).collect();
        let table = FiniteSemigroup::from_fn(n, |x, y| c.product(xa[x], offset + y) - offset)?
            .with_labels(homs.collect());
        let sw = Self {
            amb,
            i,
            j,
            a,
            offset,
            green: GreenData::of_semigroup(&table)?,
            table,
        };
        if !sw.associativity_holds() {
            return Err(Error::Malformed("sandwich product is not associative".into()));
        }
        Ok(sw)
    }

    fn associativity_holds(&self) -> bool {
        let s = &self.table;
        let n = s.len();
        if n <= FULL_ASSOC_LIMIT {
            return s.is_associative();
        }
        let mut rng = ChaCha8Rng::seed_from_u64((self.a as u64) << 32 | n as u64);
        (0..SAMPLED_TRIPLES).all(|_| {
            let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            s.mul(s.mul(x, y), z) == s.mul(x, s.mul(y, z))
        })
    }

    pub fn ambient(&self) -> &'a Ambient {
        self.amb
    }

    pub fn category(&self) -> &'a Category {
        self.amb.category()
    }

    pub fn i(&self) -> ObjectId {
        self.i
    }

    pub fn j(&self) -> ObjectId {
        self.j
    }

    /// The sandwich element, as a global morphism index in `S_ji`.
    pub fn a(&self) -> usize {
        self.a
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn global(&self, x: usize) -> usize {
        self.offset + x
    }

    pub fn local(&self, g: usize) -> Option<usize> {
        (g >= self.offset && g < self.offset + self.len()).then(|| g - self.offset)
    }

    pub fn star(&self, x: usize, y: usize) -> usize {
        self.table.mul(x, y)
    }

    /// The sandwich product as a table-backed semigroup, labelled by global index.
    pub fn semigroup(&self) -> &FiniteSemigroup {
        &self.table
    }

    /// Green's structure of the sandwich semigroup itself.
    pub fn green(&self) -> &GreenData {
        &self.green
    }

    /// `x·a ∈ S_i`, global index.
    pub fn right_a(&self, x: usize) -> usize {
        self.category().product(self.global(x), self.a)
    }

    /// `a·x ∈ S_j`, global index.
    pub fn left_a(&self, x: usize) -> usize {
        self.category().product(self.a, self.global(x))
    }

    /// `a·x·a ∈ S_ji`, global index.
    pub fn sandwiched(&self, x: usize) -> usize {
        self.category().product(self.left_a(x), self.a)
    }

    /// The ambient class of `x`, restricted to `S_ij`, in local indices.
    pub fn ambient_class(&self, rel: Relation, x: usize) -> Vec<usize> {
        let gx = self.global(x);
        (0..self.len())
            .filter(|&y| self.amb.related(rel, gx, self.global(y)))
            .collect()
    }
}

pub fn sandwich(amb: &Ambient, i: ObjectId, j: ObjectId, a: usize) -> Result<SandwichSemigroup<'_>> {
    SandwichSemigroup::new(amb, i, j, a)
}

/// Membership vectors over local indices of `S_ij`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PSets {
    /// `x·a R x`
    pub p1: Vec<bool>,
    /// `a·x L x`
    pub p2: Vec<bool>,
    /// `a·x·a J x`
    pub p3: Vec<bool>,
    pub p: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PSetSizes {
    pub p1: usize,
    pub p2: usize,
    pub p3: usize,
    pub p: usize,
}

pub fn members(flags: &[bool]) -> Vec<usize> {
    flags
        .iter()
        .enumerate()
        .filter_map(|(x, &f)| f.then_some(x))
        .collect()
}

impl PSets {
    pub fn sizes(&self) -> PSetSizes {
        let count = |v: &[bool]| v.iter().filter(|&&f| f).count();
        PSetSizes {
            p1: count(&self.p1),
            p2: count(&self.p2),
            p3: count(&self.p3),
            p: count(&self.p),
        }
    }

    pub fn p_members(&self) -> Vec<usize> {
        members(&self.p)
    }
}

pub fn p_sets(sw: &SandwichSemigroup) -> PSets {
    let amb = sw.ambient();
    let n = sw.len();
    let p1: Vec<bool> = (0..n)
        .map(|x| amb.related(Relation::R, sw.right_a(x), sw.global(x)))
        .collect();
    let p2: Vec<bool> = (0..n)
        .map(|x| amb.related(Relation::L, sw.left_a(x), sw.global(x)))
        .collect();
    let p3 = (0..n)
        .map(|x| amb.related(Relation::J, sw.sandwiched(x), sw.global(x)))
        .collect();
    let p = p1.iter().zip(&p2).map(|(&u, &v)| u && v).collect();
    PSets { p1, p2, p3, p }
}

/// Regular elements of the sandwich semigroup, found directly.
pub fn regular_set(sw: &SandwichSemigroup) -> Vec<usize> {
    sw.semigroup().regular_elements()
}

/// Chain inclusions, ideal properties, and agreement of the two routes to
/// the regular set.
pub fn p_set_check(sw: &SandwichSemigroup, ps: &PSets) -> Checker {
    let mut ck = Checker::new();
    let n = sw.len();
    let reg_direct = regular_set(sw);
    let reg_via_p: Vec<usize> = (0..n)
        .filter(|&x| ps.p[x] && sw.ambient().is_regular(sw.global(x)))
        .collect();
    ck.check(reg_direct == reg_via_p, "Reg(S^a) = P ∩ Reg(S)", || {
        reg_direct.clone()
    });
    for x in 0..n {
        ck.check(ps.p[x] == (ps.p1[x] && ps.p2[x]), "P = P1 ∩ P2", || vec![x]);
        ck.check(!ps.p[x] || ps.p3[x], "P ⊆ P3", || vec![x]);
        ck.check(ps.p3[x] == ps.p[x], "P3 = P for stable a", || vec![x]);
    }
    for &x in &reg_direct {
        ck.check(ps.p[x], "Reg(S^a) ⊆ P", || vec![x]);
    }
    let st = sw.ambient().stability(sw.a());
    ck.check(st.is_stable(), "sandwich element is stable", || vec![sw.a()]);
    for x in 0..n {
        for y in 0..n {
            let xy = sw.star(x, y);
            if ps.p1[y] {
                ck.check(ps.p1[xy], "P1 is a left ideal", || vec![x, y]);
            }
            if ps.p2[x] {
                ck.check(ps.p2[xy], "P2 is a right ideal", || vec![x, y]);
            }
            if ps.p[x] && ps.p[y] {
                ck.check(ps.p[xy], "P is a subsemigroup", || vec![x, y]);
            }
        }
    }
    ck
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invertibility {
    pub right_invertible: bool,
    pub left_invertible: bool,
    /// `x·a = y·a` implies `x = y`
    pub cancel_right: bool,
    /// `a·x = a·y` implies `x = y`
    pub cancel_left: bool,
    /// `x·a = y·a` and `a·x = a·y` imply `x = y`
    pub cancel_both: bool,
}

fn no_collisions<K: Eq + std::hash::Hash>(keys: impl Iterator<Item = K>) -> bool {
    let mut seen = std::collections::HashSet::new();
    keys.into_iter().all(|k| seen.insert(k))
}

pub fn invertibility_flags(sw: &SandwichSemigroup) -> Invertibility {
    let c = sw.category();
    let n = sw.len();
    let a = sw.a();
    let right_invertible = (0..n).any(|b| {
        let ab = c.product(a, sw.global(b));
        (0..n).all(|x| c.product(sw.global(x), ab) == sw.global(x))
    });
    let left_invertible = (0..n).any(|b| {
        let ba = c.product(sw.global(b), a);
        (0..n).all(|x| c.product(ba, sw.global(x)) == sw.global(x))
    });
    // pairwise quantifier evaluation, independent of any map construction
    let pairwise = |collide: &dyn Fn(usize, usize) -> bool| {
        (0..n).all(|x| (0..n).all(|y| x == y || !collide(x, y)))
    };
    Invertibility {
        right_invertible,
        left_invertible,
        cancel_right: pairwise(&|x, y| sw.right_a(x) == sw.right_a(y)),
        cancel_left: pairwise(&|x, y| sw.left_a(x) == sw.left_a(y)),
        cancel_both: pairwise(&|x, y| {
            sw.right_a(x) == sw.right_a(y) && sw.left_a(x) == sw.left_a(y)
        }),
    }
}

/// Consequences of one-sided invertibility and the injectivity readings of
/// the cancellation laws.
pub fn invertibility_check(sw: &SandwichSemigroup, ps: &PSets, inv: &Invertibility) -> Checker {
    let mut ck = Checker::new();
    let n = sw.len();
    let all = vec![true; n];
    let ag = sw.green();
    if inv.right_invertible {
        ck.check(ps.p1 == all, "right-invertible implies P1 = S_ij", Vec::new);
        ck.check(ps.p == ps.p2, "right-invertible implies P = P2", Vec::new);
        for x in 0..n {
            ck.check(
                ag.class(Relation::R, x) == sw.ambient_class(Relation::R, x).as_slice(),
                "right-invertible implies R^a = R",
                || vec![x],
            );
        }
    }
    if inv.left_invertible {
        ck.check(ps.p2 == all, "left-invertible implies P2 = S_ij", Vec::new);
        ck.check(ps.p == ps.p1, "left-invertible implies P = P1", Vec::new);
        for x in 0..n {
            ck.check(
                ag.class(Relation::L, x) == sw.ambient_class(Relation::L, x).as_slice(),
                "left-invertible implies L^a = L",
                || vec![x],
            );
        }
    }
    ck.check(
        inv.cancel_right == no_collisions((0..n).map(|x| sw.right_a(x))),
        "cancel right iff x ↦ xa injective",
        Vec::new,
    );
    ck.check(
        inv.cancel_left == no_collisions((0..n).map(|x| sw.left_a(x))),
        "cancel left iff x ↦ ax injective",
        Vec::new,
    );
    ck.check(
        inv.cancel_both == no_collisions((0..n).map(|x| (sw.right_a(x), sw.left_a(x)))),
        "cancel both iff x ↦ (xa, ax) injective",
        Vec::new,
    );
    ck
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    #[serde(rename = "R")]
    pub r: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "H")]
    pub h: usize,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "J")]
    pub j: usize,
}

impl ClassCounts {
    pub fn of(g: &GreenData) -> Self {
        Self {
            r: g.r().len(),
            l: g.l().len(),
            h: g.h().len(),
            d: g.d().len(),
            j: g.j().len(),
        }
    }
}

/// Everything the sandwich layer can say about one `(i, j, a)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandwichReport {
    pub i: usize,
    pub j: usize,
    pub a: usize,
    pub size: usize,
    pub flags: Invertibility,
    pub p_set_sizes: PSetSizes,
    pub regular_count: usize,
    pub green_class_counts: ClassCounts,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

pub fn sandwich_report(sw: &SandwichSemigroup) -> SandwichReport {
    let ps = p_sets(sw);
    let inv = invertibility_flags(sw);
    let mut ck = Checker::new();
    ck.absorb_prefixed("green", sw.green().structural_check());
    ck.absorb_prefixed("transfer", green_transfer_check(sw, &ps));
    ck.absorb_prefixed("psets", p_set_check(sw, &ps));
    ck.absorb_prefixed("invertibility", invertibility_check(sw, &ps, &inv));
    ck.absorb_prefixed("stability", stability_transfer_check(sw));
    SandwichReport {
        i: sw.i().0,
        j: sw.j().0,
        a: sw.a(),
        size: sw.len(),
        flags: inv,
        p_set_sizes: ps.sizes(),
        regular_count: regular_set(sw).len(),
        green_class_counts: ClassCounts::of(sw.green()),
        checks: ck.checks,
        violations: ck.violations,
    }
}

//! Green's preorders and relations.
//!
//! The preorders are computed straight from their definitions with `S¹`
//! semantics: `x ≤_R y` iff `x = y` or `x = y·s`, and dually for `≤_L`. The
//! two-sided preorder uses `S¹yS¹ = ⋃_{z ∈ yS¹} S¹z`. Each relation's classes
//! are ordered by their smallest member, so every derived listing is stable.

mod eggbox;
mod stability;
mod structure;

pub use eggbox::EggBox;
pub use stability::{stability, Stability};
pub use structure::{
    domination_report, local_monoid, mid_identities, natural_leq, regularity_preserving, variant,
    DominationReport, NaturalOrder,
};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::category::Category;
use crate::error::{Error, Result};
use crate::report::Checker;
use crate::semigroup::{FiniteSemigroup, DEFAULT_ELEMENT_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    R,
    L,
    H,
    D,
    J,
}

impl Relation {
    pub const ALL: [Relation; 5] = [Relation::R, Relation::L, Relation::H, Relation::D, Relation::J];
}

/// A partition of `0..n` with classes ordered by minimal member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Partition {
    /// Group elements by an arbitrary key.
    pub fn by_key<K: std::hash::Hash + Eq>(n: usize, key: impl Fn(usize) -> K) -> Self {
        let mut ids = std::collections::HashMap::new();
        let mut class_of = Vec::with_capacity(n);
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let next = classes.len();
            let c = *ids.entry(key(x)).or_insert(next);
            if c == next {
                classes.push(Vec::new());
            }
            classes[c].push(x);
            class_of.push(c);
        }
        Self { class_of, classes }
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    pub fn class_containing(&self, x: usize) -> &[usize] {
        &self.classes[self.class_of[x]]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = x;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

/// Green's structure of a finite semigroup or of a finite category.
#[derive(Debug, Clone)]
pub struct GreenData {
    n: usize,
    /// `leq_r[y]` is the set of `x` with `x ≤_R y`; likewise for L and J.
    leq_r: Vec<FixedBitSet>,
    leq_l: Vec<FixedBitSet>,
    leq_j: Vec<FixedBitSet>,
    r: Partition,
    l: Partition,
    h: Partition,
    d: Partition,
    j: Partition,
    idempotent: Vec<bool>,
    group_h: Vec<bool>,
}

/// JSON shape of a [`GreenData`]: class member lists per relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreenClasses {
    #[serde(rename = "R")]
    pub r: Vec<Vec<usize>>,
    #[serde(rename = "L")]
    pub l: Vec<Vec<usize>>,
    #[serde(rename = "H")]
    pub h: Vec<Vec<usize>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<usize>>,
    #[serde(rename = "J")]
    pub j: Vec<Vec<usize>>,
    pub group_h: Vec<bool>,
}

impl GreenData {
    /// Assemble from principal right/left ideals (each must contain its generator).
    pub fn from_ideals(
        leq_r: Vec<FixedBitSet>,
        leq_l: Vec<FixedBitSet>,
        idempotent: Vec<bool>,
    ) -> Self {
        let n = leq_r.len();
        let leq_j: Vec<FixedBitSet> = (0..n)
            .map(|y| {
                let mut acc = FixedBitSet::with_capacity(n);
                for z in leq_r[y].ones() {
                    acc.union_with(&leq_l[z]);
                }
                acc
            })
            .collect();
        let r = Partition::by_key(n, |x| leq_r[x].as_slice().to_vec());
        let l = Partition::by_key(n, |x| leq_l[x].as_slice().to_vec());
        let j = Partition::by_key(n, |x| leq_j[x].as_slice().to_vec());
        let h = Partition::by_key(n, |x| (r.class_of(x), l.class_of(x)));
        let mut parent: Vec<usize> = (0..n).collect();
        for p in [&r, &l] {
            for class in p.classes() {
                for &x in &class[1..] {
                    let (a, b) = (find(&mut parent, class[0]), find(&mut parent, x));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let d = Partition::by_key(n, |x| find(&mut parent.clone(), x));
        let group_h = h
            .classes()
            .iter()
            .map(|c| c.iter().any(|&x| idempotent[x]))
            .collect();
        Self {
            n,
            leq_r,
            leq_l,
            leq_j,
            r,
            l,
            h,
            d,
            j,
            idempotent,
            group_h,
        }
    }

    /// Green's data of a finite semigroup.
    pub fn of_semigroup(s: &FiniteSemigroup) -> Result<Self> {
        Self::of_semigroup_capped(s, DEFAULT_ELEMENT_CAP)
    }

    pub fn of_semigroup_capped(s: &FiniteSemigroup, cap: usize) -> Result<Self> {
        let n = s.len();
        if n > cap {
            return Err(Error::Budget {
                what: "semigroup size",
                actual: n,
                limit: cap,
            });
        }
        let mut leq_r = vec![FixedBitSet::with_capacity(n); n];
        let mut leq_l = vec![FixedBitSet::with_capacity(n); n];
        for y in 0..n {
            leq_r[y].insert(y);
            leq_l[y].insert(y);
        }
        for x in 0..n {
            for t in 0..n {
                let p = s.mul(x, t);
                leq_r[x].insert(p);
                leq_l[t].insert(p);
            }
        }
        let idempotent = (0..n).map(|x| s.is_idempotent(x)).collect();
        Ok(Self::from_ideals(leq_r, leq_l, idempotent))
    }

    /// Green's data of a category, over all of its morphisms.
    pub fn of_category(c: &Category) -> Result<Self> {
        Self::of_category_capped(c, DEFAULT_ELEMENT_CAP)
    }

    pub fn of_category_capped(c: &Category, cap: usize) -> Result<Self> {
        let n = c.len();
        if n > cap {
            return Err(Error::Budget {
                what: "morphism count",
                actual: n,
                limit: cap,
            });
        }
        let mut leq_r = vec![FixedBitSet::with_capacity(n); n];
        let mut leq_l = vec![FixedBitSet::with_capacity(n); n];
        for y in 0..n {
            leq_r[y].insert(y);
            leq_l[y].insert(y);
        }
        for x in 0..n {
            for t in c.right_composable(x) {
                let p = c.product(x, t);
                leq_r[x].insert(p);
                leq_l[t].insert(p);
            }
        }
        let idempotent = (0..n).map(|x| c.is_idempotent(x)).collect();
        Ok(Self::from_ideals(leq_r, leq_l, idempotent))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq_r(&self, x: usize, y: usize) -> bool {
        self.leq_r[y].contains(x)
    }

    pub fn leq_l(&self, x: usize, y: usize) -> bool {
        self.leq_l[y].contains(x)
    }

    pub fn leq_h(&self, x: usize, y: usize) -> bool {
        self.leq_r(x, y) && self.leq_l(x, y)
    }

    pub fn leq_j(&self, x: usize, y: usize) -> bool {
        self.leq_j[y].contains(x)
    }

    pub fn partition(&self, rel: Relation) -> &Partition {
        match rel {
            Relation::R => &self.r,
            Relation::L => &self.l,
            Relation::H => &self.h,
            Relation::D => &self.d,
            Relation::J => &self.j,
        }
    }

    pub fn related(&self, rel: Relation, x: usize, y: usize) -> bool {
        self.partition(rel).related(x, y)
    }

    pub fn class(&self, rel: Relation, x: usize) -> &[usize] {
        self.partition(rel).class_containing(x)
    }

    pub fn r(&self) -> &Partition {
        &self.r
    }

    pub fn l(&self) -> &Partition {
        &self.l
    }

    pub fn h(&self) -> &Partition {
        &self.h
    }

    pub fn d(&self) -> &Partition {
        &self.d
    }

    pub fn j(&self) -> &Partition {
        &self.j
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.idempotent[x]
    }

    /// Does the H-class of `x` contain an idempotent (and hence form a group)?
    pub fn is_group_h(&self, x: usize) -> bool {
        self.group_h[self.h.class_of(x)]
    }

    pub fn group_h_flags(&self) -> &[bool] {
        &self.group_h
    }

    /// The partial order on J-classes: `leq_j_class(a, b)` for class indices.
    pub fn leq_j_class(&self, a: usize, b: usize) -> bool {
        self.leq_j(self.j.class(a)[0], self.j.class(b)[0])
    }

    /// Indices of J-classes maximal among those meeting `subset`, where only
    /// classes meeting `subset` are compared.
    pub fn maximal_j_classes_within(&self, subset: &[usize]) -> Vec<usize> {
        let mut present: Vec<usize> = subset.iter().map(|&x| self.j.class_of(x)).collect();
        present.sort_unstable();
        present.dedup();
        present
            .iter()
            .copied()
            .filter(|&a| {
                present
                    .iter()
                    .all(|&b| b == a || !self.leq_j_class(a, b))
            })
            .collect()
    }

    pub fn classes(&self) -> GreenClasses {
        GreenClasses {
            r: self.r.classes().to_vec(),
            l: self.l.classes().to_vec(),
            h: self.h.classes().to_vec(),
            d: self.d.classes().to_vec(),
            j: self.j.classes().to_vec(),
            group_h: self.group_h.clone(),
        }
    }

    /// Egg-box layout of D-class number `d`.
    pub fn eggbox(&self, d: usize) -> EggBox {
        EggBox::from_green(self, d, None)
    }

    /// Relational identities that hold for every finite semigroup and every
    /// finite category: `H = R ∩ L`, `D = R∘L = L∘R`, `D ⊆ J`, and `J = D`.
    pub fn structural_check(&self) -> Checker {
        let mut ck = Checker::new();
        let n = self.n;
        // L-classes reachable from each R-class, and vice versa
        let mut rl = vec![FixedBitSet::with_capacity(self.l.len()); self.r.len()];
        let mut lr = vec![FixedBitSet::with_capacity(self.r.len()); self.l.len()];
        for x in 0..n {
            rl[self.r.class_of(x)].insert(self.l.class_of(x));
            lr[self.l.class_of(x)].insert(self.r.class_of(x));
        }
        for x in 0..n {
            for y in 0..n {
                let r_then_l = rl[self.r.class_of(x)].contains(self.l.class_of(y));
                let l_then_r = lr[self.l.class_of(x)].contains(self.r.class_of(y));
                let d = self.d.related(x, y);
                let h = self.h.related(x, y);
                let r = self.r.related(x, y);
                let l = self.l.related(x, y);
                let w = || vec![x, y];
                ck.check(h == (r && l), "H = R ∩ L", w);
                ck.check(d == r_then_l, "D = R∘L", w);
                ck.check(d == l_then_r, "D = L∘R", w);
                ck.check(!d || self.j.related(x, y), "D ⊆ J", w);
                ck.check(d == self.j.related(x, y), "J = D (finite)", w);
                ck.check(
                    self.leq_h(x, y) == (self.leq_r(x, y) && self.leq_l(x, y)),
                    "≤H = ≤R ∩ ≤L",
                    w,
                );
            }
        }
        ck
    }

    /// Each H-class containing an idempotent is closed under `mul` and is a group.
    pub fn group_check(&self, mul: impl Fn(usize, usize) -> usize) -> Checker {
        let mut ck = Checker::new();
        for (c, class) in self.h.classes().iter().enumerate() {
            let has_idem = class.iter().any(|&x| self.idempotent[x]);
            ck.check(has_idem == self.group_h[c], "group flag matches idempotent", || {
                class.clone()
            });
            if !has_idem {
                continue;
            }
            let e = *class.iter().find(|&&x| self.idempotent[x]).unwrap();
            let closed = class
                .iter()
                .all(|&x| class.iter().all(|&y| self.h.related(mul(x, y), e)));
            let unital = class.iter().all(|&x| mul(e, x) == x && mul(x, e) == x);
            let invertible = class
                .iter()
                .all(|&x| class.iter().any(|&y| mul(x, y) == e && mul(y, x) == e));
            ck.check(closed && unital && invertible, "group H-class", || class.clone());
        }
        ck
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{build_category, Kind, Morphism, ObjectId, Payload};

    /// Preorders straight from the definitions, with no shared code.
    fn oracle_leq(s: &FiniteSemigroup) -> (Vec<Vec<bool>>, Vec<Vec<bool>>, Vec<Vec<bool>>) {
        let n = s.len();
        let mut r = vec![vec![false; n]; n];
        let mut l = vec![vec![false; n]; n];
        let mut j = vec![vec![false; n]; n];
        for x in 0..n {
            for y in 0..n {
                r[x][y] = x == y || (0..n).any(|t| s.mul(y, t) == x);
                l[x][y] = x == y || (0..n).any(|t| s.mul(t, y) == x);
                j[x][y] = r[x][y]
                    || l[x][y]
                    || (0..n).any(|p| (0..n).any(|q| s.mul(s.mul(p, y), q) == x));
            }
        }
        (r, l, j)
    }

    #[test]
    fn preorders_agree_with_definition() {
        for s in [
            FiniteSemigroup::full_transformation_monoid(2),
            FiniteSemigroup::full_transformation_monoid(3),
            FiniteSemigroup::right_zero(3),
            FiniteSemigroup::rectangular_band(2, 3),
        ] {
            let g = GreenData::of_semigroup(&s).unwrap();
            let (r, l, j) = oracle_leq(&s);
            for x in s.elements() {
                for y in s.elements() {
                    assert_eq!(g.leq_r(x, y), r[x][y]);
                    assert_eq!(g.leq_l(x, y), l[x][y]);
                    assert_eq!(g.leq_j(x, y), j[x][y]);
                }
            }
            assert!(g.structural_check().is_clean());
            assert!(g.group_check(|x, y| s.mul(x, y)).is_clean());
        }
    }

    #[test]
    fn full_transformation_monoid_on_two_points() {
        let g = GreenData::of_semigroup(&FiniteSemigroup::full_transformation_monoid(2)).unwrap();
        // constants 0 = [0,0] and 3 = [1,1]; identity 1 = [0,1]; swap 2 = [1,0]
        assert_eq!(g.d().classes(), &[vec![0, 3], vec![1, 2]]);
        assert_eq!(g.j().len(), 2);
        assert!(g.is_group_h(1));
    }

    #[test]
    fn right_zero_band() {
        let g = GreenData::of_semigroup(&FiniteSemigroup::right_zero(3)).unwrap();
        // x = y·s means x = s: every element is R-above every other
        assert_eq!(g.r().len(), 1);
        assert_eq!(g.l().len(), 3);
        assert_eq!(g.d().len(), 1);
    }

    #[test]
    fn trivial_monoid() {
        let g = GreenData::of_semigroup(&FiniteSemigroup::trivial()).unwrap();
        for rel in Relation::ALL {
            assert_eq!(g.partition(rel).len(), 1);
        }
        assert!(g.is_group_h(0));
    }

    #[test]
    fn category_kernel_image_characterisation() {
        let c = build_category(Kind::FullMap, &[2, 2]).unwrap();
        let g = GreenData::of_category(&c).unwrap();
        let hom = c.hom(ObjectId(0), ObjectId(1));
        let image = |x: usize| {
            let mut v = c.morphism(x).payload.as_slice().to_vec();
            v.sort_unstable();
            v.dedup();
            v
        };
        let kernel = |x: usize| {
            let v = c.morphism(x).payload.as_slice();
            (0..v.len())
                .map(|s| (0..v.len()).map(|t| v[s] == v[t]).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        for x in hom.clone() {
            for y in hom.clone() {
                assert_eq!(g.related(Relation::L, x, y), image(x) == image(y));
                assert_eq!(g.related(Relation::R, x, y), kernel(x) == kernel(y));
            }
        }
        assert!(g.structural_check().is_clean());
    }

    #[test]
    fn partial_map_identities_are_j_related() {
        let c = build_category(Kind::PartialMap, &[2, 2]).unwrap();
        let g = GreenData::of_category(&c).unwrap();
        let e0 = c.identity(ObjectId(0)).unwrap();
        let e1 = c.identity(ObjectId(1)).unwrap();
        assert!(g.related(Relation::J, e0, e1));
        let empty = c
            .locate(&Morphism {
                src: ObjectId(0),
                dst: ObjectId(1),
                payload: Payload::Partial(vec![0, 0]),
            })
            .unwrap();
        assert!((0..c.len()).all(|x| g.leq_j(empty, x)));
        assert!(g.structural_check().is_clean());
        assert!(g.group_check(|x, y| c.product(x, y)).is_clean());
    }

    #[test]
    fn classes_serialize_as_index_lists() {
        let g = GreenData::of_semigroup(&FiniteSemigroup::full_transformation_monoid(2)).unwrap();
        let json = serde_json::to_value(g.classes()).unwrap();
        assert_eq!(json["D"], serde_json::json!([[0, 3], [1, 2]]));
    }

    #[test]
    fn budget_is_enforced() {
        let s = FiniteSemigroup::full_transformation_monoid(3);
        assert!(matches!(
            GreenData::of_semigroup_capped(&s, 10),
            Err(Error::Budget { .. })
        ));
    }
}

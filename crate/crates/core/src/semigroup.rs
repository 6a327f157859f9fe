//! Finite semigroups given by a full multiplication table.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of elements of a table-backed semigroup.
pub const DEFAULT_ELEMENT_CAP: usize = 20_000;

/// A finite semigroup on `0..len()` with a memoized product table.
///
/// `labels[x]` records what element `x` stands for in some enclosing
/// structure (a global morphism index, an index into a hom-set, ...). The
/// labels are never interpreted here; constructions that restrict to a
/// subset relabel through them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSemigroup {
    n: usize,
    table: Vec<u32>,
    identity: Option<usize>,
    labels: Vec<usize>,
}

impl FiniteSemigroup {
    /// Tabulate `mul` on `0..n`. Associativity is not checked here.
    pub fn from_fn(n: usize, mut mul: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        if n > DEFAULT_ELEMENT_CAP {
            return Err(Error::Budget {
                what: "semigroup size",
                actual: n,
                limit: DEFAULT_ELEMENT_CAP,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let z = mul(x, y);
                if z >= n {
                    return Err(Error::Malformed(format!("product {x}*{y} = {z} is out of range")));
                }
                table.push(z as u32);
            }
        }
        let mut s = Self {
            n,
            table,
            identity: None,
            labels: (0..n).collect(),
        };
        s.identity = s.find_identity();
        Ok(s)
    }

    /// Build from a list of labelled elements and a closed product on labels.
    pub fn from_labels(
        labels: Vec<usize>,
        mut mul: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self> {
        let index: HashMap<usize, usize> = labels.iter().enumerate().map(|(t, &l)| (l, t)).collect();
        if index.len() != labels.len() {
            return Err(Error::Malformed("duplicate labels".into()));
        }
        let mut missing = None;
        let mut s = Self::from_fn(labels.len(), |x, y| {
            let z = mul(labels[x], labels[y]);
            match index.get(&z) {
                Some(&t) => t,
                None => {
                    missing.get_or_insert((x, y));
                    0
                }
            }
        })?;
        if let Some((x, y)) = missing {
            return Err(Error::NotClosed(x, y));
        }
        s.labels = labels;
        Ok(s)
    }

    /// Build from a list of hashable values under a closed binary operation.
    pub fn from_elements<T, F>(elements: &[T], mut mul: F) -> Result<Self>
    where
        T: Clone + Eq + std::hash::Hash,
        F: FnMut(&T, &T) -> T,
    {
        let index: HashMap<&T, usize> = elements.iter().enumerate().map(|(t, e)| (e, t)).collect();
        let mut missing = None;
        let s = Self::from_fn(elements.len(), |x, y| {
            let z = mul(&elements[x], &elements[y]);
            match index.get(&z) {
                Some(&t) => t,
                None => {
                    missing.get_or_insert((x, y));
                    0
                }
            }
        })?;
        match missing {
            Some((x, y)) => Err(Error::NotClosed(x, y)),
            None => Ok(s),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y] as usize
    }

    pub fn mul3(&self, x: usize, y: usize, z: usize) -> usize {
        self.mul(self.mul(x, y), z)
    }

    pub fn product(&self, xs: &[usize]) -> Option<usize> {
        let (&first, rest) = xs.split_first()?;
        Some(rest.iter().fold(first, |acc, &y| self.mul(acc, y)))
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.table[x * self.n..(x + 1) * self.n]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> usize {
        self.labels[x]
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = labels;
        self
    }

    /// Index of the element carrying `label`.
    pub fn index_of_label(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    pub fn is_monoid(&self) -> bool {
        self.identity.is_some()
    }

    fn find_identity(&self) -> Option<usize> {
        (0..self.n).find(|&e| (0..self.n).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    pub fn is_associative(&self) -> bool {
        (0..self.n).all(|x| {
            (0..self.n).all(|y| {
                let xy = self.mul(x, y);
                (0..self.n).all(|z| self.mul(xy, z) == self.mul(x, self.mul(y, z)))
            })
        })
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.is_idempotent(x)).collect()
    }

    /// Inverses of `x` inside this semigroup.
    pub fn inverses(&self, x: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&y| self.mul3(x, y, x) == x && self.mul3(y, x, y) == y)
            .collect()
    }

    pub fn is_regular_element(&self, x: usize) -> bool {
        (0..self.n).any(|y| self.mul3(x, y, x) == x)
    }

    pub fn regular_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.is_regular_element(x)).collect()
    }

    pub fn is_regular(&self) -> bool {
        (0..self.n).all(|x| self.is_regular_element(x))
    }

    /// Every element has exactly one inverse.
    pub fn is_inverse(&self) -> bool {
        (0..self.n).all(|x| self.inverses(x).len() == 1)
    }

    pub fn is_group(&self) -> bool {
        match self.identity {
            None => false,
            Some(e) => (0..self.n).all(|x| (0..self.n).any(|y| self.mul(x, y) == e)),
        }
    }

    pub fn is_band(&self) -> bool {
        (0..self.n).all(|x| self.is_idempotent(x))
    }

    /// `x = x² = xyx` for all `x, y`.
    pub fn is_rectangular_band(&self) -> bool {
        self.n > 0
            && (0..self.n)
                .all(|x| self.is_idempotent(x) && (0..self.n).all(|y| self.mul3(x, y, x) == x))
    }

    pub fn is_closed(&self, subset: &[usize]) -> bool {
        let mut flags = vec![false; self.n];
        for &x in subset {
            flags[x] = true;
        }
        subset
            .iter()
            .all(|&x| subset.iter().all(|&y| flags[self.mul(x, y)]))
    }

    /// The subsemigroup on `subset` (order preserved). Labels are inherited.
    pub fn sub(&self, subset: &[usize]) -> Result<FiniteSemigroup> {
        let mut pos = vec![usize::MAX; self.n];
        for (t, &x) in subset.iter().enumerate() {
            pos[x] = t;
        }
        let mut missing = None;
        let mut s = FiniteSemigroup::from_fn(subset.len(), |x, y| {
            let z = pos[self.mul(subset[x], subset[y])];
            if z == usize::MAX {
                missing.get_or_insert((subset[x], subset[y]));
                0
            } else {
                z
            }
        })?;
        if let Some((x, y)) = missing {
            return Err(Error::NotClosed(x, y));
        }
        s.labels = subset.iter().map(|&x| self.labels[x]).collect();
        Ok(s)
    }

    /// The variant `(S, ⋆u)` with `x ⋆u y = x·u·y`.
    pub fn variant(&self, u: usize) -> FiniteSemigroup {
        let mut s = FiniteSemigroup::from_fn(self.n, |x, y| self.mul3(x, u, y))
            .expect("same size as an existing table");
        s.labels = self.labels.clone();
        s
    }

    /// Elements of the local monoid `eSe`, in increasing order.
    pub fn local_monoid_elements(&self, e: usize) -> Vec<usize> {
        let mut flags = vec![false; self.n];
        for t in 0..self.n {
            flags[self.mul3(e, t, e)] = true;
        }
        (0..self.n).filter(|&x| flags[x]).collect()
    }

    /// The local monoid `eSe` at an idempotent `e`.
    pub fn local_monoid(&self, e: usize) -> Result<FiniteSemigroup> {
        if !self.is_idempotent(e) {
            return Err(Error::NotIdempotent(e));
        }
        self.sub(&self.local_monoid_elements(e))
    }

    /// The subsemigroup generated by `gens`, as an increasing index list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut flags = vec![false; self.n];
        let mut members = Vec::new();
        for &g in gens {
            if !flags[g] {
                flags[g] = true;
                members.push(g);
            }
        }
        self.close_in_place(&mut flags, &mut members, 0);
        members.sort_unstable();
        members
    }

    /// Extend `members` (flagged in `flags`) to a subsemigroup, assuming
    /// `members[..done]` is already closed.
    pub fn close_in_place(&self, flags: &mut [bool], members: &mut Vec<usize>, done: usize) {
        let mut cursor = done;
        while cursor < members.len() {
            let z = members[cursor];
            cursor += 1;
            let mut t = 0;
            while t < cursor {
                let y = members[t];
                t += 1;
                for p in [self.mul(z, y), self.mul(y, z)] {
                    if !flags[p] {
                        flags[p] = true;
                        members.push(p);
                    }
                }
            }
        }
    }

    /// Is `f` a semigroup homomorphism from `self` into `target`?
    pub fn is_homomorphism(&self, target: &FiniteSemigroup, f: &[usize]) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| f[self.mul(x, y)] == target.mul(f[x], f[y])))
    }

    /// Tables coincide after relabelling by the bijection `f`.
    pub fn is_isomorphism(&self, target: &FiniteSemigroup, f: &[usize]) -> bool {
        self.n == target.n && is_bijection(f, target.n) && self.is_homomorphism(target, f)
    }

    // ---- small named semigroups ----

    pub fn trivial() -> FiniteSemigroup {
        FiniteSemigroup::from_fn(1, |_, _| 0).unwrap()
    }

    /// Cyclic group of order `n`.
    pub fn cyclic_group(n: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_fn(n, |x, y| (x + y) % n).unwrap()
    }

    /// Symmetric group on `n` points, composing left to right.
    pub fn symmetric_group(n: usize) -> FiniteSemigroup {
        let perms = permutations(n);
        FiniteSemigroup::from_elements(&perms, |p, q| p.iter().map(|&t| q[t]).collect::<Vec<_>>())
            .unwrap()
    }

    /// Full transformation monoid on `n` points (maps act on the right).
    pub fn full_transformation_monoid(n: usize) -> FiniteSemigroup {
        let mut maps = Vec::new();
        let total = n.pow(n as u32);
        for code in 0..total {
            let mut v = vec![0usize; n];
            let mut c = code;
            for t in (0..n).rev() {
                v[t] = c % n;
                c /= n;
            }
            maps.push(v);
        }
        FiniteSemigroup::from_elements(&maps, |p, q| p.iter().map(|&t| q[t]).collect::<Vec<_>>())
            .unwrap()
    }

    /// `r × l` rectangular band on pairs `(i, j)`, element `i * l + j`.
    pub fn rectangular_band(r: usize, l: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_fn(r * l, |x, y| (x / l) * l + y % l).unwrap()
    }

    /// Right-zero semigroup: `xy = y`.
    pub fn right_zero(n: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_fn(n, |_, y| y).unwrap()
    }

    /// `r × l` rectangular group over `g`: element `(i, h, j)` is
    /// `(i * |G| + h) * l + j`, with `(i₁,g,j₁)(i₂,h,j₂) = (i₁,gh,j₂)`.
    pub fn rectangular_group(r: usize, l: usize, g: &FiniteSemigroup) -> FiniteSemigroup {
        let k = g.len();
        FiniteSemigroup::from_fn(r * k * l, |x, y| {
            let (i1, g1) = (x / (k * l), (x / l) % k);
            let (g2, j2) = ((y / l) % k, y % l);
            (i1 * k + g.mul(g1, g2)) * l + j2
        })
        .unwrap()
    }
}

pub fn is_bijection(f: &[usize], codomain: usize) -> bool {
    if f.len() != codomain {
        return false;
    }
    let mut seen = vec![false; codomain];
    f.iter().all(|&y| y < codomain && !std::mem::replace(&mut seen[y], true))
}

pub fn is_injective<T: Ord + Clone>(f: &[T]) -> bool {
    let mut sorted = f.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for t in 0..used.len() {
            if !used[t] {
                used[t] = true;
                prefix.push(t);
                rec(prefix, used, out);
                prefix.pop();
                used[t] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_semigroups_are_associative() {
        for s in [
            FiniteSemigroup::trivial(),
            FiniteSemigroup::cyclic_group(4),
            FiniteSemigroup::symmetric_group(3),
            FiniteSemigroup::full_transformation_monoid(3),
            FiniteSemigroup::rectangular_band(2, 3),
            FiniteSemigroup::right_zero(3),
            FiniteSemigroup::rectangular_group(2, 2, &FiniteSemigroup::cyclic_group(2)),
        ] {
            assert!(s.is_associative());
        }
    }

    #[test]
    fn structural_predicates() {
        assert!(FiniteSemigroup::symmetric_group(3).is_group());
        assert_eq!(FiniteSemigroup::symmetric_group(3).len(), 6);
        assert!(!FiniteSemigroup::full_transformation_monoid(2).is_group());
        assert!(FiniteSemigroup::full_transformation_monoid(3).is_regular());
        assert!(FiniteSemigroup::rectangular_band(2, 3).is_rectangular_band());
        assert!(!FiniteSemigroup::rectangular_band(2, 3).is_monoid());
        assert!(FiniteSemigroup::cyclic_group(3).is_inverse());
    }

    #[test]
    fn variant_at_identity_is_unchanged() {
        let t = FiniteSemigroup::full_transformation_monoid(2);
        let e = t.identity().unwrap();
        assert_eq!(t.variant(e).table, t.table);
    }

    #[test]
    fn variant_of_variant() {
        let t = FiniteSemigroup::full_transformation_monoid(2);
        for u in t.elements() {
            for v in t.elements() {
                let twice = t.variant(u).variant(v);
                let direct = t.variant(t.mul3(u, v, u));
                // (x ⋆u y) ⋆v z in S^u with ⋆v taken in S^u is x u v u z
                assert_eq!(twice.table, direct.table);
                assert!(twice.is_associative());
            }
        }
        // The uv-variant is a different semigroup in general.
        let differs = t
            .elements()
            .flat_map(|u| t.elements().map(move |v| (u, v)))
            .any(|(u, v)| t.variant(u).variant(v).table != t.variant(t.mul(u, v)).table);
        assert!(differs);
    }

    #[test]
    fn local_monoid_at_constant_is_trivial() {
        let t = FiniteSemigroup::full_transformation_monoid(2);
        // element 0 is the constant map to point 0
        let m = t.local_monoid(0).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(t.local_monoid(t.identity().unwrap()).unwrap().len(), 4);
        // swap map [1,0] is code 2
        assert_eq!(t.local_monoid(2), Err(Error::NotIdempotent(2)));
    }

    #[test]
    fn sub_detects_non_closure() {
        let t = FiniteSemigroup::full_transformation_monoid(2);
        assert!(matches!(t.sub(&[2]), Err(Error::NotClosed(2, 2))));
        let consts = t.sub(&[0, 3]).unwrap();
        assert_eq!(consts.labels(), &[0, 3]);
    }
}

//! Concrete finite categories of maps and F₂-matrices.
//!
//! A category here is a finite partial semigroup: a list of objects (each with
//! an underlying size), and for every ordered pair of objects a fully
//! enumerated hom-set. Composition is **diagrammatic**: `x · y` means "apply
//! `x`, then `y`", so `x · y` is defined exactly when `x.dst == y.src` and the
//! result runs from `x.src` to `y.dst`. This is the reverse of the usual
//! `g ∘ f` notation for functions.
//!
//! Every morphism receives a global index. Hom-sets occupy contiguous index
//! ranges, laid out object pair by object pair in row-major order, and within
//! a hom-set morphisms appear in canonical lexicographic payload order.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest object size for the three map kinds without `allow_unsafe_sizes`.
pub const MAX_MAP_SIZE: usize = 4;
/// Largest matrix dimension without `allow_unsafe_sizes`.
pub const MAX_MATRIX_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Total maps between finite sets.
    FullMap,
    /// Partial maps between finite sets.
    PartialMap,
    /// Injective partial maps (an inverse category).
    InjPartial,
    /// Matrices over the two-element field.
    MatF2,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::FullMap, Kind::PartialMap, Kind::InjPartial, Kind::MatF2];

    pub fn name(self) -> &'static str {
        match self {
            Kind::FullMap => "fullmap",
            Kind::PartialMap => "partialmap",
            Kind::InjPartial => "injpartial",
            Kind::MatF2 => "matf2",
        }
    }

    /// Closed-form size of the hom-set from an object of size `m` to one of size `n`.
    pub fn homset_size(self, m: usize, n: usize) -> u128 {
        let (m32, n128) = (m as u32, n as u128);
        match self {
            Kind::FullMap => n128.pow(m32),
            Kind::PartialMap => (n128 + 1).pow(m32),
            Kind::InjPartial => (0..=m.min(n))
                .map(|k| binomial(m, k) * binomial(n, k) * factorial(k))
                .sum(),
            Kind::MatF2 => 1u128 << (m * n),
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown category kind `{s}`")))
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, t| acc * (n - t) as u128 / (t as u128 + 1))
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub usize);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Payload of a morphism. Map payloads list the image of each point of the
/// source (points are numbered from 1; `0` means "undefined").
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    Total(Vec<u8>),
    Partial(Vec<u8>),
    Injective(Vec<u8>),
    /// Row-major bits of a `rows × cols` matrix acting on row vectors.
    Matrix { rows: u8, cols: u8, bits: Vec<u8> },
}

impl Payload {
    /// The flat integer encoding used on the wire.
    pub fn as_slice(&self) -> &[u8] {
        match self {
            Payload::Total(v) | Payload::Partial(v) | Payload::Injective(v) => v,
            Payload::Matrix { bits, .. } => bits,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Payload::Total(_) => Kind::FullMap,
            Payload::Partial(_) => Kind::PartialMap,
            Payload::Injective(_) => Kind::InjPartial,
            Payload::Matrix { .. } => Kind::MatF2,
        }
    }

    /// Reinterpret the payload in a category of kind `target`, if it is a
    /// member of that category's hom-sets. Total and injective partial maps
    /// are partial maps; a total injective map is injective partial.
    pub fn coerce(&self, target: Kind) -> Option<Payload> {
        let v = self.as_slice();
        let injective = {
            let mut seen = [false; 256];
            v.iter().all(|&t| t == 0 || !std::mem::replace(&mut seen[t as usize], true))
        };
        match (self, target) {
            (Payload::Matrix { .. }, Kind::MatF2) => Some(self.clone()),
            (Payload::Matrix { .. }, _) | (_, Kind::MatF2) => None,
            (_, Kind::PartialMap) => Some(Payload::Partial(v.to_vec())),
            (_, Kind::FullMap) => v.iter().all(|&t| t != 0).then(|| Payload::Total(v.to_vec())),
            (_, Kind::InjPartial) => injective.then(|| Payload::Injective(v.to_vec())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morphism {
    pub src: ObjectId,
    pub dst: ObjectId,
    pub payload: Payload,
}

/// Wire form of a morphism: `{src, dst, payload}` with an integer payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub src: usize,
    pub dst: usize,
    pub payload: Vec<u8>,
}

impl Morphism {
    pub fn to_raw(&self) -> RawMorphism {
        RawMorphism {
            src: self.src.0,
            dst: self.dst.0,
            payload: self.payload.as_slice().to_vec(),
        }
    }

    /// Diagrammatic composite: apply `self`, then `other`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism> {
        if self.dst != other.src {
            return Err(Error::DomainMismatch {
                left_dst: self.dst.0,
                right_src: other.src.0,
            });
        }
        let follow = |x: &[u8], y: &[u8]| -> Vec<u8> {
            x.iter()
                .map(|&t| if t == 0 { 0 } else { y[t as usize - 1] })
                .collect()
        };
        let payload = match (&self.payload, &other.payload) {
            (Payload::Total(x), Payload::Total(y)) => Payload::Total(follow(x, y)),
            (Payload::Partial(x), Payload::Partial(y)) => Payload::Partial(follow(x, y)),
            (Payload::Injective(x), Payload::Injective(y)) => Payload::Injective(follow(x, y)),
            (
                Payload::Matrix { rows, cols, bits: x },
                Payload::Matrix {
                    rows: inner,
                    cols: outer,
                    bits: y,
                },
            ) => {
                if cols != inner {
                    return Err(Error::Malformed("matrix shapes do not chain".into()));
                }
                let (m, k, n) = (*rows as usize, *cols as usize, *outer as usize);
                let mut bits = vec![0u8; m * n];
                for r in 0..m {
                    for c in 0..n {
                        bits[r * n + c] = (0..k).fold(0, |acc, t| acc ^ (x[r * k + t] & y[t * n + c]));
                    }
                }
                Payload::Matrix {
                    rows: *rows,
                    cols: *outer,
                    bits,
                }
            }
            _ => return Err(Error::Malformed("payload kinds differ".into())),
        };
        Ok(Morphism {
            src: self.src,
            dst: other.dst,
            payload,
        })
    }
}

impl Morphism {
    /// Compact payload text: `[21-]` for maps, `[10/01]` for matrices.
    pub fn payload_label(&self) -> String {
        let body: Vec<String> = match &self.payload {
            Payload::Matrix { cols, bits, .. } => bits
                .chunks((*cols as usize).max(1))
                .map(|row| row.iter().map(|b| b.to_string()).collect::<String>())
                .collect(),
            p => p
                .as_slice()
                .iter()
                .map(|&t| if t == 0 { "-".to_string() } else { t.to_string() })
                .collect(),
        };
        let sep = if matches!(self.payload, Payload::Matrix { .. }) { "/" } else { "" };
        format!("[{}]", body.join(sep))
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}:{}", self.src, self.dst, self.payload_label())
    }
}

/// JSON description of a catalog category.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CategorySpec {
    pub kind: Kind,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Lift the per-object size caps.
    pub allow_unsafe_sizes: bool,
    /// Hard cap on the total number of morphisms.
    pub max_elements: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            allow_unsafe_sizes: false,
            max_elements: 20_000,
        }
    }
}

/// A finite partial semigroup of concrete morphisms with a full product table.
#[derive(Debug, Clone)]
pub struct Category {
    kind: Kind,
    sizes: Vec<usize>,
    /// Start offset of hom-set `(i, j)` at `i * k + j`; one extra sentinel.
    offsets: Vec<usize>,
    morphisms: Vec<Morphism>,
    lookup: HashMap<Morphism, usize>,
    /// Global product ids for hom-sets `(i,j)` × `(j,l)`, keyed `(i*k + j)*k + l`.
    products: Vec<Vec<u32>>,
    identities: Vec<Option<usize>>,
    /// Hom-set of each morphism, as `i * k + j`.
    elem_hom: Vec<u32>,
}

/// Build a catalog category with default options.
pub fn build_category(kind: Kind, sizes: &[usize]) -> Result<Category> {
    build_category_with(kind, sizes, &BuildOptions::default())
}

pub fn build_category_with(kind: Kind, sizes: &[usize], opts: &BuildOptions) -> Result<Category> {
    if sizes.is_empty() {
        return Err(Error::Unsupported("a category needs at least one object".into()));
    }
    let cap = if kind == Kind::MatF2 { MAX_MATRIX_DIM } else { MAX_MAP_SIZE };
    for &s in sizes {
        if s == 0 {
            return Err(Error::Unsupported("object sizes must be positive".into()));
        }
        if s > cap && !opts.allow_unsafe_sizes {
            return Err(Error::Budget {
                what: "object size",
                actual: s,
                limit: cap,
            });
        }
        if s > u8::MAX as usize {
            return Err(Error::Budget {
                what: "object size",
                actual: s,
                limit: u8::MAX as usize,
            });
        }
    }
    let total: u128 = sizes
        .iter()
        .flat_map(|&m| sizes.iter().map(move |&n| kind.homset_size(m, n)))
        .sum();
    if total > opts.max_elements as u128 {
        return Err(Error::Budget {
            what: "morphism count",
            actual: usize::try_from(total).unwrap_or(usize::MAX),
            limit: opts.max_elements,
        });
    }
    let mut homs = Vec::with_capacity(sizes.len() * sizes.len());
    for (i, &m) in sizes.iter().enumerate() {
        for (j, &n) in sizes.iter().enumerate() {
            homs.push(enumerate_homset(kind, ObjectId(i), ObjectId(j), m, n));
        }
    }
    Category::from_homsets(kind, sizes.to_vec(), homs)
}

fn enumerate_homset(kind: Kind, src: ObjectId, dst: ObjectId, m: usize, n: usize) -> Vec<Morphism> {
    let mk = |payload| Morphism { src, dst, payload };
    match kind {
        Kind::MatF2 => {
            let len = m * n;
            (0u64..1u64 << len)
                .map(|code| {
                    let bits = (0..len).map(|t| ((code >> (len - 1 - t)) & 1) as u8).collect();
                    mk(Payload::Matrix {
                        rows: m as u8,
                        cols: n as u8,
                        bits,
                    })
                })
                .collect()
        }
        _ => {
            let lo = if kind == Kind::FullMap { 1u8 } else { 0u8 };
            let hi = n as u8;
            let mut out = Vec::new();
            let mut seq = vec![lo; m];
            loop {
                let keep = match kind {
                    Kind::InjPartial => Payload::Injective(seq.clone()).coerce(Kind::InjPartial).is_some(),
                    _ => true,
                };
                if keep {
                    out.push(mk(match kind {
                        Kind::FullMap => Payload::Total(seq.clone()),
                        Kind::PartialMap => Payload::Partial(seq.clone()),
                        _ => Payload::Injective(seq.clone()),
                    }));
                }
                // odometer, last position fastest
                let mut pos = m;
                loop {
                    if pos == 0 {
                        return out;
                    }
                    pos -= 1;
                    if seq[pos] < hi {
                        seq[pos] += 1;
                        for t in &mut seq[pos + 1..] {
                            *t = lo;
                        }
                        break;
                    }
                }
            }
        }
    }
}

fn identity_payload(kind: Kind, n: usize) -> Payload {
    let id: Vec<u8> = (1..=n as u8).collect();
    match kind {
        Kind::FullMap => Payload::Total(id),
        Kind::PartialMap => Payload::Partial(id),
        Kind::InjPartial => Payload::Injective(id),
        Kind::MatF2 => Payload::Matrix {
            rows: n as u8,
            cols: n as u8,
            bits: (0..n * n).map(|t| (t / n == t % n) as u8).collect(),
        },
    }
}

impl Category {
    /// Assemble a category from explicit hom-set lists (row-major over object
    /// pairs), computing the product table. Fails if some composite is missing.
    pub fn from_homsets(kind: Kind, sizes: Vec<usize>, homs: Vec<Vec<Morphism>>) -> Result<Self> {
        let k = sizes.len();
        assert_eq!(homs.len(), k * k, "one hom-set per object pair");
        let mut offsets = Vec::with_capacity(k * k + 1);
        let mut morphisms = Vec::new();
        for (h, list) in homs.into_iter().enumerate() {
            offsets.push(morphisms.len());
            let (i, j) = (h / k, h % k);
            for m in list {
                if m.src.0 != i || m.dst.0 != j || m.payload.kind() != kind {
                    return Err(Error::NotInHomSet { src: i, dst: j });
                }
                morphisms.push(m);
            }
        }
        offsets.push(morphisms.len());
        if morphisms.len() > u32::MAX as usize {
            return Err(Error::Budget {
                what: "morphism count",
                actual: morphisms.len(),
                limit: u32::MAX as usize,
            });
        }
        let lookup: HashMap<Morphism, usize> =
            morphisms.iter().cloned().enumerate().map(|(t, m)| (m, t)).collect();
        let mut products = Vec::with_capacity(k * k * k);
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let (left, right) = (i * k + j, j * k + l);
                    let mut table = Vec::with_capacity(
                        (offsets[left + 1] - offsets[left]) * (offsets[right + 1] - offsets[right]),
                    );
                    for x in offsets[left]..offsets[left + 1] {
                        for y in offsets[right]..offsets[right + 1] {
                            let z = morphisms[x].then(&morphisms[y])?;
                            let id = *lookup.get(&z).ok_or(Error::NotClosed(x, y))?;
                            table.push(id as u32);
                        }
                    }
                    products.push(table);
                }
            }
        }
        let identities = sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                lookup
                    .get(&Morphism {
                        src: ObjectId(i),
                        dst: ObjectId(i),
                        payload: identity_payload(kind, n),
                    })
                    .copied()
            })
            .collect();
        let elem_hom = (0..k * k)
            .flat_map(|h| std::iter::repeat_n(h as u32, offsets[h + 1] - offsets[h]))
            .collect();
        Ok(Self {
            kind,
            sizes,
            elem_hom,
            offsets,
            morphisms,
            lookup,
            products,
            identities,
        })
    }

    /// The partial subsemigroup on the given morphisms; they must be closed
    /// under composition.
    pub fn restrict(&self, keep: &[usize]) -> Result<Category> {
        let mut flags = vec![false; self.len()];
        for &x in keep {
            flags[x] = true;
        }
        for x in 0..self.len() {
            if !flags[x] {
                continue;
            }
            for y in self.right_composable(x) {
                if flags[y] && !flags[self.product(x, y)] {
                    return Err(Error::NotClosed(x, y));
                }
            }
        }
        let k = self.object_count();
        let homs = (0..k * k)
            .map(|h| {
                (self.offsets[h]..self.offsets[h + 1])
                    .filter(|&x| flags[x])
                    .map(|x| self.morphisms[x].clone())
                    .collect()
            })
            .collect();
        Category::from_homsets(self.kind, self.sizes.clone(), homs)
    }

    /// The partial subsemigroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Result<Category> {
        let mut flags = vec![false; self.len()];
        let mut members: Vec<usize> = Vec::new();
        for &g in gens {
            if !flags[g] {
                flags[g] = true;
                members.push(g);
            }
        }
        let mut cursor = 0;
        while cursor < members.len() {
            let z = members[cursor];
            cursor += 1;
            let snapshot = members.len();
            for t in 0..snapshot {
                let y = members[t];
                for p in [self.mul(z, y), self.mul(y, z)].into_iter().flatten() {
                    if !flags[p] {
                        flags[p] = true;
                        members.push(p);
                    }
                }
            }
        }
        self.restrict(&members)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn spec(&self) -> CategorySpec {
        CategorySpec {
            kind: self.kind,
            sizes: self.sizes.clone(),
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn object_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.sizes.len()).map(ObjectId)
    }

    /// Total number of morphisms.
    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    fn check_object(&self, i: ObjectId) -> Result<()> {
        if i.0 < self.object_count() {
            Ok(())
        } else {
            Err(Error::InvalidObject(i.0))
        }
    }

    /// Global index range of the hom-set `i → j`.
    pub fn hom(&self, i: ObjectId, j: ObjectId) -> Range<usize> {
        let h = i.0 * self.object_count() + j.0;
        self.offsets[h]..self.offsets[h + 1]
    }

    pub fn try_hom(&self, i: ObjectId, j: ObjectId) -> Result<Range<usize>> {
        self.check_object(i)?;
        self.check_object(j)?;
        Ok(self.hom(i, j))
    }

    #[inline]
    fn hom_index(&self, x: usize) -> usize {
        self.elem_hom[x] as usize
    }

    pub fn src(&self, x: usize) -> ObjectId {
        self.morphisms[x].src
    }

    pub fn dst(&self, x: usize) -> ObjectId {
        self.morphisms[x].dst
    }

    pub fn morphism(&self, x: usize) -> &Morphism {
        &self.morphisms[x]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    /// Global index of `m`, coercing between compatible kinds.
    pub fn locate(&self, m: &Morphism) -> Option<usize> {
        if let Some(&x) = self.lookup.get(m) {
            return Some(x);
        }
        let payload = m.payload.coerce(self.kind)?;
        self.lookup
            .get(&Morphism {
                src: m.src,
                dst: m.dst,
                payload,
            })
            .copied()
    }

    /// Parse a wire-format morphism into a global index.
    pub fn locate_raw(&self, raw: &RawMorphism) -> Result<usize> {
        self.check_object(ObjectId(raw.src))?;
        self.check_object(ObjectId(raw.dst))?;
        let (m, n) = (self.sizes[raw.src], self.sizes[raw.dst]);
        let payload = match self.kind {
            Kind::MatF2 => Payload::Matrix {
                rows: m as u8,
                cols: n as u8,
                bits: raw.payload.clone(),
            },
            Kind::FullMap => Payload::Total(raw.payload.clone()),
            Kind::PartialMap => Payload::Partial(raw.payload.clone()),
            Kind::InjPartial => Payload::Injective(raw.payload.clone()),
        };
        let morphism = Morphism {
            src: ObjectId(raw.src),
            dst: ObjectId(raw.dst),
            payload,
        };
        self.lookup.get(&morphism).copied().ok_or(Error::NotInHomSet {
            src: raw.src,
            dst: raw.dst,
        })
    }

    /// Product of two composable morphisms (panics otherwise).
    #[inline]
    pub fn product(&self, x: usize, y: usize) -> usize {
        self.mul(x, y).expect("composable arrows")
    }

    /// Product `x · y`, or `None` when `x.dst != y.src`.
    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> Option<usize> {
        let k = self.object_count();
        let (hx, hy) = (self.hom_index(x), self.hom_index(y));
        let (i, j) = (hx / k, hx % k);
        let (j2, l) = (hy / k, hy % k);
        if j != j2 {
            return None;
        }
        let width = self.offsets[hy + 1] - self.offsets[hy];
        let t = (x - self.offsets[hx]) * width + (y - self.offsets[hy]);
        Some(self.products[(i * k + j) * k + l][t] as usize)
    }

    pub fn compose(&self, x: usize, y: usize) -> Result<usize> {
        self.mul(x, y).ok_or(Error::DomainMismatch {
            left_dst: self.dst(x).0,
            right_src: self.src(y).0,
        })
    }

    /// Product of a sequence of composable morphisms.
    pub fn mul_chain(&self, xs: &[usize]) -> Option<usize> {
        let (&first, rest) = xs.split_first()?;
        rest.iter().try_fold(first, |acc, &y| self.mul(acc, y))
    }

    /// All morphisms `y` with `y.src == x.dst`.
    pub fn right_composable(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let j = self.dst(x);
        self.objects().flat_map(move |l| self.hom(j, l))
    }

    /// All morphisms `y` with `y.dst == x.src`.
    pub fn left_composable(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let i = self.src(x);
        self.objects().flat_map(move |l| self.hom(l, i))
    }

    /// The identity at object `i`.
    pub fn identity(&self, i: ObjectId) -> Result<usize> {
        self.check_object(i)?;
        self.identities[i.0]
            .ok_or_else(|| Error::Unsupported(format!("object {i} carries no identity")))
    }

    pub fn is_monoidal(&self) -> bool {
        self.identities.iter().all(Option::is_some)
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == Some(x)
    }

    /// Mutual inverses `V(x) = { y : xyx = x, yxy = y }`.
    pub fn inverses(&self, x: usize) -> Vec<usize> {
        self.hom(self.dst(x), self.src(x))
            .filter(|&y| {
                let xy = self.product(x, y);
                self.product(xy, x) == x && self.product(self.product(y, x), y) == y
            })
            .collect()
    }

    /// `x` is von Neumann regular: `x = xyx` for some `y`.
    pub fn is_regular(&self, x: usize) -> bool {
        self.hom(self.dst(x), self.src(x))
            .any(|y| self.product(self.product(x, y), x) == x)
    }

    pub fn regular_elements(&self) -> Vec<bool> {
        (0..self.len()).map(|x| self.is_regular(x)).collect()
    }

    pub fn is_regular_category(&self) -> bool {
        (0..self.len()).all(|x| self.is_regular(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partial(src: usize, dst: usize, v: &[u8]) -> Morphism {
        Morphism {
            src: ObjectId(src),
            dst: ObjectId(dst),
            payload: Payload::Partial(v.to_vec()),
        }
    }

    #[test]
    fn homset_cardinalities() {
        let c = build_category(Kind::FullMap, &[3, 2]).unwrap();
        assert_eq!(c.hom(ObjectId(0), ObjectId(1)).len(), 8);
        let c = build_category(Kind::PartialMap, &[2, 2]).unwrap();
        assert_eq!(c.hom(ObjectId(0), ObjectId(1)).len(), 9);
        let c = build_category(Kind::InjPartial, &[2, 2]).unwrap();
        assert_eq!(c.hom(ObjectId(0), ObjectId(1)).len(), 7);
    }

    #[test]
    fn closed_forms_match_enumeration() {
        for kind in Kind::ALL {
            let sizes: &[usize] = if kind == Kind::MatF2 { &[1, 2, 3] } else { &[1, 2, 3] };
            let c = build_category(kind, sizes).unwrap();
            for i in c.objects() {
                for j in c.objects() {
                    let expected = kind.homset_size(sizes[i.0], sizes[j.0]);
                    assert_eq!(c.hom(i, j).len() as u128, expected, "{kind} {i}->{j}");
                }
            }
        }
    }

    #[test]
    fn homsets_are_lexicographic() {
        let c = build_category(Kind::InjPartial, &[3, 2]).unwrap();
        for i in c.objects() {
            for j in c.objects() {
                let r = c.hom(i, j);
                for x in r.start + 1..r.end {
                    assert!(c.morphism(x - 1).payload < c.morphism(x).payload);
                }
            }
        }
    }

    #[test]
    fn partial_composition_propagates_undefined() {
        let x = partial(0, 0, &[1, 0]);
        let y = partial(0, 0, &[2, 1]);
        assert_eq!(x.then(&y).unwrap(), partial(0, 0, &[2, 0]));
    }

    #[test]
    fn composition_requires_matching_objects() {
        let c = build_category(Kind::FullMap, &[2, 3]).unwrap();
        let x = c.hom(ObjectId(0), ObjectId(1)).start;
        let y = c.hom(ObjectId(0), ObjectId(0)).start;
        assert_eq!(
            c.compose(x, y),
            Err(Error::DomainMismatch {
                left_dst: 1,
                right_src: 0
            })
        );
        assert!(c.morphism(x).then(c.morphism(y)).is_err());
    }

    #[test]
    fn identities() {
        let c = build_category(Kind::FullMap, &[3]).unwrap();
        let e = c.identity(ObjectId(0)).unwrap();
        assert_eq!(c.morphism(e).payload, Payload::Total(vec![1, 2, 3]));
        let c = build_category(Kind::PartialMap, &[2]).unwrap();
        let e = c.identity(ObjectId(0)).unwrap();
        assert_eq!(c.morphism(e).payload, Payload::Partial(vec![1, 2]));
        let c = build_category(Kind::MatF2, &[2]).unwrap();
        let e = c.identity(ObjectId(0)).unwrap();
        assert_eq!(c.morphism(e).payload.as_slice(), &[1, 0, 0, 1]);
        assert_eq!(c.identity(ObjectId(3)), Err(Error::InvalidObject(3)));
    }

    #[test]
    fn identity_laws() {
        for kind in Kind::ALL {
            let c = build_category(kind, &[2, 1]).unwrap();
            for x in 0..c.len() {
                let (i, j) = (c.src(x), c.dst(x));
                assert_eq!(c.mul(c.identity(i).unwrap(), x), Some(x));
                assert_eq!(c.mul(x, c.identity(j).unwrap()), Some(x));
            }
        }
    }

    #[test]
    fn size_caps_are_enforced() {
        assert!(matches!(
            build_category(Kind::FullMap, &[5]),
            Err(Error::Budget { .. })
        ));
        assert!(matches!(
            build_category(Kind::MatF2, &[4]),
            Err(Error::Budget { .. })
        ));
        let opts = BuildOptions {
            allow_unsafe_sizes: true,
            ..Default::default()
        };
        assert_eq!(build_category_with(Kind::FullMap, &[5], &opts).unwrap().len(), 3125);
        assert!(build_category(Kind::FullMap, &[]).is_err());
        assert!(build_category(Kind::FullMap, &[0]).is_err());
    }

    #[test]
    fn inverses_of_empty_partial_map() {
        let c = build_category(Kind::PartialMap, &[2, 3]).unwrap();
        let empty = c.locate(&partial(0, 1, &[0, 0])).unwrap();
        let inv = c.inverses(empty);
        assert_eq!(inv.len(), 1);
        assert_eq!(c.morphism(inv[0]).payload, Payload::Partial(vec![0, 0, 0]));
    }

    #[test]
    fn identity_is_its_own_inverse() {
        let c = build_category(Kind::FullMap, &[2]).unwrap();
        let e = c.identity(ObjectId(0)).unwrap();
        assert!(c.inverses(e).contains(&e));
        assert!(c.is_regular(e));
    }

    #[test]
    fn restrict_detects_non_closure() {
        let c = build_category(Kind::PartialMap, &[2]).unwrap();
        let nil = c.locate(&partial(0, 0, &[2, 0])).unwrap();
        assert!(matches!(c.restrict(&[nil]), Err(Error::NotClosed(..))));
        let t = c.generated(&[nil]).unwrap();
        assert_eq!(t.len(), 2);
        assert!(!t.is_monoidal());
    }

    #[test]
    fn raw_round_trip() {
        let c = build_category(Kind::MatF2, &[2, 3]).unwrap();
        for x in 0..c.len() {
            let raw = c.morphism(x).to_raw();
            let json = serde_json::to_string(&raw).unwrap();
            let back: RawMorphism = serde_json::from_str(&json).unwrap();
            assert_eq!(c.locate_raw(&back).unwrap(), x);
        }
        let spec: CategorySpec = serde_json::from_str(r#"{"kind":"injpartial","sizes":[2,3]}"#).unwrap();
        assert_eq!(spec.kind, Kind::InjPartial);
    }

    #[test]
    fn coercion_into_partial_maps() {
        let t = build_category(Kind::FullMap, &[2, 2]).unwrap();
        let p = build_category(Kind::PartialMap, &[2, 2]).unwrap();
        for x in 0..t.len() {
            assert!(p.locate(t.morphism(x)).is_some());
        }
        let empty = p.locate(&partial(0, 0, &[0, 0])).unwrap();
        assert!(t.locate(p.morphism(empty)).is_none());
    }
}

//! Natural order, mid-identities, regularity-preserving elements and the
//! domination predicates built on them.

use serde::{Deserialize, Serialize};

use super::{GreenData, Relation};
use crate::error::{Error, Result};
use crate::report::Checker;
use crate::semigroup::FiniteSemigroup;

fn require_regular(s: &FiniteSemigroup) -> Result<()> {
    if s.is_regular() {
        Ok(())
    } else {
        Err(Error::Unsupported("semigroup is not regular".into()))
    }
}

/// The natural partial order `x ⪯ y` iff `x = e·y = y·f` for idempotents `e`, `f`.
#[derive(Debug, Clone)]
pub struct NaturalOrder<'a> {
    s: &'a FiniteSemigroup,
    idempotents: Vec<usize>,
}

impl<'a> NaturalOrder<'a> {
    /// Defined only on regular semigroups.
    pub fn new(s: &'a FiniteSemigroup) -> Result<Self> {
        require_regular(s)?;
        Ok(Self {
            s,
            idempotents: s.idempotents(),
        })
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        let s = self.s;
        self.idempotents.iter().any(|&e| s.mul(e, y) == x)
            && self.idempotents.iter().any(|&f| s.mul(y, f) == x)
    }

    /// Elements `⪯`-below `y`.
    pub fn below(&self, y: usize) -> Vec<usize> {
        self.s.elements().filter(|&x| self.leq(x, y)).collect()
    }
}

pub fn natural_leq(s: &FiniteSemigroup, x: usize, y: usize) -> Result<bool> {
    Ok(NaturalOrder::new(s)?.leq(x, y))
}

/// All `u` with `x·u·y = x·y` for every `x`, `y`.
pub fn mid_identities(s: &FiniteSemigroup) -> Vec<usize> {
    s.elements()
        .filter(|&u| {
            s.elements()
                .all(|x| s.elements().all(|y| s.mul3(x, u, y) == s.mul(x, y)))
        })
        .collect()
}

/// Is the variant `(S, ⋆_u)` regular? Exits on the first irregular element.
fn variant_is_regular(s: &FiniteSemigroup, u: usize) -> bool {
    s.elements().all(|x| {
        let xu = s.mul(x, u);
        let ux = s.mul(u, x);
        s.elements().any(|y| s.mul(s.mul(xu, y), ux) == x)
    })
}

/// All `u` whose variant `(S, ⋆_u)` is regular.
pub fn regularity_preserving(s: &FiniteSemigroup) -> Result<Vec<usize>> {
    require_regular(s)?;
    Ok(s.elements().filter(|&u| variant_is_regular(s, u)).collect())
}

pub fn variant(s: &FiniteSemigroup, u: usize) -> FiniteSemigroup {
    s.variant(u)
}

pub fn local_monoid(s: &FiniteSemigroup, e: usize) -> Result<FiniteSemigroup> {
    s.local_monoid(e)
}

/// Mid-identity and regularity-preserving structure of a regular semigroup.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominationReport {
    pub mid_identities: Vec<usize>,
    pub regularity_preserving: Vec<usize>,
    pub maximal_idempotents: Vec<usize>,
    pub mi_dominated: bool,
    pub rp_dominated: bool,
    /// Set when the semigroup has no idempotents, so domination holds vacuously.
    pub vacuous: bool,
    /// Only meaningful for monoids: every element is an idempotent times a unit.
    pub factorisable: Option<bool>,
    pub checks: Checker,
}

pub fn domination_report(s: &FiniteSemigroup) -> Result<DominationReport> {
    let order = NaturalOrder::new(s)?;
    let green = GreenData::of_semigroup(s)?;
    let idem = s.idempotents();
    let mi = mid_identities(s);
    let rp = regularity_preserving(s)?;
    let max_e: Vec<usize> = idem
        .iter()
        .copied()
        .filter(|&e| idem.iter().all(|&f| f == e || !order.leq(e, f)))
        .collect();
    let vacuous = idem.is_empty();
    let mi_dominated = idem.iter().all(|&e| mi.iter().any(|&u| order.leq(e, u)));
    let rp_dominated = s.elements().all(|x| rp.iter().any(|&u| order.leq(x, u)));
    let units: Option<Vec<usize>> = s
        .identity()
        .map(|id| green.class(Relation::H, id).to_vec());
    let factorisable = units.as_ref().map(|g| {
        s.elements()
            .all(|x| idem.iter().any(|&e| g.iter().any(|&u| s.mul(e, u) == x)))
    });

    let mut ck = Checker::new();
    for &u in &mi {
        ck.check(s.is_idempotent(u), "mid-identity is idempotent", || vec![u]);
        for &v in &mi {
            ck.check(s.mul3(u, v, u) == u, "mid-identities form a rectangular band", || {
                vec![u, v]
            });
        }
    }
    for &e in &idem {
        for &f in &idem {
            ck.check(
                order.leq(e, f) == (s.mul3(f, e, f) == e),
                "e ⪯ f iff e = fef on idempotents",
                || vec![e, f],
            );
        }
    }
    for &e in &idem {
        for x in s.elements() {
            if !order.leq(e, x) {
                continue;
            }
            for &f in &idem {
                if green.related(Relation::H, x, f) {
                    ck.check(order.leq(e, f), "e ⪯ x and x H f imply e ⪯ f", || {
                        vec![e, x, f]
                    });
                }
            }
        }
    }
    let covered = {
        let mut hit = vec![false; s.len()];
        for &e in &mi {
            for x in s.local_monoid_elements(e) {
                hit[x] = true;
            }
        }
        hit.iter().all(|&h| h)
    };
    ck.check(
        mi_dominated == covered,
        "MI-dominated iff covered by local monoids at mid-identities",
        Vec::new,
    );
    if !mi.is_empty() {
        ck.check(
            !rp_dominated || mi_dominated,
            "RP-dominated implies MI-dominated",
            Vec::new,
        );
        let mut rp_from_mi: Vec<usize> = mi
            .iter()
            .flat_map(|&u| green.class(Relation::H, u).iter().copied())
            .collect();
        rp_from_mi.sort_unstable();
        rp_from_mi.dedup();
        ck.check(rp == rp_from_mi, "RP is the union of H-classes of MI", || rp.clone());
    }
    if mi_dominated {
        ck.check(max_e == mi, "MI-dominated implies MaxE = MI", || max_e.clone());
    }
    if let (Some(id), Some(g)) = (s.identity(), units.as_ref()) {
        ck.check(mi == vec![id], "MI of a monoid is the identity", || mi.clone());
        ck.check(&rp == g, "RP of a monoid is its group of units", || rp.clone());
        ck.check(
            green.class(Relation::J, id) == green.class(Relation::H, id),
            "J-class of the identity equals its H-class",
            || vec![id],
        );
        ck.check(
            factorisable == Some(rp_dominated),
            "monoid is RP-dominated iff factorisable",
            Vec::new,
        );
    }
    Ok(DominationReport {
        mid_identities: mi,
        regularity_preserving: rp,
        maximal_idempotents: max_e,
        mi_dominated,
        rp_dominated,
        vacuous,
        factorisable,
        checks: ck,
    })
}

//! Exact minimum generating sets by iterative deepening.
//!
//! The search works on "frontier" J-classes: a J-class that is not yet
//! covered by the current subsemigroup `G` but all of whose strict J-upper
//! classes are. Any element `x` of such a class that still has to be
//! generated is a product whose factors lie in `J_x` or above; the factors
//! above are already in `G`, so at least one new generator must come from
//! `J_x`. Branching on the candidates of one frontier class is therefore
//! complete, and excluding earlier siblings in later branches enumerates
//! each generating set once.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::green::GreenData;
use crate::semigroup::FiniteSemigroup;

use super::{RankBudget, RankResult, RankValue};

struct Layout {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    /// Classes strictly above each class.
    above: Vec<Vec<usize>>,
    /// Classes with nothing above them.
    maximal: Vec<bool>,
    regular: Vec<bool>,
    /// Local R- and L-class ids of each element inside its J-class.
    r_local: Vec<usize>,
    l_local: Vec<usize>,
    r_count: Vec<usize>,
    l_count: Vec<usize>,
}

impl Layout {
    fn new(s: &FiniteSemigroup) -> Result<Self> {
        let g = GreenData::of_semigroup(s)?;
        let jp = g.j();
        let classes = jp.classes().to_vec();
        let class_of: Vec<usize> = s.elements().map(|x| jp.class_of(x)).collect();
        let k = classes.len();
        let above: Vec<Vec<usize>> = (0..k)
            .map(|c| {
                (0..k)
                    .filter(|&d| d != c && g.leq_j(classes[c][0], classes[d][0]))
                    .collect()
            })
            .collect();
        let maximal = above.iter().map(Vec::is_empty).collect();
        let regular = classes.iter().map(|c| c.iter().any(|&x| s.is_idempotent(x))).collect();
        let mut r_local = vec![0; s.len()];
        let mut l_local = vec![0; s.len()];
        let mut r_count = vec![0; k];
        let mut l_count = vec![0; k];
        for (c, members) in classes.iter().enumerate() {
            let mut rs: Vec<usize> = members.iter().map(|&x| g.r().class_of(x)).collect();
            let mut ls: Vec<usize> = members.iter().map(|&x| g.l().class_of(x)).collect();
            rs.sort_unstable();
            rs.dedup();
            ls.sort_unstable();
            ls.dedup();
            for &x in members {
                r_local[x] = rs.binary_search(&g.r().class_of(x)).unwrap();
                l_local[x] = ls.binary_search(&g.l().class_of(x)).unwrap();
            }
            r_count[c] = rs.len();
            l_count[c] = ls.len();
        }
        Ok(Self {
            classes,
            class_of,
            above,
            maximal,
            regular,
            r_local,
            l_local,
            r_count,
            l_count,
        })
    }
}

/// Mutable subsemigroup with undo.
struct Closure<'s> {
    s: &'s FiniteSemigroup,
    flags: Vec<bool>,
    members: Vec<usize>,
    in_class: Vec<usize>,
}

impl<'s> Closure<'s> {
    fn new(s: &'s FiniteSemigroup, classes: usize) -> Self {
        Self {
            s,
            flags: vec![false; s.len()],
            members: Vec::new(),
            in_class: vec![0; classes],
        }
    }

    fn add(&mut self, gens: &[usize], class_of: &[usize]) -> usize {
        let mark = self.members.len();
        for &g in gens {
            if !self.flags[g] {
                self.flags[g] = true;
                self.members.push(g);
            }
        }
        self.s.close_in_place(&mut self.flags, &mut self.members, mark);
        for &x in &self.members[mark..] {
            self.in_class[class_of[x]] += 1;
        }
        mark
    }

    fn undo(&mut self, mark: usize, class_of: &[usize]) {
        for &x in &self.members[mark..] {
            self.flags[x] = false;
            self.in_class[class_of[x]] -= 1;
        }
        self.members.truncate(mark);
    }

    fn is_full(&self) -> bool {
        self.members.len() == self.s.len()
    }
}

pub(super) struct Problem<'s> {
    s: &'s FiniteSemigroup,
    layout: Layout,
    /// Elements that may be chosen as new generators.
    allowed: Vec<bool>,
    fixed: Vec<usize>,
    budget: RankBudget,
}

struct Run<'p, 's> {
    p: &'p Problem<'s>,
    state: Closure<'s>,
    excluded: Vec<bool>,
    chosen: Vec<usize>,
    nodes: u64,
    start: Instant,
    out_of_budget: bool,
}

impl<'s> Problem<'s> {
    pub(super) fn new(s: &'s FiniteSemigroup, fixed: &[usize], allowed: Vec<bool>, budget: RankBudget) -> Result<Self> {
        if s.len() > budget.max_elements {
            return Err(Error::Budget {
                what: "rank search elements",
                actual: s.len(),
                limit: budget.max_elements,
            });
        }
        if let Some(&x) = fixed.iter().find(|&&x| x >= s.len()) {
            return Err(Error::Malformed(format!("element {x} is out of range")));
        }
        let mut seed: Vec<usize> = fixed.to_vec();
        seed.extend(s.elements().filter(|&x| allowed[x]));
        if s.generated(&seed).len() != s.len() {
            return Err(Error::Unsupported(
                "the permitted generators do not generate the semigroup".into(),
            ));
        }
        Ok(Self {
            s,
            layout: Layout::new(s)?,
            allowed,
            fixed: fixed.to_vec(),
            budget,
        })
    }

    /// Candidates that lie outside the subsemigroup generated by everything
    /// else and so belong to every admissible generating set.
    fn forced(&self) -> Vec<usize> {
        let everything: Vec<usize> = self.fixed.iter().copied().chain(self.s.elements().filter(|&x| self.allowed[x])).collect();
        self.s
            .elements()
            .filter(|&x| self.allowed[x] && !self.fixed.contains(&x))
            .filter(|&x| {
                let others: Vec<usize> = everything.iter().copied().filter(|&y| y != x).collect();
                !self.s.generated(&others).contains(&x)
            })
            .collect()
    }

    pub(super) fn solve(&self) -> RankResult {
        let start = Instant::now();
        let lay = &self.layout;
        let forced = self.forced();
        let mut state = Closure::new(self.s, lay.classes.len());
        let mut base: Vec<usize> = self.fixed.clone();
        base.extend(&forced);
        state.add(&base, &lay.class_of);
        let mut run = Run {
            p: self,
            state,
            excluded: vec![false; self.s.len()],
            chosen: Vec::new(),
            nodes: 0,
            start,
            out_of_budget: false,
        };
        let lower = forced.len() + run.remaining_bound().unwrap_or(0);
        let greedy = run.greedy();
        let upper = forced.len() + greedy.len();
        let with_forced = |extra: &[usize]| {
            let mut w = forced.clone();
            w.extend_from_slice(extra);
            w.sort_unstable();
            w
        };
        let mut bounds = (upper, upper);
        let mut witness = with_forced(&greedy);
        for k in lower.saturating_sub(forced.len())..greedy.len() {
            if let Some(found) = run.search(k) {
                bounds = (forced.len() + k, forced.len() + k);
                witness = with_forced(&found);
                break;
            }
            if run.out_of_budget {
                bounds = (forced.len() + k, upper);
                break;
            }
        }
        let value = if bounds.0 == bounds.1 {
            RankValue::Exact(bounds.0)
        } else {
            RankValue::Budget
        };
        RankResult {
            value,
            lower: bounds.0,
            upper: bounds.1,
            witness,
            lower_bound_used: lower,
            nodes_explored: run.nodes,
            seconds: start.elapsed().as_secs_f64(),
        }
    }
}

impl Run<'_, '_> {
    fn lay(&self) -> &Layout {
        &self.p.layout
    }

    fn is_frontier(&self, c: usize) -> bool {
        let lay = self.lay();
        self.state.in_class[c] < lay.classes[c].len()
            && lay.above[c]
                .iter()
                .all(|&d| self.state.in_class[d] == lay.classes[d].len())
    }

    fn candidates(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.lay().classes[c]
            .iter()
            .copied()
            .filter(|&x| self.p.allowed[x] && !self.excluded[x] && !self.state.flags[x])
    }

    /// Lower bound on the number of further generators, or `None` when some
    /// frontier class can no longer be reached.
    fn remaining_bound(&self) -> Option<usize> {
        let lay = self.lay();
        let mut total = 0;
        for c in 0..lay.classes.len() {
            if !self.is_frontier(c) {
                continue;
            }
            if self.candidates(c).next().is_none() {
                return None;
            }
            if !lay.maximal[c] {
                total += 1;
                continue;
            }
            let members = &lay.classes[c];
            if !lay.regular[c] {
                // products of a null maximal class leave it
                total += members.iter().filter(|&&x| !self.state.flags[x]).count();
                continue;
            }
            let mut r_hit = vec![false; lay.r_count[c]];
            let mut l_hit = vec![false; lay.l_count[c]];
            for &x in members.iter().filter(|&&x| self.state.flags[x]) {
                r_hit[lay.r_local[x]] = true;
                l_hit[lay.l_local[x]] = true;
            }
            let r_miss = r_hit.iter().filter(|&&h| !h).count();
            let l_miss = l_hit.iter().filter(|&&h| !h).count();
            total += r_miss.max(l_miss).max(1);
        }
        Some(total)
    }

    /// Frontier class with the fewest remaining candidates.
    fn branch_class(&self) -> Option<usize> {
        (0..self.lay().classes.len())
            .filter(|&c| self.is_frontier(c))
            .min_by_key(|&c| (self.candidates(c).count(), c))
    }

    fn greedy(&mut self) -> Vec<usize> {
        let mut picked = Vec::new();
        let mut marks = Vec::new();
        while !self.state.is_full() {
            let c = self.branch_class().expect("an uncovered semigroup has a frontier class");
            let options: Vec<usize> = self.candidates(c).collect();
            let p = self.p;
            let class_of = &p.layout.class_of;
            let mut best = (0, options[0]);
            for &x in &options {
                let mark = self.state.add(&[x], class_of);
                let gain = self.state.members.len() - mark;
                self.state.undo(mark, class_of);
                if gain > best.0 {
                    best = (gain, x);
                }
            }
            marks.push(self.state.add(&[best.1], class_of));
            picked.push(best.1);
        }
        let p = self.p;
        let class_of = &p.layout.class_of;
        while let Some(mark) = marks.pop() {
            self.state.undo(mark, class_of);
        }
        picked
    }

    fn over_budget(&mut self) -> bool {
        let b = &self.p.budget;
        if self.nodes > b.max_nodes || b.max_seconds.is_some_and(|t| self.start.elapsed().as_secs_f64() > t) {
            self.out_of_budget = true;
        }
        self.out_of_budget
    }

    /// Look for exactly `k` further generators.
    fn search(&mut self, k: usize) -> Option<Vec<usize>> {
        self.chosen.clear();
        self.excluded.iter_mut().for_each(|e| *e = false);
        if self.dfs(k) {
            Some(self.chosen.clone())
        } else {
            None
        }
    }

    fn dfs(&mut self, k: usize) -> bool {
        if self.state.is_full() {
            return true;
        }
        if self.chosen.len() >= k || self.over_budget() {
            return false;
        }
        match self.remaining_bound() {
            Some(need) if self.chosen.len() + need <= k => {}
            _ => return false,
        }
        let c = self.branch_class().expect("frontier exists");
        let options: Vec<usize> = self.candidates(c).collect();
        let p = self.p;
        let class_of = &p.layout.class_of;
        let mut newly_excluded = Vec::new();
        let mut found = false;
        for &x in &options {
            self.nodes += 1;
            let mark = self.state.add(&[x], class_of);
            self.chosen.push(x);
            if self.dfs(k) {
                found = true;
            }
            if !found {
                self.chosen.pop();
            }
            self.state.undo(mark, class_of);
            if found || self.out_of_budget {
                break;
            }
            self.excluded[x] = true;
            newly_excluded.push(x);
        }
        for x in newly_excluded {
            self.excluded[x] = false;
        }
        found
    }
}

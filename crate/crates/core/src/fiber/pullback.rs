//! `P` as a pullback of `T1` and `T2` over `W`.

use std::collections::HashSet;

use super::RegularFrame;
use crate::report::Checker;
use crate::semigroup::is_injective;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackSummary {
    pub p_size: usize,
    /// Number of pairs `(g, h) ∈ T1 × T2` with `a·g = h·a`.
    pub pair_count: usize,
    pub checks: Checker,
}

pub fn pullback_check(frame: &RegularFrame) -> PullbackSummary {
    let c = frame.category();
    let a = frame.a();
    let mut ck = Checker::new();
    let pairs: Vec<(usize, usize)> = frame
        .p
        .elements()
        .map(|x| (frame.psi1[x], frame.psi2[x]))
        .collect();
    ck.check(is_injective(&pairs), "psi is injective", Vec::new);
    let image: HashSet<(usize, usize)> = pairs.iter().copied().collect();
    let mut pair_count = 0;
    for g in frame.t1.elements() {
        let ag = c.product(a, frame.t1.label(g));
        for h in frame.t2.elements() {
            let matches = ag == c.product(frame.t2.label(h), a);
            pair_count += usize::from(matches);
            ck.check(
                matches == image.contains(&(g, h)),
                "image of psi = {(g, h) : ag = ha}",
                || vec![g, h],
            );
        }
    }
    ck.check(pair_count == frame.p.len(), "|P| = pair count", Vec::new);
    PullbackSummary {
        p_size: frame.p.len(),
        pair_count,
        checks: ck,
    }
}

//! The case where `a` and every `a·x·a` have exactly one inverse.

use super::RegularFrame;
use crate::report::Checker;
use crate::semigroup::is_bijection;

#[derive(Debug, Clone)]
pub struct InverseSummary {
    pub uniquely_sandwich_regular: bool,
    pub checks: Checker,
}

pub fn inverse_case(frame: &RegularFrame) -> InverseSummary {
    let sw = frame.sandwich();
    let c = frame.category();
    let unique = c.inverses(frame.a()).len() == 1
        && (0..sw.len()).all(|x| c.inverses(sw.sandwiched(x)).len() == 1);
    let mut ck = Checker::new();
    if unique {
        ck.check(frame.p.is_inverse(), "P is an inverse semigroup", Vec::new);
        ck.check(frame.p.identity() == Some(frame.b_in_p), "P has identity b", Vec::new);
        for (name, s) in [("W", &frame.w), ("T1", &frame.t1), ("T2", &frame.t2)] {
            ck.check(
                s.is_inverse() && s.is_monoid(),
                &format!("{name} is an inverse monoid"),
                Vec::new,
            );
        }
        for (name, f, _, dst) in frame.maps() {
            ck.check(is_bijection(f, dst.len()), &format!("{name} is bijective"), Vec::new);
        }
        let pairs: Vec<(usize, usize)> = frame
            .p
            .elements()
            .map(|x| (frame.psi1[x], frame.psi2[x]))
            .collect();
        ck.check(
            crate::semigroup::is_injective(&pairs),
            "psi is a bijection onto its image",
            Vec::new,
        );
    }
    InverseSummary {
        uniquely_sandwich_regular: unique,
        checks: ck,
    }
}

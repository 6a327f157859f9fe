//! Idempotents and idempotent-generated parts of `P` and `W`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RegularFrame;
use crate::report::Checker;

#[derive(Debug, Clone)]
pub struct FiberSummary {
    /// Idempotents of `P`.
    pub idempotents: Vec<usize>,
    /// The subsemigroup of `P` they generate.
    pub generated_p: Vec<usize>,
    /// The subsemigroup of `W` generated by its idempotents.
    pub generated_w: Vec<usize>,
    pub checks: Checker,
}

/// Number of random subsets used for the preimage-of-generated check.
pub const SPOT_CHECKS: usize = 24;

fn preimage(phi: &[usize], target: &[usize], w_len: usize) -> Vec<usize> {
    let mut inside = vec![false; w_len];
    for &q in target {
        inside[q] = true;
    }
    (0..phi.len()).filter(|&x| inside[phi[x]]).collect()
}

pub fn idempotent_fiber(frame: &RegularFrame, seed: u64) -> FiberSummary {
    let (p, w, phi) = (&frame.p, &frame.w, &frame.phi);
    let mut ck = Checker::new();
    let ep = p.idempotents();
    let ew = w.idempotents();
    let pre_e = preimage(phi, &ew, w.len());
    ck.check(ep == pre_e, "E_a(P) = phi⁻¹(E_b(W))", || pre_e.clone());
    let gen_p = p.generated(&ep);
    let gen_w = w.generated(&ew);
    let pre_gen = preimage(phi, &gen_w, w.len());
    ck.check(gen_p == pre_gen, "⟨E_a(P)⟩ = phi⁻¹(⟨E_b(W)⟩)", || pre_gen.clone());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<usize> = p.elements().collect();
    for _ in 0..SPOT_CHECKS {
        let k = rng.gen_range(1..=3.min(all.len()));
        let x: Vec<usize> = all.choose_multiple(&mut rng, k).copied().collect();
        let xbar: Vec<usize> = x.iter().map(|&t| phi[t]).collect();
        let lhs = preimage(phi, &w.generated(&xbar), w.len());
        let mut gens = x.clone();
        gens.extend(&ep);
        let rhs = p.generated(&gens);
        ck.check(
            lhs.iter().all(|t| rhs.binary_search(t).is_ok()),
            "phi⁻¹(⟨X̄⟩) ⊆ ⟨X ∪ E_a(P)⟩",
            || x.clone(),
        );
    }
    FiberSummary {
        idempotents: ep,
        generated_p: gen_p,
        generated_w: gen_w,
        checks: ck,
    }
}

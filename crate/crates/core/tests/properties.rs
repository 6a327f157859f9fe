//! Randomised invariants across small catalog categories.

use proptest::prelude::*;

use sandwich_core::category::{build_category, Kind, ObjectId};
use sandwich_core::fiber::{analyze_frame, FrameChecks};
use sandwich_core::green::GreenData;
use sandwich_core::rank::{idrank, rank, RankBudget};
use sandwich_core::sandwich::{green_transfer_check, p_set_check, p_sets, sandwich, Ambient};
use sandwich_core::FiniteSemigroup;

fn category_params() -> impl Strategy<Value = (Kind, Vec<usize>)> {
    (0..Kind::ALL.len(), prop::collection::vec(1usize..=2, 1..=2)).prop_map(|(k, sizes)| (Kind::ALL[k], sizes))
}

/// A sandwich instance `(i, j, a)` picked by three seeds.
fn instance(amb: &Ambient, si: usize, sj: usize, sa: usize) -> (ObjectId, ObjectId, usize) {
    let c = amb.category();
    let n = c.object_count();
    let (i, j) = (ObjectId(si % n), ObjectId(sj % n));
    let hom = c.hom(j, i);
    let a = hom.start + sa % hom.len();
    (i, j, a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative_with_identities(
        (kind, sizes) in category_params(),
        picks in prop::collection::vec(any::<usize>(), 3),
    ) {
        let c = build_category(kind, &sizes).unwrap();
        let x = picks[0] % c.len();
        let ys: Vec<usize> = c.right_composable(x).collect();
        let y = ys[picks[1] % ys.len()];
        let zs: Vec<usize> = c.right_composable(y).collect();
        let z = zs[picks[2] % zs.len()];
        prop_assert_eq!(c.product(c.product(x, y), z), c.product(x, c.product(y, z)));
        let (ei, ej) = (c.identity(c.src(x)).unwrap(), c.identity(c.dst(x)).unwrap());
        prop_assert_eq!(c.product(ei, x), x);
        prop_assert_eq!(c.product(x, ej), x);
        prop_assert_eq!(c.src(c.product(x, y)), c.src(x));
        prop_assert_eq!(c.dst(c.product(x, y)), c.dst(y));
    }

    #[test]
    fn sandwich_green_structure_is_consistent(
        (kind, sizes) in category_params(),
        si in any::<usize>(), sj in any::<usize>(), sa in any::<usize>(),
    ) {
        let amb = Ambient::new(build_category(kind, &sizes).unwrap()).unwrap();
        let (i, j, a) = instance(&amb, si, sj, sa);
        let sw = sandwich(&amb, i, j, a).unwrap();
        let structural = sw.green().structural_check();
        prop_assert!(structural.is_clean(), "{:?}", structural.violations);
        let ps = p_sets(&sw);
        let chain = p_set_check(&sw, &ps);
        prop_assert!(chain.is_clean(), "{:?}", chain.violations);
        let transfer = green_transfer_check(&sw, &ps);
        prop_assert!(transfer.is_clean(), "{:?}", transfer.violations);
        // the table-based Green's data of the sandwich agrees with a recomputation
        let again = GreenData::of_semigroup(sw.semigroup()).unwrap();
        prop_assert_eq!(again.classes(), sw.green().classes());
    }

    #[test]
    fn frames_are_clean(
        (kind, sizes) in category_params(),
        si in any::<usize>(), sj in any::<usize>(), sa in any::<usize>(),
    ) {
        let amb = Ambient::new(build_category(kind, &sizes).unwrap()).unwrap();
        let (i, j, a) = instance(&amb, si, sj, sa);
        let sw = sandwich(&amb, i, j, a).unwrap();
        let rep = analyze_frame(&sw, FrameChecks::ALL).unwrap();
        prop_assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        prop_assert!(rep.p_size <= sw.len());
        prop_assert_eq!(rep.r.zip(rep.l).map(|(r, l)| r * l), Some(rep.inverse_count));
    }

    #[test]
    fn generated_is_a_closure_operator(
        a in prop::collection::vec(0usize..27, 0..5),
        extra in prop::collection::vec(0usize..27, 0..3),
    ) {
        let t3 = FiniteSemigroup::full_transformation_monoid(3);
        let ga = t3.generated(&a);
        prop_assert!(a.iter().all(|x| ga.binary_search(x).is_ok()));
        prop_assert_eq!(t3.generated(&ga), ga.clone());
        prop_assert!(t3.is_closed(&ga));
        let mut b = a.clone();
        b.extend(&extra);
        let gb = t3.generated(&b);
        prop_assert!(ga.iter().all(|x| gb.binary_search(x).is_ok()));
    }

    #[test]
    fn rank_witnesses_generate(gens in prop::collection::vec(0usize..27, 1..4)) {
        let t3 = FiniteSemigroup::full_transformation_monoid(3);
        let s = t3.sub(&t3.generated(&gens)).unwrap();
        let mut distinct = gens.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let r = rank(&s, RankBudget::default()).unwrap();
        let value = r.exact().unwrap();
        prop_assert!(value <= distinct.len());
        prop_assert_eq!(s.generated(&r.witness).len(), s.len());
        prop_assert_eq!(r.witness.len(), value);
        if s.generated(&s.idempotents()).len() == s.len() {
            let e = idrank(&s, RankBudget::default()).unwrap();
            prop_assert!(e.exact().unwrap() >= value);
            prop_assert!(e.witness.iter().all(|&x| s.is_idempotent(x)));
        }
    }
}

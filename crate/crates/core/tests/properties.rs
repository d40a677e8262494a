mod common;

use hpt_core::contraction::{homology_contraction, validate_contraction};
use hpt_core::exec::{self, Strategy};
use hpt_core::perturbation::{ordinary_transfer, Perturbation};
use hpt_core::random::{random_complex, random_perturbation, rng, ComplexShape};
use proptest::prelude::*;

fn nonzero(b: Vec<(i32, usize)>) -> Vec<(i32, usize)> {
    b.into_iter().filter(|&(_, n)| n > 0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn homology_contraction_matches_dense_betti(seed in any::<u64>()) {
        let m = random_complex(&mut rng(seed), ComplexShape::default(), "x");
        let c = homology_contraction(&m);
        prop_assert!(validate_contraction(&c).is_ok());
        prop_assert!(c.small.differential.is_zero());
        let small: Vec<(i32, usize)> = c.small.space.degrees().map(|k| (k, c.small.space.dim(k))).collect();
        prop_assert_eq!(nonzero(small), nonzero(common::betti(&m.space, &m.differential)));
    }

    #[test]
    fn transfer_preserves_homology(seed in any::<u64>()) {
        let inst = random_perturbation(&mut rng(seed), ComplexShape::default());
        let c = &inst.contraction;
        let p = Perturbation::global(&c.big, inst.delta.clone()).unwrap();
        let r = ordinary_transfer(c, &p, 100).unwrap();
        let small = r.small_differential(c);
        prop_assert!(small.compose(&small).unwrap().is_zero());
        prop_assert_eq!(
            nonzero(common::betti(&c.small.space, &small)),
            nonzero(common::betti(&c.big.space, &p.perturbed_differential()))
        );
    }

    #[test]
    fn strategy_does_not_change_results(seed in any::<u64>()) {
        let inst = random_perturbation(&mut rng(seed), ComplexShape::default());
        let c = &inst.contraction;
        let p = Perturbation::global(&c.big, inst.delta.clone()).unwrap();
        exec::set_strategy(Strategy::Sequential);
        let a = ordinary_transfer(c, &p, 100).unwrap();
        exec::set_strategy(Strategy::Parallel);
        let b = ordinary_transfer(c, &p, 100).unwrap();
        prop_assert_eq!(a.transferred.entries(), b.transferred.entries());
        prop_assert_eq!(a.inclusion.entries(), b.inclusion.entries());
        prop_assert_eq!(a.projection.entries(), b.projection.entries());
    }
}

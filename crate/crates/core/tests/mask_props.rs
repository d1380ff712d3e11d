mod common;

use num_traits::Zero;
use proptest::prelude::*;

use common::*;
use subsmooth_core::exact::{invert, same_span};
use subsmooth_core::mask::{
    canonical_transform, common_one_eigenspace, conjugate, even_odd_sums, is_canonical_form,
    operator_norm,
};
use subsmooth_core::{Mask, Point, SymbolMatrix};

fn random_vector_mask(r: &mut impl rand::Rng, p: usize) -> Mask {
    let mut s = SymbolMatrix::zeros(p);
    for i in 0..p {
        for j in 0..p {
            s.set(i, j, any_poly(r));
        }
    }
    Mask::vector(s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn even_odd_sums_recombine(seed in any::<u64>(), p in 1usize..=3) {
        let mut r = rng(seed);
        let m = random_vector_mask(&mut r, p);
        let (a0, a1) = even_odd_sums(&m);
        prop_assert_eq!(&a0 + &a1, m.symbol().eval(Point::One));
        prop_assert_eq!(&a0 - &a1, m.symbol().eval(Point::MinusOne));
    }

    #[test]
    fn eigenspace_transforms_with_conjugation(seed in any::<u64>(), p in 1usize..=3, k in 1usize..=3) {
        let k = k.min(p);
        let mut r = rng(seed);
        let m = convergent_style_mask(&mut r, p, k);
        let rr = invertible_matrix(&mut r, p);
        let rinv = invert(&rr).unwrap();
        let conj = conjugate(&m, &rr).unwrap();
        let mapped: Vec<_> = common_one_eigenspace(&m).iter().map(|v| &rinv * v).collect();
        prop_assert!(same_span(&common_one_eigenspace(&conj), &mapped));
        prop_assert_eq!(conjugate(&conj, &rinv).unwrap(), m);
    }

    #[test]
    fn canonical_transform_gives_block_form(seed in any::<u64>(), p in 1usize..=4, k in 1usize..=4) {
        let k = k.min(p);
        let mut r = rng(seed);
        let m = convergent_style_mask(&mut r, p, k);
        let es = canonical_transform(&m).unwrap();
        prop_assert_eq!(es.k, k);
        let bar = conjugate(&m, &es.r).unwrap();
        prop_assert!(is_canonical_form(&bar, k));
    }

    #[test]
    fn norm_vanishes_only_for_zero(seed in any::<u64>(), p in 1usize..=3) {
        let mut r = rng(seed);
        let m = random_vector_mask(&mut r, p);
        prop_assert_eq!(operator_norm(&m).is_zero(), m.symbol().is_zero());
        let zero = Mask::vector(SymbolMatrix::zeros(p));
        prop_assert!(operator_norm(&zero).is_zero());
    }
}

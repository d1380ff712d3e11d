mod common;

use proptest::prelude::*;

use common::*;
use subsmooth_core::catalog;
use subsmooth_core::engine::{
    apply, apply_n, certify_hermite, certify_vector, derivative_consistency, difference,
    half_power_norm, iterated_symbol, render, taylor_diff, FinSeq,
};
use subsmooth_core::exact::{int, pow2, rat};
use subsmooth_core::hermite_smoothing::taylor_scheme;
use subsmooth_core::mask::{common_one_eigenspace, dilated_operator_norm};
use subsmooth_core::vector_smoothing::derived_k;
use subsmooth_core::Verdict;

fn check_verdict(v: &Verdict) {
    match v {
        Verdict::Certified(c) => {
            assert!(c.norm < int(1));
            assert_eq!(norm_from_deltas(&c.derived, c.l), c.norm);
        }
        Verdict::Refused(r) => {
            assert!(r.norms.iter().all(|(_, n)| *n >= int(1)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_is_linear(seed in any::<u64>(), p in 1usize..=3) {
        let mut r = rng(seed);
        let m = convergent_style_mask(&mut r, p, 1);
        let (c1, c2) = (random_seq(&mut r, p), random_seq(&mut r, p));
        let s = small_rat(&mut r);
        let lhs = apply(&m, &c1.scale(&s).checked_add(&c2).unwrap()).unwrap();
        let rhs = apply(&m, &c1).unwrap().scale(&s).checked_add(&apply(&m, &c2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn iterated_symbol_matches_refinement(seed in any::<u64>(), p in 1usize..=2, l in 1u32..=3) {
        let mut r = rng(seed);
        let m = convergent_style_mask(&mut r, p, 1);
        let sym = iterated_symbol(&m, l).unwrap();
        for j in 1..=p {
            let c = apply_n(&m, &FinSeq::delta(p, j), l).unwrap();
            let (lo, hi) = sym.support().unwrap_or((0, 0));
            let expected = FinSeq::from_fn(p, lo, hi, |i| {
                let a = sym.coeff(i);
                (0..p).map(|row| a[(row, j - 1)].clone()).collect()
            }).unwrap();
            prop_assert_eq!(c, expected);
        }
        prop_assert_eq!(
            half_power_norm(&m, l).unwrap(),
            dilated_operator_norm(&sym, 1 << l) * pow2(-(l as i64))
        );
    }

    #[test]
    fn difference_intertwines_derived(seed in any::<u64>(), p in 1usize..=3, k in 1usize..=3) {
        let k = k.min(p);
        let mut r = rng(seed);
        let a = mask_in_lak(&mut r, p, k);
        let d = derived_k(&a, k).unwrap();
        let c = random_seq(&mut r, p);
        let lhs = difference(&apply(&a, &c).unwrap(), k).unwrap();
        let rhs = apply(&d, &difference(&c, k).unwrap()).unwrap().scale(&rat(1, 2));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn taylor_operator_intertwines_taylor_scheme(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = spectral_mask(&mut r);
        let t = taylor_scheme(&a).unwrap();
        let c = random_seq(&mut r, 2);
        let lhs = taylor_diff(&apply(&a, &c).unwrap()).unwrap();
        let rhs = apply(&t, &taylor_diff(&c).unwrap()).unwrap().scale(&rat(1, 2));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn eigenspace_vectors_are_reproduced(seed in any::<u64>(), p in 1usize..=3, k in 1usize..=3) {
        let k = k.min(p);
        let mut r = rng(seed);
        let m = convergent_style_mask(&mut r, p, k);
        let (mlo, mhi) = m.support().unwrap();
        let n = 8;
        for v in common_one_eigenspace(&m) {
            let c = FinSeq::from_fn(p, -n, n, |_| v.entries().to_vec()).unwrap();
            let out = apply(&m, &c).unwrap();
            prop_assert!(out.agrees_on(&c_const(p, &v), -2 * n + mhi, 2 * n + mlo));
        }
    }

    #[test]
    fn hermite_spectral_sequences_are_reproduced(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = spectral_mask(&mut r);
        let phi = m.phi().unwrap().clone();
        let (mlo, mhi) = m.support().unwrap();
        let n = 8;
        let (lo, hi) = (-2 * n + mhi, 2 * n + mlo);
        let kseq = FinSeq::from_fn(2, -n, n, |_| vec![int(1), int(0)]).unwrap();
        let out = apply(&m, &kseq).unwrap();
        prop_assert!(out.agrees_on(&kseq_window(lo, hi), lo, hi));
        let lseq = FinSeq::from_fn(2, -n, n, |i| vec![int(i) + &phi, int(1)]).unwrap();
        let out = apply(&m, &lseq).unwrap();
        let half = FinSeq::from_fn(2, lo, hi, |i| vec![(int(i) + &phi) * rat(1, 2), rat(1, 2)]).unwrap();
        prop_assert!(out.agrees_on(&half, lo, hi));
    }

    #[test]
    fn certificates_are_sound(seed in any::<u64>(), p in 1usize..=2) {
        let mut r = rng(seed);
        let m = convergent_style_mask(&mut r, p, 1);
        check_verdict(&certify_vector(&m, 0, 3).unwrap());
    }
}

fn c_const(p: usize, v: &subsmooth_core::RatMatrix) -> FinSeq {
    FinSeq::from_fn(p, -64, 64, |_| v.entries().to_vec()).unwrap()
}

fn kseq_window(lo: i64, hi: i64) -> FinSeq {
    FinSeq::from_fn(2, lo, hi, |_| vec![int(1), int(0)]).unwrap()
}

#[test]
fn catalog_certificates_are_sound() {
    for d in 1..=4 {
        let v = certify_vector(&catalog::bspline(d), d.saturating_sub(1), 6).unwrap();
        assert!(v.is_certified());
        check_verdict(&v);
    }
    for m in [
        catalog::merrien(),
        catalog::derham(),
        catalog::merrien_smoothed(),
    ] {
        let v = certify_hermite(&m, 1, 8).unwrap();
        assert!(v.is_certified(), "{v}");
        check_verdict(&v);
    }
    check_verdict(&certify_vector(&catalog::double_knot(), 0, 8).unwrap());
}

#[test]
fn render_consistency_shrinks_with_depth() {
    for m in [catalog::merrien(), catalog::derham_smoothed()] {
        let errs: Vec<f64> = (3..=9)
            .map(|n| derivative_consistency(&render(&m, n, 1).unwrap()))
            .collect();
        for w in errs.windows(2) {
            assert!(w[1] < w[0], "{errs:?}");
        }
    }
}

//! Random generators for masks satisfying the algebraic conditions each
//! operator needs. Everything is seeded so failures reproduce.

#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subsmooth_core::engine::{apply_n, FinSeq};
use subsmooth_core::exact::{int, invert, pow2, rat};
use subsmooth_core::hermite_smoothing::{check_spectral, check_taylor, taylor_scheme};
use subsmooth_core::{Binomial, LaurentPoly, Mask, Point, Rat, RatMatrix, SymbolMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rat(r: &mut impl Rng) -> Rat {
    const DENOMS: [i64; 5] = [1, 2, 3, 4, 8];
    rat(r.gen_range(-6..=6), DENOMS[r.gen_range(0..DENOMS.len())])
}

pub fn nonzero_rat(r: &mut impl Rng) -> Rat {
    loop {
        let x = small_rat(r);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn poly(
    r: &mut impl Rng,
    lo_range: std::ops::RangeInclusive<i64>,
    max_len: usize,
) -> LaurentPoly {
    let lo = r.gen_range(lo_range);
    let len = r.gen_range(1..=max_len);
    let cs: Vec<Rat> = (0..len).map(|_| small_rat(r)).collect();
    LaurentPoly::from_coeffs(lo, &cs)
}

pub fn any_poly(r: &mut impl Rng) -> LaurentPoly {
    poly(r, -3..=1, 4)
}

/// `f + c0 + c1 z` with prescribed values at 1 and -1.
pub fn with_values(f: LaurentPoly, at1: &Rat, atm1: &Rat) -> LaurentPoly {
    let d1 = at1 - f.eval(Point::One);
    let dm1 = atm1 - f.eval(Point::MinusOne);
    let half = rat(1, 2);
    let c0 = (&d1 + &dm1) * &half;
    let c1 = (&d1 - &dm1) * &half;
    &f + &LaurentPoly::from_coeffs(0, &[c0, c1])
}

/// `f + c` with prescribed value at 1.
pub fn with_value_at_one(f: LaurentPoly, at1: &Rat) -> LaurentPoly {
    let d = at1 - f.eval(Point::One);
    &f + &LaurentPoly::constant(d)
}

pub fn random_dim(r: &mut impl Rng) -> usize {
    r.gen_range(1..=3)
}

/// Random symbol in the domain of `d_k`.
pub fn mask_in_lak(r: &mut impl Rng, p: usize, k: usize) -> Mask {
    let mut s = SymbolMatrix::zeros(p);
    for i in 0..p {
        for j in 0..p {
            let f = any_poly(r);
            let g = match (i < k, j < k) {
                (true, true) => &f * &Binomial::ZInvPlusOne.poly(),
                (false, true) => &f * &Binomial::ZInv2MinusOne.poly(),
                _ => f,
            };
            s.set(i, j, g);
        }
    }
    Mask::vector(s)
}

/// Random symbol in the domain of `I_k`.
pub fn mask_in_lbk(r: &mut impl Rng, p: usize, k: usize) -> Mask {
    let mut s = SymbolMatrix::zeros(p);
    for i in 0..p {
        for j in 0..p {
            let f = any_poly(r);
            let g = if i < k && j >= k {
                &f * &Binomial::ZInvMinusOne.poly()
            } else {
                f
            };
            s.set(i, j, g);
        }
    }
    Mask::vector(s)
}

/// Random 2x2 vector mask satisfying the Taylor conditions.
pub fn taylor_mask(r: &mut impl Rng) -> Mask {
    let b12 = &any_poly(r) * &Binomial::ZInv2MinusOne.poly();
    let b22 = with_values(any_poly(r), &int(2), &Rat::zero());
    let b21 = any_poly(r);
    let target = int(2) - b21.eval(Point::One);
    let b11 = with_value_at_one(any_poly(r), &target);
    Mask::vector(SymbolMatrix::from_entries(2, vec![b11, b12, b21, b22]))
}

/// Random Hermite mask satisfying the spectral condition, built directly
/// from the four conditions; `phi` is whatever condition (3) yields.
pub fn spectral_mask(r: &mut impl Rng) -> Mask {
    let two = int(2);
    let g = with_value_at_one(any_poly(r), &Rat::one());
    let a11 = &g * &LaurentPoly::from_coeffs(0, &[Rat::one(), Rat::one()]);
    let a21 = &any_poly(r) * &LaurentPoly::from_coeffs(0, &[-Rat::one(), Rat::zero(), Rat::one()]);
    let a12_m1 = -a11.deriv_eval(Point::MinusOne) / &two;
    let a12 = with_values(any_poly(r), &small_rat(r), &a12_m1);
    let a22_1 = (a21.deriv_eval(Point::One) + &two) / &two;
    let a22_m1 = -a21.deriv_eval(Point::MinusOne) / &two;
    let a22 = with_values(any_poly(r), &a22_1, &a22_m1);
    let phi = (a11.deriv_eval(Point::One) - a12.eval(Point::One) * &two) / &two;
    let m = Mask::hermite(SymbolMatrix::from_entries(2, vec![a11, a12, a21, a22]), phi).unwrap();
    debug_assert!(check_spectral(&m).unwrap().holds);
    m
}

/// Spectral mask on which the smoothing procedure is defined: Taylor
/// scheme with `E = span{e2}` and `alpha_22(1) != 2`.
pub fn smoothable_spectral_mask(r: &mut impl Rng) -> Mask {
    loop {
        let m = spectral_mask(r);
        let a22 = m.symbol().entry(1, 1).eval(Point::One);
        if a22 == int(2) {
            continue;
        }
        let Ok(t) = taylor_scheme(&m) else { continue };
        if check_taylor(&t).unwrap().in_tilde {
            return m;
        }
    }
}

pub fn random_matrix(r: &mut impl Rng, rows: usize, cols: usize) -> RatMatrix {
    RatMatrix::from_rows(
        (0..rows)
            .map(|_| (0..cols).map(|_| small_rat(r)).collect())
            .collect(),
    )
}

pub fn invertible_matrix(r: &mut impl Rng, n: usize) -> RatMatrix {
    loop {
        let m = random_matrix(r, n, n);
        if invert(&m).is_ok() {
            return m;
        }
    }
}

/// Vector mask with `E = span` of the first `k` columns of a random
/// invertible `R`, `B*(1) = R diag(2 I_k, 2J) R^{-1}` with `J` free of the
/// eigenvalue 1, and `B*(-1)` vanishing on that span.
pub fn convergent_style_mask(r: &mut impl Rng, p: usize, k: usize) -> Mask {
    let rr = invertible_matrix(r, p);
    let rinv = invert(&rr).unwrap();
    let j = loop {
        let j = random_matrix(r, p - k, p - k);
        let shifted = &j - &RatMatrix::identity(p - k);
        if p == k || shifted.determinant().map(|d| !d.is_zero()).unwrap_or(false) {
            break j;
        }
    };
    let two = int(2);
    let mut d = RatMatrix::zeros(p, p);
    for i in 0..k {
        d[(i, i)] = two.clone();
    }
    for a in 0..p - k {
        for b in 0..p - k {
            d[(k + a, k + b)] = &j[(a, b)] * &two;
        }
    }
    let at1 = &(&rr * &d) * &rinv;
    let mut y = random_matrix(r, p, p);
    for row in 0..p {
        for col in 0..k {
            y[(row, col)] = Rat::zero();
        }
    }
    let atm1 = &y * &rinv;
    let mut s = SymbolMatrix::zeros(p);
    for a in 0..p {
        for b in 0..p {
            s.set(a, b, with_values(any_poly(r), &at1[(a, b)], &atm1[(a, b)]));
        }
    }
    Mask::vector(s)
}

pub fn random_seq(r: &mut impl Rng, p: usize) -> FinSeq {
    let lo = r.gen_range(-4..=2);
    let len = r.gen_range(1..=7);
    FinSeq::new(
        p,
        lo,
        (0..len)
            .map(|_| (0..p).map(|_| small_rat(r)).collect())
            .collect(),
    )
    .unwrap()
}

/// `||(1/2 S)^L||_inf` from the refined deltas alone: the largest row sum
/// over each residue class modulo `2^L`.
pub fn norm_from_deltas(m: &Mask, l: u32) -> Rat {
    let p = m.dim();
    let step = 1i64 << l;
    let cols: Vec<FinSeq> = (1..=p)
        .map(|j| apply_n(m, &FinSeq::delta(p, j), l).unwrap())
        .collect();
    let mut best = Rat::zero();
    for rho in 0..step {
        for r in 0..p {
            let mut sum = Rat::zero();
            for c in &cols {
                if let Some((lo, hi)) = c.window() {
                    for i in (lo..=hi).filter(|i| i.rem_euclid(step) == rho) {
                        sum += c.get(i)[r].abs();
                    }
                }
            }
            if sum > best {
                best = sum;
            }
        }
    }
    best * pow2(-(l as i64))
}

//! Hermite schemes on function and first-derivative values: spectral and
//! Taylor conditions, the Taylor factorization `d_t` with its inverse `I_t`,
//! re-Taylorization and the smoothing procedure for Hermite masks.
//!
//! Symbols are written `alpha_ij` for a Hermite mask and `beta_ij` for a
//! vector mask of dimension 2.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, rat, same_span, Rat, RatMatrix};
use crate::laurent::{Binomial, LaurentPoly, Point, SymbolMatrix};
use crate::mask::{common_one_eigenspace, conjugate, Mask};
use crate::vector_smoothing::smooth_k_raw;

/// Outcome of checking the four spectral conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralReport {
    pub holds: bool,
    /// `(alpha_11'(1) - 2 alpha_12(1)) / 2`; meaningful when `holds`.
    pub phi: Rat,
    /// Numbers (1)..(4) of the conditions that fail.
    pub violated: Vec<u8>,
}

/// Outcome of checking the Taylor conditions on a 2x2 vector mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaylorReport {
    pub holds_taylor: bool,
    /// Taylor conditions plus `E = span{e2}`.
    pub in_tilde: bool,
    /// Numbers (1)..(3) of the conditions that fail.
    pub violated: Vec<u8>,
}

fn entries(s: &SymbolMatrix) -> [&LaurentPoly; 4] {
    [s.entry(0, 0), s.entry(0, 1), s.entry(1, 0), s.entry(1, 1)]
}

fn hermite_symbol(m: &Mask) -> Result<&SymbolMatrix> {
    m.require_hermite()?;
    Ok(m.symbol())
}

/// Evaluate the four spectral conditions exactly.
pub fn check_spectral(m: &Mask) -> Result<SpectralReport> {
    let [a11, a12, a21, a22] = entries(hermite_symbol(m)?);
    let (one, neg) = (Point::One, Point::MinusOne);
    let two = int(2);
    let mut violated = Vec::new();
    if a11.eval(one) != two || !a11.eval(neg).is_zero() {
        violated.push(1);
    }
    if !a21.eval(one).is_zero() || !a21.eval(neg).is_zero() {
        violated.push(2);
    }
    let phi = (a11.deriv_eval(one) - a12.eval(one) * &two) / &two;
    if !(a11.deriv_eval(neg) + a12.eval(neg) * &two).is_zero() {
        violated.push(3);
    }
    if a21.deriv_eval(one) - a22.eval(one) * &two != int(-2)
        || !(a21.deriv_eval(neg) + a22.eval(neg) * &two).is_zero()
    {
        violated.push(4);
    }
    Ok(SpectralReport {
        holds: violated.is_empty(),
        phi,
        violated,
    })
}

/// Spectral condition holds and the stored `phi` agrees with the symbol.
fn require_spectral(m: &Mask) -> Result<Rat> {
    let report = check_spectral(m)?;
    if !report.holds {
        return Err(Error::Precondition(format!(
            "spectral condition fails: conditions {:?}",
            report.violated
        )));
    }
    let stored = m.require_hermite()?;
    if *stored != report.phi {
        return Err(Error::Internal(format!(
            "stored phi {stored} differs from phi {} read off the symbol",
            report.phi
        )));
    }
    Ok(report.phi)
}

/// `A_0 = diag(1, 1/2)` and every other even coefficient vanishes.
pub fn check_interpolatory(m: &Mask) -> Result<bool> {
    let sym = hermite_symbol(m)?;
    let d = RatMatrix::diag(vec![int(1), rat(1, 2)]);
    if sym.coeff(0) != d {
        return Ok(false);
    }
    let Some((lo, hi)) = sym.support() else {
        return Ok(false);
    };
    Ok((lo..=hi)
        .filter(|i| i % 2 == 0 && *i != 0)
        .all(|i| sym.coeff(i).is_zero()))
}

/// Taylor scheme `d_t A` with `T S_A = 1/2 S_{d_t A} T`.
pub fn taylor_scheme(m: &Mask) -> Result<Mask> {
    let [a11, a12, a21, a22] = entries(hermite_symbol(m)?);
    let two = int(2);
    let q11 = a11.divide_exact(Binomial::ZInvPlusOne)?;
    let q21 = a21.divide_exact(Binomial::ZInv2MinusOne)?;
    let common = &q11 - &q21;
    let b11 = common.scale(&two);
    let b12 = (&(&(a12 * &Binomial::ZInvMinusOne.poly()) - a22) + &common).scale(&two);
    let b21 = q21.scale(&two);
    let b22 = (a22 + &q21).scale(&two);
    Ok(Mask::vector(SymbolMatrix::from_entries(
        2,
        vec![b11, b12, b21, b22],
    )))
}

/// Evaluate the Taylor conditions and `E = span{e2}`.
pub fn check_taylor(m: &Mask) -> Result<TaylorReport> {
    m.require_dim(2)?;
    let [b11, b12, b21, b22] = entries(m.symbol());
    let (one, neg) = (Point::One, Point::MinusOne);
    let mut violated = Vec::new();
    if !b12.eval(one).is_zero() || !b12.eval(neg).is_zero() {
        violated.push(1);
    }
    if b22.eval(one) != int(2) || !b22.eval(neg).is_zero() {
        violated.push(2);
    }
    if b11.eval(one) + b21.eval(one) != int(2) {
        violated.push(3);
    }
    let holds_taylor = violated.is_empty();
    let in_tilde = holds_taylor && is_e2_eigenspace(m);
    Ok(TaylorReport {
        holds_taylor,
        in_tilde,
        violated,
    })
}

fn e2() -> RatMatrix {
    RatMatrix::column(vec![int(0), int(1)])
}

fn is_e2_eigenspace(m: &Mask) -> bool {
    same_span(&common_one_eigenspace(m), &[e2()])
}

/// Inverse of the Taylor factorization; the result is a Hermite mask with
/// `phi = (beta_12'(1) + beta_22'(1) - 1) / 2`.
pub fn inverse_taylor(m: &Mask) -> Result<Mask> {
    m.require_dim(2)?;
    let [b11, b12, b21, b22] = entries(m.symbol());
    let half = rat(1, 2);
    let diag_sum = b11 + b21;
    let c11 = (&Binomial::ZInvPlusOne.poly() * &diag_sum).scale(&half);
    let c12 = (&(b12 - &diag_sum) + b22)
        .divide_exact(Binomial::ZInvMinusOne)?
        .scale(&half);
    let c21 = (b21 * &Binomial::ZInv2MinusOne.poly()).scale(&half);
    let c22 = (b22 - b21).scale(&half);
    let report = check_taylor(m)?;
    if !report.holds_taylor {
        return Err(Error::Precondition(format!(
            "Taylor conditions fail: conditions {:?}",
            report.violated
        )));
    }
    let phi = (b12.deriv_eval(Point::One) + b22.deriv_eval(Point::One) - Rat::one()) * &half;
    Mask::hermite(SymbolMatrix::from_entries(2, vec![c11, c12, c21, c22]), phi)
}

/// Conjugation by `[[1, 0], [eta, 1]]` with `eta = 1 + b/(a - 2)`, where
/// `a = beta_11(1)` and `b = beta_21(1)`, restoring `beta_11(1) + beta_21(1) = 2`.
pub fn retaylor_transform(m: &Mask) -> Result<(Mask, Rat)> {
    m.require_dim(2)?;
    if !is_e2_eigenspace(m) {
        return Err(Error::NotInTilde);
    }
    let at1 = m.symbol().eval(Point::One);
    let (a, b) = (&at1[(0, 0)], &at1[(1, 0)]);
    let two = int(2);
    if *a == two {
        return Err(Error::DegenerateA);
    }
    let eta = Rat::one() + b / (a - &two);
    let r = RatMatrix::from_rows(vec![vec![int(1), int(0)], vec![eta.clone(), int(1)]]);
    Ok((conjugate(&m.as_vector(), &r)?, eta))
}

/// Fixed canonical transformation for masks satisfying the Taylor conditions.
pub fn taylor_canonical_transform() -> RatMatrix {
    RatMatrix::from_ints(&[&[0, 1], &[1, -1]])
}

/// Every intermediate of one smoothing round of a Hermite mask.
#[derive(Debug, Clone)]
pub struct HermiteSmoothing {
    pub mask: Mask,
    /// `d_t A`
    pub taylor: Mask,
    /// `I_1(d_t A)` in the original coordinates
    pub smoothed_taylor: Mask,
    pub eta: Rat,
    /// `eta + 1`, the parameter of the closed forms
    pub zeta: Rat,
    /// Re-Taylorized `I_1(d_t A)`, the Taylor scheme of the result
    pub new_taylor: Mask,
}

/// One round of Hermite smoothing: raises `HC^l` to `HC^{l+1}` and
/// lowers `phi` by 1/2.
pub fn smooth_hermite(m: &Mask) -> Result<Mask> {
    Ok(smooth_hermite_traced(m)?.mask)
}

pub fn smooth_hermite_traced(m: &Mask) -> Result<HermiteSmoothing> {
    let phi = require_spectral(m)?;
    let taylor = taylor_scheme(m)?;
    if !check_taylor(&taylor)?.in_tilde {
        return Err(Error::NotInTilde);
    }
    let r = taylor_canonical_transform();
    let bar = conjugate(&taylor, &r)?;
    let r_inv = crate::exact::invert(&r)?;
    let smoothed_taylor = conjugate(&smooth_k_raw(&bar, 1)?, &r_inv)?;
    let (new_taylor, eta) = retaylor_transform(&smoothed_taylor)?;
    let mask = inverse_taylor(&new_taylor)?;

    let expected = &phi - rat(1, 2);
    let report = check_spectral(&mask)?;
    if !report.holds || report.phi != expected || mask.phi() != Some(&expected) {
        return Err(Error::Internal(format!(
            "smoothed mask has phi {} (stored {:?}), expected {expected}",
            report.phi,
            mask.phi().map(ToString::to_string)
        )));
    }
    if let (Some((lo, hi)), Some((olo, ohi))) = (m.support(), mask.support()) {
        if olo < lo - 5 || ohi > hi {
            return Err(Error::Internal(format!(
                "support [{olo},{ohi}] exceeds [{},{hi}]",
                lo - 5
            )));
        }
    }
    let zeta = &eta + Rat::one();
    Ok(HermiteSmoothing {
        mask,
        taylor,
        smoothed_taylor,
        eta,
        zeta,
        new_taylor,
    })
}

/// `zeta = 1 + alpha_12(1) / (2 - alpha_22(1))`, predicted from the input.
pub fn closed_form_zeta(m: &Mask) -> Result<Rat> {
    let sym = hermite_symbol(m)?;
    let a12 = sym.entry(0, 1).eval(Point::One);
    let a22 = sym.entry(1, 1).eval(Point::One);
    let denom = int(2) - a22;
    if denom.is_zero() {
        return Err(Error::DegenerateA);
    }
    Ok(Rat::one() + a12 / denom)
}

fn lp(lo: i64, cs: &[Rat]) -> LaurentPoly {
    LaurentPoly::from_coeffs(lo, cs)
}

/// Smoothing of a Hermite mask through the explicit formulas for `C` in
/// terms of `alpha_ij` and `zeta`. When `alpha_12(1) = 0` the reduced
/// `zeta = 1` formulas are evaluated as well and must agree.
pub fn smooth_hermite_closed_form(m: &Mask) -> Result<Mask> {
    let phi = require_spectral(m)?;
    let zeta = closed_form_zeta(m)?;
    let sym = closed_form_general(m.symbol(), &zeta)?;
    if m.symbol().entry(0, 1).eval(Point::One).is_zero() {
        let special = closed_form_zeta_one(m.symbol())?;
        if special != sym {
            return Err(Error::Internal(
                "general and zeta = 1 closed forms disagree".into(),
            ));
        }
    }
    Mask::hermite(sym, phi - rat(1, 2))
}

fn closed_form_general(s: &SymbolMatrix, zeta: &Rat) -> Result<SymbolMatrix> {
    let [a11, a12, a21, a22] = entries(s);
    let one = Rat::one();
    let z = zeta.clone();
    let z2 = &z * &z;
    let omz = &one - &z;
    let omz2 = &omz * &omz;
    let half = rat(1, 2);
    let zinv1 = Binomial::ZInvMinusOne.poly();
    let zinv2 = Binomial::ZInv2MinusOne.poly();
    let zinvp1 = Binomial::ZInvPlusOne.poly();
    let c = |r: Rat| LaurentPoly::constant(r);

    // gamma_11
    let p12 = lp(-3, &[&z - &z2, z2.clone(), &z2 - &one, -(&z2 + &z)]);
    let p11 = &(&zinv1 * &c(&z * &omz)) + &c(z.clone());
    let p22 = (&zinv2.scale(&z) - &c(one.clone())).scale(&(&z - &one));
    let inner = &(&(&(a12 * &p12) + &(a11 * &p11)) + &(a22 * &p22)) + &a21.scale(&(&z2 - &z));
    let g11 = (&zinvp1 * &inner).scale(&half);

    // gamma_12
    let q12 = lp(-3, &[omz2.clone(), &z * &omz, &z * &omz, z2.clone()]);
    let q22 = &zinv2.scale(&-omz2.clone()) + &c(&z - &one);
    let q11 = &zinv1.scale(&omz2) + &c(omz.clone());
    let num = &(&(&(a12 * &q12) + &(a22 * &q22)) + &(a11 * &q11)) - &a21.scale(&omz2);
    let g12 = num.divide_exact(Binomial::ZInvMinusOne)?.scale(&half);

    // gamma_21
    let r12 = lp(
        -3,
        &[
            -z2.clone(),
            &z + &z2,
            &z + &z2,
            -((&z + &one) * (&z + &one)),
        ],
    );
    let r11 = (&c(one.clone()) - &zinv1.scale(&z)).scale(&z);
    let r22 = (&zinv2.scale(&z) - &c(one.clone())).scale(&z);
    let inner = &(&(&(a12 * &r12) + &(a11 * &r11)) + &(a22 * &r22)) + &a21.scale(&z2);
    let g21 = (&zinv2 * &inner).scale(&half);

    // gamma_22
    let s12 = lp(-3, &[&z2 - &z, &one - &z2, -z2.clone(), &z2 + &z]);
    let s11 = (&c(one.clone()) - &zinv1.scale(&z)).scale(&omz);
    let s22 = (&zinv2.scale(&omz) + &c(one.clone())).scale(&z);
    let inner = &(&(&(a12 * &s12) + &(a11 * &s11)) + &(a22 * &s22)) + &a21.scale(&(&z - &z2));
    let g22 = inner.scale(&half);

    Ok(SymbolMatrix::from_entries(2, vec![g11, g12, g21, g22]))
}

fn closed_form_zeta_one(s: &SymbolMatrix) -> Result<SymbolMatrix> {
    let [a11, a12, a21, a22] = entries(s);
    let half = rat(1, 2);
    let zinv2_minus_two = lp(-2, &[int(1), int(0), int(-2)]);
    let zinv_minus_two = lp(-1, &[int(1), int(-2)]);
    let zinv2 = Binomial::ZInv2MinusOne.poly();

    let g11 = (&Binomial::ZInvPlusOne.poly() * &(&(&zinv2_minus_two * a12) + a11)).scale(&half);
    let g12 = a12.divide_exact(Binomial::ZInvMinusOne)?.scale(&half);
    let inner = &(&(&(a21 - &(a11 * &zinv_minus_two)) + &(a22 * &zinv2_minus_two))
        - &(&(a12 * &zinv_minus_two) * &zinv2_minus_two));
    let g21 = (&zinv2 * inner).scale(&half);
    let g22 = (a22 - &(&zinv_minus_two * a12)).scale(&half);
    Ok(SymbolMatrix::from_entries(2, vec![g11, g12, g21, g22]))
}

/// Multiplicity `r` of the root of `alpha_12` at 1; `r - 1` further rounds
/// stay in the `zeta = 1` case. `None` when `alpha_12` is zero.
pub fn zeta_multiplicity_forecast(m: &Mask) -> Result<Option<u32>> {
    let sym = hermite_symbol(m)?;
    Ok(sym.entry(0, 1).root_multiplicity_at_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exact::invert;

    #[test]
    fn spectral_of_catalog() {
        let r = check_spectral(&catalog::merrien()).unwrap();
        assert!(r.holds);
        assert_eq!(r.phi, int(0));
        let r = check_spectral(&catalog::derham()).unwrap();
        assert!(r.holds);
        assert_eq!(r.phi, rat(-1, 2));
        for m in [catalog::merrien_smoothed(), catalog::derham_smoothed()] {
            let r = check_spectral(&m).unwrap();
            assert!(r.holds);
            assert_eq!(&r.phi, m.phi().unwrap());
        }
    }

    #[test]
    fn spectral_of_zero_mask() {
        let z = Mask::hermite(SymbolMatrix::zeros(2), int(0)).unwrap();
        let r = check_spectral(&z).unwrap();
        assert!(!r.holds);
        assert_eq!(r.violated, vec![1, 4]);
    }

    #[test]
    fn interpolatory_flags() {
        assert!(check_interpolatory(&catalog::merrien()).unwrap());
        assert!(!check_interpolatory(&catalog::derham()).unwrap());
        assert!(!check_interpolatory(&catalog::merrien_smoothed()).unwrap());
        assert!(check_interpolatory(&catalog::double_knot()).is_err());
    }

    #[test]
    fn merrien_taylor_scheme() {
        let t = taylor_scheme(&catalog::merrien()).unwrap();
        let report = check_taylor(&t).unwrap();
        assert!(report.holds_taylor && report.in_tilde);
        assert!(same_span(&common_one_eigenspace(&t), &[e2()]));
        let back = inverse_taylor(&t).unwrap();
        assert_eq!(back, catalog::merrien());
    }

    #[test]
    fn derham_round_trip() {
        let t = taylor_scheme(&catalog::derham()).unwrap();
        assert!(check_taylor(&t).unwrap().in_tilde);
        assert_eq!(inverse_taylor(&t).unwrap(), catalog::derham());
    }

    #[test]
    fn taylor_report_cases() {
        let diag = Mask::vector(SymbolMatrix::scalar(
            2,
            LaurentPoly::from_ints(0, &[1, 1], &int(1)),
        ));
        let r = check_taylor(&diag).unwrap();
        assert!(r.holds_taylor);
        assert!(!r.in_tilde);
        let r = check_taylor(&catalog::double_knot()).unwrap();
        assert!(!r.holds_taylor);
        assert!(r.violated.contains(&1));
    }

    #[test]
    fn fixed_transform_inverse() {
        assert_eq!(
            invert(&taylor_canonical_transform()).unwrap(),
            RatMatrix::from_ints(&[&[1, 1], &[1, 0]])
        );
    }

    #[test]
    fn merrien_smoothing_matches_published_symbol() {
        let out = smooth_hermite_traced(&catalog::merrien()).unwrap();
        assert_eq!(out.mask, catalog::merrien_smoothed());
        assert_eq!(out.zeta, int(1));
        assert_eq!(out.mask.support(), Some((-6, 1)));
    }

    #[test]
    fn derham_smoothing_matches_published_symbol() {
        let out = smooth_hermite_traced(&catalog::derham()).unwrap();
        assert_eq!(out.mask, catalog::derham_smoothed());
        assert_eq!(out.zeta, int(1));
        assert_eq!(out.mask.support(), Some((-7, 1)));
    }

    #[test]
    fn second_round_zeta() {
        let m = smooth_hermite_traced(&catalog::merrien_smoothed()).unwrap();
        assert_eq!(m.zeta, rat(14, 15));
        let d = smooth_hermite_traced(&catalog::derham_smoothed()).unwrap();
        assert_eq!(d.zeta, rat(41, 44));
        assert_eq!(
            closed_form_zeta(&catalog::merrien_smoothed()).unwrap(),
            rat(14, 15)
        );
        assert_eq!(
            closed_form_zeta(&catalog::derham_smoothed()).unwrap(),
            rat(41, 44)
        );
    }

    #[test]
    fn closed_form_agrees_on_catalog() {
        for m in [
            catalog::merrien(),
            catalog::derham(),
            catalog::merrien_smoothed(),
            catalog::derham_smoothed(),
        ] {
            assert_eq!(
                smooth_hermite_closed_form(&m).unwrap(),
                smooth_hermite(&m).unwrap()
            );
        }
    }

    #[test]
    fn retaylor_restores_condition_three() {
        let t = taylor_scheme(&catalog::merrien_smoothed()).unwrap();
        let r = taylor_canonical_transform();
        let bar = conjugate(&t, &r).unwrap();
        let smoothed = conjugate(&smooth_k_raw(&bar, 1).unwrap(), &invert(&r).unwrap()).unwrap();
        assert!(!check_taylor(&smoothed).unwrap().holds_taylor);
        let (fixed, eta) = retaylor_transform(&smoothed).unwrap();
        assert_eq!(eta, rat(-1, 15));
        assert!(check_taylor(&fixed).unwrap().in_tilde);
    }

    #[test]
    fn retaylor_preconditions() {
        let lin = LaurentPoly::from_ints(0, &[1, 1], &int(1));
        let diag = Mask::vector(SymbolMatrix::scalar(2, lin.clone()));
        assert_eq!(retaylor_transform(&diag).unwrap_err(), Error::NotInTilde);
        let degenerate = Mask::vector(SymbolMatrix::from_entries(
            2,
            vec![lin.clone(), LaurentPoly::zero(), LaurentPoly::one(), lin],
        ));
        assert_eq!(
            retaylor_transform(&degenerate).unwrap_err(),
            Error::DegenerateA
        );
    }

    #[test]
    fn forecasts() {
        assert_eq!(
            zeta_multiplicity_forecast(&catalog::merrien()).unwrap(),
            Some(1)
        );
        assert_eq!(
            zeta_multiplicity_forecast(&catalog::derham()).unwrap(),
            Some(1)
        );
        let mut s = catalog::merrien().into_symbol();
        s.set(0, 1, LaurentPoly::zero());
        let m = Mask::hermite(s, int(0)).unwrap();
        assert_eq!(zeta_multiplicity_forecast(&m).unwrap(), None);
    }

    #[test]
    fn non_spectral_input_is_rejected() {
        let z = Mask::hermite(SymbolMatrix::zeros(2), int(0)).unwrap();
        assert!(matches!(smooth_hermite(&z), Err(Error::Precondition(_))));
        assert!(matches!(
            smooth_hermite_closed_form(&z),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            smooth_hermite(&catalog::double_knot()),
            Err(Error::WrongKind { .. })
        ));
    }
}

//! Built-in schemes: B-splines, the double-knot cubic spline scheme, the
//! interpolatory cubic Hermite scheme of Merrien, a de Rham-type Hermite
//! scheme, and the published symbols of their smoothed versions.

use num_traits::Zero;

use crate::exact::{int, rat, Rat, RatMatrix};
use crate::laurent::{LaurentPoly, SymbolMatrix};
use crate::mask::Mask;

fn poly(lo: i64, coeffs: &[i64]) -> LaurentPoly {
    LaurentPoly::from_ints(lo, coeffs, &int(1))
}

/// Names accepted by [`lookup`], `bspline<l>` standing for any degree.
pub const NAMES: &[&str] = &[
    "bspline<l>",
    "double-knot",
    "merrien",
    "merrien-smoothed",
    "derham",
    "derham-smoothed",
];

pub fn lookup(name: &str) -> Option<Mask> {
    if let Some(deg) = name.strip_prefix("bspline") {
        return deg.parse::<u32>().ok().map(bspline);
    }
    match name {
        "double-knot" => Some(double_knot()),
        "merrien" => Some(merrien()),
        "merrien-smoothed" => Some(merrien_smoothed()),
        "derham" => Some(derham()),
        "derham-smoothed" => Some(derham_smoothed()),
        _ => None,
    }
}

/// Scalar B-spline scheme of degree `l`: `((z+1)/2 z^-1)^l (z+1)`.
pub fn bspline(degree: u32) -> Mask {
    let factor = LaurentPoly::from_ints(-1, &[1, 1], &rat(1, 2));
    let mut sym = poly(0, &[1, 1]);
    for _ in 0..degree {
        sym = &sym * &factor;
    }
    Mask::scalar(sym)
}

/// Double-knot cubic spline scheme, a 2x2 vector scheme.
pub fn double_knot() -> Mask {
    let e = rat(1, 8);
    Mask::vector(SymbolMatrix::from_entries(
        2,
        vec![
            LaurentPoly::from_ints(0, &[2, 6, 1], &e),
            LaurentPoly::from_ints(0, &[0, 2, 5], &e),
            LaurentPoly::from_ints(0, &[5, 2], &e),
            LaurentPoly::from_ints(0, &[1, 6, 2], &e),
        ],
    ))
}

/// Interpolatory C^1 cubic Hermite scheme, given by its coefficient table.
pub fn merrien() -> Mask {
    let coeffs = [
        RatMatrix::from_fracs(&[&[(1, 2), (-1, 8)], &[(3, 4), (-1, 8)]]),
        RatMatrix::from_fracs(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 2)]]),
        RatMatrix::from_fracs(&[&[(1, 2), (1, 8)], &[(-3, 4), (-1, 8)]]),
    ];
    let sym = SymbolMatrix::from_mask_coeffs(-1, &coeffs).expect("2x2 table");
    Mask::hermite(sym, Rat::zero()).expect("2x2")
}

/// De Rham-type Hermite scheme derived from [`merrien`], given by its table.
pub fn derham() -> Mask {
    let coeffs = [
        RatMatrix::from_fracs(&[&[(5, 4), (-3, 8)], &[(9, 2), (-5, 4)]]),
        RatMatrix::from_fracs(&[&[(27, 4), (-9, 8)], &[(9, 2), (3, 4)]]),
        RatMatrix::from_fracs(&[&[(27, 4), (9, 8)], &[(-9, 2), (3, 4)]]),
        RatMatrix::from_fracs(&[&[(5, 4), (3, 8)], &[(-9, 2), (-5, 4)]]),
    ];
    let coeffs: Vec<RatMatrix> = coeffs.iter().map(|a| a.scale(&rat(1, 8))).collect();
    let sym = SymbolMatrix::from_mask_coeffs(-2, &coeffs).expect("2x2 table");
    Mask::hermite(sym, rat(-1, 2)).expect("2x2")
}

/// Published symbol of the HC^2 scheme obtained by smoothing [`merrien`],
/// entered factor by factor as printed.
pub fn merrien_smoothed() -> Mask {
    let s = rat(1, 16);
    let zinv_plus_one = poly(-1, &[1, 1]);
    let zinv2_minus_one = poly(-2, &[1, 0, -1]);
    let c11 = &(&zinv_plus_one * &zinv_plus_one) * &poly(-2, &[-1, 1, 6, 2]);
    let c12 = poly(0, &[-1, -1]);
    let c21 = &zinv2_minus_one * &poly(-4, &[1, -3, -3, 13, 6]);
    let c22 = poly(-2, &[1, -3, 3, 1]);
    let sym = SymbolMatrix::from_entries(2, vec![c11, c12, c21, c22]).scale(&s);
    Mask::hermite(sym, rat(-1, 2)).expect("2x2")
}

/// Published symbol of the HC^3 scheme obtained by smoothing [`derham`].
pub fn derham_smoothed() -> Mask {
    let s = rat(1, 128);
    let zinv_plus_one = poly(-1, &[1, 1]);
    let zinv2_minus_one = poly(-2, &[1, 0, -1]);
    let c11 = &zinv_plus_one * &poly(-4, &[-3, -9, 25, 75, 36, 4]);
    let c12 = poly(-1, &[-3, -12, -3]);
    let c21 = &zinv2_minus_one * &poly(-5, &[3, -7, -37, 37, 128, 20, -8]);
    let c22 = poly(-3, &[3, -7, -21, 21, -4]);
    let sym = SymbolMatrix::from_entries(2, vec![c11, c12, c21, c22]).scale(&s);
    Mask::hermite(sym, int(-1)).expect("2x2")
}

//! Derived schemes and smoothing operators for scalar and vector schemes.
//!
//! With the block split `A = [A11 A12; A21 A22]`, `A11` of size `k x k`:
//!
//! ```text
//! (d_k A)*  = 2 [ A11/(z^-1+1)   (z^-1-1) A12 ]
//!               [ A21/(z^-2-1)   A22          ]
//!
//! (I_k B)*  = 1/2 [ (z^-1+1) B11   B12/(z^-1-1) ]
//!                 [ (z^-2-1) B21   B22          ]
//! ```
//!
//! so that `Delta_k S_A = 1/2 S_{d_k A} Delta_k` and the two maps are mutually
//! inverse on their domains.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{int, rat, same_span, Rat, RatMatrix};
use crate::laurent::{Binomial, LaurentPoly, Point, SymbolMatrix};
use crate::mask::{
    canonical_transform, common_one_eigenspace, conjugate, Eigenstructure, Mask, MaskKind,
};

fn require_scalar(m: &Mask) -> Result<&LaurentPoly> {
    match m.kind() {
        MaskKind::Scalar => Ok(m.symbol().entry(0, 0)),
        other => Err(Error::WrongKind {
            expected: "scalar",
            found: other.name().to_string(),
        }),
    }
}

/// `(d alpha)*(z) = 2z alpha*(z) / (z+1)`.
pub fn derived_scalar(m: &Mask) -> Result<Mask> {
    let a = require_scalar(m)?;
    let q = a.divide_exact(Binomial::ZPlusOne)?;
    Ok(Mask::scalar(q.shift(1).scale(&int(2))))
}

/// `(I alpha)*(z) = (1+z)/2 z^-1 alpha*(z)`.
pub fn smooth_scalar(m: &Mask) -> Result<Mask> {
    let a = require_scalar(m)?;
    let factor = LaurentPoly::from_ints(-1, &[1, 1], &rat(1, 2));
    Ok(Mask::scalar(a * &factor))
}

fn check_k(m: &Mask, k: usize) -> Result<()> {
    if k == 0 || k > m.dim() {
        return Err(Error::Precondition(format!(
            "block size k = {k} outside 1..={}",
            m.dim()
        )));
    }
    Ok(())
}

/// `A11(-1) = 0`, `A21(1) = 0`, `A21(-1) = 0`: the conditions for `d_k A`.
pub fn check_lak(m: &Mask, k: usize) -> bool {
    let p = m.dim();
    if k == 0 || k > p {
        return false;
    }
    let at1 = m.symbol().eval(Point::One);
    let atm1 = m.symbol().eval(Point::MinusOne);
    let a11 = (0..k).all(|i| (0..k).all(|j| atm1[(i, j)].is_zero()));
    let a21 = (k..p).all(|i| (0..k).all(|j| at1[(i, j)].is_zero() && atm1[(i, j)].is_zero()));
    a11 && a21
}

/// `B12(1) = 0`: the condition for `I_k B`.
pub fn check_lbk(m: &Mask, k: usize) -> bool {
    let p = m.dim();
    if k == 0 || k > p {
        return false;
    }
    let at1 = m.symbol().eval(Point::One);
    (0..k).all(|i| (k..p).all(|j| at1[(i, j)].is_zero()))
}

/// Derived scheme with respect to `Delta_k`.
pub fn derived_k(m: &Mask, k: usize) -> Result<Mask> {
    check_k(m, k)?;
    let two = int(2);
    let zinv_minus_one = Binomial::ZInvMinusOne.poly();
    let sym = m.symbol().try_map(|i, j, f| {
        let g = match (i < k, j < k) {
            (true, true) => f.divide_exact(Binomial::ZInvPlusOne)?,
            (true, false) => f * &zinv_minus_one,
            (false, true) => f.divide_exact(Binomial::ZInv2MinusOne)?,
            (false, false) => f.clone(),
        };
        Ok(g.scale(&two))
    })?;
    Ok(Mask::vector(sym))
}

/// Smoothing operator `I_k` in the coordinates given (no basis change).
pub fn smooth_k_raw(m: &Mask, k: usize) -> Result<Mask> {
    check_k(m, k)?;
    let half = rat(1, 2);
    let zinv_plus_one = Binomial::ZInvPlusOne.poly();
    let zinv2_minus_one = Binomial::ZInv2MinusOne.poly();
    let sym = m.symbol().try_map(|i, j, f| {
        let g = match (i < k, j < k) {
            (true, true) => f * &zinv_plus_one,
            (true, false) => f.divide_exact(Binomial::ZInvMinusOne)?,
            (false, true) => f * &zinv2_minus_one,
            (false, false) => f.clone(),
        };
        Ok(g.scale(&half))
    })?;
    Ok(Mask::vector(sym))
}

/// Output of one round of vector smoothing together with the data used.
#[derive(Debug, Clone)]
pub struct VectorSmoothing {
    pub mask: Mask,
    pub k: usize,
    pub transform: Eigenstructure,
    /// `R^{-1} B R`
    pub conjugated: Mask,
    /// `I_k(R^{-1} B R)`
    pub smoothed_conjugated: Mask,
}

/// One round of vector smoothing: `A = R I_k(R^{-1} B R) R^{-1}` with a
/// freshly computed canonical transformation.
pub fn smooth_vector(m: &Mask) -> Result<Mask> {
    Ok(smooth_vector_traced(m)?.mask)
}

pub fn smooth_vector_traced(m: &Mask) -> Result<VectorSmoothing> {
    if matches!(m.kind(), MaskKind::Hermite { .. }) {
        return Err(Error::WrongKind {
            expected: "scalar or vector",
            found: "hermite".into(),
        });
    }
    let es = canonical_transform(m)?;
    let out = smooth_vector_with(m, es)?;
    check_vector_postconditions(m, &out.mask)?;
    Ok(out)
}

/// Smoothing with a caller-supplied canonical transformation.
pub fn smooth_vector_with(m: &Mask, es: Eigenstructure) -> Result<VectorSmoothing> {
    let k = es.k;
    let conjugated = conjugate(&m.as_vector(), &es.r)?;
    let smoothed_conjugated = smooth_k_raw(&conjugated, k).map_err(|e| match e {
        Error::NotDivisible { .. } => Error::Internal(format!(
            "conjugated mask violates B12(1) = 0 after canonical transformation: {e}"
        )),
        other => other,
    })?;
    let back = conjugate(&smoothed_conjugated, &es.r_inv)?;
    let mask = m.with_symbol(back.into_symbol())?;
    Ok(VectorSmoothing {
        mask,
        k,
        transform: es,
        conjugated,
        smoothed_conjugated,
    })
}

fn check_vector_postconditions(input: &Mask, output: &Mask) -> Result<()> {
    if !same_span(
        &common_one_eigenspace(input),
        &common_one_eigenspace(output),
    ) {
        return Err(Error::Internal(
            "smoothing changed the common 1-eigenspace".into(),
        ));
    }
    if let (Some((lo, hi)), Some((olo, ohi))) = (input.support(), output.support()) {
        if olo < lo - 2 || ohi > hi {
            return Err(Error::Internal(format!(
                "support [{olo},{ohi}] exceeds [{},{hi}]",
                lo - 2
            )));
        }
    }
    Ok(())
}

/// `det(x I - M)` as ascending coefficients; a convenience for comparing
/// spectra of `A*(1)` before and after smoothing without leaving `Rat`.
pub fn charpoly_at_one(m: &Mask) -> Result<Vec<Rat>> {
    m.symbol().eval(Point::One).charpoly()
}

/// Block-diagonal `diag(s I_k, I_{p-k})`, handy for checking that the
/// smoothing operators commute with block-diagonal basis changes.
pub fn block_scaling(p: usize, k: usize, s: &Rat) -> RatMatrix {
    RatMatrix::diag(
        (0..p)
            .map(|i| if i < k { s.clone() } else { int(1) })
            .collect(),
    )
}

/// Identity sanity check used by tests and the CLI: `d_k(I_k B) == B`.
pub fn round_trip_holds(b: &Mask, k: usize) -> Result<bool> {
    let a = smooth_k_raw(b, k)?;
    Ok(derived_k(&a, k)?.symbol() == b.symbol())
}

/// Scalar mask embedded as `f(z) I_p`.
pub fn scalar_embedding(p: usize, f: LaurentPoly) -> Mask {
    Mask::vector(SymbolMatrix::scalar(p, f))
}

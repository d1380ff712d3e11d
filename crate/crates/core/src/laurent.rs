//! Laurent polynomials over `Rat` and square matrices of them (symbols).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, Rat, RatMatrix};

/// Evaluation point for symbols: the only two points the calculus needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Point {
    One,
    MinusOne,
}

impl Point {
    fn sign_of_power(self, e: i64) -> bool {
        match self {
            Point::One => true,
            Point::MinusOne => e.rem_euclid(2) == 0,
        }
    }
}

/// The divisors the smoothing calculus divides by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binomial {
    /// `z + 1`
    ZPlusOne,
    /// `z^-1 + 1`
    ZInvPlusOne,
    /// `z^-1 - 1`
    ZInvMinusOne,
    /// `z^-2 - 1`
    ZInv2MinusOne,
}

impl Binomial {
    pub fn poly(self) -> LaurentPoly {
        match self {
            Binomial::ZPlusOne => LaurentPoly::from_terms(&[(0, int(1)), (1, int(1))]),
            Binomial::ZInvPlusOne => LaurentPoly::from_terms(&[(-1, int(1)), (0, int(1))]),
            Binomial::ZInvMinusOne => LaurentPoly::from_terms(&[(-1, int(1)), (0, int(-1))]),
            Binomial::ZInv2MinusOne => LaurentPoly::from_terms(&[(-2, int(1)), (0, int(-1))]),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Binomial::ZPlusOne => "z+1",
            Binomial::ZInvPlusOne => "z^-1+1",
            Binomial::ZInvMinusOne => "z^-1-1",
            Binomial::ZInv2MinusOne => "z^-2-1",
        }
    }
}

/// Finitely supported map exponent -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    /// `z^exp`
    pub fn z(exp: i64) -> Self {
        Self::monomial(exp, Rat::one())
    }

    pub fn from_terms(terms: &[(i64, Rat)]) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(*e, c.clone());
        }
        p
    }

    /// Coefficients for consecutive exponents starting at `lo`.
    pub fn from_coeffs(lo: i64, coeffs: &[Rat]) -> Self {
        let mut p = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(lo + i as i64, c.clone());
        }
        p
    }

    /// Integer coefficients starting at exponent `lo`, all scaled by `scale`.
    pub fn from_ints(lo: i64, coeffs: &[i64], scale: &Rat) -> Self {
        let cs: Vec<Rat> = coeffs.iter().map(|&c| int(c) * scale).collect();
        Self::from_coeffs(lo, &cs)
    }

    pub fn add_term(&mut self, exp: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> Rat {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `[min exponent, max exponent]`, `None` for the zero polynomial.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn eval(&self, at: Point) -> Rat {
        self.terms().fold(Rat::zero(), |acc, (e, c)| {
            if at.sign_of_power(e) {
                acc + c
            } else {
                acc - c
            }
        })
    }

    /// `f'(±1) = sum_i i c_i (±1)^(i-1)`.
    pub fn deriv_eval(&self, at: Point) -> Rat {
        self.terms().fold(Rat::zero(), |acc, (e, c)| {
            let t = c * int(e);
            if at.sign_of_power(e - 1) {
                acc + t
            } else {
                acc - t
            }
        })
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Multiplication by `z^by`.
    pub fn shift(&self, by: i64) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e + by, c.clone()))
                .collect(),
        }
    }

    /// `f(z) -> f(z^factor)`; `dilate_by(2)` is the refinement dilation.
    pub fn dilate_by(&self, factor: i64) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e * factor, c.clone()))
                .collect(),
        }
    }

    /// `f(z) -> f(z^2)`.
    pub fn dilate(&self) -> Self {
        self.dilate_by(2)
    }

    /// Exact quotient `f / d`.
    pub fn divide_exact(&self, d: Binomial) -> Result<Self> {
        self.div_exact_by(&d.poly())
            .map_err(|remainder| Error::NotDivisible {
                divisor: d.label().to_string(),
                remainder,
            })
    }

    /// Synthetic division from the lowest exponent upward. On failure returns
    /// the nonzero remainder left above the quotient's range.
    fn div_exact_by(&self, d: &LaurentPoly) -> std::result::Result<Self, LaurentPoly> {
        let (dlo, dhi) = d.support().expect("division by zero polynomial");
        let Some((flo, fhi)) = self.support() else {
            return Ok(Self::zero());
        };
        let d0 = d.coeff(dlo).recip();
        let mut rem = self.clone();
        let mut q = Self::zero();
        // last exponent of f that a quotient term can still cancel
        let last = fhi - (dhi - dlo);
        let mut e = flo;
        while e <= last {
            let c = rem.coeff(e);
            if !c.is_zero() {
                let qe = e - dlo;
                let qc = &c * &d0;
                for (de, dc) in d.terms() {
                    rem.add_term(qe + de, -(&qc * dc));
                }
                q.add_term(qe, qc);
            }
            e += 1;
        }
        if rem.is_zero() {
            Ok(q)
        } else {
            Err(rem)
        }
    }

    /// Largest `m` with `(z-1)^m | f`; `None` for the zero polynomial.
    pub fn root_multiplicity_at_one(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut m = 0;
        let mut f = self.clone();
        while f.eval(Point::One).is_zero() {
            f = f
                .divide_exact(Binomial::ZInvMinusOne)
                .expect("f(1) = 0 guarantees divisibility");
            m += 1;
        }
        Some(m)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "z")?,
                1 => write!(f, "{mag}*z")?,
                _ if unit => write!(f, "z^{e}")?,
                _ => write!(f, "{mag}*z^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rat::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add, LaurentPoly);
forward_owned!(Sub, sub, LaurentPoly);
forward_owned!(Mul, mul, LaurentPoly);

/// `p x p` matrix of Laurent polynomials: the symbol `A*(z) = sum_i A_i z^i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolMatrix {
    p: usize,
    entries: Vec<LaurentPoly>,
}

impl fmt::Debug for SymbolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.p {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.p {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for SymbolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.p {
            for j in 0..self.p {
                writeln!(f, "  ({},{}): {}", i + 1, j + 1, self.entry(i, j))?;
            }
        }
        Ok(())
    }
}

impl SymbolMatrix {
    pub fn zeros(p: usize) -> Self {
        assert!(p > 0, "symbol dimension must be positive");
        SymbolMatrix {
            p,
            entries: vec![LaurentPoly::zero(); p * p],
        }
    }

    pub fn identity(p: usize) -> Self {
        Self::scalar(p, LaurentPoly::one())
    }

    /// `f(z) I_p`
    pub fn scalar(p: usize, f: LaurentPoly) -> Self {
        let mut m = Self::zeros(p);
        for i in 0..p {
            m.set(i, i, f.clone());
        }
        m
    }

    /// Row-major entries; panics unless `entries.len() == p * p`.
    pub fn from_entries(p: usize, entries: Vec<LaurentPoly>) -> Self {
        assert!(p > 0 && entries.len() == p * p, "need p*p entries");
        SymbolMatrix { p, entries }
    }

    /// Builds the symbol `sum_i coeffs[i] z^(lo + i)` from a mask table.
    pub fn from_mask_coeffs(lo: i64, coeffs: &[RatMatrix]) -> Result<Self> {
        let p = coeffs.first().map_or(1, RatMatrix::rows);
        let mut m = Self::zeros(p);
        for (k, a) in coeffs.iter().enumerate() {
            if a.rows() != p || a.cols() != p {
                return Err(Error::DimensionMismatch(format!(
                    "mask coefficient {k} is {}x{}, expected {p}x{p}",
                    a.rows(),
                    a.cols()
                )));
            }
            for i in 0..p {
                for j in 0..p {
                    m.entries[i * p + j].add_term(lo + k as i64, a[(i, j)].clone());
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.p + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: LaurentPoly) {
        self.entries[i * self.p + j] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    /// Union of entry supports, `None` when the symbol is zero.
    pub fn support(&self) -> Option<(i64, i64)> {
        self.entries
            .iter()
            .filter_map(LaurentPoly::support)
            .reduce(|(a, b), (c, d)| (a.min(c), b.max(d)))
    }

    /// Mask coefficient `A_i`.
    pub fn coeff(&self, i: i64) -> RatMatrix {
        RatMatrix::from_vec(
            self.p,
            self.p,
            self.entries.iter().map(|f| f.coeff(i)).collect(),
        )
    }

    /// `(lo, [A_lo, ..., A_hi])`; `None` for the zero symbol.
    pub fn mask_coeffs(&self) -> Option<(i64, Vec<RatMatrix>)> {
        let (lo, hi) = self.support()?;
        Some((lo, (lo..=hi).map(|i| self.coeff(i)).collect()))
    }

    pub fn map(&self, f: impl Fn(usize, usize, &LaurentPoly) -> LaurentPoly) -> Self {
        let p = self.p;
        SymbolMatrix {
            p,
            entries: self
                .entries
                .iter()
                .enumerate()
                .map(|(idx, e)| f(idx / p, idx % p, e))
                .collect(),
        }
    }

    pub fn try_map(
        &self,
        f: impl Fn(usize, usize, &LaurentPoly) -> Result<LaurentPoly>,
    ) -> Result<Self> {
        let p = self.p;
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(idx, e)| f(idx / p, idx % p, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(SymbolMatrix { p, entries })
    }

    pub fn eval(&self, at: Point) -> RatMatrix {
        RatMatrix::from_vec(
            self.p,
            self.p,
            self.entries.iter().map(|f| f.eval(at)).collect(),
        )
    }

    pub fn deriv_eval(&self, at: Point) -> RatMatrix {
        RatMatrix::from_vec(
            self.p,
            self.p,
            self.entries.iter().map(|f| f.deriv_eval(at)).collect(),
        )
    }

    pub fn scale(&self, s: &Rat) -> Self {
        self.map(|_, _, f| f.scale(s))
    }

    pub fn shift(&self, by: i64) -> Self {
        self.map(|_, _, f| f.shift(by))
    }

    pub fn dilate(&self) -> Self {
        self.map(|_, _, f| f.dilate())
    }

    pub fn dilate_by(&self, factor: i64) -> Self {
        self.map(|_, _, f| f.dilate_by(factor))
    }

    pub fn scale_poly(&self, g: &LaurentPoly) -> Self {
        self.map(|_, _, f| f * g)
    }

    fn check_dim(&self, rhs: &SymbolMatrix) -> Result<()> {
        if self.p != rhs.p {
            return Err(Error::DimensionMismatch(format!(
                "symbol dimensions {} and {}",
                self.p, rhs.p
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &SymbolMatrix) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(self.map(|i, j, f| f + rhs.entry(i, j)))
    }

    pub fn checked_sub(&self, rhs: &SymbolMatrix) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(self.map(|i, j, f| f - rhs.entry(i, j)))
    }

    pub fn checked_mul(&self, rhs: &SymbolMatrix) -> Result<Self> {
        self.check_dim(rhs)?;
        let p = self.p;
        let mut out = Self::zeros(p);
        for i in 0..p {
            for j in 0..p {
                let mut acc = LaurentPoly::zero();
                for k in 0..p {
                    let a = self.entry(i, k);
                    let b = rhs.entry(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `M * A*(z)` for a constant matrix `M`.
    pub fn left_mul_const(&self, m: &RatMatrix) -> Result<Self> {
        self.checked_mul_const(m, true)
    }

    /// `A*(z) * M` for a constant matrix `M`.
    pub fn right_mul_const(&self, m: &RatMatrix) -> Result<Self> {
        self.checked_mul_const(m, false)
    }

    fn checked_mul_const(&self, m: &RatMatrix, left: bool) -> Result<Self> {
        if m.rows() != self.p || m.cols() != self.p {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} constant against {}x{} symbol",
                m.rows(),
                m.cols(),
                self.p,
                self.p
            )));
        }
        let p = self.p;
        let mut out = Self::zeros(p);
        for i in 0..p {
            for j in 0..p {
                let mut acc = LaurentPoly::zero();
                for k in 0..p {
                    let (c, f) = if left {
                        (&m[(i, k)], self.entry(k, j))
                    } else {
                        (&m[(k, j)], self.entry(i, k))
                    };
                    if !c.is_zero() {
                        acc = &acc + &f.scale(c);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }
}

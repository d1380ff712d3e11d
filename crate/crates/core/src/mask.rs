//! Subdivision masks and the structural quantities read off their symbols:
//! even/odd sums, the common 1-eigenspace, `M_B`, the operator norm and
//! canonical transformations.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{column_space_basis, int, invert, kernel_basis, rat, Rat, RatMatrix};
use crate::laurent::{Point, SymbolMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MaskKind {
    Scalar,
    Vector,
    /// Function and first-derivative data; `phi` is the shift constant of
    /// the spectral condition.
    Hermite {
        phi: Rat,
    },
}

impl MaskKind {
    pub fn name(&self) -> &'static str {
        match self {
            MaskKind::Scalar => "scalar",
            MaskKind::Vector => "vector",
            MaskKind::Hermite { .. } => "hermite",
        }
    }
}

/// A stationary subdivision scheme given by its symbol.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    kind: MaskKind,
    symbol: SymbolMatrix,
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mask({}, {:?})", self.kind.name(), self.symbol)
    }
}

impl Mask {
    pub fn new(kind: MaskKind, symbol: SymbolMatrix) -> Result<Self> {
        match kind {
            MaskKind::Scalar if symbol.dim() != 1 => Err(Error::DimensionMismatch(format!(
                "scalar mask needs a 1x1 symbol, got {0}x{0}",
                symbol.dim()
            ))),
            MaskKind::Hermite { .. } if symbol.dim() != 2 => Err(Error::DimensionMismatch(
                format!("hermite mask needs a 2x2 symbol, got {0}x{0}", symbol.dim()),
            )),
            _ => Ok(Mask { kind, symbol }),
        }
    }

    pub fn scalar(symbol: crate::laurent::LaurentPoly) -> Self {
        Mask {
            kind: MaskKind::Scalar,
            symbol: SymbolMatrix::from_entries(1, vec![symbol]),
        }
    }

    pub fn vector(symbol: SymbolMatrix) -> Self {
        Mask {
            kind: MaskKind::Vector,
            symbol,
        }
    }

    pub fn hermite(symbol: SymbolMatrix, phi: Rat) -> Result<Self> {
        Self::new(MaskKind::Hermite { phi }, symbol)
    }

    pub fn kind(&self) -> &MaskKind {
        &self.kind
    }

    pub fn symbol(&self) -> &SymbolMatrix {
        &self.symbol
    }

    pub fn into_symbol(self) -> SymbolMatrix {
        self.symbol
    }

    pub fn dim(&self) -> usize {
        self.symbol.dim()
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        self.symbol.support()
    }

    pub fn phi(&self) -> Option<&Rat> {
        match &self.kind {
            MaskKind::Hermite { phi } => Some(phi),
            _ => None,
        }
    }

    /// Same kind, different symbol.
    pub fn with_symbol(&self, symbol: SymbolMatrix) -> Result<Self> {
        Self::new(self.kind.clone(), symbol)
    }

    /// The same symbol viewed as a plain vector scheme.
    pub fn as_vector(&self) -> Mask {
        Mask::vector(self.symbol.clone())
    }

    pub(crate) fn require_hermite(&self) -> Result<&Rat> {
        self.phi().ok_or_else(|| Error::WrongKind {
            expected: "hermite",
            found: self.kind.name().to_string(),
        })
    }

    pub(crate) fn require_dim(&self, p: usize) -> Result<()> {
        if self.dim() != p {
            return Err(Error::DimensionMismatch(format!(
                "operation needs p = {p}, mask has p = {}",
                self.dim()
            )));
        }
        Ok(())
    }
}

/// `(A^0, A^1)`: sums of the even and of the odd mask coefficients.
pub fn even_odd_sums(m: &Mask) -> (RatMatrix, RatMatrix) {
    let at1 = m.symbol.eval(Point::One);
    let atm1 = m.symbol.eval(Point::MinusOne);
    let half = rat(1, 2);
    ((&at1 + &atm1).scale(&half), (&at1 - &atm1).scale(&half))
}

/// Basis of `{v : A*(1) v = 2v, A*(-1) v = 0}`.
pub fn common_one_eigenspace(m: &Mask) -> Vec<RatMatrix> {
    let p = m.dim();
    let at1 = m.symbol.eval(Point::One);
    let atm1 = m.symbol.eval(Point::MinusOne);
    let shifted = &at1 - &RatMatrix::identity(p).scale(&int(2));
    kernel_basis(&RatMatrix::vstack(&[shifted, atm1]))
}

/// `M_B = A*(1) / 2`.
pub fn m_matrix(m: &Mask) -> RatMatrix {
    m.symbol.eval(Point::One).scale(&rat(1, 2))
}

/// Exact `||S_A||_inf` for the max-norm on `R^p`.
pub fn operator_norm(m: &Mask) -> Rat {
    dilated_operator_norm(&m.symbol, 2)
}

/// Norm of the operator `c -> (sum_j P_{i - step j} c_j)_i` given by the
/// symbol `P`: the largest row-sum norm of `sum_j |P_{eps + step j}|` over the
/// residue classes `eps mod step`. `step = 2^L` gives `||S^L||` from the
/// iterated symbol.
pub fn dilated_operator_norm(symbol: &SymbolMatrix, step: i64) -> Rat {
    let Some((lo, hi)) = symbol.support() else {
        return Rat::zero();
    };
    let p = symbol.dim();
    let mut classes = vec![RatMatrix::zeros(p, p); step as usize];
    for i in lo..=hi {
        let eps = i.rem_euclid(step) as usize;
        let a = symbol.coeff(i).abs();
        classes[eps] = &classes[eps] + &a;
    }
    classes
        .iter()
        .map(RatMatrix::row_sum_norm)
        .max()
        .unwrap_or_else(Rat::zero)
}

/// `R^{-1} A*(z) R`; the kind is preserved.
pub fn conjugate(m: &Mask, r: &RatMatrix) -> Result<Mask> {
    m.require_dim(r.rows())?;
    let r_inv = invert(r)?;
    let sym = m.symbol.right_mul_const(r)?.left_mul_const(&r_inv)?;
    m.with_symbol(sym)
}

/// Canonical transformation `R = [v_1 .. v_k | Q]` sending the common
/// 1-eigenspace to `span{e_1..e_k}` and an `M_B`-invariant complement
/// to the remaining coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenstructure {
    pub k: usize,
    pub basis: Vec<RatMatrix>,
    pub r: RatMatrix,
    pub r_inv: RatMatrix,
}

impl Eigenstructure {
    /// Builds from an explicit transformation whose first `k` columns span
    /// the eigenspace.
    pub fn from_matrix(r: RatMatrix, k: usize) -> Result<Self> {
        let r_inv = invert(&r)?;
        let basis = (0..k).map(|c| r.col(c)).collect();
        Ok(Eigenstructure { k, basis, r, r_inv })
    }
}

/// `Q` is the column space of `M_B - I`. That space is `M_B`-invariant and
/// complements `ker(M_B - I)` exactly when eigenvalue 1 is semisimple; when
/// it is not, or when `ker(M_B - I)` is larger than the common eigenspace,
/// no canonical transformation exists.
pub fn canonical_transform(m: &Mask) -> Result<Eigenstructure> {
    let basis = common_one_eigenspace(m);
    if basis.is_empty() {
        return Err(Error::EmptyEigenspace);
    }
    let p = m.dim();
    let k = basis.len();
    let q = column_space_basis(&(&m_matrix(m) - &RatMatrix::identity(p)));
    if k + q.len() != p {
        return Err(Error::NoCanonicalComplement);
    }
    let cols: Vec<RatMatrix> = basis.iter().chain(&q).cloned().collect();
    let r = RatMatrix::hstack(&cols);
    let r_inv = invert(&r).map_err(|_| Error::NoCanonicalComplement)?;
    Ok(Eigenstructure { k, basis, r, r_inv })
}

/// Whether `M_B` has the block form `diag(I_k, J)`.
pub fn is_canonical_form(m: &Mask, k: usize) -> bool {
    let mm = m_matrix(m);
    let p = m.dim();
    (0..p).all(|i| {
        (0..p).all(|j| {
            let v = &mm[(i, j)];
            if i < k && j < k {
                *v == if i == j { Rat::one() } else { Rat::zero() }
            } else if (i < k) != (j < k) {
                v.is_zero()
            } else {
                true
            }
        })
    })
}

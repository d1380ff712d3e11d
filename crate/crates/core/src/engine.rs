//! Sequence-level subdivision, contractivity certificates and rendering of
//! basic limit functions.

use std::fmt;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rat, int, pow2, rat_to_f64, Rat};
use crate::hermite_smoothing::{check_spectral, check_taylor, taylor_scheme};
use crate::laurent::SymbolMatrix;
use crate::mask::{canonical_transform, conjugate, dilated_operator_norm, Mask, MaskKind};
use crate::vector_smoothing::{check_lak, derived_k};

/// Default bound on the power `L` searched by the certifiers.
pub const DEFAULT_LMAX: u32 = 12;

/// Finitely supported sequence of `p`-vectors; index `i` is stored at
/// `values[i - offset]`, everything outside is zero.
#[derive(Debug, Clone)]
pub struct FinSeq {
    p: usize,
    offset: i64,
    values: Vec<Vec<Rat>>,
}

impl FinSeq {
    pub fn new(p: usize, offset: i64, values: Vec<Vec<Rat>>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.len() != p) {
            return Err(Error::DimensionMismatch(format!(
                "sequence entry of length {} in a sequence of {p}-vectors",
                v.len()
            )));
        }
        Ok(FinSeq { p, offset, values })
    }

    pub fn zeros(p: usize) -> Self {
        FinSeq {
            p,
            offset: 0,
            values: Vec::new(),
        }
    }

    /// `delta e_j` with `j` counted from 1.
    pub fn delta(p: usize, j: usize) -> Self {
        let mut v = vec![Rat::zero(); p];
        v[j - 1] = Rat::one();
        FinSeq {
            p,
            offset: 0,
            values: vec![v],
        }
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[Vec<Rat>] {
        &self.values
    }

    /// Stored index range `[lo, hi]`, or `None` when nothing is stored.
    pub fn window(&self) -> Option<(i64, i64)> {
        if self.values.is_empty() {
            None
        } else {
            Some((self.offset, self.offset + self.values.len() as i64 - 1))
        }
    }

    pub fn get(&self, i: i64) -> Vec<Rat> {
        let idx = i - self.offset;
        if idx < 0 || idx >= self.values.len() as i64 {
            vec![Rat::zero(); self.p]
        } else {
            self.values[idx as usize].clone()
        }
    }

    /// Build from a function on an index range.
    pub fn from_fn(p: usize, lo: i64, hi: i64, f: impl Fn(i64) -> Vec<Rat>) -> Result<Self> {
        Self::new(p, lo, (lo..=hi).map(f).collect())
    }

    /// Drop leading and trailing zero vectors.
    pub fn trimmed(&self) -> FinSeq {
        let nonzero = |v: &Vec<Rat>| v.iter().any(|x| !x.is_zero());
        let Some(first) = self.values.iter().position(nonzero) else {
            return FinSeq::zeros(self.p);
        };
        let last = self.values.iter().rposition(nonzero).unwrap_or(first);
        FinSeq {
            p: self.p,
            offset: self.offset + first as i64,
            values: self.values[first..=last].to_vec(),
        }
    }

    pub fn scale(&self, s: &Rat) -> FinSeq {
        FinSeq {
            p: self.p,
            offset: self.offset,
            values: self
                .values
                .iter()
                .map(|v| v.iter().map(|x| x * s).collect())
                .collect(),
        }
    }

    pub fn checked_add(&self, rhs: &FinSeq) -> Result<FinSeq> {
        if self.p != rhs.p {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.p, rhs.p)));
        }
        let (lo, hi) = match (self.window(), rhs.window()) {
            (None, None) => return Ok(FinSeq::zeros(self.p)),
            (Some(w), None) | (None, Some(w)) => w,
            (Some((a, b)), Some((c, d))) => (a.min(c), b.max(d)),
        };
        Self::from_fn(self.p, lo, hi, |i| {
            self.get(i)
                .iter()
                .zip(rhs.get(i))
                .map(|(x, y)| x + y)
                .collect()
        })
    }

    /// Whether the two sequences agree at every index in `[lo, hi]`.
    pub fn agrees_on(&self, other: &FinSeq, lo: i64, hi: i64) -> bool {
        (lo..=hi).all(|i| self.get(i) == other.get(i))
    }
}

impl PartialEq for FinSeq {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.trimmed(), other.trimmed());
        a.p == b.p && a.values == b.values && (a.values.is_empty() || a.offset == b.offset)
    }
}

impl Eq for FinSeq {}

/// `(S_A c)_i = sum_j A_{i-2j} c_j`.
pub fn apply(m: &Mask, c: &FinSeq) -> Result<FinSeq> {
    apply_symbol(m.symbol(), c)
}

fn apply_symbol(sym: &SymbolMatrix, c: &FinSeq) -> Result<FinSeq> {
    let p = sym.dim();
    if c.p != p {
        return Err(Error::DimensionMismatch(format!(
            "mask of dimension {p} applied to {}-vectors",
            c.p
        )));
    }
    let (Some((mlo, mhi)), Some((clo, chi))) = (sym.support(), c.window()) else {
        return Ok(FinSeq::zeros(p));
    };
    let coeffs: Vec<_> = (mlo..=mhi).map(|i| sym.coeff(i)).collect();
    let lo = 2 * clo + mlo;
    let hi = 2 * chi + mhi;
    let mut out = vec![vec![Rat::zero(); p]; (hi - lo + 1) as usize];
    for (jdx, cj) in c.values.iter().enumerate() {
        if cj.iter().all(Zero::is_zero) {
            continue;
        }
        let j = clo + jdx as i64;
        for (a_idx, a) in coeffs.iter().enumerate() {
            let i = 2 * j + mlo + a_idx as i64;
            let row = &mut out[(i - lo) as usize];
            for r in 0..p {
                for (s, x) in cj.iter().enumerate() {
                    if !x.is_zero() && !a[(r, s)].is_zero() {
                        row[r] += &a[(r, s)] * x;
                    }
                }
            }
        }
    }
    FinSeq::new(p, lo, out)
}

/// `n` refinement steps.
pub fn apply_n(m: &Mask, c: &FinSeq, n: u32) -> Result<FinSeq> {
    let mut cur = c.clone();
    for _ in 0..n {
        cur = apply(m, &cur)?;
    }
    Ok(cur)
}

/// `Delta_k`: forward differences `c_{i+1} - c_i` in the first `k` components.
pub fn difference(c: &FinSeq, k: usize) -> Result<FinSeq> {
    if k > c.p {
        return Err(Error::Precondition(format!("k = {k} exceeds p = {}", c.p)));
    }
    let Some((lo, hi)) = c.window() else {
        return Ok(FinSeq::zeros(c.p));
    };
    FinSeq::from_fn(c.p, lo - 1, hi, |i| {
        let (cur, next) = (c.get(i), c.get(i + 1));
        (0..c.p)
            .map(|r| {
                if r < k {
                    &next[r] - &cur[r]
                } else {
                    cur[r].clone()
                }
            })
            .collect()
    })
}

/// Taylor operator `(T c)_i = (c1_{i+1} - c1_i - c2_i, c2_i)`.
pub fn taylor_diff(c: &FinSeq) -> Result<FinSeq> {
    if c.p != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Taylor operator needs 2-vectors, got {}",
            c.p
        )));
    }
    let Some((lo, hi)) = c.window() else {
        return Ok(FinSeq::zeros(2));
    };
    FinSeq::from_fn(2, lo - 1, hi, |i| {
        let (cur, next) = (c.get(i), c.get(i + 1));
        vec![&next[0] - &cur[0] - &cur[1], cur[1].clone()]
    })
}

/// Symbol of `S_A^L`: `A*(z) A*(z^2) ... A*(z^{2^{L-1}})`.
pub fn iterated_symbol(m: &Mask, l: u32) -> Result<SymbolMatrix> {
    if l == 0 {
        return Err(Error::Precondition("iterated symbol needs L >= 1".into()));
    }
    let mut acc = m.symbol().clone();
    for e in 1..l {
        acc = acc.checked_mul(&m.symbol().dilate_by(1 << e))?;
    }
    Ok(acc)
}

/// Exact `||(1/2 S_A)^L||_inf`.
pub fn half_power_norm(m: &Mask, l: u32) -> Result<Rat> {
    let sym = iterated_symbol(m, l)?;
    let step = 1i64 << l;
    Ok(dilated_operator_norm(&sym, step) * pow2(-(l as i64)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateKind {
    C0,
    /// `C^ell` for vector schemes, `HC^ell` for Hermite schemes.
    Chain {
        ell: u32,
        hermite: bool,
    },
}

/// Witness `||(1/2 S_D)^L|| < 1` for the final derived scheme `D` of a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub l: u32,
    pub norm: Rat,
    /// The contracted derived scheme.
    pub derived: Mask,
    pub steps: Vec<String>,
}

/// Inconclusive outcome; never a proof of divergence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refusal {
    pub stage: usize,
    pub reason: String,
    /// `(L, ||(1/2 S)^L||)` for every power tried.
    pub norms: Vec<(u32, Rat)>,
    pub steps: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Certified(Certificate),
    Refused(Refusal),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Certified(c) => Some(c),
            Verdict::Refused(_) => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Certified(c) => {
                let what = match c.kind {
                    CertificateKind::C0 => "C0".to_string(),
                    CertificateKind::Chain { ell, hermite: true } => format!("HC{ell}"),
                    CertificateKind::Chain {
                        ell,
                        hermite: false,
                    } => format!("C{ell}"),
                };
                writeln!(f, "certified {what}")?;
                for s in &c.steps {
                    writeln!(f, "  {s}")?;
                }
                write!(f, "  ||(1/2 S)^{}|| = {} < 1", c.l, format_rat(&c.norm))
            }
            Verdict::Refused(r) => {
                writeln!(f, "inconclusive at stage {}: {}", r.stage, r.reason)?;
                for s in &r.steps {
                    writeln!(f, "  {s}")?;
                }
                for (l, n) in &r.norms {
                    writeln!(f, "  ||(1/2 S)^{l}|| = {}", format_rat(n))?;
                }
                Ok(())
            }
        }
    }
}

/// `R^{-1} A R` in canonical form followed by `d_k`.
fn canonical_derived(m: &Mask) -> Result<(Mask, usize)> {
    let es = canonical_transform(m)?;
    let k = es.k;
    let bar = conjugate(&m.as_vector(), &es.r)?;
    if !check_lak(&bar, k) {
        return Err(Error::Internal(
            "canonical form violates the conditions for the derived scheme".into(),
        ));
    }
    Ok((derived_k(&bar, k)?, k))
}

/// `(L, norm)` of the first contraction, or every norm tried.
type Search = std::result::Result<(u32, Rat), Vec<(u32, Rat)>>;

fn search_contraction(d: &Mask, lmax: u32) -> Result<Search> {
    let mut norms = Vec::new();
    for l in 1..=lmax {
        let n = half_power_norm(d, l)?;
        if n < Rat::one() {
            return Ok(Ok((l, n)));
        }
        norms.push((l, n));
    }
    Ok(Err(norms))
}

/// Convergence certificate: contractivity of `1/2 S_{d_k A}` in canonical
/// coordinates, searching `L = 1..=lmax`.
pub fn certify_c0(m: &Mask, lmax: u32) -> Result<Verdict> {
    certify_chain(m, 0, lmax, 0, Vec::new(), CertificateKind::C0)
}

/// `C^ell` certificate for a scalar or vector scheme: `ell` derived
/// schemes, each in fresh canonical coordinates, then [`certify_c0`].
pub fn certify_vector(m: &Mask, ell: u32, lmax: u32) -> Result<Verdict> {
    if matches!(m.kind(), MaskKind::Hermite { .. }) {
        return Err(Error::WrongKind {
            expected: "scalar or vector",
            found: "hermite".into(),
        });
    }
    let kind = if ell == 0 {
        CertificateKind::C0
    } else {
        CertificateKind::Chain {
            ell,
            hermite: false,
        }
    };
    certify_chain(m, ell, lmax, 0, Vec::new(), kind)
}

fn certify_chain(
    m: &Mask,
    rounds: u32,
    lmax: u32,
    first_stage: usize,
    mut steps: Vec<String>,
    kind: CertificateKind,
) -> Result<Verdict> {
    let mut cur = m.as_vector();
    let mut stage = first_stage;
    for _ in 0..rounds {
        let (d, k) = canonical_derived(&cur)?;
        stage += 1;
        steps.push(format!("stage {stage}: derived scheme with k = {k}"));
        cur = d;
    }
    let (d, k) = canonical_derived(&cur)?;
    stage += 1;
    steps.push(format!(
        "stage {stage}: derived scheme with k = {k}, contractivity search"
    ));
    match search_contraction(&d, lmax)? {
        Ok((l, norm)) => Ok(Verdict::Certified(Certificate {
            kind,
            l,
            norm,
            derived: d,
            steps,
        })),
        Err(norms) => Ok(Verdict::Refused(Refusal {
            stage,
            reason: format!("no L <= {lmax} with ||(1/2 S)^L|| < 1"),
            norms,
            steps,
        })),
    }
}

/// `HC^ell` certificate for a Hermite scheme: spectral condition, Taylor
/// scheme with `E = span{e2}`, then a `C^{ell-1}` certificate for it.
pub fn certify_hermite(m: &Mask, ell: u32, lmax: u32) -> Result<Verdict> {
    let refuse = |stage, reason: String, steps| {
        Ok(Verdict::Refused(Refusal {
            stage,
            reason,
            norms: Vec::new(),
            steps,
        }))
    };
    if ell == 0 {
        return Err(Error::Precondition(
            "Hermite certification needs ell >= 1".into(),
        ));
    }
    let spectral = check_spectral(m)?;
    if !spectral.holds {
        return refuse(
            0,
            format!(
                "spectral condition fails: conditions {:?}",
                spectral.violated
            ),
            Vec::new(),
        );
    }
    let mut steps = vec![format!(
        "stage 0: spectral condition holds, phi = {}",
        format_rat(&spectral.phi)
    )];
    let t = taylor_scheme(m)?;
    if !check_taylor(&t)?.in_tilde {
        return refuse(
            1,
            "common 1-eigenspace of the Taylor scheme is not span{e2}".into(),
            steps,
        );
    }
    steps.push("stage 1: Taylor scheme, common 1-eigenspace span{e2}".into());
    certify_chain(
        &t,
        ell - 1,
        lmax,
        1,
        steps,
        CertificateKind::Chain { ell, hermite: true },
    )
}

/// Refinement of `delta e_j` sampled at `t = i / 2^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitSample {
    pub n: u32,
    /// Exact values, `(i, c^n_i)`.
    pub rows: Vec<(i64, Vec<Rat>)>,
}

impl LimitSample {
    pub fn t(&self, i: i64) -> f64 {
        i as f64 / (1u64 << self.n) as f64
    }

    pub fn float_rows(&self) -> Vec<(f64, Vec<f64>)> {
        self.rows
            .iter()
            .map(|(i, v)| (self.t(*i), v.iter().map(rat_to_f64).collect()))
            .collect()
    }

    /// CSV with header `t,c1,...,cp`; `exact` writes `p/q` strings.
    pub fn to_csv(&self, exact: bool) -> String {
        let p = self.rows.first().map_or(0, |(_, v)| v.len());
        let mut out = String::from("t");
        for c in 1..=p {
            let _ = write!(out, ",c{c}");
        }
        out.push('\n');
        let denom = pow2(self.n as i64);
        for (i, v) in &self.rows {
            if exact {
                out.push_str(&format_rat(&(int(*i) / &denom)));
                for x in v {
                    let _ = write!(out, ",{}", format_rat(x));
                }
            } else {
                let _ = write!(out, "{:.16e}", self.t(*i));
                for x in v {
                    let _ = write!(out, ",{:.16e}", rat_to_f64(x));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// `n` exact refinement steps from `delta e_j`; Hermite masks are
/// normalized by `D^{-n} = diag(1, 2^n)`.
pub fn render(m: &Mask, n: u32, j: usize) -> Result<LimitSample> {
    if n == 0 {
        return Err(Error::Precondition(
            "render depth must be at least 1".into(),
        ));
    }
    let p = m.dim();
    if j == 0 || j > p {
        return Err(Error::Precondition(format!(
            "basis index {j} outside 1..={p}"
        )));
    }
    let c = apply_n(m, &FinSeq::delta(p, j), n)?;
    let scale = pow2(n as i64);
    let hermite = matches!(m.kind(), MaskKind::Hermite { .. });
    let rows = match c.window() {
        None => Vec::new(),
        Some((lo, hi)) => (lo..=hi)
            .map(|i| {
                let mut v = c.get(i);
                if hermite {
                    v[1] = &v[1] * &scale;
                }
                (i, v)
            })
            .collect(),
    };
    Ok(LimitSample { n, rows })
}

/// Largest `|c2_i - (c1_{i+1} - c1_i) 2^n|` over consecutive samples.
pub fn derivative_consistency(sample: &LimitSample) -> f64 {
    let scale = (1u64 << sample.n) as f64;
    let rows = sample.float_rows();
    rows.windows(2)
        .map(|w| (w[0].1[1] - (w[1].1[0] - w[0].1[0]) * scale).abs())
        .fold(0.0, f64::max)
}

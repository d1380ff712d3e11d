//! Mask files: JSON with rationals as strings, and `catalog:` references.
//!
//! The canonical form has sorted keys and one coefficient matrix per line:
//!
//! ```text
//! {
//!   "coeffs": [
//!     [["1/2", "-1/8"], ["3/4", "-1/8"]],
//!     [["1", "0"], ["0", "1/2"]],
//!     [["1/2", "1/8"], ["-3/4", "-1/8"]]
//!   ],
//!   "kind": "hermite",
//!   "p": 2,
//!   "phi": "0",
//!   "schema_version": 1,
//!   "support_lo": -1
//! }
//! ```

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::catalog;
use crate::exact::{format_rat, parse_rat, Rat, RatMatrix};
use crate::laurent::SymbolMatrix;
use crate::mask::{Mask, MaskKind};

pub const SCHEMA_VERSION: u32 = 1;

/// A malformed mask file, located by line and/or field where possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.field) {
            (Some(l), Some(fl)) => write!(f, "line {l}, field {fl}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            (None, Some(fl)) => write!(f, "field {fl}: {}", self.message),
            (None, None) => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaskFile {
    schema_version: u32,
    kind: String,
    p: usize,
    #[serde(default)]
    phi: Option<String>,
    support_lo: i64,
    coeffs: Vec<Vec<Vec<String>>>,
}

fn line_of(text: &str, literal: &str) -> Option<usize> {
    let quoted = format!("\"{literal}\"");
    text.lines()
        .position(|l| l.contains(&quoted))
        .map(|i| i + 1)
}

/// Parse a mask file.
pub fn parse_mask(text: &str) -> Result<Mask, ParseError> {
    let raw: RawMaskFile = serde_json::from_str(text).map_err(|e| ParseError {
        line: Some(e.line()),
        field: None,
        message: e.to_string(),
    })?;
    let field_err = |field: String, message: String, literal: Option<&str>| ParseError {
        line: literal.and_then(|l| line_of(text, l)),
        field: Some(field),
        message,
    };
    if raw.schema_version != SCHEMA_VERSION {
        return Err(field_err(
            "schema_version".into(),
            format!(
                "unsupported version {}, expected {SCHEMA_VERSION}",
                raw.schema_version
            ),
            None,
        ));
    }
    let p = raw.p;
    if p == 0 {
        return Err(field_err(
            "p".into(),
            "dimension must be positive".into(),
            None,
        ));
    }
    let rat_at = |s: &str, field: String| parse_rat(s).map_err(|m| field_err(field, m, Some(s)));
    let kind = match raw.kind.as_str() {
        "scalar" | "vector" => {
            if raw.phi.is_some() {
                return Err(field_err(
                    "phi".into(),
                    "only hermite masks carry phi".into(),
                    None,
                ));
            }
            if raw.kind == "scalar" {
                MaskKind::Scalar
            } else {
                MaskKind::Vector
            }
        }
        "hermite" => {
            let phi = raw
                .phi
                .as_deref()
                .ok_or_else(|| field_err("phi".into(), "hermite masks need phi".into(), None))?;
            MaskKind::Hermite {
                phi: rat_at(phi, "phi".into())?,
            }
        }
        other => {
            return Err(field_err(
                "kind".into(),
                format!("unknown kind {other:?}, expected scalar, vector or hermite"),
                None,
            ))
        }
    };
    let mut mats = Vec::with_capacity(raw.coeffs.len());
    for (i, m) in raw.coeffs.iter().enumerate() {
        if m.len() != p {
            return Err(field_err(
                format!("coeffs[{i}]"),
                format!("expected {p} rows, found {}", m.len()),
                None,
            ));
        }
        let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(p);
        for (r, row) in m.iter().enumerate() {
            if row.len() != p {
                return Err(field_err(
                    format!("coeffs[{i}][{r}]"),
                    format!("expected {p} entries, found {}", row.len()),
                    None,
                ));
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(c, s)| rat_at(s, format!("coeffs[{i}][{r}][{c}]")))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(parsed);
        }
        mats.push(RatMatrix::from_rows(rows));
    }
    let symbol = if mats.is_empty() {
        SymbolMatrix::zeros(p)
    } else {
        SymbolMatrix::from_mask_coeffs(raw.support_lo, &mats).map_err(|e| ParseError {
            line: None,
            field: Some("coeffs".into()),
            message: e.to_string(),
        })?
    };
    Mask::new(kind, symbol).map_err(|e| ParseError {
        line: None,
        field: Some("p".into()),
        message: e.to_string(),
    })
}

fn quote(s: &str) -> String {
    format!("\"{s}\"")
}

/// Canonical serialization; `parse_mask(&write_mask(m)) == m`.
pub fn write_mask(m: &Mask) -> String {
    let p = m.dim();
    let (lo, coeffs) = m.symbol().mask_coeffs().unwrap_or((0, Vec::new()));
    let mut out = String::from("{\n");
    if coeffs.is_empty() {
        out.push_str("  \"coeffs\": [],\n");
    } else {
        out.push_str("  \"coeffs\": [\n");
        let lines: Vec<String> = coeffs
            .iter()
            .map(|a| {
                let rows: Vec<String> = (0..p)
                    .map(|r| {
                        let cells: Vec<String> =
                            (0..p).map(|c| quote(&format_rat(&a[(r, c)]))).collect();
                        format!("[{}]", cells.join(", "))
                    })
                    .collect();
                format!("    [{}]", rows.join(", "))
            })
            .collect();
        out.push_str(&lines.join(",\n"));
        out.push_str("\n  ],\n");
    }
    out.push_str(&format!("  \"kind\": {},\n", quote(m.kind().name())));
    out.push_str(&format!("  \"p\": {p},\n"));
    if let Some(phi) = m.phi() {
        out.push_str(&format!("  \"phi\": {},\n", quote(&format_rat(phi))));
    }
    out.push_str(&format!("  \"schema_version\": {SCHEMA_VERSION},\n"));
    out.push_str(&format!("  \"support_lo\": {lo}\n"));
    out.push_str("}\n");
    out
}

/// Failure to obtain a mask from a path or `catalog:` reference.
#[derive(Debug)]
pub enum LoadError {
    UnknownCatalog(String),
    Io(std::io::Error),
    Parse(ParseError),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::UnknownCatalog(name) => write!(
                f,
                "unknown catalog entry {name:?}; known: {}",
                catalog::NAMES.join(", ")
            ),
            LoadError::Io(e) => write!(f, "{e}"),
            LoadError::Parse(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LoadError {}

/// Resolve `catalog:<name>` or read and parse a file.
pub fn load_mask(source: &str) -> Result<Mask, LoadError> {
    if let Some(name) = source.strip_prefix("catalog:") {
        return catalog::lookup(name).ok_or_else(|| LoadError::UnknownCatalog(name.to_string()));
    }
    let text = std::fs::read_to_string(Path::new(source)).map_err(LoadError::Io)?;
    parse_mask(&text).map_err(LoadError::Parse)
}

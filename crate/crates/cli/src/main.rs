use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use subsmooth_core::engine::{certify_hermite, certify_vector, render, DEFAULT_LMAX};
use subsmooth_core::exact::format_rat;
use subsmooth_core::hermite_smoothing::{
    check_interpolatory, check_spectral, check_taylor, smooth_hermite_traced, taylor_scheme,
    zeta_multiplicity_forecast,
};
use subsmooth_core::io::{load_mask, write_mask};
use subsmooth_core::mask::{common_one_eigenspace, m_matrix, operator_norm};
use subsmooth_core::vector_smoothing::smooth_vector_traced;
use subsmooth_core::{Mask, MaskKind, Point, Verdict};

/// Raise the smoothness of subdivision schemes with exact symbol calculus.
#[derive(Parser)]
#[command(name = "subsmooth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the symbol and its structural data.
    Show {
        /// Mask file or `catalog:<name>`.
        path: String,
    },
    /// Apply the smoothing procedure.
    Smooth {
        path: String,
        #[arg(long, default_value_t = 1)]
        rounds: u32,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a contractivity certificate. Exit status 0 when
    /// certified, 2 when inconclusive, 1 on error.
    Certify {
        path: String,
        /// Target smoothness; defaults to 0 (C0) for vector and 1 (HC1) for Hermite masks.
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long, env = "SUBSMOOTH_LMAX", default_value_t = DEFAULT_LMAX)]
        lmax: u32,
    },
    /// Sample a basic limit function as CSV.
    Render {
        path: String,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=24))]
        depth: u32,
        /// Component `j` of the initial data `delta e_j`, from 1.
        #[arg(long, default_value_t = 1)]
        basis: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exact `p/q` values instead of floats.
        #[arg(long)]
        exact: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &str) -> Result<Mask> {
    load_mask(path).with_context(|| format!("cannot load {path}"))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn support_text(m: &Mask) -> String {
    match m.support() {
        Some((lo, hi)) => format!("[{lo},{hi}]"),
        None => "empty".into(),
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Show { path } => {
            let m = load(&path)?;
            print!("{}", show(&m)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Smooth { path, rounds, out } => {
            let mut m = load(&path)?;
            for round in 1..=rounds {
                let (next, log) = smooth_round(&m).with_context(|| format!("round {round}"))?;
                eprintln!("round {round}: {log}, support {}", support_text(&next));
                m = next;
            }
            emit(&write_mask(&m), out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { path, ell, lmax } => {
            let m = load(&path)?;
            let verdict = match m.kind() {
                MaskKind::Hermite { .. } => certify_hermite(&m, ell.unwrap_or(1), lmax)?,
                _ => certify_vector(&m, ell.unwrap_or(0), lmax)?,
            };
            println!("{verdict}");
            Ok(match verdict {
                Verdict::Certified(_) => ExitCode::SUCCESS,
                Verdict::Refused(_) => ExitCode::from(2),
            })
        }
        Command::Render {
            path,
            depth,
            basis,
            out,
            exact,
        } => {
            let m = load(&path)?;
            let sample = render(&m, depth, basis)?;
            emit(&sample.to_csv(exact), out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn smooth_round(m: &Mask) -> Result<(Mask, String)> {
    Ok(match m.kind() {
        MaskKind::Hermite { .. } => {
            let s = smooth_hermite_traced(m)?;
            let phi = s.mask.phi().map(format_rat).unwrap_or_default();
            let log = format!(
                "eta = {}, zeta = {}, phi = {phi}",
                format_rat(&s.eta),
                format_rat(&s.zeta)
            );
            (s.mask, log)
        }
        _ => {
            let s = smooth_vector_traced(m)?;
            (s.mask, format!("k = {}", s.k))
        }
    })
}

fn show(m: &Mask) -> Result<String> {
    use std::fmt::Write as _;
    let mut s = String::new();
    writeln!(s, "kind: {}", m.kind().name())?;
    writeln!(s, "p: {}", m.dim())?;
    writeln!(s, "support: {}", support_text(m))?;
    writeln!(s, "symbol:\n{}", m.symbol())?;
    writeln!(s, "A*(1):\n{}", m.symbol().eval(Point::One))?;
    writeln!(s, "A*(-1):\n{}", m.symbol().eval(Point::MinusOne))?;
    writeln!(s, "M = A*(1)/2:\n{}", m_matrix(m))?;
    let basis = common_one_eigenspace(m);
    let vecs: Vec<String> = basis
        .iter()
        .map(|v| {
            let xs: Vec<String> = v.entries().iter().map(format_rat).collect();
            format!("({})", xs.join(", "))
        })
        .collect();
    writeln!(
        s,
        "common 1-eigenspace: k = {}, basis {{{}}}",
        basis.len(),
        vecs.join(", ")
    )?;
    writeln!(s, "operator norm: {}", format_rat(&operator_norm(m)))?;
    if let MaskKind::Hermite { phi } = m.kind() {
        writeln!(s, "phi (stored): {}", format_rat(phi))?;
        let r = check_spectral(m)?;
        if r.holds {
            writeln!(s, "spectral condition: holds, phi = {}", format_rat(&r.phi))?;
            let t = taylor_scheme(m)?;
            let tr = check_taylor(&t)?;
            writeln!(
                s,
                "Taylor scheme: Taylor conditions {}, common 1-eigenspace span{{e2}}: {}",
                if tr.holds_taylor { "hold" } else { "fail" },
                tr.in_tilde
            )?;
            let forecast = match zeta_multiplicity_forecast(m)? {
                Some(r) => r.to_string(),
                None => "infinite".into(),
            };
            writeln!(s, "root multiplicity of alpha_12 at 1: {forecast}")?;
        } else {
            writeln!(s, "spectral condition: fails {:?}", r.violated)?;
        }
        writeln!(s, "interpolatory: {}", check_interpolatory(m)?)?;
    } else if m.dim() == 2 {
        let tr = check_taylor(m)?;
        writeln!(
            s,
            "Taylor conditions: {}",
            if tr.holds_taylor {
                "hold".to_string()
            } else {
                format!("fail {:?}", tr.violated)
            }
        )?;
    }
    Ok(s)
}

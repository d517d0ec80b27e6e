//! Command-line interface: scalar evaluation, coefficient dumps, permutation
//! scans, moment tables, and the consistency battery. Output is deterministic
//! byte-for-byte for a fixed invocation.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::dickson::{bigint_mod_p, rdp_coeffs_exact, rdp_eval_param};
use crate::error::{Error, Result};
use crate::field::{Field, FieldCtx, FqElem};
use crate::moment::{Convention, MomentEngine};
use crate::perm::{aux_poly, pp_scan};
use crate::quad::QuadExtCtx;
use crate::verify::run_all;

#[derive(Parser, Debug)]
#[command(
    name = "dickson4",
    version,
    about = "Reversed Dickson polynomials of the fourth kind over F_q: \
             evaluation, permutation criteria, first-moment recurrences"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Corrected,
    AsPrinted,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Corrected => Convention::Corrected,
            ConventionArg::AsPrinted => Convention::AsPrinted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MomentEmit {
    Table,
    Divergences,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate D_{n,3}(a, x) over F_q (a defaults to 1)
    Eval {
        /// Field characteristic (prime > 3)
        #[arg(long)]
        p: u64,
        /// Extension degree
        #[arg(long, default_value_t = 1)]
        e: usize,
        /// Modulus residues, constant first (e.g. 2,0,1 for t^2 + 2)
        #[arg(long)]
        modulus: Option<String>,
        /// Index n, decimal, arbitrary size
        #[arg(long)]
        n: String,
        /// Point x: a residue, or coordinates c0,c1,... for extension fields
        #[arg(long)]
        x: String,
        /// Parameter a, same syntax as --x
        #[arg(long)]
        a: Option<String>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Output file (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact coefficients of D_{n,kind}(1, x), or of the auxiliary polynomial
    Coeffs {
        /// Degree index n (decimal)
        #[arg(long)]
        n: String,
        /// 0..3 for the four kinds, or "aux" for the auxiliary polynomial
        #[arg(long, default_value = "3")]
        kind: String,
        /// Reduce coefficients mod p instead of exact integers
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every permutation criterion for each n in [0, n-max]
    Scan {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: usize,
        #[arg(long)]
        modulus: Option<String>,
        /// Last index scanned (default: q^2 - 1, one full period)
        #[arg(long)]
        n_max: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First-moment recurrence table, or its divergences from brute force
    Moments {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: usize,
        #[arg(long)]
        modulus: Option<String>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Corrected)]
        convention: ConventionArg,
        #[arg(long, value_enum, default_value_t = MomentEmit::Table)]
        emit: MomentEmit,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the internal consistency battery and report each check
    Verify,
}

fn parse_residue_list(s: &str) -> Result<Vec<u64>> {
    let inner = s
        .trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|_| Error::Usage(format!("bad integer '{}' in list '{s}'", c.trim())))
        })
        .collect()
}

fn build_field(p: u64, e: usize, modulus: Option<&String>) -> Result<FieldCtx> {
    let m = modulus.map(|s| parse_residue_list(s)).transpose()?;
    FieldCtx::new(p, e, m.as_deref())
}

fn parse_elem(ctx: &FieldCtx, s: &str) -> Result<FqElem> {
    let coeffs = parse_residue_list(s)?;
    if coeffs.is_empty() {
        return Err(Error::Usage(format!("empty element '{s}'")));
    }
    ctx.from_coeffs(&coeffs)
}

fn parse_index(s: &str) -> Result<BigUint> {
    s.trim()
        .parse::<BigUint>()
        .map_err(|_| Error::Usage(format!("bad index '{s}': expected a decimal integer")))
}

fn writer(out: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout()),
    })
}

fn elem_json(v: &FqElem) -> serde_json::Value {
    let c = v.coeffs();
    if c.len() == 1 {
        json!(c[0])
    } else {
        json!(c)
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval {
            p,
            e,
            modulus,
            n,
            x,
            a,
            format: _,
            out,
        } => {
            let ctx = build_field(p, e, modulus.as_ref())?;
            let n = parse_index(&n)?;
            let x = parse_elem(&ctx, &x)?;
            let a = match a {
                Some(s) => parse_elem(&ctx, &s)?,
                None => ctx.one(),
            };
            let value = rdp_eval_param(&ctx, &n, &a, &x);
            let mut w = writer(out.as_ref())?;
            writeln!(w, "{value}")?;
            Ok(())
        }
        Command::Coeffs {
            n,
            kind,
            p,
            format,
            out,
        } => cmd_coeffs(&n, &kind, p, format, out.as_ref()),
        Command::Scan {
            p,
            e,
            modulus,
            n_max,
            format,
            out,
        } => cmd_scan(
            p,
            e,
            modulus.as_ref(),
            n_max.as_deref(),
            format,
            out.as_ref(),
        ),
        Command::Moments {
            p,
            e,
            modulus,
            convention,
            emit,
            format,
            out,
        } => cmd_moments(
            p,
            e,
            modulus.as_ref(),
            convention.into(),
            emit,
            format,
            out.as_ref(),
        ),
        Command::Verify => cmd_verify(),
    }
}

fn cmd_coeffs(
    n: &str,
    kind: &str,
    p: Option<u64>,
    format: Option<Format>,
    out: Option<&PathBuf>,
) -> Result<()> {
    let n = parse_index(n)?
        .to_u64()
        .ok_or_else(|| Error::Usage("coefficient index too large".into()))?;
    let (coeffs, kind_json) = if kind == "aux" {
        (aux_poly(n)?.coeffs, json!("aux"))
    } else {
        let k: u8 = kind
            .parse()
            .map_err(|_| Error::Usage(format!("bad kind '{kind}': expected 0..3 or 'aux'")))?;
        (rdp_coeffs_exact(n, k)?, json!(k))
    };
    let mut w = writer(out)?;
    match (format, p) {
        (None, None) => {
            let body: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            writeln!(w, "[{}]", body.join(","))?;
        }
        (None, Some(p)) => {
            let body: Vec<String> = coeffs
                .iter()
                .map(|c| bigint_mod_p(c, p).to_string())
                .collect();
            writeln!(w, "[{}]", body.join(","))?;
        }
        (Some(Format::Json), maybe_p) => {
            let record = match maybe_p {
                None => json!({
                    "ring": "Z",
                    "kind": kind_json,
                    "n": n,
                    "coeffs": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                }),
                Some(p) => json!({
                    "ring": "Fp",
                    "p": p,
                    "kind": kind_json,
                    "n": n,
                    "coeffs": coeffs.iter().map(|c| bigint_mod_p(c, p)).collect::<Vec<_>>(),
                }),
            };
            writeln!(w, "{record}")?;
        }
        (Some(Format::Csv), maybe_p) => {
            let mut cw = csv::Writer::from_writer(w);
            cw.write_record(["degree", "coeff"])?;
            for (i, c) in coeffs.iter().enumerate() {
                let rendered = match maybe_p {
                    None => c.to_string(),
                    Some(p) => bigint_mod_p(c, p).to_string(),
                };
                cw.write_record([i.to_string(), rendered])?;
            }
            cw.flush()?;
        }
    }
    Ok(())
}

fn cmd_scan(
    p: u64,
    e: usize,
    modulus: Option<&String>,
    n_max: Option<&str>,
    format: Format,
    out: Option<&PathBuf>,
) -> Result<()> {
    let ctx = build_field(p, e, modulus)?;
    let q = ctx.order();
    let n_hi = match n_max {
        Some(s) => parse_index(s)?
            .to_u64()
            .ok_or_else(|| Error::Usage("scan bound too large".into()))?,
        None => q * q - 1,
    };
    let quad = QuadExtCtx::new(&ctx);
    let reports = pp_scan(&quad, 0, n_hi)?;
    let w = writer(out)?;
    match format {
        Format::Csv => {
            let mut cw = csv::Writer::from_writer(w);
            cw.write_record([
                "q",
                "n",
                "direct",
                "hermite",
                "mod6",
                "two_to_one",
                "aux_equiv",
            ])?;
            for r in &reports {
                cw.write_record([
                    r.q.to_string(),
                    r.n.to_string(),
                    r.direct.to_string(),
                    r.hermite.to_string(),
                    r.mod6.to_string(),
                    r.two_to_one.to_string(),
                    r.aux_equiv.map(|b| b.to_string()).unwrap_or_default(),
                ])?;
            }
            cw.flush()?;
        }
        Format::Json => {
            let mut w = w;
            let field = ctx.spec_string();
            for r in &reports {
                let record = json!({
                    "field": field,
                    "q": r.q,
                    "n": r.n,
                    "direct": r.direct,
                    "hermite": r.hermite,
                    "mod6": r.mod6,
                    "two_to_one": r.two_to_one,
                    "aux_equiv": r.aux_equiv,
                    "values": r.values.iter().map(elem_json).collect::<Vec<_>>(),
                });
                writeln!(w, "{record}")?;
            }
        }
    }
    Ok(())
}

fn cmd_moments(
    p: u64,
    e: usize,
    modulus: Option<&String>,
    convention: Convention,
    emit: MomentEmit,
    format: Format,
    out: Option<&PathBuf>,
) -> Result<()> {
    let ctx = build_field(p, e, modulus)?;
    let engine = MomentEngine::new(&ctx)?;
    let (table, divergences) = engine.verify_moments(convention)?;
    let oracle = engine.first_moments_all();
    let field = ctx.spec_string();
    let w = writer(out)?;
    match emit {
        MomentEmit::Table => {
            let rows = (1..(table.q * table.q) as usize).map(|n| {
                let a = &table.a[n];
                let d = &table.d[n];
                let o = &oracle[n];
                let matches = ctx.from_u64(a.coeffs()[0]) == *o;
                (n, a, d, o, matches)
            });
            match format {
                Format::Csv => {
                    let mut cw = csv::Writer::from_writer(w);
                    cw.write_record(["n", "a_n", "d_n", "oracle", "match"])?;
                    for (n, a, d, o, m) in rows {
                        cw.write_record([
                            n.to_string(),
                            a.to_string(),
                            d.to_string(),
                            o.to_string(),
                            m.to_string(),
                        ])?;
                    }
                    cw.flush()?;
                }
                Format::Json => {
                    let mut w = w;
                    for (n, a, d, o, m) in rows {
                        let record = json!({
                            "field": field,
                            "convention": convention.to_string(),
                            "n": n,
                            "a_n": elem_json(a),
                            "d_n": elem_json(d),
                            "oracle": elem_json(o),
                            "match": m,
                        });
                        writeln!(w, "{record}")?;
                    }
                }
            }
        }
        MomentEmit::Divergences => match format {
            Format::Csv => {
                let mut cw = csv::Writer::from_writer(w);
                cw.write_record(["n", "recurrence", "oracle"])?;
                for d in &divergences {
                    cw.write_record([
                        d.n.to_string(),
                        d.recurrence.to_string(),
                        d.oracle.to_string(),
                    ])?;
                }
                cw.flush()?;
            }
            Format::Json => {
                let mut w = w;
                for d in &divergences {
                    let record = json!({
                        "field": field,
                        "convention": convention.to_string(),
                        "n": d.n,
                        "recurrence": elem_json(&d.recurrence),
                        "oracle": elem_json(&d.oracle),
                    });
                    writeln!(w, "{record}")?;
                }
            }
        },
    }
    if convention == Convention::Corrected && !divergences.is_empty() {
        return Err(Error::InternalInconsistency(format!(
            "corrected convention diverged from the oracle at n={} (and {} more)",
            divergences[0].n,
            divergences.len() - 1
        )));
    }
    Ok(())
}

fn cmd_verify() -> Result<()> {
    for check in run_all() {
        if check.passed {
            println!("PASS {}: {}", check.name, check.detail);
        } else {
            println!("FAIL {}: {}", check.name, check.detail);
            println!("  repro: {}", check.repro);
            return Err(Error::InternalInconsistency(format!(
                "consistency check '{}' failed",
                check.name
            )));
        }
    }
    println!("ok: all checks passed");
    Ok(())
}

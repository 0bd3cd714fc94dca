//! The `grm` command line: argument parsing, dispatch to the library and
//! document rendering.

mod cache;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::json;

pub use cache::{cached_spectrum, CacheEntry, CacheKey, CachePolicy, SpectrumCache};

use crate::budget::Budget;
use crate::density::{gap_scan_with, min_weight, require_ax, MinWeightMode, TargetValue};
use crate::distributions::{best_approximation, distinguisher_gap, statistical_distance, Distribution};
use crate::error::{GrmError, Result};
use crate::field_poly::{parse_polynomial, FieldParams, Polynomial};
use crate::ratio::{format_ratio, parse_ratio};
use crate::spectrum::{weight_set, CodeParams, EnumerationMode, SpectrumDocument};
use crate::structure::{bias_rank_scan, compress, rank_with, regularize, RankStrategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Human,
}

#[derive(Debug, Parser)]
#[command(name = "grm", version, about = "Weight spectra and polynomial structure over small prime fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = CachePolicy::Use, global = true)]
    pub cache: CachePolicy,
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Step cap for exhaustive searches.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: Option<u64>,
    /// Worker threads for enumeration (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    #[arg(short = 'p', long = "prime")]
    pub p: u32,
    #[arg(short = 'r', long = "order")]
    pub r: u32,
    #[arg(short = 'm', long = "vars")]
    pub m: usize,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(short = 'p', long = "prime")]
    pub p: u32,
    /// Number of variables (default: the largest index in the polynomial).
    #[arg(short = 'm', long = "vars")]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Formula,
    Enumerate,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full weight spectrum of RM_p(r, m).
    Spectrum {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        symmetry_reduced: bool,
    },
    /// Relative weights attained in RM_p(r, m).
    Weightset {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        symmetry_reduced: bool,
    },
    /// Nearest attained relative weight to alpha for m = 1..=max-m.
    Gap {
        #[arg(long)]
        alpha: String,
        #[arg(short = 'p', long = "prime")]
        p: u32,
        #[arg(short = 'r', long = "order")]
        r: u32,
        #[arg(long)]
        max_m: usize,
    },
    /// Divisibility of every weight by p^(ceil(m/r) - 1).
    AxCheck {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Minimum nonzero weight.
    Minweight {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// rank_d of a polynomial.
    Rank {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(short = 'd', long = "factor-degree")]
        d: u32,
        /// Skip the degree-1 shortcut and search subspaces directly.
        #[arg(long)]
        search_only: bool,
    },
    /// Refine a polynomial into a regular factor set.
    Regularize {
        #[command(flatten)]
        poly: PolyArgs,
        /// Threshold as a function of the factor count: `K`, `c` or `c+K`.
        #[arg(long, default_value = "c")]
        t_map: String,
        #[arg(long, default_value_t = 16)]
        max_factors: usize,
    },
    /// Compress a polynomial to a function of few inputs.
    Compress {
        #[command(flatten)]
        poly: PolyArgs,
        /// Error target as a function of c: `a/b` or `a/b^c`.
        #[arg(long, default_value = "1/2^c")]
        error: String,
    },
    /// Best approximation of a distribution on F_p by low-degree polynomials.
    Approx {
        /// Comma-separated masses, e.g. `1/2,1/2,0`.
        #[arg(long)]
        target: String,
        #[arg(short = 'p', long = "prime")]
        p: u32,
        #[arg(short = 'r', long = "order")]
        r_max: u32,
        #[arg(short = 'm', long = "vars")]
        m_max: usize,
    },
    /// Distance to uniform against rank for every degree-r polynomial.
    BiasScan {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Statistical distance between two distributions, optionally with the
    /// distinguishing gap of a subset.
    Distance {
        #[arg(short = 'p', long = "prime")]
        p: u32,
        #[arg(long)]
        d1: String,
        #[arg(long)]
        d2: String,
        /// Comma-separated point indices.
        #[arg(long)]
        subset: Option<String>,
    },
}

/// What a run produced: the exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs with the cache directory taken from `GRM_CACHE`.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_in(args, &SpectrumCache::from_env())
}

pub fn run_in<I, T>(args: I, cache: &SpectrumCache) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    dispatch(&cli, cache)
}

/// Executes a parsed request.
pub fn dispatch(cli: &Cli, cache: &SpectrumCache) -> Output {
    let tabular = matches!(
        cli.command,
        Command::Spectrum { .. } | Command::Weightset { .. } | Command::BiasScan { .. }
    );
    if cli.common.format == Format::Csv && !tabular {
        return Output {
            code: 2,
            stdout: String::new(),
            stderr: "error: --format csv is only available for spectrum, weightset and bias-scan\n".into(),
        };
    }
    let doc = match execute(cli, cache) {
        Ok(doc) => doc,
        Err(e) => {
            let body = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            return Output {
                code: exit_code(&e),
                stdout: pretty(&body),
                stderr: format!("error: {e}\n"),
            };
        }
    };
    match &cli.common.out {
        Some(path) => match write_atomic(path, &doc) {
            Ok(()) => Output { code: 0, stdout: String::new(), stderr: String::new() },
            Err(e) => Output {
                code: 1,
                stdout: pretty(&json!({"error": {"kind": e.kind(), "message": e.to_string()}})),
                stderr: format!("error: {e}\n"),
            },
        },
        None => Output { code: 0, stdout: doc, stderr: String::new() },
    }
}

/// Malformed request values are usage errors; everything else is a domain
/// error.
fn exit_code(e: &GrmError) -> i32 {
    match e {
        GrmError::Parse { .. }
        | GrmError::InvalidRational(_)
        | GrmError::InvalidTarget(_)
        | GrmError::InvalidArgument(_) => 2,
        _ => 1,
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    use std::io::Write;
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| GrmError::Io(e.to_string()))?;
    Ok(())
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents serialize");
    s.push('\n');
    s
}

fn budget_of(common: &Common) -> Budget {
    match common.budget {
        Some(ops) => Budget::with_ops(ops),
        None => Budget::default(),
    }
}

fn workers_of(common: &Common) -> usize {
    match common.workers {
        Some(w) => w as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    }
}

fn mode_of(reduced: bool) -> EnumerationMode {
    if reduced {
        EnumerationMode::SymmetryReduced
    } else {
        EnumerationMode::Full
    }
}

/// Largest `k` with `xk` in the text, so `-m` can be omitted.
fn max_variable(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(k) = text[start..j].parse::<usize>() {
                best = best.max(k);
            }
            i = j.max(i + 1);
        } else {
            i += 1;
        }
    }
    best
}

fn parse_poly(args: &PolyArgs) -> Result<Polynomial> {
    let m = args.m.unwrap_or_else(|| max_variable(&args.poly));
    parse_polynomial(&args.poly, args.p, m)
}

/// `K`, `c` or `c+K`.
fn parse_t_map(text: &str) -> Result<(u64, u64)> {
    let bad = || GrmError::InvalidArgument(format!("threshold map {text:?}: expected K, c or c+K"));
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t == "c" {
        return Ok((1, 0));
    }
    if let Some(k) = t.strip_prefix("c+") {
        return Ok((1, k.parse().map_err(|_| bad())?));
    }
    Ok((0, t.parse().map_err(|_| bad())?))
}

/// `a/b` (constant) or `a/b^c` (the c-th power).
fn parse_e_map(text: &str) -> Result<(BigRational, bool)> {
    let t = text.trim();
    match t.strip_suffix("^c") {
        Some(base) => Ok((parse_ratio(base)?, true)),
        None => Ok((parse_ratio(t)?, false)),
    }
}

fn parse_masses(text: &str) -> Result<Vec<BigRational>> {
    text.split(',').map(parse_ratio).collect()
}

fn parse_distribution(p: u32, text: &str) -> Result<Distribution> {
    let field = FieldParams::new(p)?;
    let masses = parse_masses(text)?;
    let mut c = 0;
    let mut size = 1usize;
    while size < masses.len() {
        size *= field.p() as usize;
        c += 1;
    }
    if size != masses.len() {
        return Err(GrmError::InvalidArgument(format!(
            "{} masses is not a power of {p}",
            masses.len()
        )));
    }
    Distribution::new(p, c, masses)
}

fn execute(cli: &Cli, cache: &SpectrumCache) -> Result<String> {
    let common = &cli.common;
    let budget = budget_of(common);
    let workers = workers_of(common);
    let policy = common.cache;
    let spectrum_of = |params: CodeParams, mode: EnumerationMode| {
        cached_spectrum(cache, policy, params, mode, &budget, workers)
    };
    match &cli.command {
        Command::Spectrum { code, symmetry_reduced } => {
            let params = CodeParams::new(code.p, code.r, code.m)?;
            let s = spectrum_of(params, mode_of(*symmetry_reduced))?;
            let doc = SpectrumDocument::from(&s);
            Ok(match common.format {
                Format::Json => pretty(&doc),
                Format::Csv => {
                    let mut out = String::from("weight,count\n");
                    for (w, c) in &doc.counts {
                        let _ = writeln!(out, "{w},{c}");
                    }
                    out
                }
                Format::Human => {
                    let mut out = format!(
                        "RM_{}({}, {}): dimension {}, {} enumeration\n",
                        doc.p,
                        doc.r,
                        doc.m,
                        doc.dim,
                        doc.mode.as_str()
                    );
                    for (w, c) in &doc.counts {
                        let _ = writeln!(out, "  weight {w:>6}: {c}");
                    }
                    out
                }
            })
        }
        Command::Weightset { code, symmetry_reduced } => {
            let params = CodeParams::new(code.p, code.r, code.m)?;
            let s = spectrum_of(params, mode_of(*symmetry_reduced))?;
            let ws = weight_set(&s);
            Ok(match common.format {
                Format::Json => pretty(&json!({
                    "p": code.p,
                    "r": code.r,
                    "m": code.m,
                    "mode": s.mode,
                    "weights": ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    let mut out = String::from("weight,relative_weight\n");
                    for (w, q) in s.weights().zip(&ws) {
                        let _ = writeln!(out, "{w},{q}");
                    }
                    out
                }
                Format::Human => {
                    let list: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                    format!("W_{}({}, {}) = {{{}}}\n", code.p, code.r, code.m, list.join(", "))
                }
            })
        }
        Command::Gap { alpha, p, r, max_m } => {
            let alpha = TargetValue::parse(alpha)?;
            let report = gap_scan_with(&alpha, *p, *r, *max_m, |params| {
                spectrum_of(params, EnumerationMode::Full)
            })?;
            let doc = report.document();
            Ok(match common.format {
                Format::Human => {
                    let mut out = format!("gap around {} in W_{}({}, m)\n", doc.alpha, doc.p, doc.r);
                    for rec in &doc.per_m {
                        let _ = writeln!(out, "  m = {}: nearest {} at distance {}", rec.m, rec.nearest, rec.distance);
                    }
                    let _ = writeln!(
                        out,
                        "  overall {} (attained: {}, complete: {})",
                        doc.overall_gap.as_deref().unwrap_or("none"),
                        doc.attained,
                        doc.complete
                    );
                    out
                }
                _ => pretty(&doc),
            })
        }
        Command::AxCheck { code } => {
            let params = CodeParams::new(code.p, code.r, code.m)?;
            let s = spectrum_of(params, EnumerationMode::Full)?;
            let rep = require_ax(&s)?;
            Ok(pretty(&json!({
                "p": code.p,
                "r": code.r,
                "m": code.m,
                "ok": rep.ok,
                "divisor": rep.divisor.to_string(),
                "violations": rep.violations,
            })))
        }
        Command::Minweight { code, method } => {
            let params = CodeParams::new(code.p, code.r, code.m)?;
            let w = match method {
                Method::Formula => min_weight(params, MinWeightMode::Formula, &budget, workers)?,
                Method::Enumerate => {
                    if code.r == 0 {
                        return Err(GrmError::InvalidOrder("minimum weight needs r >= 1".into()));
                    }
                    spectrum_of(params, EnumerationMode::Full)?
                        .min_nonzero_weight()
                        .ok_or_else(|| GrmError::Internal("code has no nonzero codeword".into()))?
                }
            };
            let method = match method {
                Method::Formula => "formula",
                Method::Enumerate => "enumerate",
            };
            Ok(pretty(&json!({
                "p": code.p,
                "r": code.r,
                "m": code.m,
                "method": method,
                "min_weight": w,
            })))
        }
        Command::Rank { poly, d, search_only } => {
            let f = parse_poly(poly)?;
            let strategy = if *search_only {
                RankStrategy::SearchOnly
            } else {
                RankStrategy::Auto
            };
            Ok(pretty(&rank_with(&f, *d, strategy, &budget)?))
        }
        Command::Regularize { poly, t_map, max_factors } => {
            let f = parse_poly(poly)?;
            let (slope, offset) = parse_t_map(t_map)?;
            let t = move |c: usize| slope * c as u64 + offset;
            Ok(pretty(&regularize(&f, &t, *max_factors, &budget)?))
        }
        Command::Compress { poly, error } => {
            let f = parse_poly(poly)?;
            let (base, power) = parse_e_map(error)?;
            let e_map = move |c: usize| -> BigRational {
                if power {
                    let mut acc = BigRational::one();
                    for _ in 0..c {
                        acc *= &base;
                    }
                    acc
                } else {
                    base.clone()
                }
            };
            Ok(pretty(&compress(&f, &e_map, &budget)?.document()))
        }
        Command::Approx { target, p, r_max, m_max } => {
            let target = parse_distribution(*p, target)?;
            Ok(pretty(&best_approximation(&target, *r_max, *m_max, &budget)?.document()))
        }
        Command::BiasScan { code } => {
            let scan = bias_rank_scan(code.p, code.r, code.m, &budget)?;
            let doc = scan.document();
            Ok(match common.format {
                Format::Csv => {
                    let mut out = String::from("distance,rank,count\n");
                    for row in &doc.rows {
                        let _ = writeln!(out, "{},{},{}", row.distance, row.rank, row.count);
                    }
                    out
                }
                Format::Human => {
                    let mut out = format!("bias scan over degree-{} polynomials, p = {}, m = {}\n", doc.r, doc.p, doc.m);
                    for row in &doc.rows {
                        let _ = writeln!(out, "  distance {:>10}  rank {:>8}  x{}", row.distance, row.rank, row.count);
                    }
                    out
                }
                Format::Json => pretty(&doc),
            })
        }
        Command::Distance { p, d1, d2, subset } => {
            let a = parse_distribution(*p, d1)?;
            let b = parse_distribution(*p, d2)?;
            let dist = statistical_distance(&a, &b)?;
            let mut doc = json!({ "distance": format_ratio(&dist) });
            if let Some(s) = subset {
                let members = s
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| GrmError::InvalidArgument(format!("bad subset element {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let (gap, ok) = distinguisher_gap(&a, &b, &members)?;
                doc["gap"] = json!(format_ratio(&gap));
                doc["bound_ok"] = json!(ok);
            }
            Ok(pretty(&doc))
        }
    }
}

//! `hodgerees`: compute the splitting defect α and dimension-table reports
//! for mixed Hodge structures given as JSON documents, run the randomized
//! property suite, evaluate punctured-curve configurations, and scan the
//! four-point moduli rectangle.
//!
//! Exit codes: 0 success, 1 usage error, 2 parse/validation error,
//! 3 property failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hodgerees::curves::{
    analyze_genus0, analyze_genus1, scan_m04, scan_to_csv, Genus0Config, Genus0Report,
    Genus1Config, Genus1Report, P1Point,
};
use hodgerees::mhs::MixedHodgeStructure;
use hodgerees::rees::chern_rees_p2;
use hodgerees::scalar::Scalar;
use hodgerees::verify::run_verify;
use hodgerees::{set_rank_tolerance, C64};

use hodgerees_cli::document::{AnyMhs, MhsDocument};

#[derive(Parser)]
#[command(
    name = "hodgerees",
    version,
    about = "Splitting defects of mixed Hodge structures and punctured-curve periods",
    after_help = "Exit codes: 0 success, 1 usage, 2 parse/validation, 3 property failure.\n\
                  The HODGEREES_TOL environment variable overrides the default rank\n\
                  tolerance (1e-9); an explicit --tol flag or document tolerance field\n\
                  takes precedence over it."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print α of the structure in a JSON document.
    Alpha {
        /// Path to the document.
        path: PathBuf,
    },
    /// Print the dimension tables, bigrading, and α for a JSON document.
    Report {
        /// Path to the document.
        path: PathBuf,
    },
    /// Run the randomized property suite over seeded instances.
    Verify {
        /// RNG seed; each case derives its own stream, so results are
        /// reproducible per (seed, case) pair.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random cases.
        #[arg(long, default_value_t = 200)]
        cases: u64,
        /// Worker threads (0 = all available). Output is independent of
        /// the worker count.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Analyze the projective line with punctures and identified pairs.
    Curve0 {
        /// Comma-separated punctures; "inf" is the point at infinity.
        #[arg(long, allow_hyphen_values = true)]
        punctures: String,
        /// Comma-separated identified pairs "P:Q" (each point a complex
        /// literal or "inf").
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        pairs: String,
        /// Rank tolerance for this invocation.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Analyze the torus C/(Z + Z tau) with punctures and identified pairs.
    Curve1 {
        /// Lattice parameter with positive imaginary part, e.g. "i" or
        /// "0.5+2i".
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        /// Comma-separated punctures (complex literals).
        #[arg(long, allow_hyphen_values = true)]
        punctures: String,
        /// Comma-separated identified pairs "P:Q".
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        pairs: String,
        /// Rank tolerance for this invocation.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Scan the four-point parameter Q over a grid and write a CSV file.
    #[command(name = "scan-m04")]
    ScanM04 {
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        re_min: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        re_max: f64,
        #[arg(long, default_value_t = -1.5, allow_negative_numbers = true)]
        im_min: f64,
        #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
        im_max: f64,
        /// Grid points per axis.
        #[arg(long, default_value_t = 41)]
        steps: usize,
        /// Output CSV path.
        #[arg(long, default_value = "m04_scan.csv")]
        out: PathBuf,
        /// Rank tolerance for this invocation.
        #[arg(long)]
        tol: Option<f64>,
        /// Worker threads (0 = all available). Output is independent of
        /// the worker count.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

/// A command failure carrying its exit code.
enum Failure {
    /// Malformed flags or literals (exit 1).
    Usage(String),
    /// Unreadable/invalid input data or unwritable output (exit 2).
    Input(String),
    /// A verified property failed (exit 3).
    Property(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Property(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Property(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Alpha { path } => cmd_alpha(&path),
        Command::Report { path } => cmd_report(&path),
        Command::Verify { seed, cases, workers } => cmd_verify(seed, cases, workers),
        Command::Curve0 { punctures, pairs, tol } => cmd_curve0(&punctures, &pairs, tol),
        Command::Curve1 { tau, punctures, pairs, tol } => {
            cmd_curve1(&tau, &punctures, &pairs, tol)
        }
        Command::ScanM04 { re_min, re_max, im_min, im_max, steps, out, tol, workers } => {
            cmd_scan(re_min, re_max, im_min, im_max, steps, &out, tol, workers)
        }
    }
}

/// Install the effective rank tolerance: an explicit `--tol` flag wins, then
/// a document `tolerance` field, then the `HODGEREES_TOL` environment
/// variable; otherwise the default stays in place.
fn resolve_tolerance(flag: Option<f64>, doc: Option<f64>) -> Result<(), Failure> {
    let env = match std::env::var("HODGEREES_TOL") {
        Ok(s) => Some(s.parse::<f64>().map_err(|_| {
            Failure::Usage(format!("invalid HODGEREES_TOL value {s:?}: expected a number"))
        })?),
        Err(_) => None,
    };
    if let Some(t) = flag.or(doc).or(env) {
        if !(t.is_finite() && t > 0.0) {
            return Err(Failure::Usage(format!(
                "tolerance must be a positive finite number, got {t}"
            )));
        }
        set_rank_tolerance(t);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// alpha / report
// ---------------------------------------------------------------------------

fn load_structure(path: &Path) -> Result<(AnyMhs, &'static str), Failure> {
    let doc = MhsDocument::from_path(path).map_err(Failure::Input)?;
    resolve_tolerance(None, doc.tolerance)?;
    let structure = doc.to_structure().map_err(Failure::Input)?;
    Ok((structure, doc.field.name()))
}

fn cmd_alpha(path: &Path) -> Result<(), Failure> {
    let (structure, _) = load_structure(path)?;
    let alpha = match &structure {
        AnyMhs::Exact(h) => h.alpha(),
        AnyMhs::Float(h) => h.alpha(),
    };
    println!("{alpha}");
    Ok(())
}

fn cmd_report(path: &Path) -> Result<(), Failure> {
    let (structure, field) = load_structure(path)?;
    let text = match &structure {
        AnyMhs::Exact(h) => render_report(h, field),
        AnyMhs::Float(h) => render_report(h, field),
    };
    print!("{text}");
    Ok(())
}

/// Render the dimension tables, canonical bigrading, and Chern cross-check
/// of a validated structure. All maps iterate in key order, so the output
/// is byte-identical across runs.
fn render_report<K: Scalar>(h: &MixedHodgeStructure<K>, field: &str) -> String {
    let numbers = h.hodge_numbers();
    let splitting = h.deligne_splitting();
    let alpha = h.alpha();
    let chern = chern_rees_p2(&h.weight_avatar(), h.hodge(), &h.conj_hodge());
    let minus_ch2 = -chern.ch2w4;

    let mut out = String::new();
    writeln!(out, "field: {field}").unwrap();
    writeln!(out, "dim: {}", h.ambient_dim()).unwrap();
    writeln!(out, "R-split: {}, alpha: {}", h.is_r_split(), alpha).unwrap();

    writeln!(out, "\nh^{{p,q}} (Hodge numbers of the weight-graded pieces):").unwrap();
    if numbers.h.is_empty() {
        writeln!(out, "  (none)").unwrap();
    }
    for (&(p, q), &d) in &numbers.h {
        writeln!(out, "  h^{{{p},{q}}} = {d}").unwrap();
    }

    writeln!(out, "\nt^{{p,q}} (bigraded dimensions of (F, conj F) on the ambient space):")
        .unwrap();
    if numbers.t.is_empty() {
        writeln!(out, "  (none)").unwrap();
    }
    for (&(p, q), &d) in &numbers.t {
        writeln!(out, "  t^{{{p},{q}}} = {d}").unwrap();
    }

    writeln!(out, "\nf^{{p,q}} = dim(F^p ∩ conj(F)^q):").unwrap();
    if numbers.f.is_empty() {
        writeln!(out, "  (none)").unwrap();
    }
    for (&(p, q), &d) in &numbers.f {
        writeln!(out, "  f^{{{p},{q}}} = {d}").unwrap();
    }

    writeln!(out, "\ndim I^{{p,q}} (canonical bigrading):").unwrap();
    if splitting.pieces.is_empty() {
        writeln!(out, "  (none)").unwrap();
    }
    for (&(p, q), piece) in &splitting.pieces {
        writeln!(out, "  I^{{{p},{q}}}: {}", piece.dim()).unwrap();
    }

    let consistent =
        chern.c1w2 == 0 && minus_ch2.is_integer() && minus_ch2.to_integer() == alpha;
    writeln!(
        out,
        "\nc2 == alpha: {consistent} (c1 w2 coefficient = {}, -ch2 w4 coefficient = {})",
        chern.c1w2, minus_ch2
    )
    .unwrap();
    out
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(seed: u64, cases: u64, workers: usize) -> Result<(), Failure> {
    let report = run_verify(seed, cases, workers);
    for (case, msg) in &report.failures {
        println!("case {case}: {msg}");
    }
    println!("verify: seed={seed} cases={} failures={}", report.cases, report.failures.len());
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Property(format!(
            "{} of {} cases failed; replay with --seed {seed} --cases {cases}",
            report.failures.len(),
            report.cases
        )))
    }
}

// ---------------------------------------------------------------------------
// curve commands
// ---------------------------------------------------------------------------

/// Parse a complex literal: `2`, `-1.5`, `i`, `-i`, `2i`, `0.5+0.7i`,
/// `1e-3-2.5i`. Whitespace is ignored.
fn parse_complex(s: &str) -> Result<C64, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty complex literal".into());
    }
    let parse_real = |t: &str| -> Result<f64, String> {
        let v: f64 = t.parse().map_err(|_| format!("invalid complex literal {s:?}"))?;
        if !v.is_finite() {
            return Err(format!("non-finite value in complex literal {s:?}"));
        }
        Ok(v)
    };
    let Some(body) = compact.strip_suffix('i') else {
        return Ok(C64::new(parse_real(&compact)?, 0.0));
    };
    // Imaginary part present: split at the last sign that is not a leading
    // sign and not an exponent sign.
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in 1..bytes.len() {
        if (bytes[idx] == b'+' || bytes[idx] == b'-')
            && !matches!(bytes[idx - 1], b'e' | b'E')
        {
            split = Some(idx);
        }
    }
    match split {
        Some(idx) => {
            let re = parse_real(&body[..idx])?;
            let sign = if bytes[idx] == b'-' { -1.0 } else { 1.0 };
            let mag_str = &body[idx + 1..];
            let mag = if mag_str.is_empty() { 1.0 } else { parse_real(mag_str)? };
            Ok(C64::new(re, sign * mag))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => parse_real(body)?,
            };
            Ok(C64::new(0.0, im))
        }
    }
}

/// Parse a point of the projective line: a complex literal or `inf`.
fn parse_p1_point(s: &str) -> Result<P1Point, String> {
    if s.trim().eq_ignore_ascii_case("inf") {
        Ok(P1Point::Infinity)
    } else {
        parse_complex(s).map(P1Point::from)
    }
}

/// Parse a comma-separated list; an empty string is an empty list.
fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(f).collect()
}

/// Parse a comma-separated list of `P:Q` pairs.
fn parse_pairs<T>(
    s: &str,
    f: impl Fn(&str) -> Result<T, String>,
) -> Result<Vec<(T, T)>, String> {
    parse_list(s, |item| {
        let (p, q) = item
            .split_once(':')
            .ok_or_else(|| format!("pair {item:?} must have the form P:Q"))?;
        Ok((f(p)?, f(q)?))
    })
}

fn cmd_curve0(punctures: &str, pairs: &str, tol: Option<f64>) -> Result<(), Failure> {
    resolve_tolerance(tol, None)?;
    let punctures = parse_list(punctures, parse_p1_point).map_err(Failure::Usage)?;
    let pairs = parse_pairs(pairs, parse_p1_point).map_err(Failure::Usage)?;
    let cfg = Genus0Config::new(punctures, pairs).map_err(|e| Failure::Input(e.to_string()))?;
    let report = analyze_genus0(&cfg);
    print!("{}", render_genus0(&cfg, &report));
    Ok(())
}

fn render_genus0(cfg: &Genus0Config, r: &Genus0Report) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "genus 0: m = {} punctures, n = {} identified pairs",
        cfg.num_punctures(),
        cfg.num_pairs()
    )
    .unwrap();
    writeln!(out, "dim H^1 = {}, h^{{0,0}} = {}, h^{{1,1}} = {}", r.dim_h1, r.h00, r.h11)
        .unwrap();
    writeln!(
        out,
        "period matrix ({} x {}; {} residue columns + {} log columns):",
        r.matrix.rows(),
        r.matrix.cols(),
        r.matrix.residue_cols,
        r.matrix.log_cols
    )
    .unwrap();
    write!(out, "{}", r.matrix).unwrap();
    writeln!(out, "t^{{1,1}}: rowwise = {}, full stacked = {}", r.t11_rowwise, r.t11_full)
        .unwrap();
    writeln!(
        out,
        "alpha_1: criterion = {}, row-rank oracle = {}, full-rank bound = {}",
        r.alpha1_proposition, r.alpha1_rowwise, r.alpha1_full
    )
    .unwrap();
    writeln!(out, "methods agree: {}", r.methods_agree).unwrap();
    out
}

fn cmd_curve1(tau: &str, punctures: &str, pairs: &str, tol: Option<f64>) -> Result<(), Failure> {
    resolve_tolerance(tol, None)?;
    let tau = parse_complex(tau).map_err(Failure::Usage)?;
    let punctures = parse_list(punctures, parse_complex).map_err(Failure::Usage)?;
    let pairs = parse_pairs(pairs, parse_complex).map_err(Failure::Usage)?;
    let cfg =
        Genus1Config::new(tau, punctures, pairs).map_err(|e| Failure::Input(e.to_string()))?;
    let report = analyze_genus1(&cfg).map_err(|e| Failure::Input(e.to_string()))?;
    print!("{}", render_genus1(&cfg, &report));
    Ok(())
}

fn render_genus1(cfg: &Genus1Config, r: &Genus1Report) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "genus 1: tau = {}, m = {} punctures, n = {} identified pairs",
        hodgerees::curves::format_complex(cfg.tau()),
        cfg.num_punctures(),
        cfg.num_pairs()
    )
    .unwrap();
    writeln!(
        out,
        "period matrix ({} x {}; {} residue/winding columns + {} log columns):",
        r.matrix.rows(),
        r.matrix.cols(),
        r.matrix.residue_cols,
        r.matrix.log_cols
    )
    .unwrap();
    write!(out, "{}", r.matrix).unwrap();
    writeln!(
        out,
        "t^{{1,1}} over theta rows: rowwise = {}; full stacked (dz row included) = {}",
        r.t11_rowwise, r.t11_full
    )
    .unwrap();
    writeln!(
        out,
        "alpha_1: criterion = {}, row-rank oracle = {}",
        r.alpha1_proposition, r.alpha1_rowwise
    )
    .unwrap();
    writeln!(out, "methods agree: {}", r.methods_agree).unwrap();
    out
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
    steps: usize,
    out: &Path,
    tol: Option<f64>,
    workers: usize,
) -> Result<(), Failure> {
    resolve_tolerance(tol, None)?;
    if steps == 0 {
        return Err(Failure::Usage("--steps must be at least 1".into()));
    }
    if !(re_min <= re_max && im_min <= im_max) {
        return Err(Failure::Usage(format!(
            "empty rectangle: re [{re_min}, {re_max}], im [{im_min}, {im_max}]"
        )));
    }
    let points = scan_m04(re_min, re_max, im_min, im_max, steps, workers);
    let csv = scan_to_csv(&points);
    std::fs::write(out, csv)
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", out.display())))?;
    let split = points.iter().filter(|p| p.alpha1 == Some(0)).count();
    let degenerate = points.iter().filter(|p| p.alpha1.is_none()).count();
    let disagreements = points.iter().filter(|p| !p.methods_agree).count();
    println!(
        "wrote {}: {steps} x {steps} grid, {split} split points (alpha_1 = 0), \
         {degenerate} degenerate, {disagreements} method disagreements",
        out.display()
    );
    Ok(())
}

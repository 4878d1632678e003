//! The `wsegre` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure.

mod geometry;
mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{Value as Json, json};

use crate::Rational;
use crate::bounds::{
    GeometryInput, Table1Entry, corollary_coefficient, recommended_k, table1, theorem1_bound, threshold_logk,
    volume_log,
};
use crate::chow::{TotalClass, WeightedSummand, segre_weighted_sum};
use crate::error::{Error, Result};
use crate::jets::{BoundaryData, boundary_coeff, h0_gr_q, rank_gr_e};
use crate::verify::{self, Mutation, Suite};

pub use geometry::{GeometryFile, parse_rational};
pub use render::{Output, Row, rational_json};

pub const SCHEMA: &str = "wsegre/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "wsegre", version, about = "Weighted Segre classes and jet differential volume bounds")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Total Segre class of a weighted direct sum on P^dim.
    Segre(SegreArgs),
    /// Volume of logarithmic jet differentials.
    Volume(VolumeArgs),
    /// Lower bound on the volume of Green-Griffiths jet differentials.
    Bound(BoundArgs),
    /// Threshold on log k past which O(1) on the jet space is big.
    Threshold(ThresholdArgs),
    /// Table of explicit thresholds for n = 4..8.
    Table1,
    /// Graded rank of E^GG_{k,m}.
    Ranks(RanksArgs),
    /// Sections of the graded boundary sheaf Gr Q_{k,m}.
    Boundary(BoundaryArgs),
    /// Run the self-verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SegreArgs {
    #[arg(long)]
    pub dim: usize,
    /// "rank=R,weight=A,segre=1,s1,s2,..." or "rank=R,weight=A,chern=1,c1,...".
    #[arg(long = "summand", required = true)]
    pub summands: Vec<String>,
}

#[derive(Debug, Args, Default)]
pub struct GeometryArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// (K + D)^n as P/Q.
    #[arg(long = "kd-n", value_parser = parse_rational_arg, allow_hyphen_values = true)]
    pub kd_n: Option<Rational>,
    /// Signed (-D)^n as P/Q.
    #[arg(long = "neg-dn", value_parser = parse_rational_arg, allow_hyphen_values = true)]
    pub neg_dn: Option<Rational>,
    #[arg(long)]
    pub components: Option<u64>,
    /// Flat key = value file providing n, kd_n, neg_dn, components.
    #[arg(long)]
    pub geometry: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long)]
    pub k: u64,
    /// Sweep k..=k_max.
    #[arg(long = "k-max")]
    pub k_max: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long)]
    pub k: u64,
    #[arg(long = "k-max")]
    pub k_max: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "neg-dn", value_parser = parse_rational_arg, allow_hyphen_values = true)]
    pub neg_dn: Option<Rational>,
}

#[derive(Debug, Args)]
pub struct RanksArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: u64,
    #[arg(long = "m-max")]
    pub m_max: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: u64,
    #[arg(long = "m-max")]
    pub m_max: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Reduced ranges.
    #[arg(long)]
    pub fast: bool,
    /// Negative control: corrupt part of the computation before verifying.
    #[arg(long, hide = true)]
    pub mutate: Option<String>,
}

fn parse_rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(&cli, err) {
        Ok((output, code)) => {
            let _ = out.write_all(output.render(cli.format).as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::UnsupportedDimension(_) = e {
                let _ = writeln!(err, "note: explicit thresholds cover n >= 4 only");
            }
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, err: &mut dyn Write) -> Result<(Output, i32)> {
    match &cli.command {
        Command::Segre(a) => segre(a).map(|o| (o, EXIT_OK)),
        Command::Volume(a) => volume(a).map(|o| (o, EXIT_OK)),
        Command::Bound(a) => bound(a, err).map(|o| (o, EXIT_OK)),
        Command::Threshold(a) => threshold(a).map(|o| (o, EXIT_OK)),
        Command::Table1 => Ok((table(), EXIT_OK)),
        Command::Ranks(a) => ranks(a).map(|o| (o, EXIT_OK)),
        Command::Boundary(a) => boundary(a, err).map(|o| (o, EXIT_OK)),
        Command::Verify(a) => run_verify(a, err),
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

struct ResolvedGeometry {
    n: Option<usize>,
    kd_n: Option<Rational>,
    neg_dn: Option<Rational>,
    components: Option<u64>,
}

impl ResolvedGeometry {
    fn n(&self) -> Result<usize> {
        self.n.ok_or_else(|| usage("missing --n (or n in --geometry)"))
    }

    fn kd_n(&self) -> Result<Rational> {
        self.kd_n.clone().ok_or_else(|| usage("missing --kd-n (or kd_n in --geometry)"))
    }

    fn neg_dn(&self) -> Result<Rational> {
        self.neg_dn.clone().ok_or_else(|| usage("missing --neg-dn (or neg_dn in --geometry)"))
    }

    fn components(&self) -> u64 {
        self.components.unwrap_or(1)
    }
}

/// File values first, explicit flags override.
fn resolve(args: &GeometryArgs) -> Result<ResolvedGeometry> {
    let file = match &args.geometry {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            GeometryFile::parse(&text)?
        }
        None => GeometryFile::default(),
    };
    Ok(ResolvedGeometry {
        n: args.n.or(file.n),
        kd_n: args.kd_n.clone().or(file.kd_n),
        neg_dn: args.neg_dn.clone().or(file.neg_dn),
        components: args.components.or(file.components),
    })
}

fn sweep(start: u64, end: Option<u64>, what: &str) -> Result<std::ops::RangeInclusive<u64>> {
    let end = end.unwrap_or(start);
    if end < start {
        return Err(usage(format!("--{what}-max must be at least --{what}")));
    }
    Ok(start..=end)
}

/// `rank=R,weight=A,segre=1,s1,...` (or `chern=`); values may be `P/Q`.
pub fn parse_summand(dim: usize, spec: &str) -> Result<WeightedSummand> {
    let mut rank = None;
    let mut weight = None;
    let mut class: Option<(String, Vec<Rational>)> = None;
    let mut current: Option<String> = None;
    for token in spec.split(',').map(str::trim) {
        if let Some((key, value)) = token.split_once('=') {
            let key = key.trim();
            match key {
                "rank" => rank = Some(value.trim().parse::<u32>().map_err(|_| usage(format!("bad rank '{value}'")))?),
                "weight" => {
                    weight = Some(value.trim().parse::<u64>().map_err(|_| usage(format!("bad weight '{value}'")))?)
                }
                "segre" | "chern" => {
                    if class.is_some() {
                        return Err(usage("give exactly one of segre= or chern="));
                    }
                    class = Some((key.to_string(), vec![parse_rational(value)?]));
                }
                other => return Err(usage(format!("unknown summand key '{other}'"))),
            }
            current = Some(key.to_string());
        } else {
            match (&current, &mut class) {
                (Some(k), Some((ck, coeffs))) if k == ck => coeffs.push(parse_rational(token)?),
                _ => return Err(usage(format!("stray value '{token}' in summand"))),
            }
        }
    }
    let rank = rank.ok_or_else(|| usage("summand needs rank="))?;
    let weight = weight.ok_or_else(|| usage("summand needs weight="))?;
    let (kind, coeffs) = class.ok_or_else(|| usage("summand needs segre= or chern="))?;
    let tc = TotalClass::new(dim, coeffs);
    if kind == "chern" {
        WeightedSummand::from_chern(&tc, rank, weight)
    } else {
        WeightedSummand::new(tc, rank, weight)
    }
}

fn segre(a: &SegreArgs) -> Result<Output> {
    let summands = a.summands.iter().map(|s| parse_summand(a.dim, s)).collect::<Result<Vec<_>>>()?;
    let class = segre_weighted_sum(&summands)?;
    let mut o = Output::new("segre");
    o.input("dim", json!(a.dim));
    o.input(
        "summands",
        Json::Array(
            summands
                .iter()
                .map(|s| {
                    json!({
                        "rank": s.rank(),
                        "weight": s.weight(),
                        "segre": s.segre().coeffs().iter().map(rational_json).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        ),
    );
    o.text_line(class.to_string());
    o.result("class", Json::String(class.to_string()));
    o.result("coeffs", Json::Array(class.coeffs().iter().map(rational_json).collect()));
    o.csv_header(&["degree", "num", "den", "approx"]);
    for (d, c) in class.coeffs().iter().enumerate() {
        o.csv_rational_row(vec![d.to_string()], c);
    }
    Ok(o)
}

fn volume(a: &VolumeArgs) -> Result<Output> {
    let g = resolve(&a.geometry)?;
    let n = g.n()?;
    let kd_n = g.kd_n()?;
    if n == 0 || a.k == 0 {
        return Err(usage("n and k must be at least 1"));
    }
    let mut o = Output::new("volume");
    o.input("n", json!(n));
    o.input("kd_n", rational_json(&kd_n));
    let rows = sweep(a.k, a.k_max, "k")?.map(|k| Row::new(n, k, None, volume_log(n, k, &kd_n))).collect();
    o.rows(rows);
    Ok(o)
}

fn geometry_input(g: &ResolvedGeometry) -> Result<GeometryInput> {
    GeometryInput::new(g.n()?, g.kd_n()?, g.neg_dn()?, g.components())
}

fn warn_all(warnings: &[String], err: &mut dyn Write) {
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
}

fn bound(a: &BoundArgs, err: &mut dyn Write) -> Result<Output> {
    let geom = geometry_input(&resolve(&a.geometry)?)?;
    if a.k == 0 {
        return Err(usage("k must be at least 1"));
    }
    let warnings = geom.warnings();
    warn_all(&warnings, err);
    let mut o = Output::new("bound");
    echo_geometry(&mut o, &geom);
    o.result("canonical_volume", rational_json(&geom.canonical_volume()));
    o.result("warnings", json!(warnings));
    let rows = sweep(a.k, a.k_max, "k")?.map(|k| Row::new(geom.n, k, None, theorem1_bound(&geom, k))).collect();
    o.rows(rows);
    Ok(o)
}

fn echo_geometry(o: &mut Output, g: &GeometryInput) {
    o.input("n", json!(g.n));
    o.input("kd_n", rational_json(&g.kd_n));
    o.input("neg_dn", rational_json(&g.neg_dn));
    o.input("components", json!(g.components));
}

fn threshold(a: &ThresholdArgs) -> Result<Output> {
    let value = threshold_logk(a.n, a.neg_dn.as_ref())?;
    let mut o = Output::new("threshold");
    o.input("n", json!(a.n));
    if let Some(neg) = &a.neg_dn {
        o.input("neg_dn", rational_json(neg));
    }
    let rounded = value.round() as i64;
    o.result("log_k_threshold", json!(value));
    o.result("rounded", json!(rounded));
    if a.n <= 5 {
        o.result("coefficient", json!(corollary_coefficient(a.n).to_string()));
    }
    let k_note = match recommended_k(value) {
        Some(k) => {
            o.result("k_min_approx", json!(k));
            format!("k >= {k} (approximately)")
        }
        None => {
            o.result("k_min_approx", Json::Null);
            "k astronomically large; only log k is reported".to_string()
        }
    };
    o.result("k_note", json!(k_note));
    o.text_line(format!("{rounded}"));
    o.text_line(format!("log k > {value:.6}"));
    o.text_line(k_note);
    o.csv_header(&["n", "log_k_threshold", "rounded"]);
    o.csv_row(vec![a.n.to_string(), format!("{value}"), rounded.to_string()]);
    Ok(o)
}

fn table() -> Output {
    let mut o = Output::new("table1");
    o.csv_header(&["n", "kind", "value", "published", "footnote"]);
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for row in table1() {
        match row.entry {
            Table1Entry::Linear { coefficient, published_coefficient, published_notation, footnote } => {
                let mark = if footnote.is_some() { format!(" [{}]", notes.len() + 1) } else { String::new() };
                o.text_line(format!("n = {}: log k > -gamma + {} * (-(-D)^{}){mark}", row.n, coefficient, row.n));
                rows.push(json!({
                    "n": row.n,
                    "kind": "linear",
                    "coefficient": coefficient.to_string(),
                    "published_coefficient": published_coefficient,
                    "published_notation": published_notation,
                    "footnote": footnote,
                }));
                o.csv_row(vec![
                    row.n.to_string(),
                    "linear".into(),
                    coefficient.to_string(),
                    published_coefficient.to_string(),
                    footnote.clone().unwrap_or_default(),
                ]);
                if let Some(f) = footnote {
                    notes.push(f);
                }
            }
            Table1Entry::Numeric { log_k, rounded, published } => {
                o.text_line(format!("n = {}: log k > {rounded}  ({log_k:.4})", row.n));
                rows.push(json!({
                    "n": row.n,
                    "kind": "numeric",
                    "log_k": log_k,
                    "rounded": rounded,
                    "published": published,
                }));
                o.csv_row(vec![
                    row.n.to_string(),
                    "numeric".into(),
                    rounded.to_string(),
                    published.to_string(),
                    String::new(),
                ]);
            }
        }
    }
    for (i, note) in notes.iter().enumerate() {
        o.text_line(format!("[{}] {note}", i + 1));
    }
    o.result("rows", Json::Array(rows));
    o
}

fn ranks(a: &RanksArgs) -> Result<Output> {
    if a.n == 0 || a.k == 0 {
        return Err(usage("n and k must be at least 1"));
    }
    let mut o = Output::new("ranks");
    o.input("n", json!(a.n));
    o.input("k", json!(a.k));
    let rows = sweep(a.m, a.m_max, "m")?
        .map(|m| Row::new(a.n, a.k as u64, Some(m), Rational::from_integer(BigInt::from(rank_gr_e(a.n, a.k, m)))))
        .collect();
    o.rows(rows);
    Ok(o)
}

fn boundary(a: &BoundaryArgs, err: &mut dyn Write) -> Result<Output> {
    let g = resolve(&a.geometry)?;
    let n = g.n()?;
    let neg_dn = g.neg_dn()?;
    if !neg_dn.is_negative() {
        let _ = writeln!(err, "warning: (-D)^n = {neg_dn} is expected to be negative");
    }
    if a.k == 0 {
        return Err(usage("k must be at least 1"));
    }
    let b = BoundaryData::new(n, -neg_dn.clone(), g.components())?;
    let mut o = Output::new("boundary");
    o.input("n", json!(n));
    o.input("neg_dn", rational_json(&neg_dn));
    o.input("components", json!(b.components()));
    o.input("k", json!(a.k));
    o.result("boundary_coeff", rational_json(&boundary_coeff(n, a.k as u64)));
    let rows = sweep(a.m, a.m_max, "m")?.map(|m| Row::new(n, a.k as u64, Some(m), h0_gr_q(a.k, m, &b))).collect();
    o.rows(rows);
    Ok(o)
}

fn run_verify(a: &VerifyArgs, err: &mut dyn Write) -> Result<(Output, i32)> {
    let suite: Suite = a.suite.parse()?;
    let mutation = a.mutate.as_deref().map(str::parse::<Mutation>).transpose()?;
    let reports = verify::run(suite, verify::Options { fast: a.fast, mutation });
    let passed = reports.iter().all(|r| r.passed());
    let mut o = Output::new("verify");
    o.input("suite", json!(suite.to_string()));
    o.input("fast", json!(a.fast));
    o.verification(&reports);
    if !passed {
        for r in reports.iter().filter(|r| !r.passed()) {
            for c in r.failures().take(3) {
                let _ = writeln!(err, "FAILED {}: {}: {} vs {}", r.name, c.label, c.lhs, c.rhs);
            }
        }
    }
    Ok((o, if passed { EXIT_OK } else { EXIT_VERIFY_FAILED }))
}

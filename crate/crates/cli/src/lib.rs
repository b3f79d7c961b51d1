//! Command-line front end for `planecensus`.
//!
//! [`run`] parses argv and writes to stdout/stderr; [`run_with`] takes the
//! output streams explicitly. Exit codes: 0 success, 1 domain error, 2 usage
//! error.

mod format;
mod verify;

use std::error::Error;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use planecensus::census::{
    census_polynomial_with, increase_rate, CensusConfig, CensusPolynomial, ConflictGraph,
};
use planecensus::charging::{
    self, empirical_report, max_charge, optimize_params, published_basic_params,
    published_refined_params, solve_charge_lp, ChargeParams, Mode,
};
use planecensus::formulas::{self, RateMode, Size};
use planecensus::geometry::{generate, parse_point_set, FormatError, PointSet, PointSetKind};
use planecensus::vings::{ving_statistics, VingConfig};

pub use format::fmt_real;

type DynResult<T> = Result<T, Box<dyn Error>>;

pub const THREADS_ENV: &str = "PLANECENSUS_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum PointFileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
}

pub fn parse_point_file(path: &Path) -> Result<PointSet, PointFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| PointFileError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_point_set(&text).map_err(|source| PointFileError::Format {
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Parser)]
#[command(
    name = "planecensus",
    version,
    about = "Exact plane-graph counts and bounds"
)]
struct Cli {
    /// Worker threads [default: $PLANECENSUS_THREADS, else all cores]
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Significant digits for real numbers.
    #[arg(long, global = true, default_value_t = 6)]
    precision: usize,
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact census pg_m for every m.
    Census(SourceArgs),
    /// Increase rate pg_{m+1}/pg_m and its lower bound.
    Rate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Exhaustive x-ving statistics.
    Xvings {
        #[arg(long)]
        input: PathBuf,
    },
    /// Closed-form evaluators.
    #[command(subcommand)]
    Formulas(FormulaCommand),
    /// Charging-scheme evaluation and optimization.
    #[command(subcommand)]
    Charge(ChargeCommand),
    /// Run verification suites against independent oracles.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 7)]
        nmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    convex: Option<usize>,
    #[arg(long, value_name = "N")]
    chain: Option<usize>,
    #[arg(long, value_name = "N", requires = "seed")]
    random: Option<usize>,
}

#[derive(Debug, Args)]
struct SourceArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    seed: Option<u64>,
}

impl SourceArgs {
    fn load(&self) -> DynResult<PointSet> {
        let s = &self.source;
        let seed = self.seed.unwrap_or(0);
        Ok(match (&s.input, s.convex, s.chain, s.random) {
            (Some(path), ..) => parse_point_file(path)?,
            (_, Some(n), ..) => generate(PointSetKind::Convex, n, seed)?,
            (_, _, Some(n), _) => generate(PointSetKind::ConvexChain, n, seed)?,
            (_, _, _, Some(n)) => generate(PointSetKind::RandomTriangular, n, seed)?,
            _ => unreachable!("clap enforces one source"),
        })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Thm1,
    Flippable,
}

impl From<ModeArg> for RateMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Thm1 => RateMode::Thm1,
            ModeArg::Flippable => RateMode::Flippable,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChargeModeArg {
    Basic,
    Refined,
}

impl From<ChargeModeArg> for Mode {
    fn from(m: ChargeModeArg) -> Self {
        match m {
            ChargeModeArg::Basic => Mode::Basic,
            ChargeModeArg::Refined => Mode::Refined,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Census,
    Pak,
    Chain,
    Vings,
    Charge,
}

/// A point count or "inf".
fn parse_size(s: &str) -> Result<Size, String> {
    match s {
        "inf" | "infinity" => Ok(Size::Infinite),
        _ => s
            .parse::<u64>()
            .map(Size::Finite)
            .map_err(|_| format!("expected a positive integer or \"inf\", got {s:?}")),
    }
}

/// A real, also accepting fractions such as 2/3.
fn parse_real(s: &str) -> Result<f64, String> {
    let bad = || format!("expected a real number or fraction, got {s:?}");
    match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0.0 {
                return Err(bad());
            }
            Ok(a / b)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

#[derive(Debug, Subcommand)]
enum FormulaCommand {
    /// B(c) and the resulting base; the argmax of B without --c.
    #[command(name = "B")]
    B {
        #[arg(long, value_parser = parse_real)]
        c: Option<f64>,
        #[arg(long, default_value_t = 30.0)]
        tr_base: f64,
    },
    /// tilde_f(c, d); the peak over c of tilde_f(c, d_star(c)) with --peak.
    #[command(name = "tilde-f")]
    TildeF {
        #[arg(long, value_parser = parse_real, required_unless_present = "peak")]
        c: Option<f64>,
        #[arg(long, value_parser = parse_real)]
        d: Option<f64>,
        #[arg(long)]
        peak: bool,
    },
    #[command(name = "d-star")]
    DStar {
        #[arg(long, value_parser = parse_real)]
        c: f64,
    },
    #[command(name = "chain-rate")]
    ChainRate {
        #[arg(long, value_parser = parse_real)]
        c: f64,
        #[arg(long, value_parser = parse_size, default_value = "inf")]
        n: Size,
    },
    #[command(name = "rc-lower")]
    RcLower {
        #[arg(long, value_parser = parse_real)]
        c: f64,
        #[arg(long, value_parser = parse_size, default_value = "inf")]
        n: Size,
        #[arg(long, default_value_t = 3)]
        h: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Thm1)]
        mode: ModeArg,
    },
    Eq1 {
        #[arg(long, value_parser = parse_real)]
        alpha: f64,
        #[arg(long, value_parser = parse_real)]
        c: f64,
        #[arg(long, value_parser = parse_real)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Thm1)]
        mode: ModeArg,
    },
    Pak {
        #[arg(long)]
        n: u64,
        /// Diagonal count; all counts when omitted.
        #[arg(long)]
        m: Option<u64>,
    },
    #[command(name = "chain-count")]
    ChainCount {
        #[arg(long)]
        n: u64,
        /// Edge count; all counts when omitted.
        #[arg(long)]
        m: Option<u64>,
    },
    /// Chain rate against the lower bound at c = 2/3, 1, 4/3, 5/3.
    Table1,
}

#[derive(Debug, Subcommand)]
enum ChargeCommand {
    /// Maximum charge for given transfer amounts.
    Eval {
        #[arg(long, value_enum, default_value_t = ChargeModeArg::Basic)]
        mode: ChargeModeArg,
        /// File with c_3..c_{M-1}, one per line.
        #[arg(long, conflicts_with = "published")]
        params: Option<PathBuf>,
        /// Use the published parameters of the chosen mode.
        #[arg(long)]
        published: bool,
        #[arg(long, default_value_t = charging::DEFAULT_EVAL_CAP)]
        cap: usize,
    },
    /// Minimax transfer amounts via an exact linear program.
    Optimize {
        #[arg(long, value_enum, default_value_t = ChargeModeArg::Basic)]
        mode: ChargeModeArg,
        #[arg(long = "M", default_value_t = 11)]
        m_cap: usize,
    },
    /// Exhaustive average x-ving count against the charging bounds.
    Empirical(SourceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    format: Format,
    precision: usize,
    threads: usize,
}

impl Ctx<'_> {
    fn real(&self, x: f64) -> String {
        fmt_real(x, self.precision)
    }

    fn real_json(&self, x: f64) -> Value {
        format::real_json(x, self.precision)
    }

    fn json(&mut self, v: &Value) -> DynResult<()> {
        writeln!(self.out, "{}", serde_json::to_string_pretty(v)?)?;
        Ok(())
    }

    /// Emits `pairs` as text lines, a one-row CSV, or a flat JSON object.
    fn record(&mut self, pairs: &[(&str, Value)]) -> DynResult<()> {
        match self.format {
            Format::Json => {
                let obj: serde_json::Map<String, Value> = pairs
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .collect();
                self.json(&Value::Object(obj))
            }
            Format::Csv => {
                let header: Vec<&str> = pairs.iter().map(|(k, _)| *k).collect();
                let row: Vec<String> = pairs.iter().map(|(_, v)| format::plain(v)).collect();
                writeln!(self.out, "{}", header.join(","))?;
                writeln!(self.out, "{}", row.join(","))?;
                Ok(())
            }
            Format::Text => {
                for (k, v) in pairs {
                    writeln!(self.out, "{k} {}", format::plain(v))?;
                }
                Ok(())
            }
        }
    }
}

fn default_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&t: &usize| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    if cli.precision == 0 || cli.threads == Some(0) {
        let _ = writeln!(err, "error: --precision and --threads must be positive");
        return 2;
    }
    let mut ctx = Ctx {
        out,
        format: if cli.json {
            Format::Json
        } else if cli.csv {
            Format::Csv
        } else {
            Format::Text
        },
        precision: cli.precision,
        threads: cli.threads.unwrap_or_else(default_threads),
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(true) => 0,
        Ok(false) => 1,
        // A closed pipe downstream (e.g. `| head`) is not an error.
        Err(e)
            if e.downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

/// Ok(false) reports a completed run whose checks failed.
fn dispatch(cmd: Command, ctx: &mut Ctx<'_>) -> DynResult<bool> {
    match cmd {
        Command::Census(src) => cmd_census(&src.load()?, ctx)?,
        Command::Rate { input, m } => cmd_rate(&parse_point_file(&input)?, m, ctx)?,
        Command::Xvings { input } => cmd_xvings(&parse_point_file(&input)?, ctx)?,
        Command::Formulas(f) => cmd_formulas(f, ctx)?,
        Command::Charge(c) => cmd_charge(c, ctx)?,
        Command::Verify { suite, nmax, seed } => {
            return verify::run_suites(suite, nmax, seed, ctx.threads, ctx.out);
        }
    }
    Ok(true)
}

fn census_config(threads: usize) -> CensusConfig {
    CensusConfig {
        threads,
        ..CensusConfig::default()
    }
}

fn census_of(s: &PointSet, threads: usize) -> DynResult<CensusPolynomial> {
    let g = ConflictGraph::new(s)?;
    Ok(census_polynomial_with(&g, &census_config(threads))?)
}

fn cmd_census(s: &PointSet, ctx: &mut Ctx<'_>) -> DynResult<()> {
    let p = census_of(s, ctx.threads)?;
    match ctx.format {
        Format::Json => {
            let mut v = p.to_json();
            v["total"] = json!(p.total().to_string());
            v["triangulations"] = json!(p.triangulations().to_string());
            ctx.json(&v)
        }
        Format::Csv => {
            writeln!(ctx.out, "m,count")?;
            for (m, c) in p.coefficients.iter().enumerate() {
                writeln!(ctx.out, "{m},{c}")?;
            }
            Ok(())
        }
        Format::Text => {
            writeln!(ctx.out, "n {}", p.n)?;
            writeln!(ctx.out, "h {}", p.h)?;
            writeln!(ctx.out, "total {}", p.total())?;
            writeln!(ctx.out, "tr {}", p.triangulations())?;
            for (m, c) in p.coefficients.iter().enumerate() {
                writeln!(ctx.out, "pg_{m} {c}")?;
            }
            Ok(())
        }
    }
}

fn cmd_rate(s: &PointSet, m: usize, ctx: &mut Ctx<'_>) -> DynResult<()> {
    let p = census_of(s, ctx.threads)?;
    let rate = increase_rate(&p, m)?;
    let (n, h) = (s.n() as f64, s.h() as f64);
    // Lower bound at c = m / N: ((3 - c) N - h - 3) / (c N + 1).
    let bound = (3.0 * n - m as f64 - h - 3.0) / (m as f64 + 1.0);
    let value = rate.to_f64().unwrap_or(f64::NAN);
    ctx.record(&[
        ("n", json!(s.n())),
        ("h", json!(s.h())),
        ("m", json!(m)),
        ("rate", json!(rate.to_string())),
        ("rate_value", ctx.real_json(value)),
        ("thm1_bound", ctx.real_json(bound)),
        ("meets_bound", json!(value >= bound - 1e-12)),
    ])
}

fn cmd_xvings(s: &PointSet, ctx: &mut Ctx<'_>) -> DynResult<()> {
    let config = VingConfig {
        threads: ctx.threads,
        census: census_config(1),
        ..VingConfig::default()
    };
    let st = ving_statistics(s, &config)?;
    match ctx.format {
        Format::Json => ctx.json(&st.to_json()),
        Format::Csv => {
            writeln!(ctx.out, "degree,vi_total,vx_total")?;
            let top = st
                .vi_histogram
                .keys()
                .chain(st.vx_histogram.keys())
                .max()
                .copied();
            for d in 0..=top.unwrap_or(0) {
                let vi = st
                    .vi_histogram
                    .get(&d)
                    .map_or("0".into(), |c| c.to_string());
                let vx = st
                    .vx_histogram
                    .get(&d)
                    .map_or("0".into(), |c| c.to_string());
                writeln!(ctx.out, "{d},{vi},{vx}")?;
            }
            Ok(())
        }
        Format::Text => {
            let hat = st.hat_vx.to_f64().unwrap_or(f64::NAN);
            writeln!(ctx.out, "n {}", st.n)?;
            writeln!(ctx.out, "h {}", st.h)?;
            writeln!(ctx.out, "pg {}", st.pg)?;
            writeln!(ctx.out, "sum_vx {}", st.sum_vx)?;
            writeln!(ctx.out, "hat_vx {} = {}", st.hat_vx, ctx.real(hat))?;
            let check = &st.identity_check;
            writeln!(
                ctx.out,
                "identity {} = {} {}",
                check.lhs,
                check.rhs,
                if check.equal() { "ok" } else { "MISMATCH" }
            )?;
            for (d, c) in &st.vx_histogram {
                writeln!(ctx.out, "x{d}-vings {c}")?;
            }
            Ok(())
        }
    }
}

fn cmd_formulas(f: FormulaCommand, ctx: &mut Ctx<'_>) -> DynResult<()> {
    let (name, inputs, outputs): (&str, Value, Vec<(&str, Value)>) = match f {
        FormulaCommand::B {
            c: Some(c),
            tr_base,
        } => {
            let r = formulas::thm2_bound(c, tr_base)?;
            (
                "B",
                json!({"c": ctx.real_json(c), "tr_base": ctx.real_json(tr_base)}),
                vec![
                    ("t", ctx.real_json(r.t)),
                    ("B", ctx.real_json(r.b)),
                    ("bound_base", ctx.real_json(r.bound_base)),
                ],
            )
        }
        FormulaCommand::B { c: None, tr_base } => {
            let est = formulas::thm2_argmax();
            (
                "B-argmax",
                json!({"tr_base": ctx.real_json(tr_base)}),
                vec![
                    ("argmax", ctx.real_json(est.argmax)),
                    ("B", ctx.real_json(est.base)),
                    ("bound_base", ctx.real_json(est.base * tr_base)),
                ],
            )
        }
        FormulaCommand::TildeF { peak: true, .. } => {
            let est = formulas::chain_peak();
            (
                "tilde-f-peak",
                json!({}),
                vec![
                    ("argmax", ctx.real_json(est.argmax)),
                    ("base", ctx.real_json(est.base)),
                ],
            )
        }
        FormulaCommand::TildeF { c, d, .. } => {
            let c = c.expect("clap requires --c without --peak");
            let d = match d {
                Some(d) => d,
                None => formulas::d_star(c)?,
            };
            (
                "tilde-f",
                json!({"c": ctx.real_json(c), "d": ctx.real_json(d)}),
                vec![("value", ctx.real_json(formulas::tilde_f(c, d)?))],
            )
        }
        FormulaCommand::DStar { c } => (
            "d-star",
            json!({"c": ctx.real_json(c)}),
            vec![("d", ctx.real_json(formulas::d_star(c)?))],
        ),
        FormulaCommand::ChainRate { c, n } => {
            let r = formulas::chain_rate(c, n)?;
            (
                "chain-rate",
                json!({"c": ctx.real_json(c), "n": size_json(n)}),
                vec![
                    ("type2_rate", ctx.real_json(r.type2_rate)),
                    ("type13_rate", ctx.real_json(r.type13_rate)),
                    ("closed_form", ctx.real_json(r.closed_form)),
                ],
            )
        }
        FormulaCommand::RcLower { c, n, h, mode } => {
            let mode = RateMode::from(mode);
            (
                "rc-lower",
                json!({"c": ctx.real_json(c), "n": size_json(n), "h": h, "mode": mode.name()}),
                vec![("value", ctx.real_json(formulas::rc_lower(c, n, h, mode)?))],
            )
        }
        FormulaCommand::Eq1 {
            alpha,
            c,
            delta,
            mode,
        } => {
            let mode = RateMode::from(mode);
            (
                "eq1",
                json!({
                    "alpha": ctx.real_json(alpha),
                    "c": ctx.real_json(c),
                    "delta": ctx.real_json(delta),
                    "mode": mode.name(),
                }),
                vec![(
                    "value",
                    ctx.real_json(formulas::apply_eq1(alpha, c, delta, mode)?),
                )],
            )
        }
        FormulaCommand::Pak { n, m } => {
            let ms: Vec<u64> = match m {
                Some(m) => vec![m],
                None => (0..=n.saturating_sub(3)).collect(),
            };
            let rows = ms
                .into_iter()
                .map(|m| Ok((m, formulas::pak_count(n, m)?)))
                .collect::<Result<Vec<_>, formulas::FormulaError>>()?;
            return emit_counts(ctx, "pak", "M", n, &rows);
        }
        FormulaCommand::ChainCount { n, m } => {
            let rows = match m {
                Some(m) => vec![(m, formulas::chain_count_exact(n, m)?)],
                None => formulas::chain_census(n)?
                    .into_iter()
                    .enumerate()
                    .map(|(m, c)| (m as u64, c))
                    .collect(),
            };
            return emit_counts(ctx, "chain-count", "m", n, &rows);
        }
        FormulaCommand::Table1 => return emit_table1(ctx),
    };
    match ctx.format {
        Format::Json => {
            let outputs: serde_json::Map<String, Value> = outputs
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            let v = formulas::formula_json(name, inputs, Value::Object(outputs));
            ctx.json(&v)
        }
        _ => ctx.record(&outputs),
    }
}

fn size_json(n: Size) -> Value {
    match n {
        Size::Finite(n) => json!(n),
        Size::Infinite => json!("inf"),
    }
}

fn emit_counts(
    ctx: &mut Ctx<'_>,
    name: &str,
    key: &str,
    n: u64,
    rows: &[(u64, num_bigint::BigUint)],
) -> DynResult<()> {
    match ctx.format {
        Format::Json => {
            let counts: Vec<Value> = rows
                .iter()
                .map(|(m, c)| json!({key: m, "count": c.to_string()}))
                .collect();
            let v = formulas::formula_json(name, json!({"n": n}), json!({"counts": counts}));
            ctx.json(&v)
        }
        Format::Csv => {
            writeln!(ctx.out, "{key},count")?;
            for (m, c) in rows {
                writeln!(ctx.out, "{m},{c}")?;
            }
            Ok(())
        }
        Format::Text => {
            for (m, c) in rows {
                writeln!(ctx.out, "{key}={m} {c}")?;
            }
            Ok(())
        }
    }
}

fn emit_table1(ctx: &mut Ctx<'_>) -> DynResult<()> {
    let rows = formulas::table1(&formulas::TABLE1_C)?;
    if ctx.format == Format::Json {
        let v = formulas::formula_json(
            "table1",
            json!({"c": formulas::TABLE1_C.iter().map(|&c| ctx.real_json(c)).collect::<Vec<_>>()}),
            json!(rows
                .iter()
                .map(|r| json!({
                    "c": ctx.real_json(r.c),
                    "chain_rate": ctx.real_json(r.chain_rate),
                    "thm1_bound": ctx.real_json(r.thm1_bound),
                    "margin": ctx.real_json(r.margin),
                }))
                .collect::<Vec<_>>()),
        );
        return ctx.json(&v);
    }
    writeln!(ctx.out, "c,chain_rate,thm1_bound,margin")?;
    for r in rows {
        writeln!(
            ctx.out,
            "{},{},{},{}",
            ctx.real(r.c),
            ctx.real(r.chain_rate),
            ctx.real(r.thm1_bound),
            ctx.real(r.margin)
        )?;
    }
    Ok(())
}

fn emit_charge_report(ctx: &mut Ctx<'_>, r: &charging::ChargeReport) -> DynResult<()> {
    match ctx.format {
        Format::Json => {
            let mut v = r.to_json();
            v["max_charge"] = ctx.real_json(r.max_charge);
            v["growth_constant"] = ctx.real_json(r.growth_constant);
            v["params"] = json!(r
                .params
                .values()
                .iter()
                .map(|&c| ctx.real_json(c))
                .collect::<Vec<_>>());
            for case in v["per_case"].as_array_mut().into_iter().flatten() {
                for key in ["ch", "redistributed"] {
                    if let Some(x) = case[key].as_f64() {
                        case[key] = ctx.real_json(x);
                    }
                }
            }
            ctx.json(&v)
        }
        Format::Csv => {
            writeln!(ctx.out, "case,i,ch,redistributed")?;
            for c in &r.per_case {
                let ch = c.ch.map_or(String::new(), |x| ctx.real(x));
                writeln!(
                    ctx.out,
                    "{},{},{},{}",
                    c.case,
                    c.i,
                    ch,
                    ctx.real(c.redistributed)
                )?;
            }
            Ok(())
        }
        Format::Text => {
            writeln!(ctx.out, "mode {}", r.mode.name())?;
            writeln!(ctx.out, "M {}", r.params.m_cap())?;
            for (k, c) in r.params.values().iter().enumerate() {
                writeln!(ctx.out, "c{} {}", k + 3, ctx.real(*c))?;
            }
            writeln!(ctx.out, "max_charge {}", ctx.real(r.max_charge))?;
            writeln!(
                ctx.out,
                "binding_case {} (i = {})",
                r.binding_case, r.binding_degree
            )?;
            writeln!(ctx.out, "growth_constant {}", ctx.real(r.growth_constant))?;
            writeln!(ctx.out, "tail_decreasing {}", r.tail_decreasing)?;
            Ok(())
        }
    }
}

fn cmd_charge(c: ChargeCommand, ctx: &mut Ctx<'_>) -> DynResult<()> {
    match c {
        ChargeCommand::Eval {
            mode,
            params,
            published,
            cap,
        } => {
            let mode = Mode::from(mode);
            let p = match (params, published) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    ChargeParams::parse(&text)?
                }
                (None, _) => match mode {
                    Mode::Basic => published_basic_params(),
                    Mode::Refined => published_refined_params(),
                },
            };
            let r = max_charge(&p, mode, cap)?;
            emit_charge_report(ctx, &r)
        }
        ChargeCommand::Optimize { mode, m_cap } => {
            let mode = Mode::from(mode);
            let r = optimize_params(mode, m_cap)?;
            if ctx.format == Format::Text {
                let lp = solve_charge_lp(mode, m_cap, charging::DEFAULT_EVAL_CAP)?;
                writeln!(
                    ctx.out,
                    "lp_optimum {} = {}",
                    lp.value,
                    ctx.real(lp.value.to_f64().unwrap_or(f64::NAN))
                )?;
                writeln!(ctx.out, "lp_rounds {}", lp.rounds)?;
            }
            emit_charge_report(ctx, &r)
        }
        ChargeCommand::Empirical(src) => {
            let s = src.load()?;
            let config = VingConfig {
                threads: ctx.threads,
                census: census_config(1),
                ..VingConfig::default()
            };
            let r = empirical_report(&s, &config)?;
            match ctx.format {
                Format::Json => ctx.json(&r.to_json()),
                Format::Csv => {
                    writeln!(ctx.out, "mode,hat_vx,max_charge,bound,margin,flag")?;
                    let hat = r.hat_vx.to_f64().unwrap_or(f64::NAN);
                    for c in &r.comparisons {
                        writeln!(
                            ctx.out,
                            "{},{},{},{},{},{}",
                            c.mode.name(),
                            ctx.real(hat),
                            ctx.real(c.max_charge),
                            ctx.real(c.bound),
                            ctx.real(c.margin),
                            c.flag()
                        )?;
                    }
                    Ok(())
                }
                Format::Text => {
                    writeln!(ctx.out, "n {}", r.n)?;
                    writeln!(ctx.out, "pg {}", r.pg)?;
                    let hat = r.hat_vx.to_f64().unwrap_or(f64::NAN);
                    writeln!(ctx.out, "hat_vx {} = {}", r.hat_vx, ctx.real(hat))?;
                    for c in &r.comparisons {
                        writeln!(
                            ctx.out,
                            "{} bound {} margin {} {}",
                            c.mode.name(),
                            ctx.real(c.bound),
                            ctx.real(c.margin),
                            c.flag()
                        )?;
                    }
                    Ok(())
                }
            }
        }
    }
}

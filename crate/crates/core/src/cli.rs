//! The `mcf` command line. Data goes to the output stream, diagnostics to the
//! error stream. Exit codes: 0 success, 1 violation, 2 input error,
//! 3 refinement budget exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::convergents::{bound_checks, conv_stream, growth_check, BoundOptions, ConvergentTable, GrowthOptions};
use crate::engine::{check_admissible, Expander, PartialQuotients};
use crate::error::{McfError, Result};
use crate::exact::PrecisionBudget;
use crate::io;
use crate::periodic::{solve_periodic, PeriodicSpec};
use crate::transcendence::{
    build_quasiperiodic, construct_liouville, main1_check, main2_check, verify_liouville, BVariant, CriterionReport,
    EntryRule, LiouvilleSpec,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mcf", version, about = "Exact multidimensional continued fractions")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a tuple of reals, one JSON line per event
    Expand(ExpandArgs),
    /// Print convergents and tilde values
    Convergents(ConvergentsArgs),
    /// Periodic expansions and their cubic fields
    #[command(subcommand)]
    Periodic(PeriodicCmd),
    /// Build quotient sequences meeting a transcendence criterion
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Check admissibility, bounds and criterion hypotheses
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Timing runs
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Args, Debug)]
struct ExpandArgs {
    /// JSON file with the input reals
    #[arg(long)]
    input: PathBuf,
    /// Number of indices to expand
    #[arg(long)]
    steps: usize,
    /// Also emit the complete quotients before each step
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Csv,
    Jsonl,
}

#[derive(Args, Debug)]
struct ConvergentsArgs {
    /// JSON file with the partial quotients
    #[arg(long)]
    pq: PathBuf,
    /// Number of columns to print, starting at index 0
    #[arg(long)]
    depth: usize,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    emit: Emit,
}

#[derive(Subcommand, Debug)]
enum PeriodicCmd {
    /// Recover the cubic minimal polynomials of a periodic expansion
    Solve(SolveArgs),
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Pre-period of the first sequence, comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pre_a: Vec<BigInt>,
    /// Pre-period of the second sequence
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pre_b: Vec<BigInt>,
    /// Period of the first sequence
    #[arg(long, value_delimiter = ',', required = true)]
    per_a: Vec<BigInt>,
    /// Period of the second sequence
    #[arg(long, value_delimiter = ',', required = true)]
    per_b: Vec<BigInt>,
    /// Print the full certificate as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum ConstructCmd {
    /// Liouville-type expansion: large first quotients
    Liouville(LiouvilleArgs),
    /// Quasi-periodic expansion from a repetition schedule
    Quasiperiodic(QuasiArgs),
}

#[derive(Args, Debug)]
struct LiouvilleArgs {
    /// Dimension
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Exponent, as p/q
    #[arg(long, default_value = "1")]
    delta: String,
    /// Rule for coordinates 2..m, repeated once per coordinate
    /// (const:V, cycle:V1,V2,.., explicit:V1,.., random:SEED:LO:HI)
    #[arg(long = "b-rule", required = true)]
    b_rule: Vec<String>,
    /// Integer part of the first coordinate
    #[arg(long, default_value = "0", allow_negative_numbers = true)]
    a0: BigInt,
    /// Last index to construct
    #[arg(long)]
    depth: usize,
}

#[derive(Args, Debug)]
struct QuasiArgs {
    /// JSON schedule: [{"n":..,"r":..,"lambda":..}, ..]
    #[arg(long)]
    schedule: PathBuf,
    /// JSON base rules: ["const:1", "const:1"]
    #[arg(long)]
    base: PathBuf,
    /// Number of columns to build
    #[arg(long)]
    depth: usize,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Admissibility of a quotient sequence
    Admissible(PqArgs),
    /// Numerator, box and tilde bounds
    Bounds(BoundsArgs),
    /// Growth of the denominators
    Growth(GrowthArgs),
    /// Liouville-type domination and approximation witnesses
    Liouville(VerifyLiouvilleArgs),
    /// Quasi-periodic criterion with growing quotients
    Main1(Main1Args),
    /// Quasi-periodic criterion with bounded quotients
    Main2(Main2Args),
}

#[derive(Args, Debug)]
struct PqArgs {
    /// JSON file with the partial quotients
    #[arg(long)]
    pq: PathBuf,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// JSON file with the partial quotients
    #[arg(long)]
    pq: PathBuf,
    /// Integer box N,M for the two coordinates
    #[arg(long = "box", value_delimiter = ',', num_args = 2)]
    box_nm: Option<Vec<BigInt>>,
    /// Last index checked (default: all complete columns)
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Args, Debug)]
struct GrowthArgs {
    /// JSON file with the partial quotients
    #[arg(long)]
    pq: PathBuf,
    /// Exponent d of the hypothesis a_(n+1) < C_n^d
    #[arg(long)]
    d: Option<u32>,
    /// Bound M on all quotients, enabling the upper growth bound
    #[arg(long)]
    eta: Option<BigInt>,
    /// Last index checked (default: as many as the columns allow)
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyLiouvilleArgs {
    /// JSON file with the partial quotients
    #[arg(long)]
    pq: PathBuf,
    /// Exponent, as p/q
    #[arg(long, default_value = "1")]
    delta: String,
    /// Last index checked (default: all complete columns)
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Args, Debug)]
struct Main1Args {
    /// JSON schedule: [{"n":..,"r":..,"lambda":..}, ..]
    #[arg(long)]
    schedule: PathBuf,
    /// JSON base rules, one per coordinate
    #[arg(long)]
    base: PathBuf,
    /// Exponent d of the hypothesis a_(i+1) < C_i^d
    #[arg(long, default_value_t = 1)]
    d: u32,
    /// Constant c in r_k < c n_k, as p/q
    #[arg(long, default_value = "1")]
    c: String,
    /// Last index checked
    #[arg(long)]
    depth: usize,
}

#[derive(Args, Debug)]
struct Main2Args {
    /// JSON schedule: [{"n":..,"r":..,"lambda":..}, ..]
    #[arg(long)]
    schedule: PathBuf,
    /// JSON base rules, one per coordinate
    #[arg(long)]
    base: PathBuf,
    /// Bound M on all quotients
    #[arg(long = "m-bound")]
    m_bound: BigInt,
    /// Bound N on the block lengths
    #[arg(long = "n-bound")]
    n_bound: usize,
    /// Which threshold constant to use
    #[arg(long, value_enum, default_value = "tribonacci")]
    variant: VariantArg,
    /// Last index checked
    #[arg(long)]
    depth: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Tribonacci,
    Psi,
    Psi18,
}

impl From<VariantArg> for BVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Tribonacci => BVariant::Tribonacci,
            VariantArg::Psi => BVariant::Psi,
            VariantArg::Psi18 => BVariant::Psi18,
        }
    }
}

#[derive(Subcommand, Debug)]
enum BenchCmd {
    /// CSV of n, bit length of C_n and elapsed microseconds
    Growth(BenchArgs),
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// JSON file with the partial quotients
    #[arg(long)]
    pq: PathBuf,
    /// Number of rows
    #[arg(long)]
    depth: usize,
    /// Declare a_(n+1) < C_n^d and check the resulting growth bound
    #[arg(long)]
    d: Option<u32>,
}

/// The clap command tree, for help rendering.
pub fn command() -> clap::Command {
    Cli::command()
}

/// Parses `argv` (including the program name) and runs it.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "mcf: {e}");
            EXIT_INPUT
        }
        Err(Failure::Mcf(e)) => {
            let _ = writeln!(err, "mcf: {e}");
            match e {
                McfError::HypothesisViolated { hypothesis, index } => {
                    let _ = emit_json(out, &json!({ "violation": hypothesis, "index": index }));
                    EXIT_VIOLATION
                }
                e if e.is_refinement_failure() => EXIT_BUDGET,
                _ => EXIT_INPUT,
            }
        }
    }
}

enum Failure {
    Mcf(McfError),
    Io(std::io::Error),
}

impl From<McfError> for Failure {
    fn from(e: McfError) -> Self {
        Failure::Mcf(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| McfError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| McfError::input(format!("{}: {e}", path.display())))
}

fn read_pq(path: &Path) -> Result<PartialQuotients> {
    io::pq_from_json(&read_json(path)?)
}

fn emit_json(out: &mut dyn Write, v: &impl Serialize) -> std::io::Result<()> {
    let s = serde_json::to_string_pretty(v).expect("serializable");
    writeln!(out, "{s}")
}

fn emit_line(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(v).expect("serializable"))
}

fn report_exit(out: &mut dyn Write, rep: &CriterionReport) -> CmdResult {
    emit_json(out, rep)?;
    Ok(if rep.holds() { EXIT_OK } else { EXIT_VIOLATION })
}

fn last_index(pq: &PartialQuotients, requested: Option<usize>, extra: usize) -> Result<usize> {
    let avail = pq.depth().checked_sub(1 + extra).ok_or_else(|| McfError::input("not enough complete columns"))?;
    match requested {
        Some(d) if d > avail => Err(McfError::input(format!("depth {d} exceeds the {avail} available"))),
        Some(d) => Ok(d),
        None => Ok(avail),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Expand(a) => expand(a, out),
        Command::Convergents(a) => convergents(a, out),
        Command::Periodic(PeriodicCmd::Solve(a)) => periodic_solve(a, out),
        Command::Construct(ConstructCmd::Liouville(a)) => {
            let rules = a.b_rule.iter().map(|r| r.parse()).collect::<Result<Vec<EntryRule>>>()?;
            let spec = LiouvilleSpec { m: a.m, delta: io::parse_rational_str(&a.delta)?, a0: a.a0, rules, depth: a.depth };
            let pq = construct_liouville(&spec)?;
            emit_json(out, &io::pq_to_json(&pq))?;
            Ok(EXIT_OK)
        }
        Command::Construct(ConstructCmd::Quasiperiodic(a)) => {
            let spec = io::quasi_spec_from_json(&read_json(&a.schedule)?, &read_json(&a.base)?)?;
            let pq = build_quasiperiodic(&spec, a.depth)?;
            emit_json(out, &io::pq_to_json(&pq))?;
            Ok(EXIT_OK)
        }
        Command::Verify(v) => verify(v, out),
        Command::Bench(BenchCmd::Growth(a)) => bench_growth(a, out),
    }
}

fn expand(a: ExpandArgs, out: &mut dyn Write) -> CmdResult {
    let inputs = io::inputs_from_json(&read_json(&a.input)?)?;
    let mut ex = Expander::new(&inputs, PrecisionBudget::from_env()?)?;
    while ex.index() < a.steps {
        if a.trace && ex.dim() > 0 {
            let values: Vec<Value> = ex.complete_quotients()?.iter().map(io::real_to_json).collect();
            emit_line(out, &json!({ "n": ex.index(), "event": "trace", "values": values }))?;
        }
        match ex.advance()? {
            Some(events) => {
                for e in &events {
                    emit_line(out, &io::event_to_json(e))?;
                }
            }
            None => break,
        }
    }
    Ok(EXIT_OK)
}

fn convergents(a: ConvergentsArgs, out: &mut dyn Write) -> CmdResult {
    let pq = read_pq(&a.pq)?;
    if a.depth > pq.depth() {
        return Err(McfError::input(format!("depth {} exceeds the {} complete columns", a.depth, pq.depth())).into());
    }
    let m = pq.m();
    let table = ConvergentTable::new(&pq, a.depth);
    if let Emit::Csv = a.emit {
        let mut head = vec!["n".to_string()];
        head.extend((1..=m).map(|i| format!("A{i}")));
        head.push("C".into());
        head.extend((1..=m).map(|i| format!("tilde{i}")));
        writeln!(out, "{}", head.join(","))?;
    }
    for col in conv_stream(&pq).take(a.depth) {
        let n = col.n as i64;
        let tildes: Vec<BigInt> = (0..m).map(|i| table.tilde(i, n)).collect();
        match a.emit {
            Emit::Csv => {
                let mut row = vec![col.n.to_string()];
                row.extend(col.a.iter().map(ToString::to_string));
                row.push(col.c.to_string());
                row.extend(tildes.iter().map(ToString::to_string));
                writeln!(out, "{}", row.join(","))?;
            }
            Emit::Jsonl => emit_line(
                out,
                &json!({ "n": col.n, "a": io::ints_value(&col.a), "c": io::int_value(&col.c), "tilde": io::ints_value(&tildes) }),
            )?,
        }
    }
    Ok(EXIT_OK)
}

fn periodic_solve(a: SolveArgs, out: &mut dyn Write) -> CmdResult {
    let spec = PeriodicSpec::new(a.pre_a, a.pre_b, a.per_a, a.per_b)?;
    let cert = solve_periodic(&spec)?;
    let code = if cert.bound_holds() == Some(false) { EXIT_VIOLATION } else { EXIT_OK };
    if a.json {
        emit_json(out, &io::certificate_to_json(&cert))?;
    } else {
        writeln!(out, "expansion  {spec}")?;
        writeln!(out, "alpha      {}  (height {})", io::poly_string(&cert.poly_alpha), cert.height_alpha)?;
        writeln!(out, "           root near {}", approx(&cert.alpha_interval))?;
        writeln!(out, "beta       {}  (height {})", io::poly_string(&cert.poly_beta), cert.height_beta)?;
        writeln!(out, "           root near {}", approx(&cert.beta_interval))?;
        match &cert.bound {
            Some(b) => writeln!(out, "bound      {b}  holds: {}", cert.bound_holds() == Some(true))?,
            None => writeln!(out, "bound      not applicable")?,
        }
        writeln!(out, "matched    {} quotients", cert.matched)?;
    }
    Ok(code)
}

fn approx(iv: &crate::exact::RationalInterval) -> String {
    use num_traits::ToPrimitive;
    format!("{:.15}", iv.midpoint().to_f64().unwrap_or(f64::NAN))
}

fn verify(v: VerifyCmd, out: &mut dyn Write) -> CmdResult {
    match v {
        VerifyCmd::Admissible(a) => {
            let pq = read_pq(&a.pq)?;
            let rep = check_admissible(&pq);
            let first = rep.first().cloned();
            emit_json(out, &json!({ "admissible": rep.is_admissible(), "first_violation": first, "violations": rep.violations }))?;
            Ok(if rep.is_admissible() { EXIT_OK } else { EXIT_VIOLATION })
        }
        VerifyCmd::Bounds(a) => {
            let pq = read_pq(&a.pq)?;
            let n_max = last_index(&pq, a.depth, 0)?;
            let box_nm = a.box_nm.map(|v| (v[0].clone(), v[1].clone()));
            let rep = bound_checks(&pq, n_max, &BoundOptions { box_nm, inputs: None })?;
            let first = rep.violations.iter().min_by_key(|v| v.index).cloned();
            emit_json(out, &json!({ "ok": rep.ok(), "first_violation": first, "report": rep }))?;
            Ok(if rep.ok() { EXIT_OK } else { EXIT_VIOLATION })
        }
        VerifyCmd::Growth(a) => {
            let pq = read_pq(&a.pq)?;
            let n_max = last_index(&pq, a.depth, usize::from(a.d.is_some()))?;
            let rep = growth_check(&pq, n_max, &GrowthOptions { eta_bound: a.eta, d: a.d })?;
            let first = rep.violations.iter().min_by_key(|v| v.index).cloned();
            emit_json(out, &json!({ "ok": rep.ok(), "first_violation": first, "report": rep }))?;
            Ok(if rep.ok() { EXIT_OK } else { EXIT_VIOLATION })
        }
        VerifyCmd::Liouville(a) => {
            let pq = read_pq(&a.pq)?;
            let n_max = last_index(&pq, a.depth, 0)?;
            let rep = verify_liouville(&pq, &io::parse_rational_str(&a.delta)?, n_max)?;
            report_exit(out, &rep)
        }
        VerifyCmd::Main1(a) => {
            let spec = io::quasi_spec_from_json(&read_json(&a.schedule)?, &read_json(&a.base)?)?;
            let c: BigRational = io::parse_rational_str(&a.c)?;
            report_exit(out, &main1_check(&spec, a.d, &c, a.depth)?)
        }
        VerifyCmd::Main2(a) => {
            let spec = io::quasi_spec_from_json(&read_json(&a.schedule)?, &read_json(&a.base)?)?;
            report_exit(out, &main2_check(&spec, &a.m_bound, a.n_bound, a.variant.into(), a.depth)?)
        }
    }
}

fn bench_growth(a: BenchArgs, out: &mut dyn Write) -> CmdResult {
    let pq = read_pq(&a.pq)?;
    if a.depth > pq.depth() {
        return Err(McfError::input(format!("depth {} exceeds the {} complete columns", a.depth, pq.depth())).into());
    }
    writeln!(out, "n,bits,micros")?;
    let start = Instant::now();
    for col in conv_stream(&pq).take(a.depth) {
        writeln!(out, "{},{},{}", col.n, col.c.bits(), start.elapsed().as_micros())?;
    }
    if let Some(d) = a.d {
        if a.depth >= 3 {
            let rep = growth_check(&pq, a.depth - 2, &GrowthOptions { eta_bound: None, d: Some(d) })?;
            if let Some(v) = rep.violations.first() {
                return Err(McfError::HypothesisViolated { hypothesis: v.bound.clone(), index: v.index }.into());
            }
        }
    }
    Ok(EXIT_OK)
}

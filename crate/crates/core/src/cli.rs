//! The `qprenex` command line.
//!
//! Exit codes: 0 success, 1 parse, I/O or usage error, 2 internal invariant
//! violated, 3 oracle refused (over the cap), 4 `check` found a mismatch.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::export::{
    prenex_problem_text, text_variables, to_qcir, to_qdimacs, ExportError, Format, FreeVariables,
    Manifest,
};
use crate::formula::Formula;
use crate::fresh::FreshGen;
use crate::gen::{nested_biconditional, GenConfig, Generator};
use crate::ops::OperatorTable;
use crate::parser::{parse_with, ParseError, ParseOptions, Problem};
use crate::printer::print_problem;
use crate::semantics::{Engine, Oracle, SemanticsError, DEFAULT_CAP};
use crate::transform::{naive_prenex_with_budget, transform, Mode, DEFAULT_BUDGET};

pub const SEED_VAR: &str = "QPRENEX_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "qprenex",
    version,
    about = "Prenexing for quantified boolean formulas"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transform a formula and write it in a solver format.
    Prenex(PrenexArgs),
    /// Compare a formula with its transform (or another file) exactly.
    Check(CheckArgs),
    /// Write a seeded random formula.
    Gen(GenArgs),
    /// Compare output sizes against the textbook prenexing.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct PrenexArgs {
    /// Input file, or `-` for stdin.
    input: PathBuf,

    #[arg(long, default_value_t = Mode::Sat)]
    mode: Mode,

    #[arg(long, default_value_t = Format::Fqbf)]
    format: Format,

    /// Output file; also writes `<out>.map`. Defaults to stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Accept `@` in variable names.
    #[arg(long)]
    allow_internal_names: bool,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Input file, or `-` for stdin.
    input: PathBuf,

    /// Compare with this file instead of the computed transform.
    #[arg(long, value_name = "FILE")]
    against: Option<PathBuf>,

    #[arg(long, default_value_t = Mode::Sat)]
    mode: Mode,

    #[arg(long, value_name = "INT", default_value_t = DEFAULT_CAP)]
    oracle_cap: usize,

    #[arg(long, default_value = "diagram", value_parser = parse_engine)]
    engine: Engine,

    /// Accept `@` in variable names of the input.
    #[arg(long)]
    allow_internal_names: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Random seed; the QPRENEX_SEED environment variable takes precedence.
    #[arg(long, value_name = "INT", default_value_t = 0)]
    seed: u64,

    /// Size of the variable pool.
    #[arg(long, value_name = "INT", default_value_t = 8)]
    vars: usize,

    /// Maximum quantifier depth.
    #[arg(long, value_name = "INT", default_value_t = 4)]
    depth: usize,

    /// Maximum length.
    #[arg(long, value_name = "INT", default_value_t = 40)]
    size: usize,

    /// Only `&`, `|` and `~`.
    #[arg(long)]
    monotone: bool,

    /// Output file. Defaults to stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Largest member of the nested biconditional family.
    #[arg(long, value_name = "INT", default_value_t = 12)]
    max_k: usize,

    /// Length limit for the textbook prenexing.
    #[arg(long, value_name = "INT", default_value_t = DEFAULT_BUDGET)]
    budget: usize,

    /// Emit CSV instead of an aligned table.
    #[arg(long)]
    csv: bool,

    /// Formulas per random corpus.
    #[arg(long, value_name = "INT", default_value_t = 20)]
    corpus: usize,

    /// Random seed; the QPRENEX_SEED environment variable takes precedence.
    #[arg(long, value_name = "INT", default_value_t = 0)]
    seed: u64,
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    s.parse()
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{0}")]
    Refused(SemanticsError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => 1,
            CliError::Invariant(_) => 2,
            CliError::Refused(_) => 3,
        }
    }
}

impl From<SemanticsError> for CliError {
    fn from(e: SemanticsError) -> Self {
        match e {
            SemanticsError::Refused { .. } => CliError::Refused(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ExportError> for CliError {
    fn from(e: ExportError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let result = match cli.command {
        Command::Prenex(a) => cmd_prenex(&a),
        Command::Check(a) => cmd_check(&a),
        Command::Gen(a) => cmd_gen(&a),
        Command::Bench(a) => cmd_bench(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

fn load(path: &Path, allow_internal_names: bool) -> Result<(String, Problem), CliError> {
    let text = read_input(path)?;
    let problem = parse_with(
        &text,
        ParseOptions {
            allow_internal_names,
        },
    )
    .map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    Ok((text, problem))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_VAR}={v} is not an integer"))),
        Err(_) => Ok(flag),
    }
}

fn free_policy(mode: Mode) -> FreeVariables {
    match mode {
        Mode::Sat => FreeVariables::Exists,
        Mode::Valid => FreeVariables::Forall,
        Mode::Mc => FreeVariables::Free,
    }
}

fn cmd_prenex(a: &PrenexArgs) -> Result<i32, CliError> {
    let (text, problem) = load(&a.input, a.allow_internal_names)?;
    let phi = &problem.formula;
    let start = Instant::now();
    let out = transform(a.mode, phi, &mut FreshGen::for_formula(phi));
    let elapsed = start.elapsed();

    let ratio = out.length() as f64 / phi.length() as f64;
    eprintln!(
        "input_len={} input_depth={} input_nblock={} input_nbvar={} output_len={} ratio={:.4} time_ms={:.3}",
        phi.length(),
        phi.qdepth(),
        phi.nblock(),
        phi.nbvar(),
        out.length(),
        ratio,
        elapsed.as_secs_f64() * 1e3,
    );
    if ratio > 9.0 {
        return Err(CliError::Invariant(format!(
            "length ratio {ratio:.4} exceeds 9"
        )));
    }
    if a.mode != Mode::Mc && !out.is_prenex() {
        return Err(CliError::Invariant("output is not prenex".into()));
    }

    let ops = problem.operators();
    let free = free_policy(a.mode);
    let result = Problem {
        declarations: problem.declarations.clone(),
        formula: out,
    };
    let (body, variables) = match a.format {
        Format::Fqbf => {
            let body = if result.formula.is_prenex() {
                prenex_problem_text(&result)?
            } else {
                print_problem(&result)
            };
            (body, text_variables(&result.formula))
        }
        Format::Qcir => {
            let e = to_qcir(&result.formula, &ops, free)?;
            (e.text, e.variables)
        }
        Format::Qdimacs => {
            let e = to_qdimacs(&result.formula, &ops, free)?;
            (e.text, e.variables)
        }
    };
    write_output(a.out.as_deref(), &body)?;
    if let Some(path) = &a.out {
        let manifest = Manifest {
            mode: a.mode.to_string(),
            format: a.format.to_string(),
            free: free.as_str().into(),
            version: env!("CARGO_PKG_VERSION").into(),
            input_sha256: sha256_hex(text.as_bytes()),
            entries: variables,
        };
        let mut map = path.clone().into_os_string();
        map.push(".map");
        write_output(Some(Path::new(&map)), &manifest.render())?;
    }
    Ok(0)
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(64);
    for b in Sha256::digest(bytes) {
        write!(s, "{b:02x}").unwrap();
    }
    s
}

/// Adds the declarations of `other` to `ops`; a name declared differently in
/// both is an error.
fn merge_operators(ops: &mut OperatorTable, other: &Problem) -> Result<(), CliError> {
    for d in &other.declarations {
        match ops.get(&d.name) {
            Some(def) if *def == d.def => {}
            Some(_) => {
                return Err(CliError::Usage(format!(
                    "operator `{}` is declared differently in the two files",
                    d.name
                )))
            }
            None => ops
                .declare(&d.name, d.def.clone())
                .map_err(|e| CliError::Usage(e.to_string()))?,
        }
    }
    Ok(())
}

fn cmd_check(a: &CheckArgs) -> Result<i32, CliError> {
    let (_, problem) = load(&a.input, a.allow_internal_names)?;
    let phi = &problem.formula;
    let mut ops = problem.operators();
    let psi = match &a.against {
        Some(path) => {
            let (_, other) = load(path, true)?;
            merge_operators(&mut ops, &other)?;
            other.formula
        }
        None => transform(a.mode, phi, &mut FreshGen::for_formula(phi)),
    };
    let oracle = Oracle::new(ops)
        .with_cap(a.oracle_cap)
        .with_engine(a.engine);
    let verdict = compare(&oracle, a.mode, phi, &psi)?;
    match verdict {
        None => {
            println!("PASS");
            Ok(0)
        }
        Some(reason) => {
            println!("FAIL {reason}");
            Ok(4)
        }
    }
}

/// `None` when the two formulas agree under the relation of `mode`,
/// otherwise a description with a witness valuation.
fn compare(
    oracle: &Oracle,
    mode: Mode,
    phi: &Formula,
    psi: &Formula,
) -> Result<Option<String>, CliError> {
    let witness = |w: Option<crate::Valuation>| match w {
        Some(v) if !v.assigned().is_empty() => format!(" witness: {v}"),
        _ => String::new(),
    };
    Ok(match mode {
        Mode::Sat => {
            let (a, b) = (oracle.satisfying(phi)?, oracle.satisfying(psi)?);
            match (a, b) {
                (Some(_), Some(_)) | (None, None) => None,
                (Some(w), None) => Some(format!(
                    "input satisfiable, output not;{}",
                    witness(Some(w))
                )),
                (None, Some(w)) => Some(format!(
                    "output satisfiable, input not;{}",
                    witness(Some(w))
                )),
            }
        }
        Mode::Valid => {
            let (a, b) = (oracle.falsifying(phi)?, oracle.falsifying(psi)?);
            match (a, b) {
                (Some(_), Some(_)) | (None, None) => None,
                (Some(w), None) => Some(format!("output valid, input not;{}", witness(Some(w)))),
                (None, Some(w)) => Some(format!("input valid, output not;{}", witness(Some(w)))),
            }
        }
        Mode::Mc => oracle
            .distinguishing(phi, psi)?
            .map(|w| format!("formulas differ;{}", witness(Some(w)))),
    })
}

fn cmd_gen(a: &GenArgs) -> Result<i32, CliError> {
    let mut config = GenConfig {
        vars: a.vars,
        max_depth: a.depth,
        max_len: a.size,
        ..GenConfig::default()
    };
    if a.monotone {
        config = config.monotone();
    }
    if config.vars == 0 || config.max_len == 0 {
        return Err(CliError::Usage("--vars and --size must be positive".into()));
    }
    let problem = Generator::seeded(config, seed(a.seed)?).problem();
    write_output(a.out.as_deref(), &print_problem(&problem))?;
    Ok(0)
}

struct BenchRow {
    family: &'static str,
    id: usize,
    len: usize,
    tr_len: usize,
    naive_len: Option<usize>,
    tr_ms: f64,
    naive_ms: f64,
}

fn bench_row(family: &'static str, id: usize, phi: &Formula, budget: usize) -> BenchRow {
    let start = Instant::now();
    let tr = transform(Mode::Sat, phi, &mut FreshGen::for_formula(phi));
    let tr_ms = start.elapsed().as_secs_f64() * 1e3;
    let start = Instant::now();
    let naive = naive_prenex_with_budget(phi, &mut FreshGen::for_formula(phi), budget).ok();
    let naive_ms = start.elapsed().as_secs_f64() * 1e3;
    BenchRow {
        family,
        id,
        len: phi.length(),
        tr_len: tr.length(),
        naive_len: naive.map(|n| n.length()),
        tr_ms,
        naive_ms,
    }
}

fn cmd_bench(a: &BenchArgs) -> Result<i32, CliError> {
    let seed = seed(a.seed)?;
    let mut rows = Vec::new();
    for k in 1..=a.max_k {
        rows.push(bench_row("nested", k, &nested_biconditional(k), a.budget));
    }
    let corpora = [
        ("random", GenConfig::default()),
        ("monotone", GenConfig::default().monotone()),
    ];
    for (family, config) in corpora {
        let mut generator = Generator::seeded(config, seed);
        for i in 0..a.corpus {
            rows.push(bench_row(family, i, &generator.problem().formula, a.budget));
        }
    }

    let header = [
        "family",
        "id",
        "len",
        "tr_len",
        "naive_len",
        "tr_ratio",
        "naive_ratio",
        "tr_ms",
        "naive_ms",
    ];
    let cells: Vec<[String; 9]> = rows
        .iter()
        .map(|r| {
            let (naive, naive_ratio) = match r.naive_len {
                Some(n) => (n.to_string(), format!("{:.2}", n as f64 / r.len as f64)),
                None => ("BUDGET".into(), "BUDGET".into()),
            };
            [
                r.family.into(),
                r.id.to_string(),
                r.len.to_string(),
                r.tr_len.to_string(),
                naive,
                format!("{:.2}", r.tr_len as f64 / r.len as f64),
                naive_ratio,
                format!("{:.3}", r.tr_ms),
                format!("{:.3}", r.naive_ms),
            ]
        })
        .collect();

    let mut out = String::new();
    if a.csv {
        writeln!(out, "{}", header.join(",")).unwrap();
        for row in &cells {
            writeln!(out, "{}", row.join(",")).unwrap();
        }
    } else {
        let mut widths = header.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut line = |row: &[&str]| {
            let padded: Vec<String> = row
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            writeln!(out, "{}", padded.join("  ").trim_end()).unwrap();
        };
        line(&header);
        for row in &cells {
            line(&row.each_ref().map(String::as_str));
        }
    }
    write_output(None, &out)?;
    Ok(0)
}

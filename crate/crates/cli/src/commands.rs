//! Command implementations behind the `quasisep` binary.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use quasisep::generators::{compact_bruhat, lt_bruhat, qs_placements, random_qs, LtRep, QsMatrix, RepKind};
use quasisep::matrix::{mat_mul, rank};
use quasisep::orders::{lower_left_triangular, lt_rpm, upper_left_triangular};
use quasisep::structops::{matvec_lt, matvec_qs, mul_qs_qs};
use quasisep::{quasiseparable_orders, DenseMatrix, OpCounter, PrimeField};

use crate::bench::{self, Algo};
use crate::format::{self, Input};
use crate::verify::{self, Scope};

pub const DEFAULT_PRIME: u64 = 65521;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: format::FormatError,
    },
    #[error(transparent)]
    Lib(#[from] quasisep::Error),
    #[error("{0}")]
    Usage(String),
}

/// Process exit status: 0 success, 1 failed check, 2 usage, I/O or parse error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "quasisep", version, about = "Quasiseparable matrices over prime fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a random (rl, ru)-quasiseparable matrix.
    Generate(GenerateArgs),
    /// Print the quasiseparable orders and the ranks of both triangular parts.
    Analyze {
        file: PathBuf,
    },
    /// Build generators for both triangular parts and write a QS file.
    Compress(CompressArgs),
    /// Expand a QS file or a single generator file into a dense matrix.
    Decompress {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiply a QS file or generator file by a vector (an n x 1 matrix file).
    Apply {
        file: PathBuf,
        #[arg(long)]
        vec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiply two matrices given as dense or QS files.
    Multiply {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized self-checks, or check a generator file against a matrix.
    Verify(VerifyArgs),
    /// Operation counts over a grid of sizes, as CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub rl: usize,
    #[arg(long, default_value_t = 0)]
    pub ru: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompressArgs {
    pub file: PathBuf,
    #[arg(long, default_value = "bruhat")]
    pub kind: RepKind,
    /// Block width for the compact form (defaults to the order of each part).
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(default_value = "all")]
    pub scope: Scope,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Generator or QS file to check instead of running the suite.
    #[arg(long, requires = "input")]
    pub gen: Option<PathBuf>,
    /// Dense matrix the generator must reproduce.
    #[arg(long, requires = "gen")]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "lt_rpm,lt_bruhat,mul_lt_lt")]
    pub algo: Vec<Algo>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "4")]
    pub s: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write 0 in the wall_ns column so the file is byte-reproducible.
    #[arg(long)]
    pub no_wall: bool,
}

/// Text destined for stdout and stderr.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_or_print(path: Option<&Path>, text: String, out: &mut Output) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            out.stdout.push_str(&text);
            Ok(())
        }
    }
}

fn parse_with<T>(path: &Path, f: impl FnOnce(&str) -> format::Result<T>) -> Result<T, CliError> {
    let text = read(path)?;
    f(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// A file holding a QS container or one left triangular generator.
#[allow(clippy::large_enum_variant)]
enum Structured {
    Qs(QsMatrix),
    Lt(LtRep),
}

fn parse_structured(text: &str) -> format::Result<Structured> {
    if text.starts_with("QS ") {
        format::parse_qs(text).map(Structured::Qs)
    } else {
        format::parse_lt(text).map(Structured::Lt)
    }
}

impl Structured {
    fn reconstruct(&self) -> DenseMatrix {
        match self {
            Structured::Qs(q) => q.reconstruct(),
            Structured::Lt(g) => g.reconstruct(),
        }
    }
}

fn field(p: u64) -> Result<PrimeField, CliError> {
    Ok(PrimeField::new(p)?)
}

pub fn run(cli: Cli) -> Result<(Status, Output), CliError> {
    let mut out = Output::default();
    let status = match cli.command {
        Command::Generate(a) => {
            let f = field(a.prime)?;
            let m = random_qs(a.n, a.rl, a.ru, a.seed, f)?;
            write_or_print(a.out.as_deref(), format::write_matrix(&m), &mut out)?;
            Status::Ok
        }
        Command::Analyze { file } => {
            let m = parse_with(&file, format::parse_matrix)?;
            out.stdout = analyze(&m)?;
            Status::Ok
        }
        Command::Compress(a) => {
            let m = parse_with(&a.file, format::parse_matrix)?;
            let (q, report) = compress(&m, a.kind, a.s)?;
            write_or_print(a.out.as_deref(), format::write_qs(&q), &mut out)?;
            out.stderr = report;
            Status::Ok
        }
        Command::Decompress { file, out: dest } => {
            let g = parse_with(&file, parse_structured)?;
            write_or_print(dest.as_deref(), format::write_matrix(&g.reconstruct()), &mut out)?;
            Status::Ok
        }
        Command::Apply { file, vec, out: dest } => {
            let g = parse_with(&file, parse_structured)?;
            let v = parse_with(&vec, format::parse_matrix)?;
            if v.cols() != 1 {
                return Err(CliError::Usage("the vector file must have a single column".into()));
            }
            let x = v.column(0);
            let mut c = OpCounter::new();
            let y = match &g {
                Structured::Qs(q) => matvec_qs(q, &x, &mut c)?,
                Structured::Lt(l) => matvec_lt(l, &x, &mut c)?,
            };
            let f = v.field();
            let ym = DenseMatrix::from_row_major(f, y.len(), 1, y)?;
            write_or_print(dest.as_deref(), format::write_matrix(&ym), &mut out)?;
            out.stderr = counts(&c);
            Status::Ok
        }
        Command::Multiply { a, b, out: dest } => {
            let ia = parse_with(&a, format::parse_input)?;
            let ib = parse_with(&b, format::parse_input)?;
            let mut c = OpCounter::new();
            let prod = match (&ia, &ib) {
                (Input::Qs(qa), Input::Qs(qb)) => mul_qs_qs(qa, qb, &mut c)?,
                _ => mat_mul(&dense(&ia), &dense(&ib), &mut c)?,
            };
            write_or_print(dest.as_deref(), format::write_matrix(&prod), &mut out)?;
            out.stderr = counts(&c);
            Status::Ok
        }
        Command::Verify(a) => match (a.gen, a.input) {
            (Some(g), Some(i)) => verify_file(&g, &i, &mut out)?,
            _ => {
                let outcomes = verify::run(a.scope, a.seed, a.trials);
                let failed = outcomes.iter().filter(|o| !o.passed()).count();
                for o in &outcomes {
                    out.stdout.push_str(&o.line());
                    out.stdout.push('\n');
                }
                out.stdout.push_str(&format!("{} passed, {failed} failed\n", outcomes.len() - failed));
                if failed == 0 {
                    Status::Ok
                } else {
                    Status::CheckFailed
                }
            }
        },
        Command::Bench(a) => {
            let f = field(a.prime)?;
            for &n in &a.n {
                if let Some(&s) = a.s.iter().find(|&&s| s >= n) {
                    return Err(CliError::Usage(format!("target order {s} must be smaller than n = {n}")));
                }
            }
            let recs = bench::run(&a.algo, &a.n, &a.s, f, a.seed)?;
            write_or_print(a.csv.as_deref(), bench::to_csv(&recs, !a.no_wall), &mut out)?;
            Status::Ok
        }
    };
    Ok((status, out))
}

fn dense(i: &Input) -> DenseMatrix {
    match i {
        Input::Dense(m) => m.clone(),
        Input::Qs(q) => q.reconstruct(),
    }
}

fn counts(c: &OpCounter) -> String {
    format!("adds {} muls {} invs {}\n", c.adds, c.muls, c.invs)
}

pub fn analyze(m: &DenseMatrix) -> Result<String, CliError> {
    if !m.is_square() {
        return Err(CliError::Usage(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let c = &mut OpCounter::new();
    let o = quasiseparable_orders(m, c)?;
    let mut s = format!("n {}\np {}\norders {} {}\n", m.rows(), m.field().modulus(), o.lower, o.upper);
    for (name, part) in [("lower", lower_left_triangular(m)), ("upper", upper_left_triangular(m))] {
        let pivots = lt_rpm(&part, c)?.rank();
        s.push_str(&format!("{name} rank {} pivots {pivots}\n", rank(&part)));
    }
    Ok(s)
}

/// `s (n - s)`, `2 s (n - s)` and `s n (ceil(log2(n / s)) + 1)`.
pub fn storage_bounds(n: usize, s: usize) -> (usize, usize, usize) {
    let tree = if s == 0 {
        0
    } else {
        s * n * ((n as f64 / s as f64).log2().ceil().max(0.0) as usize + 1)
    };
    (s * (n - s.min(n)), 2 * s * (n - s.min(n)), tree)
}

pub fn compress(m: &DenseMatrix, kind: RepKind, s: Option<usize>) -> Result<(QsMatrix, String), CliError> {
    if !m.is_square() {
        return Err(CliError::Usage(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    let (pl, pu) = qs_placements(n);
    let c = &mut OpCounter::new();
    let mut report = String::new();
    let mut parts = Vec::new();
    for (name, part, place) in [("lower", lower_left_triangular(m), pl), ("upper", upper_left_triangular(m), pu)] {
        let rep = match (kind, s) {
            (RepKind::Compact, Some(w)) => LtRep::Compact(compact_bruhat(&lt_bruhat(&part, c)?, w)?),
            _ => LtRep::build(&part, kind, place, c)?,
        };
        let order = quasisep::orders::qs_order(lt_rpm(&part, &mut OpCounter::new())?.pivots(), n);
        let (b1, b2, b3) = storage_bounds(n, order);
        report.push_str(&format!(
            "{name} kind={} order={order} stored={} s(n-s)={b1} 2s(n-s)={b2} sn(log2(n/s)+1)={b3}\n",
            kind.name(),
            rep.stored_elems()
        ));
        parts.push(rep);
    }
    let upper = parts.pop().expect("two parts");
    let lower = parts.pop().expect("two parts");
    let q = QsMatrix::from_parts(m.diagonal(), lower, upper)?;
    report.push_str(&format!("total stored={}\n", q.stored_elems()));
    Ok((q, report))
}

fn verify_file(gen: &Path, input: &Path, out: &mut Output) -> Result<Status, CliError> {
    let m = parse_with(input, format::parse_matrix)?;
    let text = read(gen)?;
    let result = match parse_structured(&text) {
        Err(e) => Err(format!("{}: {e}", gen.display())),
        Ok(g) => {
            let want = m;
            let got = g.reconstruct();
            if got == want {
                Ok(())
            } else if got.rows() != want.rows() || got.cols() != want.cols() || got.field() != want.field() {
                Err("generator and matrix differ in size or modulus".to_string())
            } else {
                let (i, j) = (0..want.rows())
                    .flat_map(|i| (0..want.cols()).map(move |j| (i, j)))
                    .find(|&(i, j)| got.get(i, j) != want.get(i, j))
                    .expect("matrices differ");
                Err(format!("reconstruction differs at ({i}, {j})"))
            }
        }
    };
    Ok(match result {
        Ok(()) => {
            out.stdout.push_str("PASS reconstruction\n");
            Status::Ok
        }
        Err(why) => {
            out.stdout.push_str(&format!("FAIL reconstruction: {why}\n"));
            Status::CheckFailed
        }
    })
}

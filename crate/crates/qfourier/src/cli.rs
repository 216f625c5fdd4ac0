//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 on check failures or model
//! violations, 2 on any input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qfourier_core::interval::{cor_strict_inclusion, of_interval_bounds, OfInvariants, DIVERGENCE_CUTOFF};
use qfourier_core::model::{Label, QGModel};
use qfourier_core::transform::{fourier_of_perm, linspace};
use qfourier_core::{validate_model, DualElement, Exponent};

use crate::format::{self, IntervalFile, ModelFile};
use crate::gen::{case_rng, random_generic_model, DEFAULT_KMAX};
use crate::report::{self, cell, Record};
use crate::suite::{run_suite, Suite, SuiteConfig, DEFAULT_CASES};
use crate::sweep::{self, Table};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qfourier",
    version,
    about = "Fourier analysis checks on compact quantum groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate, inspect or write model files.
    Model {
        #[command(subcommand)]
        action: ModelCmd,
    },
    /// Run a randomized check suite.
    Verify(VerifyArgs),
    /// Interval bounds for the set of bounded twists.
    Interval(IntervalArgs),
    /// Tabulate a quantity over a grid as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Model file (JSON).
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,
    /// Bundled SU_q(2) with 0 < q < 1.
    #[arg(long, value_name = "Q")]
    suq2: Option<f64>,
    /// Bundled free orthogonal model, comma-separated lambdas.
    #[arg(long, value_name = "L1,L2,...", value_delimiter = ',', allow_hyphen_values = true)]
    ofplus: Option<Vec<f64>>,
    /// Sign of F conj(F) for --ofplus.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    sign: i8,
    /// Model the free orthogonal blocks k >= 2 by synthetic spectra.
    #[arg(long)]
    synthetic: bool,
}

impl ModelArgs {
    fn given(&self) -> usize {
        usize::from(self.model.is_some()) + usize::from(self.suq2.is_some()) + usize::from(self.ofplus.is_some())
    }

    fn load(&self, positional: Option<&PathBuf>) -> anyhow::Result<QGModel> {
        let count = self.given() + usize::from(positional.is_some());
        if count != 1 {
            bail!("give exactly one model source (a path, --model, --suq2 or --ofplus)");
        }
        let model = if let Some(path) = positional.or(self.model.as_ref()) {
            format::read_model(path)?
        } else if let Some(q) = self.suq2 {
            QGModel::suq2(q).context("--suq2")?
        } else {
            let lambdas = self.ofplus.clone().expect("counted above");
            QGModel::ofplus(lambdas, self.sign).context("--ofplus")?
        };
        Ok(model.with_synthetic_spectra(self.synthetic))
    }
}

#[derive(Debug, Subcommand)]
enum ModelCmd {
    /// Report admissibility violations; exit 1 if there are any.
    Validate {
        path: Option<PathBuf>,
        #[command(flatten)]
        source: ModelArgs,
    },
    /// Print n_k, d_k, ||Q_k|| and ||Q_k^{-1}|| per label.
    Show {
        path: Option<PathBuf>,
        #[command(flatten)]
        source: ModelArgs,
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: u64,
    },
    /// Write a model file: a bundled model materialized up to --kmax, or a
    /// random generic model.
    Gen {
        #[command(flatten)]
        source: ModelArgs,
        /// Random generic model with this many irreps.
        #[arg(long, value_name = "N")]
        random: Option<usize>,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Jsonl,
    Csv,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// hy, dual-hy, rd, pairing, kms, oracle or all.
    suite: String,
    #[command(flatten)]
    source: ModelArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_CASES)]
    cases: u32,
    #[arg(long, default_value_t = DEFAULT_KMAX)]
    kmax: u64,
    /// Exponents (comma-separated; `inf` allowed).
    #[arg(long, value_delimiter = ',', value_parser = parse_exponent)]
    p: Option<Vec<Exponent>>,
    /// Twists (comma-separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<f64>>,
    /// Grid `a:b:n` (n + 1 points) for the cap suites.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    xgrid: Option<Grid>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Jsonl)]
    format: OutputFormat,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct IntervalArgs {
    #[command(flatten)]
    source: ModelArgs,
    /// Explicit d_1 (with --fnorm) instead of a model.
    #[arg(long, requires = "fnorm")]
    d1: Option<f64>,
    #[arg(long, requires = "d1")]
    fnorm: Option<f64>,
    /// Any 1 <= p < 2; the bounds do not depend on it.
    #[arg(long, default_value = "1", value_parser = parse_exponent)]
    p: Exponent,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Quantity {
    TwistedNorm,
    CbObstruction,
    Condition5,
    GrowthProfile,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(value_enum)]
    quantity: Quantity,
    #[command(flatten)]
    source: ModelArgs,
    /// Matrix element `u:<label>:<i>:<j>` (twisted-norm).
    #[arg(long)]
    element: Option<String>,
    /// Dual element file (twisted-norm), alternative to --element.
    #[arg(long, value_name = "PATH")]
    dual: Option<PathBuf>,
    /// Permutation element file (twisted-norm), alternative to --element.
    #[arg(long, value_name = "PATH")]
    perm: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', value_parser = parse_exponent)]
    p: Option<Vec<Exponent>>,
    /// Twists for condition5 (comma-separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<f64>>,
    /// Grid `a:b:n` (n + 1 points).
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    xgrid: Option<Grid>,
    #[arg(long, default_value_t = 20)]
    kmax: u64,
    /// Empirical divergence cutoff (cb-obstruction).
    #[arg(long, default_value_t = DIVERGENCE_CUTOFF)]
    threshold: f64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number or `inf`"))?;
    Exponent::finite(v).map_err(|e| e.to_string())
}

/// `a:b:n` with `n >= 1` intervals.
fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(format!("grid `{s}` is not of the form a:b:n"));
    };
    let a: f64 = a.parse().map_err(|_| format!("bad grid start `{a}`"))?;
    let b: f64 = b.parse().map_err(|_| format!("bad grid end `{b}`"))?;
    let n: usize = n.parse().map_err(|_| format!("bad grid count `{n}`"))?;
    if n == 0 {
        return Err("empty grid: n must be at least 1".into());
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err("grid ends must be finite".into());
    }
    Ok(Grid(linspace(a, b, n)))
}

/// Parsed `a:b:n` grid; a newtype so clap treats it as one value.
#[derive(Debug, Clone, PartialEq)]
struct Grid(Vec<f64>);

/// `u:<label>:<i>:<j>`.
fn parse_element(s: &str, model: &QGModel) -> anyhow::Result<DualElement> {
    let parts: Vec<&str> = s.split(':').collect();
    let ["u", k, i, j] = parts[..] else {
        bail!("element `{s}` is not of the form u:<label>:<i>:<j>");
    };
    let parse = |t: &str| t.parse::<u64>().map_err(|_| anyhow!("bad index `{t}` in `{s}`"));
    let (k, i, j) = (parse(k)?, parse(i)?, parse(j)?);
    Ok(DualElement::matrix_element(model, Label(k), i as usize, j as usize)?)
}

fn open_out(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    })
}

fn emit_table(t: &Table, out: Option<&PathBuf>, seed: Option<u64>) -> anyhow::Result<()> {
    let mut w = open_out(out)?;
    report::write_csv(&mut w, t.quantity, seed, &t.header, &t.rows)?;
    w.flush()?;
    for n in &t.notes {
        eprintln!("{n}");
    }
    Ok(())
}

fn cmd_model(action: ModelCmd) -> anyhow::Result<i32> {
    match action {
        ModelCmd::Validate { path, source } => {
            let model = source.load(path.as_ref())?;
            let violations = validate_model(&model);
            let mut out = std::io::stdout().lock();
            for v in &violations {
                let label = v.label.map_or("-".to_string(), |l| l.to_string());
                let index = v.index.map_or("-".to_string(), |i| i.to_string());
                writeln!(
                    out,
                    "violation label={label} index={index} kind={} magnitude={}",
                    v.kind,
                    cell(v.magnitude)
                )?;
            }
            writeln!(out, "{}: {} violation(s)", model.describe(), violations.len())?;
            Ok(if violations.is_empty() { EXIT_PASS } else { EXIT_FAIL })
        }
        ModelCmd::Show { path, source, kmax } => {
            let model = source.load(path.as_ref())?;
            let mut rows = Vec::new();
            for l in model.labels(kmax) {
                let s = model.scalars(l)?;
                let n = s.dim_exact.map_or_else(|| cell(s.dim), |n| n.to_string());
                rows.push(vec![
                    l.0.to_string(),
                    n,
                    cell(s.qdim),
                    cell(s.norm_q()),
                    cell(s.norm_qinv()),
                ]);
            }
            let t = Table {
                quantity: "model-show",
                header: vec!["k", "n", "d", "norm_q", "norm_qinv"],
                rows,
                notes: vec![model.describe()],
            };
            emit_table(&t, None, None)?;
            Ok(EXIT_PASS)
        }
        ModelCmd::Gen {
            source,
            random,
            max_dim,
            seed,
            kmax,
            out,
        } => {
            let file = match random {
                Some(n) => {
                    if source.given() > 0 {
                        bail!("--random cannot be combined with another model source");
                    }
                    if n == 0 || max_dim == 0 {
                        bail!("--random and --max-dim must be positive");
                    }
                    let mut rng = case_rng(seed, 0, 0);
                    ModelFile::from_model(&random_generic_model(&mut rng, n, max_dim))
                }
                None => ModelFile::materialize(&source.load(None)?, kmax),
            };
            let mut w = open_out(out.as_ref())?;
            serde_json::to_writer_pretty(&mut w, &file)?;
            writeln!(w)?;
            w.flush()?;
            Ok(EXIT_PASS)
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<i32> {
    let suite: Suite = args.suite.parse().map_err(|e: String| anyhow!(e))?;
    let model = args.source.load(None)?;
    let cfg = SuiteConfig {
        cases: args.cases,
        seed: args.seed,
        kmax: args.kmax,
        p: args.p,
        x: args.x,
        xgrid: args.xgrid.map(|g| g.0),
    };
    let records = run_suite(suite, &model, &cfg)?;
    let mut w = open_out(args.out.as_ref())?;
    match args.format {
        OutputFormat::Jsonl => report::write_jsonl(&mut w, &records)?,
        OutputFormat::Csv => write_records_csv(&mut w, &records, args.seed)?,
    }
    w.flush()?;
    let failures = records.iter().filter(|r| !r.passed()).count();
    eprintln!("verify {suite}: {} checks, {failures} failures", records.len());
    Ok(if failures == 0 { EXIT_PASS } else { EXIT_FAIL })
}

fn write_records_csv(w: &mut dyn Write, records: &[Record], seed: u64) -> anyhow::Result<()> {
    let header = [
        "suite",
        "case",
        "name",
        "model",
        "seed",
        "p",
        "x",
        "labels",
        "relation",
        "lhs",
        "rhs",
        "slack",
        "verdict",
        "substitution",
    ];
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.suite.to_string(),
                r.case.to_string(),
                r.name.to_string(),
                r.model.clone(),
                r.seed.to_string(),
                r.params.p.clone().unwrap_or_default(),
                r.params.x.map(cell).unwrap_or_default(),
                r.params.labels.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
                r.relation.as_str().to_string(),
                cell(r.lhs),
                cell(r.rhs),
                cell(r.slack),
                r.verdict.as_str().to_string(),
                r.substitution.unwrap_or("").to_string(),
            ]
        })
        .collect();
    report::write_csv(w, "verify", Some(seed), &header, &rows)?;
    Ok(())
}

fn cmd_interval(args: IntervalArgs) -> anyhow::Result<i32> {
    let inv = match (args.d1, args.fnorm) {
        (Some(d1), Some(fnorm)) => {
            if args.source.given() > 0 {
                bail!("--d1/--fnorm cannot be combined with a model");
            }
            OfInvariants::new(d1, fnorm)?
        }
        _ => OfInvariants::from_model(&args.source.load(None)?)?,
    };
    let bounds = of_interval_bounds(&inv, args.p)?;
    let (pred, witness) = cor_strict_inclusion(&inv, args.p)?;
    let file = IntervalFile::new(&inv, &bounds, pred, witness);
    let mut w = open_out(args.out.as_ref())?;
    serde_json::to_writer(&mut w, &file)?;
    writeln!(w)?;
    w.flush()?;
    Ok(EXIT_PASS)
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<i32> {
    let model = args.source.load(None)?;
    let table = match args.quantity {
        Quantity::TwistedNorm => {
            let a = match (&args.element, &args.dual, &args.perm) {
                (Some(e), None, None) => parse_element(e, &model)?,
                (None, Some(path), None) => format::read_dual(path)?,
                (None, None, Some(path)) => fourier_of_perm(&format::read_perm(path)?, &model)?,
                _ => bail!("twisted-norm needs exactly one of --element, --dual or --perm"),
            };
            let ps = args.p.unwrap_or_else(|| vec![Exponent::ONE]);
            let grid = args.xgrid.ok_or_else(|| anyhow!("twisted-norm needs --xgrid a:b:n"))?.0;
            sweep::twisted_norm_sweep(&a, &ps, &grid, &model)?
        }
        Quantity::CbObstruction => sweep::cb_obstruction_sweep(&model, args.kmax, args.threshold)?,
        Quantity::Condition5 => {
            let p = match args.p.as_deref() {
                None => Exponent::ONE,
                Some([p]) => *p,
                Some(_) => bail!("condition5 takes a single --p"),
            };
            let xs = match (args.x, args.xgrid) {
                (Some(x), None) => x,
                (None, Some(g)) => g.0,
                (None, None) => vec![-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0],
                (Some(_), Some(_)) => bail!("give --x or --xgrid, not both"),
            };
            if xs.is_empty() {
                bail!("empty x list");
            }
            sweep::condition5_sweep(&model, p, &xs, args.kmax)?
        }
        Quantity::GrowthProfile => {
            if args.kmax == 0 {
                bail!("growth-profile needs --kmax >= 1");
            }
            sweep::growth_profile_sweep(&model, args.kmax)?
        }
    };
    if table.rows.is_empty() {
        bail!("empty grid");
    }
    emit_table(&table, args.out.as_ref(), None)?;
    Ok(EXIT_PASS)
}

fn thread_pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("QG_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| anyhow!("QG_THREADS must be a positive integer, got `{v}`"))?;
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
        }
    };
    let result = thread_pool().and_then(|pool| {
        pool.install(|| match cli.command {
            Command::Model { action } => cmd_model(action),
            Command::Verify(a) => cmd_verify(a),
            Command::Interval(a) => cmd_interval(a),
            Command::Sweep(a) => cmd_sweep(a),
        })
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INPUT
        }
    }
}

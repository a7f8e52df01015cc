//! The `klimm` command line.
//!
//! Exit codes: 0 success, 1 counterexample / disagreement / failed check,
//! 2 usage or malformed input, 3 a mathematical precondition not met.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use klimm_core::exactmat::{
    example_matrix, format_rational, gen_totally_positive, generator, generator_names, max_positivity_order,
    RationalMatrix, DEFAULT_BUDGET, DEFAULT_GENERATOR,
};
use klimm_core::grid::{bounding_boxes, graph_of_upper_interval, spanning_corners, BoundingBox, Multiset};
use klimm_core::immanant::{
    dual_canonical_eval, factor_block_antidiagonal, imm_definition, labeled_submatrix, method_names, result,
    ImmanantResult, Method,
};
use klimm_core::klpoly::{algorithm, algorithm_names, KlCache};
use klimm_core::Permutation;
use serde::Serialize;

use crate::config::{Config, Format};
use crate::context::Context;
use crate::report::SuiteReport;
use crate::search::{conjecture, conjecture_names, run_search};
use crate::suites::{run_suite, suite, suite_names};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "klimm", version, about = "Kazhdan-Lusztig immanants: evaluation, verification sweeps and searches")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print P_{x,y}(q) and P_{x,y}(1).
    Kl {
        x: String,
        y: String,
        #[arg(long, default_value = "descent")]
        algorithm: String,
        /// Directory of kl_S{n}.json cache files.
        #[arg(long, env = "KLIMM_CACHE")]
        kl_cache: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Evaluate Imm_v on M(R, C).
    Imm {
        v: String,
        /// Row labels, e.g. 1,2,2,3 (default 1..n).
        #[arg(long = "R")]
        r: Option<String>,
        /// Column labels (default 1..n).
        #[arg(long = "C")]
        c: Option<String>,
        /// Matrix file, or `example` for the built-in 4x4 matrix.
        #[arg(short = 'm', long = "matrix")]
        matrix: String,
        #[arg(long, value_enum, default_value_t = ImmMethod::Det)]
        method: ImmMethod,
        #[arg(long, env = "KLIMM_CACHE")]
        kl_cache: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TextFormat::Json)]
        format: TextFormat,
    },
    /// Draw Γ[v, w0] with its bounding boxes.
    Graph {
        v: String,
        #[arg(long, value_enum, default_value_t = GraphFormat::Ascii)]
        format: GraphFormat,
    },
    /// Run a verification suite.
    Check {
        suite: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Search for counterexamples to a positivity conjecture.
    Search {
        conjecture: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write a verified k-positive n x n matrix.
    Gen {
        n: usize,
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = DEFAULT_GENERATOR)]
        generator: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List suites, searches, evaluation methods, generators and KL algorithms.
    List,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long)]
    pub max_n: Option<usize>,
    #[arg(long)]
    pub max_m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "KLIMM_CACHE")]
    pub kl_cache: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl From<RunArgs> for Config {
    fn from(a: RunArgs) -> Self {
        Config {
            max_n: a.max_n,
            max_m: a.max_m,
            k: a.k,
            samples: a.samples,
            seed: a.seed,
            kl_cache: a.kl_cache,
            out: a.out,
            format: a.format,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Ascii,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ImmMethod {
    Definition,
    Det,
    Factored,
    Both,
}

/// An error together with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        let code = match error.downcast_ref::<klimm_core::Error>() {
            Some(e) if e.is_precondition() => EXIT_PRECONDITION,
            _ => EXIT_USAGE,
        };
        Failure { code, error }
    }
}

fn failure(code: i32, error: anyhow::Error) -> Failure {
    Failure { code, error }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {:#}", f.error);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Kl {
            x,
            y,
            algorithm,
            kl_cache,
            format,
        } => cmd_kl(&x, &y, &algorithm, kl_cache.as_deref(), format, out),
        Command::Imm {
            v,
            r,
            c,
            matrix,
            method,
            kl_cache,
            format,
        } => cmd_imm(&v, r.as_deref(), c.as_deref(), &matrix, method, kl_cache.as_deref(), format, out, err),
        Command::Graph { v, format } => cmd_graph(&v, format, out),
        Command::Check { suite: name, run } => {
            let s = suite(&name).ok_or_else(|| {
                let known = suite_names()
                    .iter()
                    .map(|(n, a, _)| std::iter::once(*n).chain(a.iter().copied()).join("|"))
                    .join(", ");
                failure(EXIT_USAGE, anyhow!("unknown suite {name:?}; known suites: {known}"))
            })?;
            let ctx = Context::new(run.into())?;
            let report = run_suite(&*s, &ctx)?;
            emit_report(&report, &ctx.config, out, err)
        }
        Command::Search { conjecture: name, run } => {
            let c = conjecture(&name).ok_or_else(|| {
                let known = conjecture_names()
                    .iter()
                    .map(|(n, a, _)| std::iter::once(*n).chain(a.iter().copied()).join("|"))
                    .join(", ");
                failure(EXIT_USAGE, anyhow!("unknown conjecture {name:?}; known: {known}"))
            })?;
            let ctx = Context::new(run.into())?;
            let report = run_search(&*c, &ctx)?;
            emit_report(&report, &ctx.config, out, err)
        }
        Command::Gen {
            n,
            k,
            seed,
            generator,
            budget,
            out: path,
        } => cmd_gen(n, k, seed, &generator, budget, path.as_deref(), out, err),
        Command::List => cmd_list(out),
    }
}

fn emit_report(report: &SuiteReport, config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let text = match config.format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
    };
    write_output(&text, config.out.as_deref(), out)?;
    writeln!(err, "{}", report.summary_line())?;
    Ok(if report.ok() { EXIT_OK } else { EXIT_FAILED })
}

fn write_output(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn to_json(value: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn load_cache(dir: Option<&Path>, n: usize) -> Result<(KlCache, Option<PathBuf>)> {
    let mut cache = KlCache::new();
    let path = dir.map(|d| d.join(format!("kl_S{n}.json")));
    if let Some(p) = path.as_ref().filter(|p| p.exists()) {
        cache.load_into(p).with_context(|| format!("reading KL cache {}", p.display()))?;
    }
    Ok((cache, path))
}

fn cmd_kl(
    x: &str,
    y: &str,
    algo: &str,
    kl_cache: Option<&Path>,
    format: TextFormat,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let x: Permutation = x.parse()?;
    let y: Permutation = y.parse()?;
    let p = if algo == "descent" {
        let (mut cache, path) = load_cache(kl_cache, x.n())?;
        let p = cache.polynomial(&x, &y)?;
        if let Some(path) = path {
            cache.save(&path, x.n())?;
        }
        p
    } else {
        let mut a = algorithm(algo).ok_or_else(|| {
            failure(
                EXIT_USAGE,
                anyhow!("unknown algorithm {algo:?}; known: {}", algorithm_names().join(", ")),
            )
        })?;
        a.polynomial(&x, &y)?
    };
    let text = match format {
        TextFormat::Text => format!("{p}\nP(1) = {}\n", p.eval_at_one()),
        TextFormat::Json => to_json(&serde_json::json!({
            "x": x,
            "y": y,
            "polynomial": p,
            "display": p.to_string(),
            "at_one": p.eval_at_one().to_string(),
        }))?,
    };
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

fn read_matrix(source: &str) -> Result<RationalMatrix> {
    if source == "example" {
        return Ok(example_matrix());
    }
    let text = fs::read_to_string(source).with_context(|| format!("reading matrix file {source}"))?;
    text.parse().with_context(|| format!("parsing matrix file {source}"))
}

fn render_result(r: &ImmanantResult, format: TextFormat) -> Result<String> {
    Ok(match format {
        TextFormat::Json => to_json(r)?,
        TextFormat::Text => format!(
            "Imm_{} = {} ({}, largest square {})\n",
            r.v,
            format_rational(&r.value),
            if r.admissible { "admissible" } else { "inadmissible" },
            r.largest_square
        ),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_imm(
    v: &str,
    r: Option<&str>,
    c: Option<&str>,
    matrix: &str,
    method: ImmMethod,
    kl_cache: Option<&Path>,
    format: TextFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let v: Permutation = v.parse()?;
    let n = v.n();
    let r: Multiset = r.map_or(Ok(Multiset::identity(n)), str::parse)?;
    let c: Multiset = c.map_or(Ok(Multiset::identity(n)), str::parse)?;
    let m = read_matrix(matrix)?;
    let sub = labeled_submatrix(&v, &r, &c, &m)?;
    let definition = |sub: &RationalMatrix| -> Result<ImmanantResult, Failure> {
        let (mut cache, path) = load_cache(kl_cache, n)?;
        let value = imm_definition(&v, sub, &mut cache)?;
        if let Some(path) = path {
            cache.save(&path, n)?;
        }
        Ok(result(&v, &r, &c, Method::Definition, value))
    };
    let res = match method {
        ImmMethod::Definition => definition(&sub)?,
        ImmMethod::Det => dual_canonical_eval(&v, &r, &c, &m)?,
        ImmMethod::Factored => result(&v, &r, &c, Method::Factored, factor_block_antidiagonal(&v, &sub)?),
        ImmMethod::Both => {
            let det = dual_canonical_eval(&v, &r, &c, &m)?;
            let def = definition(&sub)?;
            if det.value != def.value {
                out.write_all(render_result(&def, format)?.as_bytes())?;
                out.write_all(render_result(&det, format)?.as_bytes())?;
                writeln!(
                    err,
                    "error: methods disagree: definition {}, determinantal {}",
                    format_rational(&def.value),
                    format_rational(&det.value)
                )?;
                return Ok(EXIT_FAILED);
            }
            det
        }
    };
    out.write_all(render_result(&res, format)?.as_bytes())?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct GraphDocument {
    v: Permutation,
    n: usize,
    cells: Vec<(usize, usize)>,
    graph_of_v: Vec<(usize, usize)>,
    largest_square: usize,
    spanning_corners: Vec<(usize, usize)>,
    boxes: Vec<BoundingBox>,
}

fn cmd_graph(v: &str, format: GraphFormat, out: &mut dyn Write) -> Result<i32, Failure> {
    let v: Permutation = v.parse()?;
    let n = v.n();
    let grid = graph_of_upper_interval(&v);
    let boxes = bounding_boxes(&v);
    let text = match format {
        GraphFormat::Json => to_json(&GraphDocument {
            v: v.clone(),
            n,
            cells: grid.cells(),
            graph_of_v: (1..=n).map(|i| (i, v.at(i))).collect(),
            largest_square: grid.largest_square(),
            spanning_corners: spanning_corners(&v),
            boxes,
        })?,
        GraphFormat::Ascii => {
            let mut s = grid.render(Some(&v));
            s += &format!("cells: {}\n", grid.len());
            s += &format!("largest square: {}\n", grid.largest_square());
            s += &format!(
                "spanning corners: {}\n",
                spanning_corners(&v).iter().map(|(i, j)| format!("({i},{j})")).join(" ")
            );
            s += "bounding boxes:\n";
            for b in &boxes {
                s += &format!(
                    "  B({},{}) rows {}..{} columns {}..{} {}\n",
                    b.corner.0,
                    b.corner.1,
                    b.top,
                    b.bottom,
                    b.left,
                    b.right,
                    format!("{:?}", b.color).to_lowercase()
                );
            }
            s
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    n: usize,
    k: usize,
    seed: u64,
    name: &str,
    budget: usize,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    if n == 0 || k == 0 || k > n {
        return Err(failure(EXIT_USAGE, anyhow!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    if n > crate::config::MAX_M_GUARD {
        return Err(failure(
            EXIT_USAGE,
            anyhow!("n = {n} exceeds {}", crate::config::MAX_M_GUARD),
        ));
    }
    let m = if k == n {
        gen_totally_positive(n, seed)
    } else {
        let g = generator(name).ok_or_else(|| {
            failure(
                EXIT_USAGE,
                anyhow!("unknown generator {name:?}; known: {}", generator_names().join(", ")),
            )
        })?;
        match g.generate(n, k, seed, budget) {
            Some(m) => m,
            None if example_matrix().rows() == n && max_positivity_order(&example_matrix())? == k => {
                writeln!(err, "generation budget exhausted; using the built-in {n}x{n} example")?;
                example_matrix()
            }
            None => {
                return Err(failure(
                    EXIT_FAILED,
                    anyhow!("generation budget of {budget} exhausted for n = {n}, k = {k}"),
                ))
            }
        }
    };
    let order = max_positivity_order(&m)?;
    if order != k {
        return Err(failure(
            EXIT_FAILED,
            anyhow!("generated matrix has positivity order {order}, wanted {k}"),
        ));
    }
    let doc = to_json(&m)?;
    match path {
        Some(p) => {
            write_output(&doc, Some(p), out)?;
            writeln!(out, "max_positivity_order: {order}")?;
        }
        None => {
            out.write_all(doc.as_bytes())?;
            writeln!(err, "max_positivity_order: {order}")?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_list(out: &mut dyn Write) -> Result<i32, Failure> {
    writeln!(out, "suites:")?;
    for (name, aliases, what) in suite_names() {
        let aka = if aliases.is_empty() {
            String::new()
        } else {
            format!(" ({})", aliases.join(", "))
        };
        writeln!(out, "  {name}{aka}: {what}")?;
    }
    writeln!(out, "searches:")?;
    for (name, aliases, what) in conjecture_names() {
        writeln!(out, "  {name} ({}): {what}", aliases.join(", "))?;
    }
    writeln!(out, "immanant methods: {}", method_names().join(", "))?;
    writeln!(out, "generators: {}", generator_names().join(", "))?;
    writeln!(out, "KL algorithms: {}", algorithm_names().join(", "))?;
    Ok(EXIT_OK)
}

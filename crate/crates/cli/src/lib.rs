//! The `discrim` command line: argument parsing, file loading and dispatch.
//!
//! [`run_command`] is the whole program minus process plumbing, so tests can
//! drive it in-process. Payloads are canonical JSON on stdout; diagnostics
//! and human-readable grids go to stderr.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use discrim_core::io::{self as codec, ClassEncoding, CsvOptions, JsonScalar};
use discrim_core::{
    bound_sign_count, build_from_discrimination, check_ci, decide, decomposable_dim, dim_fg,
    first_difference, fit_ipf, markov_ci_violations, markov_membership_exhaustive,
    markov_violations, mobius_decompose_with, second_difference, sign_of, xor_scan, BasePoint,
    CategoricalDomain, DecisionFunction, DecomposeOptions, Error, GenerativeClassifier, IpfOptions,
    Result, Scalar, TabularFunction, UndirectedGraph, VariableSubset,
};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

/// Outcome of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    /// Canonical JSON payload, empty on error or when `--output` is used.
    pub stdout: String,
    pub stderr: String,
}

/// Exit code for malformed input.
pub const EXIT_INPUT: i32 = 3;
/// Exit code for violated mathematical preconditions.
pub const EXIT_MATH: i32 = 4;
/// Exit code for usage errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "discrim",
    version,
    about = "Discrimination functions of Markov classifiers"
)]
struct Cli {
    /// Numerical tolerance (command-specific default).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the JSON payload to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Suppress diagnostics on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// First or second difference of a function.
    Diff {
        #[arg(long)]
        function: PathBuf,
        /// Variables of A, comma separated (empty for the empty set).
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        b: Option<String>,
        /// Base point, one category per variable (default all zeros).
        #[arg(long)]
        base: Option<String>,
    },
    /// Maximal cliques of a graph.
    Cliques {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Whether D separates A from B.
    Separates {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "")]
        d: String,
    },
    /// Moral graph of a DAG.
    Moralize {
        #[arg(long)]
        dag: PathBuf,
    },
    /// Interaction terms of a function.
    Decompose {
        #[arg(long)]
        function: PathBuf,
        /// Keep all subsets, including zero terms.
        #[arg(long)]
        raw: bool,
        /// Only compute terms inside the cliques of this graph.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        base: Option<String>,
        /// Drop float terms whose largest magnitude is at most this.
        #[arg(long, default_value_t = 1e-12)]
        prune: f64,
    },
    /// Whether a function is Markov with respect to a graph.
    CheckMarkov {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        /// Check every separated pair of subsets instead of node pairs.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Dimension of the space of Markov functions.
    Dim(ShapeArgs),
    /// Upper bound on the number of representable decisions.
    Bound(ShapeArgs),
    /// XOR patterns of a function's sign or of a decision.
    XorScan {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Class and log-odds of one assignment.
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        x: String,
    },
    /// Conditional independence of two predictor sets given the rest and the class.
    CheckCi {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Pairwise Markov property of a classifier.
    VerifyMarkov {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Classifier inducing a given discrimination function.
    Build {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        g: Option<PathBuf>,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Maximum-likelihood classifier with fixed discrimination function.
    FitIpf {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "class")]
        class_col: String,
        /// Category lists per column, as JSON.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Class column uses 1/0 instead of +1/-1.
        #[arg(long)]
        zero_one: bool,
        #[arg(long, default_value_t = 10_000)]
        max_sweeps: usize,
        /// Include the per-sweep log-likelihood.
        #[arg(long)]
        trace: bool,
    },
    /// Recompute a worked example.
    Reproduce {
        #[arg(value_parser = ["table1", "example2"])]
        example: String,
    },
}

#[derive(Args, Debug)]
struct ShapeArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Cardinalities, comma separated.
    #[arg(long)]
    cardinalities: String,
}

struct Output {
    payload: Value,
    diagnostics: String,
}

impl Output {
    fn json(payload: Value) -> Self {
        Output {
            payload,
            diagnostics: String::new(),
        }
    }
}

/// Runs one command; `argv` excludes the program name.
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> CommandResult {
    let args = std::iter::once("discrim").chain(argv.iter().map(AsRef::as_ref));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CommandResult {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CommandResult {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let quiet = cli.quiet;
    let output = cli.output.clone();
    match dispatch(&cli).and_then(|out| {
        let text = codec::to_canonical_string(&out.payload);
        match &output {
            Some(path) => {
                std::fs::write(path, &text).map_err(|e| with_path(path, e.into()))?;
                Ok((String::new(), out.diagnostics))
            }
            None => Ok((text, out.diagnostics)),
        }
    }) {
        Ok((stdout, diagnostics)) => CommandResult {
            code: 0,
            stdout,
            stderr: if quiet { String::new() } else { diagnostics },
        },
        Err(e) => CommandResult {
            code: if e.is_math() { EXIT_MATH } else { EXIT_INPUT },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Io(io) => Error::Format(format!("{}: {io}", path.display())),
        Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
        other => other,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| with_path(path, e.into()))
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T>) -> Result<T> {
    let text = read(path)?;
    parse(&text).map_err(|e| with_path(path, e))
}

fn parse_list(what: &str, s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Format(format!("{what}: {t:?} is not a non-negative integer")))
        })
        .collect()
}

fn parse_subset(what: &str, s: &str, n: usize) -> Result<VariableSubset> {
    let a = VariableSubset::new(parse_list(what, s)?)?;
    if let Some(i) = a.iter().find(|&i| i >= n) {
        return Err(Error::Subset(format!(
            "{what}: variable {i} out of range for {n} variables"
        )));
    }
    Ok(a)
}

fn parse_base(s: Option<&str>, d: &CategoricalDomain) -> Result<BasePoint> {
    match s {
        Some(s) => BasePoint::new(d, parse_list("--base", s)?),
        None => Ok(BasePoint::origin(d)),
    }
}

fn tol_or(cli: &Cli, default: f64) -> Result<f64> {
    let t = cli.tol.unwrap_or(default);
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Format(format!(
            "--tol must be a finite non-negative number, got {t}"
        )));
    }
    Ok(t)
}

/// Values of a function file, kept as integers when every entry is one.
enum Loaded {
    Exact(TabularFunction<BigInt>),
    Float(TabularFunction<f64>),
}

fn load_function(path: &Path) -> Result<Loaded> {
    load(path, |text| {
        if codec::table_is_integral(text)? {
            Ok(Loaded::Exact(codec::table_from_json(text)?))
        } else {
            Ok(Loaded::Float(codec::table_from_json(text)?))
        }
    })
}

fn load_float_function(path: &Path) -> Result<TabularFunction<f64>> {
    load(path, codec::table_from_json)
}

fn load_graph(path: &Path, n: Option<usize>) -> Result<UndirectedGraph> {
    let g = load(path, codec::graph_from_json)?;
    match n {
        Some(n) if g.n() != n => Err(Error::Dimension {
            expected: n,
            got: g.n(),
        }),
        _ => Ok(g),
    }
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Diff {
            function,
            a,
            b,
            base,
        } => match load_function(function)? {
            Loaded::Exact(f) => diff(&f, a, b.as_deref(), base.as_deref()),
            Loaded::Float(f) => diff(&f, a, b.as_deref(), base.as_deref()),
        },
        Command::Cliques { graph } => {
            let g = load_graph(graph, None)?;
            let all = g.maximal_cliques();
            let mut obj = Map::new();
            obj.insert(
                "cliques".into(),
                json!(all.iter().map(VariableSubset::as_slice).collect::<Vec<_>>()),
            );
            obj.insert("decomposable".into(), json!(g.is_decomposable()));
            if let Some(order) = g.clique_ordering() {
                let steps: Vec<Value> = order
                    .iter()
                    .map(|(c, s)| json!({ "clique": c.as_slice(), "separator": s.as_slice() }))
                    .collect();
                obj.insert("clique_ordering".into(), Value::Array(steps));
            }
            Ok(Output::json(Value::Object(obj)))
        }
        Command::Separates { graph, a, b, d } => {
            let g = load_graph(graph, None)?;
            let n = g.n();
            let (a, b, d) = (
                parse_subset("--a", a, n)?,
                parse_subset("--b", b, n)?,
                parse_subset("--d", d, n)?,
            );
            Ok(Output::json(
                json!({ "separates": g.separates(&a, &b, &d)? }),
            ))
        }
        Command::Moralize { dag } => {
            let dag = load(dag, codec::dag_from_json)?;
            Ok(Output::json(codec::graph_to_json(&dag.moralize())))
        }
        Command::Decompose {
            function,
            raw,
            graph,
            base,
            prune,
        } => {
            let f = load_function(function)?;
            let n = match &f {
                Loaded::Exact(f) => f.domain().n(),
                Loaded::Float(f) => f.domain().n(),
            };
            let g = graph
                .as_deref()
                .map(|p| load_graph(p, Some(n)))
                .transpose()?;
            match f {
                Loaded::Exact(f) => {
                    let prune = if *raw { None } else { Some(BigInt::from(0)) };
                    decompose(&f, prune, g.as_ref(), base.as_deref())
                }
                Loaded::Float(f) => {
                    if !(*prune >= 0.0) {
                        return Err(Error::Format("--prune must be non-negative".into()));
                    }
                    decompose(&f, (!raw).then_some(*prune), g.as_ref(), base.as_deref())
                }
            }
        }
        Command::CheckMarkov {
            function,
            graph,
            exhaustive,
        } => match load_function(function)? {
            Loaded::Exact(f) => check_markov(&f, graph, *exhaustive, BigInt::from(0)),
            Loaded::Float(f) => check_markov(&f, graph, *exhaustive, tol_or(cli, 1e-9)?),
        },
        Command::Dim(shape) => {
            let (g, d) = load_shape(shape)?;
            let dim = dim_fg(&g, &d)?;
            let tree = decomposable_dim(&g, &d)?;
            Ok(Output::json(
                json!({ "dim": dim, "decomposable": tree.is_some() }),
            ))
        }
        Command::Bound(shape) => {
            let (g, d) = load_shape(shape)?;
            let dim = dim_fg(&g, &d)?;
            let bound = bound_sign_count(&g, &d)?;
            Ok(Output::json(json!({
                "bound": codec::integer_json(bound),
                "cells": d.size(),
                "dim": dim,
            })))
        }
        Command::XorScan { input, max_order } => {
            let phi = load(input, |text| {
                if codec::is_decision_json(text)? {
                    codec::decision_from_json(text)
                } else {
                    Ok(sign_of(&codec::table_from_json::<f64>(text)?))
                }
            })?;
            let order = max_order.unwrap_or(phi.domain().n());
            xor_scan_output(&phi, order)
        }
        Command::Classify { model, x } => {
            let p = load(model, codec::classifier_from_json)?;
            let x = parse_list("--x", x)?;
            p.domain().check_assignment(&x)?;
            let idx = p.domain().flat_index(&x)?;
            let f = p.discrimination_on_support()[idx].ok_or(Error::Positivity { cell: idx })?;
            let class = decide(&p, &x)?;
            Ok(Output::json(json!({
                "class": class.sign(),
                "f": codec::float_json(f)?,
                "p_minus": codec::float_json(p.p_minus().values()[idx])?,
                "p_plus": codec::float_json(p.p_plus().values()[idx])?,
            })))
        }
        Command::CheckCi { model, a, b } => {
            let p = load(model, codec::classifier_from_json)?;
            let n = p.domain().n();
            let (a, b) = (parse_subset("--a", a, n)?, parse_subset("--b", b, n)?);
            let c = check_ci(&p, &a, &b, tol_or(cli, 1e-9)?)?;
            Ok(Output::json(json!({
                "holds": c.holds,
                "toric_residual": codec::float_json(c.toric_residual)?,
                "differential_residual": c.differential_residual.map(codec::float_json).transpose()?,
            })))
        }
        Command::VerifyMarkov { model, graph } => {
            let p = load(model, codec::classifier_from_json)?;
            let g = load_graph(graph, Some(p.domain().n()))?;
            let v = markov_ci_violations(&p, &g, tol_or(cli, 1e-9)?)?;
            Ok(Output::json(
                json!({ "markov": v.is_empty(), "violations": v }),
            ))
        }
        Command::Build { function, g, graph } => {
            let f = load_float_function(function)?;
            let h = g.as_deref().map(load_float_function).transpose()?;
            let graph = load_graph(graph, Some(f.domain().n()))?;
            let p = build_from_discrimination(&f, h.as_ref(), &graph)?;
            Ok(Output::json(codec::classifier_to_json(&p)?))
        }
        Command::FitIpf {
            function,
            graph,
            data,
            class_col,
            labels,
            zero_one,
            max_sweeps,
            trace,
        } => {
            let f = load_float_function(function)?;
            let g = load_graph(graph, Some(f.domain().n()))?;
            let opts = CsvOptions {
                class_col: class_col.clone(),
                encoding: if *zero_one {
                    ClassEncoding::ZeroOne
                } else {
                    ClassEncoding::Signed
                },
                labels: labels
                    .as_deref()
                    .map(|p| load(p, codec::labels_from_json))
                    .transpose()?,
                cardinalities: Some(f.domain().cardinalities().to_vec()),
            };
            let dataset = codec::load_dataset_file(data, &opts)?;
            let tol = tol_or(cli, 1e-8)?;
            if tol <= 0.0 {
                return Err(Error::Format("--tol must be positive for fit-ipf".into()));
            }
            let (p, report) = fit_ipf(
                &f,
                &g,
                &dataset,
                IpfOptions {
                    max_sweeps: *max_sweeps,
                    tol,
                },
            )?;
            let p = if p.domain().labels().is_none() {
                relabel(p, dataset.domain())?
            } else {
                p
            };
            let mut diagnostics = String::new();
            if !report.converged {
                let _ = writeln!(
                    diagnostics,
                    "warning: not converged after {} sweeps (gap {:e})",
                    report.iterations, report.final_marginal_gap
                );
            }
            Ok(Output {
                payload: json!({
                    "model": codec::classifier_to_json(&p)?,
                    "report": codec::ipf_report_to_json(&report, *trace)?,
                }),
                diagnostics,
            })
        }
        Command::Reproduce { example } => match example.as_str() {
            "table1" => reproduce_table1(),
            _ => reproduce_example2(),
        },
    }
}

fn load_shape(shape: &ShapeArgs) -> Result<(UndirectedGraph, CategoricalDomain)> {
    let cards = parse_list("--cardinalities", &shape.cardinalities)?;
    let d = CategoricalDomain::new(cards)?;
    let g = load_graph(&shape.graph, Some(d.n()))?;
    Ok((g, d))
}

fn diff<T: JsonScalar + std::fmt::Display>(
    f: &TabularFunction<T>,
    a: &str,
    b: Option<&str>,
    base: Option<&str>,
) -> Result<Output> {
    let n = f.domain().n();
    let a = parse_subset("--a", a, n)?;
    let x0 = parse_base(base, f.domain())?;
    let out = match b {
        Some(b) => second_difference(f, &a, &parse_subset("--b", b, n)?, &x0)?,
        None => first_difference(f, &a, &x0)?,
    };
    Ok(Output {
        payload: codec::table_to_json(&out)?,
        diagnostics: grid(&out),
    })
}

/// Two-variable tables as a matrix (rows: first variable); otherwise one
/// line per cell.
pub fn grid<T: Scalar + std::fmt::Display>(f: &TabularFunction<T>) -> String {
    let d = f.domain();
    let name = |i: usize, v: usize| -> String {
        d.labels()
            .map_or_else(|| v.to_string(), |l| l[i][v].clone())
    };
    let mut s = String::new();
    if d.n() == 2 {
        let (r, c) = (d.cardinality(0), d.cardinality(1));
        let cells: Vec<Vec<String>> = (0..r)
            .map(|i| (0..c).map(|j| f.values()[i * c + j].to_string()).collect())
            .collect();
        let width = cells
            .iter()
            .flatten()
            .map(String::len)
            .chain((0..c).map(|j| name(1, j).len()))
            .max()
            .unwrap_or(1);
        let row_width = (0..r).map(|i| name(0, i).len()).max().unwrap_or(1).max(2);
        let _ = write!(s, "{:>row_width$} |", "X0\\X1");
        for j in 0..c {
            let _ = write!(s, " {:>width$}", name(1, j));
        }
        s.push('\n');
        let _ = writeln!(s, "{}", "-".repeat(row_width.max(5) + 2 + c * (width + 1)));
        for (i, row) in cells.iter().enumerate() {
            let _ = write!(s, "{:>w$} |", name(0, i), w = row_width.max(5));
            for v in row {
                let _ = write!(s, " {v:>width$}");
            }
            s.push('\n');
        }
    } else {
        for (idx, x) in d.cells().enumerate() {
            let labels: Vec<String> = x.iter().enumerate().map(|(i, &v)| name(i, v)).collect();
            let _ = writeln!(s, "({}) {}", labels.join(","), f.values()[idx]);
        }
    }
    s
}

fn decompose<T: JsonScalar>(
    f: &TabularFunction<T>,
    prune: Option<T>,
    graph: Option<&UndirectedGraph>,
    base: Option<&str>,
) -> Result<Output> {
    let x0 = parse_base(base, f.domain())?;
    let fac = mobius_decompose_with(
        f,
        &x0,
        &DecomposeOptions {
            prune,
            restrict_to: graph,
        },
    )?;
    Ok(Output::json(codec::factorization_to_json(&fac)?))
}

fn check_markov<T: JsonScalar>(
    f: &TabularFunction<T>,
    graph: &Path,
    exhaustive: bool,
    tol: T,
) -> Result<Output> {
    let g = load_graph(graph, Some(f.domain().n()))?;
    let violations = markov_violations(f, &g, &tol)?;
    let list = violations
        .iter()
        .map(|v| Ok(json!({ "pair": [v.i, v.j], "max_abs": v.max_abs.to_json()? })))
        .collect::<Result<Vec<_>>>()?;
    let mut obj = Map::new();
    obj.insert("markov".into(), json!(violations.is_empty()));
    obj.insert("violations".into(), Value::Array(list));
    if exhaustive {
        obj.insert(
            "separation_check".into(),
            json!(markov_membership_exhaustive(f, &g, &tol)?),
        );
    }
    Ok(Output::json(Value::Object(obj)))
}

/// Carries category names read from a dataset over to a fitted model.
fn relabel(
    p: GenerativeClassifier<f64>,
    labelled: &CategoricalDomain,
) -> Result<GenerativeClassifier<f64>> {
    let Some(labels) = labelled.labels() else {
        return Ok(p);
    };
    let d = CategoricalDomain::with_labels(p.domain().cardinalities().to_vec(), labels.to_vec())?;
    GenerativeClassifier::new_extended(
        TabularFunction::new(d.clone(), p.p_plus().values().to_vec())?,
        TabularFunction::new(d, p.p_minus().values().to_vec())?,
    )
}

fn xor_scan_output(phi: &DecisionFunction, max_order: usize) -> Result<Output> {
    let found = xor_scan(phi, max_order)?;
    let list: Vec<Value> = found
        .iter()
        .map(|(_, w)| codec::witness_to_json(w))
        .collect();
    Ok(Output::json(json!({
        "max_order": max_order,
        "xors": list,
    })))
}

/// Log-odds of the first worked example.
pub fn table1_function() -> TabularFunction<BigInt> {
    let d = CategoricalDomain::new(vec![2, 3]).expect("valid shape");
    TabularFunction::new(
        d,
        [-1, 5, 2, 3, -7, -4]
            .into_iter()
            .map(BigInt::from)
            .collect(),
    )
    .expect("six values")
}

fn reproduce_table1() -> Result<Output> {
    let f = table1_function();
    let x0 = BasePoint::origin(f.domain());
    let dd = second_difference(
        &f,
        &VariableSubset::singleton(0),
        &VariableSubset::singleton(1),
        &x0,
    )?;
    let rows: Vec<Vec<Value>> = dd
        .values()
        .chunks(3)
        .map(|r| r.iter().map(codec::integer_json).collect())
        .collect();
    Ok(Output {
        payload: json!({
            "function": codec::table_to_json(&f)?,
            "grid": rows,
            "second_difference": codec::table_to_json(&dd)?,
        }),
        diagnostics: format!(
            "f\n{}\nsecond difference over {{0}} and {{1}}\n{}",
            grid(&f),
            grid(&dd)
        ),
    })
}

fn reproduce_example2() -> Result<Output> {
    let g = UndirectedGraph::cycle(4);
    let d = CategoricalDomain::binary(4)?;
    let dim = dim_fg(&g, &d)?;
    let bound = bound_sign_count(&g, &d)?;
    Ok(Output::json(
        json!({ "dim": dim, "bound": codec::integer_json(bound) }),
    ))
}

//! Command-line front end.
//!
//! Every subcommand produces deterministic output: result lists are sorted,
//! JSON keys are sorted, and worker count never changes the bytes emitted.
//! Exit codes: 0 success (or all checks passed), 1 verification failure,
//! 2 usage error, 3 internal limit (scan bound out of range, or truncation
//! under `--strict`).

use crate::classifier::{self, EpsFilter, PaperConstants, VerifyConfig};
use crate::factorization::{orbit_explore, Factorization};
use crate::output::{
    factorization_value, hyperbola_value, mat_value, params_value, triple_value, OutputRecord,
};
use crate::sl2z::{Mat2, ParabolicParams, Sign};
use crate::diophantine::{
    hyperbola_brute_force, hyperbola_generate, markov_brute_force, markov_tree, s_transform,
    DiophantineError,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::str::FromStr;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser)]
#[command(
    name = "monodromy",
    about = "Exact enumeration and classification of primitive parabolic factorizations in SL(2,Z)",
    version
)]
struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Suppress result output on stdout (diagnostics still go to stderr).
    #[arg(long, global = true)]
    quiet: bool,
    /// Exit with code 3 when a search was truncated by its node budget.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integer points on the hyperbola -eps(d1²+d2²) + 3·d1·d2 = 1.
    Hyperbola(HyperbolaArgs),
    /// Markov triples: brute-force box search or the tree.
    Markov {
        #[command(subcommand)]
        mode: MarkovCommand,
    },
    /// Factor a target matrix into 2 or 3 primitive parabolic factors.
    Factorize(FactorizeArgs),
    /// Apply a sequence of Hurwitz moves to a parabolic tuple.
    Hurwitz(HurwitzArgs),
    /// Explore the orbit of a tuple under Hurwitz moves and conjugation.
    Orbit(OrbitArgs),
    /// Run the full verification suite.
    VerifyPaper(VerifyArgs),
}

#[derive(Args)]
struct HyperbolaArgs {
    /// +1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    eps: String,
    /// Box bound |d1|, |d2| <= N.
    #[arg(long)]
    bound: i64,
    /// Generate the isometry orbit of the base vectors to this depth
    /// instead of scanning the box (the eps = -1 set is the S-image).
    #[arg(long)]
    generate: Option<u32>,
}

#[derive(Subcommand)]
enum MarkovCommand {
    /// All triples with max component <= N.
    Brute {
        #[arg(long)]
        max: i64,
    },
    /// Breadth-first tree to the given depth (depth 0 = root).
    Tree {
        #[arg(long)]
        depth: u32,
    },
}

#[derive(Args)]
struct FactorizeArgs {
    /// Target matrix, row-major "a,b,c,d"; must have determinant +1.
    #[arg(long, allow_hyphen_values = true)]
    target: String,
    /// Number of factors (2 or 3).
    #[arg(long)]
    length: usize,
    /// Box bound on the factor parameters.
    #[arg(long)]
    bound: i64,
    /// Sign sector: +1, -1, or all.
    #[arg(long, default_value = "all", allow_hyphen_values = true)]
    eps: String,
}

#[derive(Args)]
struct HurwitzArgs {
    /// Tuple of factors "eps:c:d;eps:c:d;...".
    #[arg(long, allow_hyphen_values = true)]
    tuple: String,
    /// Comma-separated signed 1-based indices: k applies the move at
    /// position k-1, -k its inverse.
    #[arg(long, allow_hyphen_values = true)]
    moves: String,
}

#[derive(Args)]
struct OrbitArgs {
    /// Tuple of factors "eps:c:d;eps:c:d;...".
    #[arg(long, allow_hyphen_values = true)]
    tuple: String,
    /// Conjugator matrix "a,b,c,d"; may be given multiple times.
    #[arg(long = "conjugator", allow_hyphen_values = true)]
    conjugators: Vec<String>,
    /// Node budget for the breadth-first closure.
    #[arg(long)]
    max_nodes: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Box bound for the two-point matrix scan.
    #[arg(long, default_value_t = 40)]
    bound_2pt: i64,
    /// Box bound for the three-point matrix scan.
    #[arg(long, default_value_t = 50)]
    bound_3pt: i64,
    /// Markov tree depth for the symmetry realizations.
    #[arg(long, default_value_t = 5)]
    depth: u32,
    /// Write the machine-readable report to this path.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug)]
struct UsageError {
    message: String,
    token: String,
    /// True when the request exceeded an internal limit rather than being
    /// malformed; maps to exit code 3 instead of 2.
    limit: bool,
}

impl UsageError {
    fn new(message: impl Into<String>, token: impl Into<String>) -> UsageError {
        UsageError {
            message: message.into(),
            token: token.into(),
            limit: false,
        }
    }

    fn limit(message: impl Into<String>, token: impl Into<String>) -> UsageError {
        UsageError {
            limit: true,
            ..UsageError::new(message, token)
        }
    }
}

fn parse_matrix(s: &str) -> Result<Mat2, UsageError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(UsageError::new("matrix must have four comma-separated entries", s));
    }
    let mut entries = Vec::with_capacity(4);
    for p in &parts {
        let v = BigInt::from_str(p)
            .map_err(|_| UsageError::new("matrix entry is not an integer", *p))?;
        entries.push(v);
    }
    Ok(Mat2::new(
        entries[0].clone(),
        entries[1].clone(),
        entries[2].clone(),
        entries[3].clone(),
    ))
}

fn parse_sign(s: &str) -> Result<Sign, UsageError> {
    Sign::from_str(s).map_err(|_| UsageError::new("expected +1 or -1", s))
}

fn parse_tuple(s: &str) -> Result<Vec<ParabolicParams>, UsageError> {
    let mut params = Vec::new();
    for part in s.split(';') {
        let fields: Vec<&str> = part.split(':').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(UsageError::new("factor must be eps:c:d", part));
        }
        let eps = parse_sign(fields[0])?;
        let c = BigInt::from_str(fields[1])
            .map_err(|_| UsageError::new("c is not an integer", fields[1]))?;
        let d = BigInt::from_str(fields[2])
            .map_err(|_| UsageError::new("d is not an integer", fields[2]))?;
        let p = ParabolicParams::new(eps, c, d)
            .map_err(|e| UsageError::new(e.to_string(), part))?;
        params.push(p);
    }
    if params.is_empty() {
        return Err(UsageError::new("tuple must have at least one factor", s));
    }
    Ok(params)
}

fn parse_moves(s: &str) -> Result<Vec<(bool, usize)>, UsageError> {
    let mut moves = Vec::new();
    for part in s.split(',').map(str::trim) {
        let k: i64 = part
            .parse()
            .map_err(|_| UsageError::new("move index is not an integer", part))?;
        if k == 0 {
            return Err(UsageError::new("move indices are 1-based and signed", part));
        }
        moves.push((k > 0, k.unsigned_abs() as usize - 1));
    }
    Ok(moves)
}

struct Rendered {
    record: OutputRecord,
    text: String,
    exit: i32,
}

fn params_text(params: &[ParabolicParams]) -> String {
    let fields: Vec<String> = params
        .iter()
        .map(|p| format!("{}:{}:{}", p.eps(), p.c(), p.d()))
        .collect();
    fields.join(";")
}

fn run_hyperbola(args: &HyperbolaArgs) -> Result<Rendered, UsageError> {
    let eps = parse_sign(&args.eps)?;
    if args.bound < 0 {
        return Err(UsageError::new("bound must be non-negative", args.bound.to_string()));
    }
    let solutions = match args.generate {
        None => hyperbola_brute_force(eps, args.bound)
            .map_err(|e| UsageError::limit(e.to_string(), args.bound.to_string()))?,
        Some(depth) => {
            let plus = hyperbola_generate(depth);
            match eps {
                Sign::Plus => plus,
                Sign::Minus => {
                    let mut v: Vec<_> = plus
                        .iter()
                        .map(|s| s_transform(s).expect("generated solutions have eps = +1"))
                        .collect();
                    v.sort();
                    v
                }
            }
        }
    };
    let mut text = format!("{} solutions (eps = {})\n", solutions.len(), eps);
    for s in &solutions {
        text.push_str(&format!("{}\n", s));
    }
    let record = OutputRecord::new(
        "hyperbola",
        json!({
            "eps": eps.value(),
            "bound": args.bound,
            "generate": args.generate,
        }),
        json!({ "solutions": solutions.iter().map(hyperbola_value).collect::<Vec<_>>() }),
    );
    Ok(Rendered { record, text, exit: EXIT_OK })
}

fn run_markov(mode: &MarkovCommand) -> Result<Rendered, UsageError> {
    match mode {
        MarkovCommand::Brute { max } => {
            let triples = markov_brute_force(*max).map_err(|e| match e {
                DiophantineError::BoundOutOfRange { .. } => {
                    UsageError::limit(e.to_string(), max.to_string())
                }
                _ => UsageError::new(e.to_string(), max.to_string()),
            })?;
            let mut text = format!("{} triples with max component <= {}\n", triples.len(), max);
            for t in &triples {
                text.push_str(&format!("{}\n", t));
            }
            let record = OutputRecord::new(
                "markov-brute",
                json!({ "max": max }),
                json!({ "triples": triples.iter().map(triple_value).collect::<Vec<_>>() }),
            );
            Ok(Rendered { record, text, exit: EXIT_OK })
        }
        MarkovCommand::Tree { depth } => {
            let tree = markov_tree(*depth);
            let mut text = format!("{} nodes to depth {}\n", tree.nodes().len(), depth);
            for node in tree.nodes() {
                text.push_str(&format!(
                    "depth={} {} parent={}\n",
                    node.depth,
                    node.triple,
                    node.parent.map_or("-".to_string(), |p| p.to_string())
                ));
            }
            let nodes: Vec<Value> = tree
                .nodes()
                .iter()
                .map(|n| {
                    json!({
                        "triple": triple_value(&n.triple),
                        "parent": n.parent,
                        "depth": n.depth,
                    })
                })
                .collect();
            let record = OutputRecord::new(
                "markov-tree",
                json!({ "depth": depth }),
                json!({ "nodes": nodes }),
            );
            Ok(Rendered { record, text, exit: EXIT_OK })
        }
    }
}

fn run_factorize(args: &FactorizeArgs) -> Result<Rendered, UsageError> {
    let target = parse_matrix(&args.target)?;
    if !target.det().is_one() {
        return Err(UsageError::new(
            format!("target must have determinant +1, got {}", target.det()),
            &args.target,
        ));
    }
    if args.length != 2 && args.length != 3 {
        return Err(UsageError::new("length must be 2 or 3", args.length.to_string()));
    }
    let filter = match args.eps.as_str() {
        "all" => EpsFilter::All,
        "+1" | "1" => EpsFilter::Plus,
        "-1" => EpsFilter::Minus,
        other => return Err(UsageError::new("eps must be +1, -1, or all", other)),
    };
    let scan = classifier::factorize_target(&target, args.length, args.bound, filter)
        .map_err(|e| UsageError::limit(e.to_string(), args.bound.to_string()))?;
    let mut text = String::new();
    let sector = |name: &str, list: &Vec<Vec<ParabolicParams>>| {
        let mut s = format!("{}: {} solutions\n", name, list.len());
        for sol in list {
            s.push_str(&format!("{}\n", params_text(sol)));
        }
        s
    };
    text.push_str(&sector("eps=+1", &scan.plus));
    text.push_str(&sector("eps=-1", &scan.minus));
    if filter == EpsFilter::All {
        text.push_str(&sector("mixed", &scan.mixed));
    }
    let to_json = |list: &Vec<Vec<ParabolicParams>>| -> Value {
        Value::Array(
            list.iter()
                .map(|sol| Value::Array(sol.iter().map(params_value).collect()))
                .collect(),
        )
    };
    let record = OutputRecord::new(
        "factorize",
        json!({
            "target": mat_value(&target),
            "length": args.length,
            "bound": args.bound,
            "eps": args.eps,
        }),
        json!({
            "plus": to_json(&scan.plus),
            "minus": to_json(&scan.minus),
            "mixed": to_json(&scan.mixed),
        }),
    );
    Ok(Rendered { record, text, exit: EXIT_OK })
}

fn run_hurwitz(args: &HurwitzArgs) -> Result<Rendered, UsageError> {
    let params = parse_tuple(&args.tuple)?;
    let moves = parse_moves(&args.moves)?;
    let start = Factorization::from_params(&params);
    let mut current = start.clone();
    for &(forward, index) in &moves {
        current = if forward {
            current.hurwitz_move(index)
        } else {
            current.inverse_hurwitz_move(index)
        }
        .map_err(|e| UsageError::new(e.to_string(), &args.moves))?;
    }
    let text = format!(
        "before: {}\nafter:  {}\ntarget: {}\n",
        params_text(&start.params()),
        params_text(&current.params()),
        current.target()
    );
    let record = OutputRecord::new(
        "hurwitz",
        json!({ "tuple": args.tuple, "moves": args.moves }),
        json!({
            "before": factorization_value(&start),
            "after": factorization_value(&current),
        }),
    );
    Ok(Rendered { record, text, exit: EXIT_OK })
}

fn run_orbit(args: &OrbitArgs, strict: bool) -> Result<Rendered, UsageError> {
    let params = parse_tuple(&args.tuple)?;
    let mut conjugators = Vec::new();
    for c in &args.conjugators {
        let m = parse_matrix(c)?;
        if !m.is_unimodular() {
            return Err(UsageError::new("conjugator must be unimodular", c));
        }
        conjugators.push(m);
    }
    let start = Factorization::from_params(&params);
    let report = orbit_explore(&start, &conjugators, args.max_nodes)
        .map_err(|e| UsageError::new(e.to_string(), args.max_nodes.to_string()))?;
    let mut text = format!(
        "{} representatives, move_count={}, truncated={}\n",
        report.representatives.len(),
        report.move_count,
        report.truncated
    );
    for f in &report.representatives {
        text.push_str(&format!("{} -> {}\n", params_text(&f.params()), f.target()));
    }
    let record = OutputRecord::new(
        "orbit",
        json!({
            "tuple": args.tuple,
            "conjugators": args.conjugators,
            "max_nodes": args.max_nodes,
        }),
        json!({
            "representatives": report.representatives.iter().map(factorization_value).collect::<Vec<_>>(),
            "move_count": report.move_count,
            "truncated": report.truncated,
        }),
    );
    let exit = if strict && report.truncated { EXIT_LIMIT } else { EXIT_OK };
    Ok(Rendered { record, text, exit })
}

fn run_verify(args: &VerifyArgs) -> Result<Rendered, UsageError> {
    let cfg = VerifyConfig {
        constants: PaperConstants::default(),
        bound_2pt: args.bound_2pt,
        bound_3pt: args.bound_3pt,
        depth: args.depth,
        ..VerifyConfig::default()
    };
    let report = classifier::verify_paper(&cfg);
    let mut text = String::new();
    for check in &report.checks {
        let verdict = if check.pass { "PASS" } else { "FAIL" };
        let bounds = if check.bounds.is_empty() {
            String::new()
        } else {
            let parts: Vec<String> = check
                .bounds
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            format!(" [{}]", parts.join(", "))
        };
        text.push_str(&format!("[{}] {}{} — {}\n", verdict, check.id, bounds, check.anchor));
    }
    let passed = report.passed();
    text.push_str(&format!(
        "{}: {} of {} checks passed\n",
        if passed { "OK" } else { "FAILED" },
        report.checks.iter().filter(|c| c.pass).count(),
        report.checks.len()
    ));
    let record = OutputRecord::new(
        "verify-paper",
        json!({
            "bound_2pt": args.bound_2pt,
            "bound_3pt": args.bound_3pt,
            "depth": args.depth,
        }),
        report.to_value(),
    );
    if let Some(path) = &args.report {
        let doc = record.render();
        std::fs::write(path, doc)
            .map_err(|e| UsageError::new(e.to_string(), path.display().to_string()))?;
    }
    let exit = if passed { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
    Ok(Rendered { record, text, exit })
}

fn configure_thread_pool() {
    if let Ok(value) = std::env::var("MONODROMY_THREADS") {
        if let Ok(n) = value.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

/// Parses `argv` (including the program name), runs the command, streams
/// output, and returns the exit code.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    configure_thread_pool();
    let result = match &cli.command {
        Command::Hyperbola(args) => run_hyperbola(args),
        Command::Markov { mode } => run_markov(mode),
        Command::Factorize(args) => run_factorize(args),
        Command::Hurwitz(args) => run_hurwitz(args),
        Command::Orbit(args) => run_orbit(args, cli.strict),
        Command::VerifyPaper(args) => run_verify(args),
    };
    match result {
        Ok(rendered) => {
            if !cli.quiet {
                if cli.json {
                    print!("{}", rendered.record.render());
                } else {
                    print!("{}", rendered.text);
                }
            }
            rendered.exit
        }
        Err(usage) => {
            eprintln!("error: {} (offending token `{}`)", usage.message, usage.token);
            if usage.limit { EXIT_LIMIT } else { EXIT_USAGE }
        }
    }
}

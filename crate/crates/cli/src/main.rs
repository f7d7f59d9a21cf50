//! `mret`: evaluate, optimise and reduce edge temporalisations.
//!
//! Exit codes: 0 success, 1 invalid input, 2 scale limit exceeded.

mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use mret_core::astra::{pair_for_root, EXACT_EDGE_LIMIT};
use mret_core::reduction::{build_with_params, InstanceManifest, ReductionError};
use mret_core::solvers::EXACT_SCHEDULE_LIMIT;
use mret_core::{
    best_root, build_instance, certify, check_bounds, evaluate_order, evaluate_temporalisation,
    gen_fig3, gen_random_sc, schedule_from_assignment, solve_arborescence, solve_exact,
    solve_local, Assignment, AstraError, CnfFormula, Digraph, PairMethod, ReductionParams,
    RootChoice, Schedule, SolveError, Temporalisation,
};
use serde::Serialize;
use serde_json::{json, Value};

use run::{with_ext, CmdResult, Failure, Run};

/// Largest instance `reduce` and `certify` will materialise by default.
const DEFAULT_MAX_EDGES: u64 = 5_000_000;
/// Largest formula `certify --assignment auto` will search exhaustively.
const AUTO_ASSIGNMENT_VARS: usize = 20;

#[derive(Parser)]
#[command(
    name = "mret",
    version,
    about = "Temporal reachability of edge schedules on digraphs"
)]
struct Cli {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for the parallel searches (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the run manifest here instead of stderr.
    #[arg(long, global = true, value_name = "PATH")]
    run_manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Temporal reachability of a schedule or temporalisation.
    Eval(EvalArgs),
    /// Search for a schedule with high reachability.
    Solve(SolveArgs),
    /// Build the reduction instance of a 3-CNF formula.
    Reduce(ReduceArgs),
    /// Evaluate a schedule on a reduction instance against the bound L.
    Certify(CertifyArgs),
    /// Exact values of the bounds L, U1, U2.
    Bounds(BoundsArgs),
    /// Edge-disjoint in/out arborescence pairs sharing a root.
    Astra(AstraArgs),
    /// Generate a graph family.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Convert between temporal graphs and schedules.
    #[command(subcommand)]
    Convert(ConvertCommand),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Solve(_) => "solve",
            Command::Reduce(_) => "reduce",
            Command::Certify(_) => "certify",
            Command::Bounds(_) => "bounds",
            Command::Astra(_) => "astra",
            Command::Gen(_) => "gen",
            Command::Convert(_) => "convert",
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Digraph file, or a temporal-graph file when ORDER is omitted.
    graph: PathBuf,
    /// Schedule file (edge indices), or per-edge labels with --labels.
    order: Option<PathBuf>,
    /// Read ORDER as one time label per edge; equal labels fire together.
    #[arg(long)]
    labels: bool,
    /// Include the number of nodes each source reaches.
    #[arg(long)]
    per_source: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMethod {
    Exact,
    Local,
    Arb,
}

#[derive(Args)]
struct SolveArgs {
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = SolveMethod::Exact)]
    method: SolveMethod,
    /// Edge limit for the exact search.
    #[arg(long, default_value_t = EXACT_SCHEDULE_LIMIT)]
    limit: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Local search restarts.
    #[arg(long, default_value_t = 8)]
    restarts: u64,
    /// Local search steps per restart.
    #[arg(long, default_value_t = 2000)]
    steps: u64,
    /// Arborescence root; all roots when omitted.
    #[arg(long)]
    root: Option<usize>,
    /// Write the best schedule here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// DIMACS 3-CNF file.
    cnf: PathBuf,
    /// Pendant nodes per clause (default 91nm).
    #[arg(long)]
    k: Option<u64>,
    /// Block nodes (default (|H|+5)^2+1).
    #[arg(long = "m-param")]
    m_param: Option<u64>,
    /// Writes PREFIX.graph, PREFIX.roles and PREFIX.json.
    #[arg(long, value_name = "PREFIX")]
    out: PathBuf,
    /// Refuse to materialise instances with more edges than this.
    #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
    max_edges: u64,
    /// Write only PREFIX.json; works at any size.
    #[arg(long)]
    manifest_only: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["assignment", "schedule"])))]
struct CertifyArgs {
    /// Prefix written by `reduce`.
    prefix: PathBuf,
    /// Truth values such as FTT or 011, or `auto` for exhaustive search.
    #[arg(long)]
    assignment: Option<String>,
    /// Schedule file over the instance edges.
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// Write the evaluated schedule here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
    max_edges: u64,
}

#[derive(Args)]
struct BoundsArgs {
    /// Number of variables, or an inclusive range such as 3..6.
    #[arg(long, value_parser = parse_range)]
    n: (u64, u64),
    /// Number of clauses, or an inclusive range.
    #[arg(long, value_parser = parse_range)]
    m: (u64, u64),
    #[arg(long)]
    k: Option<u64>,
    #[arg(long = "m-param")]
    m_param: Option<u64>,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok((a, b))
        }
        None => num(s).map(|v| (v, v)),
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AstraMethod {
    Exact,
    Greedy,
}

#[derive(Args)]
struct AstraArgs {
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = AstraMethod::Exact)]
    method: AstraMethod,
    /// Report the pair at this root only.
    #[arg(long)]
    root: Option<usize>,
    /// Edge limit for the exact search.
    #[arg(long, default_value_t = EXACT_EDGE_LIMIT)]
    limit: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Counterexample family with chain length k (n = 3k + 8).
    Fig3 {
        #[arg(long)]
        k: usize,
        /// Writes PREFIX.graph and PREFIX.roles; the graph goes to stdout otherwise.
        #[arg(long, value_name = "PREFIX")]
        out: Option<PathBuf>,
    },
    /// Hamiltonian cycle plus random extra edges.
    RandomSc {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Writes PREFIX.graph; the graph goes to stdout otherwise.
        #[arg(long, value_name = "PREFIX")]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConvertCommand {
    /// Temporal-graph file to a digraph file and a schedule (ties by edge index).
    ToSchedule {
        temporal: PathBuf,
        /// Digraph output.
        #[arg(long)]
        graph_out: Option<PathBuf>,
        /// Schedule output; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Digraph and schedule to a temporal-graph file with labels 1..m.
    ToTemporal {
        graph: PathBuf,
        schedule: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a command prints on stdout.
enum Output {
    Report(Value),
    Raw(String),
    Nothing,
}

fn report<T: Serialize>(v: &T) -> CmdResult<Output> {
    serde_json::to_value(v)
        .map(Output::Report)
        .map_err(Failure::invalid)
}

fn invalid<E: std::fmt::Display>(e: E) -> Failure {
    Failure::invalid(e)
}

fn solve_failure(e: SolveError) -> Failure {
    match e {
        SolveError::TooLarge { .. } | SolveError::Pair(AstraError::TooLarge { .. }) => {
            Failure::scale(e)
        }
        _ => Failure::invalid(e),
    }
}

fn astra_failure(e: AstraError) -> Failure {
    match e {
        AstraError::TooLarge { .. } => Failure::scale(e),
        _ => Failure::invalid(e),
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
    parts.join(" ") + "\n"
}

fn load_graph(run: &mut Run, path: &Path) -> CmdResult<Digraph> {
    run.load(path, Digraph::parse, Digraph::to_text)
}

fn load_order(run: &mut Run, path: &Path) -> CmdResult<Vec<usize>> {
    run.load(path, Schedule::parse, |o| join(o))
}

fn cmd_eval(run: &mut Run, a: &EvalArgs) -> CmdResult<Output> {
    let (g, r) = match &a.order {
        None => {
            let (g, t) = run.load(&a.graph, Temporalisation::parse_temporal_graph, |(g, t)| {
                t.to_temporal_text(g)
            })?;
            let r = evaluate_temporalisation(&g, &t).map_err(invalid)?;
            (g, r)
        }
        Some(path) => {
            let g = load_graph(run, &a.graph)?;
            let r = if a.labels {
                let t = run.load(path, Temporalisation::parse_labels, |t| join(t.times()))?;
                evaluate_temporalisation(&g, &t)
            } else {
                let order = load_order(run, path)?;
                evaluate_order(&g, &order)
            }
            .map_err(invalid)?;
            (g, r)
        }
    };
    let mut v = json!({
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "total": r.total(),
    });
    if a.per_source {
        v["per_source"] = json!(r.per_source_counts());
    }
    Ok(Output::Report(v))
}

fn cmd_solve(run: &mut Run, a: &SolveArgs) -> CmdResult<Output> {
    let g = load_graph(run, &a.graph)?;
    let result = match a.method {
        SolveMethod::Exact => solve_exact(&g, a.limit),
        SolveMethod::Local => {
            run.seed = Some(a.seed);
            solve_local(&g, a.seed, a.restarts, a.steps)
        }
        SolveMethod::Arb => {
            run.seed = Some(a.seed);
            let roots = a.root.map_or(RootChoice::All, RootChoice::Given);
            solve_arborescence(&g, roots, a.seed)
        }
    }
    .map_err(solve_failure)?;
    if let Some(out) = &a.out {
        run.write(out, &result.best_schedule.to_text())?;
    }
    report(&result)
}

fn cmd_reduce(run: &mut Run, a: &ReduceArgs) -> CmdResult<Output> {
    let f = run.load(&a.cnf, CnfFormula::parse_dimacs, CnfFormula::to_dimacs)?;
    let params = ReductionParams::with_overrides(
        f.variables() as u64,
        f.clauses().len() as u64,
        a.k,
        a.m_param,
    )
    .map_err(invalid)?;
    let edges = params.edge_count();
    let manifest = if a.manifest_only {
        InstanceManifest {
            bounds: check_bounds(&params),
            node_count: to_usize(params.node_count())?,
            edge_count: to_usize(edges.clone())?,
            clauses: f.dimacs_clauses(),
        }
    } else {
        if edges > a.max_edges.into() {
            return Err(Failure::scale(format!(
                "instance has {edges} edges, above --max-edges {}; use --manifest-only for the bounds",
                a.max_edges
            )));
        }
        let inst = build_instance(&f, a.k, a.m_param).map_err(invalid)?;
        run.write(&with_ext(&a.out, "graph"), &inst.digraph.to_text())?;
        run.write(&with_ext(&a.out, "roles"), &inst.roles_text())?;
        inst.manifest()
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(invalid)? + "\n";
    run.write(&with_ext(&a.out, "json"), &text)?;
    report(&manifest)
}

fn to_usize<T: TryInto<usize>>(x: T) -> CmdResult<usize> {
    x.try_into()
        .map_err(|_| Failure::scale("instance size exceeds the address space"))
}

fn cmd_certify(run: &mut Run, a: &CertifyArgs) -> CmdResult<Output> {
    let manifest: InstanceManifest = run.load(
        &with_ext(&a.prefix, "json"),
        |t: &str| serde_json::from_str::<InstanceManifest>(t),
        |m| serde_json::to_string_pretty(m).unwrap_or_default() + "\n",
    )?;
    let f = manifest.formula().map_err(invalid)?;
    let params = manifest.bounds.params;
    if params.edge_count() > a.max_edges.into() {
        return Err(Failure::scale(format!(
            "instance has {} edges, above --max-edges {}",
            params.edge_count(),
            a.max_edges
        )));
    }
    let inst = build_with_params(&f, params).map_err(invalid)?;
    let g = load_graph(run, &with_ext(&a.prefix, "graph"))?;
    if g != inst.digraph {
        return Err(Failure::invalid(
            "graph file does not match the instance described by the manifest",
        ));
    }

    let mut assignment = None;
    let schedule = match (&a.assignment, &a.schedule) {
        (Some(bits), _) => {
            let asg = if bits == "auto" {
                if f.variables() > AUTO_ASSIGNMENT_VARS {
                    return Err(Failure::scale(format!(
                        "exhaustive assignment search is limited to {AUTO_ASSIGNMENT_VARS} variables"
                    )));
                }
                f.brute_force_assignment(AUTO_ASSIGNMENT_VARS)
                    .ok_or_else(|| Failure::invalid("formula is unsatisfiable"))?
            } else {
                Assignment::parse(bits).map_err(invalid)?
            };
            let s = schedule_from_assignment(&inst, &asg).map_err(|e| match e {
                ReductionError::Unsatisfied { .. } => {
                    Failure::invalid(format!("not a satisfying assignment: {e}"))
                }
                e => Failure::invalid(e),
            })?;
            assignment = Some(asg.to_string());
            s
        }
        (None, Some(path)) => {
            let order = load_order(run, path)?;
            Schedule::new(order, inst.digraph.edge_count()).map_err(invalid)?
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    if let Some(out) = &a.out {
        run.write(out, &schedule.to_text())?;
    }
    let verdict = certify(&inst, &schedule).map_err(invalid)?;
    let mut v = serde_json::to_value(&verdict).map_err(invalid)?;
    if let Some(asg) = assignment {
        v["assignment"] = json!(asg);
    }
    Ok(Output::Report(v))
}

fn cmd_bounds(a: &BoundsArgs) -> CmdResult<Output> {
    let mut reports = Vec::new();
    for n in a.n.0..=a.n.1 {
        for m in a.m.0..=a.m.1 {
            let p = ReductionParams::with_overrides(n, m, a.k, a.m_param).map_err(invalid)?;
            reports.push(check_bounds(&p));
        }
    }
    if reports.len() == 1 {
        report(&reports[0])
    } else {
        report(&reports)
    }
}

fn cmd_astra(run: &mut Run, a: &AstraArgs) -> CmdResult<Output> {
    let g = load_graph(run, &a.graph)?;
    let method = match a.method {
        AstraMethod::Exact => PairMethod::Exact { limit: a.limit },
        AstraMethod::Greedy => {
            run.seed = Some(a.seed);
            PairMethod::Greedy { seed: a.seed }
        }
    };
    match a.root {
        Some(root) => {
            let pair = pair_for_root(&g, root, method).map_err(astra_failure)?;
            let mut v = serde_json::to_value(&pair).map_err(invalid)?;
            v["min_size"] = json!(pair.min_size());
            v["method"] = serde_json::to_value(method).map_err(invalid)?;
            Ok(Output::Report(v))
        }
        None => report(&best_root(&g, method).map_err(astra_failure)?),
    }
}

fn cmd_gen(run: &mut Run, c: &GenCommand) -> CmdResult<Output> {
    let (g, roles, out) = match c {
        GenCommand::Fig3 { k, out } => {
            let (g, roles) = gen_fig3(*k).map_err(invalid)?;
            let text: String = roles
                .iter()
                .enumerate()
                .map(|(v, r)| format!("{v} {r}\n"))
                .collect();
            (g, Some(text), out)
        }
        GenCommand::RandomSc {
            n,
            extra,
            seed,
            out,
        } => {
            run.seed = Some(*seed);
            (
                gen_random_sc(*n, *extra, *seed).map_err(invalid)?,
                None,
                out,
            )
        }
    };
    match out {
        None => Ok(Output::Raw(g.to_text())),
        Some(prefix) => {
            run.write(&with_ext(prefix, "graph"), &g.to_text())?;
            if let Some(roles) = roles {
                run.write(&with_ext(prefix, "roles"), &roles)?;
            }
            Ok(Output::Nothing)
        }
    }
}

fn cmd_convert(run: &mut Run, c: &ConvertCommand) -> CmdResult<Output> {
    let (text, out) = match c {
        ConvertCommand::ToSchedule {
            temporal,
            graph_out,
            out,
        } => {
            let (g, t) = run.load(temporal, Temporalisation::parse_temporal_graph, |(g, t)| {
                t.to_temporal_text(g)
            })?;
            if let Some(path) = graph_out {
                run.write(path, &g.to_text())?;
            }
            (t.to_schedule().to_text(), out)
        }
        ConvertCommand::ToTemporal {
            graph,
            schedule,
            out,
        } => {
            let g = load_graph(run, graph)?;
            let order = load_order(run, schedule)?;
            let s = Schedule::new(order, g.edge_count()).map_err(invalid)?;
            (Temporalisation::from_schedule(&s).to_temporal_text(&g), out)
        }
    };
    match out {
        Some(path) => {
            run.write(path, &text)?;
            Ok(Output::Nothing)
        }
        None => Ok(Output::Raw(text)),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render_field(out: &mut String, key: &str, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                render_field(out, &format!("{key}.{k}"), item);
            }
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            out.push_str(&format!("{key}: {}\n", parts.join(" ")));
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match item {
                    Value::Object(map) if map.values().all(is_scalar) => {
                        let parts: Vec<String> = map
                            .iter()
                            .map(|(k, x)| format!("{k}={}", scalar_text(x)))
                            .collect();
                        out.push_str(&format!("{key}[{i}]: {}\n", parts.join(" ")));
                    }
                    other => render_field(out, &format!("{key}[{i}]"), other),
                }
            }
        }
        scalar => out.push_str(&format!("{key}: {}\n", scalar_text(scalar))),
    }
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                render_field(&mut out, k, item);
            }
        }
        Value::Array(items) => {
            for item in items {
                out.push_str(&render_text(item));
                out.push('\n');
            }
        }
        scalar => out.push_str(&format!("{}\n", scalar_text(scalar))),
    }
    out
}

fn dispatch(run: &mut Run, command: &Command) -> CmdResult<Output> {
    match command {
        Command::Eval(a) => cmd_eval(run, a),
        Command::Solve(a) => cmd_solve(run, a),
        Command::Reduce(a) => cmd_reduce(run, a),
        Command::Certify(a) => cmd_certify(run, a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Astra(a) => cmd_astra(run, a),
        Command::Gen(c) => cmd_gen(run, c),
        Command::Convert(c) => cmd_convert(run, c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }

    let mut run = Run::new();
    let outcome = dispatch(&mut run, &cli.command);
    let code = match outcome {
        Ok(Output::Report(v)) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&v).expect("serializable")
                ),
                Format::Text => print!("{}", render_text(&v)),
            }
            0
        }
        Ok(Output::Raw(text)) => {
            print!("{text}");
            0
        }
        Ok(Output::Nothing) => 0,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            f.exit_code()
        }
    };

    let arguments = std::env::args().skip(1).collect();
    let manifest = run.finish(cli.command.name(), arguments, cli.threads, code);
    let json = serde_json::to_string(&manifest).expect("serializable");
    match &cli.run_manifest {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                eprintln!("error: cannot write run manifest {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => eprintln!("{json}"),
    }
    ExitCode::from(code as u8)
}

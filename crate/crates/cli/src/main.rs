//! Command-line front end: batch analysis of graphs with machine-readable
//! output. All results go to standard output, diagnostics to standard
//! error. Exit status: 0 success, 2 input error, 3 precision-escalation
//! exhaustion.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::json;
use std::fs;
use std::io::Read;
use std::process::ExitCode;
use walkcent_core::centrality::{self, Beta, CentralityError, CentralityReport};
use walkcent_core::exact;
use walkcent_core::graph::{self, Graph, VertexPair};
use walkcent_core::miner::{self, MineTask, Predicate};
use walkcent_core::solver::{self, ScanOptions, SolverError};
use walkcent_core::spectral::{self, Precision};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "walkcent",
    version,
    about = "Walk-based graph centralities, exact cospectrality decisions, and equalizing-beta location"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Edgelist,
    G6,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FnChoice {
    Subgraph,
    SubgraphTaylor,
    SubgraphSpectral,
    Resolvent,
    Degree,
    Eigenvector,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Input path; standard input when absent or "-"
    path: Option<String>,
    /// Input format
    #[arg(long, value_enum, default_value = "edgelist")]
    format: InputFormat,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Decimal precision (>= 30)
    #[arg(long, default_value_t = 50)]
    prec: u32,
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    output: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: walk table, cospectral classes, spectral data,
    /// subgraph centrality, entropy, degree/eigenvector, crossing scan
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Inverse temperature, a nonzero rational like "1", "1/2", "0.25"
        #[arg(long, default_value = "1")]
        beta: String,
        #[arg(long, default_value = "20")]
        bmax: String,
        #[arg(long, default_value = "1/100")]
        step: String,
    },
    /// Exact cospectrality classes
    Cospectral {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exact walk-regularity decision
    Walkreg {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// One centrality report
    Centrality {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long = "fn", value_enum)]
        function: FnChoice,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Walk entropy of the subgraph-centrality distribution
    Entropy {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "1")]
        beta: String,
    },
    /// Scan and refine equalizing-beta roots; without --pair, all pairs
    /// plus the graph-level regularity search
    SolveBeta {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Restrict to one vertex pair "i,j"
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, default_value = "20")]
        bmax: String,
        #[arg(long, default_value = "1/100")]
        step: String,
    },
    /// Batch-scan a graph6 stream for findings
    Mine {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Predicate to evaluate (repeatable): cospectral-nonauto,
        /// walk-regular, crossing-pair, regularity-candidate
        #[arg(long = "predicate", required = true)]
        predicates: Vec<String>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value = "20")]
        bmax: String,
        #[arg(long, default_value = "1/100")]
        step: String,
    },
}

enum CliError {
    Input(String),
    Escalation(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Escalation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Escalation(m) => m,
        }
    }
}

fn input_err(msg: impl ToString) -> CliError {
    CliError::Input(msg.to_string())
}

impl From<CentralityError> for CliError {
    fn from(e: CentralityError) -> Self {
        match e {
            CentralityError::EscalationExhausted(_) => CliError::Escalation(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::ResidualStalled | SolverError::PrecisionTooCoarse => {
                CliError::Escalation(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

fn read_input(input: &InputArgs) -> Result<String, CliError> {
    match input.path.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(input_err)?;
            Ok(buf)
        }
        Some(path) => fs::read_to_string(path).map_err(|e| input_err(format!("{path}: {e}"))),
    }
}

fn load_graph(input: &InputArgs) -> Result<Graph, CliError> {
    let text = read_input(input)?;
    match input.format {
        InputFormat::Edgelist => graph::parse_edge_list(&text).map_err(input_err),
        InputFormat::G6 => {
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .ok_or_else(|| input_err("empty graph6 input"))?;
            graph::parse_graph6(line).map_err(input_err)
        }
    }
}

fn parse_rational_flag(name: &str, text: &str) -> Result<BigRational, CliError> {
    graph::rational_literal(text.trim())
        .ok_or_else(|| input_err(format!("--{name}: not a rational literal: {text:?}")))
}

fn parse_precision(p: u32) -> Result<Precision, CliError> {
    Precision::new(p).map_err(input_err)
}

fn parse_scan(bmax: &str, step: &str) -> Result<ScanOptions, CliError> {
    let b_max = parse_rational_flag("bmax", bmax)?;
    let step = parse_rational_flag("step", step)?;
    if !b_max.is_positive() || !step.is_positive() {
        return Err(input_err("--bmax and --step must be positive"));
    }
    Ok(ScanOptions { b_max, step })
}

fn print_json(v: &serde_json::Value) {
    println!("{v}");
}

fn report_output(report: &CentralityReport, fmt: OutputFormat) -> Result<(), CliError> {
    match fmt {
        OutputFormat::Json => {
            let mut v = serde_json::to_value(report).map_err(input_err)?;
            v["schema_version"] = json!(SCHEMA_VERSION);
            print_json(&v);
        }
        OutputFormat::Csv => print!("{}", report.to_csv()),
        OutputFormat::Table => {
            let digits = report.precision.digits();
            println!("vertex  class  value");
            for (v, val) in report.values.iter().enumerate() {
                println!(
                    "{:<7} {:<6} {}",
                    v,
                    report.classes[v],
                    val.to_decimal_trunc(digits)
                );
            }
        }
    }
    Ok(())
}

fn subgraph_report(
    g: &Graph,
    beta: &BigRational,
    prec: Precision,
) -> Result<(CentralityReport, Precision), CliError> {
    let a = g.adjacency_matrix();
    if g.directed() {
        let report = centrality::subgraph_centrality_taylor(&a, beta, prec)?;
        Ok((report, prec))
    } else {
        Ok(centrality::subgraph_equivalence_escalating(&a, beta, prec)?)
    }
}

fn run_analyze(
    input: &InputArgs,
    common: &CommonArgs,
    beta_text: &str,
    bmax: &str,
    step: &str,
) -> Result<(), CliError> {
    if common.output != OutputFormat::Json {
        return Err(input_err("analyze supports only --output json"));
    }
    let g = load_graph(input)?;
    let prec = parse_precision(common.prec)?;
    let beta = parse_rational_flag("beta", beta_text)?;
    let scan_opts = parse_scan(bmax, step)?;
    let a = g.adjacency_matrix();
    let n = g.n();

    let walk_table = exact::walk_counts(&a, n.max(2));
    let classes = exact::cospectral_classes(&a);
    let walk_regular = exact::walk_regular(&a);

    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "n": n,
        "directed": g.directed(),
        "precision": prec.digits(),
        "walk_table": serde_json::to_value(&walk_table).map_err(input_err)?,
        "cospectral_classes": classes,
        "walk_regular": walk_regular,
    });

    let (sc_report, sc_prec) = subgraph_report(&g, &beta, prec)?;
    let entropy = centrality::walk_entropy(&sc_report, sc_prec)?;
    doc["subgraph_centrality"] = serde_json::to_value(&sc_report).map_err(input_err)?;
    doc["entropy"] = serde_json::to_value(&entropy).map_err(input_err)?;

    if g.directed() {
        doc["spectral"] = json!(null);
        doc["note"] = json!("directed input: spectral sections skipped");
    } else {
        let sd = spectral::decompose(&a, prec).map_err(input_err)?;
        doc["spectral"] = serde_json::to_value(&sd).map_err(input_err)?;
        let degree = centrality::degree_report(&a, prec)?;
        doc["degree"] = serde_json::to_value(&degree).map_err(input_err)?;
        if g.is_connected() {
            let eig = centrality::eigenvector_report(&a, prec)?;
            doc["eigenvector"] = serde_json::to_value(&eig).map_err(input_err)?;
        } else {
            doc["eigenvector"] = json!(null);
        }
        // crossing scan over non-cospectral pairs
        let mut crossings = Vec::new();
        if !walk_regular {
            for i in 0..n {
                for j in (i + 1)..n {
                    let pair = VertexPair::new(i, j, n).map_err(input_err)?;
                    let df = solver::build_diff(&sd, &a, pair)?;
                    if df.is_degenerate() {
                        continue;
                    }
                    let scan = solver::scan_roots(&df, &scan_opts)?;
                    for bracket in scan.brackets {
                        let root = solver::refine_root(&df, bracket, prec)?;
                        crossings.push(serde_json::to_value(&root).map_err(input_err)?);
                    }
                }
            }
        }
        doc["crossings"] = json!(crossings);
    }
    print_json(&doc);
    Ok(())
}

fn run_cospectral(input: &InputArgs, common: &CommonArgs) -> Result<(), CliError> {
    let g = load_graph(input)?;
    let a = g.adjacency_matrix();
    let classes = exact::cospectral_classes(&a);
    match common.output {
        OutputFormat::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "n": g.n(),
                "classes": classes,
                "walk_regular": classes.len() <= 1,
            });
            print_json(&doc);
        }
        OutputFormat::Csv => {
            println!("vertex,class");
            let mut assignment = vec![0usize; g.n()];
            for (cid, members) in classes.iter().enumerate() {
                for &v in members {
                    assignment[v] = cid;
                }
            }
            for (v, c) in assignment.iter().enumerate() {
                println!("{v},{c}");
            }
        }
        OutputFormat::Table => {
            println!("class  vertices");
            for (cid, members) in classes.iter().enumerate() {
                let list: Vec<String> = members.iter().map(|v| v.to_string()).collect();
                println!("{:<6} {}", cid, list.join(" "));
            }
        }
    }
    Ok(())
}

fn run_walkreg(input: &InputArgs, common: &CommonArgs) -> Result<(), CliError> {
    if common.output != OutputFormat::Json {
        return Err(input_err("walkreg supports only --output json"));
    }
    let g = load_graph(input)?;
    let a = g.adjacency_matrix();
    let wr = exact::walk_regular(&a);
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "n": g.n(),
        "walk_regular": wr,
    });
    print_json(&doc);
    Ok(())
}

fn run_centrality(
    input: &InputArgs,
    common: &CommonArgs,
    function: FnChoice,
    beta: Option<&str>,
    alpha: Option<&str>,
) -> Result<(), CliError> {
    let g = load_graph(input)?;
    let a = g.adjacency_matrix();
    let prec = parse_precision(common.prec)?;
    let need_beta = || -> Result<BigRational, CliError> {
        let text = beta.ok_or_else(|| input_err("--beta required for subgraph centrality"))?;
        parse_rational_flag("beta", text)
    };
    let report = match function {
        FnChoice::Subgraph => subgraph_report(&g, &need_beta()?, prec)?.0,
        FnChoice::SubgraphTaylor => {
            centrality::subgraph_centrality_taylor(&a, &need_beta()?, prec)?
        }
        FnChoice::SubgraphSpectral => {
            let sd = spectral::decompose(&a, prec).map_err(input_err)?;
            centrality::subgraph_centrality_spectral(&sd, &Beta::rational(need_beta()?)?, prec)?
        }
        FnChoice::Resolvent => {
            let text = alpha.ok_or_else(|| input_err("--alpha required for resolvent"))?;
            let alpha = parse_rational_flag("alpha", text)?;
            centrality::resolvent_centrality(&a, &alpha, prec)?
        }
        FnChoice::Degree => centrality::degree_report(&a, prec)?,
        FnChoice::Eigenvector => centrality::eigenvector_report(&a, prec)?,
    };
    report_output(&report, common.output)
}

fn run_entropy(input: &InputArgs, common: &CommonArgs, beta_text: &str) -> Result<(), CliError> {
    let g = load_graph(input)?;
    let prec = parse_precision(common.prec)?;
    let beta = parse_rational_flag("beta", beta_text)?;
    let (report, final_prec) = subgraph_report(&g, &beta, prec)?;
    let entropy = centrality::walk_entropy(&report, final_prec)?;
    match common.output {
        OutputFormat::Json => {
            let mut v = serde_json::to_value(&entropy).map_err(input_err)?;
            v["schema_version"] = json!(SCHEMA_VERSION);
            v["beta"] = json!(exact::rational_str(&beta));
            print_json(&v);
        }
        OutputFormat::Csv => {
            println!("vertex,weight");
            let digits = entropy.precision.digits();
            for (v, w) in entropy.weights.iter().enumerate() {
                println!("{},{}", v, w.to_decimal_trunc(digits));
            }
        }
        OutputFormat::Table => {
            let digits = entropy.precision.digits();
            println!("entropy  {}", entropy.entropy.to_decimal_trunc(digits));
            println!("ln_n     {}", entropy.ln_n.to_decimal_trunc(digits));
            println!("maximal  {}", entropy.maximal);
        }
    }
    Ok(())
}

fn run_solve_beta(
    input: &InputArgs,
    common: &CommonArgs,
    pair: Option<&str>,
    bmax: &str,
    step: &str,
) -> Result<(), CliError> {
    if common.output != OutputFormat::Json {
        return Err(input_err("solve-beta supports only --output json"));
    }
    let g = load_graph(input)?;
    let prec = parse_precision(common.prec)?;
    let opts = parse_scan(bmax, step)?;
    let a = g.adjacency_matrix();
    if let Some(spec) = pair {
        let (i, j) = spec
            .split_once(',')
            .and_then(|(x, y)| Some((x.trim().parse().ok()?, y.trim().parse().ok()?)))
            .ok_or_else(|| input_err("--pair expects \"i,j\""))?;
        let pair = VertexPair::new(i, j, g.n()).map_err(input_err)?;
        let sd = spectral::decompose(&a, prec).map_err(input_err)?;
        let df = solver::build_diff(&sd, &a, pair)?;
        if df.is_degenerate() {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "pair": [pair.i, pair.j],
                "cospectral": true,
                "roots": [],
            });
            print_json(&doc);
            return Ok(());
        }
        let scan = solver::scan_roots(&df, &opts)?;
        let mut roots = Vec::new();
        for bracket in scan.brackets {
            let root = solver::refine_root(&df, bracket, prec)?;
            roots.push(serde_json::to_value(&root).map_err(input_err)?);
        }
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "pair": [pair.i, pair.j],
            "cospectral": false,
            "roots": roots,
            "near_zero_dips": scan.near_zero_dips.iter().map(exact::rational_str).collect::<Vec<_>>(),
        });
        print_json(&doc);
        return Ok(());
    }
    if exact::walk_regular(&a) {
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "walk_regular": true,
            "pair_roots": [],
            "candidates": [],
        });
        print_json(&doc);
        return Ok(());
    }
    let report = solver::regularity_beta_search(&a, prec, &opts)?;
    let mut v = serde_json::to_value(&report).map_err(input_err)?;
    v["schema_version"] = json!(SCHEMA_VERSION);
    v["walk_regular"] = json!(false);
    print_json(&v);
    Ok(())
}

fn run_mine(
    input: &InputArgs,
    common: &CommonArgs,
    predicates: &[String],
    workers: usize,
    bmax: &str,
    step: &str,
) -> Result<bool, CliError> {
    if common.output != OutputFormat::Json {
        return Err(input_err("mine supports only --output json"));
    }
    if input.format != InputFormat::G6 {
        return Err(input_err("mine consumes graph6 streams; pass --format g6"));
    }
    let prec = parse_precision(common.prec)?;
    let preds: Vec<Predicate> = predicates
        .iter()
        .map(|p| Predicate::parse(p).ok_or_else(|| input_err(format!("unknown predicate {p:?}"))))
        .collect::<Result<_, _>>()?;
    let mut task = MineTask::new(preds, prec).map_err(input_err)?;
    task.workers = workers;
    task.scan = parse_scan(bmax, step)?;
    let text = read_input(input)?;
    let outcome = miner::mine(&task, std::io::Cursor::new(text.as_bytes())).map_err(input_err)?;
    for finding in &outcome.findings {
        let mut v = serde_json::to_value(finding).map_err(input_err)?;
        v["schema_version"] = json!(SCHEMA_VERSION);
        print_json(&v);
    }
    for (line, msg) in &outcome.summary.malformed_lines {
        eprintln!("line {line}: {msg}");
    }
    let mut v = serde_json::to_value(&outcome.summary).map_err(input_err)?;
    v["schema_version"] = json!(SCHEMA_VERSION);
    v["kind"] = json!("summary");
    print_json(&v);
    Ok(!outcome.summary.malformed_lines.is_empty())
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Analyze {
            input,
            common,
            beta,
            bmax,
            step,
        } => run_analyze(input, common, beta, bmax, step).map(|_| false),
        Command::Cospectral { input, common } => run_cospectral(input, common).map(|_| false),
        Command::Walkreg { input, common } => run_walkreg(input, common).map(|_| false),
        Command::Centrality {
            input,
            common,
            function,
            beta,
            alpha,
        } => run_centrality(input, common, *function, beta.as_deref(), alpha.as_deref())
            .map(|_| false),
        Command::Entropy {
            input,
            common,
            beta,
        } => run_entropy(input, common, beta).map(|_| false),
        Command::SolveBeta {
            input,
            common,
            pair,
            bmax,
            step,
        } => run_solve_beta(input, common, pair.as_deref(), bmax, step).map(|_| false),
        Command::Mine {
            input,
            common,
            predicates,
            workers,
            bmax,
            step,
        } => run_mine(input, common, predicates, *workers, bmax, step),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

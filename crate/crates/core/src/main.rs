use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sha2::{Digest, Sha256};

use degpart::cnf::{
    pad_literal_occurrences, parse_dimacs, sat_solve, serialize_dimacs, transform_connect, transform_occurrence_bound,
    CnfFormula, OccurrenceBound,
};
use degpart::gadgets::{build_gadget, GadgetKind};
use degpart::graph::{parse_graph, serialize_dot, serialize_edge_list, Graph, PartProperty, Partition, Target};
use degpart::reductions::prepare::for_ring;
use degpart::reductions::Reduction;
use degpart::ring::{build_ring, raw_ring_oracle, ring_theorem_oracle, RAW_MAX_VARS};
use degpart::solvers::{solve, Answer, Budget, Method};
use degpart::verification::{check_claim, verify_reduction, Claim, ClaimOptions, CorpusSpec, Report};

const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;
const EXIT_IO: u8 = 74;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn parse_err(e: impl std::fmt::Display) -> CliError {
    CliError::Parse(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "degpart", version, about = "Degree-constrained 2-partitions: solvers, SAT reductions, verification")]
struct Cli {
    /// Worker threads for parallel campaigns (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a graph has a partition meeting the target.
    Solve(SolveArgs),
    /// Build a reduction graph from a CNF file.
    Gen(GenArgs),
    /// Apply a formula transformation.
    Cnf(CnfArgs),
    /// Decide satisfiability through the ring graph.
    Oracle(OracleArgs),
    /// Run an equivalence campaign for one builder.
    Verify(VerifyArgs),
    /// Check a structural claim on small graphs.
    CheckClaims(ClaimArgs),
    /// Export a graph as DOT.
    Export(ExportArgs),
    /// Print a gadget graph.
    Gadget(GadgetArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetKind {
    /// Minimum degree at least k1 and k2.
    Degree,
    /// First part connected, second 2-edge-connected.
    Conn2ec,
    /// Both parts connected and containing a cycle.
    Cycles,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    /// Search-node budget for the exact solver.
    #[arg(long, default_value_t = 2_000_000)]
    budget: u64,
    /// Wall-clock limit per exact search, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> CliResult<Budget> {
        let mut b = Budget::nodes(self.budget);
        if let Some(t) = self.time_limit {
            if !(t.is_finite() && t > 0.0) {
                return Err(usage("--time-limit must be positive"));
            }
            b = b.with_time(Duration::from_secs_f64(t));
        }
        Ok(b)
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Graph file (`p dcp n m` with `e u v` lines).
    #[arg(short = 'g', long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "degree")]
    target: TargetKind,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    /// auto, exact, poly11, poly12, poly1k, poly22, poly23, conn2ec, two-cycles
    #[arg(long, default_value = "auto")]
    method: String,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the full outcome, including the witness, as JSON.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BuilderArgs {
    /// 1k, 1k_mindeg, k1k2, aa, 23_mindeg3, kk1, 2ec_conn, 2ec_2ec
    #[arg(long)]
    builder: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
}

impl BuilderArgs {
    fn reduction(&self) -> CliResult<Reduction> {
        let params: BTreeMap<String, usize> = [("k", self.k), ("k1", self.k1), ("k2", self.k2), ("a", self.a)]
            .into_iter()
            .filter_map(|(name, v)| v.map(|v| (name.to_string(), v)))
            .collect();
        Reduction::from_name(&self.builder, &params).map_err(usage)
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    builder: BuilderArgs,
    /// Source formula in DIMACS CNF.
    #[arg(long)]
    cnf: PathBuf,
    #[arg(short = 'o', long)]
    output: PathBuf,
    /// Sidecar JSON path; defaults to the output path plus `.json`.
    #[arg(long)]
    roles: Option<PathBuf>,
    /// Also write the forward witness of a satisfying assignment.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Transform {
    Connect,
    Occ3,
    Occ5,
    Pad1,
    Pad2,
}

#[derive(Args, Debug)]
struct CnfArgs {
    #[arg(long, value_enum)]
    transform: Transform,
    input: PathBuf,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    input: PathBuf,
    /// Also enumerate all cycle splits of the ring (small formulas only).
    #[arg(long)]
    raw: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Shape {
    Mixed,
    Exact3,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    builder: BuilderArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 3)]
    max_vars: usize,
    #[arg(long, default_value_t = 4)]
    max_clauses: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "mixed")]
    shape: Shape,
    /// Only keep satisfiable formulas.
    #[arg(long)]
    satisfiable_only: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClaimArgs {
    /// conn_2ec_characterization, two_cycles_characterization,
    /// doubling_converse(a=..), stiebitz_tightness(k1=..,k2=..),
    /// boundary(k1=..,k2=..,delta=..)
    #[arg(long)]
    claim: String,
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    /// Random graphs instead of exhaustive enumeration.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(short = 'g', long)]
    graph: PathBuf,
    /// Emit DOT (the only export format).
    #[arg(long, required = true)]
    dot: bool,
    /// Sidecar JSON with a `roles` array, used for labels.
    #[arg(long)]
    roles: Option<PathBuf>,
    /// Witness JSON (`solve --witness` output or a plain array of parts 1/2).
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GadgetArgs {
    /// x_k2, x31, y41, z_k, w_k
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    dot: bool,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    parse_graph(&read(path)?).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

fn load_cnf(path: &Path) -> CliResult<CnfFormula> {
    parse_dimacs(&read(path)?).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

fn sha256(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn answer_code(a: Answer) -> ExitCode {
    ExitCode::from(match a {
        Answer::Yes => 0,
        Answer::No => 1,
        Answer::Unknown => 2,
    })
}

fn cmd_solve(args: SolveArgs) -> CliResult<ExitCode> {
    let target = match args.target {
        TargetKind::Degree => match (args.k1, args.k2) {
            (Some(k1), Some(k2)) => Target::min_degree(k1, k2),
            _ => return Err(usage("degree targets need --k1 and --k2")),
        },
        TargetKind::Conn2ec => Target::new(PartProperty::Connected, PartProperty::TwoEdgeConnected),
        TargetKind::Cycles => Target::new(PartProperty::ConnectedWithCycle, PartProperty::ConnectedWithCycle),
    };
    let method: Method = args.method.parse().map_err(usage)?;
    let g = load_graph(&args.graph)?;
    let out = solve(&g, target, method, args.budget.budget()?).map_err(usage)?;
    if let Some(w) = &args.witness {
        write(w, &to_json(&out))?;
    }
    println!(
        "{}",
        json!({
            "answer": out.answer,
            "method": out.method,
            "target": target.to_string(),
            "n": g.n(),
            "m": g.m(),
            "nodes": out.stats.nodes,
        })
    );
    Ok(answer_code(out.answer))
}

fn cmd_gen(args: GenArgs) -> CliResult<ExitCode> {
    let red = args.builder.reduction()?;
    let f = load_cnf(&args.cnf)?;
    let art = red.build_from_source(&f).map_err(parse_err)?;
    let text = serialize_edge_list(&art.graph);
    write(&args.output, &text)?;
    let reparsed = load_graph(&args.output)?;
    let hash = sha256(&text);
    if reparsed != art.graph || sha256(&serialize_edge_list(&reparsed)) != hash {
        return Err(CliError::Io(format!("{}: written graph does not re-parse identically", args.output.display())));
    }
    let sidecar_path = args.roles.clone().unwrap_or_else(|| {
        let mut p = args.output.clone().into_os_string();
        p.push(".json");
        PathBuf::from(p)
    });
    write(&sidecar_path, &to_json(&art.sidecar()))?;
    let min_degree = art.graph.min_degree().ok();
    eprintln!(
        "{red}: n={} m={} min degree {:?} (declared {:?}), graph sha256 {hash}",
        art.graph.n(),
        art.graph.m(),
        min_degree,
        art.declared_min_degree
    );
    if let Some(d) = art.declared_min_degree {
        if min_degree != Some(d) {
            return Err(CliError::Io(format!("min degree {min_degree:?} differs from declared {d}")));
        }
    }
    if let Some(w) = &args.witness {
        let value = match sat_solve(&f).map_err(parse_err)? {
            Some(a) => {
                let p = art.witness_forward_source(&a).map_err(parse_err)?;
                json!({ "satisfiable": true, "holds": art.target.holds(&art.graph, &p), "witness": p })
            }
            None => json!({ "satisfiable": false, "witness": null }),
        };
        write(w, &to_json(&value))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_cnf(args: CnfArgs) -> CliResult<ExitCode> {
    let f = load_cnf(&args.input)?;
    let out = match args.transform {
        Transform::Connect => transform_connect(&f),
        Transform::Occ3 => transform_occurrence_bound(&f, OccurrenceBound::Three).map_err(parse_err)?,
        Transform::Occ5 => transform_occurrence_bound(&f, OccurrenceBound::Five).map_err(parse_err)?,
        Transform::Pad1 => pad_literal_occurrences(&f, 1),
        Transform::Pad2 => pad_literal_occurrences(&f, 2),
    };
    emit(args.output.as_deref(), &serialize_dimacs(&out))?;
    eprintln!(
        "vars {} -> {}, clauses {} -> {}, max clauses per variable {}, max literal count {}, connected {}",
        f.num_vars(),
        out.num_vars(),
        f.num_clauses(),
        out.num_clauses(),
        out.clauses_per_variable().into_iter().max().unwrap_or(0),
        out.literal_counts().into_iter().max().unwrap_or(0),
        out.is_connected_instance()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(args: OracleArgs) -> CliResult<ExitCode> {
    let f = load_cnf(&args.input)?;
    let padded = for_ring(&f, 1, false).map_err(parse_err)?;
    let ring = build_ring(&padded).map_err(parse_err)?;
    let found = ring_theorem_oracle(&ring).map_err(usage)?;
    let mut report = json!({
        "ring_vertices": ring.graph.n(),
        "satisfiable": found.is_some(),
    });
    if let Some(cp) = &found {
        let one_based = |c: &[usize]| c.iter().map(|v| v + 1).collect::<Vec<_>>();
        report["cycle"] = json!(one_based(&cp.cycle_a));
        report["other_cycle"] = json!(one_based(&cp.cycle_b));
        let a = ring.cycle_pair_to_assignment(cp).map_err(usage)?;
        report["assignment"] = json!(a.truncated(f.num_vars()).values());
    }
    if args.raw {
        if padded.num_vars() > RAW_MAX_VARS {
            return Err(usage(format!("--raw supports at most {RAW_MAX_VARS} variables")));
        }
        report["raw_agrees"] = json!(raw_ring_oracle(&ring).map_err(usage)? == found.is_some());
    }
    println!("{}", to_json(&report).trim_end());
    Ok(ExitCode::from(if found.is_some() { 0 } else { 1 }))
}

fn finish_report(r: &Report, output: Option<&Path>) -> CliResult<ExitCode> {
    let text = to_json(r);
    match output {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    eprintln!(
        "{}: {} trials, {} agreements, {} disagreements, {} exhausted, {} anomalies",
        r.campaign,
        r.trials,
        r.agreements,
        r.disagreements.len(),
        r.exhausted.len(),
        r.anomalies.len()
    );
    Ok(ExitCode::from(if r.disagreements.is_empty() { 0 } else { 1 }))
}

fn cmd_verify(args: VerifyArgs) -> CliResult<ExitCode> {
    let red = args.builder.reduction()?;
    let mut spec = CorpusSpec::random(args.trials, args.max_vars, args.max_clauses, args.seed);
    if matches!(args.shape, Shape::Exact3) {
        spec = spec.exact3();
    }
    if args.satisfiable_only {
        spec = spec.satisfiable();
    }
    let report = verify_reduction(red, &spec, args.budget.budget()?).map_err(usage)?;
    finish_report(&report, args.output.as_deref())
}

fn cmd_check_claims(args: ClaimArgs) -> CliResult<ExitCode> {
    let claim: Claim = args.claim.parse().map_err(usage)?;
    let seed = match (args.samples, args.seed) {
        (0, s) => s.unwrap_or(0),
        (_, Some(s)) => s,
        (_, None) => return Err(usage("--samples needs --seed")),
    };
    let opts = ClaimOptions { max_n: args.max_n, samples: args.samples, seed, budget: args.budget.budget()? };
    let report = check_claim(claim, &opts).map_err(usage)?;
    finish_report(&report, args.output.as_deref())
}

fn witness_partition(path: &Path, n: usize) -> CliResult<Partition> {
    let value: serde_json::Value = serde_json::from_str(&read(path)?).map_err(parse_err)?;
    let parts = match value.get("witness") {
        Some(w) => w.clone(),
        None => value,
    };
    if parts.is_null() {
        return Err(parse_err(format!("{}: no witness recorded", path.display())));
    }
    let parts: Vec<u8> = serde_json::from_value(parts).map_err(parse_err)?;
    let p = Partition::new(parts);
    if p.len() != n || p.parts().iter().any(|&x| x != 1 && x != 2) {
        return Err(parse_err(format!("{}: witness must list part 1 or 2 for all {n} vertices", path.display())));
    }
    Ok(p)
}

fn cmd_export(args: ExportArgs) -> CliResult<ExitCode> {
    let g = load_graph(&args.graph)?;
    let roles: Option<Vec<String>> = match &args.roles {
        Some(p) => {
            let value: serde_json::Value = serde_json::from_str(&read(p)?).map_err(parse_err)?;
            let roles: Vec<String> =
                serde_json::from_value(value.get("roles").cloned().unwrap_or(value)).map_err(parse_err)?;
            if roles.len() != g.n() {
                return Err(parse_err(format!("{}: {} roles for {} vertices", p.display(), roles.len(), g.n())));
            }
            Some(roles)
        }
        None => None,
    };
    let partition = args.witness.as_deref().map(|p| witness_partition(p, g.n())).transpose()?;
    emit(args.output.as_deref(), &serialize_dot(&g, roles.as_deref(), partition.as_ref()))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gadget(args: GadgetArgs) -> CliResult<ExitCode> {
    let kind: GadgetKind = args.kind.parse().map_err(usage)?;
    let gadget = build_gadget(kind, args.k).map_err(usage)?;
    let text = if args.dot {
        serialize_dot(&gadget.graph, Some(&gadget.labels), None)
    } else {
        serialize_edge_list(&gadget.graph)
    };
    emit(args.output.as_deref(), &text)?;
    eprintln!(
        "{kind} (k={}): {} vertices, attachments {:?}, interior degrees {:?}",
        gadget.k,
        gadget.graph.n(),
        gadget.attachments.iter().map(|v| v + 1).collect::<Vec<_>>(),
        gadget.interior_degrees()
    );
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().map_err(usage)?;
    }
    match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Cnf(a) => cmd_cnf(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Verify(a) => cmd_verify(a),
        Command::CheckClaims(a) => cmd_check_claims(a),
        Command::Export(a) => cmd_export(a),
        Command::Gadget(a) => cmd_gadget(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let (CliError::Usage(m) | CliError::Parse(m) | CliError::Io(m)) = &e;
            eprintln!("error: {m}");
            ExitCode::from(e.code())
        }
    }
}

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use logan::builder::build;
use logan::certificates::{certificate_loss, check, PropertyTheory};
use logan::ef::{
    approx_round_resilience, exact_round_resilience, spoiler_witness, ProbeBudget,
    EXACT_INSTANCE_CAP,
};
use logan::graph::{random_digraph, random_graph, sample_negative, sample_theory, Graph};
use logan::harness::{run_all, ExperimentConfig};
use logan::loss::{logical_loss, LossWeights, PrototypeBank};
use logan::seed::Seed;

#[derive(Parser)]
#[command(
    name = "logan",
    about = "Logic-bounded graph generation: certificates, bounded games, and guided repair",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a property on a sampled or loaded graph, explaining failures.
    Check(CheckArgs),
    /// Score a graph with the composite loss against a prototype bank.
    Score(ScoreArgs),
    /// Build a graph aimed at a property by witness-guided repair.
    Generate(GenerateArgs),
    /// Play the bounded comparison game between two graphs.
    Probe(ProbeArgs),
    /// Run the experiment suite and verify the outcome bands.
    Repro(ReproArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Property to check (bipartite, tree, connected, triangle_free,
    /// has_triangle, planar, two_edge_strong).
    #[arg(long)]
    property: String,
    /// Vertex count for the sampled graph (ignored with --graph).
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample a violating graph instead of a satisfying one.
    #[arg(long)]
    negative: bool,
    /// Read the graph from a file instead of sampling one.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    property: String,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Probe depth for the game term.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Per-depth state cap for budgeted probes.
    #[arg(long = "budget-s", default_value_t = 16)]
    budget_s: usize,
    /// Move cap per side for budgeted probes.
    #[arg(long = "budget-b", default_value_t = 4)]
    budget_b: usize,
    /// Prototype bank size.
    #[arg(long, default_value_t = 8)]
    bank: usize,
    /// Read the graph to score from a file instead of sampling a random one.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    property: String,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long = "budget-s", default_value_t = 16)]
    budget_s: usize,
    #[arg(long = "budget-b", default_value_t = 4)]
    budget_b: usize,
    #[arg(long, default_value_t = 8)]
    bank: usize,
    #[arg(long = "max-iters", default_value_t = 500)]
    max_iters: usize,
}

#[derive(Args)]
struct ProbeArgs {
    /// Vertex count for sampled graphs (ignored with --graph-a/--graph-b).
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Maximum number of game rounds.
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "budget-s", default_value_t = 16)]
    budget_s: usize,
    #[arg(long = "budget-b", default_value_t = 4)]
    budget_b: usize,
    #[arg(long = "graph-a")]
    graph_a: Option<PathBuf>,
    #[arg(long = "graph-b")]
    graph_b: Option<PathBuf>,
}

#[derive(Args)]
struct ReproArgs {
    /// TOML config file; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for CSV files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Quarter the sample counts and widen the bands by half.
    #[arg(long)]
    quick: bool,
}

fn parse_property(name: &str) -> Result<PropertyTheory> {
    PropertyTheory::from_str(name).map_err(anyhow::Error::from)
}

fn load_graph(path: &PathBuf) -> Result<Graph> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading graph file {}", path.display()))?;
    Graph::from_text(&text).with_context(|| format!("parsing graph file {}", path.display()))
}

fn run_check(args: &CheckArgs) -> Result<ExitCode> {
    let property = parse_property(&args.property)?;
    let g = match &args.graph {
        Some(path) => load_graph(path)?,
        None if args.negative => sample_negative(property, args.n, Seed(args.seed))?,
        None => sample_theory(property, args.n, Seed(args.seed))?,
    };
    println!("{}", g.to_text().trim_end());
    let outcome = check(property, &g)?;
    let loss = certificate_loss(property, &g)?;
    println!("property: {property}");
    println!("holds: {}", outcome.holds);
    println!("loss: {loss:.4}");
    match &outcome.witness {
        Some(w) => println!("witness: {w}"),
        None => println!("witness: none"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_score(args: &ScoreArgs) -> Result<ExitCode> {
    let property = parse_property(&args.property)?;
    let seed = Seed(args.seed);
    let g = match &args.graph {
        Some(path) => load_graph(path)?,
        None if property.directed() => random_digraph(args.n, 0.25, seed),
        None => random_graph(args.n, 0.25, seed),
    };
    let bank = PrototypeBank::sample(property, g.n(), args.bank, seed.derive(999))?;
    let weights = LossWeights::with_certificate(1.0, property, 1.0);
    let budget = ProbeBudget {
        k: args.k,
        start_probes: args.budget_s,
        branch_cap: args.budget_b,
        ..ProbeBudget::default()
    };
    let breakdown = logical_loss(&g, &bank, &weights, budget)?;
    println!("property: {property}");
    println!("bank: {} prototypes near n={}", bank.len(), g.n());
    println!("game loss (k={}): {:.4}", args.k, breakdown.ef);
    for (theory, raw) in &breakdown.certificates {
        println!("certificate loss [{theory}]: {raw:.4}");
    }
    println!("total: {:.4}", breakdown.total);
    if breakdown.ef_timed_out_probes > 0 {
        println!("note: {} probes hit the time limit", breakdown.ef_timed_out_probes);
    }
    Ok(ExitCode::SUCCESS)
}

fn run_generate(args: &GenerateArgs) -> Result<ExitCode> {
    let property = parse_property(&args.property)?;
    let seed = Seed(args.seed);
    let bank = PrototypeBank::sample(property, args.n, args.bank, seed.derive(1))?;
    let weights = LossWeights::with_certificate(1.0, property, 1.0);
    let budget = ProbeBudget {
        k: args.k,
        start_probes: args.budget_s,
        branch_cap: args.budget_b,
        ..ProbeBudget::default()
    };
    let (g, trace) = build(
        property,
        args.n,
        &bank,
        &weights,
        budget,
        args.max_iters,
        seed,
    )?;
    println!("property: {property}");
    println!("iterations: {}", trace.iterations);
    println!("loss: {:.4} -> {:.4}", trace.initial_loss, trace.final_loss);
    println!("converged: {}", trace.converged);
    let holds = check(property, &g)?.holds;
    println!("holds: {holds}");
    println!("{}", g.to_text().trim_end());
    Ok(ExitCode::SUCCESS)
}

fn run_probe(args: &ProbeArgs) -> Result<ExitCode> {
    let seed = Seed(args.seed);
    let g = match &args.graph_a {
        Some(path) => load_graph(path)?,
        None => random_graph(args.n, 0.3, seed.derive(0)),
    };
    let h = match &args.graph_b {
        Some(path) => load_graph(path)?,
        None => random_graph(args.n, 0.3, seed.derive(1)),
    };
    if g.is_directed() != h.is_directed() {
        bail!("both graphs must share directedness");
    }
    let budget = ProbeBudget {
        k: args.k,
        start_probes: args.budget_s,
        branch_cap: args.budget_b,
        ..ProbeBudget::default()
    };
    let approx = approx_round_resilience(&g, &h, budget);
    println!(
        "budgeted resilience (k={}, S={}, b={}): {}{}",
        args.k,
        args.budget_s,
        args.budget_b,
        approx.rounds,
        if approx.timed_out { " (timed out)" } else { "" }
    );
    if g.n() <= EXACT_INSTANCE_CAP && h.n() <= EXACT_INSTANCE_CAP {
        let exact = exact_round_resilience(&g, &h, args.k)?;
        println!("exact resilience (k={}): {exact}", args.k);
        match spoiler_witness(&g, &h, args.k)? {
            Some(witness) => {
                println!(
                    "spoiler strategy: depth {}, replays {}",
                    witness.depth,
                    if witness.replay(&g, &h) { "ok" } else { "BROKEN" }
                );
                let moves: Vec<String> = witness
                    .principal_moves()
                    .into_iter()
                    .map(|(side, v)| format!("{side:?}:{v}"))
                    .collect();
                println!("principal line: {}", moves.join(" "));
            }
            None => println!("spoiler strategy: none within {} rounds", args.k),
        }
    } else {
        println!(
            "exact resilience: skipped (supported up to n = {EXACT_INSTANCE_CAP})"
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn run_repro(args: &ReproArgs) -> Result<ExitCode> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            toml::from_str(&text)
                .with_context(|| format!("parsing config file {}", path.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = &args.out {
        config.out_dir = out.clone();
    }
    if args.quick {
        config.quick = true;
    }
    let summary = run_all(&config)?;
    for row in &summary.exp1 {
        println!(
            "exp1 {}: pos_rate {:.4}, neg_rate {:.4} ({} samples per class)",
            row.property, row.pos_rate, row.neg_rate, row.samples
        );
    }
    for row in &summary.exp2 {
        println!(
            "exp2 k={}: accuracy {:.4} ({} samples)",
            row.k, row.accuracy, row.samples
        );
    }
    for row in &summary.exp3 {
        println!(
            "exp3 {}: baseline {:.4}, framework {:.4}, improvement {:+.4}, discrimination {:+.4}",
            row.property, row.baseline_sat, row.framework_sat, row.improvement, row.discrimination
        );
    }
    println!("csv files written to {}", config.out_dir.display());
    let mut all_pass = true;
    for band in &summary.bands {
        println!("{band}");
        all_pass &= band.pass();
    }
    if all_pass {
        println!("all bands pass");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("band check failed");
        Ok(ExitCode::FAILURE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(args) => run_check(args),
        Command::Score(args) => run_score(args),
        Command::Generate(args) => run_generate(args),
        Command::Probe(args) => run_probe(args),
        Command::Repro(args) => run_repro(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

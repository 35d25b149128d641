//! `nng` — command-line front end for the Naming Game toolkit.
//!
//! Subcommands cover every pipeline stage: graph generation, clique
//! inventories, local specifications, energies, the exhaustive oracle
//! comparison, long simulations and community detection. Runs with `--seed`
//! are byte-for-byte reproducible; every emitted document embeds the full
//! invocation.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nng_core::{
    absorption_analysis, compare_distributions, detect_communities, local_spec,
    planted_partition, simulate_occupation, Alphabet, Configuration, EnergyContext, EpsilonMode,
    FullKernelMatrix, Graph, Kernel, Projector, ReceiveProbs,
};

mod report;

use report::{sig6, Output};

#[derive(Parser)]
#[command(
    name = "nng",
    about = "Naming Game / Noisy Naming Game simulator, Gibbs energies and community detection",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted-partition benchmark graph as an edge list
    GenGraph(GenGraphArgs),
    /// List every clique of the graph with its boundary
    Cliques(CliquesArgs),
    /// Receive probabilities and local distribution of one site
    LocalSpec(LocalSpecArgs),
    /// Gibbs energy of one state, or the full energy table
    Energy(EnergyArgs),
    /// Exhaustive oracle: stationary law vs Gibbs distribution
    Exact(ExactArgs),
    /// Long NNG run with an occupation histogram
    Simulate(SimulateArgs),
    /// Rank visited partial-consensus states by energy
    Detect(DetectArgs),
    /// Noiseless absorption statistics
    Absorb(AbsorbArgs),
}

#[derive(Args)]
struct GraphSource {
    /// Edge-list file ("u v" per line, # comments)
    #[arg(long, conflicts_with = "builtin")]
    graph: Option<std::path::PathBuf>,
    /// Builtin example graph: fig1 or fig2
    #[arg(long)]
    builtin: Option<String>,
}

impl GraphSource {
    fn load(&self) -> Result<Graph, CliError> {
        match (&self.graph, &self.builtin) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
                Ok(Graph::parse_edge_list(&text)?)
            }
            (None, Some(name)) => Ok(Graph::builtin(name)?),
            _ => Err(CliError::Usage("exactly one of --graph or --builtin is required".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Finite,
    Limit,
}

#[derive(Args)]
struct CommonArgs {
    /// Alphabet size (words are named A, B, C, ...)
    #[arg(long, default_value_t = 2)]
    words: usize,
    /// Noise probability
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Noise regime: finite uses --epsilon, limit evaluates the noiseless formulas
    #[arg(long, value_enum, default_value_t = Mode::Finite)]
    mode: Mode,
    /// Write output here instead of standard output
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

impl CommonArgs {
    fn epsilon_mode(&self) -> EpsilonMode {
        match self.mode {
            Mode::Finite => EpsilonMode::Finite(self.epsilon),
            Mode::Limit => EpsilonMode::Limit,
        }
    }

    fn alphabet(&self) -> Result<Alphabet, CliError> {
        Ok(Alphabet::new(self.words)?)
    }
}

#[derive(Args)]
struct GenGraphArgs {
    /// Comma-separated block sizes, e.g. 20,20,20
    #[arg(long, value_delimiter = ',', required = true)]
    blocks: Vec<usize>,
    /// Intra-block edge probability
    #[arg(long)]
    p_in: f64,
    /// Inter-block edge probability
    #[arg(long)]
    p_out: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct CliquesArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Cap on clique size (unbounded when omitted)
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct LocalSpecArgs {
    #[command(flatten)]
    source: GraphSource,
    #[command(flatten)]
    common: CommonArgs,
    /// Focal site
    #[arg(long)]
    site: usize,
    /// Full configuration, e.g. A-AB-B-...
    #[arg(long)]
    state: String,
}

#[derive(Args)]
struct EnergyArgs {
    #[command(flatten)]
    source: GraphSource,
    #[command(flatten)]
    common: CommonArgs,
    /// Single state to evaluate, e.g. A-A-A-B-B-B
    #[arg(long, conflicts_with = "all")]
    state: Option<String>,
    /// Emit the full energy table over all configurations (finite mode only)
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    source: GraphSource,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: GraphSource,
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 1_000_000)]
    steps: usize,
    #[arg(long, default_value_t = 10_000)]
    burnin: usize,
    /// Record every this-many steps after burn-in
    #[arg(long)]
    thin: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    chains: u64,
    /// Projector: strict-count:A, full-state, or energy:WIDTH
    #[arg(long, default_value = "strict-count:A")]
    projector: String,
    /// Initial configuration (default: every site at the full word list)
    #[arg(long)]
    state: Option<String>,
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    source: GraphSource,
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 1_000_000)]
    steps: usize,
    /// Burn-in (default: 10 * sites * words)
    #[arg(long)]
    burnin: Option<usize>,
    /// Thinning interval (default: number of sites)
    #[arg(long)]
    thin: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    chains: u64,
    /// How many candidates to report
    #[arg(long, default_value_t = 10)]
    top: usize,
}

#[derive(Args)]
struct AbsorbArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Alphabet size
    #[arg(long, default_value_t = 2)]
    words: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<nng_core::Error> for CliError {
    fn from(e: nng_core::Error) -> Self {
        use nng_core::Error::*;
        match e {
            // bad argument combinations, not failures of the run itself
            StepsNotAboveBurnin | BadThinning | EmptyExperiment => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let invocation = std::env::args().collect::<Vec<_>>().join(" ");
    match run(cli, &invocation) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli, invocation: &str) -> Result<(), CliError> {
    match cli.command {
        Command::GenGraph(a) => gen_graph(a, invocation),
        Command::Cliques(a) => cliques(a, invocation),
        Command::LocalSpec(a) => local_spec_cmd(a, invocation),
        Command::Energy(a) => energy(a, invocation),
        Command::Exact(a) => exact(a, invocation),
        Command::Simulate(a) => simulate(a, invocation),
        Command::Detect(a) => detect(a, invocation),
        Command::Absorb(a) => absorb(a, invocation),
    }
}

fn gen_graph(a: GenGraphArgs, invocation: &str) -> Result<(), CliError> {
    let planted = planted_partition(&a.blocks, a.p_in, a.p_out, a.seed)?;
    let mut doc = String::new();
    let _ = writeln!(doc, "# invocation={invocation}");
    let _ = writeln!(doc, "# seed={}", a.seed);
    let membership: Vec<String> = planted.membership.iter().map(|b| b.to_string()).collect();
    let _ = writeln!(doc, "# membership={}", membership.join(","));
    for (u, v) in planted.graph.edges() {
        let _ = writeln!(doc, "{u} {v}");
    }
    Output::new(a.out).write(&doc)
}

fn cliques(a: CliquesArgs, invocation: &str) -> Result<(), CliError> {
    let graph = a.source.load()?;
    let inventory =
        nng_core::enumerate_cliques(&graph, a.max_size, nng_core::DEFAULT_CLIQUE_GUARD)?;
    let cliques: Vec<serde_json::Value> = inventory
        .cliques()
        .iter()
        .map(|c| {
            serde_json::json!({
                "members": c.members(),
                "boundary": c.boundary(),
            })
        })
        .collect();
    let counts: Vec<usize> =
        (1..=inventory.max_size()).map(|s| inventory.of_size(s).count()).collect();
    let doc = serde_json::json!({
        "invocation": invocation,
        "sites": graph.len(),
        "edges": graph.edge_count(),
        "counts_by_size": counts,
        "cliques": cliques,
    });
    Output::new(a.out).write_json(&doc)
}

fn local_spec_cmd(a: LocalSpecArgs, invocation: &str) -> Result<(), CliError> {
    let graph = a.source.load()?;
    let alphabet = a.common.alphabet()?;
    let config = Configuration::decode(&a.state, alphabet, graph.len())?;
    let mode = a.common.epsilon_mode();
    let rp = ReceiveProbs::compute(&graph, a.site, &config, alphabet, mode)?;
    let f = local_spec(&rp, alphabet)?;
    let out = Output::new(a.common.out.clone());
    if a.common.format == Format::Tsv {
        let mut doc = String::new();
        let _ = writeln!(doc, "# invocation={invocation}");
        for w in alphabet.words() {
            let _ = writeln!(doc, "p({})\t{}", w.letter(), sig6(rp.prob(w)));
        }
        for label in alphabet.word_lists() {
            let text = Configuration::new(vec![label]).encode(alphabet);
            let _ = writeln!(doc, "f({text})\t{}", sig6(f.prob(label)));
        }
        return out.write(&doc);
    }
    let p: Vec<serde_json::Value> = alphabet
        .words()
        .map(|w| serde_json::json!({"word": w.letter().to_string(), "p": rp.prob(w)}))
        .collect();
    let fv: Vec<serde_json::Value> = alphabet
        .word_lists()
        .map(|l| {
            serde_json::json!({
                "label": Configuration::new(vec![l]).encode(alphabet),
                "f": f.prob(l),
            })
        })
        .collect();
    out.write_json(&serde_json::json!({
        "invocation": invocation,
        "site": a.site,
        "state": a.state,
        "epsilon": mode.epsilon(),
        "receive": p,
        "local_distribution": fv,
    }))
}

fn energy(a: EnergyArgs, invocation: &str) -> Result<(), CliError> {
    let graph = a.source.load()?;
    let alphabet = a.common.alphabet()?;
    let mode = a.common.epsilon_mode();
    let n = graph.len();
    let ctx = EnergyContext::new(graph, alphabet, mode)?;
    let out = Output::new(a.common.out.clone());
    if a.all {
        let table = ctx.exact_distribution(nng_core::DEFAULT_STATE_GUARD)?;
        let mut rows: Vec<(String, f64, f64)> = (0..table.space().len())
            .map(|i| {
                (
                    table.space().config(i).encode(alphabet),
                    table.energies()[i],
                    table.probabilities()[i],
                )
            })
            .collect();
        rows.sort_by(|x, y| {
            x.1.partial_cmp(&y.1).expect("finite energies").then_with(|| x.0.cmp(&y.0))
        });
        if a.common.format == Format::Tsv {
            let mut doc = String::new();
            let _ = writeln!(doc, "# invocation={invocation}");
            let _ = writeln!(doc, "state\tH\tpi");
            for (state, h, pi) in &rows {
                let _ = writeln!(doc, "{state}\t{}\t{}", sig6(*h), sig6(*pi));
            }
            return out.write(&doc);
        }
        let entries: Vec<serde_json::Value> = rows
            .iter()
            .map(|(state, h, pi)| serde_json::json!({"state": state, "H": h, "pi": pi}))
            .collect();
        return out.write_json(&serde_json::json!({
            "invocation": invocation,
            "epsilon": mode.epsilon(),
            "Z": table.partition_function(),
            "states": entries,
        }));
    }
    let state = a
        .state
        .as_deref()
        .ok_or_else(|| CliError::Usage("either --state or --all is required".into()))?;
    let config = Configuration::decode(state, alphabet, n)?;
    let h = ctx.gibbs_energy(&config)?;
    let local_minimum = match mode {
        EpsilonMode::Finite(_) => Some(ctx.is_local_minimum(&config)?),
        EpsilonMode::Limit => None,
    };
    if a.common.format == Format::Tsv {
        return out.write(&format!("H({state}) = {}\n", sig6(h)));
    }
    out.write_json(&serde_json::json!({
        "invocation": invocation,
        "state": state,
        "H": h,
        "local_minimum": local_minimum,
    }))
}

fn exact(a: ExactArgs, invocation: &str) -> Result<(), CliError> {
    let graph = a.source.load()?;
    let alphabet = a.common.alphabet()?;
    let eps = match a.common.epsilon_mode() {
        EpsilonMode::Finite(e) if e > 0.0 => e,
        _ => {
            return Err(CliError::Usage(
                "the exact oracle needs finite epsilon > 0".into(),
            ))
        }
    };
    let kernel = Kernel::new(graph.clone(), alphabet, eps)?;
    let m = FullKernelMatrix::build(&kernel)?;
    let pi = m.stationary_distribution()?;
    let ctx = EnergyContext::new(graph, alphabet, EpsilonMode::Finite(eps))?;
    let table = ctx.exact_distribution(nng_core::DEFAULT_STATE_GUARD)?;
    let cmp = compare_distributions(table.probabilities(), &pi, Some(&m))?;
    Output::new(a.common.out.clone()).write_json(&serde_json::json!({
        "invocation": invocation,
        "epsilon": eps,
        "states": cmp.states,
        "tv": cmp.tv,
        "max_db_residual": cmp.max_db_residual,
        "max_delta_pi": cmp.max_delta_pi,
        "row_sum_error": m.row_sum_error(),
    }))
}

fn parse_projector(
    text: &str,
    alphabet: Alphabet,
    graph: &Graph,
    mode: EpsilonMode,
) -> Result<Projector, CliError> {
    if let Some(letter) = text.strip_prefix("strict-count:") {
        let mut chars = letter.chars();
        let (Some(c), None) = (chars.next(), chars.next()) else {
            return Err(CliError::Usage(format!("bad projector '{text}'")));
        };
        return Ok(Projector::StrictCount(alphabet.word_from_letter(c)?));
    }
    if text == "full-state" {
        let space =
            nng_core::StateSpace::new(graph.len(), alphabet, nng_core::DEFAULT_STATE_GUARD)?;
        return Ok(Projector::FullState(space));
    }
    if let Some(width) = text.strip_prefix("energy:") {
        let width: f64 = width
            .parse()
            .map_err(|_| CliError::Usage(format!("bad energy bin width in '{text}'")))?;
        if !(width > 0.0) {
            return Err(CliError::Usage("energy bin width must be positive".into()));
        }
        let ctx = EnergyContext::new(graph.clone(), alphabet, mode)?;
        return Ok(Projector::Energy { ctx, width });
    }
    Err(CliError::Usage(format!(
        "unknown projector '{text}' (expected strict-count:<letter>, full-state, energy:<width>)"
    )))
}

fn simulate(a: SimulateArgs, invocation: &str) -> Result<(), CliError> {
    let graph = a.source.load()?;
    let alphabet = a.common.alphabet()?;
    let eps = a.common.epsilon;
    let thin = a.thin.unwrap_or(graph.len());
    let projector =
        parse_projector(&a.projector, alphabet, &graph, EpsilonMode::Finite(eps))?;
    let kernel = Kernel::new(graph.clone(), alphabet, eps)?;
    let c0 = match &a.state {
        Some(text) => Configuration::decode(text, alphabet, graph.len())?,
        None => Configuration::uniform(alphabet.full_list(), graph.len()),
    };
    if a.chains == 0 {
        return Err(CliError::Usage("--chains must be at least 1".into()));
    }
    let mut merged = None;
    for chain in 0..a.chains {
        let h = simulate_occupation(&kernel, &c0, a.steps, a.burnin, thin, a.seed, chain, &projector)?;
        match &mut merged {
            None => merged = Some(h),
            Some(m) => m.merge(&h)?,
        }
    }
    let hist = merged.expect("at least one chain");
    let out = Output::new(a.common.out.clone());
    if a.common.format == Format::Json {
        let bins: Vec<serde_json::Value> = hist
            .counts()
            .iter()
            .map(|(&bin, &count)| {
                serde_json::json!({"bin": bin, "count": count, "probability": hist.probability(bin)})
            })
            .collect();
        return out.write_json(&serde_json::json!({
            "invocation": invocation,
            "seed": a.seed,
            "chains": a.chains,
            "projector": hist.projector_id(),
            "steps": hist.steps(),
            "burnin": hist.burnin(),
            "thin": hist.thin(),
            "bins": bins,
        }));
    }
    let mut doc = String::new();
    let _ = writeln!(
        doc,
        "# projector={} steps={} burnin={} thin={}",
        hist.projector_id(),
        hist.steps(),
        hist.burnin(),
        hist.thin()
    );
    let _ = writeln!(doc, "# invocation={invocation} seed={}", a.seed);
    for (&bin, &count) in hist.counts() {
        let _ = writeln!(doc, "{bin}\t{count}\t{}", sig6(hist.probability(bin)));
    }
    out.write(&doc)
}

fn detect(a: DetectArgs, invocation: &str) -> Result<(), CliError> {
    let graph = a.source.load()?;
    let alphabet = a.common.alphabet()?;
    let burnin = a.burnin.unwrap_or(10 * graph.len() * alphabet.len());
    let thin = a.thin.unwrap_or(graph.len());
    let kernel = Kernel::new(graph, alphabet, a.common.epsilon)?;
    let candidates =
        detect_communities(&kernel, a.steps, burnin, thin, a.seed, a.chains, a.top)?;
    let entries: Vec<serde_json::Value> = candidates
        .iter()
        .map(|c| {
            let blocks: Vec<&[usize]> =
                c.blocks().iter().filter(|b| !b.is_empty()).map(|b| b.as_slice()).collect();
            serde_json::json!({
                "state": c.state().encode(alphabet),
                "H": c.energy(),
                "frequency": c.frequency(),
                "blocks": blocks,
                "boundary": c.boundary(),
            })
        })
        .collect();
    Output::new(a.common.out.clone()).write_json(&serde_json::json!({
        "invocation": invocation,
        "seed": a.seed,
        "epsilon": a.common.epsilon,
        "steps": a.steps,
        "burnin": burnin,
        "thin": thin,
        "chains": a.chains,
        "candidates": entries,
    }))
}

fn absorb(a: AbsorbArgs, invocation: &str) -> Result<(), CliError> {
    let graph = a.source.load()?;
    let alphabet = Alphabet::new(a.words)?;
    let kernel = Kernel::new(graph, alphabet, 0.0)?;
    let report = absorption_analysis(&kernel, a.trials, a.max_steps, a.seed)?;
    Output::new(a.out).write_json(&serde_json::json!({
        "invocation": invocation,
        "seed": a.seed,
        "trials": report.trials,
        "absorbed": report.absorbed,
        "max_steps": report.max_steps,
        "fraction": report.fraction(),
        "mean_steps": report.mean_steps,
    }))
}

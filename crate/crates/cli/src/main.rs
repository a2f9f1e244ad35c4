use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use patrol_cli::config::{EnvironmentSource, Metric, ScenarioConfig};
use patrol_cli::pipeline::{
    draw_starts, evaluate, scenario_seed, write_reports, write_results_csv,
    Analysis,
};
use patrol_core::recurrence::RecurrentDoc;
use patrol_core::strategy::{read_strategy, write_strategy, ValidationReport};
use patrol_core::verify::EpsilonMode;
use patrol_core::*;
use serde_json::json;

#[derive(Parser)]
#[command(name = "patrol", version, about = "Discretize patrol strategies and find recurrent ones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a greedy-random strategy.
    Gen(GenArgs),
    /// Discretize a strategy onto multiples of D.
    Disc(DiscArgs),
    /// Find a recurrence in a discrete strategy and write the periodic strategy.
    Recur(RecurArgs),
    /// Cost of a strategy (or of a periodic strategy's steady state).
    Eval(EvalArgs),
    /// Check the bounds on a (source, discrete, recurrent) triple and print result rows.
    Verify(VerifyArgs),
    /// Run a whole batch from a config file.
    Run(RunArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    env: PathBuf,
    /// Number of agents with random distinct start nodes.
    #[arg(long, conflicts_with = "starts", value_parser = clap::value_parser!(u64).range(1..))]
    agents: Option<u64>,
    /// Comma-separated start nodes, one per agent.
    #[arg(long, value_delimiter = ',')]
    starts: Vec<String>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    horizon: u64,
    /// Master seed; `run` with the same seed and a single agent count
    /// generates the same strategy.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = patrol_core::generator::DEFAULT_GAMMA)]
    gamma: f64,
    #[arg(long, default_value_t = patrol_core::generator::DEFAULT_LAMBDA)]
    lambda: f64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiscArgs {
    #[arg(long)]
    env: PathBuf,
    /// Strategy file, `-` for standard input.
    #[arg(long, default_value = "-")]
    strategy: PathBuf,
    #[arg(long = "D", value_parser = clap::value_parser!(u64).range(1..))]
    d: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write the shift audit trail as CSV.
    #[arg(long)]
    audit: Option<PathBuf>,
}

#[derive(Args)]
struct RecurArgs {
    #[arg(long)]
    env: PathBuf,
    /// Discrete strategy file, `-` for standard input.
    #[arg(long, default_value = "-")]
    strategy: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    L1,
    L2,
    Inf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    env: PathBuf,
    #[arg(long, required_unless_present = "recurrent")]
    strategy: Option<PathBuf>,
    /// Periodic strategy document; evaluates one period in steady state.
    #[arg(long, conflicts_with = "strategy")]
    recurrent: Option<PathBuf>,
    #[arg(long, default_value = "gmi", value_parser = parse_metric)]
    metric: Metric,
    /// Overrides the norm of the metric.
    #[arg(long, value_enum)]
    norm: Option<NormArg>,
    /// Window `start,end`; defaults to the whole horizon.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    window: Vec<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    env: PathBuf,
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    discrete: PathBuf,
    #[arg(long)]
    recurrent: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "gmi,gai", value_parser = parse_metric)]
    metric: Vec<Metric>,
    #[arg(long, value_enum, default_value = "experiment")]
    epsilon_mode: ModeArg,
    /// Defaults to the environment file stem.
    #[arg(long)]
    layout: Option<String>,
    /// Write the full check report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lemma3,
    Experiment,
}

impl From<ModeArg> for EpsilonMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Lemma3 => EpsilonMode::Lemma3,
            ModeArg::Experiment => EpsilonMode::Experiment,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    env: Option<PathBuf>,
    #[arg(long)]
    layout: Option<String>,
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..))]
    agents: Vec<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    horizon: Option<u64>,
    #[arg(long = "D", value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..))]
    d: Vec<u64>,
    #[arg(long, value_delimiter = ',', value_parser = parse_metric)]
    metric: Vec<Metric>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    epsilon_mode: Option<ModeArg>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    horizon_cap: Option<u64>,
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long)]
    keep_artifacts: bool,
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    Metric::parse(s).ok_or_else(|| {
        format!("unknown metric `{s}` (gmi, gai, weighted-max, weighted-l1, weighted-l2)")
    })
}

/// A failure reported as JSON on standard error.
struct Failure {
    code: u8,
    body: serde_json::Value,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: 2,
            body: json!({"error": "usage", "message": message.to_string()}),
        }
    }

    fn check(message: impl ToString) -> Self {
        Failure {
            code: 1,
            body: json!({"error": "check_failed", "message": message.to_string()}),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure {
            code: 1,
            body: json!({"error": "failed", "message": format!("{e:#}")}),
        }
    }
}

impl From<StrategyError> for Failure {
    fn from(e: StrategyError) -> Self {
        let body = match &e {
            StrategyError::Parse { line, message } => json!({
                "error": "parse",
                "line": line,
                // Line 1 is the header; events are numbered from 0.
                "event_index": line.checked_sub(2),
                "message": message,
            }),
            StrategyError::Invalid(report) => invalid_json(report),
            other => json!({"error": "strategy", "message": other.to_string()}),
        };
        Failure { code: 1, body }
    }
}

fn invalid_json(report: &ValidationReport) -> serde_json::Value {
    let violations: Vec<_> = report
        .violations
        .iter()
        .map(|v| json!({"event_index": v.index, "message": v.message}))
        .collect();
    json!({
        "error": "invalid_strategy",
        "event_index": report.violations.iter().find_map(|v| v.index),
        "violations": violations,
    })
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Disc(a) => disc(a),
        Command::Recur(a) => recur(a),
        Command::Eval(a) => eval(a),
        Command::Verify(a) => verify(a),
        Command::Run(a) => run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.body);
            ExitCode::from(f.code)
        }
    }
}

fn input(path: &Path) -> Result<Box<dyn BufRead>, Failure> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdin().lock()));
    }
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(Box::new(BufReader::new(f)))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        None => Box::new(BufWriter::new(io::stdout().lock())),
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
    })
}

fn environment(path: &Path) -> Result<Environment, Failure> {
    let env = load_environment(input(path)?).with_context(|| format!("loading {}", path.display()))?;
    Ok(env)
}

/// Reads and validates a strategy.
fn strategy(env: &Environment, path: &Path) -> Result<PatrolStrategy, Failure> {
    let s = read_strategy(env, input(path)?)?;
    let report = validate(env, &s);
    if !report.is_valid() {
        return Err(StrategyError::Invalid(report).into());
    }
    Ok(s)
}

fn recurrent(env: &Environment, path: &Path) -> Result<RecurrentStrategy, Failure> {
    let doc: RecurrentDoc = serde_json::from_reader(input(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    RecurrentStrategy::from_document(env, &doc).map_err(Failure::check)
}

fn gen(a: GenArgs) -> Outcome {
    let env = environment(&a.env)?;
    let seed = scenario_seed(a.seed, 0);
    let (random, gen_seed) = draw_starts(&env, a.agents.unwrap_or(a.starts.len() as u64) as usize, seed);
    let starts = if a.starts.is_empty() {
        if a.agents.is_none() {
            return Err(Failure::usage("give --agents or --starts"));
        }
        random
    } else {
        a.starts
            .iter()
            .enumerate()
            .map(|(i, v)| {
                env.node_id(v)
                    .map(|id| (format!("a{}", i + 1), id))
                    .ok_or_else(|| Failure::usage(format!("unknown start node `{v}`")))
            })
            .collect::<Result<_, _>>()?
    };
    let cfg = GreedyRandomConfig {
        gamma: a.gamma,
        lambda: a.lambda,
        seed: gen_seed,
        horizon: Tick(a.horizon),
        starts,
    };
    let s = greedy_random(&env, &cfg).map_err(|e| match e {
        GeneratorError::InvalidConfig(m) => Failure::usage(m),
        other => Failure::check(other),
    })?;
    let mut out = output(a.out.as_deref())?;
    write_strategy(&env, &s, &mut out).context("writing strategy")?;
    out.flush().context("writing strategy")?;
    Ok(())
}

fn disc(a: DiscArgs) -> Outcome {
    let env = environment(&a.env)?;
    let s = strategy(&env, &a.strategy)?;
    let d = discretize(&env, &s, Tick(a.d)).map_err(Failure::check)?;
    let mut out = output(a.out.as_deref())?;
    write_strategy(&env, &d.base, &mut out).context("writing strategy")?;
    out.flush().context("writing strategy")?;
    if let Some(p) = a.audit {
        let f = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
        d.write_audit_csv(&env, &s, f).context("writing audit")?;
    }
    Ok(())
}

fn discrete_input(env: &Environment, path: &Path) -> Result<DiscreteStrategy, Failure> {
    let s = strategy(env, path)?;
    let d = s
        .quantum
        .ok_or_else(|| Failure::check("strategy has no D; discretize it first"))?;
    // Discretizing a discrete strategy reproduces it and rebuilds the audit.
    let disc = discretize(env, &s, d).map_err(Failure::check)?;
    if disc.base.events != s.events {
        return Err(Failure::check("strategy is not aligned to its D"));
    }
    Ok(disc)
}

fn recur(a: RecurArgs) -> Outcome {
    let env = environment(&a.env)?;
    let disc = discrete_input(&env, &a.strategy)?;
    let rec = find_recurrent_strategy(&env, &disc).map_err(Failure::check)?;
    let mut out = output(a.out.as_deref())?;
    rec.write_json(&env, &mut out).context("writing recurrent strategy")?;
    writeln!(out).context("writing recurrent strategy")?;
    out.flush().context("writing recurrent strategy")?;
    Ok(())
}

fn eval(a: EvalArgs) -> Outcome {
    let env = environment(&a.env)?;
    let mut spec = a.metric.cost_spec();
    if let Some(n) = a.norm {
        spec.norm = match n {
            NormArg::L1 => Norm::L1,
            NormArg::L2 => Norm::L2,
            NormArg::Inf => Norm::Linf,
        };
    }
    let (value, window) = if let Some(p) = a.recurrent {
        if !a.window.is_empty() {
            return Err(Failure::usage("--window applies to --strategy only"));
        }
        let rec = recurrent(&env, &p)?;
        let l = rec.period.0;
        (recurrent_cost(&env, &rec, spec), (l, 2 * l))
    } else {
        let s = strategy(&env, a.strategy.as_deref().expect("required by clap"))?;
        let window = match a.window[..] {
            [start, end] => (start, end),
            _ => (0, s.horizon.0),
        };
        let v = Timeline::new(&env, &s)
            .cost(spec, (Tick(window.0), Tick(window.1)))
            .map_err(Failure::usage)?;
        (v, window)
    };
    println!(
        "{}",
        json!({
            "metric": a.metric.as_str(),
            "window": [window.0, window.1],
            "value": value.value,
            "exact": value.exact.map(|r| format!("{}/{}", r.numer(), r.denom())),
            "at": value.at,
        })
    );
    Ok(())
}

fn verify(a: VerifyArgs) -> Outcome {
    let env = environment(&a.env)?;
    let source = strategy(&env, &a.source)?;
    let disc = discrete_input(&env, &a.discrete)?;
    let fresh = discretize(&env, &source, disc.quantum).map_err(Failure::check)?;
    if fresh.base.events != disc.base.events {
        return Err(Failure::check("discrete strategy is not the discretization of the source"));
    }
    let rec = recurrent(&env, &a.recurrent)?;
    let layout = a.layout.unwrap_or_else(|| {
        a.env
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "environment".into())
    });
    let outcome = evaluate(&Analysis {
        env: &env,
        layout: &layout,
        source: &source,
        disc: &fresh,
        rec: Some(&rec),
        metrics: &a.metric,
        table_mode: a.epsilon_mode.into(),
    })?;
    write_results_csv(io::stdout().lock(), outcome.rows.iter().cloned())?;
    if let Some(p) = a.report {
        let f = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
        serde_json::to_writer_pretty(f, &outcome).context("writing report")?;
    }
    if outcome.pass() {
        Ok(())
    } else {
        Err(Failure::check(format!("checks failed: {:?}", outcome.status)))
    }
}

fn run(a: RunArgs) -> Outcome {
    let mut cfg = match &a.config {
        Some(p) => ScenarioConfig::load(p).map_err(|e| Failure::usage(format!("{e:#}")))?,
        None => ScenarioConfig::default(),
    };
    if let Some(p) = a.env {
        cfg.environment = Some(EnvironmentSource::File(p));
    }
    if a.layout.is_some() {
        cfg.layout = a.layout;
    }
    if !a.agents.is_empty() {
        cfg.agents = a.agents.iter().map(|&n| n as usize).collect();
    }
    if let Some(h) = a.horizon {
        cfg.horizon = h;
    }
    if !a.d.is_empty() {
        cfg.d_values = a.d;
    }
    if !a.metric.is_empty() {
        cfg.metrics = a.metric;
    }
    if let Some(g) = a.gamma {
        cfg.gamma = g;
    }
    if let Some(l) = a.lambda {
        cfg.lambda = l;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(m) = a.epsilon_mode {
        cfg.epsilon_mode = m.into();
    }
    if let Some(c) = a.horizon_cap {
        cfg.horizon_cap = c;
    }
    if let Some(o) = a.out {
        cfg.output = o;
    }
    cfg.keep_artifacts |= a.keep_artifacts;
    cfg.check().map_err(|e| Failure::usage(format!("{e:#}")))?;

    let env = cfg.load_environment()?;
    let outcomes = patrol_cli::run_batch(&env, &cfg)?;
    write_reports(&cfg.output, &cfg, &outcomes)?;
    let failed: Vec<_> = outcomes
        .iter()
        .filter(|o| !o.pass())
        .map(|o| json!({"agents": o.agents, "D": o.d, "status": o.status}))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            body: json!({"error": "check_failed", "scenarios": failed}),
        })
    }
}

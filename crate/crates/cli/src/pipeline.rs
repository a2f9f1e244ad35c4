//! generate → discretize → find recurrence → evaluate → verify → report.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use patrol_core::verify::{
    determined_range, epsilon, epsilon_spec_for, lemma2_3_audit, ratio_to_f64, verify_corollary1,
    verify_theorem1, verify_theorem2, AuditReport, BoundReport, EpsilonMode, EpsilonSpec,
};
use patrol_core::{
    check_discretization, discretize, find_recurrent_strategy, greedy_random,
    strategy::write_strategy, validate, CostSpec, Environment, GreedyRandomConfig, NodeId, PatrolStrategy,
    RecurrenceError, RecurrentStrategy, Tick, Timeline, DiscreteStrategy,
};
use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Metric, ScenarioConfig, StartPolicy};

pub const RESULTS_HEADER: [&str; 12] = [
    "layout", "agents", "D", "metric", "J_pi", "J_piD", "J_piR", "epsilon_mode", "epsilon", "bound",
    "ratio", "pass",
];

/// Samples per strategy in the idleness time series.
const SERIES_POINTS: u64 = 200;

/// One line of `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub layout: String,
    pub agents: usize,
    #[serde(rename = "D")]
    pub d: u64,
    pub metric: &'static str,
    pub j_pi: f64,
    pub j_pid: f64,
    /// Absent when no recurrence was found.
    pub j_pir: Option<f64>,
    pub epsilon_mode: EpsilonMode,
    pub epsilon: f64,
    pub bound: f64,
    pub ratio: Option<f64>,
    pub pass: bool,
}

impl ResultRow {
    pub fn record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.layout.clone(),
            self.agents.to_string(),
            self.d.to_string(),
            self.metric.to_owned(),
            self.j_pi.to_string(),
            self.j_pid.to_string(),
            opt(self.j_pir),
            self.epsilon_mode.as_str().to_owned(),
            self.epsilon.to_string(),
            self.bound.to_string(),
            opt(self.ratio),
            self.pass.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    CheckFailed,
    /// No recurrence up to the horizon cap.
    RecurrenceCap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonDoc {
    pub mode: EpsilonMode,
    pub value: f64,
    #[serde(rename = "D")]
    pub d: u64,
    pub w_min: u64,
    pub i_min: Option<u64>,
}

impl EpsilonDoc {
    fn new(spec: &EpsilonSpec) -> Result<Self> {
        Ok(EpsilonDoc {
            mode: spec.mode,
            value: ratio_to_f64(epsilon(spec)?),
            d: spec.quantum.0,
            w_min: spec.w_min.0,
            i_min: spec.i_min.map(|t| t.0),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceDoc {
    pub p: usize,
    pub q: usize,
    pub period: u64,
    pub origin: u64,
}

/// Everything computed for one `(agent count, D)` scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioOutcome {
    pub layout: String,
    pub agents: usize,
    #[serde(rename = "D")]
    pub d: u64,
    pub seed: u64,
    pub horizon: u64,
    pub horizon_doublings: u32,
    pub status: Status,
    pub recurrence: Option<RecurrenceDoc>,
    pub table_epsilon: EpsilonDoc,
    pub theorem_epsilon: EpsilonDoc,
    /// Invariant violations of the discretization, as messages.
    pub discretization_violations: Vec<String>,
    pub checks: Vec<BoundReport>,
    pub audit: AuditReport,
    pub rows: Vec<ResultRow>,
    #[serde(skip)]
    pub series: Vec<SeriesPoint>,
}

impl ScenarioOutcome {
    pub fn pass(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub strategy: &'static str,
    /// Time since the start of the segment.
    pub offset: u64,
    pub time: u64,
    pub gmi: u64,
}

/// The strategies of one analysed scenario.
pub struct Analysis<'a> {
    pub env: &'a Environment,
    pub layout: &'a str,
    pub source: &'a PatrolStrategy,
    pub disc: &'a DiscreteStrategy,
    pub rec: Option<&'a RecurrentStrategy>,
    pub metrics: &'a [Metric],
    pub table_mode: EpsilonMode,
}

/// Runs every check on a scenario and builds its result rows. Theorem
/// checks use the lemma3 epsilon; the table bound uses `table_mode`.
pub fn evaluate(a: &Analysis) -> Result<ScenarioOutcome> {
    let (env, source, disc) = (a.env, a.source, a.disc);
    let d = disc.quantum;
    let table_eps = epsilon_spec_for(env, source, a.table_mode, d)?;
    let theorem_eps = epsilon_spec_for(env, source, EpsilonMode::Lemma3, d)?;

    let mut violations: Vec<String> = check_discretization(env, source, disc)?
        .into_iter()
        .map(|v| v.message)
        .collect();
    violations.extend(validate(env, &disc.base).violations.into_iter().map(|v| v.message));

    let mut checks = Vec::new();
    if let Some(range) = determined_range(source) {
        for m in a.metrics {
            let mut r = verify_theorem1(env, source, disc, m.cost_spec(), &theorem_eps, range)?;
            r.name = format!("theorem1_{}", m.as_str());
            checks.push(r);
        }
        checks.extend(verify_corollary1(env, source, disc, &theorem_eps, range)?);
    }

    let mut rows = Vec::new();
    for m in a.metrics {
        let spec = m.cost_spec();
        let mut row = ResultRow {
            layout: a.layout.to_owned(),
            agents: source.agents.len(),
            d: d.0,
            metric: m.as_str(),
            j_pi: 0.0,
            j_pid: 0.0,
            j_pir: None,
            epsilon_mode: table_eps.mode,
            epsilon: ratio_to_f64(epsilon(&table_eps)?),
            bound: 0.0,
            ratio: None,
            pass: false,
        };
        match a.rec {
            Some(rec) => {
                let table = verify_theorem2(env, source, disc, rec, spec, &table_eps)?;
                let theorem = verify_theorem2(env, source, disc, rec, spec, &theorem_eps)?;
                row.j_pi = segment_cost(env, source, (rec.p, rec.q), spec)?;
                row.j_pid = segment_cost(env, &disc.base, (rec.p, rec.q), spec)?;
                row.j_pir = Some(table.recurrent_vs_source.lhs);
                row.bound = table.recurrent_vs_source.rhs;
                row.ratio = Some(table.recurrent_vs_source.ratio);
                row.pass = table.recurrent_vs_source.pass;
                for (name, mut r) in [
                    ("recurrent_vs_discrete", theorem.recurrent_vs_discrete),
                    ("recurrent_vs_source", theorem.recurrent_vs_source),
                ] {
                    r.name = format!("theorem2_{}_{}", name, m.as_str());
                    checks.push(r);
                }
                let mut r = table.recurrent_vs_source;
                r.name = format!("table_{}", m.as_str());
                checks.push(r);
            }
            None => {
                // No segment: report the costs over the determined window.
                if let Some(range) = determined_range(source) {
                    row.j_pi = segment_cost(env, source, range, spec)?;
                    row.j_pid = segment_cost(env, &disc.base, range, spec)?;
                    row.bound = row.j_pi * (1.0 + row.epsilon);
                }
            }
        }
        rows.push(row);
    }

    let audit = lemma2_3_audit(env, source, disc);
    let checks_pass = violations.is_empty() && audit.pass() && checks.iter().all(|c| c.pass);
    let status = match a.rec {
        None => Status::RecurrenceCap,
        Some(_) if checks_pass => Status::Pass,
        Some(_) => Status::CheckFailed,
    };
    for row in &mut rows {
        row.pass &= status == Status::Pass;
    }
    let series = a.rec.map(|rec| gmi_series(env, source, disc, rec)).unwrap_or_default();

    Ok(ScenarioOutcome {
        layout: a.layout.to_owned(),
        agents: source.agents.len(),
        d: d.0,
        seed: 0,
        horizon: source.horizon.0,
        horizon_doublings: 0,
        status,
        recurrence: a.rec.map(|r| RecurrenceDoc {
            p: r.p,
            q: r.q,
            period: r.period.0,
            origin: r.origin.0,
        }),
        table_epsilon: EpsilonDoc::new(&table_eps)?,
        theorem_epsilon: EpsilonDoc::new(&theorem_eps)?,
        discretization_violations: violations,
        checks,
        audit,
        rows,
        series,
    })
}

/// Cost over `[t(i0), t(i1)]`.
fn segment_cost(env: &Environment, strat: &PatrolStrategy, (i0, i1): (usize, usize), spec: CostSpec) -> Result<f64> {
    let window = (strat.events[i0].t, strat.events[i1].t);
    Ok(Timeline::new(env, strat).cost(spec, window)?.value)
}

/// Maximum idleness over the recurring segment, under the source and the
/// discrete strategy.
fn gmi_series(
    env: &Environment,
    source: &PatrolStrategy,
    disc: &DiscreteStrategy,
    rec: &RecurrentStrategy,
) -> Vec<SeriesPoint> {
    let mut out = Vec::new();
    for (name, strat) in [("source", source), ("discrete", &disc.base)] {
        let (start, end) = (strat.events[rec.p].t, strat.events[rec.q].t);
        let tl = Timeline::new(env, strat);
        let len = end.0 - start.0;
        let step = len.div_ceil(SERIES_POINTS).max(1);
        let mut offset = 0;
        loop {
            let t = Tick(start.0 + offset.min(len));
            let gmi = tl.idleness(t).map(|v| v.0.iter().max().copied().unwrap_or(Tick::ZERO));
            if let Ok(g) = gmi {
                out.push(SeriesPoint {
                    strategy: name,
                    offset: t.0 - start.0,
                    time: t.0,
                    gmi: g.0,
                });
            }
            if offset >= len {
                break;
            }
            offset += step;
        }
    }
    out
}

/// Seed of batch entry `index` (one per agent count; every D of an agent
/// count analyses the same source strategy).
pub fn scenario_seed(master: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index as u64);
    rng.next_u64()
}

/// Start nodes and generator seed drawn from a scenario seed. Random starts
/// are distinct nodes while there are enough of them.
pub fn draw_starts(env: &Environment, agents: usize, seed: u64) -> (Vec<(String, NodeId)>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = env.node_count();
    let nodes: Vec<usize> = if agents <= n {
        sample(&mut rng, n, agents).into_vec()
    } else {
        (0..agents).map(|_| rng.random_range(0..n)).collect()
    };
    let starts = nodes
        .into_iter()
        .enumerate()
        .map(|(a, v)| (format!("a{}", a + 1), NodeId(v)))
        .collect();
    (starts, rng.next_u64())
}

fn resolve_starts(env: &Environment, cfg: &ScenarioConfig, agents: usize, seed: u64) -> Result<(Vec<(String, NodeId)>, u64)> {
    let (random, gen_seed) = draw_starts(env, agents, seed);
    match &cfg.starts {
        StartPolicy::Random => Ok((random, gen_seed)),
        StartPolicy::Explicit(names) => {
            let starts = names
                .iter()
                .enumerate()
                .map(|(a, v)| {
                    env.node_id(v)
                        .map(|id| (format!("a{}", a + 1), id))
                        .with_context(|| format!("unknown start node `{v}`"))
                })
                .collect::<Result<_>>()?;
            Ok((starts, gen_seed))
        }
    }
}

/// Source, discretization and (if found) recurrent strategy of one
/// scenario, doubling the horizon while no recurrence shows up.
pub struct Built {
    pub source: PatrolStrategy,
    pub disc: DiscreteStrategy,
    pub rec: Option<RecurrentStrategy>,
    pub doublings: u32,
}

pub fn build(
    env: &Environment,
    cfg: &ScenarioConfig,
    starts: Vec<(String, NodeId)>,
    gen_seed: u64,
    d: Tick,
) -> Result<Built> {
    let cap = cfg.horizon.saturating_mul(cfg.horizon_cap);
    let mut horizon = cfg.horizon;
    let mut doublings = 0;
    loop {
        let gen = GreedyRandomConfig {
            gamma: cfg.gamma,
            lambda: cfg.lambda,
            seed: gen_seed,
            horizon: Tick(horizon),
            starts: starts.clone(),
        };
        let source = greedy_random(env, &gen)?;
        let disc = discretize(env, &source, d)?;
        match find_recurrent_strategy(env, &disc) {
            Ok(rec) => {
                return Ok(Built {
                    source,
                    disc,
                    rec: Some(rec),
                    doublings,
                });
            }
            Err(RecurrenceError::NotFound) if horizon.saturating_mul(2) <= cap => {
                horizon *= 2;
                doublings += 1;
            }
            Err(RecurrenceError::NotFound) => {
                return Ok(Built {
                    source,
                    disc,
                    rec: None,
                    doublings,
                })
            }
            Err(e) => return Err(e.into()),
        }
    }
}

pub fn run_scenario(
    env: &Environment,
    cfg: &ScenarioConfig,
    layout: &str,
    agents: usize,
    seed: u64,
    d: u64,
) -> Result<ScenarioOutcome> {
    let (starts, gen_seed) = resolve_starts(env, cfg, agents, seed)?;
    let built = build(env, cfg, starts, gen_seed, Tick(d))?;
    let mut out = evaluate(&Analysis {
        env,
        layout,
        source: &built.source,
        disc: &built.disc,
        rec: built.rec.as_ref(),
        metrics: &cfg.metrics,
        table_mode: cfg.epsilon_mode,
    })?;
    out.seed = seed;
    out.horizon_doublings = built.doublings;
    if cfg.keep_artifacts {
        write_artifacts(env, cfg, layout, agents, d, &built)?;
    }
    Ok(out)
}

fn write_artifacts(
    env: &Environment,
    cfg: &ScenarioConfig,
    layout: &str,
    agents: usize,
    d: u64,
    built: &Built,
) -> Result<()> {
    let dir = cfg
        .output
        .join("scenarios")
        .join(format!("{layout}_a{agents}_D{d}"));
    fs::create_dir_all(&dir)?;
    write_strategy(env, &built.source, BufWriter::new(File::create(dir.join("source.jsonl"))?))?;
    write_strategy(env, &built.disc.base, BufWriter::new(File::create(dir.join("discrete.jsonl"))?))?;
    built
        .disc
        .write_audit_csv(env, &built.source, File::create(dir.join("audit.csv"))?)?;
    if let Some(rec) = &built.rec {
        rec.write_json(env, BufWriter::new(File::create(dir.join("recurrent.json"))?))?;
    }
    Ok(())
}

/// All scenarios of a batch, in (agent count, D) order.
pub fn run_batch(env: &Environment, cfg: &ScenarioConfig) -> Result<Vec<ScenarioOutcome>> {
    let layout = cfg.layout_name();
    let jobs: Vec<(usize, u64, u64)> = cfg
        .agent_counts()
        .into_iter()
        .enumerate()
        .flat_map(|(i, agents)| {
            let seed = scenario_seed(cfg.seed, i);
            cfg.d_values.iter().map(move |&d| (agents, seed, d))
        })
        .collect();
    jobs.par_iter()
        .map(|&(agents, seed, d)| run_scenario(env, cfg, &layout, agents, seed, d))
        .collect()
}

#[derive(Debug, Serialize)]
pub struct BatchReport<'a> {
    pub layout: String,
    pub seed: u64,
    pub pass: bool,
    pub scenarios: &'a [ScenarioOutcome],
}

/// Runs the batch of `cfg` and writes the report files. Returns the
/// outcomes; the batch passes when every scenario does.
pub fn run_pipeline(cfg: &ScenarioConfig) -> Result<Vec<ScenarioOutcome>> {
    cfg.check()?;
    let env = cfg.load_environment()?;
    let outcomes = run_batch(&env, cfg)?;
    write_reports(&cfg.output, cfg, &outcomes)?;
    Ok(outcomes)
}

pub fn write_results_csv<W: Write>(out: W, rows: impl IntoIterator<Item = ResultRow>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_reports(dir: &Path, cfg: &ScenarioConfig, outcomes: &[ScenarioOutcome]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = |name: &str| -> PathBuf { dir.join(name) };

    write_results_csv(
        File::create(path("results.csv"))?,
        outcomes.iter().flat_map(|o| o.rows.iter().cloned()),
    )?;

    let mut w = csv::Writer::from_path(path("ratios_vs_D.csv"))?;
    w.write_record(["layout", "agents", "metric", "D", "ratio", "one_plus_epsilon", "epsilon_mode"])?;
    for row in outcomes.iter().flat_map(|o| &o.rows) {
        w.write_record([
            row.layout.clone(),
            row.agents.to_string(),
            row.metric.to_owned(),
            row.d.to_string(),
            row.ratio.map(|r| r.to_string()).unwrap_or_default(),
            (1.0 + row.epsilon).to_string(),
            row.epsilon_mode.as_str().to_owned(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(path("gmi_timeseries.csv"))?;
    w.write_record(["layout", "agents", "D", "strategy", "offset", "time", "gmi"])?;
    for o in outcomes {
        for p in &o.series {
            w.write_record([
                o.layout.clone(),
                o.agents.to_string(),
                o.d.to_string(),
                p.strategy.to_owned(),
                p.offset.to_string(),
                p.time.to_string(),
                p.gmi.to_string(),
            ])?;
        }
    }
    w.flush()?;

    let report = BatchReport {
        layout: cfg.layout_name(),
        seed: cfg.seed,
        pass: outcomes.iter().all(ScenarioOutcome::pass),
        scenarios: outcomes,
    };
    let mut f = BufWriter::new(File::create(path("report.json"))?);
    serde_json::to_writer_pretty(&mut f, &report)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

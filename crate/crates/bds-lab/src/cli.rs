//! The `bds-lab` command line: dimension calculators, orientation and
//! list-learner queries, cascade runs, hard-instance generation,
//! verification suites, sweeps, and plotting.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use bds_core::bandit_cascade::{
    epoch_schedule, evaluate_hypothesis, list_cascade, required_ds_list_sizes, CascadeConfig,
    CascadeResult, Environment, EpochSchedule,
};
use bds_core::concept_class::restrict;
use bds_core::dimensions::{
    bds_dimension, bds_lower_bound_from_ds, ds_l_dimension, l_exponential_dimension,
    natarajan_dimension, DimensionReport, DimensionWitness,
};
use bds_core::hard_instances::{bds_hard_instance, lower_bound_budget, two_point_instance, HardInstanceKind};
use bds_core::list_learning::{one_inclusion_list_predict, prefix_majority_learner, VoteRange};
use bds_core::one_inclusion::{build_graph, min_max_outdegree_orientation};
use bds_core::rat::{is_decimal_form, parse_rat, rat_from_f64, rat_to_f64, rat_to_string, Rat};
use bds_core::seeding::{derive_seed, streams};

use crate::io::{self, emit, Meta, Report};
use crate::parallel::parallel_map;
use crate::plot::{render_svg, PlotSpec};
use crate::sweep::{sweep, sweep_to_csv, SweepConfig};
use crate::verify::{run_suites, Suite, VerificationReport, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "bds-lab", version, about = "Desk-scale laboratory for bandit multiclass learning: shattering dimensions, one-inclusion list learners, cascade runs, hard instances, and verification sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a combinatorial dimension of a class, with witness.
    Dim(DimArgs),
    /// Solve the min-max L-outdegree orientation of a projection.
    Orient(OrientArgs),
    /// Query the one-inclusion list learner on a labeled sample.
    Learn(LearnArgs),
    /// Run the cascading bandit learner.
    Cascade(CascadeArgs),
    /// Build a lower-bound hard instance.
    Hard(HardArgs),
    /// Run verification suites; exit code 1 if any case fails.
    Verify(VerifyArgs),
    /// Sample-complexity sweep over epsilon and budget multipliers.
    Sweep(SweepArgs),
    /// Render an SVG line plot from a sweep CSV.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimKind {
    Bds,
    DsL,
    Exp,
    Natarajan,
    DsLowerBound,
}

#[derive(Debug, Args, Serialize)]
pub struct DimArgs {
    /// Concept class file (.json or .csv).
    #[arg(long)]
    pub class: PathBuf,
    #[arg(long, value_enum, default_value = "bds")]
    pub kind: DimKind,
    /// List size L (required for ds-l and exp).
    #[arg(long)]
    pub list_size: Option<u32>,
    /// Search node budget; exhaustion flags the report as truncated.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Also write the bare witness JSON here (pseudo-box kinds only).
    #[arg(long)]
    #[serde(skip)]
    pub witness_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, Serialize)]
struct ClassSummary {
    k: u16,
    n: usize,
    hypotheses: usize,
}

impl ClassSummary {
    fn of(class: &bds_core::ConceptClass) -> Self {
        Self { k: class.k(), n: class.n(), hypotheses: class.len() }
    }
}

#[derive(Debug, Serialize)]
struct DimPayload {
    kind: DimKind,
    class: ClassSummary,
    list_size: Option<u32>,
    report: DimensionReport,
}

fn run_dim(args: &DimArgs) -> Result<i32> {
    let class = io::read_class(&args.class)?;
    let report = match args.kind {
        DimKind::Bds => bds_dimension(&class, args.budget),
        DimKind::Natarajan => natarajan_dimension(&class, args.budget),
        DimKind::DsLowerBound => bds_lower_bound_from_ds(&class, args.budget),
        DimKind::DsL => {
            let l = args.list_size.context("--list-size is required for kind ds-l")?;
            ds_l_dimension(&class, l, args.budget)?
        }
        DimKind::Exp => {
            let l = args.list_size.context("--list-size is required for kind exp")?;
            l_exponential_dimension(&class, l, args.budget)?
        }
    };
    if let Some(witness_path) = &args.witness_out {
        match &report.witness {
            Some(DimensionWitness::PseudoBox(w)) => {
                let mut text = serde_json::to_string_pretty(w)?;
                text.push('\n');
                emit(Some(witness_path), &text)?;
            }
            _ => bail!("no pseudo-box witness available for --witness-out"),
        }
    }
    let payload = DimPayload {
        kind: args.kind,
        class: ClassSummary::of(&class),
        list_size: args.list_size,
        report,
    };
    emit_json(args.out.as_deref(), args.format, 0, args, &payload)
}

#[derive(Debug, Args, Serialize)]
pub struct OrientArgs {
    #[arg(long)]
    pub class: PathBuf,
    /// Instance sequence, comma separated (e.g. 0,1,2).
    #[arg(long)]
    pub seq: String,
    #[arg(long)]
    pub list_size: u32,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, Serialize)]
struct OrientedEdge {
    direction: usize,
    off_pattern: Vec<u16>,
    members: Vec<Vec<u16>>,
    selected: Vec<Vec<u16>>,
}

#[derive(Debug, Serialize)]
struct OrientPayload {
    class: ClassSummary,
    seq: Vec<usize>,
    list_size: u32,
    max_outdegree: usize,
    vertices: usize,
    edges: Vec<OrientedEdge>,
}

fn parse_index_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|c| c.trim().parse::<usize>().with_context(|| format!("bad index {c:?}")))
        .collect()
}

fn run_orient(args: &OrientArgs) -> Result<i32> {
    let class = io::read_class(&args.class)?;
    let seq = parse_index_list(&args.seq)?;
    let proj = restrict(&class, &seq)?;
    let graph = build_graph(&proj);
    let (orientation, max_outdegree) = min_max_outdegree_orientation(&graph, args.list_size);
    let edges = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| OrientedEdge {
            direction: edge.direction,
            off_pattern: edge.off_pattern.clone(),
            members: edge.members.iter().map(|&v| graph.vertices()[v].clone()).collect(),
            selected: orientation.selected[e]
                .iter()
                .map(|&v| graph.vertices()[v].clone())
                .collect(),
        })
        .collect();
    let payload = OrientPayload {
        class: ClassSummary::of(&class),
        seq,
        list_size: args.list_size,
        max_outdegree,
        vertices: graph.vertices().len(),
        edges,
    };
    emit_json(args.out.as_deref(), args.format, 0, args, &payload)
}

#[derive(Debug, Args, Serialize)]
pub struct LearnArgs {
    #[arg(long)]
    pub class: PathBuf,
    /// Labeled sample file: JSON list of [instance, label] pairs.
    #[arg(long)]
    pub sample: PathBuf,
    #[arg(long)]
    pub list_size: u32,
    /// Query instances, comma separated; defaults to the whole domain.
    #[arg(long)]
    pub query: Option<String>,
    /// Use the prefix-majority wrapper instead of the plain transductive
    /// predictor.
    #[arg(long)]
    pub prefix_majority: bool,
    /// Let the full-sample predictor join the prefix vote.
    #[arg(long)]
    pub include_last: bool,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, Serialize)]
struct Prediction {
    instance: usize,
    list: Vec<u16>,
}

#[derive(Debug, Serialize)]
struct LearnPayload {
    class: ClassSummary,
    list_size: u32,
    prefix_majority: bool,
    truncations: u64,
    predictions: Vec<Prediction>,
}

fn run_learn(args: &LearnArgs) -> Result<i32> {
    let class = io::read_class(&args.class)?;
    let sample = io::read_sample(&args.sample)?;
    let queries = match &args.query {
        Some(q) => parse_index_list(q)?,
        None => (0..class.n()).collect(),
    };
    let vote_range =
        if args.include_last { VoteRange::IncludeLast } else { VoteRange::StopBeforeLast };
    let (predictions, truncations) = if args.prefix_majority {
        let out = prefix_majority_learner(&class, &sample, args.list_size, vote_range)?;
        let preds = queries
            .iter()
            .map(|&x| Prediction { instance: x, list: out.hypothesis.get(x).to_vec() })
            .collect();
        (preds, out.truncations)
    } else {
        let preds = queries
            .iter()
            .map(|&x| {
                Ok(Prediction {
                    instance: x,
                    list: one_inclusion_list_predict(&class, &sample, x, args.list_size)?,
                })
            })
            .collect::<Result<_>>()?;
        (preds, 0)
    };
    let payload = LearnPayload {
        class: ClassSummary::of(&class),
        list_size: args.list_size,
        prefix_majority: args.prefix_majority,
        truncations,
        predictions,
    };
    emit_json(args.out.as_deref(), args.format, 0, args, &payload)
}

#[derive(Debug, Args, Serialize)]
pub struct CascadeArgs {
    #[arg(long)]
    pub class: PathBuf,
    /// Environment file: {"masses": [...], "target": [...] | "target_index": i}.
    #[arg(long)]
    pub env: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Budget scale in (0, 1]; 1 reproduces the schedule formulas.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Keep full transcripts in the output.
    #[arg(long)]
    pub transcript: bool,
    /// Let the full-sample predictor join each epoch's prefix vote.
    #[arg(long)]
    pub include_last: bool,
    /// Node budget for the schedule's dimension computations.
    #[arg(long, default_value_t = 10_000_000)]
    pub dim_budget: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, Serialize)]
struct CascadeRun {
    trial: u64,
    seed: u64,
    final_error: String,
    final_error_f64: f64,
    result: CascadeResult,
}

#[derive(Debug, Serialize)]
struct CascadeSummary {
    trials: u64,
    error_mean: String,
    error_mean_f64: f64,
    failure_rate: f64,
    epochs_flagged: u64,
}

#[derive(Debug, Serialize)]
struct CascadePayload {
    class: ClassSummary,
    schedule: EpochSchedule,
    summary: CascadeSummary,
    runs: Vec<CascadeRun>,
}

fn run_cascade(args: &CascadeArgs) -> Result<i32> {
    let class = io::read_class(&args.class)?;
    let dist = io::read_environment(&args.env, &class)?;
    let mut ds_values = std::collections::BTreeMap::new();
    for l in required_ds_list_sizes(class.k()) {
        ds_values.insert(l, ds_l_dimension(&class, l, args.dim_budget)?.value);
    }
    let schedule = epoch_schedule(class.k(), args.epsilon, args.delta, &ds_values, args.scale)?;
    let vote_range =
        if args.include_last { VoteRange::IncludeLast } else { VoteRange::StopBeforeLast };
    let cascade_config = CascadeConfig {
        vote_range,
        max_rounds: None,
        record_transcript: args.transcript,
    };
    let runs: Vec<CascadeRun> = parallel_map(args.trials, |t| {
        let trial_seed = derive_seed(args.seed, streams::TRIAL, t);
        let env = Environment::new(class.clone(), dist.clone(), trial_seed)
            .expect("environment validated at load");
        let result = list_cascade(&env, &schedule, &cascade_config).expect("cascade runs");
        let err = evaluate_hypothesis(&result.hypothesis, &env.dist).expect("domains match");
        CascadeRun {
            trial: t,
            seed: trial_seed,
            final_error: rat_to_string(&err),
            final_error_f64: rat_to_f64(&err),
            result,
        }
    });
    let eps_rat = rat_from_f64(args.epsilon)?;
    let errors: Vec<Rat> = runs
        .iter()
        .map(|r| parse_rat(&r.final_error).expect("round-trip of canonical rational"))
        .collect();
    let mean = errors.iter().sum::<Rat>() / bds_core::rat::rat_int(args.trials.max(1) as i64);
    let failures = errors.iter().filter(|e| *e > &eps_rat).count();
    let flagged = runs
        .iter()
        .map(|r| r.result.epochs.iter().filter(|e| e.shortfall || e.zero_collection).count() as u64)
        .sum();
    let payload = CascadePayload {
        class: ClassSummary::of(&class),
        schedule,
        summary: CascadeSummary {
            trials: args.trials,
            error_mean: rat_to_string(&mean),
            error_mean_f64: rat_to_f64(&mean),
            failure_rate: failures as f64 / args.trials.max(1) as f64,
            epochs_flagged: flagged,
        },
        runs,
    };
    emit_json(args.out.as_deref(), args.format, args.seed, args, &payload)
}

#[derive(Debug, Args, Serialize)]
pub struct HardArgs {
    #[arg(long)]
    pub class: PathBuf,
    /// Pseudo-box witness JSON (from `dim --witness-out`).
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Build the two-point instance instead of the pseudo-box one.
    #[arg(long)]
    pub two_point: bool,
    /// Exact rational (e.g. 1/32); decimals convert exactly with a
    /// warning.
    #[arg(long)]
    pub epsilon: String,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, Serialize)]
struct HardPayload {
    instance: bds_core::hard_instances::HardInstance,
    lower_bound_budget: Option<u64>,
}

fn run_hard(args: &HardArgs) -> Result<i32> {
    let class = io::read_class(&args.class)?;
    if is_decimal_form(&args.epsilon) {
        eprintln!(
            "warning: decimal epsilon {:?} converted exactly to {}",
            args.epsilon,
            rat_to_string(&parse_rat(&args.epsilon)?)
        );
    }
    let epsilon = parse_rat(&args.epsilon)?;
    let instance = if args.two_point {
        two_point_instance(&epsilon, &class)?
    } else {
        let witness_path =
            args.witness.as_ref().context("--witness is required unless --two-point")?;
        let witness = io::read_witness(witness_path)?;
        bds_hard_instance(&class, &witness, &epsilon)?
    };
    let budget = match instance.kind {
        HardInstanceKind::PseudoBox => Some(lower_bound_budget(&instance)?),
        HardInstanceKind::TwoPoint => None,
    };
    let payload = HardPayload { instance, lower_bound_budget: budget };
    emit_json(args.out.as_deref(), args.format, 0, args, &payload)
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Corpus size (random classes).
    #[arg(long, default_value_t = 1000)]
    pub classes: u64,
    #[arg(long, default_value_t = 2024)]
    pub corpus_seed: u64,
    /// Master seed for suite-level randomness.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Monte-Carlo trials for the lower-bound suite.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Seeds for the cascade PAC suite.
    #[arg(long, default_value_t = 200)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.2)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Record only cases whose id contains this substring.
    #[arg(long)]
    pub case: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, Serialize)]
struct VerifyPayload {
    all_passed: bool,
    reports: Vec<VerificationReport>,
}

fn run_verify(args: &VerifyArgs) -> Result<i32> {
    let config = VerifyConfig {
        corpus: crate::corpus::CorpusConfig {
            classes: args.classes,
            seed: args.corpus_seed,
            ..Default::default()
        },
        seed: args.seed,
        cascade_seeds: args.seeds,
        epsilon: args.epsilon,
        delta: args.delta,
        scale: args.scale,
        lower_bound_trials: args.trials,
        case_filter: args.case.clone(),
        ..Default::default()
    };
    let reports = run_suites(args.suite, &config);
    let mut all_passed = true;
    for report in &reports {
        let status = if report.ok() { "PASS" } else { "FAIL" };
        eprintln!(
            "[{}] {}: {} passed, {} failed ({})",
            status, report.suite, report.passed, report.failed, report.corpus
        );
        for case in report.cases.iter().filter(|c| !c.pass) {
            eprintln!("  FAIL {}: {} vs {} ({}); repro: {}", case.id, case.lhs, case.rhs, case.detail, case.repro);
        }
        all_passed &= report.ok();
    }
    let payload = VerifyPayload { all_passed, reports };
    emit_json(args.out.as_deref(), args.format, args.seed, args, &payload)?;
    Ok(if all_passed { 0 } else { 1 })
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub class: PathBuf,
    #[arg(long)]
    pub env: PathBuf,
    /// Comma-separated epsilon grid.
    #[arg(long, default_value = "0.1")]
    pub epsilons: String,
    /// Comma-separated budget multipliers (schedule scales in (0, 1]).
    #[arg(long, default_value = "1")]
    pub multipliers: String,
    #[arg(long, default_value_t = 0.2)]
    pub delta: f64,
    #[arg(long, default_value_t = 50)]
    pub trials: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|c| c.trim().parse::<f64>().with_context(|| format!("bad number {c:?}")))
        .collect()
}

fn run_sweep(args: &SweepArgs) -> Result<i32> {
    let class = io::read_class(&args.class)?;
    let dist = io::read_environment(&args.env, &class)?;
    let config = SweepConfig {
        epsilons: parse_f64_list(&args.epsilons)?,
        multipliers: parse_f64_list(&args.multipliers)?,
        delta: args.delta,
        trials: args.trials,
        seed: args.seed,
        ..SweepConfig::default()
    };
    let rows = sweep(&class, &dist, &config)?;
    let meta = Meta::new(args.seed, args)?;
    match args.format {
        OutputFormat::Csv => emit(args.out.as_deref(), &sweep_to_csv(&rows, &meta))?,
        OutputFormat::Json => {
            let report = Report { meta, data: rows };
            emit(args.out.as_deref(), &io::report_to_string(&report)?)?;
        }
    }
    Ok(0)
}

#[derive(Debug, Args, Serialize)]
pub struct PlotArgs {
    /// Input CSV (a sweep output).
    #[arg(long)]
    pub csv: PathBuf,
    /// x column name.
    #[arg(long)]
    pub x: String,
    /// Comma-separated y column names.
    #[arg(long)]
    pub y: String,
    #[arg(long)]
    pub logx: bool,
    #[arg(long)]
    pub logy: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn run_plot(args: &PlotArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&args.csv)
        .with_context(|| format!("reading {}", args.csv.display()))?;
    let spec = PlotSpec {
        x: args.x.clone(),
        ys: args.y.split(',').map(|s| s.trim().to_string()).collect(),
        logx: args.logx,
        logy: args.logy,
    };
    let meta = Meta::new(args.seed, args)?;
    let svg = render_svg(&text, &spec, &meta)?;
    emit(args.out.as_deref(), &svg)?;
    Ok(0)
}

fn emit_json<C: Serialize, T: Serialize>(
    out: Option<&Path>,
    format: OutputFormat,
    seed: u64,
    config: &C,
    payload: &T,
) -> Result<i32> {
    if format != OutputFormat::Json {
        bail!("this subcommand only supports --format json");
    }
    let meta = Meta::new(seed, config)?;
    let report = Report { meta, data: payload };
    emit(out, &io::report_to_string(&report)?)?;
    Ok(0)
}

impl Cli {
    pub fn run(&self) -> Result<i32> {
        match &self.command {
            Command::Dim(args) => run_dim(args),
            Command::Orient(args) => run_orient(args),
            Command::Learn(args) => run_learn(args),
            Command::Cascade(args) => run_cascade(args),
            Command::Hard(args) => run_hard(args),
            Command::Verify(args) => run_verify(args),
            Command::Sweep(args) => run_sweep(args),
            Command::Plot(args) => run_plot(args),
        }
    }
}

//! Command-line front end for the rendezvous toolkit.
//!
//! Every subcommand except `color` prints a single-line JSON report with a
//! fixed field order (`--pretty` re-renders the same payload indented).
//! Exit status: 0 on success, 1 on runtime failure or bound violations,
//! 2 on usage errors. Randomized commands take `--seed`; when omitted, a
//! seed is generated and echoed in the report.

mod report;
mod selftest;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use rendezvous_core::coloring::color_edge;
use rendezvous_core::oneround::{
    brute_force_optimal, orient_one_round, Graph, BRUTE_FORCE_EDGE_CAP,
};
use rendezvous_core::schedules::{
    cycle_length, general_schedule, pair_schedule, symmetric_wrap, ChannelSet, Schedule,
};
use rendezvous_core::simulator::{
    collect_batch, optimal_async_cyclic, optimal_sync, run_trial, sweep_shifts, Family,
    OracleResult, SweepReport, TrialConfig,
};
use rendezvous_core::{beacon, Error};

use report::Report;

#[derive(Parser)]
#[command(
    name = "rendezvous",
    version,
    about = "Blind-rendezvous channel hopping: schedules, simulation, oracles, beacon trials and one-round orientation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a hopping schedule and emit its first slots
    GenSchedule(GenScheduleArgs),
    /// Run randomized rendezvous trials for a schedule family
    Simulate(SimulateArgs),
    /// Sweep relative wake offsets for two explicit channel sets
    Sweep(SweepArgs),
    /// Certify optimal slot counts on tiny instances by exhaustion
    Oracle(OracleArgs),
    /// Monte Carlo runs of the shared-beacon protocol
    Beacon(BeaconArgs),
    /// Orient a graph to maximize single-round meetings
    Orient(OrientArgs),
    /// Print the edge color of a channel pair as a decimal integer
    Color(ColorArgs),
    /// Run the built-in invariant suites
    Selftest(SelftestArgs),
}

#[derive(Clone, Debug)]
struct ChannelList(Vec<u32>);

fn parse_channels(s: &str) -> Result<ChannelList, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let trimmed = part.trim();
        if trimmed.is_empty() {
            return Err("empty channel entry".into());
        }
        out.push(trimmed.parse::<u32>().map_err(|e| format!("channel {trimmed:?}: {e}"))?);
    }
    Ok(ChannelList(out))
}

#[derive(Clone, Debug)]
struct EdgeList(Vec<(u32, u32)>);

fn parse_edges(s: &str) -> Result<EdgeList, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let trimmed = part.trim();
        let (a, b) = trimmed
            .split_once('-')
            .ok_or_else(|| format!("edge {trimmed:?} must look like 1-2"))?;
        let a = a.trim().parse::<u32>().map_err(|e| format!("edge {trimmed:?}: {e}"))?;
        let b = b.trim().parse::<u32>().map_err(|e| format!("edge {trimmed:?}: {e}"))?;
        out.push((a, b));
    }
    Ok(EdgeList(out))
}

#[derive(Args)]
struct OutputArgs {
    /// Pretty-print the report instead of emitting one line
    #[arg(long)]
    pretty: bool,
    /// Emit compact JSON (the default; kept for scripting clarity)
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
}

#[derive(Args)]
struct GenScheduleArgs {
    /// Channel set, e.g. 1,4,7
    #[arg(long, value_parser = parse_channels)]
    set: ChannelList,
    /// Universe size
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    n: u32,
    /// Wrap the schedule for constant-time symmetric rendezvous
    #[arg(long)]
    symmetric: bool,
    /// Number of slots to emit (defaults to one full period)
    #[arg(long)]
    horizon: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Schedule family: pair, general, symmetric, sweep or random
    #[arg(long)]
    family: String,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    n: u32,
    /// Number of sampled pairs
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pairs: u32,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest sampled set size
    #[arg(long, default_value_t = 8)]
    max_size: u32,
    /// Worker threads; trials merge identically at any worker count
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(usize))]
    workers: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_channels)]
    set_a: ChannelList,
    #[arg(long, value_parser = parse_channels)]
    set_b: ChannelList,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    n: u32,
    /// Schedule family: pair, general or symmetric
    #[arg(long, default_value = "general")]
    family: String,
    /// Offsets swept on each side (defaults to the larger period)
    #[arg(long)]
    shift_bound: Option<u64>,
    /// Slots simulated per offset (defaults to four times the family bound)
    #[arg(long)]
    horizon: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    n: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    /// Slot cap (synchronous) or period cap (asynchronous)
    #[arg(long)]
    cap: u64,
    /// Search cyclic schedules under all wake offsets instead of aligned clocks
    #[arg(long)]
    async_cyclic: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BeaconArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    n: u32,
    #[arg(long, value_parser = parse_channels)]
    si: ChannelList,
    #[arg(long, value_parser = parse_channels)]
    sj: ChannelList,
    /// Number of independent beacon seeds to try
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    seeds: u32,
    /// Base seed; run i uses base + i
    #[arg(long)]
    seed: Option<u64>,
    /// Give up after this many complete shared blocks
    #[arg(long, default_value_t = 10_000)]
    max_blocks: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OrientArgs {
    /// Edge list, e.g. 1-2,2-3,1-3
    #[arg(long, value_parser = parse_edges)]
    edges: EdgeList,
    #[arg(long)]
    seed: Option<u64>,
    /// Independent rounding hyperplanes
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    rounds: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ColorArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    n: u32,
    #[arg(long)]
    a: u32,
    #[arg(long)]
    b: u32,
}

#[derive(Args)]
struct SelftestArgs {
    #[command(flatten)]
    output: OutputArgs,
}

/// Failures after argument parsing: usage errors exit 2, runtime errors 1.
enum AppError {
    Usage(String),
    Runtime(String),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_)
            | Error::InvalidChannel { .. }
            | Error::InvalidChannelSet(_)
            | Error::InvalidEdge(_)
            | Error::InvalidGraph(_)
            | Error::SetTooLarge { .. }
            | Error::InstanceTooLarge(_)
            | Error::VerificationCapExceeded { .. }
            | Error::DisjointSets => AppError::Usage(e.to_string()),
            other => AppError::Runtime(other.to_string()),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(AppError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, AppError> {
    match cli.command {
        Command::GenSchedule(args) => gen_schedule(args),
        Command::Simulate(args) => simulate(args),
        Command::Sweep(args) => sweep(args),
        Command::Oracle(args) => oracle(args),
        Command::Beacon(args) => beacon_cmd(args),
        Command::Orient(args) => orient(args),
        Command::Color(args) => color(args),
        Command::Selftest(args) => run_selftest(args),
    }
}

#[derive(Serialize)]
struct GenScheduleResults {
    n: u32,
    set: Vec<u32>,
    period: u64,
    slots: Vec<u32>,
}

fn gen_schedule(args: GenScheduleArgs) -> Result<i32, AppError> {
    let set = ChannelSet::new(args.set.0.clone(), args.n)?;
    let schedule = general_schedule(&set);
    let schedule = if args.symmetric { symmetric_wrap(schedule) } else { schedule };
    let period = schedule.period().expect("generated schedules are periodic");
    let horizon = args.horizon.unwrap_or(period);
    let slots: Vec<u32> = (0..horizon)
        .map(|t| schedule.channel_at(t).expect("generated schedules are never silent"))
        .collect();
    let results = GenScheduleResults { n: args.n, set: set.channels().to_vec(), period, slots };
    let report = Report::new("gen-schedule", None, results);
    println!("{}", report.render(args.output.pretty));
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SimulateResults {
    config: TrialConfig,
    report: SweepReport,
}

fn simulate(args: SimulateArgs) -> Result<i32, AppError> {
    let family = Family::parse(&args.family)?;
    let seed = args.seed.unwrap_or_else(rand::random);
    let config =
        TrialConfig { n: args.n, family, pairs: args.pairs, seed, max_size: args.max_size };
    config.validate()?;
    let outcomes: Vec<_> = if args.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.workers)
            .build()
            .map_err(|e| AppError::Runtime(e.to_string()))?;
        pool.install(|| (0..config.pairs).into_par_iter().map(|t| run_trial(&config, t)).collect())
    } else {
        (0..config.pairs).map(|t| run_trial(&config, t)).collect()
    };
    let batch = collect_batch(&config, outcomes);
    let ok = batch.violations.is_empty();
    let results = SimulateResults { config: batch.config, report: batch.report };
    let report = Report::new("simulate", Some(seed), results).with_violations(batch.violations);
    println!("{}", report.render(args.output.pretty));
    Ok(if ok { 0 } else { 1 })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SweepResults {
    family: String,
    n: u32,
    set_a: Vec<u32>,
    set_b: Vec<u32>,
    shift_bound: u64,
    horizon: u64,
    report: SweepReport,
}

fn build_family_schedule(family: &str, set: &ChannelSet) -> Result<Schedule, AppError> {
    match family {
        "pair" => Ok(pair_schedule(set)?),
        "general" => Ok(general_schedule(set)),
        "symmetric" => Ok(symmetric_wrap(general_schedule(set))),
        other => Err(AppError::Usage(format!("unknown family {other:?} for sweep"))),
    }
}

fn sweep(args: SweepArgs) -> Result<i32, AppError> {
    let sa = ChannelSet::new(args.set_a.0.clone(), args.n)?;
    let sb = ChannelSet::new(args.set_b.0.clone(), args.n)?;
    let a = build_family_schedule(&args.family, &sa)?;
    let b = build_family_schedule(&args.family, &sb)?;
    let shift_bound = args
        .shift_bound
        .unwrap_or_else(|| a.period().unwrap_or(1).max(b.period().unwrap_or(1)));
    let base_bound =
        2 * (3 * sa.len() as u64) * (3 * sb.len() as u64) * cycle_length(args.n);
    let default_horizon = match args.family.as_str() {
        "pair" => 4 * cycle_length(args.n),
        "symmetric" => 4 * (12 * base_bound + 12),
        _ => 4 * base_bound,
    };
    let horizon = args.horizon.unwrap_or(default_horizon);
    let sweep = sweep_shifts(&a, &b, shift_bound, horizon);
    let results = SweepResults {
        family: args.family,
        n: args.n,
        set_a: sa.channels().to_vec(),
        set_b: sb.channels().to_vec(),
        shift_bound,
        horizon,
        report: sweep,
    };
    let report = Report::new("sweep", None, results);
    println!("{}", report.render(args.output.pretty));
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct OracleResults {
    mode: &'static str,
    result: OracleResult,
}

fn oracle(args: OracleArgs) -> Result<i32, AppError> {
    let (mode, result) = if args.async_cyclic {
        ("asyncCyclic", optimal_async_cyclic(args.n, args.k, args.cap)?)
    } else {
        ("sync", optimal_sync(args.n, args.k, args.cap)?)
    };
    let report = Report::new("oracle", None, OracleResults { mode, result });
    println!("{}", report.render(args.output.pretty));
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BeaconQuantiles {
    p50: Option<u64>,
    p90: Option<u64>,
    max: Option<u64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BeaconResults {
    n: u32,
    si: Vec<u32>,
    sj: Vec<u32>,
    seeds: u32,
    max_blocks: u64,
    block_len: u64,
    /// Blocks to rendezvous per seed; null where the cap was hit.
    blocks: Vec<Option<u64>>,
    quantiles: BeaconQuantiles,
    failures: u64,
}

fn beacon_cmd(args: BeaconArgs) -> Result<i32, AppError> {
    let si = ChannelSet::new(args.si.0.clone(), args.n)?;
    let sj = ChannelSet::new(args.sj.0.clone(), args.n)?;
    let seed = args.seed.unwrap_or_else(rand::random);
    let mut blocks = Vec::with_capacity(args.seeds as usize);
    for i in 0..args.seeds {
        blocks.push(beacon::simulate_beacon(
            &si,
            &sj,
            seed.wrapping_add(i as u64),
            args.max_blocks,
            (0, 0),
        )?);
    }
    let mut met: Vec<u64> = blocks.iter().flatten().copied().collect();
    met.sort_unstable();
    let pick = |q: f64| -> Option<u64> {
        if met.is_empty() {
            None
        } else {
            Some(met[((met.len() - 1) as f64 * q) as usize])
        }
    };
    let results = BeaconResults {
        n: args.n,
        si: si.channels().to_vec(),
        sj: sj.channels().to_vec(),
        seeds: args.seeds,
        max_blocks: args.max_blocks,
        block_len: beacon::block_len(args.n),
        quantiles: BeaconQuantiles { p50: pick(0.5), p90: pick(0.9), max: met.last().copied() },
        failures: blocks.iter().filter(|b| b.is_none()).count() as u64,
        blocks,
    };
    let report = Report::new("beacon", Some(seed), results);
    println!("{}", report.render(args.output.pretty));
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct OrientResults {
    edges: Vec<String>,
    n: u32,
    rounds: u32,
    /// Orientation bit per edge: 0 toward the smaller endpoint, 1 toward the larger.
    orientation: Vec<u8>,
    in_pairs: u64,
    incident_pairs: u64,
    sdp_objective: f64,
    oracle_optimal: Option<u64>,
    achieved_ratio: Option<f64>,
}

fn orient(args: OrientArgs) -> Result<i32, AppError> {
    if args.edges.0.is_empty() {
        return Err(AppError::Usage("edge list is empty".into()));
    }
    let n = args.edges.0.iter().map(|&(a, b)| a.max(b)).max().unwrap();
    let graph = Graph::new(n, args.edges.0.clone())?;
    let seed = args.seed.unwrap_or_else(rand::random);
    let result = orient_one_round(&graph, seed, args.rounds);
    let oracle_optimal = if graph.edge_count() <= BRUTE_FORCE_EDGE_CAP {
        Some(brute_force_optimal(&graph)?.0)
    } else {
        None
    };
    let achieved_ratio = oracle_optimal
        .filter(|&opt| opt > 0)
        .map(|opt| result.in_pairs as f64 / opt as f64);
    let results = OrientResults {
        edges: graph.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect(),
        n,
        rounds: args.rounds,
        orientation: result.orientation.iter().map(|&b| b as u8).collect(),
        in_pairs: result.in_pairs,
        incident_pairs: result.incident_pairs,
        sdp_objective: result.sdp_objective,
        oracle_optimal,
        achieved_ratio,
    };
    let report = Report::new("orient", Some(seed), results);
    println!("{}", report.render(args.output.pretty));
    Ok(0)
}

fn color(args: ColorArgs) -> Result<i32, AppError> {
    let c = color_edge(args.a, args.b, args.n)?;
    println!("{c}");
    Ok(0)
}

fn run_selftest(args: SelftestArgs) -> Result<i32, AppError> {
    let results = selftest::run();
    let ok = results.all_passed();
    let report = Report::new("selftest", None, results);
    println!("{}", report.render(args.output.pretty));
    Ok(if ok { 0 } else { 1 })
}

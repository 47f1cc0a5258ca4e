//! Command-line front end: ingestion, conflict-graph analysis,
//! partitioning, assignment, aggregation, property checks, simulations,
//! and a one-shot pipeline mode. Every error maps onto a stable exit
//! code so scripts can branch on the failure class.

mod render;

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use splitrank::aggregate::{divide_and_rank_aggregate, BordaGroupOrdering, GroupOrdering};
use splitrank::analysis::{connected_components, prune_top_degree, DegreeMode, PruneTrace};
use splitrank::assign::{validate_assignment, AssignStrategy, BalancedRoundRobin};
use splitrank::ingest::{
    assignment_json, parse_assignment_json, parse_conflicts, parse_partition_json,
    parse_profile_json, parse_ranking_json, partition_json, ranking_json, ConflictFormat,
    ParsedConflicts,
};
use splitrank::lab::{
    chain_search, misplacement_monte_carlo, total_ranking_census, MisplacementConfig,
};
use splitrank::model::{AggregateRanking, AssignmentParams, ReviewGraph};
use splitrank::partition::partition_with_stats;
use splitrank::verify::{
    check_gu, check_pu, check_sp_exhaustive, check_sp_randomized, PropertyReport,
};
use splitrank::{assign, Error, Profile, Result};

#[derive(Parser)]
#[command(
    name = "splitrank",
    version,
    about = "Conflict-aware reviewer assignment and strategyproof rank aggregation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a conflict graph: sizes, degrees, connected components.
    Stats(StatsArgs),
    /// Remove the highest-degree reviewers one by one, reporting
    /// component statistics at chosen checkpoints.
    Prune(PruneArgs),
    /// Split reviewers and papers into two sides with no crossing
    /// conflicts and a bounded review-load ratio.
    Partition(PartitionArgs),
    /// Partition, then give each side's papers to the other side's
    /// reviewers.
    Assign(AssignArgs),
    /// Merge a preference profile over a partition into one ranking.
    Aggregate(AggregateArgs),
    /// Check properties of an aggregation against an assignment.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Seeded randomized experiments.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Exhaustive searches showing that certain property combinations
    /// have no satisfying rule.
    #[command(subcommand)]
    VerifyImpossibility(VerifyCommand),
    /// Ingest, partition, and assign in one shot; with a profile, also
    /// aggregate and check the result. Writes every artifact to a
    /// directory.
    Pipeline(PipelineArgs),
    /// Render human-readable summaries of artifact files.
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Sniff: a leading `{` means graph-json, anything else pairs-csv.
    Auto,
    PairsCsv,
    GraphJson,
}

#[derive(Args)]
struct InputArgs {
    /// Conflict data file; `-` reads standard input.
    #[arg(long)]
    input: String,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    format: Format,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Tab-separated key/value rows instead of the aligned table.
    #[arg(long)]
    tsv: bool,
}

#[derive(Args)]
struct PruneArgs {
    #[command(flatten)]
    input: InputArgs,
    /// How many reviewers to remove in total.
    #[arg(long)]
    remove: usize,
    /// Comma-separated removal counts at which to report; defaults to
    /// `0,<remove>`.
    #[arg(long, value_delimiter = ',')]
    checkpoints: Option<Vec<usize>>,
    /// Rank reviewers by their degree in the untouched graph instead of
    /// the residual one.
    #[arg(long)]
    initial_degrees: bool,
    /// Tab-separated rows instead of the aligned table.
    #[arg(long)]
    tsv: bool,
    /// Emit the full trace as JSON instead of a table.
    #[arg(long, conflicts_with = "tsv")]
    json: bool,
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Maximum papers per reviewer.
    #[arg(long)]
    mu: usize,
    /// Reviews required per paper.
    #[arg(long)]
    lambda: usize,
    /// Write the partition-json here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AssignStrategyId {
    RoundRobin,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupStrategyId {
    Borda,
}

#[derive(Args)]
struct AssignArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    mu: usize,
    #[arg(long)]
    lambda: usize,
    #[arg(long, value_enum, default_value_t = AssignStrategyId::RoundRobin)]
    strategy: AssignStrategyId,
    /// Write the assignment-json here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AggregateArgs {
    #[command(flatten)]
    input: InputArgs,
    /// partition-json file.
    #[arg(long)]
    partition: String,
    /// profile-json file.
    #[arg(long)]
    profile: String,
    #[arg(long, value_enum, default_value_t = GroupStrategyId::Borda)]
    strategy: GroupStrategyId,
    /// Write the ranking-json here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Group unanimity: no reviewer group's unanimous preference is
    /// contradicted by the output.
    Gu(CheckOutputArgs),
    /// Pairwise unanimity: co-reviewed pairs whose common reviewers all
    /// agree keep that order.
    Pu(CheckOutputArgs),
    /// Strategyproofness: no reviewer can move a conflicted paper by
    /// misreporting her ranking.
    Sp(CheckSpArgs),
}

#[derive(Args)]
struct CheckOutputArgs {
    #[command(flatten)]
    input: InputArgs,
    /// assignment-json file.
    #[arg(long)]
    assignment: String,
    /// profile-json file.
    #[arg(long)]
    profile: String,
    /// ranking-json file.
    #[arg(long)]
    ranking: String,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckSpArgs {
    #[command(flatten)]
    input: InputArgs,
    /// assignment-json file.
    #[arg(long)]
    assignment: String,
    /// partition-json file the aggregator should run over.
    #[arg(long)]
    partition: String,
    /// Enumerate every profile and deviation.
    #[arg(long)]
    exhaustive: bool,
    /// Evaluation budget for --exhaustive.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Number of sampled deviations; requires --seed.
    #[arg(long, conflicts_with = "exhaustive", requires = "seed")]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SimulateCommand {
    /// Random true rankings split into two sorted sides and
    /// re-interleaved; measures the worst per-paper displacement
    /// against the analytic bound.
    Misplacement(MisplacementArgs),
}

#[derive(Args)]
struct MisplacementArgs {
    /// Total papers.
    #[arg(long)]
    n: usize,
    /// Size of the first side.
    #[arg(long)]
    n1: usize,
    /// Failure-probability parameter of the bound, in (0, 1).
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Census of every aggregation rule on the instance where each of m
    /// reviewers ranks all n papers: counts pairwise-unanimous rules
    /// and those also weakly strategyproof.
    TotalRanking {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Cap on rule evaluations before refusing.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Backtracking search over the fixed 3-reviewer, 4-paper chain
    /// instance for a rule that is group-unanimous and weakly
    /// strategyproof.
    Chain {
        /// Drop the group-unanimity constraint.
        #[arg(long)]
        drop_gu: bool,
        /// Drop the weak-strategyproofness constraint.
        #[arg(long)]
        drop_wsp: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    mu: usize,
    #[arg(long)]
    lambda: usize,
    /// profile-json file; enables aggregation and property checks.
    #[arg(long)]
    profile: Option<String>,
    /// Sampled strategyproofness trials (with --profile).
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Seed for the sampled check; required when a profile is given.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for all artifact files.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Conflict data file to summarize.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    format: Format,
    /// Prune-trace JSON produced by `prune --json`.
    #[arg(long)]
    prune_trace: Option<String>,
    /// partition-json file (needs --input for the id table).
    #[arg(long, requires = "input")]
    partition: Option<String>,
    /// assignment-json file (needs --input for the id table).
    #[arg(long, requires = "input")]
    assignment: Option<String>,
    /// ranking-json file (needs --input for the id table).
    #[arg(long, requires = "input")]
    ranking: Option<String>,
    /// Property-report JSON files, repeatable.
    #[arg(long = "property")]
    properties: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Exit-code taxonomy, part of the external contract: 0 ok, 1 I/O,
/// 2 parse, 3 infeasible partition, 4 contract or precondition,
/// 5 budget refusal.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 1,
        Error::Parse { .. } => 2,
        Error::InfeasiblePartition { .. } => 3,
        Error::Contract(_) | Error::Precondition(_) => 4,
        Error::BudgetExceeded { .. } => 5,
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Stats(args) => cmd_stats(args),
        Command::Prune(args) => cmd_prune(args),
        Command::Partition(args) => cmd_partition(args),
        Command::Assign(args) => cmd_assign(args),
        Command::Aggregate(args) => cmd_aggregate(args),
        Command::Check(check) => cmd_check(check),
        Command::Simulate(SimulateCommand::Misplacement(args)) => cmd_misplacement(args),
        Command::VerifyImpossibility(verify) => cmd_verify(verify),
        Command::Pipeline(args) => cmd_pipeline(args),
        Command::Report(args) => cmd_report(args),
    }
}

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn load_graph(args: &InputArgs) -> Result<ParsedConflicts> {
    let text = read_source(&args.input)?;
    let format = match args.format {
        Format::PairsCsv => ConflictFormat::PairsCsv,
        Format::GraphJson => ConflictFormat::GraphJson,
        Format::Auto => {
            if text.trim_start().starts_with('{') {
                ConflictFormat::GraphJson
            } else {
                ConflictFormat::PairsCsv
            }
        }
    };
    let parsed = parse_conflicts(&text, format)?;
    for warning in &parsed.warnings {
        eprintln!("warning: {warning}");
    }
    Ok(parsed)
}

fn load_file(path: &str) -> Result<String> {
    read_source(path)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json_pretty<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text
}

/// Prefixes recoverable error messages with the pipeline stage that
/// raised them; the variant (and so the exit code) is preserved.
fn with_stage(stage: &str, e: Error) -> Error {
    match e {
        Error::Parse { line, msg } => Error::Parse { line, msg: format!("{stage}: {msg}") },
        Error::Contract(msg) => Error::Contract(format!("{stage}: {msg}")),
        Error::Precondition(msg) => Error::Precondition(format!("{stage}: {msg}")),
        other => other,
    }
}

fn assign_strategy(id: AssignStrategyId) -> &'static dyn AssignStrategy {
    match id {
        AssignStrategyId::RoundRobin => &BalancedRoundRobin,
    }
}

fn group_strategy(id: GroupStrategyId) -> &'static dyn GroupOrdering {
    match id {
        GroupStrategyId::Borda => &BordaGroupOrdering,
    }
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let parsed = load_graph(&args.input)?;
    let stats = connected_components(&parsed.graph).stats();
    let text = if args.tsv {
        render::stats_tsv(&parsed.graph, &stats)
    } else {
        render::stats_table(&parsed.graph, &stats)
    };
    print!("{text}");
    Ok(())
}

fn cmd_prune(args: PruneArgs) -> Result<()> {
    let parsed = load_graph(&args.input)?;
    let mode = if args.initial_degrees { DegreeMode::Initial } else { DegreeMode::Adaptive };
    let checkpoints = args.checkpoints.unwrap_or_else(|| {
        let mut cs = vec![0, args.remove];
        cs.dedup();
        cs
    });
    let trace = prune_top_degree(&parsed.graph, args.remove, &checkpoints, mode)?;
    let text = if args.json {
        json_pretty(&trace)
    } else if args.tsv {
        render::prune_tsv(&trace)
    } else {
        render::prune_table(&trace)
    };
    print!("{text}");
    Ok(())
}

fn cmd_partition(args: PartitionArgs) -> Result<()> {
    let parsed = load_graph(&args.input)?;
    let params = AssignmentParams::new(args.mu, args.lambda)?;
    let (part, _) = partition_with_stats(&parsed.graph, &params)?;
    emit(&args.out, &partition_json(&part, &parsed.symbols))
}

fn cmd_assign(args: AssignArgs) -> Result<()> {
    let parsed = load_graph(&args.input)?;
    let params = AssignmentParams::new(args.mu, args.lambda)?;
    let (rg, _) =
        assign::divide_and_rank_assign(&parsed.graph, &params, assign_strategy(args.strategy))?;
    emit(&args.out, &assignment_json(&rg, &params, &parsed.symbols))
}

fn cmd_aggregate(args: AggregateArgs) -> Result<()> {
    let parsed = load_graph(&args.input)?;
    let part = parse_partition_json(&load_file(&args.partition)?, &parsed.symbols)?;
    let profile = parse_profile_json(&load_file(&args.profile)?, &parsed.symbols)?;
    let ranking = divide_and_rank_aggregate(&profile, &part, group_strategy(args.strategy))?;
    emit(&args.out, &ranking_json(&ranking, &parsed.symbols))
}

fn cmd_check(check: CheckCommand) -> Result<()> {
    match check {
        CheckCommand::Gu(args) => cmd_check_output(args, check_gu),
        CheckCommand::Pu(args) => cmd_check_output(args, check_pu),
        CheckCommand::Sp(args) => cmd_check_sp(args),
    }
}

fn cmd_check_output(
    args: CheckOutputArgs,
    checker: fn(&ReviewGraph, &Profile, &AggregateRanking) -> Result<PropertyReport>,
) -> Result<()> {
    let parsed = load_graph(&args.input)?;
    let (rg, _) = parse_assignment_json(&load_file(&args.assignment)?, &parsed.symbols)?;
    let profile = parse_profile_json(&load_file(&args.profile)?, &parsed.symbols)?;
    let ranking = parse_ranking_json(&load_file(&args.ranking)?, &parsed.symbols)?;
    let report = checker(&rg, &profile, &ranking)?;
    emit(&args.out, &json_pretty(&report))
}

fn cmd_check_sp(args: CheckSpArgs) -> Result<()> {
    if !args.exhaustive && args.trials.is_none() {
        return Err(Error::Precondition(
            "choose --exhaustive or --trials N --seed S".into(),
        ));
    }
    let parsed = load_graph(&args.input)?;
    let (rg, _) = parse_assignment_json(&load_file(&args.assignment)?, &parsed.symbols)?;
    let part = parse_partition_json(&load_file(&args.partition)?, &parsed.symbols)?;
    let aggregate =
        |profile: &Profile| divide_and_rank_aggregate(profile, &part, &BordaGroupOrdering);
    let report = if args.exhaustive {
        check_sp_exhaustive(&rg, &parsed.graph, &aggregate, args.budget)?
    } else {
        check_sp_randomized(
            &rg,
            &parsed.graph,
            &aggregate,
            args.trials.expect("validated above"),
            args.seed.expect("clap requires seed with trials"),
        )?
    };
    emit(&args.out, &json_pretty(&report))
}

fn cmd_misplacement(args: MisplacementArgs) -> Result<()> {
    let report = misplacement_monte_carlo(MisplacementConfig {
        n: args.n,
        n1: args.n1,
        delta: args.delta,
        trials: args.trials,
        seed: args.seed,
    })?;
    emit(&args.out, &json_pretty(&report))
}

fn cmd_verify(verify: VerifyCommand) -> Result<()> {
    match verify {
        VerifyCommand::TotalRanking { n, m, budget, out } => {
            let report = total_ranking_census(n, m, budget)?;
            emit(&out, &json_pretty(&report))
        }
        VerifyCommand::Chain { drop_gu, drop_wsp, out } => {
            let report = chain_search(!drop_gu, !drop_wsp)?;
            emit(&out, &json_pretty(&report))
        }
    }
}

fn cmd_pipeline(args: PipelineArgs) -> Result<()> {
    if args.profile.is_some() && args.seed.is_none() {
        return Err(Error::Precondition(
            "--seed is required when --profile enables the sampled check".into(),
        ));
    }
    let parsed = load_graph(&args.input).map_err(|e| with_stage("ingest", e))?;
    let params = AssignmentParams::new(args.mu, args.lambda)?;
    fs::create_dir_all(&args.out_dir)?;

    let (part, stats) = partition_with_stats(&parsed.graph, &params)
        .map_err(|e| with_stage("partition", e))?;
    let partition_path = write_artifact(
        &args.out_dir,
        "partition.json",
        &partition_json(&part, &parsed.symbols),
    )?;
    println!(
        "partition: side C {} reviewers / {} papers, side Cbar {} reviewers / {} papers, \
         load ratio {}/{} -> {}",
        part.side_c.reviewers.len(),
        part.side_c.papers.len(),
        part.side_cbar.reviewers.len(),
        part.side_cbar.papers.len(),
        stats.chosen_ratio.num(),
        stats.chosen_ratio.den(),
        partition_path.display()
    );

    let rg = assign::assign_across(&parsed.graph, &params, &part, &BalancedRoundRobin)
        .map_err(|e| with_stage("assign", e))?;
    if let Err(v) = validate_assignment(&rg, &parsed.graph, &params) {
        return Err(Error::Contract(format!("assign: {v}")));
    }
    let assignment_path = write_artifact(
        &args.out_dir,
        "assignment.json",
        &assignment_json(&rg, &params, &parsed.symbols),
    )?;
    let max_load = (0..rg.num_reviewers()).map(|i| rg.review_set(i).len()).max().unwrap_or(0);
    println!(
        "assignment: {} reviewers, max load {max_load} -> {}",
        rg.num_reviewers(),
        assignment_path.display()
    );

    let Some(profile_path) = &args.profile else {
        return Ok(());
    };
    let profile = parse_profile_json(&load_file(profile_path)?, &parsed.symbols)
        .map_err(|e| with_stage("profile", e))?;
    profile
        .matches_assignment(&rg)
        .map_err(|e| with_stage("profile", e))?;

    let ranking = divide_and_rank_aggregate(&profile, &part, &BordaGroupOrdering)
        .map_err(|e| with_stage("aggregate", e))?;
    let ranking_path = write_artifact(
        &args.out_dir,
        "ranking.json",
        &ranking_json(&ranking, &parsed.symbols),
    )?;
    println!("ranking: {} papers -> {}", ranking.num_papers(), ranking_path.display());

    let gu = check_gu(&rg, &profile, &ranking).map_err(|e| with_stage("check gu", e))?;
    let gu_path = write_artifact(&args.out_dir, "gu_report.json", &json_pretty(&gu))?;
    println!("check gu: {} -> {}", render::verdict(&gu), gu_path.display());

    let aggregate =
        |p: &Profile| divide_and_rank_aggregate(p, &part, &BordaGroupOrdering);
    let sp = check_sp_randomized(
        &rg,
        &parsed.graph,
        &aggregate,
        args.trials,
        args.seed.expect("validated above"),
    )
    .map_err(|e| with_stage("check sp", e))?;
    let sp_path = write_artifact(&args.out_dir, "sp_report.json", &json_pretty(&sp))?;
    println!(
        "check sp (sampled, {} trials): {} -> {}",
        args.trials,
        render::verdict(&sp),
        sp_path.display()
    );
    Ok(())
}

fn write_artifact(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, text)?;
    Ok(path)
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let mut sections: Vec<String> = Vec::new();

    let parsed = match &args.input {
        Some(input) => {
            let parsed = load_graph(&InputArgs { input: input.clone(), format: args.format })?;
            let stats = connected_components(&parsed.graph).stats();
            sections.push(render::stats_table(&parsed.graph, &stats));
            Some(parsed)
        }
        None => None,
    };

    if let Some(path) = &args.prune_trace {
        let trace: PruneTrace = serde_json::from_str(&load_file(path)?)
            .map_err(|e| Error::Parse { line: Some(e.line() as u64), msg: e.to_string() })?;
        sections.push(render::prune_table(&trace));
    }

    if let Some(path) = &args.partition {
        let parsed = parsed.as_ref().expect("clap requires --input");
        let part = parse_partition_json(&load_file(path)?, &parsed.symbols)?;
        sections.push(render::partition_summary(&part, &parsed.symbols));
    }

    if let Some(path) = &args.assignment {
        let parsed = parsed.as_ref().expect("clap requires --input");
        let (rg, params) = parse_assignment_json(&load_file(path)?, &parsed.symbols)?;
        sections.push(render::assignment_summary(&rg, &params, &parsed.symbols));
    }

    if let Some(path) = &args.ranking {
        let parsed = parsed.as_ref().expect("clap requires --input");
        let ranking = parse_ranking_json(&load_file(path)?, &parsed.symbols)?;
        sections.push(render::ranking_summary(&ranking, &parsed.symbols));
    }

    for path in &args.properties {
        let report: PropertyReport = serde_json::from_str(&load_file(path)?)
            .map_err(|e| Error::Parse { line: Some(e.line() as u64), msg: e.to_string() })?;
        sections.push(render::property_summary(&report));
    }

    if sections.is_empty() {
        return Err(Error::Precondition(
            "nothing to report: pass --input, --prune-trace, --partition, --assignment, \
             --ranking, or --property"
                .into(),
        ));
    }
    print!("{}", sections.join("\n"));
    Ok(())
}

//! Argument parsing and subcommands for the `qzk` binary.

mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qzk::analysis::{
    analytic_pb, asymptotic_cheat_probability, escape_matrix, exponent_gap, full_identification_probability,
    hiding_probability, hiding_probability_for_coloring, optimal_cheat_state, round_cheat_probability,
    round_cheat_probability_with_bad, total_cheat_probability, CheatObjective, PAPER_ESCAPE,
};
use qzk::graph::{brute_force_3color, parse_dimacs, Graph};
use qzk::optics::ApparatusParams;
use qzk::protocol::{
    run_batch, run_protocol, CheatingProver, CuriousVerifier, EscapeMode, HonestProver, HonestVerifier,
    ProtocolConfig,
};
use qzk::qbc::{Claim, VerificationPolicy};
use serde::Serialize;

pub use report::{Estimate, Report};

/// Stable exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const PRECONDITION: i32 = 3;
    /// A single honest run that the verifier rejected.
    pub const REJECTED: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "qzk", version, about = "Zero-knowledge 3-coloring over coherent-state commitments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form probabilities, cheat-state search and soundness tables
    Analyze(AnalyzeArgs),
    /// One honest execution on a 3-colorable graph
    Run(RunArgs),
    /// Cheating-prover executions on a graph with no proper 3-coloring
    Soundness(SoundnessArgs),
    /// Curious-verifier executions: how often are all colors identified unaided
    Hiding(HidingArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ApparatusArgs {
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long = "mean-photons")]
    pub mean_photons: Option<f64>,
    #[arg(long)]
    pub efficiency: Option<f64>,
    #[arg(long = "dark-rate")]
    pub dark_rate: Option<f64>,
    #[arg(long, value_enum, default_value_t = PolicyArg::Impossibility)]
    pub policy: PolicyArg,
}

impl ApparatusArgs {
    pub fn params(&self) -> ApparatusParams {
        let d = ApparatusParams::default();
        ApparatusParams {
            phi: self.phi.unwrap_or(d.phi),
            theta: self.theta.unwrap_or(d.theta),
            mean_photon: self.mean_photons.unwrap_or(d.mean_photon),
            efficiency: self.efficiency.unwrap_or(d.efficiency),
            dark_rate: self.dark_rate.unwrap_or(d.dark_rate),
            ..d
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Impossibility,
    Strict,
}

impl From<PolicyArg> for VerificationPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Impossibility => VerificationPolicy::ImpossibilityOnly,
            PolicyArg::Strict => VerificationPolicy::StrictHorizontal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Physical,
    Synthetic,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Emit one JSON document on stdout instead of tables
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for trial batches (default: all cores)
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub apparatus: ApparatusArgs,
    #[command(flatten)]
    pub common: Common,
    /// Escape probability for the soundness table
    #[arg(long, default_value_t = PAPER_ESCAPE)]
    pub escape: f64,
    /// Edge counts for the soundness table
    #[arg(long = "m", num_args = 1.., value_parser = clap::value_parser!(u64).range(1..),
          default_values_t = [1u64, 2, 3, 6, 10, 20, 50, 100, 200])]
    pub m: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub apparatus: ApparatusArgs,
    #[command(flatten)]
    pub common: Common,
    /// Rounds (default m^2)
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub rounds: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SoundnessArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub apparatus: ApparatusArgs,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Physical)]
    pub mode: ModeArg,
    /// Escape probability used in synthetic mode
    #[arg(long, default_value_t = PAPER_ESCAPE)]
    pub escape: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub rounds: Option<u64>,
}

#[derive(Debug, Args)]
pub struct HidingArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub apparatus: ApparatusArgs,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub rounds: Option<u64>,
    /// Per-vertex identification probability used in the formula column
    #[arg(long = "pb-override")]
    pub pb_override: Option<f64>,
}

/// Outcome of a subcommand: exit code plus the text for stdout or stderr.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: i32, msg: impl Into<String>) -> Self {
        Self { code, stdout: String::new(), stderr: msg.into() }
    }
}

pub fn execute(cli: Cli) -> Outcome {
    let started = Instant::now();
    let result = match &cli.command {
        Command::Analyze(a) => analyze(a).map(|r| (exit::OK, r, a.common.json)),
        Command::Run(a) => run(a).map(|(code, r)| (code, r, a.common.json)),
        Command::Soundness(a) => soundness(a).map(|r| (exit::OK, r, a.common.json)),
        Command::Hiding(a) => hiding(a).map(|r| (exit::OK, r, a.common.json)),
    };
    match result {
        Ok((code, mut report, json)) => {
            report.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
            let stdout = if json { report.to_json() } else { report.to_text() };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(o) => o,
    }
}

type CmdResult<T> = Result<T, Outcome>;

fn input_error(e: impl std::fmt::Display) -> Outcome {
    Outcome::fail(exit::INPUT, format!("error: {e}"))
}

fn internal(e: impl std::fmt::Display) -> Outcome {
    Outcome::fail(exit::INTERNAL, format!("internal error: {e}"))
}

fn load_graph(path: &Path) -> CmdResult<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    parse_dimacs(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn validated_params(a: &ApparatusArgs) -> CmdResult<ApparatusParams> {
    let p = a.params();
    p.validate().map_err(input_error)?;
    Ok(p)
}

fn check_probability(name: &str, p: f64) -> CmdResult<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(input_error(format!("--{name} must lie in [0, 1], got {p}")))
    }
}

fn threads(c: &Common) -> Option<usize> {
    c.threads.map(|t| t as usize)
}

#[derive(Debug, Serialize)]
struct Eq1Row {
    m: u64,
    rounds: u64,
    round: f64,
    total: f64,
    asymptotic: f64,
    exponent_gap: f64,
}

fn analyze(a: &AnalyzeArgs) -> CmdResult<Report> {
    let params = validated_params(&a.apparatus)?;
    check_probability("escape", a.escape)?;
    let mut report = Report::new("analyze", a.common.seed, params);
    report.config.policy = a.apparatus.policy.into();
    report.config.escape = Some(a.escape);

    if params.dark_rate == 0.0 {
        report.push("pb", analytic_pb(&params).map_err(internal)?);
    } else {
        report.note("pb closed form needs dark_rate = 0; omitted");
    }
    report.push("escape_matrix", escape_matrix(&params).map_err(internal)?);
    report.push("cheater_escape", CheatingProver::predicted_escape(&params).map_err(internal)?);

    let mut cheats = Vec::new();
    for (x, y) in [(0, 1), (0, 2), (1, 2)] {
        let targets = (Claim::new(x).map_err(internal)?, Claim::new(y).map_err(internal)?);
        cheats.push(optimal_cheat_state(targets, &params, CheatObjective::Average).map_err(internal)?);
    }
    report.push("cheat_states", cheats);

    let mut rows = Vec::new();
    for &m in &a.m {
        rows.push(Eq1Row {
            m,
            rounds: m * m,
            round: round_cheat_probability(m, a.escape).map_err(internal)?,
            total: total_cheat_probability(m, a.escape, m * m).map_err(internal)?,
            asymptotic: asymptotic_cheat_probability(m, a.escape).map_err(internal)?,
            exponent_gap: exponent_gap(m, a.escape).map_err(internal)?,
        });
    }
    report.push("soundness_table", rows);
    Ok(report)
}

fn config(params: ApparatusParams, common: &Common, policy: PolicyArg, rounds: Option<u64>) -> ProtocolConfig {
    ProtocolConfig { rounds, seed: common.seed, policy: policy.into(), params, escape_mode: EscapeMode::Physical }
}

fn run(a: &RunArgs) -> CmdResult<(i32, Report)> {
    let params = validated_params(&a.apparatus)?;
    let g = load_graph(&a.graph)?;
    let Some(coloring) = brute_force_3color(&g).map_err(input_error)? else {
        return Err(Outcome::fail(
            exit::PRECONDITION,
            "error: graph is not 3-colorable; an honest prover cannot run. Try `qzk soundness`.",
        ));
    };
    let cfg = config(params, &a.common, a.apparatus.policy, a.rounds);
    let mut prover = HonestProver::new(&g, coloring.clone()).map_err(internal)?;
    let exec = run_protocol(&g, &mut prover, &mut HonestVerifier::default(), &cfg).map_err(input_error)?;

    let mut report = Report::for_graph("run", &cfg, &g, &a.graph);
    for w in g.warnings() {
        report.note(format!("warning: {w}"));
    }
    report.push("coloring", coloring.to_string());
    report.push("accepted", exec.accepted);
    report.push("rounds", exec.rounds);
    report.push("rejections", exec.observations.rejections);
    report.set_transcripts(exec.transcripts);
    let code = if exec.accepted { exit::OK } else { exit::REJECTED };
    Ok((code, report))
}

fn soundness(a: &SoundnessArgs) -> CmdResult<Report> {
    let params = validated_params(&a.apparatus)?;
    check_probability("escape", a.escape)?;
    let g = load_graph(&a.graph)?;
    let prover = match CheatingProver::new(&g) {
        Ok(p) => p,
        Err(qzk::Error::Colorable) => {
            return Err(Outcome::fail(
                exit::PRECONDITION,
                "error: graph is 3-colorable; soundness needs a graph without a proper 3-coloring. Try `qzk run`.",
            ))
        }
        Err(e) => return Err(input_error(e)),
    };
    let mut cfg = config(params, &a.common, a.apparatus.policy, a.rounds);
    let escape = match a.mode {
        ModeArg::Physical => CheatingProver::predicted_escape(&params).map_err(internal)?,
        ModeArg::Synthetic => {
            cfg.escape_mode = EscapeMode::Synthetic { p_escape: a.escape };
            a.escape
        }
    };
    let rounds = cfg.rounds_for(&g).map_err(input_error)?;
    let m = g.edge_count() as u64;
    let bad = prover.bad_edges().len() as u64;
    let per_round = round_cheat_probability_with_bad(m, bad, escape).map_err(internal)?;
    let predicted = per_round.powf(rounds as f64);

    let summary = run_batch(&g, &prover, &HonestVerifier::default(), &cfg, a.trials, threads(&a.common))
        .map_err(input_error)?;

    let mut report = Report::for_graph("soundness", &cfg, &g, &a.graph);
    report.config.mode = Some(a.mode);
    report.config.trials = Some(a.trials);
    report.config.escape = Some(escape);
    report.push("bad_edges", bad);
    report.push("near_coloring", prover.near_coloring().to_string());
    report.push("rounds", rounds);
    report.push("predicted_escape", escape);
    report.push("predicted_round", per_round);
    report.push("predicted_acceptance", predicted);
    if bad == 1 {
        report.push("paper_approximation", asymptotic_cheat_probability(m, escape).map_err(internal)?);
    }
    report.push_estimate("acceptance", summary.accepted, predicted);
    report.push_estimate("lie_escape", summary.lie_escapes, escape);
    report.push("rejections", summary.totals.rejections);
    Ok(report)
}

fn hiding(a: &HidingArgs) -> CmdResult<Report> {
    let params = validated_params(&a.apparatus)?;
    if params.dark_rate > 0.0 {
        return Err(input_error("hiding predictions need --dark-rate 0"));
    }
    if let Some(pb) = a.pb_override {
        check_probability("pb-override", pb)?;
    }
    let g = load_graph(&a.graph)?;
    let Some(coloring) = brute_force_3color(&g).map_err(input_error)? else {
        return Err(Outcome::fail(exit::PRECONDITION, "error: graph is not 3-colorable; hiding needs an honest prover"));
    };
    let cfg = config(params, &a.common, a.apparatus.policy, a.rounds);
    let rounds = cfg.rounds_for(&g).map_err(input_error)?;
    let n = g.vertex_count() as u32;
    let pb = match a.pb_override {
        Some(pb) => pb,
        None => analytic_pb(&params).map_err(internal)?,
    };
    let formula = hiding_probability(n, pb, rounds).map_err(internal)?;
    let exact = hiding_probability_for_coloring(&coloring, &params, rounds).map_err(internal)?;

    let prover = HonestProver::new(&g, coloring.clone()).map_err(internal)?;
    let summary = run_batch(&g, &prover, &CuriousVerifier::default(), &cfg, a.trials, threads(&a.common))
        .map_err(input_error)?;

    let mut report = Report::for_graph("hiding", &cfg, &g, &a.graph);
    report.config.trials = Some(a.trials);
    report.push("rounds", rounds);
    report.push("pb", pb);
    report.push("pb_overridden", a.pb_override.is_some());
    report.push("per_attempt_formula", pb.powi(n as i32));
    report.push("formula", formula);
    report.push("per_attempt_exact", full_identification_probability(&coloring, &params).map_err(internal)?);
    report.push("exact", exact);
    report.push_estimate("full_identification", summary.fully_identified, formula);
    report.push("z_exact", summary.fully_identified.z_score(exact));
    report.push("identifications", summary.totals.identifications);
    report.push("wrong_identifications", summary.totals.wrong_identifications);
    report.push("accepted_executions", summary.accepted.successes);
    Ok(report)
}

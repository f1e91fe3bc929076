//! Command-line surface: scenario checking, figure rendering, parameter
//! sweeps, randomized property suites, and scenario generation.
//!
//! Exit codes: 0 = certified-stable, 1 = invalid input, 2 = inconclusive,
//! 3 = hypotheses-violated, so shell pipelines can branch on the verdict.

pub mod suites;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gitstab_core::filtration::moduli_context;
use gitstab_core::io::{report_to_json, Scenario};
use gitstab_core::multfilt::MultFiltration;
use gitstab_core::profile::SpanProfile;
use gitstab_core::rational::{parse_rat, Rat};
use gitstab_core::render::{render_ascii, render_svg, RenderOptions};
use gitstab_core::scenario::{random_admissible, three_marked_points, worst_candidate};
use gitstab_core::verdict::{certify, find_thresholds, sweep_line, v0_for, Verdict};
use gitstab_core::virtual_profile::VirtualProfile;

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_HYPOTHESES: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "gitstab",
    about = "Exact-arithmetic GIT-stability certification for weighted filtrations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify a scenario file and write the report.
    Check(CheckArgs),
    /// Draw the step profile and virtual profile of a scenario.
    Render(RenderArgs),
    /// Evaluate the certification margin over a (u, v) grid.
    Sweep(SweepArgs),
    /// Run a randomized property suite.
    Oracle(OracleArgs),
    /// Generate a scenario file.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Scenario file (JSON).
    pub scenario: PathBuf,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Svg,
    Ascii,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value = "svg")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub scenario: PathBuf,
    /// Inclusive u range, e.g. 3:30.
    #[arg(long, value_parser = parse_range)]
    pub u_range: Option<(u64, u64)>,
    /// Inclusive v range, e.g. 5:20.
    #[arg(long, value_parser = parse_range)]
    pub v_range: Option<(u64, u64)>,
    /// Report the least (u0, v0(u0)) certified instead of sweeping a grid.
    #[arg(long)]
    pub find_thresholds: bool,
    /// Worker threads; GITSTAB_JOBS, then all cores, when omitted.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Spans,
    Identities,
    Creep,
    Delta,
    Tail,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 500)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub suite: Suite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Example1,
    Worst,
    Random,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Genus.
    #[arg(long, default_value_t = 2)]
    pub g: u64,
    /// Twist ν of the moduli-style context (d = ν(2g−2+a), γ = ν/(2ν−1)).
    #[arg(long, default_value_t = 5)]
    pub nu: u64,
    /// Number of marked points.
    #[arg(long, default_value_t = 3)]
    pub n: u64,
    /// Linearizing weight applied to every marked point, as p/q.
    #[arg(long, default_value = "4/5")]
    pub b: String,
    /// Point weights a_i applied uniformly, as p/q.
    #[arg(long, default_value = "1/1")]
    pub a: String,
    /// Margin parameter ε, as p/q; derived from the case slack when omitted.
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub u: u64,
    #[arg(long, default_value_t = 5)]
    pub v: u64,
    /// Seed for --kind random.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Support points for --kind random.
    #[arg(long, default_value_t = 3)]
    pub q: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_range(text: &str) -> Result<(u64, u64), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("expected A:B, got {text:?}"))?;
    let lo: u64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let hi: u64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if lo == 0 || hi < lo {
        return Err(format!("empty range {text:?}"));
    }
    Ok((lo, hi))
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn load_scenario(path: &PathBuf) -> Result<Scenario, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Scenario::from_json(&text).map_err(|e| e.to_string())
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Render(args) => cmd_render(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Oracle(args) => suites::run_suite(args),
        Command::Gen(args) => cmd_gen(args),
    }
}

fn cmd_check(args: CheckArgs) -> i32 {
    let scenario = match load_scenario(&args.scenario) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INVALID;
        }
    };
    let out = match certify(&scenario.filtration, &scenario.lin, scenario.u, scenario.v) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let thresholds = find_thresholds(&scenario.filtration, &scenario.lin).ok();
    let json = report_to_json(&out, thresholds);
    if emit(&args.out, &json).is_err() {
        eprintln!("error: cannot write report");
        return EXIT_INVALID;
    }
    if !out.report.violations.is_empty() {
        for v in &out.report.violations {
            eprintln!("violation: {v}");
        }
        return EXIT_INVALID;
    }
    match out.report.verdict {
        Verdict::CertifiedStable => EXIT_CERTIFIED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
        Verdict::HypothesesViolated => EXIT_HYPOTHESES,
    }
}

fn cmd_render(args: RenderArgs) -> i32 {
    let scenario = match load_scenario(&args.scenario) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INVALID;
        }
    };
    let mf = MultFiltration::build(&scenario.filtration, scenario.u, scenario.v);
    let profile = match SpanProfile::build(&mf) {
        Ok(p) => p.step_profile(),
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let vp = match VirtualProfile::build(&mf) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let opts = RenderOptions::for_run(scenario.v);
    let text = match args.format {
        Format::Svg => render_svg(&profile, Some(&vp), &opts),
        Format::Ascii => render_ascii(&profile, Some(&vp), &opts),
    };
    if emit(&args.out, &text).is_err() {
        eprintln!("error: cannot write figure");
        return EXIT_INVALID;
    }
    EXIT_CERTIFIED
}

/// Grid sweep, deterministic for any thread count: the work list is indexed
/// up front and results are collected in index order.
pub fn sweep_csv(scenario: &Scenario, u_range: (u64, u64), v_range: (u64, u64), jobs: usize) -> String {
    use rayon::prelude::*;
    let grid: Vec<(u64, u64)> = (u_range.0..=u_range.1)
        .flat_map(|u| (v_range.0..=v_range.1).map(move |v| (u, v)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let rows: Vec<String> = pool.install(|| {
        grid.par_iter()
            .map(|&(u, v)| {
                let out = certify(&scenario.filtration, &scenario.lin, u, v)
                    .expect("certify is total on parsed scenarios");
                sweep_line(&out.report)
            })
            .collect()
    });
    let mut csv = String::from("u,v,margin,verdict\n");
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    csv
}

fn jobs_or_env(jobs: Option<usize>) -> usize {
    jobs.or_else(|| {
        std::env::var("GITSTAB_JOBS").ok().and_then(|x| x.parse().ok())
    })
    .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    .max(1)
}

fn cmd_sweep(args: SweepArgs) -> i32 {
    let scenario = match load_scenario(&args.scenario) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INVALID;
        }
    };
    if !scenario.filtration.validate(&scenario.lin).is_empty() {
        eprintln!("error: scenario fails validation; run `gitstab check` for details");
        return EXIT_INVALID;
    }
    if args.find_thresholds {
        let text = match find_thresholds(&scenario.filtration, &scenario.lin) {
            Ok(th) => format!("u0,v0\n{},{}\n", th.u0, th.v0_at_u0),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_HYPOTHESES;
            }
        };
        if emit(&args.out, &text).is_err() {
            eprintln!("error: cannot write output");
            return EXIT_INVALID;
        }
        return EXIT_CERTIFIED;
    }
    let (Some(u_range), Some(v_range)) = (args.u_range, args.v_range) else {
        eprintln!("error: --u-range and --v-range are required unless --find-thresholds");
        return EXIT_INVALID;
    };
    let csv = sweep_csv(&scenario, u_range, v_range, jobs_or_env(args.jobs));
    if emit(&args.out, &csv).is_err() {
        eprintln!("error: cannot write output");
        return EXIT_INVALID;
    }
    EXIT_CERTIFIED
}

/// Builds the scenario the generator flags describe.
pub fn build_scenario(args: &GenArgs) -> Result<Scenario, String> {
    let a = parse_rat(&args.a).map_err(|e| e.to_string())?;
    let b = parse_rat(&args.b).map_err(|e| e.to_string())?;
    let a_weights: Vec<Rat> = vec![a; args.n as usize];
    let (mut ctx, mut lin) =
        moduli_context(args.g, args.n, &a_weights, args.nu).map_err(|e| e.to_string())?;
    lin.b = vec![b; args.n as usize];
    lin.epsilon = match &args.epsilon {
        Some(text) => Some(parse_rat(text).map_err(|e| e.to_string())?),
        None => Some(lin.epsilon_or_default(&ctx).map_err(|e| e.to_string())?),
    };
    let filtration = match args.kind {
        Kind::Example1 => three_marked_points(&ctx, &lin).map_err(|e| e.to_string())?,
        Kind::Worst => worst_candidate(&ctx, &lin).map_err(|e| e.to_string())?,
        Kind::Random => {
            ctx.points = args.q;
            random_admissible(&ctx, &lin, args.seed).map_err(|e| e.to_string())?
        }
    };
    let scenario = Scenario { filtration, lin, u: args.u, v: args.v };
    let violations = scenario.filtration.validate(&scenario.lin);
    if !violations.is_empty() {
        return Err(format!("generated scenario fails validation: {:?}", violations[0]));
    }
    Ok(scenario)
}

fn cmd_gen(args: GenArgs) -> i32 {
    match build_scenario(&args) {
        Ok(scenario) => {
            if emit(&args.out, &scenario.to_json()).is_err() {
                eprintln!("error: cannot write scenario");
                return EXIT_INVALID;
            }
            EXIT_CERTIFIED
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
    }
}

/// Certifies at the thresholds plus two larger witnesses; used by tests and
/// the demo page.
pub fn verify_thresholds(scenario: &Scenario) -> Result<(u64, u64, bool), String> {
    let f = &scenario.filtration;
    let lin = &scenario.lin;
    let th = find_thresholds(f, lin).map_err(|e| e.to_string())?;
    let eps = lin.epsilon_or_default(&f.ctx).map_err(|e| e.to_string())?;
    let mut all = true;
    for u in [th.u0, th.u0 + 5, 2 * th.u0] {
        let v = v0_for(&f.ctx, lin, &eps, u).ok_or("margin coefficient not positive")?;
        let out = certify(f, lin, u, v).map_err(|e| e.to_string())?;
        all &= out.report.verdict == Verdict::CertifiedStable;
    }
    Ok((th.u0, th.v0_at_u0, all))
}

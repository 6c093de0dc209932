use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ratio_shapley::audit::{full_audit, AuditConfig};
use ratio_shapley::experiment::{sqrt7_comparison, DEFAULT_RHO_STEPS};
use ratio_shapley::game::random_monotone_game;
use ratio_shapley::rewards::{allocate, check_ir, check_stability, rho_bounds, RhoBound};
use ratio_shapley::valuation::{
    shapley_exact, shapley_monte_carlo, shapley_permutation_oracle, MAX_ORACLE_PLAYERS,
};
use ratio_shapley::{CoalitionMask, Error, Game, Scheme};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "ratio-shapley", version, about = "Ratio-based Shapley valuations and rho-scaled model rewards")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-player Shapley valuations of a game
    Compute(ComputeArgs),
    /// Rho-scaled rewards, rho bounds, and IR/stability checks
    Rewards(RewardsArgs),
    /// Check every incentive and fairness axiom and write a JSON report
    Audit(AuditArgs),
    /// Sweep rho on the seven-agent square-root game and write CSV + plot data
    #[command(name = "experiment-sqrt7")]
    ExperimentSqrt7(ExperimentArgs),
    /// Write a random monotone game
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Oracle,
    Mc,
}

#[derive(Args)]
struct GameArgs {
    /// Game JSON file
    #[arg(long)]
    game: PathBuf,
    #[arg(long, default_value = "ratio")]
    scheme: Scheme,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, value_enum, default_value = "exact")]
    method: MethodArg,
    /// Sampled orderings (required for --method mc)
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print JSON instead of a table
    #[arg(long)]
    json: bool,
    /// Also write the valuation as JSON to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[group(id = "rho_source", required = true, multiple = false, args = ["rho", "rho_ir", "rho_stable"])]
struct RewardsArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long)]
    rho: Option<f64>,
    /// Use the clamped individual-rationality bound
    #[arg(long)]
    rho_ir: bool,
    /// Use the clamped stability bound
    #[arg(long)]
    rho_stable: bool,
    /// Comma-separated 1-based players (default: all)
    #[arg(long, value_delimiter = ',')]
    coalition: Option<Vec<usize>>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long)]
    rho: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generated game pairs for the strict-monotonicity checks
    #[arg(long, default_value_t = 32)]
    pairs: usize,
    /// Report destination (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the report to stdout even when --out is given
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = DEFAULT_RHO_STEPS)]
    rho_steps: usize,
    /// CSV destination; plot data and summary go next to it
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    /// Player count
    #[arg(long, short = 'n', visible_alias = "players")]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Domain(Error),
    /// Ran to completion but an asserted check failed.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Compute(args) => compute(args),
        Command::Rewards(args) => rewards(args),
        Command::Audit(args) => audit(args),
        Command::ExperimentSqrt7(args) => experiment(args),
        Command::Generate(args) => generate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
        Err(Failure::Check) => ExitCode::from(EXIT_FAILURE),
    }
}

fn load(path: &Path) -> Result<Game, Failure> {
    Game::load(path).map_err(Failure::Domain)
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text)?;
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

fn compute(args: ComputeArgs) -> CmdResult {
    let game = load(&args.game.game)?;
    let scheme = args.game.scheme;
    let valuation = match args.method {
        MethodArg::Exact => shapley_exact(&game, scheme)?,
        MethodArg::Oracle => {
            if game.n() > MAX_ORACLE_PLAYERS {
                return Err(Failure::Usage(format!(
                    "the permutation oracle enumerates n! orderings and is limited to {MAX_ORACLE_PLAYERS} players (game has {})",
                    game.n()
                )));
            }
            shapley_permutation_oracle(&game, scheme)?
        }
        MethodArg::Mc => {
            let samples = args
                .samples
                .ok_or_else(|| Failure::Usage("--method mc requires --samples".into()))?;
            shapley_monte_carlo(&game, scheme, samples, args.seed)?
        }
    };
    let json = to_json(&valuation);
    if let Some(out) = &args.out {
        write_file(out, &json)?;
    }
    if args.json {
        print!("{json}");
        return Ok(());
    }
    let stderr = valuation.stderr();
    println!("scheme: {scheme}");
    println!("player\tphi{}", if stderr.is_some() { "\tstderr" } else { "" });
    for (k, phi) in valuation.phi.iter().enumerate() {
        match stderr {
            Some(se) => println!("{}\t{}\t{}", k + 1, phi, se[k]),
            None => println!("{}\t{}", k + 1, phi),
        }
    }
    Ok(())
}

fn describe_bound(name: &str, bound: &RhoBound) -> String {
    let binding: Vec<usize> = bound.binding.iter().map(|p| p + 1).collect();
    format!(
        "{name}: raw {} clamped {} binding {:?}",
        bound.raw, bound.clamped, binding
    )
}

#[derive(serde::Serialize)]
struct RewardsOutput<'a> {
    rho: f64,
    rho_source: &'a str,
    allocation: &'a ratio_shapley::RewardAllocation,
    bounds: &'a ratio_shapley::RhoBounds,
    individual_rationality: Option<bool>,
    stability: Option<bool>,
}

fn rewards(args: RewardsArgs) -> CmdResult {
    let game = load(&args.game.game)?;
    let scheme = args.game.scheme;
    let valuation = shapley_exact(&game, scheme)?;
    let bounds = rho_bounds(&game, &valuation)?;
    let (rho, source) = match (args.rho, args.rho_ir, args.rho_stable) {
        (Some(rho), _, _) => (rho, "explicit"),
        (None, true, _) => (bounds.ir.clamped, "rho-ir"),
        (None, _, true) => (bounds.stability.clamped, "rho-stable"),
        _ => unreachable!("clap enforces exactly one rho source"),
    };
    let coalition = match &args.coalition {
        None => game.grand(),
        Some(labels) => {
            if let Some(&bad) = labels.iter().find(|&&p| p == 0 || p > game.n()) {
                return Err(Failure::Usage(format!(
                    "player {bad} is not in 1..={}",
                    game.n()
                )));
            }
            CoalitionMask::from_players(labels.iter().map(|p| p - 1))
        }
    };
    let allocation = allocate(&game, &valuation, coalition, rho)?;
    let (ir, stability) = if coalition == game.grand() {
        (
            Some(check_ir(&game, &allocation)?),
            if game.n() <= ratio_shapley::rewards::MAX_STABILITY_PLAYERS {
                Some(check_stability(&game, &valuation, rho)?)
            } else {
                None
            },
        )
    } else {
        (None, None)
    };

    let json = to_json(&RewardsOutput {
        rho,
        rho_source: source,
        allocation: &allocation,
        bounds: &bounds,
        individual_rationality: ir.as_ref().map(|c| c.passed()),
        stability: stability.as_ref().map(|c| c.passed()),
    });
    if let Some(out) = &args.out {
        write_file(out, &json)?;
    }
    if args.json {
        print!("{json}");
        return Ok(());
    }

    let mut text = String::new();
    let _ = writeln!(text, "scheme: {scheme}");
    let _ = writeln!(text, "rho: {rho} ({source})");
    let _ = writeln!(text, "coalition: {coalition} value {}", allocation.value);
    let _ = writeln!(text, "player\tphi\treward");
    for (p, r) in allocation.iter() {
        let _ = writeln!(text, "{}\t{}\t{}", p + 1, valuation.phi[p], r);
    }
    let _ = writeln!(text, "{}", describe_bound("rho_r", &bounds.ir));
    let _ = writeln!(text, "{}", describe_bound("rho_s", &bounds.stability));
    let verdict = |passed: bool, count: usize| {
        if passed {
            "pass".to_string()
        } else {
            format!("fail ({count} violations)")
        }
    };
    match &ir {
        Some(c) => {
            let _ = writeln!(text, "individual rationality: {}", verdict(c.passed(), c.violations.len()));
        }
        None => {
            let _ = writeln!(text, "individual rationality: skipped (not the grand coalition)");
        }
    }
    match &stability {
        Some(c) => {
            let _ = writeln!(text, "stability: {}", verdict(c.passed(), c.violations.len()));
        }
        None => {
            let _ = writeln!(text, "stability: skipped");
        }
    }
    print!("{text}");
    Ok(())
}

fn audit(args: AuditArgs) -> CmdResult {
    let game = load(&args.game.game)?;
    let config = AuditConfig {
        seed: args.seed,
        pairs: args.pairs,
        ..AuditConfig::new(args.game.scheme, args.rho)
    };
    let report = full_audit(&game, config)?;
    let json = report.to_json();
    match &args.out {
        Some(out) => {
            write_file(out, &json)?;
            if args.json {
                print!("{json}");
            }
        }
        None => print!("{json}"),
    }
    let s = report.summary();
    let failed: Vec<&str> = report
        .entries
        .iter()
        .filter(|e| e.asserted && e.status == ratio_shapley::audit::Status::Fail)
        .map(|e| e.axiom.as_str())
        .collect();
    eprintln!(
        "audit: {} pass, {} fail, {} vacuous; asserted failures: {}{}",
        s.pass,
        s.fail,
        s.vacuous,
        s.asserted_failures,
        if failed.is_empty() {
            String::new()
        } else {
            format!(" ({})", failed.join(", "))
        }
    );
    if s.asserted_failures > 0 {
        return Err(Failure::Check);
    }
    Ok(())
}

/// `<out>` with its extension replaced by `suffix`.
fn sibling(out: &Path, suffix: &str) -> PathBuf {
    out.with_extension(suffix)
}

fn experiment(args: ExperimentArgs) -> CmdResult {
    let cmp = sqrt7_comparison(args.rho_steps)?;
    write_file(&args.out, &cmp.table.to_csv()?)?;
    let plot = sibling(&args.out, "dat");
    write_file(&plot, &cmp.table.to_plot_data()?)?;
    let summary = sibling(&args.out, "summary.json");
    write_file(&summary, &cmp.summary.to_json())?;

    let s = &cmp.summary;
    println!("wrote {} rows to {}", cmp.table.rows.len(), args.out.display());
    println!("plot data: {}", plot.display());
    println!("summary: {}", summary.display());
    println!(
        "top player: ratio {:?}, additive {:?} ({})",
        s.argmax_ratio,
        s.argmax_additive,
        if s.argmax_agree { "agree" } else { "differ" }
    );
    for d in &s.drop_off {
        println!(
            "player {}: phi/phi* ratio {} vs additive {} -> ratio reward drops {}",
            d.player,
            d.normalized_ratio,
            d.normalized_additive,
            if d.ratio_drops_slower { "slower" } else { "faster" }
        );
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> CmdResult {
    let game = random_monotone_game(args.n, args.seed)?;
    game.save(&args.out)?;
    Ok(())
}

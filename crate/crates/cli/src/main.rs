use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use hatlab_core::codes::{hamming_code, min_covering_code, Code};
use hatlab_core::eval::{evaluate_exact, evaluate_monte_carlo, render_csv, render_table, trace_table, McReport};
use hatlab_core::search::{
    max_first_player_passes, search_optimal_sequential, search_optimal_simultaneous, SearchResult,
};
use hatlab_core::strategies::{builtin, BUILTIN_STRATEGIES};
use hatlab_core::{GameSpec, HatError, Objective, StrategyTable};

#[derive(Parser)]
#[command(name = "hatlab", version, about = "Evaluate, trace and search hat-guessing strategies")]
struct Cli {
    /// Print the built-in strategies and exit.
    #[arg(long)]
    list_strategies: bool,
    /// Worker threads for evaluation and search.
    #[arg(long, global = true, env = "HATLAB_WORKERS", value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Win probability of a strategy, exact or sampled.
    Evaluate(EvaluateArgs),
    /// Play every configuration and show each one.
    Trace(TraceArgs),
    /// Monte Carlo estimate from a fixed seed.
    Simulate(SimulateArgs),
    /// Exhaustive strategy search.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Covering-code construction and checks.
    #[command(subcommand)]
    Codes(CodesCommand),
}

#[derive(Args)]
struct GameArgs {
    /// ebert, majority, line or newline.
    #[arg(long, value_parser = ["ebert", "majority", "line", "newline"])]
    game: String,
    #[arg(short, value_name = "PLAYERS")]
    n: usize,
    #[arg(short, value_name = "COLOURS")]
    q: u32,
    /// Built-in strategy name or strategy file.
    #[arg(long)]
    strategy: String,
    /// Write the strategy table to this file.
    #[arg(long, value_name = "PATH")]
    save_strategy: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, conflicts_with_all = ["json", "csv", "table"])]
    format: Option<Format>,
    #[arg(long, conflicts_with_all = ["csv", "table"])]
    json: bool,
    #[arg(long, conflicts_with = "table")]
    csv: bool,
    #[arg(long)]
    table: bool,
}

impl OutputArgs {
    fn format(&self) -> Format {
        match (self.format, self.json, self.csv) {
            (Some(f), _, _) => f,
            (None, true, _) => Format::Json,
            (None, _, true) => Format::Csv,
            _ => Format::Table,
        }
    }
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Sweep every configuration (the default).
    #[arg(long, conflicts_with = "mc")]
    exact: bool,
    /// Sample configurations instead.
    #[arg(long, requires_all = ["trials", "seed"])]
    mc: bool,
    #[arg(long, requires = "mc")]
    trials: Option<u64>,
    #[arg(long, requires = "mc")]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    game: GameArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Best sequential strategy for the new line game.
    Sequential {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        q: u32,
        /// Visit only restricted strategies.
        #[arg(long)]
        prune: bool,
        #[arg(long)]
        json: bool,
        /// Write the witness strategy to this file.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Best simultaneous strategy with full sight of the other hats.
    Simultaneous {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        q: u32,
        /// ebert (at-least-one-correct-none-wrong) or majority.
        #[arg(long)]
        objective: String,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Most first-player passes among optimal restricted strategies.
    Beta {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        q: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum CodesCommand {
    /// Binary Hamming code of length 2^m - 1.
    Hamming {
        #[arg(short)]
        m: u32,
        /// Write the code file here instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Check that a code file covers its space within radius r.
    Verify {
        file: PathBuf,
        #[arg(short, default_value_t = 1)]
        r: usize,
        #[arg(long)]
        json: bool,
    },
    /// Smallest binary covering code of length n.
    MinCover {
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 1)]
        r: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    Hat(HatError),
    Io(String),
}

impl From<HatError> for CliError {
    fn from(e: HatError) -> Self {
        CliError::Hat(e)
    }
}

type CliResult = Result<String, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Load a strategy file for `game`.
fn load_strategy(path: &Path, game: &GameSpec) -> Result<StrategyTable, CliError> {
    Ok(StrategyTable::from_text(&read(path)?, game)?)
}

fn resolve(args: &GameArgs) -> Result<(StrategyTable, String), CliError> {
    let game = GameSpec::by_name(&args.game, args.n, args.q)?;
    let table = if BUILTIN_STRATEGIES.iter().any(|(name, _)| *name == args.strategy) {
        builtin(&args.strategy, &game)?
    } else if Path::new(&args.strategy).is_file() {
        load_strategy(Path::new(&args.strategy), &game)?
    } else {
        return Err(CliError::Usage(format!(
            "unknown strategy {:?}: not a built-in name and not a file (see --list-strategies)",
            args.strategy
        )));
    };
    if let Some(path) = &args.save_strategy {
        write(path, &table.to_text())?;
    }
    Ok((table, args.strategy.clone()))
}

fn line(json: String) -> String {
    json + "\n"
}

fn mc_output(report: &McReport, format: Format) -> String {
    match format {
        Format::Json => line(serde_json::to_string(report).expect("report serialises")),
        Format::Csv => format!(
            "strategy,trials,seed,wins,estimate,half_width_95\n{},{},{},{},{},{}\n",
            report.strategy, report.trials, report.seed, report.wins, report.estimate, report.half_width_95
        ),
        Format::Table => format!(
            "{} strategy {}\ntrials {} seed {}\nwins {} estimate {:.6} +/- {:.6}\n",
            report.game, report.strategy, report.trials, report.seed, report.wins, report.estimate, report.half_width_95
        ),
    }
}

fn evaluate(args: &EvaluateArgs) -> CliResult {
    let (table, name) = resolve(&args.game)?;
    let format = args.output.format();
    if args.mc {
        let (trials, seed) = (args.trials.unwrap_or_default(), args.seed.unwrap_or_default());
        let report = evaluate_monte_carlo(table.game(), &table, trials, seed)?.named(&name);
        return Ok(mc_output(&report, format));
    }
    let report = evaluate_exact(table.game(), &table)?.named(&name);
    Ok(match format {
        Format::Json => line(report.to_json()),
        Format::Table => render_table(&report),
        Format::Csv => {
            let mut out = String::from("strategy,wins,total,probability");
            out.push_str(if report.mean_correct.is_some() { ",mean_correct\n" } else { "\n" });
            let _ = write!(out, "{},{},{},{}", name, report.wins, report.total, report.probability);
            if let Some(mean) = report.mean_correct {
                let _ = write!(out, ",{mean}");
            }
            out.push('\n');
            out
        }
    })
}

fn trace(args: &TraceArgs) -> CliResult {
    let (table, name) = resolve(&args.game)?;
    let report = trace_table(table.game(), &table)?.named(&name);
    Ok(match args.output.format() {
        Format::Json => line(report.to_json()),
        Format::Csv => render_csv(&report),
        Format::Table => render_table(&report),
    })
}

fn simulate(args: &SimulateArgs) -> CliResult {
    let (table, name) = resolve(&args.game)?;
    let report = evaluate_monte_carlo(table.game(), &table, args.trials, args.seed)?.named(&name);
    Ok(mc_output(&report, args.output.format()))
}

fn search_output(kind: &str, r: &SearchResult, json: bool, out: &Option<PathBuf>) -> CliResult {
    if let Some(path) = out {
        write(path, &r.witness.to_text())?;
    }
    if json {
        return Ok(line(r.to_json()));
    }
    let mut text = format!("{kind} search over {}\n", r.game);
    let _ = writeln!(text, "optimum {} (wins {} / {})", r.optimum, r.wins, r.total);
    let _ = writeln!(text, "strategies examined {}, pruned {}", r.strategies_examined, r.pruned);
    if out.is_none() {
        text.push_str("witness:\n");
        text.push_str(&r.witness.to_text());
    }
    Ok(text)
}

fn parse_objective(name: &str) -> Result<Objective, CliError> {
    match name {
        "ebert" => Ok(Objective::AtLeastOneCorrectNoneWrong),
        other => other.parse().map_err(|_| {
            CliError::Usage(format!("unknown objective {other:?} (expected ebert or majority)"))
        }),
    }
}

fn search(cmd: &SearchCommand) -> CliResult {
    match cmd {
        SearchCommand::Sequential { n, q, prune, json, out } => {
            let r = search_optimal_sequential(*n, *q, *prune)?;
            search_output(if *prune { "restricted sequential" } else { "sequential" }, &r, *json, out)
        }
        SearchCommand::Simultaneous { n, q, objective, json, out } => {
            let r = search_optimal_simultaneous(*n, *q, parse_objective(objective)?)?;
            search_output("simultaneous", &r, *json, out)
        }
        SearchCommand::Beta { n, q, json } => {
            let r = max_first_player_passes(*n, *q)?;
            Ok(if *json {
                line(r.to_json())
            } else {
                format!(
                    "n={} q={}: beta {}, bound {}, optimum {}, {} restricted strategies examined\n",
                    r.n, r.q, r.beta, r.bound, r.optimum, r.strategies_examined
                )
            })
        }
    }
}

fn words(code: &Code) -> Vec<String> {
    code.words().map(|w| w.to_string()).collect()
}

fn codes(cmd: &CodesCommand) -> CliResult {
    match cmd {
        CodesCommand::Hamming { m, out } => {
            let code = hamming_code(*m)?;
            match out {
                Some(path) => {
                    write(path, &code.to_text())?;
                    Ok(format!("wrote {} words of length {} to {}\n", code.len(), code.n(), path.display()))
                }
                None => Ok(code.to_text()),
            }
        }
        CodesCommand::Verify { file, r, json } => {
            let mut code = Code::from_text(&read(file)?)?;
            let c = code.verify_covering(*r)?;
            let witness = c.witness.as_ref().map(|w| w.to_string());
            if *json {
                let v = serde_json::json!({
                    "n": code.n(), "q": code.q(), "size": code.len(), "r": r,
                    "covered": c.covered, "radius": c.radius, "witness": witness,
                });
                return Ok(line(v.to_string()));
            }
            let radius = c.radius.map_or("undefined".to_string(), |x| x.to_string());
            Ok(match witness {
                None => format!("covered: {} words, radius {radius} <= {r}\n", code.len()),
                Some(w) => format!("not covered: radius {radius} > {r}, farthest word {w}\n"),
            })
        }
        CodesCommand::MinCover { n, r, json, out } => {
            let found = min_covering_code(*n, *r)?;
            if let Some(path) = out {
                write(path, &found.witness.to_text())?;
            }
            if *json {
                let v = serde_json::json!({
                    "n": n, "r": r, "size": found.size, "witness": words(&found.witness), "nodes": found.nodes,
                });
                return Ok(line(v.to_string()));
            }
            Ok(format!(
                "n={n} r={r}: minimum size {}\nwitness {}\nsearch nodes {}\n",
                found.size,
                words(&found.witness).join(" "),
                found.nodes
            ))
        }
    }
}

fn list_strategies() -> String {
    let width = BUILTIN_STRATEGIES.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    BUILTIN_STRATEGIES
        .iter()
        .map(|(name, about)| format!("{name:<width$}  {about}\n"))
        .collect()
}

fn dispatch(cli: &Cli) -> CliResult {
    if cli.list_strategies {
        return Ok(list_strategies());
    }
    match &cli.command {
        None => Err(CliError::Usage(format!("a subcommand is required\n\n{}", Cli::command().render_help()))),
        Some(Command::Evaluate(a)) => evaluate(a),
        Some(Command::Trace(a)) => trace(a),
        Some(Command::Simulate(a)) => simulate(a),
        Some(Command::Search(c)) => search(c),
        Some(Command::Codes(c)) => codes(c),
    }
}

#[cfg(feature = "parallel")]
fn run(cli: &Cli) -> CliResult {
    match cli.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w as usize)
            .build()
            .map_err(|e| CliError::Io(format!("cannot start {w} workers: {e}")))?
            .install(|| dispatch(cli)),
        None => dispatch(cli),
    }
}

#[cfg(not(feature = "parallel"))]
fn run(cli: &Cli) -> CliResult {
    dispatch(cli)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("USAGE: {}", e.render());
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("USAGE: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Hat(e)) => {
            match e {
                HatError::Capacity(_) => eprintln!("CAPACITY: {}", e.message()),
                HatError::Format(_) => eprintln!("FORMAT: {}", e.message()),
                _ => eprintln!("ERROR: {e}"),
            }
            ExitCode::FAILURE
        }
        Err(CliError::Io(msg)) => {
            eprintln!("ERROR: {msg}");
            ExitCode::FAILURE
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dynideal_cli::cert::Certificate;
use dynideal_cli::scenario::{InstanceSpec, Strategies};
use dynideal_cli::suites::play_one;
use dynideal_cli::{catalog, load, scenario_run, verify_report, CliError, Overrides, Report, REPORT_DIR_ENV};

#[derive(Parser)]
#[command(name = "dynideal", version, about = "Run verification scenarios and check their reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in scenarios.
    Scenario {
        #[command(subcommand)]
        action: ScenarioCmd,
    },
    /// Saved reports.
    Report {
        #[command(subcommand)]
        action: ReportCmd,
    },
    /// Single games.
    Game {
        #[command(subcommand)]
        action: GameCmd,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    List,
    /// Run a catalog scenario or a scenario file.
    Run {
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
        /// Where to write the report; defaults to $DYNIDEAL_REPORT_DIR/<name>.json, else stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ReportCmd {
    Verify { path: PathBuf },
}

#[derive(Subcommand)]
enum GameCmd {
    /// Play one game, e.g. `game run FiniteSym:N=20,k=4 random-I cofinal-II`.
    Run {
        instance: String,
        one: String,
        two: String,
        #[arg(long, default_value_t = 10)]
        horizon: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Scenario { action: ScenarioCmd::List } => {
            for s in catalog() {
                println!("{:<26} {}", s.name, s.description);
            }
            Ok(true)
        }
        Command::Scenario { action: ScenarioCmd::Run { scenario, seed, horizon, budget, report } } => {
            let sc = load(&scenario)?.with_overrides(Overrides { seed, horizon, budget });
            let r = scenario_run(&sc)?;
            let target = report.or_else(|| std::env::var_os(REPORT_DIR_ENV).map(|d| PathBuf::from(d).join(format!("{}.json", sc.name))));
            match target {
                Some(path) => {
                    r.write(&path)?;
                    eprintln!("report written to {}", path.display());
                }
                None => print!("{}", r.to_text()),
            }
            for c in r.checks.iter().filter(|c| !c.pass) {
                eprintln!("FAIL {}: {}{}", c.id, c.claim, c.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default());
            }
            eprintln!("{}: {} checks, {} passed, {} failed", sc.name, r.summary.total, r.summary.passed, r.summary.failed);
            Ok(r.all_pass())
        }
        Command::Report { action: ReportCmd::Verify { path } } => {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let r = Report::from_text(&text, &path.display().to_string())?;
            let v = verify_report(&r);
            for p in &v.problems {
                eprintln!("{p}");
            }
            println!("{}: {} certificates re-checked, {}", path.display(), v.checked, if v.ok() { "verified" } else { "REJECTED" });
            Ok(v.ok())
        }
        Command::Game { action: GameCmd::Run { instance, one, two, horizon, seed } } => {
            let spec = InstanceSpec::parse_short(&instance)?;
            let cert = play_one(&spec.build()?, &Strategies { one, two }, horizon, seed)?;
            let pass = cert.verify()?;
            println!("{}", serde_json::to_string_pretty(&cert).expect("certificates serialize"));
            if let Certificate::Transcript(t) = &cert {
                eprintln!("{} rounds, forfeit: {}", t.rounds.len(), t.forfeit.as_ref().map_or("none".into(), |f| f.reason.clone()));
            }
            eprintln!("{}", if pass { "all game checks hold" } else { "game checks FAILED" });
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

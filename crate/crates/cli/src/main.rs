use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use clrlab_cli::{catalog, default_config, execute, ExperimentConfig, EXIT_ASSERTION, EXIT_CONFIG, EXIT_PASS};

#[derive(Parser)]
#[command(name = "clrlab", version, about = "Run eigenvalue-counting and heat-kernel experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory (overrides the config's `output`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Root seed (overrides the config's `seed`).
        #[arg(long)]
        seed: Option<u64>,
        /// Print only failures.
        #[arg(long)]
        quiet: bool,
    },
    /// List experiment kinds with the operations they exercise.
    List,
    /// Describe one kind and print its default config.
    Describe { kind: String },
}

fn run(config: PathBuf, out: Option<PathBuf>, seed: Option<u64>, quiet: bool) -> i32 {
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("config error: cannot read {}: {e}", config.display());
            return EXIT_CONFIG;
        }
    };
    let mut cfg = match ExperimentConfig::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let dir = out.or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("."));
    match execute(&cfg, &dir) {
        Ok((outcome, files)) => {
            for c in &outcome.checks {
                if !quiet || !c.passed {
                    println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                }
            }
            if !quiet {
                println!("wrote {} and {}", files.csv.display(), files.summary.display());
            }
            if outcome.passed() {
                EXIT_PASS
            } else {
                EXIT_ASSERTION
            }
        }
        Err(e) => {
            // Nothing is written unless the run completes.
            eprintln!("{e}");
            EXIT_CONFIG
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config, out, seed, quiet } => run(config, out, seed, quiet),
        Command::List => {
            for e in catalog::CATALOG {
                println!("{:<26} {}", e.kind, e.anchor);
                println!("{:<26} operations: {}", "", e.operations.join(", "));
            }
            EXIT_PASS
        }
        Command::Describe { kind } => match (catalog::find(&kind), default_config(&kind)) {
            (Some(e), Some(cfg)) => {
                println!("{}\n\n{}\n\nanchor: {}\noperations: {}\n", e.kind, e.summary, e.anchor, e.operations.join(", "));
                println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes"));
                EXIT_PASS
            }
            _ => {
                eprintln!("config error: unknown kind {kind:?}; see `clrlab list`");
                EXIT_CONFIG
            }
        },
    };
    ExitCode::from(code as u8)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use logweight::cli::{run, Command, Format, RunConfig, TrackSelector};

/// Weight filtrations on logarithmic de Rham and Hodge cohomology.
#[derive(Parser, Debug)]
#[command(name = "logweight", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    track: TrackSelector,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = RunConfig {
        command: args.command,
        scenario: args.scenario,
        track: args.track,
        format: args.format,
        seed: args.seed,
        out: args.out,
    };
    let outcome = run(&cfg);
    if let Some(err) = outcome.report.get("error") {
        let path = err["path"].as_str().unwrap_or("input");
        eprintln!("invalid input at {path}: {}", err["reason"].as_str().unwrap_or(""));
    }
    match &cfg.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &outcome.rendered) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.rendered),
    }
    ExitCode::from(outcome.code as u8)
}

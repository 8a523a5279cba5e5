use std::io::Read;
use std::process::ExitCode;

use clap::Parser;
use pph_core::cli::run::{error_json, run, Options, Outcome, DEFAULT_SEED};
use pph_core::cli::script::parse;
use pph_core::scalar::ExactField;
use pph_core::Q;

/// Corner loci, mixed Monge-Ampère cycles and their pairings for
/// piecewise linear functions on C^n.
#[derive(Parser, Debug)]
#[command(name = "pph", version)]
struct Args {
    /// Script file; standard input when omitted.
    #[arg(long)]
    input: Option<std::path::PathBuf>,
    /// Seed for generated verification instances.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Window radius, e.g. 1 or 1/2; overrides the script.
    #[arg(long)]
    window: Option<String>,
    /// Print the full JSON report instead of one line per command.
    #[arg(long)]
    json: bool,
    /// Oracle grid spacing; the mollifier width is twice this.
    #[arg(long, default_value_t = 1.0 / 40.0)]
    oracle_grid: f64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut src = String::new();
    let read = match &args.input {
        Some(p) => std::fs::read_to_string(p).map(|s| src = s),
        None => std::io::stdin().read_to_string(&mut src).map(|_| ()),
    };
    if let Err(e) = read {
        eprintln!("cannot read input: {e}");
        return ExitCode::from(2);
    }
    let window = match args.window.as_deref().map(Q::parse_rational).transpose() {
        Ok(w) => w,
        Err(e) => return finish(&Outcome { reports: Vec::new(), error: Some(e) }, &args),
    };
    let outcome = match parse(&src) {
        Ok(script) => run(&script, &Options { seed: args.seed, window, oracle_grid: args.oracle_grid }),
        Err(e) => Outcome { reports: Vec::new(), error: Some(e) },
    };
    finish(&outcome, &args)
}

fn finish(outcome: &Outcome, args: &Args) -> ExitCode {
    if args.json {
        println!("{}", serde_json::to_string_pretty(&outcome.to_json(args.seed)).expect("serializable"));
    } else {
        print!("{}", outcome.to_text());
        if let Some(e) = &outcome.error {
            eprintln!("{}", error_json(e));
        }
    }
    ExitCode::from(outcome.exit_code() as u8)
}

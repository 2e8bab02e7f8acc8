use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dmon::chain::ChainComplex;
use dmon::verify::{self, CheckReport, Context, SuiteConfig};

#[derive(Parser)]
#[command(name = "dmon", version, about = "Run the dmon verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selected suites (all by default) and print one line per check.
    Verify(VerifyArgs),
    /// Print the registered suite names.
    ListSuites,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Suite to run; repeat for several.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 300)]
    trials: usize,
    #[arg(long, default_value_t = 4)]
    max_level: usize,
    #[arg(long, default_value_t = 5)]
    stab_bound: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Stop after the first suite with a failing check.
    #[arg(long)]
    fail_fast: bool,
    /// Interchange complex to add to the corpus as R(C).
    #[arg(long, value_name = "FILE")]
    complex: Vec<PathBuf>,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn verify(args: VerifyArgs) -> ExitCode {
    let known = verify::suite_names();
    if let Some(bad) = args.suites.iter().find(|s| !known.contains(&s.as_str())) {
        return usage(format!("unknown suite `{bad}` (see `dmon list-suites`)"));
    }
    let mut extra = Vec::new();
    for path in &args.complex {
        match ChainComplex::load_json(path) {
            Ok(c) => extra.push((path.display().to_string(), c)),
            Err(e) => return usage(format!("{}: {e}", path.display())),
        }
    }
    let cfg = SuiteConfig {
        seed: args.seed,
        trials: args.trials,
        max_level: args.max_level,
        stab_bound: args.stab_bound,
        fail_fast: args.fail_fast,
    };
    let ctx = match Context::new(cfg, &extra) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let reports = match verify::run_suites(&args.suites, &ctx) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    match args.format {
        Format::Text => print!("{}", verify::render_text(&reports)),
        Format::Json => println!("{}", verify::render_json(&reports)),
    }
    if reports.iter().any(CheckReport::is_failure) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::ListSuites => {
            for name in verify::suite_names() {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
    }
}

use std::process::ExitCode;

use clap::Parser;
use twistor_cli::{list_suites, run_suite, CliError, Format, SuiteConfig};
use twistor_core::Exec;

/// Seeded numerical verification of twistor-space constructions.
#[derive(Debug, Parser)]
#[command(name = "twistor", version)]
struct Args {
    /// Suite to run; see --list.
    #[arg(long, required_unless_present = "list")]
    suite: Option<String>,
    /// Half the real dimension of the symplectic space.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
    /// List suites and exit.
    #[arg(long)]
    list: bool,
    /// Run samples on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if args.list {
        for (name, description) in list_suites() {
            println!("{name:<16} {description}");
        }
        return ExitCode::SUCCESS;
    }
    match run(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: Args) -> Result<bool, CliError> {
    let config = SuiteConfig {
        suite: args.suite.unwrap_or_default(),
        n: args.dim,
        samples: args.samples,
        seed: args.seed,
        tol: args.tol,
        format: match args.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        },
        exec: if args.sequential { Exec::Sequential } else { Exec::default() },
    };
    let report = run_suite(&config)?;
    let body = match config.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    match &args.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?,
        None => print!("{body}"),
    }
    Ok(report.passed())
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dicyclic_frobenius::numcheck::NumConfig;
use dicyclic_frobenius::report::{branches, emit, run_all, Format};

/// Verifies the Frobenius structures on the orbit space of the dicyclic group
/// of order 4n, stage by stage, with numeric backstops.
#[derive(Parser, Debug)]
#[command(name = "dicyclic-frobenius", version)]
struct Cli {
    /// Order parameter, a natural number greater than 1.
    #[arg(long)]
    n: i64,
    /// plus, minus or both.
    #[arg(long, default_value = "both")]
    branch: String,
    /// text, json or latex.
    #[arg(long, default_value = "text")]
    format: Format,
    /// Working precision of the numeric oracle in bits.
    #[arg(long, default_value_t = 256)]
    precision: usize,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
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
    if cli.n < 2 {
        eprintln!("error: --n must be a natural number greater than 1, got {}", cli.n);
        return ExitCode::from(2);
    }
    let Some(branches) = branches(&cli.branch) else {
        eprintln!("error: --branch must be plus, minus or both, got `{}`", cli.branch);
        return ExitCode::from(2);
    };
    if cli.samples == 0 || cli.precision < 64 {
        eprintln!("error: --samples must be positive and --precision at least 64");
        return ExitCode::from(2);
    }
    let cfg = NumConfig {
        precision_bits: cli.precision,
        samples: cli.samples,
        seed: cli.seed,
        ..NumConfig::default()
    };
    let set = match run_all(cli.n, &branches, &cfg) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let doc = emit(&set, cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &doc) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{doc}"),
    }
    if set.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

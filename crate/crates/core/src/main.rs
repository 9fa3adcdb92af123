use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use dirac_bvp::cli::{run_text, CliError, RunOptions, EXIT_INPUT};

/// Verification checks for Dirac boundary value problems, driven by JSON job files.
#[derive(Parser, Debug)]
#[command(name = "dirac-bvp", version)]
struct Args {
    /// Job file (JSON).
    #[arg(long)]
    job: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the Lopatinsky–Shapiro grid as CSV (`check-ls` only).
    #[arg(long)]
    dump_grid: Option<PathBuf>,
    /// Worker threads for parallel sections.
    #[arg(long)]
    threads: Option<usize>,
    /// Recorded in the report; all algorithms are deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = match execute(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    };
    ExitCode::from(code as u8)
}

fn execute(args: &Args) -> Result<i32, CliError> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Schema(format!("--threads: {e}")))?;
    }
    let text = std::fs::read_to_string(&args.job).map_err(|e| CliError::Io {
        path: args.job.clone(),
        source: e,
    })?;
    let opts = RunOptions {
        seed: args.seed,
        base_dir: args.job.parent().map(PathBuf::from).unwrap_or_default(),
        dump_grid: args.dump_grid.clone(),
    };
    let start = Instant::now();
    let report = run_text(&text, &opts)?;
    if let Some(t) = &report.table {
        eprint!("{t}");
    }
    eprintln!("{}: {:.3} s", report.command.name(), start.elapsed().as_secs_f64());
    let json = report.to_json();
    match &args.out {
        Some(p) => std::fs::write(p, json).map_err(|e| CliError::Io {
            path: p.clone(),
            source: e,
        })?,
        None => print!("{json}"),
    }
    Ok(report.exit_code())
}

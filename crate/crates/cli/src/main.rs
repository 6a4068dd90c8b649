use std::path::Path;
use std::process::ExitCode;

use cf_lab_cli::{run, Cli, CliError};
use clap::Parser;

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("CF_LAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Usage(format!("CF_LAB_THREADS must be a positive integer, got {raw:?}"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn emit(out: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, out)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let path = cli.output.out.as_deref();
    let result = configure_threads()
        .and_then(|()| run(&cli))
        .and_then(|out| emit(&out, path));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let CliError::Violations { output, .. } = &e {
                // best effort: the exit code already reports the failure
                let _ = emit(output, path);
            }
            eprintln!("cf-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

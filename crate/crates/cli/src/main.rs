mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use commands::CliError;
use config::{Cli, Command, Format, RunConfig};

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(cli)?;
    if cli.common.print_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    let report = match &cli.command {
        Command::Bands { .. } => commands::bands(&cfg),
        Command::Phi => commands::phi(&cfg),
        Command::Berry => commands::berry(&cfg),
        Command::Chern { .. } => commands::chern(&cfg),
        Command::Zak => commands::zak(&cfg),
        Command::Winding => commands::winding(&cfg),
        Command::Classify => commands::classify_cmd(&cfg),
        Command::Chain { .. } => commands::chain(&cfg),
        Command::Sweep { .. } => commands::sweep(&cfg),
    }?;
    let text = match cfg.format {
        Format::Json => report.to_json(&cfg.tolerances),
        Format::Csv => report.to_csv(),
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Compute(format!("cannot write output: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("usage error");
            eprintln!("{}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("topoband: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

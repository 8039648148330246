use std::path::PathBuf;
use std::process::ExitCode;

use carleson_lab::config::Format;
use carleson_lab::{parse_config, run_to_report, thread_count, Command, LabError, PartialConfig, Report};
use clap::Parser;

#[derive(Parser)]
#[command(name = "carleson-lab", version, about = "Carleson-measure experiments for composition operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML file of settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: PartialConfig,
}

fn emit(report: &Report, format: Format, out: Option<&str>) -> Result<(), LabError> {
    let bytes = match format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
    };
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // Exit status 2 is reserved for audit violations.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let command = cli.command;
    let fallback_format = cli.flags.format.unwrap_or(Format::Json);
    let fallback_out = cli.flags.out.clone();
    let result = (|| -> Result<Report, LabError> {
        let text = match &cli.config {
            Some(p) => std::fs::read_to_string(p)?,
            None => String::new(),
        };
        let cfg = parse_config(command, &text, cli.flags)?;
        if let Some(n) = thread_count(cfg.threads) {
            // Fails only if a pool already exists, which is harmless.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        let report = run_to_report(&cfg)?;
        emit(&report, cfg.format, cfg.out.as_deref())?;
        Ok(report)
    })();
    match result {
        Ok(r) => {
            if let Some(e) = &r.error {
                eprintln!("carleson-lab {}: {}", command.name(), e.message);
            }
            ExitCode::from(r.status.exit_code())
        }
        Err(e) => {
            eprintln!("carleson-lab {}: {e}", command.name());
            if let Ok(r) = Report::new(command, None, Vec::new(), serde_json::Value::Null, Some((&e).into())) {
                let _ = emit(&r, fallback_format, fallback_out.as_deref());
            }
            ExitCode::from(1)
        }
    }
}

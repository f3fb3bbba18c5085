use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ovca_cli::config::{GeneratorConfig, PipelineConfig};
use ovca_cli::csvio::write_csv;
use ovca_cli::report::{emit_report, load_report, render_summary};
use ovca_cli::CliError;

#[derive(Parser)]
#[command(name = "ovca", about = "Ovarian-cancer screening pipeline over ultrasound features")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline from a TOML config and write the report files.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Generate a synthetic dataset CSV from a TOML generator spec.
    Generate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a human-readable summary of a previously written report.
    Report {
        #[arg(long)]
        dir: PathBuf,
    },
}

fn run_command(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { config } => {
            let config = PipelineConfig::load(&config)?;
            let report = ovca_cli::run(&config)?;
            let written = emit_report(&report, std::path::Path::new(&config.output_dir))?;
            for path in &written {
                eprintln!("wrote {}", path.display());
            }
            print!("{}", render_summary(&report));
            Ok(())
        }
        Command::Generate { spec, out } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", spec.display())))?;
            let generator: GeneratorConfig = toml::from_str(&text)
                .map_err(|e| CliError::Validation(format!("{}: {e}", spec.display())))?;
            let generator_spec = generator.to_spec();
            generator_spec
                .validate()
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let data = ovca_core::synth::generate(&generator_spec)?;
            write_csv(&data, &out)?;
            eprintln!("wrote {} ({} rows)", out.display(), data.n_rows());
            Ok(())
        }
        Command::Report { dir } => {
            let report = load_report(&dir)?;
            print!("{}", render_summary(&report));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_command(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

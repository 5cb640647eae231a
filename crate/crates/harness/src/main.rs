use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ms2pso_harness::{
    emit_plot_data, load_config, run_experiment, summarize, Algorithm, ExperimentConfig,
    HarnessError, Parallelism, RunOptions, EXIT_OK, EXIT_RUN_FAILED,
};

#[derive(Parser)]
#[command(name = "ms2pso", version, about = "Staged multi-swarm PSO experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every seed of an experiment config
    Run {
        config: PathBuf,
        /// Overwrite results in a non-empty output directory
        #[arg(long)]
        force: bool,
        /// Thread count or "auto"
        #[arg(long)]
        parallelism: Option<Parallelism>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print cross-run statistics of history files as JSON
    Summarize {
        #[arg(required = true)]
        histories: Vec<PathBuf>,
    },
    /// Write a convergence CSV from history files
    PlotData {
        #[arg(required = true)]
        histories: Vec<PathBuf>,
        #[arg(short = 'o', long = "output")]
        out: PathBuf,
    },
    /// List the named algorithm presets as config files
    Presets,
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn run_command(command: Command) -> Result<u8, HarnessError> {
    match command {
        Command::Run {
            config,
            force,
            parallelism,
            output,
        } => {
            let cfg = load_config(&config)?;
            let opts = RunOptions {
                force,
                parallelism,
                output_dir: output,
                config_dir: Some(config.parent().unwrap_or(Path::new(".")).to_path_buf()),
            };
            let summary = run_experiment(&cfg, &opts)?;
            for r in &summary.runs {
                match &r.error {
                    None => println!(
                        "seed {}: best {:?}",
                        r.seed,
                        r.final_best.unwrap_or(f64::NAN)
                    ),
                    Some(e) => println!("seed {}: FAILED: {e}", r.seed),
                }
            }
            if let Some(s) = summary.final_best {
                println!(
                    "median {:?}  min {:?}  max {:?}  ({} runs)",
                    s.median, s.min, s.max, s.count
                );
            }
            Ok(if summary.failed_runs() > 0 {
                EXIT_RUN_FAILED
            } else {
                EXIT_OK
            })
        }
        Command::Summarize { histories } => {
            let summary = summarize(&histories)?;
            emit(&(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"));
            Ok(EXIT_OK)
        }
        Command::PlotData { histories, out } => {
            emit_plot_data(&histories, &out)?;
            Ok(EXIT_OK)
        }
        Command::Presets => {
            let mut text = String::new();
            for a in Algorithm::ALL {
                text.push_str(&format!(
                    "# ---- preset: {a} ----\n{}\n",
                    ExperimentConfig::preset(a).to_toml()
                ));
            }
            emit(&text);
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run_command(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

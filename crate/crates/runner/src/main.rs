use std::path::PathBuf;
use std::process::ExitCode;

use bergman_runner::{output_root, run_experiment, self_test, ExperimentConfig, ExperimentId, OUTPUT_ENV};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bergman-lab", version, about = "Weighted Bergman space experiments")]
struct Cli {
    /// Cap on worker threads (1 gives bit-reproducible output).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a TOML config.
    Run {
        config: PathBuf,
        /// Print the filled-in config and exit.
        #[arg(long)]
        echo: bool,
    },
    /// List registered experiments.
    ListExperiments,
    /// Quadrature self-tests of the standard rules.
    SelfTest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match cli.command {
        Command::ListExperiments => {
            for id in ExperimentId::ALL {
                println!("{id:<4} {}", id.description());
            }
            ExitCode::SUCCESS
        }
        Command::SelfTest => match self_test() {
            Ok(outcomes) => {
                let ok = outcomes.iter().all(|o| o.passed);
                println!("{}", serde_json::to_string_pretty(&outcomes).expect("serializable"));
                if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Run { config, echo } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", config.display());
                    return ExitCode::from(2);
                }
            };
            let cfg = match ExperimentConfig::parse(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            if echo {
                print!("{}", cfg.serialize().expect("serializable config"));
                return ExitCode::SUCCESS;
            }
            eprintln!("output root: {} (set {OUTPUT_ENV} to change)", output_root().display());
            match run_experiment(&cfg) {
                Ok(report) => {
                    for c in &report.checks {
                        println!("{c}");
                    }
                    for (k, v) in &report.logged {
                        println!("[log ] {k}: {v:.6e}");
                    }
                    println!(
                        "{} {} in {:.2} s",
                        report.experiment_id,
                        if report.passed { "PASSED" } else { "FAILED" },
                        report.wall_time_s
                    );
                    if report.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}

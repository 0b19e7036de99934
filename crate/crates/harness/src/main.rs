use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};

use prlab::{all_pass, csv_string, render_reports, run_config, summary_json, verify_all, Config, VerifySettings};
use prlab_core::loss::pareto_frontier;
use prlab_core::stream::{self, tag};
use prlab_core::world::{build_world, catalog};

#[derive(Parser)]
#[command(name = "prlab", version, about = "Simulation lab for set-valued prediction from positive-only feedback")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the experiments in a config and write results.csv + summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-check the analytic guarantees with brute-force verifiers.
    Verify {
        /// Randomized instances per sampled-instance verifier.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Monte Carlo inputs for the payoff-gap verifier.
        #[arg(long, default_value_t = 100_000)]
        scalar_inputs: usize,
    },
    /// Inspect the built-in world kinds.
    Worlds {
        #[command(subcommand)]
        cmd: WorldsCmd,
    },
    /// Print the exact loss frontier of each experiment's world.
    Frontier {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum WorldsCmd {
    /// List world kinds and their parameters.
    List,
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().cmd {
        Cmd::Run { config, out, seed } => {
            let mut cfg = Config::from_path(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let records = run_config(&cfg)?;
            std::fs::create_dir_all(&out)
                .with_context(|| format!("creating {}", out.display()))?;
            let csv_path = out.join("results.csv");
            std::fs::write(&csv_path, csv_string(&records))?;
            let summary = summary_json(&cfg, &records);
            let summary_path = out.join("summary.json");
            std::fs::write(&summary_path, format!("{:#}\n", summary))?;
            let failed = records.iter().filter(|r| !r.is_ok()).count();
            println!(
                "wrote {} rows to {} ({} failed trials); summary in {}",
                records.len(),
                csv_path.display(),
                failed,
                summary_path.display()
            );
        }
        Cmd::Verify { trials, seed, scalar_inputs } => {
            let settings = VerifySettings { trials, seed, scalar_inputs };
            let reports = verify_all(&settings)?;
            print!("{}", render_reports(&reports));
            if !all_pass(&reports) {
                std::process::exit(1);
            }
        }
        Cmd::Worlds { cmd: WorldsCmd::List } => {
            for (kind, params) in catalog() {
                println!("{kind:15} {params}");
            }
        }
        Cmd::Frontier { config } => {
            let cfg = Config::from_path(&config)?;
            for (ei, exp) in cfg.experiments.iter().enumerate() {
                let world_seed = stream::derive_seed(cfg.seed, &[ei as u64, tag::WORLD]);
                let world = build_world(&exp.world, world_seed)
                    .with_context(|| format!("building world for `{}`", exp.id))?;
                let frontier = pareto_frontier(world.class(), &world)
                    .with_context(|| format!("frontier needs exact expectations (`{}`)", exp.id))?;
                let value = serde_json::json!({
                    "experiment": exp.id,
                    "world": world.name(),
                    "frontier": frontier,
                });
                println!("{value:#}");
            }
        }
    }
    Ok(())
}

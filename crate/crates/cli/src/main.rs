use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::LazyLock;

use clap::{Args, Parser, Subcommand};
use morphoevo::config::{load_config, ConfigSources, SEED_VAR};
use morphoevo::error::{CliError, CliResult};
use morphoevo::{oracle, parse_values, render, run_batch_to, run_single, sweep_alpha};
use morphoevo_core::runner::PRESET_NAMES;
use morphoevo_core::SimulationConfig;

static PRESET_HELP: LazyLock<String> = LazyLock::new(|| {
    format!(
        "Presets:\n  {}\n\nExit codes: 0 ok, 1 other error, 3 missing file, 4 config schema, 5 infeasible parameters, 6 malformed CSV.\n{SEED_VAR} overrides master_seed.",
        PRESET_NAMES.join("\n  ")
    )
});

#[derive(Parser)]
#[command(name = "morphoevo", version, about = "Simulate inflectional systems under iterated paradigm cell filling")]
#[command(after_help = PRESET_HELP.as_str())]
struct Cli {
    /// More progress output on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write its artifacts.
    #[command(after_help = PRESET_HELP.as_str())]
    Run {
        #[command(flatten)]
        sim: SimArgs,
        /// Run id; selects the random stream together with master_seed.
        #[arg(long, default_value_t = 0)]
        run_id: u64,
    },
    /// Run `runs` simulations and write per-run metrics plus the aggregate.
    #[command(after_help = PRESET_HELP.as_str())]
    Batch {
        #[command(flatten)]
        sim: SimArgs,
    },
    /// One batch per alpha value.
    #[command(name = "sweep-alpha", after_help = PRESET_HELP.as_str())]
    SweepAlpha {
        #[command(flatten)]
        sim: SimArgs,
        /// Comma-separated alpha values.
        #[arg(long, default_value = "0.1,0.2,0.5,0.67,0.75")]
        values: String,
    },
    /// Print the exact four-part analogy probabilities as CSV.
    Oracle {
        /// Largest number of rows and columns to tabulate.
        #[arg(long, default_value_t = 4)]
        max_mn: usize,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render SVG charts and snapshot heatmaps for a batch directory.
    Render {
        dir: PathBuf,
    },
}

#[derive(Args)]
struct SimArgs {
    /// JSON config file; may name a base preset under "preset".
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Base preset (see the list below).
    #[arg(short, long, value_parser = clap::builder::PossibleValuesParser::new(PRESET_NAMES))]
    preset: Option<String>,
    /// Dotted override such as step.alpha=0.5 (repeatable, applied in order).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory.
    #[arg(short, long)]
    out: PathBuf,
    /// Worker thread cap (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl SimArgs {
    fn load(&self) -> CliResult<SimulationConfig> {
        if let Some(n) = self.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global()
                .map_err(|e| CliError::Other(e.to_string()))?;
        }
        load_config(&ConfigSources {
            file: self.config.as_deref(),
            preset: self.preset.as_deref(),
            overrides: &self.overrides,
            seed_env: std::env::var(SEED_VAR).ok(),
        })
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    let verbose = cli.verbose > 0;
    let note = |msg: String| {
        if verbose {
            eprintln!("{msg}");
        }
    };
    match cli.command {
        Command::Run { sim, run_id } => {
            let cfg = sim.load()?;
            note(format!("run {run_id}: {} cycles", cfg.total_cycles));
            let rec = run_single(&cfg, run_id, &sim.out)?;
            let last = rec.final_frame();
            println!(
                "run {run_id}: cycle {}, {} classes, {} zones, mean U {:.4}, mean H {:.4}",
                last.cycle, last.class_count, last.zone_count, last.mean_theils_u, last.mean_cond_entropy
            );
        }
        Command::Batch { sim } => {
            let cfg = sim.load()?;
            note(format!("batch: {} runs x {} cycles", cfg.runs, cfg.total_cycles));
            let (records, _) = run_batch_to(&cfg, &sim.out)?;
            let single = records.iter().filter(|r| r.final_frame().class_count == 1).count();
            println!(
                "{} runs written to {}; {single} ended with a single class",
                records.len(),
                sim.out.display()
            );
        }
        Command::SweepAlpha { sim, values } => {
            let cfg = sim.load()?;
            let values = parse_values(&values)?;
            let summary = sweep_alpha(&cfg, &values, &sim.out, |a| note(format!("alpha {a}")))?;
            print!("{summary}");
        }
        Command::Oracle { max_mn, out } => {
            let table = oracle::oracle_table(max_mn)?;
            match out {
                Some(path) => {
                    let partial = path.with_extension("partial");
                    std::fs::write(&partial, &table)?;
                    std::fs::rename(&partial, &path)?;
                }
                None => print!("{table}"),
            }
        }
        Command::Render { dir } => {
            let written = render::render_outputs(&dir)?;
            for path in &written {
                note(path.display().to_string());
            }
            println!("{} SVG files written under {}", written.len(), dir.join("render").display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

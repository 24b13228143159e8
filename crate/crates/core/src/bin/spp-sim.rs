//! Command-line driver. One subcommand per experiment:
//!
//! ```text
//! spp-sim interferogram --preset fig5-l1 --out out/l1
//! spp-sim flag-series --config flag.json --seed 7 --grid.n 200
//! ```
//!
//! Trailing `--key value` pairs override config keys (dotted paths, JSON values).
//! Exit codes: 0 success, 2 invalid input, 3 IO failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use neutron_spp::config::{apply_override, Experiment, RunConfig};
use neutron_spp::{run, SimError, Violation};
use serde_json::Value;

#[derive(Parser)]
#[command(
    name = "spp-sim",
    version,
    about = "Spiral-phase-plate neutron interferogram simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Thickness maps by direct evaluation and by sliced projection
    SppMap(RunArgs),
    /// G/O detector images for one set of plates
    Interferogram(RunArgs),
    /// Each plate alone and all plates stacked in series
    Stack(RunArgs),
    /// One image per phase-flag rotation plus the path-difference table
    FlagSeries(RunArgs),
    /// Interferogram with finite transverse coherence
    Coherence(RunArgs),
    /// Rocking curve and pencil-beam fan profile of a Laue crystal
    Borrmann(RunArgs),
    /// Ring pattern of the |+l> + |-l> superposition
    OamRing(RunArgs),
    /// Prism deflection of the plate
    Deflection(RunArgs),
    /// List the named presets
    Presets,
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named preset (see `spp-sim presets`)
    #[arg(long)]
    preset: Option<String>,
    /// Noise seed; required when detector noise is enabled
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory [default: $SPP_SIM_OUT_DIR or ./out]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the resolved configuration and exit
    #[arg(long)]
    print_config: bool,
    /// Config overrides as `--key value` pairs, e.g. `--grid.n 200`
    #[arg(
        trailing_var_arg = true,
        allow_hyphen_values = true,
        value_name = "--KEY VALUE"
    )]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match cli.command {
        Command::Presets => {
            for name in RunConfig::PRESETS {
                let c = RunConfig::preset(name).expect("listed preset");
                println!("{name:<12} {}", c.experiment.name());
            }
            return ExitCode::SUCCESS;
        }
        Command::SppMap(a) => (Experiment::SppMap, a),
        Command::Interferogram(a) => (Experiment::Interferogram, a),
        Command::Stack(a) => (Experiment::Stack, a),
        Command::FlagSeries(a) => (Experiment::FlagSeries, a),
        Command::Coherence(a) => (Experiment::Coherence, a),
        Command::Borrmann(a) => (Experiment::Borrmann, a),
        Command::OamRing(a) => (Experiment::OamRing, a),
        Command::Deflection(a) => (Experiment::Deflection, a),
    };
    match execute(experiment, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spp-sim: {e}");
            ExitCode::from(match e {
                SimError::Io { .. } => 3,
                _ => 2,
            })
        }
    }
}

fn invalid(field: &str, message: impl Into<String>) -> SimError {
    SimError::Validation(vec![Violation::new(field, message)])
}

fn execute(experiment: Experiment, args: RunArgs) -> Result<(), SimError> {
    let mut value = if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| SimError::Io {
            path: path.clone(),
            source: e,
        })?;
        serde_json::from_str::<Value>(&text).map_err(|e| invalid("config", e.to_string()))?
    } else if let Some(name) = &args.preset {
        RunConfig::preset(name)
            .ok_or_else(|| invalid("preset", format!("unknown preset {name:?}")))?
            .to_value()
    } else {
        RunConfig::new(experiment).to_value()
    };

    let mut rest = args.overrides.iter();
    while let Some(flag) = rest.next() {
        let key = flag
            .strip_prefix("--")
            .ok_or_else(|| invalid(flag, "expected --key value"))?;
        let raw = rest.next().ok_or_else(|| invalid(key, "missing value"))?;
        apply_override(&mut value, key, raw)?;
    }
    if let Some(seed) = args.seed {
        apply_override(&mut value, "seed", &seed.to_string())?;
    }
    if let Some(out) = &args.out {
        value["output_dir"] = Value::String(out.to_string_lossy().into_owned());
    }

    let config = RunConfig::from_value(value)?;
    if config.experiment != experiment {
        return Err(invalid(
            "experiment",
            format!(
                "configuration is for {}, not {}",
                config.experiment.name(),
                experiment.name()
            ),
        ));
    }
    if args.print_config {
        println!("{}", config.to_json());
        return Ok(());
    }
    let output = run(&config)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&output.summary).expect("summary serialises")
    );
    Ok(())
}

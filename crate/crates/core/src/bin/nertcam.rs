//! Command-line front end for the trace tooling in `nertcam::harness`.
//!
//! Exit status: 0 ok, 1 input or parse error, 2 divergence found.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nertcam::harness::{self, BenchMix, ConfigFile, ConfigOverrides, Differ, GenParams, HarnessError, SensationOrder};
use nertcam::system::System;

#[derive(Parser)]
#[command(name = "nertcam", version, about = "Reverse ternary CAM reference-frame model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DeviceArgs {
    /// Device configuration file (TOML)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of entries
    #[arg(long)]
    entries: Option<usize>,
    /// Section widths as f,l,c
    #[arg(long, value_parser = parse_triple)]
    layout: Option<[usize; 3]>,
    /// Location grid as rows,cols (enables 2D padding)
    #[arg(long, value_parser = parse_pair)]
    grid: Option<[usize; 2]>,
    /// Accept k-hot feature sections
    #[arg(long)]
    khot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset with store and infer traces
    Gen {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        classes: usize,
        #[arg(long, value_parser = parse_triple, default_value = "128,25,10")]
        layout: [usize; 3],
        #[arg(long, value_parser = parse_pair, default_value = "5,5")]
        grid: [usize; 2],
        #[arg(long, default_value_t = 128)]
        feature_pool: usize,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, value_enum, default_value = "sequential")]
        order: Order,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Replay a trace and print a JSON-lines report
    Run {
        #[command(flatten)]
        device: DeviceArgs,
        #[arg(long)]
        trace: PathBuf,
        /// Memory image to load before replay
        #[arg(long)]
        image: Option<PathBuf>,
        /// Padding for PREDICT_FEATURE records that do not set one
        #[arg(long, default_value_t = 0)]
        padding: usize,
        /// Print per-cycle records to stderr
        #[arg(long)]
        trace_cycles: bool,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the device and the oracle in lockstep
    Diff {
        #[command(flatten)]
        device: DeviceArgs,
        /// Trace to replay; without it, a random trace is generated
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        image: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        ops: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Default PREDICT_FEATURE padding; in fuzz mode, the maximum drawn
        #[arg(long, default_value_t = 0)]
        padding: usize,
    },
    /// Measure lookup throughput across entry counts
    Bench {
        #[command(flatten)]
        device: DeviceArgs,
        #[arg(long, value_enum, default_value = "lookup")]
        mix: Mix,
        #[arg(long, default_value_t = 10_000)]
        iterations: usize,
        /// Comma-separated entry counts
        #[arg(long, value_delimiter = ',', default_values_t = harness::TABLE_SIZES)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Sequential,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mix {
    Lookup,
    Infer,
    Predict,
}

fn parse_list<const N: usize>(s: &str) -> Result<[usize; N], String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|_| format!("expected {N} comma-separated numbers"))
}

fn parse_triple(s: &str) -> Result<[usize; 3], String> {
    parse_list(s)
}

fn parse_pair(s: &str) -> Result<[usize; 2], String> {
    parse_list(s)
}

fn read(path: &Path) -> Result<String, HarnessError> {
    fs::read_to_string(path)
        .map_err(|e| HarnessError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn device(args: &DeviceArgs) -> Result<nertcam::NertcamConfig, HarnessError> {
    let file = args
        .config
        .as_deref()
        .map(read)
        .transpose()?
        .map(|t| ConfigFile::parse(&t))
        .transpose()?;
    let overrides = ConfigOverrides {
        layout: args.layout,
        entries: args.entries,
        grid: args.grid,
        khot_features: args.khot.then_some(true),
    };
    harness::resolve_config(file, &overrides)
}

fn load_image(system: &mut System, image: Option<&Path>) -> Result<(), HarnessError> {
    if let Some(path) = image {
        system
            .load_image(&read(path)?)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Gen {
            out,
            classes,
            layout,
            grid,
            feature_pool,
            samples,
            order,
            seed,
        } => {
            let g = harness::generate(&GenParams {
                layout,
                classes,
                grid,
                feature_pool,
                samples_per_class: samples,
                order: match order {
                    Order::Sequential => SensationOrder::Sequential,
                    Order::Random => SensationOrder::Random,
                },
                seed,
            })?;
            fs::create_dir_all(&out)?;
            fs::write(
                out.join("dataset.json"),
                serde_json::to_string_pretty(&g.dataset).unwrap() + "\n",
            )?;
            fs::write(out.join("store.jsonl"), harness::write_trace(&g.store_trace))?;
            fs::write(out.join("infer.jsonl"), harness::write_trace(&g.infer_trace))?;
            let config = ConfigFile {
                layout,
                capacity: g.store_trace.len(),
                grid: Some(grid),
                khot_features: false,
            };
            fs::write(out.join("config.toml"), config.to_toml())?;
            eprintln!(
                "wrote {} objects, {} store and {} infer records to {}",
                g.dataset.objects.len(),
                g.store_trace.len(),
                g.infer_trace.len(),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            device: d,
            trace,
            image,
            padding,
            trace_cycles,
            out,
        } => {
            let config = device(&d)?;
            let records = harness::parse_trace(&read(&trace)?)?;
            let mut system = System::new(config).map_err(|e| HarnessError::Config(e.to_string()))?;
            load_image(&mut system, image.as_deref())?;
            let report = harness::run_trace(&mut system, &records, padding, |c| {
                if trace_cycles {
                    eprintln!("{}", harness::cycle_line(c));
                }
            });
            let text = report.to_jsonl();
            match out {
                Some(path) => fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(if report.has_input_errors() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Diff {
            device: d,
            trace,
            image,
            ops,
            seed,
            padding,
        } => {
            let config = device(&d)?;
            let (records, default_padding) = match &trace {
                Some(path) => (harness::parse_trace(&read(path)?)?, padding),
                None => (harness::fuzz_trace(&config, ops, seed, padding), 0),
            };
            let mut system = System::new(config).map_err(|e| HarnessError::Config(e.to_string()))?;
            load_image(&mut system, image.as_deref())?;
            let oracle = harness::oracle_from_memory(system.memory(), &config);
            let report = Differ::from_parts(system, oracle, default_padding).run(&records);
            println!("{}", serde_json::to_string(&report).unwrap());
            Ok(if report.divergence.is_some() {
                ExitCode::from(2)
            } else if report.input_errors > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Bench {
            device: d,
            mix,
            iterations,
            sizes,
            seed,
        } => {
            let config = device(&d)?;
            let mix = match mix {
                Mix::Lookup => BenchMix::Lookup,
                Mix::Infer => BenchMix::Infer,
                Mix::Predict => BenchMix::Predict,
            };
            for row in harness::bench(&config, &sizes, mix, iterations, seed) {
                println!("{}", serde_json::to_string(&row).unwrap());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

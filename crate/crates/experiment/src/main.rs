use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gns_experiment::{
    exit, parse_config, run_diagnose, run_scenario, scenario, selftest, ScenarioConfig,
    ScenarioError, OUTPUT_ROOT_ENV,
};

#[derive(Parser)]
#[command(name = "gns", version, about = "Generalized Navier-Stokes analyticity experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a scenario and write its artifacts.
    Solve {
        config: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Run the diagnostics on a checkpointed trajectory.
    Diagnose {
        trajectory_manifest: PathBuf,
        config: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Regenerate plot series and print a summary for a run directory.
    Report { artifacts_dir: PathBuf },
    /// Run the built-in invariant checks.
    Selftest {
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Args)]
struct RunFlags {
    /// Override `data.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Override `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Root that relative output directories are placed under.
    #[arg(long, env = OUTPUT_ROOT_ENV)]
    output_root: Option<PathBuf>,
}

fn load(path: &PathBuf, flags: &RunFlags) -> Result<ScenarioConfig, ScenarioError> {
    let mut cfg = parse_config(path)?;
    if let Some(seed) = flags.seed {
        cfg.data.seed = seed;
    }
    if let Some(out) = &flags.out {
        cfg.output.dir = out.clone();
    }
    if let Some(root) = &flags.output_root {
        if cfg.output.dir.is_relative() {
            cfg.output.dir = root.join(&cfg.output.dir);
        }
    }
    Ok(cfg)
}

fn threaded<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(t) => gns_core::par::with_threads(t, f),
        None => f(),
    }
}

fn run(cli: Cli) -> Result<i32, ScenarioError> {
    match cli.command {
        Command::Solve { config, run } => {
            let cfg = load(&config, &run)?;
            let art = threaded(run.threads, || run_scenario(&cfg))?;
            report_run(&art);
            Ok(art.exit_code())
        }
        Command::Diagnose {
            trajectory_manifest,
            config,
            run,
        } => {
            let cfg = load(&config, &run)?;
            let art = threaded(run.threads, || run_diagnose(&trajectory_manifest, &cfg))?;
            report_run(&art);
            Ok(art.exit_code())
        }
        Command::Report { artifacts_dir } => {
            print!("{}", scenario::report_dir(&artifacts_dir)?);
            Ok(exit::OK)
        }
        Command::Selftest { threads } => {
            let checks = threaded(threads, selftest::run);
            let mut ok = true;
            for c in &checks {
                let tag = if c.passed() { "PASS" } else { "FAIL" };
                println!("{tag} {:<22} {:.3e} (tol {:.0e})", c.name, c.value, c.tol);
                ok &= c.passed();
            }
            Ok(if ok { exit::OK } else { exit::IO })
        }
    }
}

fn report_run(art: &gns_experiment::RunArtifacts) {
    println!("{} -> {}", art.manifest.command, art.dir.display());
    println!("status {:?}, config {}", art.manifest.status, art.manifest.config_hash);
    for e in &art.manifest.errors {
        eprintln!("error: {e}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

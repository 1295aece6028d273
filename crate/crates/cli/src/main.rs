use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use qshi_cli::config::RunConfig;
use qshi_cli::{load_config, output_path, run, selfcheck, sweep, CliError};
use qshi_core::protocol::{CorrectionMode, CONSTRAINT_TOL};

#[derive(Parser)]
#[command(
    name = "qshi-teleport",
    version,
    about = "Teleportation between two QSHI rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory for report files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    /// Overrides the config seed (selfcheck default 42).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Overrides the config correction mode.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Tolerance for constraint checks, or for every suite in selfcheck.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the protocol once and write `<stem>_run.json`.
    Run { config: PathBuf },
    /// Sweep one parameter and write `<stem>_sweep.csv`.
    Sweep { config: PathBuf },
    /// Run the built-in invariant suites.
    Selfcheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Constraint,
    Unitary,
}

impl From<ModeArg> for CorrectionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Constraint => CorrectionMode::Constraint,
            ModeArg::Unitary => CorrectionMode::Unitary,
        }
    }
}

fn load(cli: &Cli, path: &Path) -> Result<RunConfig, CliError> {
    let mut config = load_config(path)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(mode) = cli.mode {
        config.mode = mode.into();
    }
    Ok(config)
}

fn cmd_run(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let config = load(cli, path)?;
    let report = run::execute(&config, cli.tol.unwrap_or(CONSTRAINT_TOL))?;
    let json = run::report_json(&config, &report)?;
    let out = output_path(&cli.out_dir, path, "run.json");
    qshi_cli::write_file(&out, &json)?;
    print!(
        "{}",
        run::summary_table(&report, run::sampled_counts(&config, &report))
    );
    println!("mode {}, report {}", report.mode.as_str(), out.display());
    Ok(())
}

fn cmd_sweep(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let config = load(cli, path)?;
    let spec = config
        .sweep
        .clone()
        .ok_or_else(|| CliError::Validation("config has no sweep section".into()))?;
    let rows = sweep::sweep_rows(&config, cli.tol.unwrap_or(CONSTRAINT_TOL))?;
    let out = output_path(&cli.out_dir, path, "sweep.csv");
    qshi_cli::write_file(&out, &sweep::to_csv(&spec.param, &rows))?;
    println!(
        "{} points, {} rows, csv {}",
        spec.steps,
        rows.len(),
        out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config } => cmd_run(&cli, config),
        Command::Sweep { config } => cmd_sweep(&cli, config),
        Command::Selfcheck => {
            let seed = cli.seed.unwrap_or(selfcheck::DEFAULT_SEED);
            let results = selfcheck::run_suites(seed, cli.tol);
            print!("{}", selfcheck::format_results(seed, &results));
            if results.iter().all(|r| r.passed()) {
                Ok(())
            } else {
                return ExitCode::from(1);
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qshi-teleport: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

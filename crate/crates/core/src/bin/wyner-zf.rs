use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wyner_zf::cli::{self, CliError, Command, ExperimentSpec};
use wyner_zf::model::{db_to_linear, SystemConfig};

#[derive(Parser)]
#[command(version, about = "Zero-forcing beamforming and scheduling on a linear cell array")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Mean scheduled SINR per policy: closed forms and Monte Carlo
    SinrTable(Common),
    /// Sum-rate of SCN, ZF and SCP against the number of users
    RateVsUsers(Common),
    /// Sum-rate at the matched loads n, n(1+beta^2), n(1+beta^2 rho ln n)
    MatchedLoad(Common),
    /// Check the mean-SINR and rate inequalities over a parameter grid
    VerifyBounds {
        #[command(flatten)]
        common: Common,
        /// Comma-separated beta values to sweep
        #[arg(long, default_value = "0.25,0.5,1")]
        betas: String,
        /// Comma-separated SNR values in dB to sweep
        #[arg(long, default_value = "0,10")]
        rhos_db: String,
    },
    /// End-to-end audit of the zero-forcing precoder
    VerifyZf(Common),
    /// Kolmogorov-Smirnov tests of the scheduled SINR laws
    KsSuite(Common),
}

#[derive(Args)]
struct Common {
    /// Cross-cell gain
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// SNR in dB
    #[arg(long, default_value_t = 10.0)]
    rho_db: f64,
    /// User grid: comma list or start:stop:step
    #[arg(long)]
    users: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Cells in the simulated window
    #[arg(long, default_value_t = 16)]
    cells: usize,
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn build(command: Command, common: Common) -> Result<ExperimentSpec, CliError> {
    let config = SystemConfig::default()
        .with_beta(common.beta)
        .with_rho(db_to_linear(common.rho_db))
        .with_seed(common.seed)
        .with_cells(common.cells);
    let mut spec = ExperimentSpec::new(command, config);
    if let Some(users) = &common.users {
        spec.n_grid = cli::parse_users(users)?;
    }
    spec.trials = common.trials;
    spec.output_path = common.out;
    Ok(spec)
}

fn spec_from(cmd: Cmd) -> Result<ExperimentSpec, CliError> {
    match cmd {
        Cmd::SinrTable(c) => build(Command::SinrTable, c),
        Cmd::RateVsUsers(c) => build(Command::RateVsUsers, c),
        Cmd::MatchedLoad(c) => build(Command::MatchedLoad, c),
        Cmd::VerifyBounds { common, betas, rhos_db } => {
            let mut spec = build(Command::VerifyBounds, common)?;
            spec.betas = cli::parse_floats(&betas)?;
            spec.rhos = cli::parse_floats(&rhos_db)?.into_iter().map(db_to_linear).collect();
            Ok(spec)
        }
        Cmd::VerifyZf(c) => build(Command::VerifyZf, c),
        Cmd::KsSuite(c) => build(Command::KsSuite, c),
    }
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = spec_from(args.command).and_then(|spec| cli::run_and_write(&spec));
    match result {
        Ok(report) if report.passed => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

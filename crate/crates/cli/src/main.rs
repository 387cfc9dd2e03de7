mod compute;
mod gen;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qbet_core::order::{Order, RiskParam};
use qbet_core::verify::{run_suite, Suite, VerifyConfig};
use qbet_core::Error;

use crate::io::{Emit, Format, Sink};

#[derive(Parser, Debug)]
#[command(name = "qbet", version, about = "Risk-averse quantum betting games and Renyi information measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Order alpha: a number, inf or -inf. Repeatable.
    #[arg(long = "alpha", global = true, allow_hyphen_values = true, conflicts_with = "risks")]
    pub alphas: Vec<Order>,
    /// Risk parameter R; alpha is taken as 1/R. Repeatable.
    #[arg(long = "risk", global = true, allow_hyphen_values = true)]
    pub risks: Vec<RiskParam>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Overrides every tolerance of a verification suite.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl RunArgs {
    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| CliError::Input("this command is randomised and needs --seed".into()))
    }

    /// Orders from `--alpha`, or `1/R` for each `--risk`.
    pub fn orders(&self) -> Result<Vec<Order>, CliError> {
        if !self.alphas.is_empty() {
            return Ok(self.alphas.clone());
        }
        self.risks.iter().map(|r| Ok(r.order())).collect()
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one quantity.
    Compute(compute::ComputeArgs),
    /// Run a verification suite; exit code 1 when any check fails.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
    /// Emit a figure-style table.
    Sweep(SweepArgs),
    /// Emit a seeded random instance as JSON.
    Gen(gen::GenArgs),
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(value_enum)]
    curve: Curve,
    #[arg(long, default_value_t = 1.0)]
    w_min: f64,
    #[arg(long, default_value_t = 3.0)]
    w_max: f64,
    #[arg(long, default_value_t = 65)]
    points: usize,
    /// Odds magnitude of the order sweeps.
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Ensemble JSON (inline or a path) for the order sweeps; random when absent.
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    povm: Option<String>,
    /// Gap instance JSON for gap-vs-alpha; random when absent.
    #[arg(long)]
    instance: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Curve {
    IsoelasticUtility,
    IceVsAlpha,
    GapVsAlpha,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(Error),
    Io(std::io::Error),
    VerificationFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Core(e) if e.is_input_error() => 2,
            CliError::Core(_) => 3,
        }
    }

    fn report(&self) -> String {
        match self {
            CliError::Input(m) => format!("input error: {m}"),
            CliError::Io(e) => format!("io error: {e}"),
            CliError::VerificationFailed => "verification failed".into(),
            CliError::Core(Error::OptimizerDidNotConverge {
                iterations,
                best_value,
                best_point,
            }) => serde_json::json!({
                "error": "optimizer did not converge",
                "iterations": iterations,
                "best_value": best_value,
                "best_point": best_point,
            })
            .to_string(),
            CliError::Core(e) => format!("error: {e}"),
        }
    }
}

fn verify(suite: Suite, run: &RunArgs, sink: &mut Sink) -> Result<(), CliError> {
    let cfg = VerifyConfig {
        seed: run.seed()?,
        trials: run.trials.unwrap_or(10),
        tol: run.tol,
    };
    let reports = run_suite(suite, &cfg);
    let pass = reports.iter().all(|r| r.pass);
    match sink.format(Format::Json) {
        Format::Json => sink.json(&reports)?,
        Format::Csv => {
            let mut rows = Vec::new();
            for r in &reports {
                for c in &r.results {
                    rows.push(vec![
                        r.suite.clone(),
                        c.name.clone(),
                        c.instance.to_string(),
                        c.alpha.map(|a| a.to_string()).unwrap_or_default(),
                        c.lhs.to_string(),
                        c.rhs.to_string(),
                        c.abs_err.to_string(),
                        c.tol.to_string(),
                        c.pass.to_string(),
                        c.seed.to_string(),
                    ]);
                }
            }
            let header = ["suite", "check", "instance", "alpha", "lhs", "rhs", "abs_err", "tol", "pass", "seed"];
            sink.csv(&header, &rows)?;
        }
    }
    if pass {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}

fn sweep(args: &SweepArgs, run: &RunArgs, sink: &mut Sink) -> Result<(), CliError> {
    use qbet_core::sweep::*;
    let alphas: Vec<f64> = if run.alphas.is_empty() && run.risks.is_empty() {
        ALPHA_GRID.to_vec()
    } else {
        run.orders()?.iter().map(|a| a.value()).collect()
    };
    let table = match args.curve {
        Curve::IsoelasticUtility => {
            let risks: Vec<f64> = if run.risks.is_empty() {
                UTILITY_RISKS.to_vec()
            } else {
                run.risks.iter().map(|r| r.value()).collect()
            };
            isoelastic_sweep(&risks, args.w_min, args.w_max, args.points)?
        }
        Curve::IceVsAlpha => {
            let (e, m) = match (&args.ensemble, &args.povm) {
                (Some(e), Some(m)) => (io::load(e)?, io::load(m)?),
                (None, None) => {
                    let (e, m, _) = qbet_core::random_instance(run.seed()?, args.dim, Default::default())?;
                    (e, m)
                }
                _ => return Err(CliError::Input("give both --ensemble and --povm, or neither".into())),
            };
            ice_vs_alpha(&e, &m, &alphas, args.c)?
        }
        Curve::GapVsAlpha => {
            let inst = match &args.instance {
                Some(s) => io::load(s)?,
                None => gen::random_gap_instance(run.seed()?, args.dim)?,
            };
            let opts = qbet_core::povm_opt::AscentOptions {
                seed: run.seed.unwrap_or(0),
                ..Default::default()
            };
            gap_vs_alpha(&inst, &alphas, &opts)?
        }
    };
    match sink.format(Format::Csv) {
        Format::Json => sink.json(&table)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| r.iter().map(|v| io::number(*v)).collect())
                .collect();
            let header: Vec<&str> = table.columns.iter().map(|s| s.as_str()).collect();
            sink.csv(&header, &rows)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut sink = Sink::new(cli.run.out.clone(), cli.run.format);
    match &cli.command {
        Command::Compute(args) => compute::run(args, &cli.run, &mut sink),
        Command::Verify { suite } => verify(*suite, &cli.run, &mut sink),
        Command::Sweep(args) => sweep(args, &cli.run, &mut sink),
        Command::Gen(args) => gen::run(args, &cli.run, &mut sink),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.exit_code())
        }
    }
}

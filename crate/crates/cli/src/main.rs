//! `jspec`: joint spectra of Lie algebra representations from JSON input.
//!
//! Exit codes: 0 success, 1 domain failure, 2 input failure.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use joint_spectra::numeric::{Backend, Settings};
use joint_spectra::Error;

#[derive(Parser)]
#[command(name = "jspec", version, about = "Joint spectra of finite-dimensional Lie algebra representations")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct GlobalArgs {
    /// Arithmetic backend.
    #[arg(long, global = true, default_value = "exact", value_parser = parse_backend)]
    pub backend: Backend,
    /// Relative rank tolerance (float backend only).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for commands that draw random instances.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Allow the eigencharacter route on algebras that are not nilpotent.
    #[arg(long, global = true)]
    pub override_nilpotency: bool,
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse()
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Homology,
    Eigencharacter,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Jacobi identity and the homomorphism law.
    Validate { input: PathBuf },
    /// Structure of the algebra: series, center, Jordan-Hölder chain.
    Info { input: PathBuf },
    /// Dimensions, ranks and Betti numbers of the Koszul complex of ρ − f.
    Koszul {
        input: PathBuf,
        /// Comma-separated coefficients of f (default 0).
        #[arg(long)]
        character: Option<String>,
    },
    /// One joint spectrum.
    Spectrum {
        input: PathBuf,
        /// taylor, delta:K, pi:K, split, split_delta:K, split_pi:K, fredholm,
        /// delta_e:K, pi_e:K, split_e, split_delta_e:K, split_pi_e:K.
        #[arg(long, default_value = "taylor")]
        kind: String,
        #[arg(long, value_enum, default_value_t = RouteArg::Homology)]
        route: RouteArg,
    },
    /// Joint eigencharacters with witness vectors.
    Eigenchars { input: PathBuf },
    /// Compare the homology and eigencharacter routes.
    Crossval { input: PathBuf },
    /// Projection property on the ideals of the Jordan-Hölder chain.
    Project {
        input: PathBuf,
        #[arg(long, default_value = "taylor")]
        kind: String,
    },
    /// Everything at once.
    Report { input: PathBuf },
    /// Experiments.
    #[command(subcommand)]
    Lab(LabCommand),
}

#[derive(Subcommand)]
enum LabCommand {
    /// Finite-rank proxy table as CSV.
    Proxy {
        #[arg(long)]
        config: PathBuf,
        /// Fill the elapsed_ms column (makes the output timing dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Property suite over the catalog and seeded random instances.
    Suite {
        #[arg(long, default_value_t = 100)]
        seeds: u64,
    },
}

/// Either a report to print with a success flag, or an error.
pub struct Outcome {
    pub body: String,
    pub ok: bool,
}

fn settings(global: &GlobalArgs) -> Result<Settings, Error> {
    let mut s = Settings::default();
    if let Some(tol) = global.tol {
        if global.backend != Backend::Float {
            return Err(Error::Input { path: "--tol".into(), message: "tolerances apply to the float backend only".into() });
        }
        if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
            return Err(Error::Input { path: "--tol".into(), message: "expected a value in (0, 1)".into() });
        }
        s.tol.rank = tol;
    }
    Ok(s)
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let g = &cli.global;
    let s = settings(g)?;
    match cli.command {
        Command::Validate { input } => commands::validate(g, &input, &s),
        Command::Info { input } => commands::info(g, &input),
        Command::Koszul { input, character } => commands::koszul(g, &input, character.as_deref(), &s),
        Command::Spectrum { input, kind, route } => commands::spectrum(g, &input, &kind, route, &s),
        Command::Eigenchars { input } => commands::eigenchars(g, &input, &s),
        Command::Crossval { input } => commands::crossval(g, &input, &s),
        Command::Project { input, kind } => commands::project(g, &input, &kind, &s),
        Command::Report { input } => commands::report(g, &input, &s),
        Command::Lab(LabCommand::Proxy { config, timing }) => commands::lab_proxy(g, &config, timing, &s),
        Command::Lab(LabCommand::Suite { seeds }) => commands::lab_suite(g, seeds, &s),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.body);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}

//! `solitonlab`: verify curvature, contact-structure, and soliton identities
//! on declared Riemannian charts.
//!
//! Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage or
//! input error.

mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use solitonlab_core::{Report, Result};

#[derive(Parser)]
#[command(name = "solitonlab", version, about)]
struct Cli {
    /// Sample seed; deterministic reports per seed.
    #[arg(long, global = true, env = "SOLITONLAB_SEED", default_value_t = 42)]
    seed: u64,
    /// Sample points per check suite.
    #[arg(long, global = true, default_value_t = 60)]
    points: usize,
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify identities on a manifold file.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Audit a theorem's hypotheses and conclusions numerically.
    Audit {
        file: PathBuf,
        /// One of: 3.2, 3.3, 3.5, 4.2, 4.3
        #[arg(long)]
        theorem: String,
    },
    /// Built-in reference manifolds.
    Zoo {
        #[command(subcommand)]
        what: ZooCmd,
    },
    /// Re-render a saved JSON report.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Almost-contact axioms, defining equations, and tensor identities.
    Structure { file: PathBuf },
    /// Soliton residual at a given or fitted constant.
    Soliton {
        file: PathBuf,
        #[command(flatten)]
        opts: SolitonOpts,
    },
}

#[derive(Args)]
struct SolitonOpts {
    /// Evaluate at this soliton constant (default: least-squares fit).
    #[arg(long, conflicts_with = "fit")]
    lambda: Option<f64>,
    /// Fit the soliton constant (the default when --lambda is absent).
    #[arg(long)]
    fit: bool,
    /// Use the declared potential function (gradient form) instead of the
    /// potential vector field.
    #[arg(long)]
    gradient: bool,
}

#[derive(Subcommand)]
enum ZooCmd {
    /// List built-in manifolds.
    List,
    /// Run the full verification suite on a built-in manifold.
    Run {
        name: String,
        /// Evaluate the soliton residual at this constant instead of fitting.
        #[arg(long)]
        lambda: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let (seed, npts) = (cli.seed, cli.points);
    match &cli.cmd {
        Cmd::Check { what } => match what {
            CheckCmd::Structure { file } => {
                let m = run::load(file)?;
                let checks = run::structure_checks(&m, seed, npts)?;
                Ok(Report::new(m.name.clone(), seed, checks))
            }
            CheckCmd::Soliton { file, opts } => {
                let m = run::load(file)?;
                let pot = run::select_potential(&m, opts.gradient)?;
                let lambda = if opts.fit { None } else { opts.lambda };
                let checks = run::soliton_checks(&m, &pot, lambda, seed, npts)?;
                Ok(Report::new(m.name.clone(), seed, checks))
            }
        },
        Cmd::Audit { file, theorem } => {
            let m = run::load(file)?;
            let checks = run::audit_checks(&m, theorem, seed, npts)?;
            Ok(Report::new(
                format!("{} (theorem {theorem})", m.name),
                seed,
                checks,
            ))
        }
        Cmd::Zoo { what } => match what {
            ZooCmd::List => {
                let checks = solitonlab_core::zoo::entries()
                    .into_iter()
                    .map(|z| {
                        solitonlab_core::Check::new(z.name, 0.0, f64::INFINITY)
                            .with_note(z.note)
                    })
                    .collect();
                Ok(Report::new("zoo", seed, checks))
            }
            ZooCmd::Run { name, lambda } => run::zoo_checks(name, *lambda, seed, npts),
        },
        Cmd::Report { file, format } => {
            let text = std::fs::read_to_string(file)?;
            let report = Report::from_json(&text)?;
            // re-render only; never re-evaluate
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            std::process::exit(if report.passed { 0 } else { 1 });
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use aqg::run::{self, RunError, EXIT_CONFIG, EXIT_OK};
use aqg::RunConfig;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "aqg", version, about = "Anisotropic quasi-geostrophic solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration (TOML); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, overriding `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the initial data and the lemma ensembles.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Time-march the equation and write the diagnostics trace.
    Simulate(Common),
    /// Existence times and plain/weighted Picard iteration.
    Picard(Common),
    /// Run the scalar and functional inequality suites.
    Lemmas(Common),
    /// Region labels, existence times and short runs over an (alpha, beta) lattice.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Worker threads.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Decay-rate fits and weighted norms for the checkpoints of a run.
    Gevrey {
        /// Directory written by `simulate`.
        #[arg(long)]
        run: PathBuf,
        /// Output directory; defaults to the run directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(c: &Common) -> Result<RunConfig, RunError> {
    let mut cfg = match &c.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply_overrides(c.seed, c.out.as_deref());
    Ok(cfg)
}

fn dispatch(command: Command) -> Result<i32, RunError> {
    match command {
        Command::Simulate(c) => {
            let o = run::run_simulate(&load(&c)?)?;
            if let Some(a) = &o.result.abort {
                eprintln!("solver aborted: {}", run::abort_message(a));
            }
            println!(
                "simulate: t = {} after {} steps, trace in {}",
                o.result.time,
                o.result.accepted_steps,
                o.dir.display()
            );
            Ok(o.exit_code())
        }
        Command::Picard(c) => {
            let o = run::run_picard(&load(&c)?)?;
            println!("picard: T0 = {}", o.t0.time);
            if let Some(t1) = o.t1 {
                println!("picard: T1 = {}", t1.time);
            }
            for (name, r) in [("plain", &o.plain), ("weighted", &o.weighted)] {
                if let Some(r) = r {
                    println!(
                        "picard: {name} converged = {}, iterations = {}",
                        r.converged, r.iterations
                    );
                }
            }
            Ok(o.exit_code())
        }
        Command::Lemmas(c) => {
            let o = run::run_lemmas(&load(&c)?)?;
            for r in o.reports() {
                for v in &r.violations {
                    eprintln!(
                        "violation {}: seed {} index {} ratio {} ({})",
                        r.id, v.seed, v.index, v.ratio, v.detail
                    );
                }
            }
            println!(
                "lemmas: {} reports, {} violations, report in {}",
                o.reports().count(),
                o.violations(),
                o.dir.display()
            );
            Ok(o.exit_code())
        }
        Command::Sweep { common, threads } => {
            let o = run::run_sweep(&load(&common)?, threads)?;
            for r in o.rows.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "sweep point ({}, {}) failed: {}",
                    r.alpha,
                    r.beta,
                    r.error.as_deref().unwrap_or_default()
                );
            }
            println!(
                "sweep: {} points, {} failed, table in {}",
                o.rows.len(),
                o.failures(),
                o.dir.display()
            );
            Ok(o.exit_code())
        }
        Command::Gevrey { run, out } => {
            let o = run::run_gevrey(&run, out.as_deref())?;
            println!(
                "gevrey: {} snapshots, table in {}",
                o.rows.len(),
                o.dir.display()
            );
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

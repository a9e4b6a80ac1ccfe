use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyperchain::analysis::{MapFamily, Outcome};
use hyperchain_cli::report::AnalysisReport;
use hyperchain_cli::run::{self, CliError, VerifyArgs};
use hyperchain_cli::spec::load_spec;

#[derive(Parser)]
#[command(
    name = "hyperchain",
    version,
    about = "Chain properties of finite uniform dynamical systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Tables,
    Builtins,
    Mixed,
}

impl From<Family> for MapFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Tables => MapFamily::Tables,
            Family::Builtins => MapFamily::Builtins,
            Family::Mixed => MapFamily::Mixed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyse the system described by a TOML or JSON spec.
    Analyze {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the randomised lemma suite.
    Verify {
        /// Comma-separated lemma ids, or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        max_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "mixed")]
        family: Family,
        /// Replay one trial from its recorded seed and print its record.
        #[arg(long, value_name = "TRIAL_SEED")]
        replay: Option<u64>,
    },
    /// Re-validate every witness and counterexample in a report.
    CheckReport { path: PathBuf },
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Tables => "tables",
        Family::Builtins => "builtins",
        Family::Mixed => "mixed",
    }
}

fn write_out(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)?;
    Ok(())
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Analyze { spec, out, seed } => {
            let spec = load_spec(&spec)?;
            let report = run::run_analyze(&spec, seed)?;
            write_out(&out, &report.to_json())?;
            for block in &report.per_epsilon {
                for r in &block.results {
                    println!("eps={} {}={}", block.epsilon, r.property, r.verdict);
                }
            }
            Ok(0)
        }
        Command::Verify {
            suite,
            trials,
            seed,
            max_points,
            out,
            family,
            replay,
        } => {
            if let Some(trial_seed) = replay {
                print!("{}", run::replay(&suite, trial_seed, max_points, family.into())?);
                return Ok(0);
            }
            let report = run::run_verify(&VerifyArgs {
                suite,
                trials,
                seed,
                max_points,
                family: family.into(),
            })?;
            let suite = report.lemma_suite.as_ref().expect("verify fills the suite");
            for s in &suite.summaries {
                println!(
                    "{:<8} {:<5} trials={} passed={} vacuous={} violations={} alternative_failures={}",
                    s.lemma, s.status, s.trials, s.passed, s.vacuous, s.violations, s.alternative_failures
                );
            }
            for r in suite
                .records
                .iter()
                .filter(|r| matches!(r.outcome, Outcome::Violation | Outcome::ProbeViolation))
            {
                println!(
                    "violation {} trial={} seed={} replay: hyperchain verify --suite {} --trials 1 --seed 0 --max-points {} --family {} --replay {}",
                    r.lemma, r.trial, r.seed, r.lemma, max_points, family_name(family), r.seed
                );
                println!("  {}", r.instance);
                if !r.detail.is_empty() {
                    println!("  {}", r.detail);
                }
            }
            let json = report.to_json();
            match out {
                Some(path) => write_out(&path, &json)?,
                None => print!("{json}"),
            }
            Ok(if suite.hard_violation { 2 } else { 0 })
        }
        Command::CheckReport { path } => {
            let text = std::fs::read_to_string(&path)?;
            let report =
                AnalysisReport::from_json(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
            let outcome = run::check_report(&report)?;
            for line in &outcome.lines {
                println!("{line}");
            }
            if outcome.ok {
                println!("report ok");
                Ok(0)
            } else {
                println!("report rejected");
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! Subcommand bodies.

use hyperchain::analysis::lemmas::{run_batch, run_trial, BatchReport, BatchSpec, LemmaId};
use hyperchain::analysis::{self as an, check_result, rebuild_graph, ChainPropertyResult, MapFamily};
use hyperchain::{Entourage, MapSystem, Scalar, DEFAULT_VERTEX_BUDGET};

use crate::report::{AnalysisReport, EpsilonResults, LemmaSuiteReport, SCHEMA_VERSION};
use crate::spec::{SpecError, SystemSpec};

/// Overrides every vertex budget when set.
pub const BUDGET_ENV: &str = "HYPERCHAIN_BUDGET";

pub const DEFAULT_N_MAX: usize = 6;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("spec error at {0}")]
    Spec(#[from] SpecError),
    #[error("{context}: {source}")]
    Analysis { context: String, source: hyperchain::Error },
    #[error("{0}")]
    Invalid(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Exit code: 1 for every error; 2 is reserved for lemma violations.
    pub fn exit_code(&self) -> i32 {
        1
    }
}

/// The vertex budget: environment variable, then the spec file, then the default.
pub fn resolve_budget(spec_budget: Option<usize>) -> Result<usize, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Invalid(format!("{BUDGET_ENV}=`{v}` is not a non-negative integer"))),
        Err(_) => Ok(spec_budget.unwrap_or(DEFAULT_VERTEX_BUDGET)),
    }
}

fn analysis_err(context: String) -> impl FnOnce(hyperchain::Error) -> CliError {
    move |source| CliError::Analysis { context, source }
}

pub fn run_analyze(spec: &SystemSpec, seed: u64) -> Result<AnalysisReport, CliError> {
    spec.validate()?;
    let budget = resolve_budget(spec.budget.vertices)?;
    let mut report = AnalysisReport::new("analyze", seed, budget);
    report.per_epsilon = if spec.uses_f64() {
        analyze_typed::<f64>(spec, budget)?
    } else {
        analyze_typed::<hyperchain::Exact>(spec, budget)?
    };
    report.spec = Some(spec.clone());
    Ok(report)
}

fn analyze_typed<T: Scalar>(spec: &SystemSpec, budget: usize) -> Result<Vec<EpsilonResults>, CliError> {
    let (system, epsilons) = spec.build::<T>()?;
    let mut out = Vec::new();
    for eps in epsilons {
        let e = Entourage::metric(system.carrier(), eps.clone()).map_err(analysis_err(format!("epsilon {eps}")))?;
        let mut results = Vec::new();
        for name in &spec.analyses {
            let r = analyze_one(spec, &system, &e, name, budget)
                .map_err(analysis_err(format!("analysis `{name}` at epsilon {eps}")))?;
            results.push(r);
        }
        out.push(EpsilonResults {
            epsilon: an::epsilon_label(&e),
            results,
        });
    }
    Ok(out)
}

fn analyze_one<T: Scalar>(
    spec: &SystemSpec,
    system: &MapSystem<T>,
    e: &Entourage<T>,
    name: &str,
    budget: usize,
) -> hyperchain::Result<ChainPropertyResult> {
    let cap = spec.budget.exact_cap;
    match name {
        "transitive" => an::is_chain_transitive(system, e),
        "internal" => {
            let g = hyperchain::build_transition_graph(system, e)?;
            Ok(an::internal_on_graph(&g, an::GraphKind::Base).with_epsilon(an::epsilon_label(e)))
        }
        "mixing" => an::is_chain_mixing(system, e),
        "weak_mixing" => an::is_chain_weakly_mixing(system, e, budget),
        "totally_transitive" => an::is_totally_chain_transitive(system, e, spec.budget.n_max.unwrap_or(DEFAULT_N_MAX)),
        "exact" => match &spec.exact_u {
            Some(u) => an::is_exact_by_chains(system, e, u, cap),
            None => an::is_exact_from_every_point(system, e, cap),
        },
        "recurrent" => an::is_chain_recurrent(system, e),
        "hyper_transitive" => {
            an::is_hyper_transitive(system, e, spec.hyperspace_n.unwrap_or(2).min(system.len()), budget)
        }
        "product_transitive" => an::is_product_transitive(system, e, spec.product_n.unwrap_or(2), budget),
        other => unreachable!("validated analysis name {other}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyArgs {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub max_points: usize,
    pub family: MapFamily,
}

fn batch_spec(args: &VerifyArgs) -> Result<BatchSpec, CliError> {
    let lemmas = LemmaId::parse_list(&args.suite).map_err(|e| CliError::Invalid(e.to_string()))?;
    if args.trials == 0 {
        return Err(CliError::Invalid("trials must be >= 1".into()));
    }
    if args.max_points == 0 {
        return Err(CliError::Invalid("max-points must be >= 1".into()));
    }
    Ok(BatchSpec {
        lemmas,
        trials: args.trials,
        seed: args.seed,
        max_points: args.max_points,
        family: args.family,
    })
}

pub fn run_verify(args: &VerifyArgs) -> Result<AnalysisReport, CliError> {
    let spec = batch_spec(args)?;
    let batch = run_batch(&spec).map_err(analysis_err("verify".into()))?;
    let mut report = AnalysisReport::new("verify", args.seed, resolve_budget(None)?);
    report.lemma_suite = Some(suite_report(&spec, batch));
    Ok(report)
}

fn suite_report(spec: &BatchSpec, batch: BatchReport) -> LemmaSuiteReport {
    LemmaSuiteReport {
        suite: spec.lemmas.iter().map(|l| l.as_str().to_string()).collect(),
        trials: spec.trials,
        max_points: spec.max_points,
        family: spec.family,
        hard_violation: batch.hard_violation(),
        summaries: batch.summaries,
        records: batch.records,
    }
}

/// Re-runs a single trial from its seed.
pub fn replay(lemma: &str, seed: u64, max_points: usize, family: MapFamily) -> Result<String, CliError> {
    let id: LemmaId = lemma.parse().map_err(CliError::Invalid)?;
    let record = run_trial(id, seed, max_points, family).map_err(analysis_err(format!("replay {lemma}")))?;
    Ok(serde_json::to_string_pretty(&record).expect("records serialize") + "\n")
}

/// One line per checked item, and whether all of them passed.
pub struct CheckOutcome {
    pub lines: Vec<String>,
    pub ok: bool,
}

pub fn check_report(report: &AnalysisReport) -> Result<CheckOutcome, CliError> {
    if report.schema_version != SCHEMA_VERSION {
        return Err(CliError::Invalid(format!(
            "schema version {} is not supported (expected {SCHEMA_VERSION})",
            report.schema_version
        )));
    }
    match report.command.as_str() {
        "analyze" => {
            let spec = report
                .spec
                .as_ref()
                .ok_or_else(|| CliError::Invalid("analyze report without a spec".into()))?;
            spec.validate()?;
            if spec.uses_f64() {
                check_analyze::<f64>(spec, report)
            } else {
                check_analyze::<hyperchain::Exact>(spec, report)
            }
        }
        "verify" => check_verify(report),
        other => Err(CliError::Invalid(format!("unknown report command `{other}`"))),
    }
}

fn check_analyze<T: Scalar>(spec: &SystemSpec, report: &AnalysisReport) -> Result<CheckOutcome, CliError> {
    let (system, epsilons) = spec.build::<T>()?;
    if epsilons.len() != report.per_epsilon.len() {
        return Err(CliError::Invalid("report and spec list different epsilons".into()));
    }
    let mut lines = Vec::new();
    let mut ok = true;
    for (eps, block) in epsilons.into_iter().zip(&report.per_epsilon) {
        let e = Entourage::metric(system.carrier(), eps).map_err(analysis_err("epsilon".into()))?;
        if an::epsilon_label(&e) != block.epsilon {
            return Err(CliError::Invalid(format!(
                "epsilon {} does not match the spec file",
                block.epsilon
            )));
        }
        for r in &block.results {
            let outcome = check_result(r, |kind| rebuild_graph(&system, &e, kind, report.budget));
            let line = match &outcome {
                Ok(()) => format!("ok    {} eps={} verdict={}", r.property, r.epsilon, r.verdict),
                Err(msg) => format!("FAIL  {} eps={}: {msg}", r.property, r.epsilon),
            };
            ok &= outcome.is_ok();
            lines.push(line);
        }
    }
    Ok(CheckOutcome { lines, ok })
}

fn check_verify(report: &AnalysisReport) -> Result<CheckOutcome, CliError> {
    let suite = report
        .lemma_suite
        .as_ref()
        .ok_or_else(|| CliError::Invalid("verify report without a lemma suite".into()))?;
    let args = VerifyArgs {
        suite: suite.suite.join(","),
        trials: suite.trials,
        seed: report.seed,
        max_points: suite.max_points,
        family: suite.family,
    };
    let spec = batch_spec(&args)?;
    let rerun = suite_report(&spec, run_batch(&spec).map_err(analysis_err("verify".into()))?);
    let mut lines = Vec::new();
    let mut ok = true;
    for (stored, fresh) in suite.summaries.iter().zip(&rerun.summaries) {
        let same = stored == fresh;
        ok &= same;
        lines.push(if same {
            format!("ok    {} replayed {} trials", stored.lemma, stored.trials)
        } else {
            format!("FAIL  {} summary differs on replay", stored.lemma)
        });
    }
    if suite.records != rerun.records || suite.summaries.len() != rerun.summaries.len() {
        ok = false;
        lines.push("FAIL  trial records differ on replay".into());
    }
    Ok(CheckOutcome { lines, ok })
}

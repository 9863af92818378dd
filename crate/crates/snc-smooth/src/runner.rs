//! Checks, plans and chart runs behind the command-line front end.
//!
//! Every entry point is pure apart from the worker threads of
//! [`run_checks`]; output formatting lives next to the outcome types so the
//! binary only parses arguments and prints.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use snc_charts::suite::{run_suite, SuiteOptions, SuiteReport, DEFAULT_SEED};
use snc_core::blowup::{
    detect_mismatch, plan_blowups_to_trivialize, run_plan, BlowupPlan, CurveTotals,
    MismatchDiagnostic, PlanError,
};
use snc_core::report::{full_report, SmoothingReport};

use crate::registry::{self, RegistryError};
use crate::schema::{self, parse_scenario, Expected, Scenario, ScenarioError, StepDto};

/// Every expectation held.
pub const EXIT_OK: i32 = 0;
/// The input could not be read, parsed or resolved, or the plan could not run.
pub const EXIT_INPUT: i32 = 2;
/// The blow-up plan was rejected by mismatch detection.
pub const EXIT_MISMATCH: i32 = 3;
/// An expectation of the scenario failed.
pub const EXIT_ASSERTION: i32 = 4;
/// An identity of the chart suite failed.
pub const EXIT_CHARTS: i32 = 5;
/// The planner found no plan.
pub const EXIT_INFEASIBLE: i32 = 6;

/// Environment variable overriding the default chart seed.
pub const SEED_ENV: &str = "SNC_SMOOTH_SEED";

/// Output format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    /// Human-readable text.
    #[default]
    Text,
    /// Pretty-printed JSON.
    Json,
}

/// Failure to obtain a scenario from a command-line target.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    /// The file could not be read.
    #[error("cannot read {path}: {source}")]
    Io {
        /// Path.
        path: String,
        /// Cause.
        source: std::io::Error,
    },
    /// The file did not parse.
    #[error("{path}: {source}")]
    Scenario {
        /// Path.
        path: String,
        /// Cause.
        source: ScenarioError,
    },
    /// The name did not resolve.
    #[error(transparent)]
    Registry(#[from] RegistryError),
    /// Parameters were given for a file.
    #[error("--param applies to built-in families only, not to the file {0}")]
    ParamsForFile(String),
}

/// Whether a command-line target names a file rather than a built-in
/// scenario.
pub fn is_file_target(target: &str) -> bool {
    target.ends_with(".json") || Path::new(target).is_file()
}

/// Loads a scenario from a file path or the registry.
pub fn load_target(target: &str, params: &BTreeMap<String, i64>) -> Result<Scenario, LoadError> {
    if is_file_target(target) {
        if !params.is_empty() {
            return Err(LoadError::ParamsForFile(target.to_string()));
        }
        let text = std::fs::read_to_string(target).map_err(|source| LoadError::Io {
            path: target.to_string(),
            source,
        })?;
        return parse_scenario(&text).map_err(|source| LoadError::Scenario {
            path: target.to_string(),
            source,
        });
    }
    Ok(registry::resolve(target, params)?)
}

/// Parses `key=value` with an integer value.
pub fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    let value = v
        .trim()
        .parse::<i64>()
        .map_err(|_| format!("parameter {k} needs an integer value, got {v:?}"))?;
    Ok((k.trim().to_string(), value))
}

/// Point and incidence counts of a plan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanSummary {
    /// Number of steps.
    pub steps: usize,
    /// Number of centers.
    pub points: usize,
    /// Number of (center, blown-up side) pairs.
    pub incidences: usize,
    /// Totals per curve.
    pub by_curve: BTreeMap<String, CurveTotals>,
}

impl PlanSummary {
    /// Summarizes a plan.
    pub fn of(plan: &BlowupPlan) -> Self {
        Self {
            steps: plan.steps.len(),
            points: plan.total_points(),
            incidences: plan.total_incidences(),
            by_curve: plan.totals_by_curve(),
        }
    }
}

/// Verdict of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    /// Every expectation held.
    Passed,
    /// The plan was rejected by mismatch detection.
    Mismatch,
    /// An expectation failed.
    AssertionFailed,
    /// The plan could not be executed.
    Error,
}

/// Result of checking one scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    /// Scenario name.
    pub scenario: String,
    /// Verdict.
    pub status: CheckStatus,
    /// Process exit code for this scenario alone.
    pub exit_code: i32,
    /// The scenario's blow-up plan.
    pub plan: PlanSummary,
    /// Mismatch diagnostics of the plan.
    pub mismatches: Vec<MismatchDiagnostic>,
    /// Smoothing report of the surface after the plan.
    pub report: Option<SmoothingReport>,
    /// Expectations that did not hold.
    pub failed_expectations: Vec<String>,
    /// Why the plan could not run.
    pub error: Option<String>,
    /// Remarks carried by the scenario.
    pub scenario_notes: Vec<String>,
}

/// Compares a report with the scenario's expectations.
pub fn failed_expectations(expected: &Expected, report: &SmoothingReport) -> Vec<String> {
    let mut out = Vec::new();
    let mut cmp = |what: &str, want: String, got: String| {
        if want != got {
            out.push(format!("{what}: expected {want}, got {got}"));
        }
    };
    if let Some(w) = expected.structure_ok {
        cmp(
            "structure_ok",
            w.to_string(),
            report.structure_ok.to_string(),
        );
    }
    if let Some(w) = expected.anticanonical_ok {
        cmp(
            "anticanonical_ok",
            w.to_string(),
            report.anticanonical_ok.to_string(),
        );
    }
    if let Some(w) = expected.d_semistable {
        cmp(
            "d_semistable",
            format!("{:?}", Some(w)),
            format!("{:?}", report.d_semistable),
        );
    }
    if let Some(w) = expected.residue_ok {
        cmp(
            "residue_ok",
            format!("{:?}", Some(w)),
            format!("{:?}", report.residue_ok),
        );
    }
    if let Some(w) = expected.h0_dim {
        cmp(
            "h0_dim",
            format!("{:?}", Some(w)),
            format!("{:?}", report.h0_dim),
        );
    }
    if let Some(w) = expected.chi_fiber {
        cmp(
            "chi_fiber",
            format!("{:?}", Some(w)),
            format!("{:?}", report.chi_fiber),
        );
    }
    if let Some(w) = &expected.classification {
        cmp(
            "classification",
            w.clone(),
            report.classification.to_string(),
        );
    }
    if let Some(w) = &expected.collective_degrees {
        let got: BTreeMap<String, i64> = report
            .collective_classes
            .iter()
            .map(|c| (c.curve.clone(), c.class.degree))
            .collect();
        cmp("collective_degrees", format!("{w:?}"), format!("{got:?}"));
    }
    if let Some(w) = &expected.component_euler {
        let got: BTreeMap<String, i64> = report
            .component_euler
            .iter()
            .map(|c| (c.component.clone(), c.euler_char))
            .collect();
        cmp("component_euler", format!("{w:?}"), format!("{got:?}"));
    }
    out
}

fn mismatch_expectations(expected: &Expected, mismatches: &[MismatchDiagnostic]) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(w) = expected.mismatch {
        if w != !mismatches.is_empty() {
            out.push(format!(
                "mismatch: expected {w}, got {}",
                !mismatches.is_empty()
            ));
        }
    }
    if let Some(w) = &expected.mismatch_curves {
        let mut want = w.clone();
        want.sort();
        want.dedup();
        let mut got: Vec<String> = mismatches.iter().map(|m| m.curve.clone()).collect();
        got.sort();
        got.dedup();
        if want != got {
            out.push(format!("mismatch_curves: expected {want:?}, got {got:?}"));
        }
    }
    out
}

/// Executes the plan with mismatch detection, then the full report, and
/// compares with the expectations.
pub fn run_check(scenario: &Scenario) -> CheckOutcome {
    let mismatches = detect_mismatch(&scenario.surface, &scenario.plan);
    let mut outcome = CheckOutcome {
        scenario: scenario.name.clone(),
        status: CheckStatus::Passed,
        exit_code: EXIT_OK,
        plan: PlanSummary::of(&scenario.plan),
        failed_expectations: mismatch_expectations(&scenario.expected, &mismatches),
        mismatches,
        report: None,
        error: None,
        scenario_notes: scenario.notes.clone(),
    };
    if !outcome.mismatches.is_empty() {
        outcome.status = CheckStatus::Mismatch;
        outcome.exit_code = EXIT_MISMATCH;
        return outcome;
    }
    let blown = match run_plan(&scenario.surface, &scenario.plan) {
        Ok((s, _)) => s,
        Err(e) => {
            outcome.status = CheckStatus::Error;
            outcome.exit_code = EXIT_INPUT;
            outcome.error = Some(e.to_string());
            return outcome;
        }
    };
    let report = full_report(&blown, scenario.declared_b1);
    outcome
        .failed_expectations
        .extend(failed_expectations(&scenario.expected, &report));
    outcome.report = Some(report);
    if !outcome.failed_expectations.is_empty() {
        outcome.status = CheckStatus::AssertionFailed;
        outcome.exit_code = EXIT_ASSERTION;
    }
    outcome
}

/// Checks several scenarios on worker threads. Outcomes keep input order.
pub fn run_checks(scenarios: &[Scenario]) -> Vec<CheckOutcome> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios
            .iter()
            .map(|s| scope.spawn(move || run_check(s)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check worker panicked"))
            .collect()
    })
}

/// Exit code of a batch: the first nonzero code in input order.
pub fn combined_exit(codes: impl IntoIterator<Item = i32>) -> i32 {
    codes.into_iter().find(|&c| c != EXIT_OK).unwrap_or(EXIT_OK)
}

/// Result of the planner on a scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanOutcome {
    /// Scenario name.
    pub scenario: String,
    /// Process exit code.
    pub exit_code: i32,
    /// Steps of the plan found, in file format.
    pub steps: Vec<StepDto>,
    /// Counts of the plan found.
    pub summary: Option<PlanSummary>,
    /// Obstructing curve when infeasible.
    pub infeasible_curve: Option<String>,
    /// Error description.
    pub error: Option<String>,
}

/// Runs the scenario's own plan, then the planner on the result.
pub fn run_plan_cmd(scenario: &Scenario) -> PlanOutcome {
    let mut out = PlanOutcome {
        scenario: scenario.name.clone(),
        exit_code: EXIT_OK,
        steps: Vec::new(),
        summary: None,
        infeasible_curve: None,
        error: None,
    };
    let mismatches = detect_mismatch(&scenario.surface, &scenario.plan);
    if let Some(first) = mismatches.first() {
        out.exit_code = EXIT_MISMATCH;
        out.error = Some(format!("the scenario's own plan is rejected: {first}"));
        return out;
    }
    let surface = match run_plan(&scenario.surface, &scenario.plan) {
        Ok((s, _)) => s,
        Err(e) => {
            out.exit_code = EXIT_INPUT;
            out.error = Some(e.to_string());
            return out;
        }
    };
    match plan_blowups_to_trivialize(&surface) {
        Ok(plan) => {
            out.steps = schema::plan_to_dto(&plan);
            out.summary = Some(PlanSummary::of(&plan));
        }
        Err(PlanError::Infeasible { curve, reason }) => {
            out.exit_code = EXIT_INFEASIBLE;
            out.error = Some(format!("infeasible: {reason} on {curve}"));
            out.infeasible_curve = Some(curve);
        }
        Err(e) => {
            out.exit_code = EXIT_INFEASIBLE;
            out.error = Some(format!("infeasible: {e}"));
        }
    }
    out
}

/// Seed of a chart run: the flag, else the environment variable, else the
/// default.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_ENV} must be an unsigned integer, got {v:?}")),
        None => Ok(DEFAULT_SEED),
    }
}

/// Runs the chart suite and returns its report with the exit code.
pub fn run_charts(options: &SuiteOptions) -> (SuiteReport, i32) {
    let report = run_suite(options);
    let code = if report.passed { EXIT_OK } else { EXIT_CHARTS };
    (report, code)
}

/// Deterministic pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("outcomes serialize");
    s.push('\n');
    s
}

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    }
}

/// Text rendering of a check.
pub fn check_text(o: &CheckOutcome) -> String {
    let mut s = String::new();
    let verdict = match o.status {
        CheckStatus::Passed => "PASS",
        CheckStatus::Mismatch => "MISMATCH",
        CheckStatus::AssertionFailed => "FAIL",
        CheckStatus::Error => "ERROR",
    };
    let _ = writeln!(s, "{}: {verdict} (exit {})", o.scenario, o.exit_code);
    let _ = writeln!(
        s,
        "  plan: {} step(s), {} center(s), {} incidence(s)",
        o.plan.steps, o.plan.points, o.plan.incidences
    );
    for m in &o.mismatches {
        let _ = writeln!(s, "  mismatch: {m}");
    }
    if let Some(e) = &o.error {
        let _ = writeln!(s, "  error: {e}");
    }
    if let Some(r) = &o.report {
        let _ = writeln!(s, "  structure ok: {}", yes_no(Some(r.structure_ok)));
        for d in &r.structure_diagnostics {
            let _ = writeln!(s, "    {d}");
        }
        let _ = writeln!(s, "  anticanonical: {}", yes_no(Some(r.anticanonical_ok)));
        let classes: Vec<String> = r
            .collective_classes
            .iter()
            .map(|c| format!("{}={}", c.curve, c.class.degree))
            .collect();
        let _ = writeln!(s, "  collective degrees: {}", classes.join(" "));
        let _ = writeln!(s, "  d-semistable: {}", yes_no(r.d_semistable));
        let _ = writeln!(s, "  residues match: {}", yes_no(r.residue_ok));
        if let Some(h) = r.h0_dim {
            let _ = writeln!(s, "  h0(K): {h}");
        }
        let euler: Vec<String> = r
            .component_euler
            .iter()
            .map(|c| format!("{}={}", c.component, c.euler_char))
            .collect();
        let _ = writeln!(s, "  component euler: {}", euler.join(" "));
        if let Some(chi) = r.chi_fiber {
            let _ = writeln!(s, "  fiber euler: {chi}");
        }
        let _ = writeln!(s, "  classification: {}", r.classification);
        for n in &r.notes {
            let _ = writeln!(s, "  note: {n}");
        }
    }
    for f in &o.failed_expectations {
        let _ = writeln!(s, "  expectation failed: {f}");
    }
    s
}

/// Text rendering of a planner run.
pub fn plan_text(o: &PlanOutcome) -> String {
    let mut s = String::new();
    if let Some(e) = &o.error {
        let _ = writeln!(s, "{}: {e}", o.scenario);
        return s;
    }
    let summary = o
        .summary
        .as_ref()
        .expect("successful plans carry a summary");
    if summary.steps == 0 {
        let _ = writeln!(
            s,
            "{}: empty plan (every collective class is trivial)",
            o.scenario
        );
        return s;
    }
    let _ = writeln!(
        s,
        "{}: {} center(s), {} incidence(s)",
        o.scenario, summary.points, summary.incidences
    );
    for step in &o.steps {
        let mode = match (&step.component, step.side) {
            (None, _) => "both sides".to_string(),
            (Some(c), None) => format!("one side ({c})"),
            (Some(c), Some(k)) => format!("one side ({c}, side {k})"),
        };
        let _ = writeln!(
            s,
            "  {}: {} center(s), {mode}",
            step.curve,
            step.points.len()
        );
    }
    for (curve, t) in &summary.by_curve {
        let _ = writeln!(
            s,
            "  total {curve}: {} center(s), {} incidence(s)",
            t.points, t.incidences
        );
    }
    s
}

/// Text rendering of a chart run.
pub fn charts_text(r: &SuiteReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "chart identities: seed {}, {} sample(s) each",
        r.seed, r.samples
    );
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    for i in &r.identities {
        let _ = writeln!(
            s,
            "  {:<4} {:<24} max {:>10.3e}  tol {:.0e}{}",
            if i.passed { "ok" } else { "FAIL" },
            i.name,
            i.max_residual,
            i.tolerance,
            i.error
                .as_deref()
                .map(|e| format!("  ({e})"))
                .unwrap_or_default()
        );
    }
    let failed = r.identities.iter().filter(|i| !i.passed).count();
    let _ = writeln!(
        s,
        "{}",
        if failed == 0 {
            "all identities passed".to_string()
        } else {
            format!(
                "{failed} identit{} failed",
                if failed == 1 { "y" } else { "ies" }
            )
        }
    );
    s
}

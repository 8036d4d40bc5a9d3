//! Scenario ingestion, check orchestration, and report emission for the
//! positivity workbench. Scenarios are JSON documents naming a module and a
//! check with parameters; reports are JSON with named residuals, the
//! tolerance each was held to, and a PASS/FAIL/ERROR verdict.

pub mod battery;
pub mod checks;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const REPORT_SCHEMA: &str = "oskit-report/1";

pub const MODULES: [&str; 7] =
    ["rphs", "kernel", "dilation", "kms", "sphere", "freefield", "ospaths"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
}

/// A single named check with its module tag and parameter payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub module: String,
    pub payload: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScenarioVerdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "ERROR")]
    Error,
}

/// Outcome of a scenario: every residual is reported next to the tolerance it
/// was held to, and the verdict is PASS exactly when all residuals are within
/// tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema: String,
    pub name: String,
    pub module: String,
    pub verdict: ScenarioVerdict,
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub provenance: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

/// What a check hands back to the driver: residual/tolerance pairs, a line of
/// provenance per claim checked, and optionally a spectrum for CSV dumps.
#[derive(Debug, Clone, Default)]
pub struct CheckOutput {
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub provenance: Vec<String>,
    pub eigenvalues: Option<Vec<f64>>,
}

impl CheckOutput {
    /// Records `value` as a residual held to `tol`.
    pub fn push(&mut self, key: &str, value: f64, tol: f64) {
        self.residuals.insert(key.to_string(), value);
        self.tolerances.insert(key.to_string(), tol);
    }

    /// Records a PSD verdict: the residual is the scale-relative defect of
    /// the smallest eigenvalue, zero when the matrix is PSD outright.
    pub fn push_psd(&mut self, key: &str, report: &oskit::GramReport) {
        let scale = report.max_eig.abs().max(1.0);
        self.push(key, (-report.min_eig / scale).max(0.0), report.tol);
    }

    /// Records the expectation that a verdict is NOT_PSD: residual 0 when a
    /// genuinely negative eigenvalue was found, 1 otherwise.
    pub fn push_expect_not_psd(&mut self, key: &str, report: &oskit::GramReport) {
        self.push(key, if report.is_psd() { 1.0 } else { 0.0 }, 0.5);
    }
}

/// Runs one scenario. `seed_override` replaces any `seed` field in the
/// payload before dispatch, so stochastic scenarios can be re-rolled from the
/// command line without editing files.
pub fn run_scenario(
    scenario: &Scenario,
    seed_override: Option<u64>,
    with_timing: bool,
) -> ScenarioReport {
    let started = std::time::Instant::now();
    let mut payload = scenario.payload.clone();
    if let (Some(seed), Some(obj)) = (seed_override, payload.as_object_mut()) {
        if obj.contains_key("seed") {
            obj.insert("seed".into(), serde_json::json!(seed));
        }
    }
    let outcome = if MODULES.contains(&scenario.module.as_str()) {
        checks::dispatch(&scenario.module, &payload)
    } else {
        Err(format!("unknown module tag {:?}", scenario.module))
    };
    let (verdict, residuals, tolerances, provenance, error) = match outcome {
        Ok(mut out) => {
            // Scenario-level tolerance overrides are applied after the check
            // so the report echoes what was actually enforced.
            if let Some(over) = &scenario.tolerances {
                for (k, v) in over {
                    if out.tolerances.contains_key(k) {
                        out.tolerances.insert(k.clone(), *v);
                    }
                }
            }
            let pass = out
                .residuals
                .iter()
                .all(|(k, r)| r.is_finite() && *r <= out.tolerances[k]);
            (
                if pass { ScenarioVerdict::Pass } else { ScenarioVerdict::Fail },
                out.residuals,
                out.tolerances,
                out.provenance,
                None,
            )
        }
        Err(message) => (
            ScenarioVerdict::Error,
            BTreeMap::new(),
            BTreeMap::new(),
            Vec::new(),
            Some(message),
        ),
    };
    ScenarioReport {
        schema: REPORT_SCHEMA.to_string(),
        name: scenario.name.clone(),
        module: scenario.module.clone(),
        verdict,
        residuals,
        tolerances,
        provenance,
        error,
        wall_time_seconds: with_timing.then(|| started.elapsed().as_secs_f64()),
    }
}

/// Same as [`run_scenario`] but also returns the eigenvalue dump, if the
/// check produced one.
pub fn run_scenario_with_dump(
    scenario: &Scenario,
    seed_override: Option<u64>,
    with_timing: bool,
) -> (ScenarioReport, Option<Vec<f64>>) {
    let mut payload = scenario.payload.clone();
    if let (Some(seed), Some(obj)) = (seed_override, payload.as_object_mut()) {
        if obj.contains_key("seed") {
            obj.insert("seed".into(), serde_json::json!(seed));
        }
    }
    let eigenvalues = checks::dispatch(&scenario.module, &payload)
        .ok()
        .and_then(|out| out.eigenvalues);
    (run_scenario(scenario, seed_override, with_timing), eigenvalues)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub all_pass: bool,
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
    pub reports: Vec<ScenarioReport>,
}

/// Runs the default battery, optionally filtered by module tag or scenario
/// name substring. Report order follows battery order.
pub fn run_suite(
    filter: Option<&str>,
    seed_override: Option<u64>,
    with_timing: bool,
    mut on_dump: impl FnMut(&str, &[f64]),
) -> SuiteReport {
    let mut reports = Vec::new();
    for scenario in battery::default_suite() {
        if let Some(f) = filter {
            if scenario.module != f && !scenario.name.contains(f) {
                continue;
            }
        }
        let (report, eigenvalues) = run_scenario_with_dump(&scenario, seed_override, with_timing);
        if let Some(eigs) = eigenvalues {
            on_dump(&scenario.name, &eigs);
        }
        reports.push(report);
    }
    let passed = reports.iter().filter(|r| r.verdict == ScenarioVerdict::Pass).count();
    let failed = reports.iter().filter(|r| r.verdict == ScenarioVerdict::Fail).count();
    let errored = reports.iter().filter(|r| r.verdict == ScenarioVerdict::Error).count();
    SuiteReport {
        schema: REPORT_SCHEMA.to_string(),
        all_pass: failed == 0 && errored == 0 && !reports.is_empty(),
        passed,
        failed,
        errored,
        reports,
    }
}

/// Parses a scenario file, distinguishing JSON syntax errors from documents
/// that parse but do not match the scenario shape.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let scenario: Scenario =
        serde_json::from_value(value).map_err(|e| CliError::Schema(e.to_string()))?;
    if !MODULES.contains(&scenario.module.as_str()) {
        return Err(CliError::Schema(format!("unknown module tag {:?}", scenario.module)));
    }
    Ok(scenario)
}

/// CSV rendering of an eigenvalue dump, ascending.
pub fn eigenvalue_csv(eigs: &[f64]) -> String {
    let mut sorted = eigs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = String::from("index,eigenvalue\n");
    for (i, e) in sorted.iter().enumerate() {
        out.push_str(&format!("{i},{e:e}\n"));
    }
    out
}

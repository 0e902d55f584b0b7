//! Batch front end: load a manifest, run its tasks, assemble a
//! deterministic JSON report and an exit code.

pub mod error;
pub mod manifest;
pub mod ops;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use rectify_core::exactlin::FieldSpec;
use serde_json::{json, Value};

pub use error::CliError;
use manifest::{Manifest, Task, TaskParams};
use ops::{effective_params, execute, Defaults, Op, Status};

pub const REPORT_FORMAT: &str = "rectify-kit-report/1";

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub field: Option<FieldSpec>,
    pub defaults: Defaults,
    /// Indeterminate outcomes count as failures.
    pub strict: bool,
    pub jobs: usize,
}

pub fn load(path: &str, field: Option<FieldSpec>) -> Result<Manifest, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })?;
    manifest::parse(path, &text)?.validate(field)
}

/// Replaces the manifest's tasks by one `op` task per applicable entity, or
/// per named entity.
pub fn select(m: &mut Manifest, op: Op, entities: &[String]) -> Result<(), CliError> {
    let names: Vec<String> = if entities.is_empty() {
        m.entities.iter().filter(|(_, e)| op.accepts(e)).map(|(n, _)| n.clone()).collect()
    } else {
        for n in entities {
            let e = m.entities.get(n).ok_or_else(|| CliError::Semantic { entity: n.clone(), message: "not declared".into() })?;
            if !op.accepts(e) {
                return Err(CliError::Semantic { entity: n.clone(), message: format!("{} does not apply to a {}", op.name(), e.kind()) });
            }
        }
        entities.to_vec()
    };
    if names.is_empty() {
        return Err(CliError::Semantic { entity: op.name().into(), message: "no entity in the manifest applies".into() });
    }
    m.tasks = names
        .into_iter()
        .map(|entity| Task { name: format!("{}:{entity}", op.name()), op, entity, params: TaskParams::default() })
        .collect();
    Ok(())
}

pub struct Report {
    pub document: Value,
    pub exit_code: i32,
}

impl Report {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("report serializes");
        s.push('\n');
        s
    }
}

struct TaskRun {
    entry: Value,
    status: Status,
    millis: f64,
}

fn run_task(m: &Manifest, task: &Task, defaults: &Defaults) -> TaskRun {
    let start = Instant::now();
    let params = effective_params(task, defaults);
    let outcome = execute(m, task, &params);
    let entry = json!({
        "name": task.name,
        "op": task.op.name(),
        "entity": task.entity,
        "parameters": params,
        "status": outcome.status,
        "result": outcome.result,
    });
    TaskRun { entry, status: outcome.status, millis: start.elapsed().as_secs_f64() * 1e3 }
}

/// Runs every task (concurrently with `jobs > 1`); the report does not
/// depend on scheduling.
pub fn run(m: &Manifest, opts: &RunOptions) -> Result<Report, CliError> {
    let start = Instant::now();
    let runs: Vec<TaskRun> = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().map_err(|e| CliError::Flag(e.to_string()))?;
        pool.install(|| m.tasks.par_iter().map(|t| run_task(m, t, &opts.defaults)).collect())
    } else {
        m.tasks.iter().map(|t| run_task(m, t, &opts.defaults)).collect()
    };
    let mut counts: BTreeMap<Status, usize> = [Status::Pass, Status::Fail, Status::Indeterminate, Status::Error].map(|s| (s, 0)).into();
    for r in &runs {
        *counts.get_mut(&r.status).expect("all statuses counted") += 1;
    }
    let exit_code = if counts[&Status::Error] > 0 {
        EXIT_INPUT
    } else if counts[&Status::Fail] > 0 || (opts.strict && counts[&Status::Indeterminate] > 0) {
        EXIT_FAILED
    } else if counts[&Status::Indeterminate] > 0 {
        EXIT_INDETERMINATE
    } else {
        EXIT_OK
    };
    let mut order: Vec<usize> = (0..runs.len()).collect();
    order.sort_by(|&a, &b| (&m.tasks[a].entity, &m.tasks[a].name).cmp(&(&m.tasks[b].entity, &m.tasks[b].name)));
    let tasks: Vec<Value> = order.iter().map(|&i| runs[i].entry.clone()).collect();
    let task_times: serde_json::Map<String, Value> = m.tasks.iter().zip(&runs).map(|(t, r)| (t.name.clone(), json!(r.millis))).collect();
    let document = json!({
        "format": REPORT_FORMAT,
        "field": m.field.to_string(),
        "strict": opts.strict,
        "tasks": tasks,
        "summary": {
            "pass": counts[&Status::Pass],
            "fail": counts[&Status::Fail],
            "indeterminate": counts[&Status::Indeterminate],
            "error": counts[&Status::Error],
            "exit_code": exit_code,
        },
        "timing": { "total_ms": start.elapsed().as_secs_f64() * 1e3, "jobs": opts.jobs.max(1), "tasks": task_times },
    });
    Ok(Report { document, exit_code })
}

/// The report with its `timing` block removed, for comparisons.
pub fn mask_timing(report: &str) -> Result<String, serde_json::Error> {
    let mut v: Value = serde_json::from_str(report)?;
    if let Some(o) = v.as_object_mut() {
        o.remove("timing");
    }
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

//! Executes a validated [`RunConfig`] into an ordered list of check results.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use operadkit::alg::{
    check_algebra_axioms, cotangent_fiber, graded_fiber_check, pi0_truncation_check,
    stabilization_check, AlgebraDocument, AlgebraPresentation,
};
use operadkit::bar::{bar_homology, check_bar_term_formula, check_koszul_pair, check_koszul_unit};
use operadkit::levelled::{check_kn_concentration, check_tower_maps};
use operadkit::operad::{check_operad_axioms, Operad};
use operadkit::perm::factorial;
use operadkit::report::{character_json, space_json, CheckResult};
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{CommandKind, OperadKind, OperadSource, RunConfig};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{flag}: {message}")]
    Input { flag: &'static str, message: String },

    #[error(transparent)]
    Core(#[from] operadkit::Error),
}

fn input(flag: &'static str, message: impl Into<String>) -> RunError {
    RunError::Input {
        flag,
        message: message.into(),
    }
}

/// Results in a deterministic order, with the wall-clock time of each job.
pub struct RunOutput {
    pub results: Vec<CheckResult>,
    pub job_millis: Vec<(String, u128)>,
    pub total_millis: u128,
}

type JobResult = Result<Vec<CheckResult>, RunError>;
type Job<'a> = (String, Box<dyn FnOnce() -> JobResult + Send + 'a>);
type JobTimes = Vec<(String, u128)>;

/// Runs jobs on a small worker pool and returns their results in job order.
fn run_jobs(jobs: Vec<Job<'_>>) -> Result<(Vec<CheckResult>, JobTimes), RunError> {
    let names: Vec<String> = jobs.iter().map(|(n, _)| n.clone()).collect();
    let count = jobs.len();
    let queue: Mutex<Vec<Option<Job<'_>>>> = Mutex::new(jobs.into_iter().map(Some).collect());
    let slots: Mutex<Vec<Option<(JobResult, u128)>>> =
        Mutex::new((0..count).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(count)
        .max(1);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= count {
                    break;
                }
                let (_, job) = queue.lock().expect("job queue")[i]
                    .take()
                    .expect("each job runs once");
                let start = Instant::now();
                let out = job();
                slots.lock().expect("result slots")[i] = Some((out, start.elapsed().as_millis()));
            });
        }
    });
    let mut results = Vec::new();
    let mut timings = Vec::new();
    for (name, slot) in names
        .into_iter()
        .zip(slots.into_inner().expect("result slots"))
    {
        let (out, ms) = slot.expect("every job finished");
        results.extend(out?);
        timings.push((name, ms));
    }
    Ok((results, timings))
}

fn read(flag: &'static str, path: &Path) -> Result<String, RunError> {
    std::fs::read_to_string(path)
        .map_err(|e| input(flag, format!("cannot read {}: {e}", path.display())))
}

fn builtin(kind: OperadKind, bound: usize) -> Operad {
    match kind {
        OperadKind::Com => Operad::com(bound),
        OperadKind::Ass => Operad::ass(bound),
        OperadKind::Lie => Operad::lie(bound),
    }
}

/// The operad with arity bound exactly `bound`.
fn load_operad(source: &OperadSource, bound: usize) -> Result<Operad, RunError> {
    match source {
        OperadSource::Builtin(kind) => Ok(builtin(*kind, bound)),
        OperadSource::File(path) => {
            let o = Operad::from_json(&read("--operad-file", path)?)
                .map_err(|e| input("--operad-file", e.to_string()))?;
            if o.arity_bound() < bound {
                return Err(input(
                    "--operad-file",
                    format!(
                        "the file stops at arity {}, but arity {bound} was requested",
                        o.arity_bound()
                    ),
                ));
            }
            Ok(o.with_arity_bound(bound))
        }
    }
}

/// Closed-form dimensions of the bundled operads.
fn expected_dim(kind: OperadKind, n: usize) -> usize {
    match kind {
        OperadKind::Com => 1,
        OperadKind::Ass => factorial(n),
        OperadKind::Lie => factorial(n - 1),
    }
}

fn koszul_partner(kind: OperadKind) -> OperadKind {
    match kind {
        OperadKind::Com => OperadKind::Lie,
        OperadKind::Ass => OperadKind::Ass,
        OperadKind::Lie => OperadKind::Com,
    }
}

fn dims_results(
    o: &Operad,
    source: &OperadSource,
    max_arity: usize,
) -> Result<Vec<CheckResult>, RunError> {
    let mut out = Vec::new();
    for n in 1..=max_arity {
        let term = o.term(n)?;
        let valid = term.validate().is_ok();
        let got = json!({"dim": o.dim(n), "degrees": space_json(&term.complex().space()), "character": character_json(&term.character())});
        let r = CheckResult::new("operad_term")
            .param("operad", o.name())
            .param("arity", n);
        out.push(match source {
            OperadSource::Builtin(kind) => {
                let dim = expected_dim(*kind, n);
                r.outcome(json!({"dim": dim}), got, valid && o.dim(n) == dim)
            }
            OperadSource::File(_) => r.outcome(json!({"valid_action": true}), got, valid),
        });
    }
    Ok(out)
}

fn axioms_result(o: &Operad) -> CheckResult {
    let report = check_operad_axioms(o);
    CheckResult::new("operad_axioms")
        .param("operad", o.name())
        .param("max_arity", o.arity_bound())
        .outcome(
            json!({"failure": null}),
            json!({"checked": report.checked, "failure": report.failure}),
            report.passed(),
        )
}

fn algebra_axioms_result(a: &AlgebraPresentation) -> CheckResult {
    let report = check_algebra_axioms(a);
    CheckResult::new("algebra_axioms")
        .param("algebra", a.name())
        .param("operad", a.operad().name())
        .outcome(
            json!({"failure": null}),
            json!({"checked": report.checked, "failure": report.failure}),
            report.passed(),
        )
}

/// Loads an algebra document over a bundled operad with arity bound large
/// enough for `weight` and the nilpotence certificate.
fn load_algebra(path: &Path, weight: usize) -> Result<AlgebraPresentation, RunError> {
    let text = read("--algebra-file", path)?;
    let doc: AlgebraDocument =
        serde_json::from_str(&text).map_err(|e| input("--algebra-file", e.to_string()))?;
    let bound = weight.max(doc.certificate).max(2);
    AlgebraPresentation::from_document(&doc, bound)
        .map_err(|e| input("--algebra-file", e.to_string()))
}

fn cotangent_result(a: &AlgebraPresentation, window: usize) -> Result<Vec<CheckResult>, RunError> {
    let pieces = cotangent_fiber(a, window)?;
    let got: serde_json::Map<String, Value> = pieces
        .iter()
        .map(|(w, b)| (w.to_string(), space_json(&b.homology())))
        .collect();
    let chains: serde_json::Map<String, Value> = pieces
        .iter()
        .map(|(w, b)| (w.to_string(), space_json(&b.complex().space())))
        .collect();
    Ok(vec![CheckResult::new("cotangent_fiber")
        .param("algebra", a.name())
        .param("window", window)
        .outcome(
            Value::Null,
            json!({"homology": got, "chains": chains}),
            true,
        )])
}

pub fn execute(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let start = Instant::now();
    let mut held_operad: Option<Operad> = None;
    let mut held_algebra: Option<AlgebraPresentation> = None;
    match cfg.command {
        CommandKind::Algebra => {
            let weight = cfg.weight.expect("validated");
            let a = load_algebra(cfg.algebra_file.as_deref().expect("validated"), weight)?;
            held_algebra = Some(a);
        }
        _ => {
            let source = cfg.operad.as_ref().expect("validated");
            let bound = cfg.max_arity.or(cfg.max_d).expect("validated");
            let o = load_operad(source, bound)?;
            if cfg.command == CommandKind::KnTable && !o.is_degree_zero() {
                return Err(input(
                    "--operad-file",
                    "the K_n(d) table needs an operad concentrated in degree 0",
                ));
            }
            held_operad = Some(o);
            if let Some(path) = &cfg.algebra_file {
                held_algebra = Some(load_algebra(path, bound)?);
            }
        }
    }
    let o = held_operad.as_ref();
    let a = held_algebra.as_ref();
    let mut jobs: Vec<Job<'_>> = Vec::new();
    match cfg.command {
        CommandKind::Dims => {
            let (o, source, m) = (
                o.expect("loaded"),
                cfg.operad.as_ref().expect("validated"),
                cfg.max_arity.expect("validated"),
            );
            jobs.push(("dims".into(), Box::new(move || dims_results(o, source, m))));
        }
        CommandKind::Bar => {
            let o = o.expect("loaded");
            let m = cfg.max_arity.expect("validated");
            match cfg.operad.as_ref().expect("validated") {
                OperadSource::Builtin(kind) => {
                    let partner = builtin(koszul_partner(*kind), m);
                    jobs.push((
                        "koszul_pair".into(),
                        Box::new(move || Ok(check_koszul_pair(o, &partner, m)?)),
                    ));
                }
                OperadSource::File(_) => {
                    for n in 1..=m {
                        jobs.push((
                            format!("bar_homology:{n}"),
                            Box::new(move || {
                                let (h, chi) = bar_homology(o, n)?;
                                Ok(vec![CheckResult::new("bar_homology").param("operad", o.name()).param("arity", n).outcome(
                                    Value::Null,
                                    json!({"homology": space_json(&h), "character": character_json(&chi)}),
                                    true,
                                )])
                            }),
                        ));
                    }
                }
            }
        }
        CommandKind::KnTable => {
            let o = o.expect("loaded");
            let d = cfg.max_d.expect("validated");
            jobs.push((
                "kn_concentration".into(),
                Box::new(move || Ok(check_kn_concentration(o, d)?)),
            ));
            jobs.push((
                "tower_maps".into(),
                Box::new(move || Ok(check_tower_maps(o, d)?)),
            ));
        }
        CommandKind::KoszulCheck => {
            let o = o.expect("loaded");
            let m = cfg.max_arity.expect("validated");
            jobs.push((
                "koszul_unit".into(),
                Box::new(move || Ok(check_koszul_unit(o, m)?)),
            ));
        }
        CommandKind::BarTerm => {
            let o = o.expect("loaded");
            for n in 2..=cfg.max_arity.expect("validated") {
                jobs.push((
                    format!("bar_term:{n}"),
                    Box::new(move || Ok(vec![check_bar_term_formula(o, n)?])),
                ));
            }
        }
        CommandKind::Axioms => {
            let o = o.expect("loaded");
            jobs.push((
                "operad_axioms".into(),
                Box::new(move || Ok(vec![axioms_result(o)])),
            ));
            if let Some(a) = a {
                jobs.push((
                    "algebra_axioms".into(),
                    Box::new(move || Ok(vec![algebra_axioms_result(a)])),
                ));
            }
        }
        CommandKind::Algebra => {
            let a = a.expect("loaded");
            let window = cfg.weight.expect("validated");
            let max_n = cfg.max_n.expect("validated");
            jobs.push((
                "algebra_axioms".into(),
                Box::new(move || Ok(vec![algebra_axioms_result(a)])),
            ));
            jobs.push((
                "cotangent_fiber".into(),
                Box::new(move || cotangent_result(a, window)),
            ));
            for n in 1..=max_n {
                jobs.push((
                    format!("stabilization:{n}"),
                    Box::new(move || Ok(vec![stabilization_check(a, n)?])),
                ));
            }
            if a.is_degree_zero() {
                for n in 1..=max_n {
                    jobs.push((
                        format!("pi0:{n}"),
                        Box::new(move || Ok(vec![pi0_truncation_check(a, n)?])),
                    ));
                }
            }
            for n in 2..=max_n {
                jobs.push((
                    format!("graded_fiber:{n}"),
                    Box::new(move || Ok(vec![graded_fiber_check(a, n, window)?])),
                ));
            }
        }
    }
    let (results, job_millis) = run_jobs(jobs)?;
    Ok(RunOutput {
        results,
        job_millis,
        total_millis: start.elapsed().as_millis(),
    })
}

/// Per-job timings as a JSON object.
pub fn timing_json(out: &RunOutput) -> Value {
    let jobs: BTreeMap<&str, u128> = out
        .job_millis
        .iter()
        .map(|(n, ms)| (n.as_str(), *ms))
        .collect();
    json!({"total_ms": out.total_millis, "jobs_ms": jobs})
}

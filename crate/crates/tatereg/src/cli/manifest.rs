//! Manifests of CLI jobs with expected values, and the reproduction harness.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::Parser;
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{execute, Cli, GlobalOpts};
use crate::eis::FpSubspace;
use crate::error::{Error, Result};

/// The bundled manifest covering the published and derived regressions.
pub const PAPER_CORE: &str = include_str!("../../manifests/paper-core.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    #[serde(default)]
    pub jobs: Vec<Job>,
}

/// One CLI invocation and the values expected in its JSON report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Job {
    pub id: String,
    pub argv: Vec<String>,
    #[serde(default)]
    pub fixtures: Vec<Fixture>,
}

/// How an expected value is compared with the report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compare {
    /// JSON equality.
    #[default]
    Exact,
    /// Equal `F_p`-row spans; `p` is read from the report.
    Span,
    /// Rationals `"a/b"` against integers modulo `p^precision` from the report.
    RationalMod,
    /// Equal, or equal after negating every entry.
    UpToSign,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fixture {
    /// JSON pointer into the report.
    pub pointer: String,
    pub value: Value,
    /// `published: <where>` or `derived: <how>`.
    pub provenance: String,
    #[serde(default)]
    pub compare: Compare,
}

impl Manifest {
    /// Loads `paper-core` or a manifest file.
    pub fn load(spec: &str) -> Result<Self> {
        let text = if spec == "paper-core" {
            PAPER_CORE.to_string()
        } else {
            std::fs::read_to_string(spec).map_err(|e| Error::Fixture(format!("cannot read manifest {spec}: {e}")))?
        };
        let m: Manifest = serde_json::from_str(&text).map_err(|e| Error::Fixture(format!("bad manifest: {e}")))?;
        for job in &m.jobs {
            for f in &job.fixtures {
                if !(f.provenance.starts_with("published: ") || f.provenance.starts_with("derived: ")) {
                    return Err(Error::Fixture(format!("fixture {}{} lacks a provenance string", job.id, f.pointer)));
                }
            }
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub pointer: String,
    pub provenance: String,
    pub pass: bool,
    pub expected: Value,
    pub actual: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JobResult {
    pub id: String,
    pub pass: bool,
    pub exit_code: i32,
    pub error: Option<String>,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproduceReport {
    pub manifest: String,
    pub passed: usize,
    pub failed: usize,
    pub jobs: Vec<JobResult>,
}

impl ReproduceReport {
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![["job", "pointer", "pass", "provenance"].map(String::from).to_vec()];
        for j in &self.jobs {
            if j.checks.is_empty() {
                rows.push(vec![j.id.clone(), String::new(), j.pass.to_string(), j.error.clone().unwrap_or_default()]);
            }
            for c in &j.checks {
                rows.push(vec![j.id.clone(), c.pointer.clone(), c.pass.to_string(), c.provenance.clone()]);
            }
        }
        rows
    }
}

fn parse_ratio(v: &Value) -> Option<(BigInt, BigInt)> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return None,
    };
    let (a, b) = s.split_once('/').unwrap_or((&s, "1"));
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn as_vectors(v: &Value) -> Option<Vec<Vec<i64>>> {
    v.as_array()?.iter().map(|r| r.as_array()?.iter().map(Value::as_i64).collect()).collect()
}

fn compare(f: &Fixture, actual: &Value, report: &Value) -> bool {
    match f.compare {
        Compare::Exact => *actual == f.value,
        Compare::UpToSign => {
            let neg = |v: &Value| v.as_array().map(|a| a.iter().map(|x| x.as_i64().map(|y| -y)).collect::<Option<Vec<_>>>());
            let want = f.value.as_array().map(|a| a.iter().map(Value::as_i64).collect::<Option<Vec<_>>>());
            let got = actual.as_array().map(|a| a.iter().map(Value::as_i64).collect::<Option<Vec<_>>>());
            *actual == f.value || (got.is_some() && got == neg(&f.value) && want.is_some())
        }
        Compare::Span => {
            let (Some(p), Some(want), Some(got)) = (report["p"].as_u64(), as_vectors(&f.value), as_vectors(actual))
            else {
                return false;
            };
            let n = want.first().or(got.first()).map_or(0, Vec::len);
            match (FpSubspace::span_signed(p, n, &want), FpSubspace::span_signed(p, n, &got)) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            }
        }
        Compare::RationalMod => {
            let (Some(p), Some(m)) = (report["p"].as_u64(), report["precision"].as_u64()) else {
                return false;
            };
            let q = BigInt::from(p).pow(m as u32);
            let (Some(want), Some(got)) = (f.value.as_array(), actual.as_array()) else {
                return false;
            };
            want.len() <= got.len()
                && want.iter().zip(got).all(|(w, g)| {
                    let (Some((a, b)), Some(g)) = (parse_ratio(w), g.as_i64()) else {
                        return false;
                    };
                    (a - BigInt::from(g) * b).mod_floor(&q) == BigInt::from(0)
                })
        }
    }
}

fn run_job(job: &Job, global: &GlobalOpts) -> JobResult {
    let argv = std::iter::once("tatereg".to_string()).chain(job.argv.iter().cloned());
    let outcome = Cli::try_parse_from(argv)
        .map_err(|e| Error::Usage(e.to_string()))
        .and_then(|cli| execute(&cli.command, &GlobalOpts { out: None, ..global.clone() }));
    match outcome {
        Err(e) => JobResult {
            id: job.id.clone(),
            pass: false,
            exit_code: super::error_code(&e),
            error: Some(e.to_string()),
            checks: vec![],
        },
        Ok(o) => {
            let checks: Vec<CheckResult> = job
                .fixtures
                .iter()
                .map(|f| {
                    let actual = o.json.pointer(&f.pointer).cloned();
                    CheckResult {
                        pointer: f.pointer.clone(),
                        provenance: f.provenance.clone(),
                        pass: actual.as_ref().is_some_and(|a| compare(f, a, &o.json)),
                        expected: f.value.clone(),
                        actual,
                    }
                })
                .collect();
            let code = o.exit_code();
            JobResult { id: job.id.clone(), pass: code == 0 && checks.iter().all(|c| c.pass), exit_code: code, error: None, checks }
        }
    }
}

/// Runs every job of `m` on up to `global.jobs` threads.
pub fn reproduce(m: &Manifest, global: &GlobalOpts) -> Result<ReproduceReport> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<JobResult>>> = Mutex::new(vec![None; m.jobs.len()]);
    std::thread::scope(|s| {
        for _ in 0..global.jobs.clamp(1, m.jobs.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(job) = m.jobs.get(i) else { break };
                log::info!("running job {}", job.id);
                let r = run_job(job, global);
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    let jobs: Vec<JobResult> = results.into_inner().unwrap().into_iter().map(|r| r.expect("job ran")).collect();
    let passed = jobs.iter().filter(|j| j.pass).count();
    Ok(ReproduceReport { manifest: m.name.clone(), passed, failed: jobs.len() - passed, jobs })
}

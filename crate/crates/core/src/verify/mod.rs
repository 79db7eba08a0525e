//! Named checks replaying the finite computations behind the subdegree
//! tables, and the machine-readable reports built from them.

pub mod census;
mod derive;
pub mod lemmas;
mod report;
mod tables;

use std::cmp::Ordering;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::atlas::WitnessCache;
use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::projline::Psl;

pub use derive::{replay_certificates, Derived};
pub use lemmas::{run_lemma, LEMMA_IDS};
pub use report::{certificates_of, Report, REPORT_VERSION};
pub use tables::{table1, table2, table4};

/// Largest `m` accepted by the table commands (`|S_m| = 720`).
pub const MAX_M: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct RunConfig {
    /// Empty means the command's default list.
    pub q: Vec<u32>,
    /// Empty means the command's default list.
    pub m: Vec<usize>,
    pub long_running: bool,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub cache: Option<PathBuf>,
    /// `(requested, used)` replacements; `PSL(2,5) ≅ PSL(2,4)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<(u32, u32)>,
}

impl RunConfig {
    /// Validates `q` and `m`, maps `q = 5` to `q = 4`, and sorts both lists.
    pub fn normalize(&mut self) -> Result<()> {
        let mut qs = Vec::new();
        for &q in &self.q {
            if q < 4 || prime_power(q as u64).is_none() {
                return Err(Error::BadOrder(q as u64));
            }
            if q == 5 {
                if !self.aliases.contains(&(5, 4)) {
                    self.aliases.push((5, 4));
                }
                qs.push(4);
            } else {
                qs.push(q);
            }
        }
        qs.sort_unstable();
        qs.dedup();
        self.q = qs;
        if let Some(&m) = self.m.iter().find(|&&m| !(2..=MAX_M).contains(&m)) {
            return Err(Error::Parse(format!("m = {m} outside 2..={MAX_M}")));
        }
        self.m.sort_unstable();
        self.m.dedup();
        Ok(())
    }

    pub fn q_or(&self, default: &[u32]) -> Vec<u32> {
        if self.q.is_empty() {
            default.to_vec()
        } else {
            self.q.clone()
        }
    }

    pub fn m_or(&self, default: &[usize]) -> Vec<usize> {
        if self.m.is_empty() {
            default.to_vec()
        } else {
            self.m.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedLong,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedLong => "skipped-long",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub runtime_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl CheckResult {
    pub fn skipped(id: impl Into<String>, expected: impl Into<String>) -> CheckResult {
        CheckResult {
            check_id: id.into(),
            status: Status::SkippedLong,
            expected: expected.into(),
            actual: String::new(),
            runtime_ms: 0,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// What a check computed; `status` is `pass` iff `expected == actual`.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub expected: String,
    pub actual: String,
    pub witness: Option<serde_json::Value>,
}

impl Outcome {
    pub fn new(expected: impl ToString, actual: impl ToString) -> Outcome {
        Outcome {
            expected: expected.to_string(),
            actual: actual.to_string(),
            witness: None,
        }
    }

    pub fn with_witness(mut self, w: serde_json::Value) -> Outcome {
        self.witness = Some(w);
        self
    }
}

/// Runs one check; an error becomes a failure whose `actual` names it.
pub fn run_check(id: impl Into<String>, f: impl FnOnce() -> Result<Outcome>) -> CheckResult {
    let start = Instant::now();
    let res = f();
    let runtime_ms = start.elapsed().as_millis() as u64;
    let check_id = id.into();
    match res {
        Ok(o) => CheckResult {
            check_id,
            status: if o.expected == o.actual {
                Status::Pass
            } else {
                Status::Fail
            },
            expected: o.expected,
            actual: o.actual,
            runtime_ms,
            witness: o.witness,
        },
        Err(e) => CheckResult {
            check_id,
            status: Status::Fail,
            expected: String::new(),
            actual: format!("error: {e}"),
            runtime_ms,
            witness: None,
        },
    }
}

/// Shared state for one run: groups built once per `q`, plus the witness cache.
pub struct Context {
    pub config: RunConfig,
    groups: Mutex<FxHashMap<u32, Arc<Psl>>>,
    pub witnesses: Mutex<WitnessCache>,
}

impl Context {
    pub fn new(config: RunConfig) -> Result<Context> {
        let witnesses = match &config.cache {
            Some(p) => WitnessCache::load(p)?,
            None => WitnessCache::default(),
        };
        Ok(Context {
            config,
            groups: Mutex::new(FxHashMap::default()),
            witnesses: Mutex::new(witnesses),
        })
    }

    pub fn psl(&self, q: u32) -> Result<Arc<Psl>> {
        if let Some(t) = self.groups.lock().expect("group cache poisoned").get(&q) {
            return Ok(t.clone());
        }
        let t = Arc::new(Psl::new(q)?);
        Ok(self
            .groups
            .lock()
            .expect("group cache poisoned")
            .entry(q)
            .or_insert(t)
            .clone())
    }

    pub fn long(&self) -> bool {
        self.config.long_running
    }

    /// Writes the witness cache back when a path was configured.
    pub fn save_cache(&self) -> Result<()> {
        match &self.config.cache {
            Some(p) => self.witnesses.lock().expect("cache poisoned").save(p),
            None => Ok(()),
        }
    }
}

/// A unit of scheduled work producing one or more results.
pub type Job<'a> = Box<dyn FnOnce() -> Vec<CheckResult> + Send + 'a>;

/// Runs jobs on the configured worker pool and orders results by check id.
pub fn run_jobs(ctx: &Context, jobs: Vec<Job<'_>>) -> Vec<CheckResult> {
    let go = || -> Vec<CheckResult> { jobs.into_par_iter().flat_map_iter(|j| j()).collect() };
    let mut out = match ctx.config.workers {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(go),
            Err(_) => go(),
        },
        _ => go(),
    };
    sort_results(&mut out);
    out
}

pub fn sort_results(results: &mut [CheckResult]) {
    results.sort_by(|a, b| natural_cmp(&a.check_id, &b.check_id));
}

/// Compares strings treating digit runs as numbers, so `q7` sorts before `q11`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, _) => return Ordering::Less,
            (_, None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let la = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let lb = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (da, db) = (trim_zeros(&a[..la]), trim_zeros(&b[..lb]));
                let ord = da.len().cmp(&db.len()).then_with(|| da.cmp(db));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[la..];
                b = &b[lb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(d: &[u8]) -> &[u8] {
    let k = d.iter().take_while(|&&c| c == b'0').count();
    &d[k.min(d.len().saturating_sub(1))..]
}

/// Every table and lemma check, as run by `report`.
pub fn run_all(ctx: &Context) -> Result<Vec<CheckResult>> {
    let mut out = table1(ctx);
    out.extend(table2(ctx));
    out.extend(table4(ctx));
    for id in LEMMA_IDS {
        out.extend(run_lemma(ctx, id)?);
    }
    sort_results(&mut out);
    Ok(out)
}

/// Runs `table1`, `table2`, `table4`, `report`, or a lemma id.
pub fn run_named(ctx: &Context, name: &str) -> Result<Vec<CheckResult>> {
    match name {
        "table1" => Ok(table1(ctx)),
        "table2" => Ok(table2(ctx)),
        "table4" => Ok(table4(ctx)),
        "report" => run_all(ctx),
        id => run_lemma(ctx, id),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut v = vec!["t.q11.m2", "t.q7.m2", "t.q7.m10", "t.q7.m3"];
        v.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(v, ["t.q7.m2", "t.q7.m3", "t.q7.m10", "t.q11.m2"]);
    }

    #[test]
    fn q5_maps_to_q4() {
        let mut c = RunConfig {
            q: vec![5, 7, 4],
            ..Default::default()
        };
        c.normalize().unwrap();
        assert_eq!(c.q, vec![4, 7]);
        assert_eq!(c.aliases, vec![(5, 4)]);
    }

    #[test]
    fn bad_values_rejected() {
        let mut c = RunConfig {
            q: vec![6],
            ..Default::default()
        };
        assert_eq!(c.normalize(), Err(Error::BadOrder(6)));
        let mut c = RunConfig {
            m: vec![1],
            ..Default::default()
        };
        assert!(c.normalize().is_err());
    }

    #[test]
    fn errors_fail_the_check() {
        let r = run_check("x", || Err(Error::TrivialElement));
        assert_eq!(r.status, Status::Fail);
        let r = run_check("y", || Ok(Outcome::new(3, 3)));
        assert!(r.passed());
    }
}

//! Round-trip soundness campaigns.
//!
//! A campaign generates source instances from a seed, applies a reduction or a
//! path of reductions, enumerates the solutions of the target with the
//! brute-force oracle, pulls every one back and verifies it against the
//! source. Results are tallied in a [`Report`] whose JSON form depends only on
//! the seed and the configuration.

pub mod gen;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{enumerate_solutions, verify, Instance, Solution, VerifyOptions};
use crate::reductions::{chain_path, Outcome, ReductionId, PWPP_CYCLE};

/// Where source instances come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// `count` seeded random instances per width.
    Random,
    /// Every instance listed by [`gen::all_instances`] per width, from the
    /// problem's [`gen::min_bits`] up; `count` is ignored.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripConfig {
    pub seed: u64,
    pub count: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub generator: Generator,
    /// Cap on enumerated target solutions per case; `None` enumerates all.
    pub per_case_limit: Option<usize>,
    /// Worker threads; `None` uses the global pool. Does not affect the report.
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for RoundtripConfig {
    fn default() -> Self {
        RoundtripConfig {
            seed: 1,
            count: 50,
            n_min: 1,
            n_max: 3,
            generator: Generator::Random,
            per_case_limit: None,
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    /// Instances per reduction and per path.
    pub count: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub reductions: Vec<ReductionId>,
    pub paths: Vec<Vec<ReductionId>>,
    pub per_case_limit: Option<usize>,
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 1,
            count: 100,
            n_min: 1,
            n_max: 4,
            reductions: ReductionId::ALL.to_vec(),
            paths: vec![PWPP_CYCLE.to_vec()],
            per_case_limit: Some(512),
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeStats {
    pub source_gates_total: u64,
    pub target_gates_total: u64,
    pub source_gates_max: u64,
    pub target_gates_max: u64,
    /// Targets above [`ReductionId::gate_ceiling`] (single reductions only).
    pub ceiling_violations: u64,
}

/// Tallies for one reduction or path.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub instances: u64,
    /// The reduction solved the source itself.
    pub solved_directly: u64,
    /// Target solutions enumerated, by target case.
    pub solutions_by_case: BTreeMap<u8, u64>,
    pub pulled_back_verified: u64,
    /// Occurrences of each case the reduction rules out; all zero when sound.
    pub impossible_case_hits: BTreeMap<u8, u64>,
    /// Instances where some case reached the enumeration cap.
    pub capped_instances: u64,
    pub sizes: SizeStats,
}

impl Tally {
    pub fn solutions(&self) -> u64 {
        self.solutions_by_case.values().sum()
    }

    fn absorb(&mut self, other: &Tally) {
        self.instances += other.instances;
        self.solved_directly += other.solved_directly;
        for (&c, &k) in &other.solutions_by_case {
            *self.solutions_by_case.entry(c).or_default() += k;
        }
        self.pulled_back_verified += other.pulled_back_verified;
        for (&c, &k) in &other.impossible_case_hits {
            *self.impossible_case_hits.entry(c).or_default() += k;
        }
        self.capped_instances += other.capped_instances;
        let (s, o) = (&mut self.sizes, &other.sizes);
        s.source_gates_total += o.source_gates_total;
        s.target_gates_total += o.target_gates_total;
        s.source_gates_max = s.source_gates_max.max(o.source_gates_max);
        s.target_gates_max = s.target_gates_max.max(o.target_gates_max);
        s.ceiling_violations += o.ceiling_violations;
    }
}

/// A replayable failure: the source instance and, when the failure concerns a
/// particular target solution, that solution.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Failure {
    pub entry: String,
    pub index: u64,
    pub instance_seed: u64,
    pub source: String,
    pub solution: Option<String>,
    pub error: String,
}

impl Failure {
    /// The source instance, parsed back from its stored JSON.
    pub fn source_instance(&self) -> Result<Instance> {
        Instance::from_json(&self.source)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub campaign: String,
    pub seed: u64,
    /// Keyed by reduction id or by a path `a>b>c`.
    pub entries: BTreeMap<String, Tally>,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    fn merge(&mut self, other: Report) {
        for (k, t) in other.entries {
            self.entries.entry(k).or_default().absorb(&t);
        }
        self.failures.extend(other.failures);
        self.failures.sort();
    }
}

fn path_name(path: &[ReductionId]) -> String {
    path.iter().map(|r| r.name()).collect::<Vec<_>>().join(">")
}

struct Item {
    index: u64,
    instance_seed: u64,
    source: Instance,
}

/// Source instances for `path`, in a fixed order.
fn sources(path: &[ReductionId], cfg: &RoundtripConfig, salt: u64) -> Result<Vec<Item>> {
    let problem = path[0].source();
    let mut items = Vec::new();
    match cfg.generator {
        Generator::Random => {
            let widths: Vec<usize> = (cfg.n_min..=cfg.n_max).collect();
            if widths.is_empty() {
                return Err(Error::Structural(format!("empty width range {}..={}", cfg.n_min, cfg.n_max)));
            }
            for i in 0..cfg.count {
                let n = widths[(i % widths.len() as u64) as usize];
                let instance_seed = gen::mix(cfg.seed, salt, i);
                let source = gen::random_instance(problem, n, &mut gen::rng_for(instance_seed))?;
                items.push(Item {
                    index: i,
                    instance_seed,
                    source,
                });
            }
        }
        Generator::Exhaustive => {
            for n in cfg.n_min.max(gen::min_bits(problem))..=cfg.n_max {
                for source in gen::all_instances(problem, n)? {
                    items.push(Item {
                        index: items.len() as u64,
                        instance_seed: 0,
                        source,
                    });
                }
            }
        }
    }
    Ok(items)
}

fn run_item(path: &[ReductionId], entry: &str, item: &Item, limit: Option<usize>) -> (Tally, Vec<Failure>) {
    let mut tally = Tally {
        instances: 1,
        ..Tally::default()
    };
    let mut failures = Vec::new();
    let fail = |sol: Option<&Solution>, error: String| Failure {
        entry: entry.to_string(),
        index: item.index,
        instance_seed: item.instance_seed,
        source: item.source.to_json(),
        solution: sol.map(|s| serde_json::to_string(s).expect("solutions serialize")),
        error,
    };
    let src = &item.source;
    let source_gates = src.gate_count() as u64;
    tally.sizes.source_gates_total = source_gates;
    tally.sizes.source_gates_max = source_gates;

    let outcome = match chain_path(path, src) {
        Ok(o) => o,
        Err(e) => {
            failures.push(fail(None, format!("reduction failed: {e}")));
            return (tally, failures);
        }
    };
    let r = match outcome {
        Outcome::Solved(sol) => {
            tally.solved_directly = 1;
            match verify(src, &sol) {
                Ok(v) if v.is_accepted() => tally.pulled_back_verified = 1,
                Ok(v) => failures.push(fail(Some(&sol), format!("direct solution rejected: {v:?}"))),
                Err(e) => failures.push(fail(Some(&sol), e.to_string())),
            }
            return (tally, failures);
        }
        Outcome::Reduced(r) => r,
    };
    let target_gates = r.target().gate_count() as u64;
    tally.sizes.target_gates_total = target_gates;
    tally.sizes.target_gates_max = target_gates;
    if let [single] = path {
        let ceiling = single.gate_ceiling(src);
        if target_gates > ceiling {
            tally.sizes.ceiling_violations = 1;
            failures.push(fail(None, format!("target has {target_gates} gates, ceiling {ceiling}")));
        }
    }
    let last = *path.last().unwrap();
    for &c in last.impossible_cases() {
        tally.impossible_case_hits.insert(c, 0);
    }

    let sols = match enumerate_solutions(r.target(), VerifyOptions::default(), limit) {
        Ok(s) => s,
        Err(e) => {
            failures.push(fail(None, format!("target enumeration failed: {e}")));
            return (tally, failures);
        }
    };
    if sols.is_empty() {
        failures.push(fail(None, "target has no solution".into()));
    }
    for sol in &sols {
        let case = sol.case();
        *tally.solutions_by_case.entry(case).or_default() += 1;
        if let Some(hits) = tally.impossible_case_hits.get_mut(&case) {
            *hits += 1;
        }
        match r.pull_back(sol).and_then(|back| Ok((verify(src, &back)?, back))) {
            Ok((v, _)) if v.is_accepted() => tally.pulled_back_verified += 1,
            Ok((v, back)) => failures.push(fail(
                Some(sol),
                format!("pulled back to {back:?}, rejected: {v:?}"),
            )),
            Err(e) => failures.push(fail(Some(sol), e.to_string())),
        }
    }
    if let Some(k) = limit {
        if tally.solutions_by_case.values().any(|&c| c as usize >= k) {
            tally.capped_instances = 1;
        }
    }
    (tally, failures)
}

fn run_entry(path: &[ReductionId], cfg: &RoundtripConfig, salt: u64) -> Result<(Tally, Vec<Failure>)> {
    let entry = path_name(path);
    let items = sources(path, cfg, salt)?;
    let results: Vec<(Tally, Vec<Failure>)> = items
        .par_iter()
        .map(|item| {
            catch_unwind(AssertUnwindSafe(|| run_item(path, &entry, item, cfg.per_case_limit)))
                .unwrap_or_else(|panic| {
                    let msg = panic
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_default();
                    let failure = Failure {
                        entry: entry.clone(),
                        index: item.index,
                        instance_seed: item.instance_seed,
                        source: item.source.to_json(),
                        solution: None,
                        error: format!("panic: {msg}"),
                    };
                    (Tally { instances: 1, ..Tally::default() }, vec![failure])
                })
        })
        .collect();
    let mut tally = Tally::default();
    let mut failures = Vec::new();
    for (t, f) in results {
        tally.absorb(&t);
        failures.extend(f);
    }
    Ok((tally, failures))
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Structural(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Round trip of one reduction, or of a path applied in order.
pub fn run_roundtrip(path: &[ReductionId], cfg: &RoundtripConfig) -> Result<Report> {
    if path.is_empty() {
        return Err(Error::Structural("empty reduction path".into()));
    }
    let name = path_name(path);
    let (tally, mut failures) = with_jobs(cfg.jobs, || run_entry(path, cfg, 0))??;
    failures.sort();
    Ok(Report {
        campaign: format!("roundtrip:{name}"),
        seed: cfg.seed,
        entries: BTreeMap::from([(name, tally)]),
        failures,
    })
}

/// Random round trips over every listed reduction and path, in one report.
pub fn run_fuzz(cfg: &FuzzConfig) -> Result<Report> {
    let mut report = Report {
        campaign: "fuzz".into(),
        seed: cfg.seed,
        ..Report::default()
    };
    let entries: Vec<Vec<ReductionId>> = cfg
        .reductions
        .iter()
        .map(|&r| vec![r])
        .chain(cfg.paths.iter().cloned())
        .collect();
    for (k, path) in entries.iter().enumerate() {
        if path.is_empty() {
            return Err(Error::Structural("empty reduction path".into()));
        }
        let rc = RoundtripConfig {
            seed: cfg.seed,
            count: cfg.count,
            n_min: cfg.n_min,
            n_max: cfg.n_max,
            generator: Generator::Random,
            per_case_limit: cfg.per_case_limit,
            jobs: cfg.jobs,
        };
        if cfg.count == 0 {
            continue;
        }
        let (tally, failures) = with_jobs(cfg.jobs, || run_entry(path, &rc, k as u64 + 1))??;
        report.merge(Report {
            entries: BTreeMap::from([(path_name(path), tally)]),
            failures,
            ..Report::default()
        });
    }
    Ok(report)
}

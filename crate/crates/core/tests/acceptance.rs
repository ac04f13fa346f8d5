//! Acceptance criteria 1 to 9. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use tfnp_reductions::campaign::gen::{dlogp_instance, generators, mix, random_instance, rng_for};
use tfnp_reductions::campaign::{run_fuzz, run_roundtrip, FuzzConfig, Generator, Report, RoundtripConfig};
use tfnp_reductions::circuit::CircuitBuilder;
use tfnp_reductions::encoding::bit_decompose_minimal;
use tfnp_reductions::number::{is_prime, mod_pow};
use tfnp_reductions::problems::{
    brute_force, enumerate_solutions, Groupoid, GroupoidRep, Instance, Problem, Solution, VerifyOptions,
};
use tfnp_reductions::reductions::{identity_groupoid, reduce, Outcome, ReductionId};

struct Verdict {
    pass: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Verdict {
    Verdict { pass: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict { pass: false, detail: detail.into() }
}

/// Criterion 1: the identity construction with s = 16 indexes every a to itself.
fn identity_tree() -> Verdict {
    let grp = Groupoid::new(&identity_groupoid(4, 0)).unwrap();
    let bad: Vec<u64> = (0..16).filter(|&a| grp.index(a) != a).collect();
    if bad.is_empty() {
        ok("I(a) = a for all a < 16")
    } else {
        fail(format!("I(a) ≠ a for a in {bad:?}"))
    }
}

/// Criterion 2: the n = 2 Pigeon-to-Index operator realizes the three-part
/// index map for all 256 two-bit circuits.
fn pigeon_index_tree() -> Verdict {
    let mut mismatches = 0;
    for code in 0..256u64 {
        let table: Vec<u64> = (0..4).map(|r| (code >> (2 * r)) & 3).collect();
        let src = Instance::Pigeon { circuit: CircuitBuilder::from_truth_table(2, 2, &table) };
        let Outcome::Reduced(r) = reduce(ReductionId::PigeonToIndex, &src).unwrap() else {
            return fail("reduction solved the source instead of building an Index instance");
        };
        let Instance::Index(rep) = r.target() else { unreachable!() };
        let grp = Groupoid::new(rep).unwrap();
        for a in 0..16u64 {
            let want = if a < 8 {
                a + 4
            } else if a % 2 == 0 {
                8 + a / 2
            } else {
                table[((a - 1) / 2 - 4) as usize]
            };
            if grp.index(a) != want {
                mismatches += 1;
            }
        }
    }
    if mismatches == 0 {
        ok("256 circuits × 16 exponents match exactly")
    } else {
        fail(format!("{mismatches} mismatches"))
    }
}

fn soundness_reports() -> BTreeMap<ReductionId, Report> {
    let cfg = RoundtripConfig {
        seed: 2024,
        count: 200,
        n_min: 1,
        n_max: 3,
        generator: Generator::Random,
        per_case_limit: None,
        jobs: None,
    };
    ReductionId::ALL
        .into_iter()
        .map(|id| (id, run_roundtrip(&[id], &cfg).unwrap()))
        .collect()
}

/// Criterion 3: every enumerated target solution pulls back to a verified
/// source solution.
fn soundness(reports: &BTreeMap<ReductionId, Report>) -> Verdict {
    let mut failures = 0;
    let mut solutions = 0;
    for report in reports.values() {
        failures += report
            .failures
            .iter()
            .filter(|f| !f.error.contains("ceiling"))
            .count();
        for t in report.entries.values() {
            solutions += t.solutions() + t.solved_directly;
            if t.pulled_back_verified != t.solutions() + t.solved_directly {
                failures += 1;
            }
        }
    }
    let detail = format!("{} reductions, 200 instances each, {solutions} solutions", reports.len());
    if failures == 0 {
        ok(detail)
    } else {
        fail(format!("{detail}, {failures} failures"))
    }
}

/// Criterion 4: no solution of a ruled-out case exists on the same corpus.
fn impossibility(reports: &BTreeMap<ReductionId, Report>) -> Verdict {
    let mut hits = Vec::new();
    let mut checked = 0;
    for (id, report) in reports {
        let t = &report.entries[id.name()];
        for &case in id.impossible_cases() {
            checked += 1;
            let k = t.impossible_case_hits.get(&case).copied().unwrap_or(u64::MAX);
            if k != 0 {
                hits.push(format!("{id} case {case}: {k}"));
            }
        }
    }
    if hits.is_empty() {
        ok(format!("{checked} ruled-out cases, 0 occurrences"))
    } else {
        fail(hits.join("; "))
    }
}

/// Criterion 5: DLog_p through DLog for every p ≤ 31, generator and target.
fn dlogp_end_to_end() -> Verdict {
    let mut count = 0;
    for p in (2..=31u64).filter(|&p| is_prime(p)) {
        for g in generators(p) {
            for y in 1..p {
                count += 1;
                let inst = dlogp_instance(p, g, y);
                let direct: Vec<u64> = (0..p - 1).filter(|&x| mod_pow(g, x, p) == y % p).collect();
                if direct.len() != 1 {
                    return fail(format!("p {p} g {g} y {y}: {} exponents", direct.len()));
                }
                let own = enumerate_solutions(&inst, VerifyOptions::default(), None).unwrap();
                if own != vec![Solution::DLogP(direct[0])] {
                    return fail(format!("p {p} g {g} y {y}: oracle found {own:?}"));
                }
                let x = match reduce(ReductionId::DlogpToDlog, &inst).unwrap() {
                    Outcome::Solved(Solution::DLogP(x)) => x,
                    Outcome::Solved(other) => return fail(format!("unexpected {other:?}")),
                    Outcome::Reduced(r) => {
                        let all = enumerate_solutions(r.target(), VerifyOptions::default(), None).unwrap();
                        if all.len() != 1 {
                            return fail(format!("p {p} g {g} y {y}: target has {} solutions", all.len()));
                        }
                        match r.pull_back(&brute_force(r.target()).unwrap()) {
                            Ok(Solution::DLogP(x)) => x,
                            other => return fail(format!("p {p} g {g} y {y}: pull-back {other:?}")),
                        }
                    }
                };
                if x != direct[0] || mod_pow(g, x, p) != y {
                    return fail(format!("p {p} g {g} y {y}: got {x}, want {}", direct[0]));
                }
            }
        }
    }
    ok(format!("{count} instances, unique exponent each"))
}

/// Criterion 6: brute force solves 200 seeded instances of every problem.
fn totality() -> Verdict {
    let mut misses = Vec::new();
    for problem in Problem::ALL {
        let max_n = if matches!(problem, Problem::DLog | Problem::Index) { 4 } else { 6 };
        for i in 0..200u64 {
            let n = 1 + (i as usize % max_n);
            let inst = random_instance(problem, n, &mut rng_for(mix(6, problem as u64, i))).unwrap();
            if let Err(e) = brute_force(&inst) {
                misses.push(format!("{problem} #{i}: {e}"));
            }
        }
    }
    if misses.is_empty() {
        ok("10 problems × 200 instances solved")
    } else {
        fail(misses.join("; "))
    }
}

/// Criterion 7: square-and-multiply performs |bd_0(x)| + popcount steps.
fn trace_law() -> Verdict {
    let s = 1u64 << 10;
    // Addition modulo 2^10.
    let mut b = CircuitBuilder::new(20);
    let x = b.inputs();
    let (sum, _) = b.add(&x[..10], &x[10..]);
    let reps = [
        identity_groupoid(10, 0),
        GroupoidRep { s, f: b.finish(&sum), id: 3, g: 7, t: 0 },
    ];
    for rep in &reps {
        let grp = Groupoid::new(rep).unwrap();
        for x in 0..s {
            let bits = bit_decompose_minimal(x);
            let want = bits.width() + bits.count_ones();
            let got = grp.trace(x).steps.len();
            if got != want {
                return fail(format!("x = {x}: {got} steps, want {want}"));
            }
        }
    }
    ok("all x < 1024, two operators")
}

/// Criterion 8: gate-count ceilings hold on the soundness corpus and on wider
/// sources up to n = 6.
fn ceilings(reports: &BTreeMap<ReductionId, Report>) -> Verdict {
    let mut over: Vec<String> = reports
        .values()
        .flat_map(|r| &r.failures)
        .filter(|f| f.error.contains("ceiling"))
        .map(|f| format!("{} #{}: {}", f.entry, f.index, f.error))
        .collect();
    let mut checked = 0;
    for id in ReductionId::ALL {
        for i in 0..200u64 {
            let n = 1 + (i as usize % 6);
            let src = random_instance(id.source(), n, &mut rng_for(mix(8, id as u64, i))).unwrap();
            if let Outcome::Reduced(r) = reduce(id, &src).unwrap() {
                checked += 1;
                let (got, cap) = (r.target().gate_count() as u64, id.gate_ceiling(&src));
                if got > cap {
                    over.push(format!("{id} #{i}: {got} > {cap}"));
                }
            }
        }
    }
    if over.is_empty() {
        ok(format!("{checked} wide targets plus the soundness corpus within ceilings"))
    } else {
        fail(over.join("; "))
    }
}

/// Criterion 9: identical seed and configuration give byte-identical reports.
fn determinism() -> Verdict {
    let cfg = FuzzConfig { count: 40, ..FuzzConfig::default() };
    let a = run_fuzz(&FuzzConfig { jobs: Some(1), ..cfg.clone() }).unwrap().to_json();
    let b = run_fuzz(&FuzzConfig { jobs: Some(4), ..cfg.clone() }).unwrap().to_json();
    let c = run_fuzz(&cfg).unwrap().to_json();
    if a == b && b == c {
        ok(format!("three runs, {} bytes each", a.len()))
    } else {
        fail("reports differ")
    }
}

fn main() -> ExitCode {
    let mut all_pass = true;
    let mut line = |k: usize, limit: Option<Duration>, start: Instant, out: Verdict| {
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took < l);
        let pass = out.pass && in_time;
        all_pass &= pass;
        let budget = limit.map_or(String::new(), |l| format!(" / {:.0?} budget", l));
        let late = if in_time { "" } else { ", over budget" };
        println!(
            "criterion {k}: {} ({}; {:.2?}{budget}{late})",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took
        );
    };

    let t = Instant::now();
    line(1, Some(Duration::from_secs(1)), t, identity_tree());
    let t = Instant::now();
    line(2, Some(Duration::from_secs(10)), t, pigeon_index_tree());

    let t = Instant::now();
    let reports = soundness_reports();
    let built = t.elapsed();
    line(3, Some(Duration::from_secs(300)), t, soundness(&reports));
    let t = Instant::now() - built;
    line(4, Some(Duration::from_secs(300)), t, impossibility(&reports));

    let t = Instant::now();
    line(5, Some(Duration::from_secs(60)), t, dlogp_end_to_end());
    let t = Instant::now();
    line(6, None, t, totality());
    let t = Instant::now();
    line(7, None, t, trace_law());
    let t = Instant::now();
    line(8, None, t, ceilings(&reports));
    let t = Instant::now();
    line(9, None, t, determinism());

    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

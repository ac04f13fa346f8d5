use std::collections::HashMap;

use super::validate::validate_instance;
use super::{
    BlichfeldtSolution, ClawSolution, DLogSolution, DoveSolution, GeneralClawSolution, Groupoid,
    Instance, IndexSolution, PigeonSolution, Solution, VerifyOptions,
};
use crate::circuit::Circuit;
use crate::encoding::{bit_decompose, Bitstring};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Size bounds for the exhaustive oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest circuit input width that is enumerated.
    pub max_input_bits: usize,
    /// Largest groupoid order, or `p − 1` for DLogP.
    pub max_order: u64,
    /// Largest `s²` for which the overflow case is scanned pair by pair.
    pub max_pair_scan: u64,
    /// Largest number of solutions collected per case when no limit is given.
    pub max_solutions: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_input_bits: 20,
            max_order: 1 << 16,
            max_pair_scan: 1 << 26,
            max_solutions: 1 << 24,
        }
    }
}

/// The first solution in the canonical order: cases ascending, then witnesses
/// (or ordered witness pairs) in ascending lexicographic order.
pub fn brute_force(inst: &Instance) -> Result<Solution> {
    brute_force_with(inst, VerifyOptions::default())
}

pub fn brute_force_with(inst: &Instance, opts: VerifyOptions) -> Result<Solution> {
    let search = Search::new(inst, opts, SearchLimits::default())?;
    for case in 1..=inst.problem().cases() {
        if let Some(sol) = search.case(case, Some(1))?.into_iter().next() {
            return Ok(sol);
        }
    }
    Err(Error::Exhausted(inst.problem().to_string()))
}

/// Every solution of every case, in canonical order, at most `per_case_limit`
/// of each case when given.
pub fn enumerate_solutions(
    inst: &Instance,
    opts: VerifyOptions,
    per_case_limit: Option<usize>,
) -> Result<Vec<Solution>> {
    let search = Search::new(inst, opts, SearchLimits::default())?;
    let mut out = Vec::new();
    for case in 1..=inst.problem().cases() {
        out.extend(search.case(case, per_case_limit)?);
    }
    Ok(out)
}

enum Prepared {
    Table {
        n: usize,
        t: Vec<u64>,
    },
    Pair {
        n: usize,
        t0: Vec<u64>,
        t1: Vec<u64>,
        s: u64,
    },
    Groupoid {
        grp: Groupoid,
        idx: Vec<u64>,
    },
    DLogP {
        p: u64,
        g: u64,
        y: u64,
    },
    Blichfeldt {
        k: usize,
        s: u64,
        values: Vec<u64>,
        vectors: Vec<Vec<i64>>,
        lattice: Lattice,
    },
}

struct Search<'a> {
    inst: &'a Instance,
    opts: VerifyOptions,
    limits: SearchLimits,
    prep: Prepared,
}

fn table(c: &Circuit, limits: &SearchLimits) -> Result<Vec<u64>> {
    if c.num_inputs() > limits.max_input_bits {
        return Err(Error::TooLarge(format!(
            "{} input bits (limit {})",
            c.num_inputs(),
            limits.max_input_bits
        )));
    }
    c.tabulate()
}

fn bits(x: usize, n: usize) -> Bitstring {
    bit_decompose(x as u64, n).expect("index fits its width")
}

/// Bucketed ordered pairs `(u, v)` with `key_u(u) = key_v(v)`, `u` ascending
/// then `v` ascending, passing `keep`.
fn pairs(
    len: usize,
    key_u: impl Fn(usize) -> Option<u64>,
    key_v: impl Fn(usize) -> Option<u64>,
    keep: impl Fn(usize, usize) -> bool,
    limit: usize,
) -> Vec<(usize, usize)> {
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    for v in 0..len {
        if let Some(k) = key_v(v) {
            buckets.entry(k).or_default().push(v);
        }
    }
    let mut out = Vec::new();
    for u in 0..len {
        let Some(bucket) = key_u(u).and_then(|k| buckets.get(&k)) else {
            continue;
        };
        for &v in bucket {
            if keep(u, v) {
                out.push((u, v));
                if out.len() >= limit {
                    return out;
                }
            }
        }
    }
    out
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, opts: VerifyOptions, limits: SearchLimits) -> Result<Search<'a>> {
        let violations = validate_instance(inst);
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        let prep = match inst {
            Instance::Pigeon { circuit }
            | Instance::Collision { circuit }
            | Instance::PrefixCollision { circuit }
            | Instance::Dove { circuit } => Prepared::Table {
                n: circuit.num_inputs(),
                t: table(circuit, &limits)?,
            },
            Instance::Claw { sigma0, sigma1 } => Prepared::Pair {
                n: sigma0.num_inputs(),
                t0: table(sigma0, &limits)?,
                t1: table(sigma1, &limits)?,
                s: 1 << sigma0.num_inputs(),
            },
            Instance::GeneralClaw { sigma0, sigma1, s } => Prepared::Pair {
                n: sigma0.num_inputs(),
                t0: table(sigma0, &limits)?,
                t1: table(sigma1, &limits)?,
                s: *s,
            },
            Instance::DLog(rep) | Instance::Index(rep) => {
                if rep.s > limits.max_order {
                    return Err(Error::TooLarge(format!("groupoid order {}", rep.s)));
                }
                let grp = Groupoid::new(rep)?;
                let idx = grp.index_table();
                Prepared::Groupoid { grp, idx }
            }
            Instance::DLogP { p, g, y, .. } => {
                if *p - 1 > limits.max_order {
                    return Err(Error::TooLarge(format!("p = {p}")));
                }
                Prepared::DLogP {
                    p: *p,
                    g: *g,
                    y: *y,
                }
            }
            Instance::Blichfeldt {
                basis,
                s,
                v,
                coord_width,
            } => {
                if v.num_outputs() > 64 {
                    return Err(Error::TooLarge(format!("V has {} outputs", v.num_outputs())));
                }
                let values = table(v, &limits)?;
                let (n, m) = (basis.dim(), *coord_width);
                let mask = if m >= 64 { u64::MAX } else { (1u64 << m) - 1 };
                let vectors = values[..*s as usize]
                    .iter()
                    .map(|&val| {
                        (0..n)
                            .map(|i| ((val >> (m * (n - 1 - i))) & mask) as i64)
                            .collect()
                    })
                    .collect();
                Prepared::Blichfeldt {
                    k: v.num_inputs(),
                    s: *s,
                    values,
                    vectors,
                    lattice: Lattice::new(basis.clone())?,
                }
            }
        };
        Ok(Search {
            inst,
            opts,
            limits,
            prep,
        })
    }

    fn case(&self, case: u8, limit: Option<usize>) -> Result<Vec<Solution>> {
        let cap = limit.unwrap_or(self.limits.max_solutions.saturating_add(1));
        let sols = self.collect(case, cap)?;
        if limit.is_none() && sols.len() > self.limits.max_solutions {
            return Err(Error::TooLarge(format!(
                "more than {} solutions of case {case}",
                self.limits.max_solutions
            )));
        }
        Ok(sols)
    }

    fn collect(&self, case: u8, cap: usize) -> Result<Vec<Solution>> {
        let singles = |len: usize, hit: &dyn Fn(usize) -> bool| -> Vec<usize> {
            (0..len).filter(|&u| hit(u)).take(cap).collect()
        };
        Ok(match (&self.prep, self.inst) {
            (Prepared::Table { n, t }, inst) => {
                let n = *n;
                let len = t.len();
                let collisions = |key: &dyn Fn(usize) -> u64| {
                    pairs(len, |u| Some(key(u)), |v| Some(key(v)), |u, v| u != v, cap)
                };
                let pair_bits = |(u, v): (usize, usize)| (bits(u, n), bits(v, n));
                match (inst, case) {
                    (Instance::Pigeon { .. }, 1) => singles(len, &|u| t[u] == 0)
                        .into_iter()
                        .map(|u| Solution::Pigeon(PigeonSolution::Preimage(bits(u, n))))
                        .collect(),
                    (Instance::Pigeon { .. }, 2) => collisions(&|u| t[u])
                        .into_iter()
                        .map(|p| {
                            let (a, b) = pair_bits(p);
                            Solution::Pigeon(PigeonSolution::Collision(a, b))
                        })
                        .collect(),
                    (Instance::Collision { .. }, 1) => collisions(&|u| t[u])
                        .into_iter()
                        .map(|p| {
                            let (a, b) = pair_bits(p);
                            Solution::Collision(a, b)
                        })
                        .collect(),
                    (Instance::PrefixCollision { .. }, 1) => collisions(&|u| t[u] >> 1)
                        .into_iter()
                        .map(|p| {
                            let (a, b) = pair_bits(p);
                            Solution::PrefixCollision(a, b)
                        })
                        .collect(),
                    (Instance::Dove { .. }, 1) => singles(len, &|u| t[u] == 0)
                        .into_iter()
                        .map(|u| Solution::Dove(DoveSolution::Zero(bits(u, n))))
                        .collect(),
                    (Instance::Dove { .. }, 2) => singles(len, &|u| t[u] == 1)
                        .into_iter()
                        .map(|u| Solution::Dove(DoveSolution::One(bits(u, n))))
                        .collect(),
                    (Instance::Dove { .. }, 3) => collisions(&|u| t[u])
                        .into_iter()
                        .map(|p| {
                            let (a, b) = pair_bits(p);
                            Solution::Dove(DoveSolution::Collision(a, b))
                        })
                        .collect(),
                    (Instance::Dove { .. }, 4) => {
                        pairs(len, |u| Some(t[u] ^ 1), |v| Some(t[v]), |u, v| u != v, cap)
                            .into_iter()
                            .map(|p| {
                                let (a, b) = pair_bits(p);
                                Solution::Dove(DoveSolution::NearCollision(a, b))
                            })
                            .collect()
                    }
                    _ => unreachable!("case {case} of {}", inst.problem()),
                }
            }
            (Prepared::Pair { n, t0, t1, s }, inst) => {
                let (n, s) = (*n, *s);
                let len = t0.len();
                let general = matches!(inst, Instance::GeneralClaw { .. });
                let small = |u: usize| (u as u64) < s;
                let found: Vec<(usize, usize)> = match case {
                    1 => pairs(
                        len,
                        |u| small(u).then(|| t0[u]),
                        |v| small(v).then(|| t1[v]),
                        |_, _| true,
                        cap,
                    ),
                    2 => pairs(len, |u| Some(t0[u]), |v| Some(t0[v]), |u, v| u != v, cap),
                    3 => pairs(len, |u| Some(t1[u]), |v| Some(t1[v]), |u, v| u != v, cap),
                    4 => singles(len, &|u| small(u) && t0[u] >= s)
                        .into_iter()
                        .map(|u| (u, u))
                        .collect(),
                    5 => singles(len, &|u| small(u) && t1[u] >= s)
                        .into_iter()
                        .map(|u| (u, u))
                        .collect(),
                    _ => unreachable!(),
                };
                found
                    .into_iter()
                    .map(|(u, v)| {
                        let (a, b) = (bits(u, n), bits(v, n));
                        if general {
                            Solution::GeneralClaw(match case {
                                1 => GeneralClawSolution::Claw(a, b),
                                2 => GeneralClawSolution::Collision0(a, b),
                                3 => GeneralClawSolution::Collision1(a, b),
                                4 => GeneralClawSolution::Escape0(a),
                                _ => GeneralClawSolution::Escape1(a),
                            })
                        } else {
                            Solution::Claw(match case {
                                1 => ClawSolution::Claw(a, b),
                                2 => ClawSolution::Collision0(a, b),
                                _ => ClawSolution::Collision1(a, b),
                            })
                        }
                    })
                    .collect()
            }
            (Prepared::Groupoid { grp, idx }, inst) => {
                let is_index = matches!(inst, Instance::Index(_));
                self.groupoid_case(grp, idx, case, cap, is_index)?
            }
            (Prepared::DLogP { p, g, y }, _) => {
                let mut out = Vec::new();
                let mut acc = 1u64 % p;
                for x in 0..p - 1 {
                    if acc == y % p {
                        out.push(Solution::DLogP(x));
                        if out.len() >= cap {
                            break;
                        }
                    }
                    acc = ((acc as u128 * *g as u128) % *p as u128) as u64;
                }
                out
            }
            (
                Prepared::Blichfeldt {
                    k,
                    s,
                    values,
                    vectors,
                    lattice,
                },
                _,
            ) => {
                let len = *s as usize;
                match case {
                    1 => pairs(
                        len,
                        |u| Some(values[u]),
                        |v| Some(values[v]),
                        |u, v| u != v,
                        cap,
                    )
                    .into_iter()
                    .map(|(u, v)| {
                        Solution::Blichfeldt(BlichfeldtSolution::Collision(bits(u, *k), bits(v, *k)))
                    })
                    .collect(),
                    2 => singles(len, &|i| lattice.contains(&vectors[i]))
                        .into_iter()
                        .map(|i| Solution::Blichfeldt(BlichfeldtSolution::LatticePoint(i as u64)))
                        .collect(),
                    _ => {
                        let mut ids = HashMap::new();
                        let keys: Vec<u64> = vectors
                            .iter()
                            .map(|x| {
                                let next = ids.len() as u64;
                                *ids.entry(lattice.coset_key(x)).or_insert(next)
                            })
                            .collect();
                        pairs(
                            len,
                            |i| Some(keys[i]),
                            |j| Some(keys[j]),
                            |i, j| vectors[i] != vectors[j],
                            cap,
                        )
                        .into_iter()
                        .map(|(i, j)| {
                            Solution::Blichfeldt(BlichfeldtSolution::Congruent(i as u64, j as u64))
                        })
                        .collect()
                    }
                }
            }
        })
    }

    fn groupoid_case(
        &self,
        grp: &Groupoid,
        idx: &[u64],
        case: u8,
        cap: usize,
        is_index: bool,
    ) -> Result<Vec<Solution>> {
        let s = grp.s();
        let t = grp.rep().t;
        let len = idx.len();
        let pack = |case: u8, x: usize, y: usize| -> Solution {
            let (x, y) = (x as u64, y as u64);
            if is_index {
                Solution::Index(match case {
                    1 => IndexSolution::Log(x),
                    2 => IndexSolution::Overflow(x, y),
                    _ => IndexSolution::Collision(x, y),
                })
            } else {
                Solution::DLog(match case {
                    1 => DLogSolution::Log(x),
                    2 => DLogSolution::Overflow(x, y),
                    3 => DLogSolution::IndexCollision(x, y),
                    4 => DLogSolution::CosetCollision(x, y),
                    _ => DLogSolution::Homomorphism(x, y),
                })
            }
        };
        let found: Vec<(usize, usize)> = match case {
            1 => (0..len).filter(|&x| idx[x] == t).take(cap).map(|x| (x, x)).collect(),
            2 => {
                // f_G has l output bits, so nothing escapes when s = 2^l.
                if s.is_power_of_two() {
                    Vec::new()
                } else if s * s > self.limits.max_pair_scan {
                    return Err(Error::TooLarge(format!("overflow scan over {s}² pairs")));
                } else {
                    let strict = is_index && self.opts.strict_index_distinct;
                    let mut out = Vec::new();
                    'scan: for x in 0..s {
                        for y in 0..s {
                            if strict && x == y {
                                continue;
                            }
                            if grp.op(x, y) >= s {
                                out.push((x as usize, y as usize));
                                if out.len() >= cap {
                                    break 'scan;
                                }
                            }
                        }
                    }
                    out
                }
            }
            3 => pairs(len, |x| Some(idx[x]), |y| Some(idx[y]), |x, y| x != y, cap),
            4 => {
                let key = |x: usize| (idx[x] < s).then(|| grp.op(t, idx[x]));
                pairs(len, key, key, |x, y| x != y, cap)
            }
            5 => pairs(
                len,
                |x| Some(idx[x]),
                |y| (idx[y] < s).then(|| grp.op(t, idx[y])),
                |x, y| idx[((x as u64 + s - y as u64) % s) as usize] != t,
                cap,
            ),
            _ => unreachable!(),
        };
        Ok(found.into_iter().map(|(x, y)| pack(case, x, y)).collect())
    }
}

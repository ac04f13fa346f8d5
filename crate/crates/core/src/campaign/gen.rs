//! Seeded instance generators.
//!
//! Every generator draws from a [`ChaCha8Rng`], so a seed fixes the instance
//! on every platform. Random circuits come in two flavours, picked with equal
//! probability:
//!
//! - a uniform truth table, built by [`CircuitBuilder::from_truth_table`];
//! - a random gate list: `g` gates with `g` uniform in `[n, 4n + 4]`, each gate
//!   an AND, OR, XOR or NOT (uniform) over uniformly chosen earlier wires, and
//!   each output a uniformly chosen non-input gate.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CircuitBuilder, Gate, Op};
use crate::encoding::ceil_log2;
use crate::error::{Error, Result};
use crate::lattice::{det_exact, IntMatrix};
use crate::number::{factorize, is_generator, is_prime};
use crate::problems::{validate_instance, GroupoidRep, Instance, Problem};
use crate::reductions::shifted_groupoid;

/// `splitmix64`, used to derive per-instance seeds from a campaign seed.
pub fn mix(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed ^ a.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ b.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random gate list with `gates` non-input gates.
pub fn random_gate_circuit(rng: &mut impl Rng, n: usize, m: usize, gates: usize) -> Circuit {
    let mut list: Vec<Gate> = (0..n).map(|_| Gate::new(Op::Input, &[]).unwrap()).collect();
    for _ in 0..gates {
        let wires = list.len();
        let op = *[Op::And, Op::Or, Op::Xor, Op::Not].choose(rng).unwrap();
        let args: Vec<usize> = (0..op.arity()).map(|_| rng.gen_range(0..wires)).collect();
        list.push(Gate::new(op, &args).unwrap());
    }
    let total = list.len();
    let outputs = (0..m)
        .map(|_| if gates == 0 { rng.gen_range(0..n) } else { rng.gen_range(n..total) })
        .collect();
    Circuit::new(n, list, outputs).expect("generated circuits are well formed")
}

pub fn random_table_circuit(rng: &mut impl Rng, n: usize, m: usize) -> Circuit {
    let table: Vec<u64> = (0..1u64 << n).map(|_| rng.gen_range(0..1u64 << m)).collect();
    CircuitBuilder::from_truth_table(n, m, &table)
}

pub fn random_circuit(rng: &mut impl Rng, n: usize, m: usize) -> Circuit {
    if rng.gen_bool(0.5) {
        random_table_circuit(rng, n, m)
    } else {
        let gates = rng.gen_range(n..=4 * n + 4);
        random_gate_circuit(rng, n, m, gates)
    }
}

/// Smallest witness width for which [`random_instance`] can build `problem`.
pub fn min_bits(problem: Problem) -> usize {
    match problem {
        Problem::Collision | Problem::DLogP => 2,
        _ => 1,
    }
}

/// A random valid instance of `problem` whose witnesses have at most `n` bits
/// (exactly `n` for circuit problems).
///
/// Groupoids are drawn from three families: a random operator circuit, the
/// cyclic group `Z_s` under addition, and the shifted construction of
/// [`shifted_groupoid`] (when `s` is a power of two). `DLogP` uses a prime
/// `p < 2^n`.
pub fn random_instance(problem: Problem, n: usize, rng: &mut impl Rng) -> Result<Instance> {
    let n = n.max(min_bits(problem));
    if n > 20 {
        return Err(Error::TooLarge(format!("witness width {n}")));
    }
    let inst = match problem {
        Problem::Pigeon => Instance::Pigeon { circuit: random_circuit(rng, n, n) },
        Problem::Collision => {
            let m = rng.gen_range(1..n);
            Instance::Collision { circuit: random_circuit(rng, n, m) }
        }
        Problem::PrefixCollision => Instance::PrefixCollision { circuit: random_circuit(rng, n, n) },
        Problem::Dove => Instance::Dove { circuit: random_circuit(rng, n, n) },
        Problem::Claw => Instance::Claw {
            sigma0: random_circuit(rng, n, n),
            sigma1: random_circuit(rng, n, n),
        },
        Problem::GeneralClaw => Instance::GeneralClaw {
            sigma0: random_circuit(rng, n, n),
            sigma1: random_circuit(rng, n, n),
            s: rng.gen_range(1..=1u64 << n),
        },
        Problem::DLog => Instance::DLog(random_groupoid(rng, n)),
        Problem::Index => Instance::Index(random_groupoid(rng, n)),
        Problem::DLogP => random_dlogp(rng, n),
        Problem::Blichfeldt => random_blichfeldt(rng, n),
    };
    let violations = validate_instance(&inst);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    Ok(inst)
}

fn random_groupoid(rng: &mut impl Rng, n: usize) -> GroupoidRep {
    let s = rng.gen_range(2..=1u64 << n);
    let l = ceil_log2(s);
    let pick = |rng: &mut dyn rand::RngCore| rng.gen_range(0..s);
    match rng.gen_range(0..3) {
        0 if s.is_power_of_two() => {
            let w = rng.gen_range(0..s);
            shifted_groupoid(l, w, pick(rng))
        }
        1 => {
            let table: Vec<u64> = (0..1u64 << (2 * l))
                .map(|a| {
                    let (x, y) = (a >> l, a & ((1 << l) - 1));
                    if x < s && y < s {
                        (x + y) % s
                    } else {
                        rng.gen_range(0..1u64 << l)
                    }
                })
                .collect();
            GroupoidRep {
                s,
                f: CircuitBuilder::from_truth_table(2 * l, l, &table),
                id: 0,
                g: pick(rng),
                t: pick(rng),
            }
        }
        _ => GroupoidRep {
            s,
            f: random_circuit(rng, 2 * l, l),
            id: pick(rng),
            g: pick(rng),
            t: pick(rng),
        },
    }
}

/// Primes `p < 2^n`, smallest first.
pub fn primes_below_pow2(n: usize) -> Vec<u64> {
    (2..1u64 << n).filter(|&p| is_prime(p)).collect()
}

/// All generators of `Z_p^*`.
pub fn generators(p: u64) -> Vec<u64> {
    let factors = factorize(p - 1);
    (1..p).filter(|&g| is_generator(g, p, &factors)).collect()
}

pub fn dlogp_instance(p: u64, g: u64, y: u64) -> Instance {
    Instance::DLogP {
        p,
        factors: factorize(p - 1),
        g,
        y,
    }
}

fn random_dlogp(rng: &mut impl Rng, n: usize) -> Instance {
    let p = *primes_below_pow2(n).choose(rng).expect("n ≥ 2 admits p = 2 or 3");
    let g = *generators(p).choose(rng).unwrap();
    dlogp_instance(p, g, rng.gen_range(1..p))
}

/// Dimension 1 to 3, coordinate width 1 to 2, entries in `[−3, 3]` and
/// `|det B| ≤ 2^n`; `V` has `n` inputs and `s` is uniform in `[|det B|, 2^n]`.
fn random_blichfeldt(rng: &mut impl Rng, n: usize) -> Instance {
    let dim = rng.gen_range(1..=3usize);
    let m = rng.gen_range(1..=2usize);
    let cap = 1i64 << n;
    let (basis, det) = loop {
        let rows = (0..dim)
            .map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let b = IntMatrix::from_rows(rows).unwrap();
        let det: i64 = num_traits::ToPrimitive::to_i64(&det_exact(&b)).unwrap().abs();
        if det != 0 && det <= cap {
            break (b, det);
        }
    };
    Instance::Blichfeldt {
        basis,
        s: rng.gen_range(det as u64..=cap as u64),
        v: random_circuit(rng, n, dim * m),
        coord_width: m,
    }
}

/// Every `n → m` circuit given by its truth table, when there are at most `2^16`.
pub fn all_tables(n: usize, m: usize) -> Result<Vec<Circuit>> {
    let rows = 1u32 << n;
    let bits = m as u32 * rows;
    if bits > 16 {
        return Err(Error::TooLarge(format!("{n} → {m} circuits: 2^{bits} truth tables")));
    }
    Ok((0..1u64 << bits)
        .map(|code| {
            let table: Vec<u64> = (0..rows)
                .map(|r| (code >> (m as u32 * r)) & ((1 << m) - 1))
                .collect();
            CircuitBuilder::from_truth_table(n, m, &table)
        })
        .collect())
}

/// Every instance of `problem` of width `n` that can be listed exhaustively:
/// all truth tables for one-circuit problems (`m = n − 1` for Collision) and
/// all `(p, g, y)` with `p < 2^n` for DLogP.
pub fn all_instances(problem: Problem, n: usize) -> Result<Vec<Instance>> {
    Ok(match problem {
        Problem::Pigeon => all_tables(n, n)?.into_iter().map(|circuit| Instance::Pigeon { circuit }).collect(),
        Problem::Dove => all_tables(n, n)?.into_iter().map(|circuit| Instance::Dove { circuit }).collect(),
        Problem::PrefixCollision => all_tables(n, n)?
            .into_iter()
            .map(|circuit| Instance::PrefixCollision { circuit })
            .collect(),
        Problem::Collision if n >= 2 => all_tables(n, n - 1)?
            .into_iter()
            .map(|circuit| Instance::Collision { circuit })
            .collect(),
        Problem::DLogP => primes_below_pow2(n)
            .into_iter()
            .flat_map(|p| {
                generators(p)
                    .into_iter()
                    .flat_map(move |g| (1..p).map(move |y| dlogp_instance(p, g, y)))
            })
            .collect(),
        _ => {
            return Err(Error::Structural(format!(
                "no exhaustive listing of {problem} instances of width {n}"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_instances_are_valid_and_reproducible() {
        for problem in Problem::ALL {
            for n in 1..=4 {
                let a = random_instance(problem, n, &mut rng_for(mix(7, n as u64, 1))).unwrap();
                let b = random_instance(problem, n, &mut rng_for(mix(7, n as u64, 1))).unwrap();
                assert_eq!(a, b);
                assert!(validate_instance(&a).is_empty());
            }
        }
    }

    #[test]
    fn exhaustive_listings() {
        assert_eq!(all_instances(Problem::Pigeon, 2).unwrap().len(), 256);
        assert_eq!(all_instances(Problem::Collision, 3).unwrap().len(), 1 << 16);
        // p ∈ {2, 3, 5, 7, 11, 13}: φ(p − 1)·(p − 1) instances each.
        let want: usize = [1, 2, 8, 12, 40, 48].iter().sum();
        assert_eq!(all_instances(Problem::DLogP, 4).unwrap().len(), want);
        assert!(all_instances(Problem::Pigeon, 3).is_err());
        assert!(all_instances(Problem::Claw, 1).is_err());
    }
}

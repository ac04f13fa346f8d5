use serde::{Deserialize, Serialize};

use super::{
    BlichfeldtSolution, ClawSolution, DLogSolution, DoveSolution, GeneralClawSolution, Groupoid,
    Instance, IndexSolution, PigeonSolution, Solution,
};
use crate::circuit::Circuit;
use crate::encoding::{bit_compose, Bitstring};
use crate::error::{Error, Result};
use crate::lattice::{IntMatrix, Lattice};
use crate::number::mod_pow;

/// Verifier switches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Require `x ≠ y` for Index case 2. Off by default: the Index-to-Pigeon
    /// pull-back can produce an overflowing squaring step, where `x = y`.
    pub strict_index_distinct: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Accepted { case: u8 },
    Rejected { case: u8, reason: String },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted { .. })
    }

    pub fn case(&self) -> u8 {
        match self {
            Verdict::Accepted { case } | Verdict::Rejected { case, .. } => *case,
        }
    }
}

pub fn verify(inst: &Instance, sol: &Solution) -> Result<Verdict> {
    verify_with(inst, sol, VerifyOptions::default())
}

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, reason: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(reason())
    }
}

fn eval(c: &Circuit, u: &Bitstring) -> std::result::Result<Bitstring, String> {
    c.evaluate(u)
        .map_err(|_| format!("witness {u} has width {}, expected {}", u.width(), c.num_inputs()))
}

fn distinct(u: &Bitstring, v: &Bitstring) -> Check {
    ensure(u != v, || format!("witnesses must be distinct, both are {u}"))
}

fn below(x: u64, s: u64, what: &str) -> Check {
    ensure(x < s, || format!("{what} = {x} is not in [{s}]"))
}

/// Checks the predicate of the case `sol` claims.
pub fn verify_with(inst: &Instance, sol: &Solution, opts: VerifyOptions) -> Result<Verdict> {
    if inst.problem() != sol.problem() {
        return Err(Error::VariantMismatch {
            instance: inst.problem().to_string(),
            solution: sol.problem().to_string(),
        });
    }
    let check = match (inst, sol) {
        (Instance::Pigeon { circuit }, Solution::Pigeon(p)) => pigeon(circuit, p),
        (Instance::Collision { circuit }, Solution::Collision(u, v)) => collision(circuit, u, v),
        (Instance::PrefixCollision { circuit }, Solution::PrefixCollision(u, v)) => {
            prefix_collision(circuit, u, v)
        }
        (Instance::Dove { circuit }, Solution::Dove(d)) => dove(circuit, d),
        (Instance::Claw { sigma0, sigma1 }, Solution::Claw(c)) => claw(sigma0, sigma1, c),
        (Instance::GeneralClaw { sigma0, sigma1, s }, Solution::GeneralClaw(c)) => {
            general_claw(sigma0, sigma1, *s, c)
        }
        (Instance::DLog(rep), Solution::DLog(d)) => dlog(&Groupoid::new(rep)?, d),
        (Instance::Index(rep), Solution::Index(d)) => index(&Groupoid::new(rep)?, d, opts),
        (Instance::DLogP { p, g, y, .. }, Solution::DLogP(x)) => below(*x, p.saturating_sub(1), "x")
            .and_then(|()| {
                let gx = mod_pow(*g, *x, *p);
                ensure(gx == *y % p, || format!("g^x = {gx}, not {y} (mod {p})"))
            }),
        (
            Instance::Blichfeldt {
                basis,
                s,
                v,
                coord_width,
            },
            Solution::Blichfeldt(b),
        ) => blichfeldt(basis, *s, v, *coord_width, b)?,
        _ => unreachable!("problems were compared above"),
    };
    let case = sol.case();
    Ok(match check {
        Ok(()) => Verdict::Accepted { case },
        Err(reason) => Verdict::Rejected { case, reason },
    })
}

fn pigeon(c: &Circuit, sol: &PigeonSolution) -> Check {
    match sol {
        PigeonSolution::Preimage(u) => {
            let out = eval(c, u)?;
            ensure(out.is_zero(), || format!("C({u}) = {out}, not all zeros"))
        }
        PigeonSolution::Collision(u, v) => collision(c, u, v),
    }
}

fn collision(c: &Circuit, u: &Bitstring, v: &Bitstring) -> Check {
    distinct(u, v)?;
    let (cu, cv) = (eval(c, u)?, eval(c, v)?);
    ensure(cu == cv, || format!("C({u}) = {cu} differs from C({v}) = {cv}"))
}

fn prefix_collision(c: &Circuit, u: &Bitstring, v: &Bitstring) -> Check {
    distinct(u, v)?;
    let (cu, cv) = (eval(c, u)?, eval(c, v)?);
    let k = cu.width() - 1;
    ensure(cu.bits()[..k] == cv.bits()[..k], || {
        format!("C({u}) = {cu} and C({v}) = {cv} differ before the last bit")
    })
}

fn dove(c: &Circuit, sol: &DoveSolution) -> Check {
    match sol {
        DoveSolution::Zero(u) => {
            let out = eval(c, u)?;
            ensure(out.is_zero(), || format!("C({u}) = {out}, not all zeros"))
        }
        DoveSolution::One(u) => {
            let out = eval(c, u)?;
            ensure(out == Bitstring::unit(out.width()), || {
                format!("C({u}) = {out}, not 0…01")
            })
        }
        DoveSolution::Collision(u, v) => collision(c, u, v),
        DoveSolution::NearCollision(u, v) => {
            distinct(u, v)?;
            let (cu, cv) = (eval(c, u)?, eval(c, v)?);
            ensure(cu == cv.flip_last(), || {
                format!("C({u}) = {cu} and C({v}) = {cv} do not differ in exactly the last bit")
            })
        }
    }
}

fn claw(s0: &Circuit, s1: &Circuit, sol: &ClawSolution) -> Check {
    match sol {
        ClawSolution::Claw(u, v) => {
            let (a, b) = (eval(s0, u)?, eval(s1, v)?);
            ensure(a == b, || format!("σ0({u}) = {a} differs from σ1({v}) = {b}"))
        }
        ClawSolution::Collision0(u, v) => collision(s0, u, v),
        ClawSolution::Collision1(u, v) => collision(s1, u, v),
    }
}

fn general_claw(s0: &Circuit, s1: &Circuit, s: u64, sol: &GeneralClawSolution) -> Check {
    let small = |u: &Bitstring| {
        eval(s0, u)?;
        below(bit_compose(u), s, "bc(u)")
    };
    match sol {
        GeneralClawSolution::Claw(u, v) => {
            small(u)?;
            small(v)?;
            claw(s0, s1, &ClawSolution::Claw(u.clone(), v.clone()))
        }
        GeneralClawSolution::Collision0(u, v) => collision(s0, u, v),
        GeneralClawSolution::Collision1(u, v) => collision(s1, u, v),
        GeneralClawSolution::Escape0(u) | GeneralClawSolution::Escape1(u) => {
            small(u)?;
            let sigma = if matches!(sol, GeneralClawSolution::Escape0(_)) { s0 } else { s1 };
            let out = bit_compose(&eval(sigma, u)?);
            ensure(out >= s, || format!("bc(σ({u})) = {out} < s = {s}"))
        }
    }
}

/// `(x − y) mod s`.
fn sub_mod(x: u64, y: u64, s: u64) -> u64 {
    (x + s - y) % s
}

fn dlog(grp: &Groupoid, sol: &DLogSolution) -> Check {
    let s = grp.s();
    let t = grp.rep().t;
    match *sol {
        DLogSolution::Log(x) => {
            below(x, s, "x")?;
            let ix = grp.index(x);
            ensure(ix == t, || format!("I({x}) = {ix}, not t = {t}"))
        }
        DLogSolution::Overflow(x, y) => overflow(grp, x, y),
        DLogSolution::IndexCollision(x, y) => index_collision(grp, x, y),
        DLogSolution::CosetCollision(x, y) => {
            below(x, s, "x")?;
            below(y, s, "y")?;
            ensure(x != y, || format!("x = y = {x}"))?;
            let (ix, iy) = (grp.index(x), grp.index(y));
            below(ix, s, "I(x)")?;
            below(iy, s, "I(y)")?;
            let (a, b) = (grp.op(t, ix), grp.op(t, iy));
            ensure(a == b, || format!("f(t, I(x)) = {a} differs from f(t, I(y)) = {b}"))
        }
        DLogSolution::Homomorphism(x, y) => {
            below(x, s, "x")?;
            below(y, s, "y")?;
            let (ix, iy) = (grp.index(x), grp.index(y));
            below(iy, s, "I(y)")?;
            let shifted = grp.op(t, iy);
            ensure(ix == shifted, || format!("I(x) = {ix} differs from f(t, I(y)) = {shifted}"))?;
            let d = sub_mod(x, y, s);
            let id = grp.index(d);
            ensure(id != t, || format!("I(x − y mod s) = I({d}) = t"))
        }
    }
}

fn overflow(grp: &Groupoid, x: u64, y: u64) -> Check {
    let s = grp.s();
    below(x, s, "x")?;
    below(y, s, "y")?;
    let v = grp.op(x, y);
    ensure(v >= s, || format!("f({x}, {y}) = {v} < s = {s}"))
}

fn index_collision(grp: &Groupoid, x: u64, y: u64) -> Check {
    let s = grp.s();
    below(x, s, "x")?;
    below(y, s, "y")?;
    ensure(x != y, || format!("x = y = {x}"))?;
    let (ix, iy) = (grp.index(x), grp.index(y));
    ensure(ix == iy, || format!("I({x}) = {ix} differs from I({y}) = {iy}"))
}

fn index(grp: &Groupoid, sol: &IndexSolution, opts: VerifyOptions) -> Check {
    match *sol {
        IndexSolution::Log(x) => dlog(grp, &DLogSolution::Log(x)),
        IndexSolution::Overflow(x, y) => {
            if opts.strict_index_distinct {
                ensure(x != y, || format!("strict mode requires distinct operands, both are {x}"))?;
            }
            overflow(grp, x, y)
        }
        IndexSolution::Collision(x, y) => index_collision(grp, x, y),
    }
}

/// Splits `V`'s output into `n` blocks of `m` bits, each read as a coordinate.
pub(crate) fn decode_vector(out: &Bitstring, n: usize, m: usize) -> Vec<i64> {
    out.bits()
        .chunks(m)
        .take(n)
        .map(|block| block.iter().fold(0i64, |acc, &b| (acc << 1) | b as i64))
        .collect()
}

fn blichfeldt(
    basis: &IntMatrix,
    s: u64,
    v: &Circuit,
    m: usize,
    sol: &BlichfeldtSolution,
) -> Result<Check> {
    let n = basis.dim();
    if v.num_outputs() != n * m {
        return Err(Error::Width {
            expected: n * m,
            found: v.num_outputs(),
        });
    }
    let lattice = Lattice::new(basis.clone())?;
    let k = v.num_inputs();
    let vector = |i: u64| -> std::result::Result<Vec<i64>, String> {
        below(i, s, "i")?;
        let input = crate::encoding::bit_decompose(i, k).map_err(|e| e.to_string())?;
        Ok(decode_vector(&eval(v, &input)?, n, m))
    };
    Ok(match sol {
        BlichfeldtSolution::Collision(a, b) => (|| {
            distinct(a, b)?;
            let (va, vb) = (eval(v, a)?, eval(v, b)?);
            below(bit_compose(a), s, "bc(u)")?;
            below(bit_compose(b), s, "bc(v)")?;
            ensure(va == vb, || format!("V({a}) = {va} differs from V({b}) = {vb}"))
        })(),
        BlichfeldtSolution::LatticePoint(i) => (|| {
            let x = vector(*i)?;
            ensure(lattice.contains(&x), || format!("V({i}) = {x:?} is not a lattice point"))
        })(),
        BlichfeldtSolution::Congruent(i, j) => (|| {
            let (x, y) = (vector(*i)?, vector(*j)?);
            ensure(x != y, || format!("V({i}) and V({j}) are the same vector {x:?}"))?;
            let d: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            ensure(lattice.contains(&d), || format!("V({i}) − V({j}) = {d:?} is not a lattice point"))
        })(),
    })
}

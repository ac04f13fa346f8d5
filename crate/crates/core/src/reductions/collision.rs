use super::{bits, mapped, violation, Outcome, ReductionId};
use crate::circuit::{
    wire_transform, CachedCircuit, Circuit, CircuitBuilder, InputSource, OutputSource, WireMap,
};
use crate::encoding::Bitstring;
use crate::error::Result;
use crate::problems::{
    ClawSolution, DoveSolution, GeneralClawSolution, Instance, Solution,
};

fn circuit_of(inst: &Instance) -> &Circuit {
    match inst {
        Instance::Pigeon { circuit }
        | Instance::Collision { circuit }
        | Instance::PrefixCollision { circuit }
        | Instance::Dove { circuit } => circuit,
        _ => unreachable!("checked by reduce"),
    }
}

/// `C: n → m` followed by zeros up to `width` outputs.
fn padded(c: &Circuit, width: usize) -> Result<Circuit> {
    let (n, m) = (c.num_inputs(), c.num_outputs());
    wire_transform(c, &WireMap::pad_outputs(n, m, width - m))
}

/// `C(x) || bit`, with `C` first padded to `n − 1` outputs.
fn tagged(c: &Circuit, bit: bool) -> Result<Circuit> {
    let (n, m) = (c.num_inputs(), c.num_outputs());
    let mut map = WireMap::pad_outputs(n, m, n - 1 - m);
    map.outputs.push(OutputSource::Const(bit));
    wire_transform(c, &map)
}

/// `V(x) = (C(x_1..x_n), C(x_{n+1}..x_{2n}), 1, 1)` with `C` padded to `n − 1` outputs.
pub(super) fn collision_to_dove(inst: &Instance) -> Result<Outcome> {
    const ID: ReductionId = ReductionId::CollisionToDove;
    let c = circuit_of(inst);
    let (n, m) = (c.num_inputs(), c.num_outputs());
    let half = |copy: usize| {
        (0..m)
            .map(move |index| OutputSource::Old { copy, index })
            .chain(std::iter::repeat_n(OutputSource::Const(false), n - 1 - m))
    };
    let map = WireMap {
        num_inputs: 2 * n,
        copies: vec![
            (0..n).map(InputSource::Input).collect(),
            (n..2 * n).map(InputSource::Input).collect(),
        ],
        outputs: half(0)
            .chain(half(1))
            .chain([OutputSource::Const(true), OutputSource::Const(true)])
            .collect(),
    };
    let v = wire_transform(c, &map)?;
    Ok(mapped(ID, inst, Instance::Dove { circuit: v }, move |sol| {
        let Solution::Dove(d) = sol else { unreachable!() };
        match d {
            DoveSolution::Collision(u, v) => {
                let (ul, vl) = (u.slice(0, n)?, v.slice(0, n)?);
                if ul != vl {
                    Ok(Solution::Collision(ul, vl))
                } else {
                    Ok(Solution::Collision(u.slice(n, 2 * n)?, v.slice(n, 2 * n)?))
                }
            }
            _ => Err(violation(ID, sol.case(), "but V always ends in 11")),
        }
    }))
}

/// `σ0(x) = C(x)||0`, `σ1(x) = C(x)||1`.
pub(super) fn collision_to_claw(inst: &Instance) -> Result<Outcome> {
    const ID: ReductionId = ReductionId::CollisionToClaw;
    let c = circuit_of(inst);
    let target = Instance::Claw {
        sigma0: tagged(c, false)?,
        sigma1: tagged(c, true)?,
    };
    Ok(mapped(ID, inst, target, |sol| {
        let Solution::Claw(cl) = sol else { unreachable!() };
        match cl {
            ClawSolution::Collision0(u, v) | ClawSolution::Collision1(u, v) => {
                Ok(Solution::Collision(u.clone(), v.clone()))
            }
            ClawSolution::Claw(..) => Err(violation(ID, 1, "but σ0 and σ1 differ in the last bit")),
        }
    }))
}

/// `σ'_b(0u) = 0||σ_b(u)`, `σ'_b(1u) = 1u`, with `s = 2^n`.
fn lift(sigma: &Circuit) -> Result<Circuit> {
    let n = sigma.num_inputs();
    let mut b = CircuitBuilder::new(n + 1);
    let x = b.inputs();
    let out = b.embed(sigma, &x[1..])?;
    let mut result = vec![x[0]];
    for i in 0..n {
        result.push(b.mux(x[0], x[i + 1], out[i]));
    }
    Ok(b.finish(&result))
}

pub(super) fn claw_to_general_claw(inst: &Instance) -> Result<Outcome> {
    const ID: ReductionId = ReductionId::ClawToGeneralClaw;
    let Instance::Claw { sigma0, sigma1 } = inst else { unreachable!() };
    let n = sigma0.num_inputs();
    let target = Instance::GeneralClaw {
        sigma0: lift(sigma0)?,
        sigma1: lift(sigma1)?,
        s: 1 << n,
    };
    Ok(mapped(ID, inst, target, move |sol| {
        let Solution::GeneralClaw(gc) = sol else { unreachable!() };
        let strip = |u: &Bitstring| -> Result<Bitstring> {
            if u.bit(0) {
                return Err(violation(ID, sol.case(), format!("witness {u} lies in the fixed half")));
            }
            u.slice(1, n + 1)
        };
        Ok(Solution::Claw(match gc {
            GeneralClawSolution::Claw(u, v) => ClawSolution::Claw(strip(u)?, strip(v)?),
            GeneralClawSolution::Collision0(u, v) => ClawSolution::Collision0(strip(u)?, strip(v)?),
            GeneralClawSolution::Collision1(u, v) => ClawSolution::Collision1(strip(u)?, strip(v)?),
            GeneralClawSolution::Escape0(_) | GeneralClawSolution::Escape1(_) => {
                return Err(violation(ID, sol.case(), "but lifted low inputs map below 2^n"))
            }
        }))
    }))
}

/// Pads `C: n → m` to `n` outputs with zeros.
pub(super) fn collision_to_prefix(inst: &Instance) -> Result<Outcome> {
    let c = circuit_of(inst);
    let target = Instance::PrefixCollision {
        circuit: padded(c, c.num_inputs())?,
    };
    Ok(mapped(ReductionId::CollisionToPrefix, inst, target, |sol| {
        let Solution::PrefixCollision(u, v) = sol else { unreachable!() };
        Ok(Solution::Collision(u.clone(), v.clone()))
    }))
}

/// Drops the last output bit. With `n = 1` no output would remain, but then any
/// two distinct inputs already form a solution.
pub(super) fn prefix_to_collision(inst: &Instance) -> Result<Outcome> {
    let c = circuit_of(inst);
    let n = c.num_inputs();
    if n == 1 {
        return Ok(Outcome::Solved(Solution::PrefixCollision(bits(0, 1), bits(1, 1))));
    }
    let target = Instance::Collision {
        circuit: wire_transform(c, &WireMap::truncate_outputs(n, n - 1))?,
    };
    Ok(mapped(ReductionId::PrefixToCollision, inst, target, |sol| {
        let Solution::Collision(u, v) = sol else { unreachable!() };
        Ok(Solution::PrefixCollision(u.clone(), v.clone()))
    }))
}

/// `C(x_0..x_n) = σ_{x_0} ∘ σ_{x_1} ∘ … ∘ σ_{x_n}(0^n)`.
pub(super) fn general_claw_to_collision(inst: &Instance) -> Result<Outcome> {
    const ID: ReductionId = ReductionId::GeneralClawToCollision;
    let Instance::GeneralClaw { sigma0, sigma1, s } = inst else { unreachable!() };
    let (n, s) = (sigma0.num_inputs(), *s);
    let mut b = CircuitBuilder::new(n + 1);
    let x = b.inputs();
    let mut r = b.const_word(0, n);
    for i in (0..=n).rev() {
        let a0 = b.embed(sigma0, &r)?;
        let a1 = b.embed(sigma1, &r)?;
        r = b.mux_word(x[i], &a1, &a0);
    }
    let target = Instance::Collision { circuit: b.finish(&r) };
    let sig = [CachedCircuit::new(sigma0.clone()), CachedCircuit::new(sigma1.clone())];
    Ok(mapped(ID, inst, target, move |sol| {
        let Solution::Collision(xs, ys) = sol else { unreachable!() };
        // c[i] = σ_{x_i} ∘ … ∘ σ_{x_n}(0^n); c[n + 1] = 0^n.
        let chain = |w: &Bitstring| -> Vec<u64> {
            let mut c = vec![0u64; n + 2];
            for i in (0..=n).rev() {
                c[i] = sig[w.bit(i) as usize].eval(c[i + 1]);
            }
            c
        };
        let (cx, cy) = (chain(xs), chain(ys));
        for (w, c) in [(xs, &cx), (ys, &cy)] {
            if let Some(i) = (0..=n).rev().find(|&i| c[i] >= s) {
                let u = bits(c[i + 1], n);
                return Ok(Solution::GeneralClaw(if w.bit(i) {
                    GeneralClawSolution::Escape1(u)
                } else {
                    GeneralClawSolution::Escape0(u)
                }));
            }
        }
        let mut j = 0;
        while j <= n && cx[j] == cy[j] {
            let (u, v) = (bits(cx[j + 1], n), bits(cy[j + 1], n));
            let (bx, by) = (xs.bit(j), ys.bit(j));
            if bx != by {
                let (a, b) = if bx { (v, u) } else { (u, v) };
                return Ok(Solution::GeneralClaw(GeneralClawSolution::Claw(a, b)));
            }
            if u != v {
                return Ok(Solution::GeneralClaw(if bx {
                    GeneralClawSolution::Collision1(u, v)
                } else {
                    GeneralClawSolution::Collision0(u, v)
                }));
            }
            j += 1;
        }
        Err(violation(ID, 1, format!("inputs {xs} and {ys} do not collide")))
    }))
}

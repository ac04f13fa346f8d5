use super::{bits, mapped, violation, Outcome, ReductionId};
use crate::circuit::{CachedCircuit, CircuitBuilder};
use crate::error::Result;
use crate::lattice::IntMatrix;
use crate::problems::{BlichfeldtSolution, Instance, PigeonSolution, Solution};

/// `B = 2·I_n`, `s = 2^n`, one bit per coordinate and
/// `V(x) = C(x)` if `C(x) ≠ 0^n`, `V(x) = C(0^n)` otherwise.
///
/// No point of `V` is zero, so `V` meets neither `L(B)` nor a nonzero coset
/// difference in `{−1, 0, 1}^n`; only equal points remain.
pub(super) fn pigeon_to_blichfeldt(inst: &Instance) -> Result<Outcome> {
    const ID: ReductionId = ReductionId::PigeonToBlichfeldt;
    let Instance::Pigeon { circuit: c } = inst else { unreachable!() };
    let n = c.num_inputs();
    let cc = CachedCircuit::new(c.clone());
    if cc.eval(0) == 0 {
        return Ok(Outcome::Solved(Solution::Pigeon(PigeonSolution::Preimage(bits(0, n)))));
    }
    let mut b = CircuitBuilder::new(n);
    let x = b.inputs();
    let cx = b.embed(c, &x)?;
    let zeros = b.const_word(0, n);
    let c0 = b.embed(c, &zeros)?;
    let nonzero = b.or_all(&cx);
    let out = b.mux_word(nonzero, &cx, &c0);
    let target = Instance::Blichfeldt {
        basis: IntMatrix::scaled_identity(n, 2),
        s: 1 << n,
        v: b.finish(&out),
        coord_width: 1,
    };
    Ok(mapped(ID, inst, target, move |sol| {
        let Solution::Blichfeldt(bl) = sol else { unreachable!() };
        match bl {
            BlichfeldtSolution::Collision(u, v) => {
                let pigeon = if cc.eval(crate::encoding::bit_compose(u)) == 0 {
                    PigeonSolution::Preimage(u.clone())
                } else if cc.eval(crate::encoding::bit_compose(v)) == 0 {
                    PigeonSolution::Preimage(v.clone())
                } else {
                    PigeonSolution::Collision(u.clone(), v.clone())
                };
                Ok(Solution::Pigeon(pigeon))
            }
            _ => Err(violation(ID, sol.case(), "but every point of V is a nonzero 0/1 vector")),
        }
    }))
}

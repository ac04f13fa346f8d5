use super::{bits, index_gadget, mapped, violation, Outcome, ReductionId};
use crate::circuit::{build_modmul, CircuitBuilder};
use crate::error::Result;
use crate::problems::{
    DLogSolution, DoveSolution, GeneralClawSolution, Groupoid, GroupoidRep, IndexTrace, Instance,
    Solution, StepKind,
};

/// `s = 2^n`, `g = 0`, `id = 1`, `t = 1` and
/// `f(x, y) = C(x)` if `x = y`, `C(y ⊕ 0^{n−1}1)` if `x = g ≠ y`, `x ⊕ y` otherwise.
pub(super) fn dove_to_dlog(inst: &Instance) -> Result<Outcome> {
    const ID: ReductionId = ReductionId::DoveToDlog;
    let Instance::Dove { circuit: c } = inst else { unreachable!() };
    let n = c.num_inputs();
    let mut b = CircuitBuilder::new(2 * n);
    let w = b.inputs();
    let (x, y) = w.split_at(n);
    let eq = b.eq_word(x, y);
    let x_zero = b.eq_const(x, 0);
    let cx = b.embed(c, x)?;
    let mut y1 = y.to_vec();
    y1[n - 1] = b.not(y[n - 1]);
    let cy1 = b.embed(c, &y1)?;
    let sum = b.xor_word(x, y);
    let rest = b.mux_word(x_zero, &cy1, &sum);
    let out = b.mux_word(eq, &cx, &rest);
    let rep = GroupoidRep {
        s: 1 << n,
        f: b.finish(&out),
        id: 1,
        g: 0,
        t: 1,
    };
    let grp = Groupoid::new(&rep)?;
    let target = Instance::DLog(rep);
    Ok(mapped(ID, inst, target, move |sol| {
        let Solution::DLog(d) = sol else { unreachable!() };
        let dove = |d: DoveSolution| Ok(Solution::Dove(d));
        let one = |tr: &IndexTrace| DoveSolution::One(bits(*pres(tr).last().unwrap(), n));
        match *d {
            DLogSolution::Log(x) => dove(one(&grp.trace(x))),
            DLogSolution::Overflow(..) => Err(violation(ID, 2, "but s = 2^n")),
            DLogSolution::IndexCollision(x, y) => walk_back(&grp, x, y, n).map(Solution::Dove),
            DLogSolution::CosetCollision(x, y) => {
                let (tx, ty) = (grp.trace(x), grp.trace(y));
                if tx.value() == 1 {
                    dove(one(&tx))
                } else if ty.value() == 1 {
                    dove(one(&ty))
                } else {
                    // f(1, a) = 1 ⊕ a for a ≠ 1, so I(x) = I(y).
                    walk_back(&grp, x, y, n).map(Solution::Dove)
                }
            }
            DLogSolution::Homomorphism(x, y) => {
                let (tx, ty) = (grp.trace(x), grp.trace(y));
                if ty.value() == 1 {
                    dove(one(&ty))
                } else {
                    // I(x) = I(y) ⊕ 1.
                    let (px, py) = (*pres(&tx).last().unwrap(), *pres(&ty).last().unwrap());
                    dove(DoveSolution::NearCollision(bits(px, n), bits(py, n)))
                }
            }
        }
    }))
}

/// For each step, the argument `C` is applied to: `r` for a squaring,
/// `r ⊕ 1` for a multiplication by `g = 0` (or `0` when `r = 0`).
fn pres(tr: &IndexTrace) -> Vec<u64> {
    tr.steps
        .iter()
        .map(|st| match st.kind {
            StepKind::Square => st.right,
            StepKind::Multiply if st.right == 0 => 0,
            StepKind::Multiply => st.right ^ 1,
        })
        .collect()
}

/// Distinct exponents with `I(x) = I(y)`: walks both traces backwards from the
/// common value until `C` is seen to collide, hit `0^n`, hit `0^{n−1}1` or
/// split two values differing in the last bit.
fn walk_back(grp: &Groupoid, x: u64, y: u64, n: usize) -> Result<DoveSolution> {
    const ID: ReductionId = ReductionId::DoveToDlog;
    let (tx, ty) = (grp.trace(x), grp.trace(y));
    let (px, py) = (pres(&tx), pres(&ty));
    for (tr, p) in [(&tx, &px), (&ty, &py)] {
        if let Some(k) = tr.steps.iter().position(|st| st.result == 0) {
            return Ok(DoveSolution::Zero(bits(p[k], n)));
        }
    }
    // Positions index `values()`: 0 is `id`, k is the result of step k − 1.
    let (vx, vy) = (tx.values(), ty.values());
    let (mut a, mut b) = (tx.steps.len(), ty.steps.len());
    loop {
        debug_assert_eq!(vx[a], vy[b]);
        match (a, b) {
            (0, 0) => return Err(violation(ID, 3, format!("traces of {x} and {y} coincide"))),
            (0, _) => return Ok(DoveSolution::One(bits(py[b - 1], n))),
            (_, 0) => return Ok(DoveSolution::One(bits(px[a - 1], n))),
            _ => {}
        }
        let (qx, qy) = (px[a - 1], py[b - 1]);
        if qx != qy {
            return Ok(DoveSolution::Collision(bits(qx, n), bits(qy, n)));
        }
        if tx.steps[a - 1].kind == ty.steps[b - 1].kind {
            a -= 1;
            b -= 1;
            continue;
        }
        // One side squared r, the other multiplied r ⊕ 1: the previous values
        // differ in the last bit.
        if a < 2 || b < 2 {
            return Err(violation(ID, 3, format!("traces of {x} and {y} split at id")));
        }
        return Ok(DoveSolution::NearCollision(bits(px[a - 2], n), bits(py[b - 2], n)));
    }
}

/// `σ0(u) = I(u)`, `σ1(u) = f(t, I(u))` for `u < s`; both fix `u ≥ s`.
pub(super) fn dlog_to_general_claw(inst: &Instance) -> Result<Outcome> {
    const ID: ReductionId = ReductionId::DlogToGeneralClaw;
    let Instance::DLog(rep) = inst else { unreachable!() };
    let grp = Groupoid::new(rep)?;
    let (s, t, l) = (rep.s, rep.t, rep.width());

    let sigma = |shift: bool| -> Result<_> {
        let mut b = CircuitBuilder::new(l);
        let u = b.inputs();
        let lt = b.lt_const(&u, s);
        let mut v = index_gadget(&mut b, &rep.f, rep.id, rep.g, &u)?;
        if shift {
            let tw = b.const_word(t, l);
            v = b.embed(&rep.f, &[tw, v].concat())?;
        }
        let out = b.mux_word(lt, &v, &u);
        Ok(b.finish(&out))
    };
    let target = Instance::GeneralClaw {
        sigma0: sigma(false)?,
        sigma1: sigma(true)?,
        s,
    };

    Ok(mapped(ID, inst, target, move |sol| {
        let Solution::GeneralClaw(gc) = sol else { unreachable!() };
        let bc = |u: &crate::Bitstring| crate::encoding::bit_compose(u);
        let ok = |d: DLogSolution| Ok(Solution::DLog(d));
        // First squaring or multiplication leaving [s] while computing I(x).
        let scan = |x: u64| -> Result<Solution> {
            match grp.trace(x).first_overflow(s) {
                Some(st) => ok(DLogSolution::Overflow(st.left, st.right)),
                None => Err(violation(ID, sol.case(), format!("I({x}) does not overflow"))),
            }
        };
        let idx = |x: u64| grp.index(x);
        match gc {
            GeneralClawSolution::Claw(u, v) => {
                let (x, y) = (bc(u), bc(v));
                if idx(y) >= s {
                    return scan(y);
                }
                let d = (x + s - y) % s;
                if idx(d) == t {
                    ok(DLogSolution::Log(d))
                } else {
                    ok(DLogSolution::Homomorphism(x, y))
                }
            }
            GeneralClawSolution::Collision0(u, v) => {
                let (x, y) = (bc(u), bc(v));
                match (x < s, y < s) {
                    (true, true) => ok(DLogSolution::IndexCollision(x, y)),
                    // σ0 fixes the large input, so I of the other equals it.
                    (false, true) => scan(y),
                    (true, false) => scan(x),
                    (false, false) => Err(violation(ID, 2, "both witnesses are fixed points")),
                }
            }
            GeneralClawSolution::Collision1(u, v) => {
                let (x, y) = (bc(u), bc(v));
                match (x < s, y < s) {
                    (true, true) => {
                        if idx(x) >= s {
                            scan(x)
                        } else if idx(y) >= s {
                            scan(y)
                        } else {
                            ok(DLogSolution::CosetCollision(x, y))
                        }
                    }
                    (false, true) | (true, false) => {
                        let small = x.min(y);
                        let i = idx(small);
                        if i >= s {
                            scan(small)
                        } else {
                            // f(t, I(small)) equals the large fixed point.
                            ok(DLogSolution::Overflow(t, i))
                        }
                    }
                    (false, false) => Err(violation(ID, 3, "both witnesses are fixed points")),
                }
            }
            GeneralClawSolution::Escape0(u) => scan(bc(u)),
            GeneralClawSolution::Escape1(u) => {
                let x = bc(u);
                let i = idx(x);
                if i >= s {
                    scan(x)
                } else {
                    ok(DLogSolution::Overflow(t, i))
                }
            }
        }
    }))
}

/// `s = p − 1`, `f` multiplies in `Z_p^*` with `e ↦ e − 1`, `id = 0`, `g' = g − 1`, `t = y − 1`.
pub(super) fn dlogp_to_dlog(inst: &Instance) -> Result<Outcome> {
    const ID: ReductionId = ReductionId::DlogpToDlog;
    let Instance::DLogP { p, g, y, .. } = *inst else { unreachable!() };
    if p == 2 {
        // Z_2^* = {1}: the exponent 0 is the only candidate and always works.
        return Ok(Outcome::Solved(Solution::DLogP(0)));
    }
    let rep = GroupoidRep {
        s: p - 1,
        f: build_modmul(p)?,
        id: 0,
        g: g - 1,
        t: y - 1,
    };
    Ok(mapped(ID, inst, Instance::DLog(rep), |sol| {
        let Solution::DLog(d) = sol else { unreachable!() };
        match *d {
            DLogSolution::Log(x) => Ok(Solution::DLogP(x)),
            _ => Err(violation(ID, sol.case(), "but Z_p^* is a cyclic group generated by g")),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::encoding::Bitstring;
    use crate::problems::{enumerate_solutions, verify, VerifyOptions};
    use crate::reductions::{identity_groupoid, reduce, Reduction};

    fn tt(n: usize, m: usize, t: &[u64]) -> Circuit {
        CircuitBuilder::from_truth_table(n, m, t)
    }

    fn build(id: ReductionId, inst: &Instance) -> Box<dyn Reduction> {
        reduce(id, inst).unwrap().reduction().unwrap()
    }

    fn all_pull_back(r: &dyn Reduction) {
        for sol in enumerate_solutions(r.target(), VerifyOptions::default(), None).unwrap() {
            let back = r.pull_back(&sol).unwrap_or_else(|e| panic!("{sol:?}: {e}"));
            assert!(verify(r.source(), &back).unwrap().is_accepted(), "{sol:?} → {back:?}");
        }
    }

    #[test]
    fn dove_operator_follows_three_cases() {
        let table = [3, 6, 0, 5, 1, 7, 2, 4];
        let c = tt(3, 3, &table);
        let r = build(ReductionId::DoveToDlog, &Instance::Dove { circuit: c });
        let Instance::DLog(rep) = r.target() else { panic!() };
        assert_eq!((rep.s, rep.id, rep.g, rep.t), (8, 1, 0, 1));
        for x in 0..8u64 {
            for y in 0..8u64 {
                let want = if x == y {
                    table[x as usize]
                } else if x == 0 {
                    table[(y ^ 1) as usize]
                } else {
                    x ^ y
                };
                assert_eq!(rep.f.eval_u64(x << 3 | y), want, "f({x}, {y})");
            }
        }
    }

    #[test]
    fn dove_log_yields_preimage_of_unit() {
        // C(5) = 001, so some exponent indexes to t = 1.
        let c = tt(3, 3, &[3, 6, 0, 5, 2, 1, 7, 4]);
        let r = build(ReductionId::DoveToDlog, &Instance::Dove { circuit: c });
        let sols = enumerate_solutions(r.target(), VerifyOptions::default(), None).unwrap();
        let log = sols
            .iter()
            .find(|s| matches!(s, Solution::DLog(DLogSolution::Log(_))))
            .expect("a log exists");
        assert_eq!(
            r.pull_back(log).unwrap(),
            Solution::Dove(DoveSolution::One("101".parse::<Bitstring>().unwrap()))
        );
        all_pull_back(r.as_ref());
    }

    #[test]
    fn dove_homomorphism_gives_near_collision() {
        // C(2) = 110 and C(6) = 111 differ in the last bit only.
        let c = tt(3, 3, &[2, 3, 6, 4, 5, 0, 7, 1]);
        let r = build(ReductionId::DoveToDlog, &Instance::Dove { circuit: c });
        let sols = enumerate_solutions(r.target(), VerifyOptions::default(), None).unwrap();
        assert!(sols.iter().any(|s| s.case() == 5));
        all_pull_back(r.as_ref());
    }

    #[test]
    fn dove_exhaustive_small() {
        for seed in 0..40u64 {
            let table: Vec<u64> = (0..8u64).map(|a| (a * 5 + seed * 3 + a * a * seed) % 8).collect();
            let r = build(ReductionId::DoveToDlog, &Instance::Dove { circuit: tt(3, 3, &table) });
            all_pull_back(r.as_ref());
        }
    }

    #[test]
    fn identity_dlog_claws() {
        let inst = Instance::DLog(identity_groupoid(3, 0));
        let r = build(ReductionId::DlogToGeneralClaw, &inst);
        let sols = enumerate_solutions(r.target(), VerifyOptions::default(), None).unwrap();
        // With t = 0 both σ0 and σ1 are the identity, so only claws appear.
        assert!(sols.iter().all(|s| s.case() == 1), "{sols:?}");
        let zero: Bitstring = "000".parse().unwrap();
        let claw = sols
            .iter()
            .find(|s| matches!(s, Solution::GeneralClaw(GeneralClawSolution::Claw(_, v)) if *v == zero))
            .unwrap();
        let Solution::GeneralClaw(GeneralClawSolution::Claw(u, _)) = claw else { panic!() };
        let x = crate::encoding::bit_compose(u);
        assert_eq!(r.pull_back(claw).unwrap(), Solution::DLog(DLogSolution::Log(x)));
        all_pull_back(r.as_ref());
    }

    #[test]
    fn dlog_general_claw_on_non_power_of_two() {
        for seed in 0..20u64 {
            let table: Vec<u64> = (0..64u64).map(|a| (a * 7 + seed * (a ^ 5)) % 8).collect();
            let rep = GroupoidRep {
                s: 5 + seed % 3,
                f: tt(6, 3, &table),
                id: seed % 5,
                g: (seed + 1) % 5,
                t: (seed + 2) % 5,
            };
            let r = build(ReductionId::DlogToGeneralClaw, &Instance::DLog(rep));
            all_pull_back(r.as_ref());
        }
    }

    #[test]
    fn dlogp_seven() {
        let inst = Instance::DLogP {
            p: 7,
            factors: vec![(2, 1), (3, 1)],
            g: 3,
            y: 6,
        };
        let r = build(ReductionId::DlogpToDlog, &inst);
        let Instance::DLog(rep) = r.target() else { panic!() };
        assert_eq!((rep.s, rep.id, rep.g, rep.t), (6, 0, 2, 5));
        assert_eq!(rep.f, build_modmul(7).unwrap());
        let sols = enumerate_solutions(r.target(), VerifyOptions::default(), None).unwrap();
        assert_eq!(sols, vec![Solution::DLog(DLogSolution::Log(3))]);
        assert_eq!(r.pull_back(&sols[0]).unwrap(), Solution::DLogP(3));
        let bogus = Solution::DLog(DLogSolution::IndexCollision(1, 2));
        assert!(matches!(
            r.pull_back(&bogus),
            Err(crate::Error::SoundnessViolation { case: 3, .. })
        ));

        let two = Instance::DLogP {
            p: 2,
            factors: vec![],
            g: 1,
            y: 1,
        };
        match reduce(ReductionId::DlogpToDlog, &two).unwrap() {
            Outcome::Solved(sol) => assert_eq!(sol, Solution::DLogP(0)),
            other => panic!("{other:?}"),
        }
    }
}

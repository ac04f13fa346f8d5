use super::{bits, index_gadget, mapped, violation, Outcome, ReductionId};
use crate::circuit::{CircuitBuilder, Wire};
use crate::encoding::bit_compose;
use crate::error::Result;
use crate::problems::{Groupoid, GroupoidRep, IndexSolution, Instance, PigeonSolution, Solution};

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1 << n) - 1
    }
}

/// `d ↦ d` with its last bit set.
fn set_last(b: &mut CircuitBuilder, d: &[Wire]) -> Vec<Wire> {
    let mut out = d.to_vec();
    *out.last_mut().unwrap() = b.constant(true);
    out
}

/// The computation `I(a) = a` on `[2^n]` moved by `w`: `s = 2^n`, `id = w`,
/// `g = w − 1 mod 2^n`, and (first match)
/// `f(u, u) = rotl(u − w) + w`, `f(g, v) = setlast(v − w) + w`, `f(u, v) = v`.
///
/// Then `I(a) = a + w mod 2^n` for every `a < 2^n`.
pub fn shifted_groupoid(n: usize, w: u64, t: u64) -> GroupoidRep {
    assert!((1..=20).contains(&n), "width {n} out of range");
    let m = mask(n);
    let (w, g) = (w & m, w.wrapping_add(m) & m);
    let mut b = CircuitBuilder::new(2 * n);
    let x = b.inputs();
    let (u, v) = x.split_at(n);
    let eq = b.eq_word(u, v);
    let ug = b.eq_const(u, g);
    let d = b.sub_const(v, w);
    let rot = b.rotl(&d);
    let square = b.add_const(&rot, w);
    let set = set_last(&mut b, &d);
    let multiply = b.add_const(&set, w);
    let rest = b.mux_word(ug, &multiply, v);
    let out = b.mux_word(eq, &square, &rest);
    GroupoidRep {
        s: 1 << n,
        f: b.finish(&out),
        id: w,
        g,
        t: t & m,
    }
}

/// [`shifted_groupoid`] with `w = 0`: `I(a) = a` on `[2^n]`.
pub fn identity_groupoid(n: usize, t: u64) -> GroupoidRep {
    shifted_groupoid(n, 0, t)
}

/// Width `N = n + 2`, `s = 2^N`, `g = 2^N − 1`, `id = w = 2^n`, `t = 0`. With
/// `d = v − w`, the operator is (first match)
///
/// - `f(v, v) = 11 || d_3..d_N` if `v ≠ g` and `d` starts with `01`,
/// - `f(v, v) = rotl(d) + w` if `v ≠ g`,
/// - `f(g, v) = 00 || C(v_3..v_N)` if `v` starts with `11`,
/// - `f(g, v) = setlast(d) + w` unless `d_1 = 1` and `d_N = 0`,
/// - `f(u, v) = v`.
///
/// Exponents in `[2^{n+1}]` index to `a + 2^n`, even `a ≥ 2^{n+1}` to
/// `2^{n+1} + a/2`, and odd `a ≥ 2^{n+1}` to `C(bd^n((a − 1)/2 − 2^n))`.
pub(super) fn pigeon_to_index(inst: &Instance) -> Result<Outcome> {
    const ID: ReductionId = ReductionId::PigeonToIndex;
    let Instance::Pigeon { circuit: c } = inst else { unreachable!() };
    let n = c.num_inputs();
    let big = n + 2;
    let (w, g) = (1u64 << n, mask(big));

    let mut b = CircuitBuilder::new(2 * big);
    let x = b.inputs();
    let (u, v) = x.split_at(big);
    let zero = b.constant(false);
    let one = b.constant(true);
    let eq = b.eq_word(u, v);
    let ug = b.and_all(u);
    let not_ug = b.not(ug);
    let d = b.sub_const(v, w);

    let sq = b.and(eq, not_ug);
    let nd0 = b.not(d[0]);
    let prefix01 = b.and(nd0, d[1]);
    let c1 = b.and(sq, prefix01);
    let body1 = [&[one, one][..], &d[2..]].concat();
    let rot = b.rotl(&d);
    let body2 = b.add_const(&rot, w);

    let prefix11 = b.and(v[0], v[1]);
    let c3 = b.and(ug, prefix11);
    let cv = b.embed(c, &v[2..])?;
    let body3 = [&[zero, zero][..], &cv[..]].concat();
    let nlast = b.not(d[big - 1]);
    let excluded = b.and(d[0], nlast);
    let allowed = b.not(excluded);
    let c4 = b.and(ug, allowed);
    let set = set_last(&mut b, &d);
    let body4 = b.add_const(&set, w);

    let mut out = v.to_vec();
    for (cond, body) in [(c4, body4), (c3, body3), (sq, body2), (c1, body1)] {
        out = b.mux_word(cond, &body, &out);
    }
    let rep = GroupoidRep {
        s: 1 << big,
        f: b.finish(&out),
        id: w,
        g,
        t: 0,
    };

    // A_o: odd exponents ≥ 2^{n+1}, the leaves that apply C.
    let decode = move |a: u64| -> Option<crate::Bitstring> {
        (a & 1 == 1 && a >= 2 * w).then(|| bits((a - 1) / 2 - w, n))
    };
    Ok(mapped(ID, inst, Instance::Index(rep), move |sol| {
        let Solution::Index(d) = sol else { unreachable!() };
        match *d {
            IndexSolution::Log(a) => match decode(a) {
                Some(u) => Ok(Solution::Pigeon(PigeonSolution::Preimage(u))),
                None => Err(violation(ID, 1, format!("{a} is not a C-leaf"))),
            },
            IndexSolution::Overflow(..) => Err(violation(ID, 2, "but s = 2^{n+2}")),
            IndexSolution::Collision(a, a2) => match (decode(a), decode(a2)) {
                (Some(u), Some(v)) => Ok(Solution::Pigeon(PigeonSolution::Collision(u, v))),
                _ => Err(violation(ID, 3, format!("{a} or {a2} is not a C-leaf"))),
            },
        }
    }))
}

/// `C(x) = bd(I(x) − t mod s)` for `bc(x) < s`, `C(x) = x` otherwise.
pub(super) fn index_to_pigeon(inst: &Instance) -> Result<Outcome> {
    const ID: ReductionId = ReductionId::IndexToPigeon;
    let Instance::Index(rep) = inst else { unreachable!() };
    let grp = Groupoid::new(rep)?;
    let (s, t, l) = (rep.s, rep.t, rep.width());

    let mut b = CircuitBuilder::new(l);
    let x = b.inputs();
    let lt = b.lt_const(&x, s);
    let i = index_gadget(&mut b, &rep.f, rep.id, rep.g, &x)?;
    // I < 2^l ≤ 2s - 1, so I + s − t < 3s and two conditional subtractions reduce it.
    let zero = b.constant(false);
    let wide = [&[zero, zero][..], &i[..]].concat();
    let mut z = b.add_const(&wide, s - t);
    for _ in 0..2 {
        let ge = b.ge_const(&z, s);
        let sub = b.sub_const(&z, s);
        z = b.mux_word(ge, &sub, &z);
    }
    let out = b.mux_word(lt, &z[2..], &x);
    let target = Instance::Pigeon { circuit: b.finish(&out) };

    Ok(mapped(ID, inst, target, move |sol| {
        let Solution::Pigeon(p) = sol else { unreachable!() };
        let ok = |d: IndexSolution| Ok(Solution::Index(d));
        let scan = |x: u64| -> Option<Solution> {
            grp.trace(x)
                .first_overflow(s)
                .map(|st| Solution::Index(IndexSolution::Overflow(st.left, st.right)))
        };
        match p {
            PigeonSolution::Preimage(u) => {
                let x = bit_compose(u);
                if x >= s {
                    return Err(violation(ID, 1, format!("fixed point {x} is not 0")));
                }
                match scan(x) {
                    Some(sol) => Ok(sol),
                    None => ok(IndexSolution::Log(x)),
                }
            }
            PigeonSolution::Collision(u, v) => {
                let (x, y) = (bit_compose(u), bit_compose(v));
                if x >= s || y >= s {
                    return Err(violation(ID, 2, "C maps [s] into [s] and fixes the rest"));
                }
                if let Some(sol) = scan(x).or_else(|| scan(y)) {
                    return Ok(sol);
                }
                ok(IndexSolution::Collision(x, y))
            }
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::problems::{enumerate_solutions, verify, VerifyOptions};
    use crate::reductions::{reduce, Reduction};

    fn tt(n: usize, m: usize, t: &[u64]) -> Circuit {
        CircuitBuilder::from_truth_table(n, m, t)
    }

    fn build(id: ReductionId, inst: &Instance) -> Box<dyn Reduction> {
        reduce(id, inst).unwrap().reduction().unwrap()
    }

    fn all_pull_back(r: &dyn Reduction) -> usize {
        let sols = enumerate_solutions(r.target(), VerifyOptions::default(), None).unwrap();
        for sol in &sols {
            let back = r.pull_back(sol).unwrap_or_else(|e| panic!("{sol:?}: {e}"));
            assert!(verify(r.source(), &back).unwrap().is_accepted(), "{sol:?} → {back:?}");
        }
        sols.len()
    }

    #[test]
    fn identity_construction_indexes_to_itself() {
        for n in 1..=8 {
            let grp = Groupoid::new(&identity_groupoid(n, 0)).unwrap();
            for a in 0..1u64 << n {
                assert_eq!(grp.index(a), a, "n {n}");
            }
        }
    }

    #[test]
    fn shifted_construction_adds_w() {
        for (n, w) in [(3, 5), (4, 4), (5, 31), (6, 1)] {
            let grp = Groupoid::new(&shifted_groupoid(n, w, 0)).unwrap();
            for a in 0..1u64 << n {
                assert_eq!(grp.index(a), (a + w) % (1 << n), "n {n} w {w}");
            }
        }
    }

    fn index_rep(c: &Circuit) -> GroupoidRep {
        match build(ReductionId::PigeonToIndex, &Instance::Pigeon { circuit: c.clone() }).target() {
            Instance::Index(rep) => rep.clone(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn pigeon_index_matches_tree_for_n2() {
        let table = [2, 0, 3, 1];
        let rep = index_rep(&tt(2, 2, &table));
        assert_eq!((rep.s, rep.id, rep.g, rep.t), (16, 4, 15, 0));
        let grp = Groupoid::new(&rep).unwrap();
        for a in 0..16u64 {
            let want = match a {
                0..=7 => a + 4,
                _ if a % 2 == 0 => 8 + a / 2,
                _ => table[((a - 1) / 2 - 4) as usize],
            };
            assert_eq!(grp.index(a), want, "a = {a}");
        }
        assert_eq!(grp.index(3), 7);
    }

    #[test]
    fn pigeon_index_identity_preimage() {
        let src = Instance::Pigeon { circuit: tt(2, 2, &[0, 1, 2, 3]) };
        let r = build(ReductionId::PigeonToIndex, &src);
        let sols = enumerate_solutions(r.target(), VerifyOptions::default(), None).unwrap();
        assert_eq!(sols, vec![Solution::Index(IndexSolution::Log(9))]);
        assert_eq!(
            r.pull_back(&sols[0]).unwrap(),
            Solution::Pigeon(PigeonSolution::Preimage("00".parse().unwrap()))
        );
    }

    #[test]
    fn pigeon_index_constant_collisions_stay_in_leaves() {
        let src = Instance::Pigeon { circuit: tt(2, 2, &[2; 4]) };
        let r = build(ReductionId::PigeonToIndex, &src);
        let sols = enumerate_solutions(r.target(), VerifyOptions::default(), None).unwrap();
        for sol in &sols {
            let Solution::Index(IndexSolution::Collision(a, b)) = sol else { panic!("{sol:?}") };
            assert!([9, 11, 13, 15].contains(a) && [9, 11, 13, 15].contains(b));
        }
        let sol = Solution::Index(IndexSolution::Collision(9, 11));
        assert_eq!(
            r.pull_back(&sol).unwrap(),
            Solution::Pigeon(PigeonSolution::Collision("00".parse().unwrap(), "01".parse().unwrap()))
        );
        all_pull_back(r.as_ref());
    }

    #[test]
    fn pigeon_index_exhaustive_n3_sample() {
        for seed in 0..12u64 {
            let table: Vec<u64> = (0..8u64).map(|a| (a * a * (seed + 1) + seed) % 8).collect();
            let c = tt(3, 3, &table);
            let grp = Groupoid::new(&index_rep(&c)).unwrap();
            let mut image: Vec<u64> = (0..32u64).filter(|a| !(a % 2 == 1 && *a >= 16)).map(|a| grp.index(a)).collect();
            image.sort_unstable();
            assert_eq!(image, (8..32).collect::<Vec<_>>());
            let r = build(ReductionId::PigeonToIndex, &Instance::Pigeon { circuit: c });
            all_pull_back(r.as_ref());
        }
    }

    #[test]
    fn index_pigeon_identity_construction() {
        let src = Instance::Index(identity_groupoid(4, 5));
        let r = build(ReductionId::IndexToPigeon, &src);
        let Instance::Pigeon { circuit } = r.target() else { panic!() };
        for x in 0..16u64 {
            assert_eq!(circuit.eval_u64(x), (x + 16 - 5) % 16);
        }
        let sol = Solution::Pigeon(PigeonSolution::Preimage(bits(5, 4)));
        assert_eq!(r.pull_back(&sol).unwrap(), Solution::Index(IndexSolution::Log(5)));
    }

    #[test]
    fn index_pigeon_fixes_large_inputs() {
        let table: Vec<u64> = (0..64u64).map(|a| (a * 3 + 1) % 8).collect();
        let rep = GroupoidRep {
            s: 5,
            f: tt(6, 3, &table),
            id: 1,
            g: 2,
            t: 3,
        };
        let r = build(ReductionId::IndexToPigeon, &Instance::Index(rep));
        let Instance::Pigeon { circuit } = r.target() else { panic!() };
        for x in 5..8u64 {
            assert_eq!(circuit.eval_u64(x), x);
        }
        for x in 0..5u64 {
            assert!(circuit.eval_u64(x) < 5);
        }
        all_pull_back(r.as_ref());
    }

    #[test]
    fn index_pigeon_overflow_at_first_squaring() {
        // f(id, id) = 6 ≥ s = 5, so I(0) = 6 and C(0) = 6 − 1 mod 5 = 0.
        let mut table: Vec<u64> = (0..64u64).map(|a| a % 5).collect();
        table[0] = 6;
        let rep = GroupoidRep {
            s: 5,
            f: tt(6, 3, &table),
            id: 0,
            g: 1,
            t: 1,
        };
        let r = build(ReductionId::IndexToPigeon, &Instance::Index(rep));
        let sol = Solution::Pigeon(PigeonSolution::Preimage(bits(0, 3)));
        assert!(verify(r.target(), &sol).unwrap().is_accepted());
        assert_eq!(r.pull_back(&sol).unwrap(), Solution::Index(IndexSolution::Overflow(0, 0)));
        all_pull_back(r.as_ref());
    }
}

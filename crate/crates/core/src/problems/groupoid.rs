use super::GroupoidRep;
use crate::circuit::CachedCircuit;
use crate::encoding::{bit_decompose_minimal, Bitstring};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    /// `r ← f(r, r)`.
    Square,
    /// `r ← f(g, r)`.
    Multiply,
}

/// One application of `f` during square-and-multiply: `result = f_G(left, right)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TraceStep {
    pub kind: StepKind,
    pub left: u64,
    pub right: u64,
    pub result: u64,
}

/// Every intermediate value of the square-and-multiply computation of `I_G(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexTrace {
    pub x: u64,
    /// `bd_0(x)`, most significant bit first.
    pub bits: Bitstring,
    /// `bc(bd(id))`.
    pub initial: u64,
    pub steps: Vec<TraceStep>,
}

impl IndexTrace {
    /// `I_G(x)`.
    pub fn value(&self) -> u64 {
        self.steps.last().map_or(self.initial, |s| s.result)
    }

    /// Values of `r` before each step and after the last: `initial, r_1, .., r_k`.
    pub fn values(&self) -> Vec<u64> {
        std::iter::once(self.initial)
            .chain(self.steps.iter().map(|s| s.result))
            .collect()
    }

    /// First step whose result leaves `[s]`. Its operands are both in `[s]`
    /// when `id, g < s`, since every earlier result was.
    pub fn first_overflow(&self, s: u64) -> Option<&TraceStep> {
        self.steps.iter().find(|st| st.result >= s)
    }
}

/// A groupoid representation prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Groupoid {
    rep: GroupoidRep,
    l: usize,
    f: CachedCircuit,
}

impl Groupoid {
    pub fn new(rep: &GroupoidRep) -> Result<Groupoid> {
        if rep.s < 2 {
            return Err(Error::Invalid(vec![format!("groupoid order {} < 2", rep.s)]));
        }
        let l = rep.width();
        if rep.f.num_inputs() != 2 * l {
            return Err(Error::Width {
                expected: 2 * l,
                found: rep.f.num_inputs(),
            });
        }
        if rep.f.num_outputs() != l {
            return Err(Error::Width {
                expected: l,
                found: rep.f.num_outputs(),
            });
        }
        for (name, v) in [("id", rep.id), ("g", rep.g), ("t", rep.t)] {
            if v >= rep.s {
                return Err(Error::Invalid(vec![format!("{name} = {v} is not below s = {}", rep.s)]));
            }
        }
        Ok(Groupoid {
            rep: rep.clone(),
            l,
            f: CachedCircuit::new(rep.f.clone()),
        })
    }

    pub fn rep(&self) -> &GroupoidRep {
        &self.rep
    }

    pub fn s(&self) -> u64 {
        self.rep.s
    }

    pub fn width(&self) -> usize {
        self.l
    }

    /// `bc(f(bd(x), bd(y)))` for any `x, y < 2^l`, inside or outside `[s]`.
    pub fn op(&self, x: u64, y: u64) -> u64 {
        debug_assert!(x >> self.l == 0 && y >> self.l == 0);
        self.f.eval(x << self.l | y)
    }

    /// `I_G(x)` without recording the trace.
    pub fn index(&self, x: u64) -> u64 {
        let bits = bit_decompose_minimal(x);
        let mut r = self.rep.id;
        for &b in bits.bits() {
            r = self.op(r, r);
            if b {
                r = self.op(self.rep.g, r);
            }
        }
        r
    }

    pub fn trace(&self, x: u64) -> IndexTrace {
        let bits = bit_decompose_minimal(x);
        let mut r = self.rep.id;
        let mut steps = Vec::with_capacity(2 * bits.width());
        for &b in bits.bits() {
            let sq = self.op(r, r);
            steps.push(TraceStep {
                kind: StepKind::Square,
                left: r,
                right: r,
                result: sq,
            });
            r = sq;
            if b {
                let m = self.op(self.rep.g, r);
                steps.push(TraceStep {
                    kind: StepKind::Multiply,
                    left: self.rep.g,
                    right: r,
                    result: m,
                });
                r = m;
            }
        }
        IndexTrace {
            x,
            bits,
            initial: self.rep.id,
            steps,
        }
    }

    /// `I_G(x)` for every `x ∈ [s]`.
    pub fn index_table(&self) -> Vec<u64> {
        (0..self.rep.s).map(|x| self.index(x)).collect()
    }
}

/// `f_G(x, y)` for `x, y ∈ [s]`; the result may be `≥ s`.
pub fn groupoid_op(rep: &GroupoidRep, x: u64, y: u64) -> Result<u64> {
    for v in [x, y] {
        if v >= rep.s {
            return Err(Error::Range { value: v, bound: rep.s });
        }
    }
    Ok(Groupoid::new(rep)?.op(x, y))
}

/// `I_G(x)` with its full trace.
pub fn index_function(rep: &GroupoidRep, x: u64) -> Result<(u64, IndexTrace)> {
    if x >= rep.s {
        return Err(Error::Range { value: x, bound: rep.s });
    }
    let trace = Groupoid::new(rep)?.trace(x);
    Ok((trace.value(), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    /// Table-defined groupoid on `[s]`: `f(x, y) = table(x, y)`.
    fn rep_from(s: u64, id: u64, g: u64, t: u64, op: impl Fn(u64, u64) -> u64) -> GroupoidRep {
        let l = crate::encoding::ceil_log2(s);
        let table: Vec<u64> = (0..1u64 << (2 * l)).map(|a| op(a >> l, a & ((1 << l) - 1))).collect();
        GroupoidRep {
            s,
            f: CircuitBuilder::from_truth_table(2 * l, l, &table),
            id,
            g,
            t,
        }
    }

    #[test]
    fn modular_addition_indexes_by_multiples() {
        // (Z_8, +) with generator 3: I(x) = 3x mod 8.
        let rep = rep_from(8, 0, 3, 0, |x, y| (x + y) % 8);
        let grp = Groupoid::new(&rep).unwrap();
        for x in 0..8 {
            assert_eq!(grp.index(x), 3 * x % 8);
        }
    }

    #[test]
    fn trace_law_holds() {
        let rep = rep_from(16, 1, 2, 0, |x, y| (x * 3 + y) % 16);
        let grp = Groupoid::new(&rep).unwrap();
        for x in 0..16 {
            let t = grp.trace(x);
            assert_eq!(t.steps.len(), t.bits.width() + t.bits.count_ones());
            assert_eq!(t.value(), grp.index(x));
            assert_eq!(t.steps[0].kind, StepKind::Square);
            assert_eq!(t.steps[0].left, 1);
        }
        // Exponent zero performs exactly one squaring of id.
        let t0 = grp.trace(0);
        assert_eq!(t0.steps.len(), 1);
        assert_eq!(t0.value(), 3 + 1);
    }

    #[test]
    fn range_checks() {
        let rep = rep_from(5, 0, 1, 2, |x, y| (x + y) % 5);
        assert_eq!(groupoid_op(&rep, 3, 4).unwrap(), 2);
        assert!(matches!(groupoid_op(&rep, 5, 0), Err(Error::Range { value: 5, bound: 5 })));
        assert!(matches!(index_function(&rep, 7), Err(Error::Range { .. })));
        let (v, t) = index_function(&rep, 4).unwrap();
        assert_eq!(v, 4);
        assert_eq!(t.bits, "100".parse().unwrap());
    }

    #[test]
    fn overflow_scan_finds_first_escape() {
        // s = 5 in 3 bits; squaring 0 jumps to 6.
        let rep = rep_from(5, 0, 1, 0, |x, y| if x == 0 && y == 0 { 6 } else { (x + y) % 5 });
        let grp = Groupoid::new(&rep).unwrap();
        let t = grp.trace(0);
        let step = t.first_overflow(5).unwrap();
        assert_eq!((step.left, step.right, step.result), (0, 0, 6));
    }

    #[test]
    fn rejects_bad_widths() {
        let mut rep = rep_from(4, 0, 1, 0, |x, y| (x + y) % 4);
        rep.s = 9;
        assert!(Groupoid::new(&rep).is_err());
        let rep = rep_from(4, 0, 1, 4, |x, y| (x + y) % 4);
        assert!(Groupoid::new(&rep).is_err());
    }
}

use super::{Circuit, Gate, Op};
use crate::error::Result;

/// A wire handle inside a [`CircuitBuilder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Wire(usize);

impl Wire {
    pub fn id(self) -> usize {
        self.0
    }
}

/// Incremental construction of a [`Circuit`].
///
/// Multi-bit values ("words") are slices of wires, most significant first,
/// matching the bit order of [`crate::encoding::Bitstring`].
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    num_inputs: usize,
    gates: Vec<Gate>,
    consts: [Option<Wire>; 2],
}

impl CircuitBuilder {
    pub fn new(num_inputs: usize) -> Self {
        let gates = (0..num_inputs)
            .map(|_| Gate::new(Op::Input, &[]).expect("INPUT takes no arguments"))
            .collect();
        CircuitBuilder {
            num_inputs,
            gates,
            consts: [None, None],
        }
    }

    fn push(&mut self, op: Op, args: &[Wire]) -> Wire {
        let ids: Vec<usize> = args.iter().map(|w| w.0).collect();
        self.gates
            .push(Gate::new(op, &ids).expect("builder passes the right arity"));
        Wire(self.gates.len() - 1)
    }

    pub fn input(&self, i: usize) -> Wire {
        assert!(i < self.num_inputs, "input {i} out of range");
        Wire(i)
    }

    pub fn inputs(&self) -> Vec<Wire> {
        (0..self.num_inputs).map(Wire).collect()
    }

    /// Shared constant wire; created on first use.
    pub fn constant(&mut self, value: bool) -> Wire {
        if let Some(w) = self.consts[value as usize] {
            return w;
        }
        let w = self.push(if value { Op::Const1 } else { Op::Const0 }, &[]);
        self.consts[value as usize] = Some(w);
        w
    }

    /// `bd^width(value)` as constant wires.
    pub fn const_word(&mut self, value: u64, width: usize) -> Vec<Wire> {
        (0..width)
            .rev()
            .map(|i| self.constant(i < 64 && (value >> i) & 1 == 1))
            .collect()
    }

    pub fn not(&mut self, a: Wire) -> Wire {
        self.push(Op::Not, &[a])
    }

    pub fn and(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Op::And, &[a, b])
    }

    pub fn or(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Op::Or, &[a, b])
    }

    pub fn xor(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Op::Xor, &[a, b])
    }

    /// `sel ? if_true : if_false`.
    pub fn mux(&mut self, sel: Wire, if_true: Wire, if_false: Wire) -> Wire {
        if if_true == if_false {
            return if_true;
        }
        let diff = self.xor(if_true, if_false);
        let pick = self.and(sel, diff);
        self.xor(if_false, pick)
    }

    pub fn mux_word(&mut self, sel: Wire, if_true: &[Wire], if_false: &[Wire]) -> Vec<Wire> {
        assert_eq!(if_true.len(), if_false.len());
        if_true
            .iter()
            .zip(if_false)
            .map(|(&t, &f)| self.mux(sel, t, f))
            .collect()
    }

    pub fn xor_word(&mut self, a: &[Wire], b: &[Wire]) -> Vec<Wire> {
        assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(&x, &y)| self.xor(x, y)).collect()
    }

    pub fn and_all(&mut self, wires: &[Wire]) -> Wire {
        match wires.split_first() {
            None => self.constant(true),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &w| self.and(acc, w)),
        }
    }

    pub fn or_all(&mut self, wires: &[Wire]) -> Wire {
        match wires.split_first() {
            None => self.constant(false),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &w| self.or(acc, w)),
        }
    }

    pub fn eq_word(&mut self, a: &[Wire], b: &[Wire]) -> Wire {
        let diff = self.xor_word(a, b);
        let any = self.or_all(&diff);
        self.not(any)
    }

    /// `bc(a) = value`.
    pub fn eq_const(&mut self, a: &[Wire], value: u64) -> Wire {
        let k = a.len();
        if k < 64 && value >> k != 0 {
            return self.constant(false);
        }
        let literals: Vec<Wire> = a
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                if (value >> (k - 1 - i)) & 1 == 1 {
                    w
                } else {
                    self.not(w)
                }
            })
            .collect();
        self.and_all(&literals)
    }

    /// Ripple-carry `a + b + carry_in`; returns the low `len` bits and the carry out.
    pub fn add_with_carry(&mut self, a: &[Wire], b: &[Wire], carry_in: Wire) -> (Vec<Wire>, Wire) {
        assert_eq!(a.len(), b.len());
        let mut carry = carry_in;
        let mut sum = vec![carry; a.len()];
        for i in (0..a.len()).rev() {
            let half = self.xor(a[i], b[i]);
            sum[i] = self.xor(half, carry);
            let both = self.and(a[i], b[i]);
            let prop = self.and(half, carry);
            carry = self.or(both, prop);
        }
        (sum, carry)
    }

    /// `a + b mod 2^len` and the carry out.
    pub fn add(&mut self, a: &[Wire], b: &[Wire]) -> (Vec<Wire>, Wire) {
        let zero = self.constant(false);
        self.add_with_carry(a, b, zero)
    }

    /// `a − b mod 2^len` and a flag that is 1 iff `bc(a) ≥ bc(b)` (no borrow).
    pub fn sub(&mut self, a: &[Wire], b: &[Wire]) -> (Vec<Wire>, Wire) {
        let nb: Vec<Wire> = b.iter().map(|&w| self.not(w)).collect();
        let one = self.constant(true);
        self.add_with_carry(a, &nb, one)
    }

    /// `a + value mod 2^len`.
    pub fn add_const(&mut self, a: &[Wire], value: u64) -> Vec<Wire> {
        let c = self.const_word(value & mask(a.len()), a.len());
        self.add(a, &c).0
    }

    /// `a − value mod 2^len`.
    pub fn sub_const(&mut self, a: &[Wire], value: u64) -> Vec<Wire> {
        let negated = value.wrapping_neg() & mask(a.len());
        self.add_const(a, negated)
    }

    /// `bc(a) ≥ value`.
    pub fn ge_const(&mut self, a: &[Wire], value: u64) -> Wire {
        let k = a.len();
        if value == 0 {
            return self.constant(true);
        }
        if k < 64 && value >> k != 0 {
            return self.constant(false);
        }
        let c = self.const_word(value, k);
        self.sub(a, &c).1
    }

    /// `bc(a) < value`.
    pub fn lt_const(&mut self, a: &[Wire], value: u64) -> Wire {
        let ge = self.ge_const(a, value);
        self.not(ge)
    }

    /// Left rotation by one position: `x_1 x_2 .. x_k ↦ x_2 .. x_k x_1`.
    pub fn rotl(&self, a: &[Wire]) -> Vec<Wire> {
        let mut out = a[1..].to_vec();
        out.push(a[0]);
        out
    }

    /// Inlines a copy of `c` reading `inputs`; returns its output wires.
    pub fn embed(&mut self, c: &Circuit, inputs: &[Wire]) -> Result<Vec<Wire>> {
        if inputs.len() != c.num_inputs() {
            return Err(crate::error::Error::Width {
                expected: c.num_inputs(),
                found: inputs.len(),
            });
        }
        let mut map: Vec<Wire> = inputs.to_vec();
        map.reserve(c.size());
        for gate in &c.gates()[c.num_inputs()..] {
            let a = gate.args();
            let w = match gate.op {
                Op::Const0 => self.constant(false),
                Op::Const1 => self.constant(true),
                Op::Not => self.not(map[a[0]]),
                Op::And => self.and(map[a[0]], map[a[1]]),
                Op::Or => self.or(map[a[0]], map[a[1]]),
                Op::Xor => self.xor(map[a[0]], map[a[1]]),
                Op::Input => unreachable!("inputs come first"),
            };
            map.push(w);
        }
        Ok(c.outputs().iter().map(|&o| map[o]).collect())
    }

    /// Number of non-input gates emitted so far.
    pub fn size(&self) -> usize {
        self.gates.len() - self.num_inputs
    }

    pub fn finish(self, outputs: &[Wire]) -> Circuit {
        Circuit::new(
            self.num_inputs,
            self.gates,
            outputs.iter().map(|w| w.0).collect(),
        )
        .expect("builder output is structurally valid")
    }

    /// Circuit with the given truth table; `table[a]` is `bc` of the output on input `bd(a)`.
    pub fn from_truth_table(num_inputs: usize, num_outputs: usize, table: &[u64]) -> Circuit {
        assert_eq!(table.len(), 1usize << num_inputs);
        let mut b = CircuitBuilder::new(num_inputs);
        let x = b.inputs();
        let leaves: Vec<Vec<Wire>> = table
            .iter()
            .map(|&v| b.const_word(v, num_outputs))
            .collect();
        // Shannon expansion from the last input bit upward.
        let mut level = leaves;
        for i in (0..num_inputs).rev() {
            level = level
                .chunks(2)
                .map(|pair| b.mux_word(x[i], &pair[1], &pair[0]))
                .collect();
        }
        b.finish(&level[0])
    }
}

fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

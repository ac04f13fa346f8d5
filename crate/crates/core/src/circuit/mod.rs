//! Gate-level Boolean circuits.
//!
//! A [`Circuit`] is a topologically ordered list of gates. Wires `0..n` are
//! the inputs (gates with op [`Op::Input`]); every other gate may only read
//! wires defined before it, so a single forward pass evaluates the circuit.
//! Outputs are an ordered list of wire ids, read most significant first.
//!
//! The canonical text form is JSON:
//! `{"inputs":n,"gates":[{"id":0,"op":"INPUT","args":[]},...],"outputs":[...]}`.

mod builder;
mod cached;
mod modmul;
mod transform;

pub use builder::{CircuitBuilder, Wire};
pub use cached::CachedCircuit;
pub use modmul::build_modmul;
pub use transform::{build_piecewise, wire_transform, InputSource, OutputSource, WireMap};

use serde::{Deserialize, Serialize};

use crate::encoding::Bitstring;
use crate::error::{Error, Result};

/// Largest input width [`Circuit::tabulate`] will enumerate.
pub const MAX_TABULATE_INPUTS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    And,
    Or,
    Xor,
    Not,
    Const0,
    Const1,
    Input,
}

impl Op {
    pub fn arity(self) -> usize {
        match self {
            Op::And | Op::Or | Op::Xor => 2,
            Op::Not => 1,
            Op::Const0 | Op::Const1 | Op::Input => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::And => "AND",
            Op::Or => "OR",
            Op::Xor => "XOR",
            Op::Not => "NOT",
            Op::Const0 => "CONST0",
            Op::Const1 => "CONST1",
            Op::Input => "INPUT",
        }
    }

    fn from_name(name: &str) -> Option<Op> {
        Some(match name {
            "AND" => Op::And,
            "OR" => Op::Or,
            "XOR" => Op::Xor,
            "NOT" => Op::Not,
            "CONST0" => Op::Const0,
            "CONST1" => Op::Const1,
            "INPUT" => Op::Input,
            _ => return None,
        })
    }
}

/// A gate; its wire id is its position in [`Circuit::gates`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gate {
    pub op: Op,
    args: [usize; 2],
}

impl Gate {
    pub fn new(op: Op, args: &[usize]) -> Result<Gate> {
        if args.len() != op.arity() {
            return Err(Error::Structural(format!(
                "{} takes {} arguments, got {}",
                op.name(),
                op.arity(),
                args.len()
            )));
        }
        let mut packed = [0; 2];
        packed[..args.len()].copy_from_slice(args);
        Ok(Gate { op, args: packed })
    }

    pub fn args(&self) -> &[usize] {
        &self.args[..self.op.arity()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit", into = "RawCircuit")]
pub struct Circuit {
    num_inputs: usize,
    gates: Vec<Gate>,
    outputs: Vec<usize>,
}

impl Circuit {
    /// Checks the structural invariants and builds the circuit.
    pub fn new(num_inputs: usize, gates: Vec<Gate>, outputs: Vec<usize>) -> Result<Circuit> {
        if num_inputs == 0 {
            return Err(Error::Structural("a circuit needs at least one input".into()));
        }
        if outputs.is_empty() {
            return Err(Error::Structural("a circuit needs at least one output".into()));
        }
        if gates.len() < num_inputs {
            return Err(Error::Structural(format!(
                "{num_inputs} inputs declared but only {} gates",
                gates.len()
            )));
        }
        for (id, gate) in gates.iter().enumerate() {
            if (id < num_inputs) != (gate.op == Op::Input) {
                return Err(Error::Structural(format!(
                    "gate {id}: INPUT gates must occupy exactly ids 0..{num_inputs}"
                )));
            }
            if let Some(&bad) = gate.args().iter().find(|&&a| a >= id) {
                return Err(Error::Structural(format!(
                    "gate {id} reads wire {bad}, which is not defined before it"
                )));
            }
        }
        if let Some(&bad) = outputs.iter().find(|&&o| o >= gates.len()) {
            return Err(Error::Structural(format!("output wire {bad} does not exist")));
        }
        Ok(Circuit {
            num_inputs,
            gates,
            outputs,
        })
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Number of non-input gates.
    pub fn size(&self) -> usize {
        self.gates.len() - self.num_inputs
    }

    pub fn evaluate(&self, input: &Bitstring) -> Result<Bitstring> {
        if input.width() != self.num_inputs {
            return Err(Error::Width {
                expected: self.num_inputs,
                found: input.width(),
            });
        }
        let mut values = Vec::with_capacity(self.gates.len());
        values.extend_from_slice(input.bits());
        for gate in &self.gates[self.num_inputs..] {
            let [a, b] = gate.args;
            let v = match gate.op {
                Op::And => values[a] & values[b],
                Op::Or => values[a] | values[b],
                Op::Xor => values[a] ^ values[b],
                Op::Not => !values[a],
                Op::Const0 => false,
                Op::Const1 => true,
                Op::Input => unreachable!("inputs are validated to come first"),
            };
            values.push(v);
        }
        Bitstring::new(self.outputs.iter().map(|&o| values[o]).collect())
    }

    /// Evaluates 64 inputs at once. `lanes[i]` holds input wire `i` for each lane;
    /// the result holds one word per output wire.
    pub fn evaluate_lanes(&self, lanes: &[u64]) -> Result<Vec<u64>> {
        if lanes.len() != self.num_inputs {
            return Err(Error::Width {
                expected: self.num_inputs,
                found: lanes.len(),
            });
        }
        let mut values = Vec::with_capacity(self.gates.len());
        values.extend_from_slice(lanes);
        for gate in &self.gates[self.num_inputs..] {
            let [a, b] = gate.args;
            let v = match gate.op {
                Op::And => values[a] & values[b],
                Op::Or => values[a] | values[b],
                Op::Xor => values[a] ^ values[b],
                Op::Not => !values[a],
                Op::Const0 => 0,
                Op::Const1 => u64::MAX,
                Op::Input => unreachable!("inputs are validated to come first"),
            };
            values.push(v);
        }
        Ok(self.outputs.iter().map(|&o| values[o]).collect())
    }

    /// `bc(C(bd(x)))` for circuits with at most 64 inputs and outputs.
    pub fn eval_u64(&self, x: u64) -> u64 {
        assert!(self.num_inputs <= 64 && self.outputs.len() <= 64);
        let n = self.num_inputs;
        let mut values = Vec::with_capacity(self.gates.len());
        values.extend((0..n).map(|i| (x >> (n - 1 - i)) & 1 == 1));
        for gate in &self.gates[n..] {
            let [a, b] = gate.args;
            let v = match gate.op {
                Op::And => values[a] & values[b],
                Op::Or => values[a] | values[b],
                Op::Xor => values[a] ^ values[b],
                Op::Not => !values[a],
                Op::Const0 => false,
                Op::Const1 => true,
                Op::Input => unreachable!("inputs are validated to come first"),
            };
            values.push(v);
        }
        self.outputs
            .iter()
            .fold(0u64, |acc, &o| (acc << 1) | values[o] as u64)
    }

    /// The full table `a ↦ bc(C(bd(a)))` over `[2^n]`.
    pub fn tabulate(&self) -> Result<Vec<u64>> {
        let n = self.num_inputs;
        if n > MAX_TABULATE_INPUTS || self.outputs.len() > 64 {
            return Err(Error::TooLarge(format!(
                "tabulating a {n}-input, {}-output circuit",
                self.outputs.len()
            )));
        }
        let total = 1usize << n;
        let mut table = vec![0u64; total];
        let mut lanes = vec![0u64; n];
        for block in (0..total).step_by(64) {
            for (i, lane) in lanes.iter_mut().enumerate() {
                let shift = n - 1 - i;
                *lane = (0..64.min(total - block))
                    .filter(|j| ((block + j) >> shift) & 1 == 1)
                    .fold(0u64, |acc, j| acc | 1 << j);
            }
            let outs = self.evaluate_lanes(&lanes)?;
            for (j, slot) in table[block..total.min(block + 64)].iter_mut().enumerate() {
                *slot = outs.iter().fold(0u64, |acc, w| (acc << 1) | (w >> j) & 1);
            }
        }
        Ok(table)
    }

    /// Canonical JSON text.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuits always serialize")
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let raw: RawCircuit = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Circuit::try_from(raw)
    }
}

#[derive(Serialize, Deserialize)]
struct RawGate {
    id: usize,
    op: String,
    args: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawCircuit {
    inputs: usize,
    gates: Vec<RawGate>,
    outputs: Vec<usize>,
}

impl From<Circuit> for RawCircuit {
    fn from(c: Circuit) -> Self {
        RawCircuit {
            inputs: c.num_inputs,
            gates: c
                .gates
                .iter()
                .enumerate()
                .map(|(id, g)| RawGate {
                    id,
                    op: g.op.name().to_string(),
                    args: g.args().to_vec(),
                })
                .collect(),
            outputs: c.outputs,
        }
    }
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = Error;

    fn try_from(raw: RawCircuit) -> Result<Circuit> {
        let parse_err = |location: String, message: String| Error::Parse { location, message };
        let mut gates = Vec::with_capacity(raw.gates.len());
        for (pos, g) in raw.gates.iter().enumerate() {
            let location = format!("gates[{pos}]");
            if g.id != pos {
                return Err(parse_err(location, format!("id {} out of order", g.id)));
            }
            let op = Op::from_name(&g.op)
                .ok_or_else(|| parse_err(location.clone(), format!("unknown op {:?}", g.op)))?;
            if let Some(&bad) = g.args.iter().find(|&&a| a >= pos) {
                return Err(parse_err(
                    location,
                    format!("wire {bad} referenced before definition (cyclic or forward wiring)"),
                ));
            }
            gates.push(Gate::new(op, &g.args).map_err(|e| parse_err(location, e.to_string()))?);
        }
        Circuit::new(raw.inputs, gates, raw.outputs).map_err(|e| match e {
            Error::Structural(message) => parse_err("circuit".into(), message),
            other => other,
        })
    }
}

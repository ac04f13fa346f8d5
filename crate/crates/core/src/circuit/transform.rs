use super::{Circuit, CircuitBuilder, Wire};
use crate::error::{Error, Result};

/// Where one input of an embedded copy of the old circuit comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputSource {
    Input(usize),
    Const(bool),
}

/// Where one output of the new circuit comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputSource {
    /// Output `index` of copy `copy`.
    Old { copy: usize, index: usize },
    Const(bool),
    /// Passthrough of a new input.
    Input(usize),
}

/// A rewiring of a circuit: the new circuit has `num_inputs` inputs, contains
/// one copy of the old circuit per entry of `copies` (each entry wiring every
/// old input), and emits `outputs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireMap {
    pub num_inputs: usize,
    pub copies: Vec<Vec<InputSource>>,
    pub outputs: Vec<OutputSource>,
}

impl WireMap {
    /// One copy, inputs passed through, outputs kept.
    pub fn identity(num_inputs: usize, num_outputs: usize) -> WireMap {
        WireMap {
            num_inputs,
            copies: vec![(0..num_inputs).map(InputSource::Input).collect()],
            outputs: (0..num_outputs)
                .map(|index| OutputSource::Old { copy: 0, index })
                .collect(),
        }
    }

    /// Appends `extra` constant-zero output bits.
    pub fn pad_outputs(num_inputs: usize, num_outputs: usize, extra: usize) -> WireMap {
        let mut map = WireMap::identity(num_inputs, num_outputs);
        map.outputs
            .extend(std::iter::repeat_n(OutputSource::Const(false), extra));
        map
    }

    /// Keeps only the first `keep` output bits.
    pub fn truncate_outputs(num_inputs: usize, keep: usize) -> WireMap {
        WireMap::identity(num_inputs, keep)
    }

    fn check(&self, old_inputs: usize, old_outputs: usize) -> Result<()> {
        if self.num_inputs == 0 || self.outputs.is_empty() {
            return Err(Error::Structural(
                "a rewired circuit needs at least one input and one output".into(),
            ));
        }
        for (c, copy) in self.copies.iter().enumerate() {
            if copy.len() != old_inputs {
                return Err(Error::Structural(format!(
                    "copy {c} wires {} inputs, circuit has {old_inputs}",
                    copy.len()
                )));
            }
            for src in copy {
                if let InputSource::Input(i) = *src {
                    if i >= self.num_inputs {
                        return Err(Error::Structural(format!("copy {c} reads missing input {i}")));
                    }
                }
            }
        }
        for out in &self.outputs {
            match *out {
                OutputSource::Old { copy, index } if copy >= self.copies.len() || index >= old_outputs => {
                    return Err(Error::Structural(format!(
                        "output refers to missing wire {index} of copy {copy}"
                    )));
                }
                OutputSource::Input(i) if i >= self.num_inputs => {
                    return Err(Error::Structural(format!("output passes through missing input {i}")));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// The single map equivalent to applying `self` and then `outer`.
    ///
    /// `old_inputs`/`old_outputs` describe the circuit `self` is applied to.
    pub fn then(&self, outer: &WireMap, old_inputs: usize, old_outputs: usize) -> Result<WireMap> {
        self.check(old_inputs, old_outputs)?;
        outer.check(self.num_inputs, self.outputs.len())?;
        // Each outer copy of the mid circuit expands into every inner copy.
        let mut copies = Vec::new();
        for outer_copy in &outer.copies {
            let resolve = |src: InputSource| match src {
                InputSource::Const(b) => InputSource::Const(b),
                InputSource::Input(i) => outer_copy[i],
            };
            for inner_copy in &self.copies {
                copies.push(inner_copy.iter().map(|&s| resolve(s)).collect());
            }
        }
        let per = self.copies.len();
        let outputs = outer
            .outputs
            .iter()
            .map(|&o| match o {
                OutputSource::Const(b) => OutputSource::Const(b),
                OutputSource::Input(i) => OutputSource::Input(i),
                OutputSource::Old { copy, index } => match self.outputs[index] {
                    OutputSource::Const(b) => OutputSource::Const(b),
                    OutputSource::Old { copy: ic, index: ii } => OutputSource::Old {
                        copy: copy * per + ic,
                        index: ii,
                    },
                    OutputSource::Input(i) => match outer.copies[copy][i] {
                        InputSource::Const(b) => OutputSource::Const(b),
                        InputSource::Input(j) => OutputSource::Input(j),
                    },
                },
            })
            .collect();
        Ok(WireMap {
            num_inputs: outer.num_inputs,
            copies,
            outputs,
        })
    }
}

/// Applies a [`WireMap`] to `c`.
pub fn wire_transform(c: &Circuit, map: &WireMap) -> Result<Circuit> {
    map.check(c.num_inputs(), c.num_outputs())?;
    let mut b = CircuitBuilder::new(map.num_inputs);
    let mut copy_outputs: Vec<Vec<Wire>> = Vec::with_capacity(map.copies.len());
    for copy in &map.copies {
        let ins: Vec<Wire> = copy
            .iter()
            .map(|&s| match s {
                InputSource::Input(i) => b.input(i),
                InputSource::Const(v) => b.constant(v),
            })
            .collect();
        copy_outputs.push(b.embed(c, &ins)?);
    }
    let outs: Vec<Wire> = map
        .outputs
        .iter()
        .map(|&o| match o {
            OutputSource::Old { copy, index } => copy_outputs[copy][index],
            OutputSource::Const(v) => b.constant(v),
            OutputSource::Input(i) => b.input(i),
        })
        .collect();
    Ok(b.finish(&outs))
}

/// First-match case selection: the output is the body of the first case whose
/// 1-output predicate holds, otherwise `default`.
pub fn build_piecewise(cases: &[(Circuit, Circuit)], default: &Circuit) -> Result<Circuit> {
    let n = default.num_inputs();
    let m = default.num_outputs();
    for (i, (pred, body)) in cases.iter().enumerate() {
        if pred.num_inputs() != n || body.num_inputs() != n {
            return Err(Error::Structural(format!("case {i}: input width differs from default")));
        }
        if pred.num_outputs() != 1 {
            return Err(Error::Structural(format!("case {i}: predicate must have one output")));
        }
        if body.num_outputs() != m {
            return Err(Error::Width {
                expected: m,
                found: body.num_outputs(),
            });
        }
    }
    let mut b = CircuitBuilder::new(n);
    let x = b.inputs();
    let mut acc = b.embed(default, &x)?;
    for (pred, body) in cases.iter().rev() {
        let sel = b.embed(pred, &x)?[0];
        let value = b.embed(body, &x)?;
        acc = b.mux_word(sel, &value, &acc);
    }
    Ok(b.finish(&acc))
}

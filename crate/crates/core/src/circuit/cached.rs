use std::sync::OnceLock;

use super::Circuit;
use crate::error::Result;

/// A circuit paired with its lazily computed truth table, for circuits small
/// enough to tabulate. Falls back to gate-level evaluation otherwise.
#[derive(Debug)]
pub struct CachedCircuit {
    circuit: Circuit,
    table: OnceLock<Option<Vec<u64>>>,
}

impl CachedCircuit {
    /// Inputs beyond this width are evaluated gate by gate.
    pub const MAX_CACHED_INPUTS: usize = 20;

    pub fn new(circuit: Circuit) -> Self {
        CachedCircuit {
            circuit,
            table: OnceLock::new(),
        }
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    fn table(&self) -> Option<&[u64]> {
        self.table
            .get_or_init(|| {
                if self.circuit.num_inputs() <= Self::MAX_CACHED_INPUTS {
                    self.circuit.tabulate().ok()
                } else {
                    None
                }
            })
            .as_deref()
    }

    /// `bc(C(bd(x)))`.
    pub fn eval(&self, x: u64) -> u64 {
        match self.table() {
            Some(t) => t[x as usize],
            None => self.circuit.eval_u64(x),
        }
    }

    /// Forces tabulation; returns the table when it fits.
    pub fn full_table(&self) -> Result<Option<&[u64]>> {
        Ok(self.table())
    }
}

impl Clone for CachedCircuit {
    fn clone(&self) -> Self {
        CachedCircuit::new(self.circuit.clone())
    }
}

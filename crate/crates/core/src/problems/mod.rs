//! Instances, solutions, verifiers and brute-force solvers for the ten search
//! problems.
//!
//! Every solution carries the number of the case it claims (1-based, in the
//! order the problem lists its solution types). [`verify`] checks exactly that
//! case's predicate; [`enumerate_solutions`] lists every solution of every case.

mod groupoid;
mod search;
mod solution;
mod validate;
mod verify;

pub use groupoid::{groupoid_op, index_function, Groupoid, IndexTrace, StepKind, TraceStep};
pub use search::{brute_force, brute_force_with, enumerate_solutions, SearchLimits};
pub use solution::{
    BlichfeldtSolution, ClawSolution, DLogSolution, DoveSolution, GeneralClawSolution,
    IndexSolution, PigeonSolution, Solution, Witness,
};
pub use validate::validate_instance;
pub use verify::{verify, verify_with, Verdict, VerifyOptions};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::encoding::ceil_log2;
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Problem {
    #[serde(rename = "pigeon")]
    Pigeon,
    #[serde(rename = "collision")]
    Collision,
    #[serde(rename = "prefix_collision")]
    PrefixCollision,
    #[serde(rename = "dove")]
    Dove,
    #[serde(rename = "claw")]
    Claw,
    #[serde(rename = "general_claw")]
    GeneralClaw,
    #[serde(rename = "dlog")]
    DLog,
    #[serde(rename = "index")]
    Index,
    #[serde(rename = "dlogp")]
    DLogP,
    #[serde(rename = "blichfeldt")]
    Blichfeldt,
}

impl Problem {
    pub const ALL: [Problem; 10] = [
        Problem::Pigeon,
        Problem::Collision,
        Problem::PrefixCollision,
        Problem::Dove,
        Problem::Claw,
        Problem::GeneralClaw,
        Problem::DLog,
        Problem::Index,
        Problem::DLogP,
        Problem::Blichfeldt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Pigeon => "pigeon",
            Problem::Collision => "collision",
            Problem::PrefixCollision => "prefix_collision",
            Problem::Dove => "dove",
            Problem::Claw => "claw",
            Problem::GeneralClaw => "general_claw",
            Problem::DLog => "dlog",
            Problem::Index => "index",
            Problem::DLogP => "dlogp",
            Problem::Blichfeldt => "blichfeldt",
        }
    }

    /// Solution cases, numbered from 1.
    pub fn cases(self) -> u8 {
        match self {
            Problem::Pigeon => 2,
            Problem::Collision | Problem::PrefixCollision | Problem::DLogP => 1,
            Problem::Dove => 4,
            Problem::Claw | Problem::Index | Problem::Blichfeldt => 3,
            Problem::GeneralClaw | Problem::DLog => 5,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Problem> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse {
                location: "problem".into(),
                message: format!("unknown problem {s:?}"),
            })
    }
}

/// `(s, f, id, g, t)`: a groupoid on `[s]` given by `f`, with identity, generator and target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidRep {
    pub s: u64,
    pub f: Circuit,
    pub id: u64,
    pub g: u64,
    pub t: u64,
}

impl GroupoidRep {
    /// `l = ⌈log2 s⌉`, the element width.
    pub fn width(&self) -> usize {
        ceil_log2(self.s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "problem")]
pub enum Instance {
    #[serde(rename = "pigeon")]
    Pigeon { circuit: Circuit },
    #[serde(rename = "collision")]
    Collision { circuit: Circuit },
    #[serde(rename = "prefix_collision")]
    PrefixCollision { circuit: Circuit },
    #[serde(rename = "dove")]
    Dove { circuit: Circuit },
    #[serde(rename = "claw")]
    Claw { sigma0: Circuit, sigma1: Circuit },
    #[serde(rename = "general_claw")]
    GeneralClaw {
        sigma0: Circuit,
        sigma1: Circuit,
        s: u64,
    },
    #[serde(rename = "dlog")]
    DLog(GroupoidRep),
    #[serde(rename = "index")]
    Index(GroupoidRep),
    /// `p − 1 = Π p_i^{k_i}` with `factors = [(p_i, k_i)]`.
    #[serde(rename = "dlogp")]
    DLogP {
        p: u64,
        factors: Vec<(u64, u32)>,
        g: u64,
        y: u64,
    },
    /// `S = { V(bd(i)) : i ∈ [s] }`, each output split into blocks of `coord_width` bits.
    #[serde(rename = "blichfeldt")]
    Blichfeldt {
        basis: IntMatrix,
        s: u64,
        v: Circuit,
        coord_width: usize,
    },
}

impl Instance {
    pub fn problem(&self) -> Problem {
        match self {
            Instance::Pigeon { .. } => Problem::Pigeon,
            Instance::Collision { .. } => Problem::Collision,
            Instance::PrefixCollision { .. } => Problem::PrefixCollision,
            Instance::Dove { .. } => Problem::Dove,
            Instance::Claw { .. } => Problem::Claw,
            Instance::GeneralClaw { .. } => Problem::GeneralClaw,
            Instance::DLog(_) => Problem::DLog,
            Instance::Index(_) => Problem::Index,
            Instance::DLogP { .. } => Problem::DLogP,
            Instance::Blichfeldt { .. } => Problem::Blichfeldt,
        }
    }

    /// Total number of non-input gates over all circuits of the instance.
    pub fn gate_count(&self) -> usize {
        match self {
            Instance::Pigeon { circuit }
            | Instance::Collision { circuit }
            | Instance::PrefixCollision { circuit }
            | Instance::Dove { circuit } => circuit.size(),
            Instance::Claw { sigma0, sigma1 } | Instance::GeneralClaw { sigma0, sigma1, .. } => {
                sigma0.size() + sigma1.size()
            }
            Instance::DLog(rep) | Instance::Index(rep) => rep.f.size(),
            Instance::DLogP { .. } => 0,
            Instance::Blichfeldt { v, .. } => v.size(),
        }
    }

    /// Bits needed to name one candidate witness (the `n` of the instance).
    pub fn witness_bits(&self) -> usize {
        match self {
            Instance::Pigeon { circuit }
            | Instance::Collision { circuit }
            | Instance::PrefixCollision { circuit }
            | Instance::Dove { circuit } => circuit.num_inputs(),
            Instance::Claw { sigma0, .. } | Instance::GeneralClaw { sigma0, .. } => {
                sigma0.num_inputs()
            }
            Instance::DLog(rep) | Instance::Index(rep) => rep.width(),
            Instance::DLogP { p, .. } => ceil_log2((*p).max(2) - 1),
            Instance::Blichfeldt { v, .. } => v.num_inputs(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instances always serialize")
    }

    pub fn from_json(text: &str) -> Result<Instance> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }
}

//! Instance maps with solution pull-backs between the search problems.
//!
//! [`reduce`] turns a source instance into an [`Outcome`]: usually a
//! [`Reduction`] holding the target instance, occasionally a source solution
//! found while building it. Pull-backs that receive a solution of a case the
//! construction rules out return [`Error::SoundnessViolation`].

mod blichfeldt;
mod collision;
mod dlog;
mod gadget;
mod index;

pub use gadget::index_gadget;
pub use index::{identity_groupoid, shifted_groupoid};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::encoding::{bit_decompose, Bitstring};
use crate::error::{Error, Result};
use crate::problems::{validate_instance, verify, Instance, Problem, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionId {
    CollisionToDove,
    DoveToDlog,
    DlogToGeneralClaw,
    GeneralClawToCollision,
    CollisionToClaw,
    ClawToGeneralClaw,
    CollisionToPrefix,
    PrefixToCollision,
    PigeonToIndex,
    IndexToPigeon,
    DlogpToDlog,
    PigeonToBlichfeldt,
}

impl ReductionId {
    pub const ALL: [ReductionId; 12] = [
        ReductionId::CollisionToDove,
        ReductionId::DoveToDlog,
        ReductionId::DlogToGeneralClaw,
        ReductionId::GeneralClawToCollision,
        ReductionId::CollisionToClaw,
        ReductionId::ClawToGeneralClaw,
        ReductionId::CollisionToPrefix,
        ReductionId::PrefixToCollision,
        ReductionId::PigeonToIndex,
        ReductionId::IndexToPigeon,
        ReductionId::DlogpToDlog,
        ReductionId::PigeonToBlichfeldt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReductionId::CollisionToDove => "collision_to_dove",
            ReductionId::DoveToDlog => "dove_to_dlog",
            ReductionId::DlogToGeneralClaw => "dlog_to_general_claw",
            ReductionId::GeneralClawToCollision => "general_claw_to_collision",
            ReductionId::CollisionToClaw => "collision_to_claw",
            ReductionId::ClawToGeneralClaw => "claw_to_general_claw",
            ReductionId::CollisionToPrefix => "collision_to_prefix",
            ReductionId::PrefixToCollision => "prefix_to_collision",
            ReductionId::PigeonToIndex => "pigeon_to_index",
            ReductionId::IndexToPigeon => "index_to_pigeon",
            ReductionId::DlogpToDlog => "dlogp_to_dlog",
            ReductionId::PigeonToBlichfeldt => "pigeon_to_blichfeldt",
        }
    }

    pub fn source(self) -> Problem {
        match self {
            ReductionId::CollisionToDove
            | ReductionId::CollisionToClaw
            | ReductionId::CollisionToPrefix => Problem::Collision,
            ReductionId::DoveToDlog => Problem::Dove,
            ReductionId::DlogToGeneralClaw => Problem::DLog,
            ReductionId::GeneralClawToCollision => Problem::GeneralClaw,
            ReductionId::ClawToGeneralClaw => Problem::Claw,
            ReductionId::PrefixToCollision => Problem::PrefixCollision,
            ReductionId::PigeonToIndex | ReductionId::PigeonToBlichfeldt => Problem::Pigeon,
            ReductionId::IndexToPigeon => Problem::Index,
            ReductionId::DlogpToDlog => Problem::DLogP,
        }
    }

    pub fn target(self) -> Problem {
        match self {
            ReductionId::CollisionToDove => Problem::Dove,
            ReductionId::DoveToDlog | ReductionId::DlogpToDlog => Problem::DLog,
            ReductionId::DlogToGeneralClaw | ReductionId::ClawToGeneralClaw => Problem::GeneralClaw,
            ReductionId::GeneralClawToCollision | ReductionId::PrefixToCollision => {
                Problem::Collision
            }
            ReductionId::CollisionToClaw => Problem::Claw,
            ReductionId::CollisionToPrefix => Problem::PrefixCollision,
            ReductionId::PigeonToIndex => Problem::Index,
            ReductionId::IndexToPigeon => Problem::Pigeon,
            ReductionId::PigeonToBlichfeldt => Problem::Blichfeldt,
        }
    }

    /// Target cases the construction rules out; their pull-back is a soundness violation.
    pub fn impossible_cases(self) -> &'static [u8] {
        match self {
            ReductionId::CollisionToDove => &[1, 2, 4],
            ReductionId::DoveToDlog => &[2],
            ReductionId::CollisionToClaw => &[1],
            ReductionId::ClawToGeneralClaw => &[4, 5],
            ReductionId::PigeonToIndex => &[2],
            ReductionId::DlogpToDlog => &[2, 3, 4, 5],
            ReductionId::PigeonToBlichfeldt => &[2, 3],
            _ => &[],
        }
    }

    /// `(a, e, b)` of [`ReductionId::gate_ceiling`]. `a` and `e` follow the
    /// number of embedded source circuits; `b` is the measured worst case over
    /// 200 seeded instances per width `n ≤ 6`, rounded up by about a quarter.
    pub fn ceiling_constants(self) -> (u64, u32, u64) {
        match self {
            ReductionId::CollisionToDove => (2, 0, 1),
            ReductionId::DoveToDlog => (2, 0, 2),
            ReductionId::DlogToGeneralClaw => (4, 1, 11),
            ReductionId::GeneralClawToCollision => (1, 1, 3),
            ReductionId::CollisionToClaw => (2, 0, 1),
            ReductionId::ClawToGeneralClaw => (1, 0, 1),
            ReductionId::CollisionToPrefix | ReductionId::PrefixToCollision => (1, 0, 1),
            ReductionId::PigeonToIndex => (1, 0, 14),
            ReductionId::IndexToPigeon => (2, 1, 15),
            ReductionId::DlogpToDlog => (0, 0, 44),
            ReductionId::PigeonToBlichfeldt => (2, 0, 1),
        }
    }

    /// Largest gate count a target built from `source` may have:
    /// `a·(n+1)^e·|source| + b·(n+2)²`, `n` the source witness width.
    pub fn gate_ceiling(self, source: &Instance) -> u64 {
        let (a, e, b) = self.ceiling_constants();
        let n = source.witness_bits() as u64;
        a * (n + 1).pow(e) * source.gate_count() as u64 + b * (n + 2).pow(2)
    }
}

impl fmt::Display for ReductionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReductionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<ReductionId> {
        ReductionId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::UnknownReduction(s.to_string()))
    }
}

/// A built reduction: source and target instances plus the pull-back.
pub trait Reduction: Send + Sync {
    /// Reduction id, or ids joined by `>` for a chain.
    fn name(&self) -> String;
    fn source(&self) -> &Instance;
    fn target(&self) -> &Instance;
    /// Maps a valid target solution to a valid source solution.
    fn pull_back(&self, sol: &Solution) -> Result<Solution>;

    /// [`Reduction::pull_back`] after checking `sol` against the target.
    fn pull_back_checked(&self, sol: &Solution) -> Result<Solution> {
        let verdict = verify(self.target(), sol)?;
        if !verdict.is_accepted() {
            return Err(Error::Invalid(vec![format!(
                "target solution rejected: {verdict:?}"
            )]));
        }
        self.pull_back(sol)
    }
}

pub enum Outcome {
    Reduced(Box<dyn Reduction>),
    /// The source was solved while building the target.
    Solved(Solution),
}

impl fmt::Debug for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Reduced(r) => write!(f, "Reduced({})", r.name()),
            Outcome::Solved(s) => write!(f, "Solved({s:?})"),
        }
    }
}

impl Outcome {
    pub fn reduction(self) -> Option<Box<dyn Reduction>> {
        match self {
            Outcome::Reduced(r) => Some(r),
            Outcome::Solved(_) => None,
        }
    }
}

type PullBack = Box<dyn Fn(&Solution) -> Result<Solution> + Send + Sync>;

/// A reduction given by its two instances and a pull-back closure.
struct Mapped {
    id: ReductionId,
    source: Instance,
    target: Instance,
    pull: PullBack,
}

impl Reduction for Mapped {
    fn name(&self) -> String {
        self.id.name().to_string()
    }

    fn source(&self) -> &Instance {
        &self.source
    }

    fn target(&self) -> &Instance {
        &self.target
    }

    fn pull_back(&self, sol: &Solution) -> Result<Solution> {
        if sol.problem() != self.id.target() {
            return Err(Error::VariantMismatch {
                instance: self.id.target().to_string(),
                solution: sol.problem().to_string(),
            });
        }
        (self.pull)(sol)
    }
}

fn mapped(
    id: ReductionId,
    source: &Instance,
    target: Instance,
    pull: impl Fn(&Solution) -> Result<Solution> + Send + Sync + 'static,
) -> Outcome {
    Outcome::Reduced(Box::new(Mapped {
        id,
        source: source.clone(),
        target,
        pull: Box::new(pull),
    }))
}

fn violation(id: ReductionId, case: u8, detail: impl Into<String>) -> Error {
    Error::SoundnessViolation {
        reduction: id.name().to_string(),
        case,
        detail: detail.into(),
    }
}

fn bits(v: u64, n: usize) -> Bitstring {
    bit_decompose(v, n).expect("value fits its width")
}

/// Applies reduction `id` to a valid instance of its source problem.
pub fn reduce(id: ReductionId, inst: &Instance) -> Result<Outcome> {
    if inst.problem() != id.source() {
        return Err(Error::VariantMismatch {
            instance: inst.problem().to_string(),
            solution: id.source().to_string(),
        });
    }
    let violations = validate_instance(inst);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    match id {
        ReductionId::CollisionToDove => collision::collision_to_dove(inst),
        ReductionId::CollisionToClaw => collision::collision_to_claw(inst),
        ReductionId::ClawToGeneralClaw => collision::claw_to_general_claw(inst),
        ReductionId::CollisionToPrefix => collision::collision_to_prefix(inst),
        ReductionId::PrefixToCollision => collision::prefix_to_collision(inst),
        ReductionId::GeneralClawToCollision => collision::general_claw_to_collision(inst),
        ReductionId::DoveToDlog => dlog::dove_to_dlog(inst),
        ReductionId::DlogToGeneralClaw => dlog::dlog_to_general_claw(inst),
        ReductionId::DlogpToDlog => dlog::dlogp_to_dlog(inst),
        ReductionId::PigeonToIndex => index::pigeon_to_index(inst),
        ReductionId::IndexToPigeon => index::index_to_pigeon(inst),
        ReductionId::PigeonToBlichfeldt => blichfeldt::pigeon_to_blichfeldt(inst),
    }
}

/// Two reductions applied in sequence.
pub struct Chain {
    first: Box<dyn Reduction>,
    second: Box<dyn Reduction>,
}

impl Reduction for Chain {
    fn name(&self) -> String {
        format!("{}>{}", self.first.name(), self.second.name())
    }

    fn source(&self) -> &Instance {
        self.first.source()
    }

    fn target(&self) -> &Instance {
        self.second.target()
    }

    fn pull_back(&self, sol: &Solution) -> Result<Solution> {
        self.first.pull_back(&self.second.pull_back(sol)?)
    }
}

/// `second ∘ first`; `second` must have been built from `first`'s target.
pub fn chain(first: Box<dyn Reduction>, second: Box<dyn Reduction>) -> Result<Box<dyn Reduction>> {
    if first.target().problem() != second.source().problem() {
        return Err(Error::ChainMismatch {
            first: first.name(),
            target: first.target().problem().to_string(),
            second: second.name(),
            source_problem: second.source().problem().to_string(),
        });
    }
    if first.target() != second.source() {
        return Err(Error::Structural(format!(
            "{} was not built from the target of {}",
            second.name(),
            first.name()
        )));
    }
    Ok(Box::new(Chain { first, second }))
}

/// Applies `ids` in order. A step that solves its source directly ends the
/// path, and the solution is pulled back through the earlier steps.
pub fn chain_path(ids: &[ReductionId], inst: &Instance) -> Result<Outcome> {
    let Some((&head, rest)) = ids.split_first() else {
        return Err(Error::Structural("empty reduction path".into()));
    };
    let mut acc = match reduce(head, inst)? {
        Outcome::Reduced(r) => r,
        solved => return Ok(solved),
    };
    for &id in rest {
        if acc.target().problem() != id.source() {
            return Err(Error::ChainMismatch {
                first: acc.name(),
                target: acc.target().problem().to_string(),
                second: id.name().to_string(),
                source_problem: id.source().to_string(),
            });
        }
        match reduce(id, acc.target())? {
            Outcome::Reduced(next) => acc = chain(acc, next)?,
            Outcome::Solved(sol) => return Ok(Outcome::Solved(acc.pull_back(&sol)?)),
        }
    }
    Ok(Outcome::Reduced(acc))
}

/// Parses `a>b>c` (or comma-separated) reduction paths.
pub fn parse_path(text: &str) -> Result<Vec<ReductionId>> {
    text.split(['>', ','])
        .map(|s| s.trim().parse())
        .collect()
}

/// The cycle collision → dove → dlog → general_claw → collision.
pub const PWPP_CYCLE: [ReductionId; 4] = [
    ReductionId::CollisionToDove,
    ReductionId::DoveToDlog,
    ReductionId::DlogToGeneralClaw,
    ReductionId::GeneralClawToCollision,
];

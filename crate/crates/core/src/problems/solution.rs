use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Problem;
use crate::encoding::Bitstring;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PigeonSolution {
    /// Case 1: `C(u) = 0^n`.
    Preimage(Bitstring),
    /// Case 2: distinct `u, v` with `C(u) = C(v)`.
    Collision(Bitstring, Bitstring),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DoveSolution {
    /// Case 1: `C(u) = 0^n`.
    Zero(Bitstring),
    /// Case 2: `C(u) = 0^{n-1}1`.
    One(Bitstring),
    /// Case 3: distinct `u, v` with `C(u) = C(v)`.
    Collision(Bitstring, Bitstring),
    /// Case 4: distinct `u, v` with `C(u) = C(v) ⊕ 0^{n-1}1`.
    NearCollision(Bitstring, Bitstring),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClawSolution {
    /// Case 1: `σ0(u) = σ1(v)`.
    Claw(Bitstring, Bitstring),
    /// Case 2: distinct `u, v` with `σ0(u) = σ0(v)`.
    Collision0(Bitstring, Bitstring),
    /// Case 3: distinct `u, v` with `σ1(u) = σ1(v)`.
    Collision1(Bitstring, Bitstring),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneralClawSolution {
    /// Case 1: `bc(u), bc(v) < s` and `σ0(u) = σ1(v)`.
    Claw(Bitstring, Bitstring),
    Collision0(Bitstring, Bitstring),
    Collision1(Bitstring, Bitstring),
    /// Case 4: `bc(u) < s ≤ bc(σ0(u))`.
    Escape0(Bitstring),
    /// Case 5: `bc(u) < s ≤ bc(σ1(u))`.
    Escape1(Bitstring),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DLogSolution {
    /// Case 1: `I(x) = t`.
    Log(u64),
    /// Case 2: `f_G(x, y) ≥ s`.
    Overflow(u64, u64),
    /// Case 3: distinct `x, y` with `I(x) = I(y)`.
    IndexCollision(u64, u64),
    /// Case 4: distinct `x, y` with `f_G(t, I(x)) = f_G(t, I(y))`.
    CosetCollision(u64, u64),
    /// Case 5: `I(x) = f_G(t, I(y))` and `I(x − y mod s) ≠ t`.
    Homomorphism(u64, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexSolution {
    Log(u64),
    Overflow(u64, u64),
    Collision(u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlichfeldtSolution {
    /// Case 1: distinct inputs `u, v` (with `bc < s`) and `V(u) = V(v)`.
    Collision(Bitstring, Bitstring),
    /// Case 2: index `i ∈ [s]` with `V(i) ∈ L(B)`.
    LatticePoint(u64),
    /// Case 3: indices with distinct vectors `V(i) ≠ V(j)` and `V(i) − V(j) ∈ L(B)`.
    Congruent(u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Solution {
    Pigeon(PigeonSolution),
    Collision(Bitstring, Bitstring),
    PrefixCollision(Bitstring, Bitstring),
    Dove(DoveSolution),
    Claw(ClawSolution),
    GeneralClaw(GeneralClawSolution),
    DLog(DLogSolution),
    Index(IndexSolution),
    DLogP(u64),
    Blichfeldt(BlichfeldtSolution),
}

/// One serialized witness: a bit string or an element/index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Bits(Bitstring),
    Index(u64),
}

impl Solution {
    pub fn problem(&self) -> Problem {
        match self {
            Solution::Pigeon(_) => Problem::Pigeon,
            Solution::Collision(..) => Problem::Collision,
            Solution::PrefixCollision(..) => Problem::PrefixCollision,
            Solution::Dove(_) => Problem::Dove,
            Solution::Claw(_) => Problem::Claw,
            Solution::GeneralClaw(_) => Problem::GeneralClaw,
            Solution::DLog(_) => Problem::DLog,
            Solution::Index(_) => Problem::Index,
            Solution::DLogP(_) => Problem::DLogP,
            Solution::Blichfeldt(_) => Problem::Blichfeldt,
        }
    }

    pub fn case(&self) -> u8 {
        use BlichfeldtSolution as B;
        use ClawSolution as C;
        use DLogSolution as D;
        use DoveSolution as V;
        use GeneralClawSolution as G;
        use IndexSolution as I;
        match self {
            Solution::Pigeon(PigeonSolution::Preimage(_)) => 1,
            Solution::Pigeon(PigeonSolution::Collision(..)) => 2,
            Solution::Collision(..) | Solution::PrefixCollision(..) | Solution::DLogP(_) => 1,
            Solution::Dove(V::Zero(_)) => 1,
            Solution::Dove(V::One(_)) => 2,
            Solution::Dove(V::Collision(..)) => 3,
            Solution::Dove(V::NearCollision(..)) => 4,
            Solution::Claw(C::Claw(..)) => 1,
            Solution::Claw(C::Collision0(..)) => 2,
            Solution::Claw(C::Collision1(..)) => 3,
            Solution::GeneralClaw(G::Claw(..)) => 1,
            Solution::GeneralClaw(G::Collision0(..)) => 2,
            Solution::GeneralClaw(G::Collision1(..)) => 3,
            Solution::GeneralClaw(G::Escape0(_)) => 4,
            Solution::GeneralClaw(G::Escape1(_)) => 5,
            Solution::DLog(D::Log(_)) => 1,
            Solution::DLog(D::Overflow(..)) => 2,
            Solution::DLog(D::IndexCollision(..)) => 3,
            Solution::DLog(D::CosetCollision(..)) => 4,
            Solution::DLog(D::Homomorphism(..)) => 5,
            Solution::Index(I::Log(_)) => 1,
            Solution::Index(I::Overflow(..)) => 2,
            Solution::Index(I::Collision(..)) => 3,
            Solution::Blichfeldt(B::Collision(..)) => 1,
            Solution::Blichfeldt(B::LatticePoint(_)) => 2,
            Solution::Blichfeldt(B::Congruent(..)) => 3,
        }
    }

    pub fn witnesses(&self) -> Vec<Witness> {
        use Witness::{Bits, Index};
        let bits2 = |u: &Bitstring, v: &Bitstring| vec![Bits(u.clone()), Bits(v.clone())];
        let idx2 = |x: u64, y: u64| vec![Index(x), Index(y)];
        match self {
            Solution::Pigeon(PigeonSolution::Preimage(u)) => vec![Bits(u.clone())],
            Solution::Pigeon(PigeonSolution::Collision(u, v)) => bits2(u, v),
            Solution::Collision(u, v) | Solution::PrefixCollision(u, v) => bits2(u, v),
            Solution::Dove(d) => match d {
                DoveSolution::Zero(u) | DoveSolution::One(u) => vec![Bits(u.clone())],
                DoveSolution::Collision(u, v) | DoveSolution::NearCollision(u, v) => bits2(u, v),
            },
            Solution::Claw(c) => match c {
                ClawSolution::Claw(u, v)
                | ClawSolution::Collision0(u, v)
                | ClawSolution::Collision1(u, v) => bits2(u, v),
            },
            Solution::GeneralClaw(c) => match c {
                GeneralClawSolution::Claw(u, v)
                | GeneralClawSolution::Collision0(u, v)
                | GeneralClawSolution::Collision1(u, v) => bits2(u, v),
                GeneralClawSolution::Escape0(u) | GeneralClawSolution::Escape1(u) => {
                    vec![Bits(u.clone())]
                }
            },
            Solution::DLog(d) => match *d {
                DLogSolution::Log(x) => vec![Index(x)],
                DLogSolution::Overflow(x, y)
                | DLogSolution::IndexCollision(x, y)
                | DLogSolution::CosetCollision(x, y)
                | DLogSolution::Homomorphism(x, y) => idx2(x, y),
            },
            Solution::Index(d) => match *d {
                IndexSolution::Log(x) => vec![Index(x)],
                IndexSolution::Overflow(x, y) | IndexSolution::Collision(x, y) => idx2(x, y),
            },
            Solution::DLogP(x) => vec![Index(*x)],
            Solution::Blichfeldt(b) => match b {
                BlichfeldtSolution::Collision(u, v) => bits2(u, v),
                BlichfeldtSolution::LatticePoint(i) => vec![Index(*i)],
                BlichfeldtSolution::Congruent(i, j) => idx2(*i, *j),
            },
        }
    }

    /// Rebuilds a solution from its `(problem, case, witnesses)` form.
    pub fn from_parts(problem: Problem, case: u8, witnesses: Vec<Witness>) -> Result<Solution> {
        let bad = |msg: String| Error::Parse {
            location: format!("{problem} solution, case {case}"),
            message: msg,
        };
        let bits = |w: &Witness| match w {
            Witness::Bits(b) => Ok(b.clone()),
            Witness::Index(i) => Err(bad(format!("expected a bit string, found {i}"))),
        };
        let index = |w: &Witness| match w {
            Witness::Index(i) => Ok(*i),
            Witness::Bits(b) => Err(bad(format!("expected an integer, found \"{b}\""))),
        };
        let arity = match (problem, case) {
            (Problem::Pigeon, 1)
            | (Problem::Dove, 1 | 2)
            | (Problem::GeneralClaw, 4 | 5)
            | (Problem::DLog | Problem::Index | Problem::DLogP, 1)
            | (Problem::Blichfeldt, 2) => 1,
            (p, c) if c >= 1 && c <= p.cases() => 2,
            _ => return Err(bad("no such case".into())),
        };
        if witnesses.len() != arity {
            return Err(bad(format!("expected {arity} witnesses, found {}", witnesses.len())));
        }
        let w = &witnesses;
        Ok(match (problem, case) {
            (Problem::Pigeon, 1) => Solution::Pigeon(PigeonSolution::Preimage(bits(&w[0])?)),
            (Problem::Pigeon, _) => Solution::Pigeon(PigeonSolution::Collision(bits(&w[0])?, bits(&w[1])?)),
            (Problem::Collision, _) => Solution::Collision(bits(&w[0])?, bits(&w[1])?),
            (Problem::PrefixCollision, _) => Solution::PrefixCollision(bits(&w[0])?, bits(&w[1])?),
            (Problem::Dove, 1) => Solution::Dove(DoveSolution::Zero(bits(&w[0])?)),
            (Problem::Dove, 2) => Solution::Dove(DoveSolution::One(bits(&w[0])?)),
            (Problem::Dove, 3) => Solution::Dove(DoveSolution::Collision(bits(&w[0])?, bits(&w[1])?)),
            (Problem::Dove, _) => Solution::Dove(DoveSolution::NearCollision(bits(&w[0])?, bits(&w[1])?)),
            (Problem::Claw, 1) => Solution::Claw(ClawSolution::Claw(bits(&w[0])?, bits(&w[1])?)),
            (Problem::Claw, 2) => Solution::Claw(ClawSolution::Collision0(bits(&w[0])?, bits(&w[1])?)),
            (Problem::Claw, _) => Solution::Claw(ClawSolution::Collision1(bits(&w[0])?, bits(&w[1])?)),
            (Problem::GeneralClaw, 1) => {
                Solution::GeneralClaw(GeneralClawSolution::Claw(bits(&w[0])?, bits(&w[1])?))
            }
            (Problem::GeneralClaw, 2) => {
                Solution::GeneralClaw(GeneralClawSolution::Collision0(bits(&w[0])?, bits(&w[1])?))
            }
            (Problem::GeneralClaw, 3) => {
                Solution::GeneralClaw(GeneralClawSolution::Collision1(bits(&w[0])?, bits(&w[1])?))
            }
            (Problem::GeneralClaw, 4) => Solution::GeneralClaw(GeneralClawSolution::Escape0(bits(&w[0])?)),
            (Problem::GeneralClaw, _) => Solution::GeneralClaw(GeneralClawSolution::Escape1(bits(&w[0])?)),
            (Problem::DLog, 1) => Solution::DLog(DLogSolution::Log(index(&w[0])?)),
            (Problem::DLog, 2) => Solution::DLog(DLogSolution::Overflow(index(&w[0])?, index(&w[1])?)),
            (Problem::DLog, 3) => Solution::DLog(DLogSolution::IndexCollision(index(&w[0])?, index(&w[1])?)),
            (Problem::DLog, 4) => Solution::DLog(DLogSolution::CosetCollision(index(&w[0])?, index(&w[1])?)),
            (Problem::DLog, _) => Solution::DLog(DLogSolution::Homomorphism(index(&w[0])?, index(&w[1])?)),
            (Problem::Index, 1) => Solution::Index(IndexSolution::Log(index(&w[0])?)),
            (Problem::Index, 2) => Solution::Index(IndexSolution::Overflow(index(&w[0])?, index(&w[1])?)),
            (Problem::Index, _) => Solution::Index(IndexSolution::Collision(index(&w[0])?, index(&w[1])?)),
            (Problem::DLogP, _) => Solution::DLogP(index(&w[0])?),
            (Problem::Blichfeldt, 1) => {
                Solution::Blichfeldt(BlichfeldtSolution::Collision(bits(&w[0])?, bits(&w[1])?))
            }
            (Problem::Blichfeldt, 2) => Solution::Blichfeldt(BlichfeldtSolution::LatticePoint(index(&w[0])?)),
            (Problem::Blichfeldt, _) => {
                Solution::Blichfeldt(BlichfeldtSolution::Congruent(index(&w[0])?, index(&w[1])?))
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("solutions always serialize")
    }

    pub fn from_json(text: &str) -> Result<Solution> {
        let raw: RawSolution = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Solution::from_parts(raw.problem, raw.case, raw.witnesses)
    }
}

#[derive(Serialize, Deserialize)]
struct RawSolution {
    problem: Problem,
    case: u8,
    witnesses: Vec<Witness>,
}

impl Serialize for Solution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawSolution {
            problem: self.problem(),
            case: self.case(),
            witnesses: self.witnesses(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Solution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSolution::deserialize(deserializer)?;
        Solution::from_parts(raw.problem, raw.case, raw.witnesses).map_err(serde::de::Error::custom)
    }
}

//! Fixed-width bit strings and the conversions between strings and naturals.
//!
//! A [`Bitstring`] `x_1 x_2 ... x_k` is read most significant bit first, so
//! `bit_compose("101") = 5`. All conversions to and from integers are limited
//! to 64-bit widths.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An immutable, non-empty string over `{0,1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    bits: Vec<bool>,
}

/// Direction of a modular shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Bitstring {
    /// Builds a bit string from explicit bits. Fails on an empty sequence.
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Structural("bit strings have width at least 1".into()));
        }
        Ok(Self { bits })
    }

    pub fn zeros(width: usize) -> Self {
        assert!(width >= 1, "bit strings have width at least 1");
        Self {
            bits: vec![false; width],
        }
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Bit `x_{i+1}` (zero-based from the most significant end).
    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &Bitstring) -> Bitstring {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Bitstring { bits }
    }

    /// The substring `x_{start+1} .. x_{end}`; fails if it would be empty.
    pub fn slice(&self, start: usize, end: usize) -> Result<Bitstring> {
        if start >= end || end > self.width() {
            return Err(Error::Structural(format!(
                "slice {start}..{end} of a width-{} string",
                self.width()
            )));
        }
        Ok(Bitstring {
            bits: self.bits[start..end].to_vec(),
        })
    }

    /// Bitwise XOR of two strings of equal width.
    pub fn xor(&self, other: &Bitstring) -> Result<Bitstring> {
        check_width(self.width(), other.width())?;
        Ok(Bitstring {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// `self ⊕ 0^{k-1}1`: flips the last bit.
    pub fn flip_last(&self) -> Bitstring {
        let mut bits = self.bits.clone();
        let last = bits.len() - 1;
        bits[last] = !bits[last];
        Bitstring { bits }
    }

    /// `0^{k-1}1`.
    pub fn unit(width: usize) -> Bitstring {
        Bitstring::zeros(width).flip_last()
    }
}

fn check_width(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Width { expected, found });
    }
    Ok(())
}

/// `bc(x) = Σ_{i=0}^{k-1} x_{k-i} 2^i`.
///
/// Panics if `x` is wider than 64 bits.
pub fn bit_compose(x: &Bitstring) -> u64 {
    assert!(x.width() <= 64, "bit_compose is limited to 64-bit strings");
    x.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

/// `bd^k(a)`: the width-`k` representation of `a` with leading zeros.
pub fn bit_decompose(a: u64, k: usize) -> Result<Bitstring> {
    if k == 0 || k > 64 {
        return Err(Error::Structural(format!("unsupported width {k}")));
    }
    if k < 64 && a >> k != 0 {
        return Err(Error::Range {
            value: a,
            bound: 1u64 << k,
        });
    }
    Ok(Bitstring {
        bits: (0..k).rev().map(|i| (a >> i) & 1 == 1).collect(),
    })
}

/// `bd_0(a)`: the representation without leading zeros; `bd_0(0) = "0"`.
pub fn bit_decompose_minimal(a: u64) -> Bitstring {
    let width = (64 - a.leading_zeros() as usize).max(1);
    bit_decompose(a, width).expect("width covers the value")
}

/// `bd^k(bc(u) ± bc(w) mod 2^k)`: addition or subtraction ignoring the carry.
pub fn mod_shift(u: &Bitstring, w: &Bitstring, sign: Sign) -> Result<Bitstring> {
    check_width(u.width(), w.width())?;
    let k = u.width();
    let mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let (a, b) = (bit_compose(u), bit_compose(w));
    let value = match sign {
        Sign::Plus => a.wrapping_add(b),
        Sign::Minus => a.wrapping_sub(b),
    } & mask;
    bit_decompose(value, k)
}

/// `⌈log2(s)⌉` for `s ≥ 1`: the number of bits needed for elements of `[s]`.
pub fn ceil_log2(s: u64) -> usize {
    assert!(s >= 1);
    (64 - (s - 1).leading_zeros()) as usize
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    location: format!("bit {i}"),
                    message: format!("expected '0' or '1', found {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Bitstring::new(bits)
    }
}

impl Serialize for Bitstring {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bitstring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(bit_compose(&bs("101")), 5);
        assert_eq!(bit_compose(&bs("0000")), 0);
        assert_eq!(bit_compose(&bs("0011")), 3);
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(bit_decompose(5, 4).unwrap(), bs("0101"));
        assert_eq!(bit_decompose(0, 3).unwrap(), bs("000"));
        assert_eq!(bit_decompose(6, 3).unwrap(), bs("110"));
        assert_eq!(
            bit_decompose(8, 3),
            Err(Error::Range { value: 8, bound: 8 })
        );
    }

    #[test]
    fn minimal_examples() {
        assert_eq!(bit_decompose_minimal(5), bs("101"));
        assert_eq!(bit_decompose_minimal(12), bs("1100"));
        assert_eq!(bit_decompose_minimal(0), bs("0"));
    }

    #[test]
    fn minimal_has_no_leading_zero() {
        for a in 1..5000u64 {
            let x = bit_decompose_minimal(a);
            assert!(x.bit(0));
            assert_eq!(x.width(), a.ilog2() as usize + 1);
            assert_eq!(bit_compose(&x), a);
        }
    }

    #[test]
    fn mod_shift_examples() {
        assert_eq!(mod_shift(&bs("0101"), &bs("0100"), Sign::Plus).unwrap(), bs("1001"));
        assert_eq!(mod_shift(&bs("1101"), &bs("0100"), Sign::Plus).unwrap(), bs("0001"));
        assert_eq!(mod_shift(&bs("0001"), &bs("0100"), Sign::Minus).unwrap(), bs("1101"));
        assert!(matches!(
            mod_shift(&bs("01"), &bs("010"), Sign::Plus),
            Err(Error::Width { .. })
        ));
    }

    #[test]
    fn exhaustive_round_trips() {
        for k in 1..=10usize {
            for a in 0..(1u64 << k) {
                let x = bit_decompose(a, k).unwrap();
                assert_eq!(x.width(), k);
                assert_eq!(bit_compose(&x), a);
                assert_eq!(bit_decompose(bit_compose(&x), k).unwrap(), x);
            }
        }
        for k in 11..=16usize {
            for a in [0, 1, (1u64 << k) - 1, 0x5555 & ((1u64 << k) - 1)] {
                assert_eq!(bit_compose(&bit_decompose(a, k).unwrap()), a);
            }
        }
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(16), 4);
        assert_eq!(ceil_log2(17), 5);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<Bitstring>().is_err());
        assert!("01a".parse::<Bitstring>().is_err());
    }

    proptest! {
        #[test]
        fn shift_then_unshift(k in 1usize..=32, a in any::<u64>(), b in any::<u64>()) {
            let mask = (1u64 << k) - 1;
            let u = bit_decompose(a & mask, k).unwrap();
            let w = bit_decompose(b & mask, k).unwrap();
            let there = mod_shift(&u, &w, Sign::Plus).unwrap();
            prop_assert_eq!(mod_shift(&there, &w, Sign::Minus).unwrap(), u);
        }

        #[test]
        fn display_parse_round_trip(k in 1usize..=64, a in any::<u64>()) {
            let a = if k == 64 { a } else { a & ((1u64 << k) - 1) };
            let x = bit_decompose(a, k).unwrap();
            prop_assert_eq!(x.to_string().parse::<Bitstring>().unwrap(), x);
        }
    }
}

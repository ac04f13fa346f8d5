//! Exact integer linear algebra for full-rank lattices `L(B) = { Bz : z ∈ Z^n }`.
//!
//! The columns of `B` are the basis vectors. Everything here is exact; there
//! is no floating point in this module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A square integer matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<IntMatrix> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Structural("matrix must be at least 1×1".into()));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Structural(format!(
                "row {r} has {} entries, expected {n}",
                rows[r].len()
            )));
        }
        Ok(IntMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// `c · I_n`.
    pub fn scaled_identity(n: usize, c: i64) -> IntMatrix {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = c;
        }
        IntMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    /// `B · z`.
    pub fn mul_vec(&self, z: &[i64]) -> Vec<i64> {
        assert_eq!(z.len(), self.n);
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        IntMatrix { n, entries }
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<IntMatrix> {
        IntMatrix::from_rows(rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows()
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_exact(b: &IntMatrix) -> BigInt {
    let n = b.n;
    let mut a: Vec<Vec<BigInt>> = b
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Solves `Bz = x` over the rationals; `Some(z)` iff `z` is integral.
pub fn lattice_member(b: &IntMatrix, x: &[i64]) -> Result<Option<Vec<BigInt>>> {
    Lattice::new(b.clone())?.member(x)
}

/// A nonsingular basis with its adjugate precomputed, so each membership
/// query is one integer matrix-vector product.
#[derive(Debug, Clone)]
pub struct Lattice {
    basis: IntMatrix,
    det: BigInt,
    adjugate: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn new(basis: IntMatrix) -> Result<Lattice> {
        let det = det_exact(&basis);
        if det.is_zero() {
            return Err(Error::Invalid(vec!["basis is singular (det = 0)".into()]));
        }
        let inverse = rational_inverse(&basis);
        let det_q = BigRational::from_integer(det.clone());
        let adjugate = inverse
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|q| {
                        let v = q * &det_q;
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        Ok(Lattice {
            basis,
            det,
            adjugate,
        })
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn member(&self, x: &[i64]) -> Result<Option<Vec<BigInt>>> {
        if x.len() != self.basis.n {
            return Err(Error::Width {
                expected: self.basis.n,
                found: x.len(),
            });
        }
        let mut z = Vec::with_capacity(x.len());
        for row in &self.adjugate {
            let dot: BigInt = row.iter().zip(x).map(|(a, &v)| a * v).sum();
            let (q, r) = dot.div_rem(&self.det);
            if !r.is_zero() {
                return Ok(None);
            }
            z.push(q);
        }
        Ok(Some(z))
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        matches!(self.member(x), Ok(Some(_)))
    }

    /// `adj(B)·x mod |det B|`, componentwise. Two vectors share a key iff their
    /// difference lies in the lattice.
    pub fn coset_key(&self, x: &[i64]) -> Vec<BigInt> {
        let m = self.det.abs();
        self.adjugate
            .iter()
            .map(|row| {
                let dot: BigInt = row.iter().zip(x).map(|(a, &v)| a * v).sum();
                dot.mod_floor(&m)
            })
            .collect()
    }

    /// `|det(B)|` as a `u64`, saturating.
    pub fn volume(&self) -> u64 {
        self.det.abs().to_u64().unwrap_or(u64::MAX)
    }
}

fn rational_inverse(b: &IntMatrix) -> Vec<Vec<BigRational>> {
    let n = b.n;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    let v = if j < n {
                        b.get(i, j)
                    } else {
                        (j - n == i) as i64
                    };
                    BigRational::from_integer(BigInt::from(v))
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        let pivot = (k..n)
            .find(|&i| !a[i][k].is_zero())
            .expect("caller checked the determinant");
        a.swap(k, pivot);
        let inv = a[k][k].recip();
        for v in a[k].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != k && !row[k].is_zero() {
                let factor = row[k].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v = &*v - &factor * p;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det_exact(&IntMatrix::scaled_identity(4, 2)), BigInt::from(16));
        assert_eq!(det_exact(&m(&[&[2, 1], &[0, 3]])), BigInt::from(6));
        assert_eq!(det_exact(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(det_exact(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            det_exact(&m(&[&[2, -3, 1], &[2, 0, -1], &[1, 4, 5]])),
            BigInt::from(49)
        );
    }

    #[test]
    fn membership_examples() {
        let b3 = IntMatrix::scaled_identity(3, 2);
        assert_eq!(lattice_member(&b3, &[2, 0, -2]).unwrap(), Some(big(&[1, 0, -1])));
        let b2 = IntMatrix::scaled_identity(2, 2);
        assert_eq!(lattice_member(&b2, &[1, 0]).unwrap(), None);
        assert_eq!(lattice_member(&b2, &[0, 0]).unwrap(), Some(big(&[0, 0])));
        assert!(matches!(
            lattice_member(&m(&[&[1, 2], &[2, 4]]), &[0, 0]),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn only_zero_ternary_vector_in_even_lattice() {
        for n in 1..=4usize {
            let lat = Lattice::new(IntMatrix::scaled_identity(n, 2)).unwrap();
            let mut members = 0;
            for code in 0..3usize.pow(n as u32) {
                let v: Vec<i64> = (0..n)
                    .map(|i| (code / 3usize.pow(i as u32) % 3) as i64 - 1)
                    .collect();
                if lat.contains(&v) {
                    assert!(v.iter().all(|&c| c == 0));
                    members += 1;
                }
            }
            assert_eq!(members, 1);
        }
    }

    #[test]
    fn serde_round_trip() {
        let b = m(&[&[2, 1], &[0, 3]]);
        let text = serde_json::to_string(&b).unwrap();
        assert_eq!(text, "[[2,1],[0,3]]");
        assert_eq!(serde_json::from_str::<IntMatrix>(&text).unwrap(), b);
        assert!(serde_json::from_str::<IntMatrix>("[[1,2],[3]]").is_err());
    }

    #[test]
    fn coset_keys_agree_with_difference_membership() {
        let lat = Lattice::new(m(&[&[2, 1], &[-1, 3]])).unwrap();
        let pts: Vec<[i64; 2]> = (-4..=4).flat_map(|a| (-4..=4).map(move |b| [a, b])).collect();
        for x in &pts {
            for y in &pts {
                let d = [x[0] - y[0], x[1] - y[1]];
                assert_eq!(lat.coset_key(x) == lat.coset_key(y), lat.contains(&d));
            }
        }
    }

    /// Product of elementary unimodular matrices.
    fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
        let mut u = IntMatrix::scaled_identity(n, 1);
        for &(i, j, c) in ops {
            let (i, j) = (i % n, j % n);
            if i == j {
                continue;
            }
            let mut e = IntMatrix::scaled_identity(n, 1);
            e.entries[i * n + j] = c;
            u = u.mul(&e);
        }
        u
    }

    proptest! {
        #[test]
        fn unimodular_bases_keep_members_and_volume(
            diag in proptest::collection::vec(1i64..=10, 1..=6),
            ops in proptest::collection::vec((0usize..6, 0usize..6, -2i64..=2), 0..6),
            zs in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 6), 4),
        ) {
            let n = diag.len();
            let mut d = IntMatrix::scaled_identity(n, 1);
            for (i, &v) in diag.iter().enumerate() {
                d.entries[i * n + i] = v;
            }
            let b = d.mul(&unimodular(n, &ops));
            prop_assert_eq!(det_exact(&b).abs(), det_exact(&d).abs());
            let lat = Lattice::new(b.clone()).unwrap();
            for z in &zs {
                let z = &z[..n];
                let x = b.mul_vec(z);
                prop_assert_eq!(lat.member(&x).unwrap(), Some(big(z)));
            }
        }
    }
}

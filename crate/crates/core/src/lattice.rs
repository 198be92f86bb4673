//! Exact integer linear algebra in `N = Z^4` and its dual.
//!
//! Ray coordinates in this problem domain are tiny (|coord| <= 3), so plain
//! machine integers with 128-bit intermediates are exact for everything done
//! here. Rational arithmetic lives in [`crate::ratlin`] and [`crate::lp`].

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point of the lattice `N = Z^4`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub struct LatticeVector(pub [i64; 4]);

/// An element of the dual lattice `M = Hom(N, Z)`.
///
/// Duals of unimodular bases are always integral, so the integral
/// representation is enough outside the LP solver (which works with
/// rationals and scales its witnesses back to `M`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualVector(pub [i64; 4]);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("the four vectors do not form a unimodular basis (|det| = {0})")]
    NotABasis(i64),
}

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector([0; 4]);

    pub fn basis(i: usize) -> LatticeVector {
        let mut c = [0; 4];
        c[i] = 1;
        LatticeVector(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    /// gcd of the coordinates; 0 for the zero vector.
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c.abs()))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn scale(&self, k: i64) -> LatticeVector {
        LatticeVector([self.0[0] * k, self.0[1] * k, self.0[2] * k, self.0[3] * k])
    }
}

impl DualVector {
    pub fn basis(i: usize) -> DualVector {
        let mut c = [0; 4];
        c[i] = 1;
        DualVector(c)
    }

    /// The exact pairing `<m, v>`.
    pub fn pair(&self, v: &LatticeVector) -> i64 {
        (0..4).map(|i| self.0[i] * v.0[i]).sum()
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, o: LatticeVector) -> LatticeVector {
        LatticeVector([
            self.0[0] + o.0[0],
            self.0[1] + o.0[1],
            self.0[2] + o.0[2],
            self.0[3] + o.0[3],
        ])
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, o: LatticeVector) -> LatticeVector {
        self + (-o)
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        self.scale(-1)
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Debug for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{},{},{}>", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

fn det3(m: [[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Exact determinant of the 4x4 matrix with rows `v1..v4`.
pub fn det4(v1: &LatticeVector, v2: &LatticeVector, v3: &LatticeVector, v4: &LatticeVector) -> i64 {
    let rows = [v1.0, v2.0, v3.0, v4.0];
    let mut det: i128 = 0;
    for col in 0..4 {
        let mut minor = [[0i128; 3]; 3];
        for (mi, row) in rows.iter().enumerate().skip(1) {
            let mut mj = 0;
            for (j, &c) in row.iter().enumerate() {
                if j != col {
                    minor[mi - 1][mj] = c as i128;
                    mj += 1;
                }
            }
        }
        let sign = if col % 2 == 0 { 1 } else { -1 };
        det += sign * rows[0][col] as i128 * det3(minor);
    }
    i64::try_from(det).expect("determinant exceeds i64 range")
}

/// True iff `vs` is a basis of `Z^4`.
pub fn is_unimodular_basis(vs: &[LatticeVector; 4]) -> bool {
    det4(&vs[0], &vs[1], &vs[2], &vs[3]).abs() == 1
}

/// Dual basis `{m_1..m_4}` with `<m_i, vs_j> = delta_ij`.
pub fn dual_basis(vs: &[LatticeVector; 4]) -> Result<[DualVector; 4], LatticeError> {
    let det = det4(&vs[0], &vs[1], &vs[2], &vs[3]);
    if det.abs() != 1 {
        return Err(LatticeError::NotABasis(det));
    }
    // m_i is the i-th column of B^{-1} where B has rows vs_j; with |det| = 1
    // the inverse is the adjugate up to sign, hence integral.
    let mut duals = [[0i64; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            // cofactor C_{ik}: delete row i, column k of B.
            let mut minor = [[0i128; 3]; 3];
            let mut mr = 0;
            for r in 0..4 {
                if r == i {
                    continue;
                }
                let mut mc = 0;
                for c in 0..4 {
                    if c == k {
                        continue;
                    }
                    minor[mr][mc] = vs[r].0[c] as i128;
                    mc += 1;
                }
                mr += 1;
            }
            let sign = if (i + k) % 2 == 0 { 1i128 } else { -1i128 };
            // (B^{-1})_{ki} = C_{ik} / det; m_i coordinate k.
            duals[i][k] = i64::try_from(sign * det3(minor) / det as i128)
                .expect("adjugate exceeds i64 range");
        }
    }
    Ok(duals.map(DualVector))
}

/// Coefficients `c` with `v = sum c_i basis_i`, exact.
pub fn express_in_basis(
    v: &LatticeVector,
    basis: &[LatticeVector; 4],
) -> Result<[i64; 4], LatticeError> {
    let duals = dual_basis(basis)?;
    Ok([
        duals[0].pair(v),
        duals[1].pair(v),
        duals[2].pair(v),
        duals[3].pair(v),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> LatticeVector {
        LatticeVector::basis(i)
    }

    #[test]
    fn det4_identity_and_degenerate() {
        assert_eq!(det4(&e(0), &e(1), &e(2), &e(3)), 1);
        assert_eq!(det4(&e(0), &e(1), &e(2), &e(2)), 0);
        let s = e(0) + e(1) + e(2) + e(3);
        assert_eq!(det4(&e(0), &e(1), &e(2), &s), 1);
    }

    #[test]
    fn det4_alternating() {
        let a = LatticeVector([2, -1, 3, 0]);
        let b = LatticeVector([1, 1, 1, 1]);
        let c = LatticeVector([0, 2, -2, 3]);
        let d = LatticeVector([-1, 0, 0, 2]);
        assert_eq!(det4(&a, &b, &c, &d), -det4(&b, &a, &c, &d));
        assert_eq!(det4(&a, &b, &c, &d), -det4(&a, &b, &d, &c));
    }

    #[test]
    fn unimodular_checks() {
        assert!(is_unimodular_basis(&[e(0), e(1), e(2), e(3)]));
        assert!(!is_unimodular_basis(&[e(0), e(1), e(2), e(3).scale(2)]));
        assert!(is_unimodular_basis(&[
            e(0),
            e(1),
            e(2),
            LatticeVector([-1, -1, -1, -1])
        ]));
    }

    #[test]
    fn dual_basis_kronecker() {
        let basis = [e(0), e(0) + e(1), e(2), e(3)];
        let duals = dual_basis(&basis).unwrap();
        assert_eq!(duals[0], DualVector([1, -1, 0, 0]));
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(duals[i].pair(&basis[j]), (i == j) as i64);
            }
        }
    }

    #[test]
    fn dual_basis_rejects_non_basis() {
        let err = dual_basis(&[e(0), e(1), e(2), e(3).scale(2)]).unwrap_err();
        assert_eq!(err, LatticeError::NotABasis(2));
    }

    #[test]
    fn express_and_recompose() {
        let basis = [e(0), e(1), e(2), e(3)];
        assert_eq!(express_in_basis(&e(0), &basis).unwrap(), [1, 0, 0, 0]);
        assert_eq!(
            express_in_basis(&LatticeVector([2, 3, 0, -1]), &basis).unwrap(),
            [2, 3, 0, -1]
        );
        let skew = [e(0), e(0) + e(1), LatticeVector([1, 1, 1, 0]), e(3)];
        let v = LatticeVector([3, -2, 5, 1]);
        let c = express_in_basis(&v, &skew).unwrap();
        let back = skew
            .iter()
            .zip(c)
            .fold(LatticeVector::ZERO, |acc, (b, k)| acc + b.scale(k));
        assert_eq!(back, v);
    }
}

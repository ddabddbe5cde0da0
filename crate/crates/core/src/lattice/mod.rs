//! Exact integer lattice algebra: normal forms, kernels, indices,
//! saturations and overlattices of `Z^n`.
//!
//! Everything here works over arbitrary-precision integers and rationals.

mod matrix;
mod normal_form;
mod overlattice;

pub use matrix::IntMatrix;
pub use normal_form::{hnf, snf, SnfResult};
pub use overlattice::{enumerate_overlattices, is_primitive, Overlattice};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("rows have different lengths")]
    RaggedRows,
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("rank zero")]
    RankZero,
    #[error("degenerate ray configuration")]
    DegenerateRays,
    #[error("zero vector")]
    ZeroVector,
    #[error("vector does not lie in the lattice")]
    NotInLattice,
    #[error("lattice basis is singular")]
    SingularBasis,
    #[error("lattice does not contain Z^n")]
    NotOverlattice,
    #[error("denominator must be positive")]
    BadDenominator,
}

/// Index of the row span of `gens` inside its saturation, i.e. the product
/// of the nonzero invariant factors.
pub fn lattice_index(gens: &IntMatrix) -> Result<BigInt, LatticeError> {
    let s = snf(gens);
    if s.rank() == 0 {
        return Err(LatticeError::RankZero);
    }
    Ok(s.torsion_order())
}

/// Primitive generator of the kernel of an `n x (n+1)` matrix of rank `n`,
/// with its first nonzero entry positive.
pub fn kernel_primitive(a: &IntMatrix) -> Result<Vec<BigInt>, LatticeError> {
    if a.cols() != a.rows() + 1 {
        return Err(LatticeError::ShapeMismatch {
            expected: a.rows() + 1,
            found: a.cols(),
        });
    }
    let n = a.rows();
    let (h, u) = hnf(&a.transpose());
    if h.row(n - 1).iter().all(Zero::is_zero) {
        return Err(LatticeError::DegenerateRays);
    }
    let mut k = u.row(n).to_vec();
    if k.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        k.iter_mut().for_each(|x| *x = -std::mem::take(x));
    }
    Ok(k)
}

/// Basis (in Hermite form) of the smallest saturated sublattice of `Z^n`
/// containing the row span of `gens`.
pub fn saturation(gens: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let s = snf(gens);
    let k = s.rank();
    if k == 0 {
        return Err(LatticeError::RankZero);
    }
    // gens = left^-1 * D * right^-1, so the first k rows of right^-1 span
    // the rational span and form a primitive system
    let rinv = s.right.unimodular_inverse()?;
    let idx: Vec<usize> = (0..k).collect();
    let (h, _) = hnf(&rinv.select_rows(&idx)?);
    h.select_rows(&idx)
}

pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn index_examples() {
        assert_eq!(lattice_index(&m(&[&[2, 0], &[0, 3]])).unwrap(), BigInt::from(6));
        assert_eq!(lattice_index(&m(&[&[2, 4]])).unwrap(), BigInt::from(2));
        assert_eq!(lattice_index(&m(&[&[-1, 0], &[0, -1]])).unwrap(), BigInt::from(1));
        assert_eq!(
            lattice_index(&IntMatrix::zeros(2, 2)),
            Err(LatticeError::RankZero)
        );
    }

    #[test]
    fn kernel_examples() {
        let k = |cols: &[&[i64]]| kernel_primitive(&IntMatrix::from_cols(cols).unwrap());
        assert_eq!(k(&[&[1, 0], &[0, 1], &[-1, -1]]).unwrap(), ints(&[1, 1, 1]));
        assert_eq!(k(&[&[2, 3], &[-1, 0], &[0, -1]]).unwrap(), ints(&[1, 2, 3]));
        assert_eq!(k(&[&[1, 2], &[-1, 0], &[0, -1]]).unwrap(), ints(&[1, 1, 2]));
        assert_eq!(
            k(&[&[1, 0], &[2, 0], &[3, 0]]),
            Err(LatticeError::DegenerateRays)
        );
    }

    #[test]
    fn kernel_sign_normalized_when_first_entry_zero() {
        // v1 = 0-direction free: columns (1,0), (0,1), (0,-1)
        let a = IntMatrix::from_cols(&[&[1i64, 0], &[0, 1], &[0, -1]]).unwrap();
        assert_eq!(kernel_primitive(&a).unwrap(), ints(&[0, 1, 1]));
    }

    #[test]
    fn saturation_examples() {
        assert_eq!(saturation(&m(&[&[2, 4]])).unwrap(), m(&[&[1, 2]]));
        assert_eq!(
            saturation(&m(&[&[1, 0], &[0, 1]])).unwrap(),
            IntMatrix::identity(2)
        );
        assert_eq!(saturation(&m(&[&[3, 0]])).unwrap(), m(&[&[1, 0]]));
        let sat = saturation(&m(&[&[2, 0, 2], &[0, 3, 3]])).unwrap();
        assert_eq!(lattice_index(&sat).unwrap(), BigInt::from(1));
        assert_eq!(sat.rows(), 2);
    }
}

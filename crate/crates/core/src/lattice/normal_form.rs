use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Smith normal form `left * A * right = diag(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Invariant factors, nonnegative, each dividing the next. Zeros trail.
    pub d: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }

    /// Product of the nonzero invariant factors.
    pub fn torsion_order(&self) -> BigInt {
        self.d.iter().filter(|x| !x.is_zero()).product()
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `U * A = H`. Pivots are positive, entries above a pivot lie in
/// `[0, pivot)`, zero rows sit at the bottom.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = a.rows();
    let cols = a.cols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            if h[(r, c)].is_zero() {
                h.swap_rows(r, i);
                u.swap_rows(r, i);
                continue;
            }
            let x = h[(r, c)].clone();
            let y = h[(i, c)].clone();
            let eg = x.extended_gcd(&y);
            let p = &x / &eg.gcd;
            let q = &y / &eg.gcd;
            let nq = -q;
            h.combine_rows(r, i, &eg.x, &eg.y, &nq, &p);
            u.combine_rows(r, i, &eg.x, &eg.y, &nq, &p);
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h[(r, c)].clone();
        for i in 0..r {
            let f = -h[(i, c)].div_floor(&pivot);
            h.add_row_multiple(i, r, &f);
            u.add_row_multiple(i, r, &f);
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form with the smallest-absolute-value pivot strategy.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let rows = a.rows();
    let cols = a.cols();
    let mut m = a.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let steps = rows.min(cols);

    for t in 0..steps {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&m, t) else {
                return finish(m, left, right);
            };
            m.swap_rows(t, pi);
            left.swap_rows(t, pi);
            m.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let pivot = m[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&m[(i, t)] / &pivot);
                m.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                clean &= m[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&m[(t, j)] / &pivot);
                m.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                clean &= m[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole trailing block
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !m[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    m.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if m[(t, t)].is_negative() {
            m.negate_row(t);
            left.negate_row(t);
        }
    }
    finish(m, left, right)
}

fn smallest_nonzero(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let v = m[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| v < *b) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn finish(m: IntMatrix, left: IntMatrix, right: IntMatrix) -> SnfResult {
    let d = (0..m.rows().min(m.cols())).map(|i| m[(i, i)].clone()).collect();
    SnfResult { d, left, right }
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
    fn hnf_identity() {
        let (h, u) = hnf(&IntMatrix::identity(2));
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_preserves_determinant_magnitude() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let (h, u) = hnf(&a);
        assert_eq!(&u * &a, h);
        assert!(u.is_unimodular());
        assert_eq!(h.det().unwrap(), BigInt::from(8));
        assert_eq!(h, m(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn hnf_of_swap_is_identity() {
        let a = m(&[&[0, 1], &[1, 0]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u, a);
    }

    #[test]
    fn hnf_rank_deficient_puts_zero_rows_last() {
        let a = m(&[&[2, 4, 6], &[1, 2, 3], &[0, 0, 0]]);
        let (h, u) = hnf(&a);
        assert_eq!(&u * &a, h);
        assert_eq!(h.row(0), ints(&[1, 2, 3]).as_slice());
        assert!(h.row(1).iter().all(Zero::is_zero));
        assert!(h.row(2).iter().all(Zero::is_zero));
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(&m(&[&[2, 0], &[0, 3]])).d, ints(&[1, 6]));
        assert_eq!(snf(&m(&[&[2, 4], &[6, 8]])).d, ints(&[2, 4]));
        assert_eq!(snf(&IntMatrix::identity(4)).d, ints(&[1, 1, 1, 1]));
    }

    #[test]
    fn snf_rectangular_and_zero() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let r = snf(&a);
        assert_eq!(r.d, ints(&[2, 6, 12]));
        assert_eq!(
            &(&r.left * &a) * &r.right,
            IntMatrix::diagonal(3, 3, &r.d)
        );
        let z = snf(&IntMatrix::zeros(2, 3));
        assert_eq!(z.d, ints(&[0, 0]));
        assert_eq!(z.rank(), 0);
    }
}

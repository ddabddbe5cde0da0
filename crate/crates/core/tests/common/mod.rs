//! Brute-force oracles shared by the integration tests. None of these go
//! through Hermite or Smith forms.
#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use toric_lengths::IntMatrix;

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant by permutation expansion.
pub fn leibniz(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0i128;
    permute(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let prod: i128 = (0..n).map(|i| m[i][p[i]]).product();
        total += if inversions % 2 == 0 { prod } else { -prod };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Index of the span of `k` independent vectors in its saturation: the gcd
/// of all maximal minors.
pub fn index_by_minors(rows: &[Vec<i128>]) -> i128 {
    let k = rows.len();
    let n = rows[0].len();
    subsets(n, k).into_iter().fold(0, |g, cols| {
        let sub: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        gcd(g, leibniz(&sub))
    })
}

/// Signed maximal minors of an `n x (n+1)` matrix: a kernel vector by
/// Cramer's rule, divided by its content and sign-normalised.
pub fn kernel_by_minors(cols: &[Vec<i128>]) -> Vec<i128> {
    let n = cols[0].len();
    let mut k: Vec<i128> = (0..=n)
        .map(|i| {
            let sub: Vec<Vec<i128>> = (0..n)
                .map(|r| {
                    (0..=n)
                        .filter(|&c| c != i)
                        .map(|c| cols[c][r])
                        .collect()
                })
                .collect();
            let d = leibniz(&sub);
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    let g = k.iter().fold(0, |g, &x| gcd(g, x));
    if g != 0 {
        k.iter_mut().for_each(|x| *x /= g);
    }
    if k.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        k.iter_mut().for_each(|x| *x = -*x);
    }
    k
}

/// `[Z^2 : span(rows)]` by counting the subgroup the rows generate in
/// `(Z/D)^2`, `D = |det|`.
pub fn coset_count_2d(a: [i128; 2], b: [i128; 2]) -> i128 {
    let d = (a[0] * b[1] - a[1] * b[0]).abs();
    assert!(d > 0);
    let norm = |v: [i128; 2]| [v[0].rem_euclid(d), v[1].rem_euclid(d)];
    let mut seen = HashSet::new();
    let mut stack = vec![[0, 0]];
    seen.insert([0, 0]);
    while let Some(v) = stack.pop() {
        for g in [a, b] {
            let w = norm([v[0] + g[0], v[1] + g[1]]);
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    d * d / seen.len() as i128
}

/// Subgroups of order `m` in `(Z/m)^n`, found by closing every `n`-tuple of
/// generators. These are exactly the overlattices of index `m`.
pub fn subgroup_count(n: usize, m: u64) -> usize {
    let m = m as i64;
    let elems: Vec<Vec<i64>> = (0..m.pow(n as u32))
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let r = x % m;
                    x /= m;
                    r
                })
                .collect()
        })
        .collect();
    let mut groups: HashSet<Vec<Vec<i64>>> = HashSet::new();
    let mut idx = vec![0usize; n];
    loop {
        let gens: Vec<&Vec<i64>> = idx.iter().map(|&i| &elems[i]).collect();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let zero = vec![0; n];
        seen.insert(zero.clone());
        let mut stack = vec![zero];
        while let Some(v) = stack.pop() {
            for g in &gens {
                let w: Vec<i64> = v.iter().zip(g.iter()).map(|(x, y)| (x + y) % m).collect();
                if seen.insert(w.clone()) {
                    stack.push(w);
                }
            }
        }
        if seen.len() as i64 == m {
            let mut s: Vec<Vec<i64>> = seen.into_iter().collect();
            s.sort();
            groups.insert(s);
        }
        let mut k = 0;
        loop {
            if k == n {
                return groups.len();
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Number of upper-triangular Hermite forms of determinant `m` in rank `n`.
pub fn hermite_form_count(n: usize, m: u64) -> u64 {
    fn rec(n: usize, col: usize, m: u64) -> u64 {
        if col == n {
            return u64::from(m == 1);
        }
        (1..=m)
            .filter(|d| m.is_multiple_of(*d))
            .map(|d| d.pow(col as u32) * rec(n, col + 1, m / d))
            .sum()
    }
    rec(n, 0, m)
}

pub fn to_i128(v: &[BigInt]) -> Vec<i128> {
    v.iter().map(|x| x.try_into().expect("small entries")).collect()
}

pub fn big(v: &[i128]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn matrix(rows: &[Vec<i128>]) -> IntMatrix {
    IntMatrix::from_rows(rows).unwrap()
}

/// Unimodular matrix from a seed sequence of elementary operations.
pub fn unimodular_from_ops(n: usize, ops: &[(usize, usize, i64, bool)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(a, b, f, swap) in ops {
        let (a, b) = (a % n, b % n);
        if swap {
            u.swap_rows(a, b);
        } else if a != b {
            u.add_row_multiple(a, b, &BigInt::from(f));
        } else {
            u.negate_row(a);
        }
    }
    u
}

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{content, hnf, IntMatrix, LatticeError};

/// A lattice `N` with `Z^n ⊆ N ⊂ Q^n`, stored as `(1/d) * rowspan(B)`.
///
/// The pair `(d, B)` is kept canonical: `B` is in Hermite form and
/// `gcd(d, entries of B) = 1`, so equal lattices have equal representations.
#[derive(Clone, Debug)]
pub struct Overlattice {
    denominator: BigInt,
    basis: IntMatrix,
    inverse: Vec<Vec<BigRational>>,
}

impl Overlattice {
    /// `Z^n` itself.
    pub fn standard(n: usize) -> Self {
        Self::new(BigInt::one(), IntMatrix::identity(n)).expect("Z^n is an overlattice of itself")
    }

    pub fn new(denominator: BigInt, basis: IntMatrix) -> Result<Self, LatticeError> {
        if !denominator.is_positive() {
            return Err(LatticeError::BadDenominator);
        }
        if !basis.is_square() {
            return Err(LatticeError::NotSquare {
                rows: basis.rows(),
                cols: basis.cols(),
            });
        }
        let n = basis.rows();
        let (h, _) = hnf(&basis);
        if h.row(n - 1).iter().all(Zero::is_zero) {
            return Err(LatticeError::SingularBasis);
        }
        let g = (0..n)
            .flat_map(|i| h.row(i).to_vec())
            .fold(denominator.clone(), |g, x| g.gcd(&x));
        let data = (0..n).flat_map(|i| h.row(i).iter().map(|x| x / &g).collect::<Vec<_>>());
        let basis = IntMatrix::new(n, n, data.collect())?;
        let denominator = denominator / &g;
        let inverse = basis.rational_inverse().ok_or(LatticeError::SingularBasis)?;
        let lat = Self {
            denominator,
            basis,
            inverse,
        };
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            if lat.coordinates_int(&e).is_none() {
                return Err(LatticeError::NotOverlattice);
            }
        }
        Ok(lat)
    }

    /// `Z^n + sum of Z*g` for the given rational vectors.
    pub fn from_generators(n: usize, gens: &[Vec<BigRational>]) -> Result<Self, LatticeError> {
        let mut d = BigInt::one();
        for g in gens {
            if g.len() != n {
                return Err(LatticeError::ShapeMismatch {
                    expected: n,
                    found: g.len(),
                });
            }
            for x in g {
                d = d.lcm(x.denom());
            }
        }
        let dr = BigRational::from_integer(d.clone());
        let mut rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { d.clone() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        rows.extend(
            gens.iter()
                .map(|g| g.iter().map(|x| (x * &dr).to_integer()).collect()),
        );
        let (h, _) = hnf(&IntMatrix::from_rows(&rows)?);
        let idx: Vec<usize> = (0..n).collect();
        Self::new(d, h.select_rows(&idx)?)
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// `[N : Z^n] = d^n / |det B|`.
    pub fn index(&self) -> BigInt {
        let det = self.basis.det().expect("basis is square").abs();
        num_traits::pow(self.denominator.clone(), self.rank()) / det
    }

    pub fn is_standard(&self) -> bool {
        self.index().is_one()
    }

    /// Coordinates of `v` in the basis `(1/d) B`, or `None` when `v ∉ N`.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.rank(), "vector dimension mismatch");
        let d = BigRational::from_integer(self.denominator.clone());
        let n = self.rank();
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = BigRational::zero();
            for (i, vi) in v.iter().enumerate() {
                if !vi.is_zero() {
                    acc += vi * &self.inverse[i][j];
                }
            }
            let c = acc * &d;
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(out)
    }

    pub fn coordinates_int(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let q: Vec<BigRational> = v.iter().cloned().map(BigRational::from_integer).collect();
        self.coordinates(&q)
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Ambient vector from coordinates in the lattice basis.
    pub fn to_ambient(&self, coords: &[BigInt]) -> Vec<BigRational> {
        let n = self.rank();
        (0..n)
            .map(|j| {
                let s: BigInt = coords
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * &self.basis[(i, j)])
                    .sum();
                BigRational::new(s, self.denominator.clone())
            })
            .collect()
    }
}

impl PartialEq for Overlattice {
    fn eq(&self, other: &Self) -> bool {
        self.denominator == other.denominator && self.basis == other.basis
    }
}

impl Eq for Overlattice {}

impl Hash for Overlattice {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.denominator.hash(state);
        self.basis.hash(state);
    }
}

impl PartialOrd for Overlattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Overlattice {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.denominator, &self.basis).cmp(&(&other.denominator, &other.basis))
    }
}

/// True iff `v` is not a proper multiple of another vector of `lattice`.
pub fn is_primitive(v: &[BigRational], lattice: &Overlattice) -> Result<bool, LatticeError> {
    if v.iter().all(Zero::is_zero) {
        return Err(LatticeError::ZeroVector);
    }
    let c = lattice.coordinates(v).ok_or(LatticeError::NotInLattice)?;
    Ok(content(&c).is_one())
}

/// All overlattices `N ⊇ Z^n` with `[N : Z^n] = m`, sorted canonically.
///
/// They are the duals of the index-`m` sublattices of `Z^n`, which are
/// enumerated through their Hermite forms.
pub fn enumerate_overlattices(n: usize, m: u64) -> Vec<Overlattice> {
    assert!(n >= 1 && m >= 1, "rank and index must be positive");
    let mut out = Vec::new();
    for diag in ordered_factorizations(m, n) {
        for_each_hermite_form(&diag, |b| {
            // dual of rowspan(B) is the row span of (B^-1)^T; scale by m
            let inv = b.rational_inverse().expect("Hermite form has positive diagonal");
            let mm = BigRational::from_integer(BigInt::from(m));
            let data: Vec<BigInt> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| (&inv[j][i] * &mm).to_integer())
                .collect();
            let basis = IntMatrix::new(n, n, data).expect("square");
            out.push(Overlattice::new(BigInt::from(m), basis).expect("dual contains Z^n"));
        });
    }
    out.sort();
    out.dedup();
    out
}

fn ordered_factorizations(m: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for d in (1..=m).filter(|d| m.is_multiple_of(*d)) {
        for mut rest in ordered_factorizations(m / d, parts - 1) {
            rest.insert(0, d);
            out.push(rest);
        }
    }
    out
}

/// Upper-triangular Hermite forms with the given diagonal: entry `(i, j)`
/// for `i < j` ranges over `[0, diag[j])`.
fn for_each_hermite_form(diag: &[u64], mut f: impl FnMut(&IntMatrix)) {
    let n = diag.len();
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let mut b = IntMatrix::diagonal(
        n,
        n,
        &diag.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>(),
    );
    let mut counters = vec![0u64; slots.len()];
    loop {
        for (&(i, j), &c) in slots.iter().zip(&counters) {
            b[(i, j)] = BigInt::from(c);
        }
        f(&b);
        // odometer step
        let mut k = 0;
        loop {
            if k == slots.len() {
                return;
            }
            counters[k] += 1;
            if counters[k] < diag[slots[k].1] {
                break;
            }
            counters[k] = 0;
            k += 1;
        }
    }
}

//! Complete simplicial fans with `n + 1` rays in `Z^n`, i.e. Q-factorial
//! toric Fano varieties with Picard number one.
//!
//! Coordinates always take `N = Z^n`: a fan over a finer lattice is rebuilt
//! in a basis of that lattice at construction time. Indices are 0-based.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    content, hnf, kernel_primitive, lattice_index, saturation, IntMatrix, LatticeError,
    Overlattice,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("need n + 1 = {expected} rays, found {found}")]
    WrongRayCount { expected: usize, found: usize },
    #[error("ray {index} has length {found}, expected {expected}")]
    RayDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("ray {index} is not primitive")]
    NonPrimitiveRay { index: usize },
    #[error("rays other than ray {omitted} are linearly dependent")]
    DependentRays { omitted: usize },
    #[error("rays do not positively span the space (relation {relation:?} has a non-positive entry)")]
    NotPositivelySpanning { relation: Vec<BigInt> },
    #[error("need at least two weights")]
    TooFewWeights,
    #[error("weight {index} is not positive")]
    NonPositiveWeight { index: usize },
    #[error("rays would be non-primitive: weights other than weight {omitted} are not coprime")]
    NotWellFormed { omitted: usize },
    #[error("overlattice absorbs a ray: ray {index} is not primitive in the overlattice")]
    RayAbsorbed { index: usize },
    #[error("overlattice has rank {found}, expected {expected}")]
    OverlatticeRank { expected: usize, found: usize },
    #[error("index {index} out of range for {len} rays")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("curve indices must differ (got {0} twice)")]
    RepeatedIndex(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The invariant curve `V(μ_{k,l})`, `μ_{k,l}` being the cone spanned by all
/// rays except `k` and `l`. Stored with `k < l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass {
    k: usize,
    l: usize,
}

impl CurveClass {
    pub fn new(a: usize, b: usize) -> Result<Self, FanError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Self { k: a, l: b }),
            std::cmp::Ordering::Greater => Ok(Self { k: b, l: a }),
            std::cmp::Ordering::Equal => Err(FanError::RepeatedIndex(a)),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn contains(&self, i: usize) -> bool {
        i == self.k || i == self.l
    }

    /// The other index of the pair; `i` must be one of the two.
    pub fn other(&self, i: usize) -> usize {
        debug_assert!(self.contains(i));
        if i == self.k {
            self.l
        } else {
            self.k
        }
    }

    /// All pairs for `count` rays, lexicographically.
    pub fn all(count: usize) -> impl Iterator<Item = CurveClass> {
        (0..count).flat_map(move |k| (k + 1..count).map(move |l| CurveClass { k, l }))
    }

    fn slot(&self, count: usize) -> usize {
        // position of (k, l) in the lexicographic enumeration
        self.k * count - self.k * (self.k + 1) / 2 + (self.l - self.k - 1)
    }
}

/// A validated fan with rays `v_0, ..., v_n` in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoFan {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    weights: Vec<BigInt>,
    mult_sigma: Vec<BigInt>,
    mult_mu: Vec<BigInt>,
}

impl FanoFan {
    /// Validates `n + 1` rays in `Z^n` and caches weights and multiplicities.
    pub fn new(rays: Vec<Vec<BigInt>>) -> Result<Self, FanError> {
        if rays.len() < 2 {
            return Err(FanError::WrongRayCount {
                expected: 2,
                found: rays.len(),
            });
        }
        let dim = rays.len() - 1;
        for (index, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(FanError::RayDimension {
                    index,
                    expected: dim,
                    found: r.len(),
                });
            }
        }
        for (index, r) in rays.iter().enumerate() {
            if !content(r).is_one() {
                return Err(FanError::NonPrimitiveRay { index });
            }
        }
        let count = dim + 1;
        let mut mult_sigma = Vec::with_capacity(count);
        for omitted in 0..count {
            let m = ray_matrix(&rays, &[omitted])?;
            let det = m.det()?.abs();
            if det.is_zero() {
                return Err(FanError::DependentRays { omitted });
            }
            mult_sigma.push(det);
        }
        let weights = kernel_primitive(&IntMatrix::from_cols(&rays)?)?;
        if weights.iter().any(|a| !a.is_positive()) {
            return Err(FanError::NotPositivelySpanning { relation: weights });
        }
        let mut mult_mu = Vec::with_capacity(count * dim / 2);
        for c in CurveClass::all(count) {
            mult_mu.push(if dim == 1 {
                // μ is the zero cone
                BigInt::one()
            } else {
                lattice_index(&ray_matrix(&rays, &[c.k, c.l])?)?
            });
        }
        Ok(Self {
            dim,
            rays,
            weights,
            mult_sigma,
            mult_mu,
        })
    }

    pub fn from_i64_rays(rays: &[Vec<i64>]) -> Result<Self, FanError> {
        Self::new(
            rays.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// The weighted projective space `P(a_0, ..., a_n)`.
    ///
    /// `a` is completed to a unimodular `U` with `U a = e_0`; rows `1..=n`
    /// of `U` then hold the rays as columns, and those generate `Z^n`. When
    /// `a_0 = 1` the completion is written down directly, otherwise it is
    /// the Hermite transform of the column `a`.
    pub fn from_weights(a: &[BigInt]) -> Result<Self, FanError> {
        if a.len() < 2 {
            return Err(FanError::TooFewWeights);
        }
        if let Some(index) = a.iter().position(|x| !x.is_positive()) {
            return Err(FanError::NonPositiveWeight { index });
        }
        for omitted in 0..a.len() {
            let g = a
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != omitted)
                .fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
            if !g.is_one() {
                return Err(FanError::NotWellFormed { omitted });
            }
        }
        let n = a.len() - 1;
        let rays = if a[0].is_one() {
            // U = [e_0; a_i e_0 - e_i]: v_0 = (a_1, ..., a_n), v_i = -e_i
            let mut rays = vec![a[1..].to_vec()];
            rays.extend((0..n).map(|i| {
                let mut v = vec![BigInt::zero(); n];
                v[i] = -BigInt::one();
                v
            }));
            rays
        } else {
            let column = IntMatrix::from_cols(&[a.to_vec()])?;
            let (h, u) = hnf(&column);
            debug_assert!(h[(0, 0)].is_one());
            (0..=n)
                .map(|i| (1..=n).map(|r| u[(r, i)].clone()).collect())
                .collect()
        };
        let fan = Self::new(rays)?;
        debug_assert_eq!(fan.weights, a);
        Ok(fan)
    }

    pub fn from_weights_u64(a: &[u64]) -> Result<Self, FanError> {
        Self::from_weights(&a.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    /// The quotient of `P(a)` by `N / Z^n`: the rays of
    /// [`from_weights`](Self::from_weights) rewritten in a basis of `lattice`.
    pub fn from_weights_with_overlattice(
        a: &[BigInt],
        lattice: &Overlattice,
    ) -> Result<Self, FanError> {
        let wps = Self::from_weights(a)?;
        if lattice.rank() != wps.dim {
            return Err(FanError::OverlatticeRank {
                expected: wps.dim,
                found: lattice.rank(),
            });
        }
        let mut rays = Vec::with_capacity(wps.rays.len());
        for (index, r) in wps.rays.iter().enumerate() {
            let c = lattice
                .coordinates_int(r)
                .expect("Z^n is contained in every overlattice");
            if !content(&c).is_one() {
                return Err(FanError::RayAbsorbed { index });
            }
            rays.push(c);
        }
        Self::new(rays)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rays(&self) -> usize {
        self.dim + 1
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    /// The relation `Σ a_i v_i = 0`, positive and primitive.
    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &BigInt {
        &self.weights[i]
    }

    pub fn weight_sum(&self) -> BigInt {
        self.weights.iter().sum()
    }

    /// `mult(σ_i)`, `σ_i` spanned by all rays except `i`.
    pub fn mult_sigma(&self, i: usize) -> &BigInt {
        &self.mult_sigma[i]
    }

    pub fn mult_sigmas(&self) -> &[BigInt] {
        &self.mult_sigma
    }

    /// `mult(μ_{k,l})`.
    pub fn mult_mu(&self, c: CurveClass) -> &BigInt {
        &self.mult_mu[c.slot(self.num_rays())]
    }

    pub fn curves(&self) -> impl Iterator<Item = CurveClass> {
        CurveClass::all(self.num_rays())
    }

    pub fn check_index(&self, i: usize) -> Result<(), FanError> {
        if i < self.num_rays() {
            Ok(())
        } else {
            Err(FanError::IndexOutOfRange {
                index: i,
                len: self.num_rays(),
            })
        }
    }

    pub fn check_curve(&self, c: CurveClass) -> Result<(), FanError> {
        self.check_index(c.l)
    }

    /// Rays reordered so that new ray `j` is old ray `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let count = self.num_rays();
        assert_eq!(perm.len(), count, "permutation length");
        let mut seen = vec![false; count];
        for &p in perm {
            assert!(p < count && !seen[p], "not a permutation: {perm:?}");
            seen[p] = true;
        }
        let pick = |v: &[BigInt]| perm.iter().map(|&p| v[p].clone()).collect::<Vec<_>>();
        let mult_mu = CurveClass::all(count)
            .map(|c| {
                let old = CurveClass::new(perm[c.k], perm[c.l]).expect("distinct");
                self.mult_mu(old).clone()
            })
            .collect();
        Self {
            dim: self.dim,
            rays: perm.iter().map(|&p| self.rays[p].clone()).collect(),
            weights: pick(&self.weights),
            mult_sigma: pick(&self.mult_sigma),
            mult_mu,
        }
    }

    /// Rows are the rays.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.rays).expect("rays are nonempty and equal length")
    }

    /// True iff the rays generate `Z^n`.
    pub fn is_wps(&self) -> bool {
        self.cover_index().is_one()
    }

    /// `[N : N']`, `N'` the sublattice generated by the rays.
    pub fn cover_index(&self) -> BigInt {
        lattice_index(&self.ray_matrix()).expect("rays span Q^n")
    }

    /// The covering weighted projective space and the degrees of the
    /// invariant curves under the cover.
    pub fn covering(&self) -> CoveringData {
        let rays = self.ray_matrix();
        let cover_index = lattice_index(&rays).expect("rays span Q^n");
        let degrees = self
            .curves()
            .map(|c| {
                if self.dim == 1 {
                    return cover_index.clone();
                }
                // [N : N' + N_μ]
                let cone = ray_matrix(&self.rays, &[c.k, c.l]).expect("dim >= 2");
                let sat = saturation(&cone).expect("rays are nonzero");
                lattice_index(&rays.stack(&sat).expect("same width")).expect("full rank")
            })
            .collect();
        CoveringData {
            cover_index,
            cover_weights: self.weights.clone(),
            degrees,
            count: self.num_rays(),
        }
    }

    /// The weighted projective space `X'` covering this fan: the same rays
    /// written in a basis of the sublattice they generate. Ray order is
    /// preserved, so curve classes correspond one-to-one.
    pub fn cover_fan(&self) -> FanoFan {
        let v = self.ray_matrix();
        let (h, u) = hnf(&v);
        let uinv = u.unimodular_inverse().expect("hnf transform is unimodular");
        let n = self.dim;
        // v = u^-1 h and rows n.. of h vanish
        debug_assert!(h.row(n).iter().all(Zero::is_zero));
        let rays = (0..self.num_rays())
            .map(|i| (0..n).map(|j| uinv[(i, j)].clone()).collect())
            .collect();
        FanoFan::new(rays).expect("a fan over the ray lattice stays valid")
    }

    pub fn to_json(&self) -> Result<String, FanJsonError> {
        let to_i64 = |x: &BigInt| x.to_i64().ok_or_else(|| FanJsonError::Overflow(x.to_string()));
        let rays = self
            .rays
            .iter()
            .map(|r| r.iter().map(to_i64).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let weights = self.weights.iter().map(to_i64).collect::<Result<Vec<_>, _>>()?;
        let doc = FanJson {
            dim: self.dim,
            rays,
            weights: Some(weights),
        };
        Ok(serde_json::to_string(&doc).expect("plain integers serialize"))
    }

    /// Parses the fan JSON document; any `weights` field is ignored.
    pub fn from_json(s: &str) -> Result<Self, FanJsonError> {
        let doc: FanJson = serde_json::from_str(s).map_err(|e| FanJsonError::Parse(e.to_string()))?;
        if doc.rays.len() != doc.dim + 1 {
            return Err(FanError::WrongRayCount {
                expected: doc.dim + 1,
                found: doc.rays.len(),
            }
            .into());
        }
        Ok(Self::from_i64_rays(&doc.rays)?)
    }
}

fn ray_matrix(rays: &[Vec<BigInt>], omit: &[usize]) -> Result<IntMatrix, LatticeError> {
    let kept: Vec<&Vec<BigInt>> = rays
        .iter()
        .enumerate()
        .filter(|(i, _)| !omit.contains(i))
        .map(|(_, r)| r)
        .collect();
    IntMatrix::from_rows(&kept.iter().map(|r| r.as_slice()).collect::<Vec<_>>())
}

/// Wire form of a fan: `{"dim": n, "rays": [[...], ...]}` with an optional
/// informational `weights` field.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FanJson {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanJsonError {
    #[error("malformed fan JSON: {0}")]
    Parse(String),
    #[error("integer {0} does not fit the JSON integer range")]
    Overflow(String),
    #[error("invalid fan: {0}")]
    Invalid(#[from] FanError),
}

/// Data of the finite cover `X' -> X` by a weighted projective space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringData {
    /// `[N : N']`
    pub cover_index: BigInt,
    /// Weights of `X'`; the same relation as the fan itself.
    pub cover_weights: Vec<BigInt>,
    degrees: Vec<BigInt>,
    count: usize,
}

impl CoveringData {
    /// `m_{k,l}`, the degree of the cover restricted to the curve.
    pub fn degree(&self, c: CurveClass) -> &BigInt {
        &self.degrees[c.slot(self.count)]
    }

    pub fn degrees(&self) -> impl Iterator<Item = (CurveClass, &BigInt)> {
        CurveClass::all(self.count).zip(&self.degrees)
    }
}

//! Intersection numbers of invariant divisors and curves, the length
//! `l(X)`, and the local numbers of a weighted blow-up of a toric surface
//! singularity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::fan::{CoveringData, CurveClass, FanError, FanoFan};
use crate::lattice::{content, hnf, IntMatrix, Overlattice};
use crate::rational::{serialize_ratio, serialize_ratio_vec};

fn q(n: &BigInt, d: &BigInt) -> BigRational {
    BigRational::new(n.clone(), d.clone())
}

/// `V(v_i) · V(μ_{k,l}) = (a_i / a_l) · mult(μ_{k,l}) / mult(σ_k)`.
///
/// The value is symmetric in `k, l` because `a_k mult(σ_l) = a_l mult(σ_k)`.
pub fn divisor_curve(f: &FanoFan, i: usize, c: CurveClass) -> Result<BigRational, FanError> {
    f.check_index(i)?;
    f.check_curve(c)?;
    let (k, l) = (c.k(), c.l());
    Ok(q(f.weight(i), f.weight(l)) * q(f.mult_mu(c), f.mult_sigma(k)))
}

/// `-K_X · V(μ_{k,l}) = (Σ a_i) mult(μ_{k,l}) / (a_l mult(σ_k))`.
pub fn anticanonical_degree(f: &FanoFan, c: CurveClass) -> Result<BigRational, FanError> {
    f.check_curve(c)?;
    let (k, l) = (c.k(), c.l());
    Ok(q(
        &(f.weight_sum() * f.mult_mu(c)),
        &(f.weight(l) * f.mult_sigma(k)),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthReport {
    pub value: BigRational,
    pub argmin: CurveClass,
    pub per_curve: Vec<(CurveClass, BigRational)>,
}

/// `l(X)`: the minimum of `-K_X · C` over the invariant curves. Ties go to
/// the lexicographically smallest pair.
pub fn length(f: &FanoFan) -> LengthReport {
    let per_curve: Vec<(CurveClass, BigRational)> = f
        .curves()
        .map(|c| (c, anticanonical_degree(f, c).expect("curve from the fan")))
        .collect();
    let (argmin, value) = per_curve
        .iter()
        .fold(None::<&(CurveClass, BigRational)>, |best, cur| match best {
            Some(b) if b.1 <= cur.1 => Some(b),
            _ => Some(cur),
        })
        .cloned()
        .expect("a fan has at least one curve");
    LengthReport {
        value,
        argmin,
        per_curve,
    }
}

/// `V(v_i) · C` for `i ∈ {k, l}`, computed upstairs on the covering weighted
/// projective space: `gcd(a_i, a_j) / (m_{k,l} a_j)` with `j` the other index.
pub fn divisor_curve_via_cover(
    f: &FanoFan,
    cover: &CoveringData,
    i: usize,
    c: CurveClass,
) -> Result<BigRational, FanError> {
    f.check_curve(c)?;
    if !c.contains(i) {
        return Err(FanError::IndexOutOfRange {
            index: i,
            len: f.num_rays(),
        });
    }
    let j = c.other(i);
    let a = &cover.cover_weights;
    Ok(q(&a[i].gcd(&a[j]), &(cover.degree(c) * &a[j])))
}

/// `V(v_k) · V(μ_{k,l})` through the cover and the projection formula.
pub fn curve_divisor_via_cover(f: &FanoFan, c: CurveClass) -> Result<BigRational, FanError> {
    divisor_curve_via_cover(f, &f.covering(), c.k(), c)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlowupError {
    #[error("vector {0} does not lie in the lattice")]
    NotInLattice(&'static str),
    #[error("vector {0} is not primitive in the lattice")]
    NotPrimitive(&'static str),
    #[error("the cone generators are linearly dependent")]
    DegenerateCone,
    #[error("w is not in the interior of the cone")]
    NotInterior,
    #[error("covector does not evaluate to 1 on w")]
    BadCovector,
    #[error("need gcd(a, b) = 1 and a, b >= 1")]
    BadParameters,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalBlowupReport {
    /// Coefficient of `E` in `K_X - f^* K_Y`.
    #[serde(serialize_with = "serialize_ratio")]
    pub discrepancy: BigRational,
    /// `-K_X · E`.
    #[serde(rename = "deg", serialize_with = "serialize_ratio")]
    pub anticanonical_degree: BigRational,
    /// `D_{u1} · E`, `D_{u2} · E`, `D_w · E`.
    #[serde(serialize_with = "serialize_ratio_vec")]
    pub per_divisor: Vec<BigRational>,
}

struct LocalCone {
    u1: Vec<BigInt>,
    u2: Vec<BigInt>,
    w: Vec<BigInt>,
    alpha: BigRational,
    beta: BigRational,
}

fn det2(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn local_cone(
    u1: &[BigRational],
    u2: &[BigRational],
    w: &[BigRational],
    lattice: &Overlattice,
) -> Result<LocalCone, BlowupError> {
    assert_eq!(lattice.rank(), 2, "local blow-up lives in rank 2");
    let coords = |v: &[BigRational], name| {
        let c = lattice.coordinates(v).ok_or(BlowupError::NotInLattice(name))?;
        if content(&c).is_one() {
            Ok(c)
        } else {
            Err(BlowupError::NotPrimitive(name))
        }
    };
    let (u1, u2, w) = (coords(u1, "u1")?, coords(u2, "u2")?, coords(w, "w")?);
    let d = det2(&u1, &u2);
    if d.is_zero() {
        return Err(BlowupError::DegenerateCone);
    }
    // w = alpha u1 + beta u2 by Cramer's rule
    let alpha = q(&det2(&w, &u2), &d);
    let beta = q(&det2(&u1, &w), &d);
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(BlowupError::NotInterior);
    }
    Ok(LocalCone {
        u1,
        u2,
        w,
        alpha,
        beta,
    })
}

/// Numbers of the weighted blow-up subdividing `⟨u1, u2⟩` by `w`, where all
/// vectors are given in ambient coordinates of `lattice`. The covector
/// `m` with `⟨m, w⟩ = 1` is taken from the Hermite transform of `w`.
pub fn local_blowup_numbers(
    u1: &[BigRational],
    u2: &[BigRational],
    w: &[BigRational],
    lattice: &Overlattice,
) -> Result<LocalBlowupReport, BlowupError> {
    let cone = local_cone(u1, u2, w, lattice)?;
    let col = IntMatrix::from_cols(std::slice::from_ref(&cone.w)).expect("nonempty");
    let (_, u) = hnf(&col);
    let m = u.row(0).to_vec();
    blowup_report(&cone, &m)
}

/// As [`local_blowup_numbers`] with an explicit covector, in the dual basis
/// of `lattice`.
pub fn local_blowup_numbers_with_covector(
    u1: &[BigRational],
    u2: &[BigRational],
    w: &[BigRational],
    lattice: &Overlattice,
    m: &[BigInt],
) -> Result<LocalBlowupReport, BlowupError> {
    let cone = local_cone(u1, u2, w, lattice)?;
    blowup_report(&cone, m)
}

fn blowup_report(cone: &LocalCone, m: &[BigInt]) -> Result<LocalBlowupReport, BlowupError> {
    let pair = |a: &[BigInt], b: &[BigInt]| -> BigInt { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    if !pair(m, &cone.w).is_one() {
        return Err(BlowupError::BadCovector);
    }
    let mult1 = det2(&cone.u1, &cone.w).abs();
    let mult2 = det2(&cone.u2, &cone.w).abs();
    let d1 = q(&BigInt::one(), &mult1);
    let d2 = q(&BigInt::one(), &mult2);
    let dw = -(q(&pair(m, &cone.u1), &mult1) + q(&pair(m, &cone.u2), &mult2));
    let anticanonical_degree = &d1 + &d2 + &dw;
    Ok(LocalBlowupReport {
        discrepancy: &cone.alpha + &cone.beta - BigRational::one(),
        anticanonical_degree,
        per_divisor: vec![d1, d2, dw],
    })
}

/// The blow-up of `⟨e1, e2⟩ ⊂ Z^2 + Z (1/b)(1, a)` with weight `(1/b)(1, a)`.
pub fn weighted_blowup(a: u64, b: u64) -> Result<LocalBlowupReport, BlowupError> {
    if a == 0 || b == 0 || a.gcd(&b) != 1 {
        return Err(BlowupError::BadParameters);
    }
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let w = vec![q(&BigInt::one(), &b), q(&a, &b)];
    let lattice = Overlattice::from_generators(2, std::slice::from_ref(&w)).expect("rank 2 generator");
    let e1 = vec![BigRational::one(), BigRational::zero()];
    let e2 = vec![BigRational::zero(), BigRational::one()];
    local_blowup_numbers(&e1, &e2, &w, &lattice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn cc(k: usize, l: usize) -> CurveClass {
        CurveClass::new(k, l).unwrap()
    }

    fn fake_p2() -> FanoFan {
        let n = Overlattice::from_generators(2, &[vec![ratio(1, 3), ratio(2, 3)]]).unwrap();
        let a: Vec<BigInt> = vec![1.into(), 1.into(), 1.into()];
        FanoFan::from_weights_with_overlattice(&a, &n).unwrap()
    }

    #[test]
    fn divisor_curve_examples() {
        let p2 = FanoFan::from_weights_u64(&[1, 1, 1]).unwrap();
        assert_eq!(divisor_curve(&p2, 0, cc(1, 2)).unwrap(), int(1));
        let p123 = FanoFan::from_weights_u64(&[1, 2, 3]).unwrap();
        assert_eq!(divisor_curve(&p123, 2, cc(0, 1)).unwrap(), ratio(3, 2));
        assert_eq!(divisor_curve(&fake_p2(), 0, cc(0, 1)).unwrap(), ratio(1, 3));
        assert!(divisor_curve(&p2, 3, cc(0, 1)).is_err());
        assert!(divisor_curve(&p2, 0, cc(0, 3)).is_err());
    }

    #[test]
    fn anticanonical_examples() {
        let p2 = FanoFan::from_weights_u64(&[1, 1, 1]).unwrap();
        for c in p2.curves() {
            assert_eq!(anticanonical_degree(&p2, c).unwrap(), int(3));
        }
        let p123 = FanoFan::from_weights_u64(&[1, 2, 3]).unwrap();
        let got: Vec<_> = p123
            .curves()
            .map(|c| anticanonical_degree(&p123, c).unwrap())
            .collect();
        assert_eq!(got, vec![int(3), int(2), int(1)]);
        let p112 = FanoFan::from_weights_u64(&[1, 1, 2]).unwrap();
        let got: Vec<_> = p112
            .curves()
            .map(|c| anticanonical_degree(&p112, c).unwrap())
            .collect();
        assert_eq!(got, vec![int(4), int(2), int(2)]);
    }

    #[test]
    fn length_examples() {
        for n in 2..=3 {
            let pn = FanoFan::from_weights_u64(&vec![1; n + 1]).unwrap();
            let r = length(&pn);
            assert_eq!(r.value, int(n as i64 + 1));
            assert_eq!(r.argmin, cc(0, 1));
        }
        let r = length(&FanoFan::from_weights_u64(&[1, 1, 2]).unwrap());
        assert_eq!(r.value, int(2));
        assert_eq!(r.argmin, cc(0, 2));
        assert_eq!(length(&fake_p2()).value, int(1));
    }

    #[test]
    fn via_cover_examples() {
        let p2 = FanoFan::from_weights_u64(&[1, 1, 1]).unwrap();
        assert_eq!(curve_divisor_via_cover(&p2, cc(0, 1)).unwrap(), int(1));
        assert_eq!(curve_divisor_via_cover(&fake_p2(), cc(0, 1)).unwrap(), ratio(1, 3));
        let p123 = FanoFan::from_weights_u64(&[1, 2, 3]).unwrap();
        assert_eq!(curve_divisor_via_cover(&p123, cc(1, 2)).unwrap(), ratio(1, 3));
        assert_eq!(
            divisor_curve(&p123, 1, cc(1, 2)).unwrap(),
            curve_divisor_via_cover(&p123, cc(1, 2)).unwrap()
        );
        let cover = p123.covering();
        assert!(divisor_curve_via_cover(&p123, &cover, 0, cc(1, 2)).is_err());
    }

    #[test]
    fn blowup_examples() {
        let r = weighted_blowup(9, 4).unwrap();
        assert_eq!(r.discrepancy, ratio(3, 2));
        assert_eq!(r.anticanonical_degree, ratio(2, 3));
        let smooth = weighted_blowup(1, 1).unwrap();
        assert_eq!(smooth.discrepancy, int(1));
        assert_eq!(smooth.anticanonical_degree, int(1));
        assert_eq!(smooth.per_divisor, vec![int(1), int(1), int(-1)]);
        assert_eq!(weighted_blowup(4, 2), Err(BlowupError::BadParameters));
    }

    #[test]
    fn blowup_covector_independence() {
        let (a, b) = (7i64, 3i64);
        let w = vec![ratio(1, b), ratio(a, b)];
        let n = Overlattice::from_generators(2, std::slice::from_ref(&w)).unwrap();
        let e1 = vec![int(1), int(0)];
        let e2 = vec![int(0), int(1)];
        let base = local_blowup_numbers(&e1, &e2, &w, &n).unwrap();
        let cw = n.coordinates(&w).unwrap();
        // every covector with <m, w> = 1 is m0 + t * (w2, -w1) for integer t
        let col = IntMatrix::from_cols(std::slice::from_ref(&cw)).unwrap();
        let (_, u) = hnf(&col);
        let m0 = u.row(0).to_vec();
        for t in [-3i64, -1, 2, 5] {
            let t = BigInt::from(t);
            let m = vec![&m0[0] + &t * &cw[1], &m0[1] - &t * &cw[0]];
            let r = local_blowup_numbers_with_covector(&e1, &e2, &w, &n, &m).unwrap();
            assert_eq!(r, base);
        }
        let bad = vec![BigInt::zero(), BigInt::zero()];
        assert_eq!(
            local_blowup_numbers_with_covector(&e1, &e2, &w, &n, &bad),
            Err(BlowupError::BadCovector)
        );
    }

    #[test]
    fn blowup_rejects_bad_input() {
        let z2 = Overlattice::standard(2);
        let e1 = vec![int(1), int(0)];
        let e2 = vec![int(0), int(1)];
        assert_eq!(
            local_blowup_numbers(&e1, &e2, &[int(1), int(-1)], &z2),
            Err(BlowupError::NotInterior)
        );
        assert_eq!(
            local_blowup_numbers(&e1, &e2, &[int(2), int(2)], &z2),
            Err(BlowupError::NotPrimitive("w"))
        );
        assert_eq!(
            local_blowup_numbers(&e1, &e2, &[ratio(1, 2), int(1)], &z2),
            Err(BlowupError::NotInLattice("w"))
        );
        assert_eq!(
            local_blowup_numbers(&e1, &e1, &[int(1), int(0)], &z2),
            Err(BlowupError::DegenerateCone)
        );
    }
}

//! The bound chain behind the ascending chain condition for lengths, checked
//! instance by instance.
//!
//! A fan is *normalized* when the pair `(0, 1)` minimises
//! `r_{k,l} = mult(μ_{k,l}) / (a_k mult(σ_l))`. Then
//! `l(X) = r_{0,1} Σ a_i`, which splits as
//! `mult(μ_{0,1})/mult(σ_1) + mult(μ_{0,1})/mult(σ_0) + Σ_{i≥2} r_{0,1} a_i`.
//! Each tail term `r_{0,1} a_i` is bounded below by a threshold `ε` only for
//! finitely many numerical types; [`certify`] evaluates every inequality of
//! that argument exactly.

mod scan;

pub use scan::{
    enumerate_fake, enumerate_wps, scan_lengths, series_abab, sumset, FakeEnumeration,
    Fingerprint, ScanParams, ScanReport, ScanRow,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::fan::{CurveClass, FanError, FanoFan};
use crate::intersection::length;
use crate::lattice::snf;
use crate::rational::{floor_reciprocal, serialize_bigint_str, serialize_ratio};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AccError {
    #[error("fan is not normalized: pair (1, 2) does not minimise mult(mu)/(a mult(sigma))")]
    NotNormalized,
    #[error("index {0} is below the tail range (tail indices start at 3)")]
    HeadIndex(usize),
    #[error("threshold must be positive")]
    NonPositiveThreshold,
    #[error("threshold above the M_i element ({epsilon} >= {value})")]
    ThresholdTooLarge { epsilon: String, value: String },
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// `mult(μ_{k,l}) / (a_k mult(σ_l))`, symmetric in `k, l`.
pub fn pair_ratio(f: &FanoFan, c: CurveClass) -> BigRational {
    let (k, l) = (c.k(), c.l());
    BigRational::new(f.mult_mu(c).clone(), f.weight(k) * f.mult_sigma(l))
}

/// Reorders the rays so the minimising pair sits at positions `(0, 1)`,
/// keeping the remaining rays in their original order. Returns the new fan
/// and the permutation (`new[j] = old[perm[j]]`).
pub fn normalize_ordering(f: &FanoFan) -> (FanoFan, Vec<usize>) {
    let mut best: Option<(CurveClass, BigRational)> = None;
    for c in f.curves() {
        let r = pair_ratio(f, c);
        if best.as_ref().is_none_or(|(_, b)| r < *b) {
            best = Some((c, r));
        }
    }
    let (c, _) = best.expect("a fan has at least one pair");
    let mut perm = vec![c.k(), c.l()];
    perm.extend((0..f.num_rays()).filter(|&i| !c.contains(i)));
    (f.permuted(&perm), perm)
}

fn head_pair() -> CurveClass {
    CurveClass::new(0, 1).expect("distinct")
}

pub fn is_normalized(f: &FanoFan) -> bool {
    let r = pair_ratio(f, head_pair());
    f.curves().all(|c| r <= pair_ratio(f, c))
}

fn require_normalized(f: &FanoFan) -> Result<(), AccError> {
    if is_normalized(f) {
        Ok(())
    } else {
        Err(AccError::NotNormalized)
    }
}

/// The tail element `r_{0,1} a_i` for `i >= 2` (0-based) on a normalized fan.
pub fn m_i_value(f: &FanoFan, i: usize) -> Result<BigRational, AccError> {
    if i < 2 {
        return Err(AccError::HeadIndex(i + 1));
    }
    f.check_index(i)?;
    require_normalized(f)?;
    Ok(pair_ratio(f, head_pair()) * BigRational::from_integer(f.weight(i).clone()))
}

/// The two head terms of the decomposition of `l(X)`.
pub fn head_terms(f: &FanoFan) -> (BigRational, BigRational) {
    let c = head_pair();
    let mu = f.mult_mu(c);
    (
        BigRational::new(mu.clone(), f.mult_sigma(1).clone()),
        BigRational::new(mu.clone(), f.mult_sigma(0).clone()),
    )
}

/// `l(X)` equals the two head terms plus all tail elements, and both head
/// terms are unit fractions.
pub fn length_decomposition_check(f: &FanoFan) -> Result<bool, AccError> {
    require_normalized(f)?;
    let (h1, h2) = head_terms(f);
    let mut total = &h1 + &h2;
    for i in 2..f.num_rays() {
        total += m_i_value(f, i)?;
    }
    let unit = |q: &BigRational| q.numer().is_one();
    Ok(total == length(f).value && unit(&h1) && unit(&h2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    #[serde(serialize_with = "serialize_ratio")]
    pub value: BigRational,
}

impl Witness {
    fn new(label: impl Into<String>, value: BigRational) -> Self {
        Self {
            label: label.into(),
            value,
        }
    }

    fn int(label: impl Into<String>, value: &BigInt) -> Self {
        Self::new(label, BigRational::from_integer(value.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

/// The evaluated bound chain for one fan, one tail index and one threshold.
/// Indices in the serialized form are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccCertificate {
    #[serde(serialize_with = "serialize_ratio")]
    pub epsilon: BigRational,
    /// 1-based tail index, `3 <= i <= n + 1`.
    pub i: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub m_value: BigRational,
    #[serde(serialize_with = "serialize_bigint_str")]
    pub floor_inv_epsilon: BigInt,
    #[serde(serialize_with = "serialize_bigint_str")]
    pub bound_factorial: BigInt,
    /// Checks A through E.
    pub checks: Vec<CertificateCheck>,
    /// Intermediate facts of the argument: the factorial kills `N/N'`, and
    /// the tail element equals `a_i / (m_{1,2} lcm(a_1, a_2))`.
    pub supplementary: Vec<CertificateCheck>,
}

impl AccCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn supplementary_passed(&self) -> bool {
        self.supplementary.iter().all(|c| c.passed)
    }
}

/// `n!` by binary splitting.
pub fn factorial(n: &BigInt) -> BigInt {
    fn product(lo: u64, hi: u64) -> BigInt {
        // product of lo..=hi
        if lo > hi {
            return BigInt::one();
        }
        if hi - lo < 16 {
            return (lo..=hi).map(BigInt::from).product();
        }
        let mid = lo + (hi - lo) / 2;
        product(lo, mid) * product(mid + 1, hi)
    }
    let n: u64 = n.try_into().expect("factorial argument fits in u64");
    product(1, n)
}

/// Evaluates checks A–E for the tail index `i` (0-based, `i >= 2`) of a
/// normalized fan, with `0 < ε < m_i_value(f, i)`.
pub fn certify(f: &FanoFan, i: usize, epsilon: &BigRational) -> Result<AccCertificate, AccError> {
    if !epsilon.is_positive() {
        return Err(AccError::NonPositiveThreshold);
    }
    let m_value = m_i_value(f, i)?;
    if *epsilon >= m_value {
        return Err(AccError::ThresholdTooLarge {
            epsilon: crate::rational::format_ratio(epsilon),
            value: crate::rational::format_ratio(&m_value),
        });
    }
    let floor = floor_reciprocal(epsilon);
    let fact = factorial(&floor);
    let floor_q = BigRational::from_integer(floor.clone());
    let fact_q = BigRational::from_integer(fact.clone());
    let inv_eps_sq = {
        let inv = BigRational::one() / epsilon;
        &inv * &inv
    };
    let cover = f.covering();
    let a = f.weights();
    let (a1, a2, ai) = (&a[0], &a[1], &a[i]);

    // A: |A^j_(i,j)| = mult(σ_j)/mult(μ_{i,j}) <= floor(1/ε)
    let mut a_ok = true;
    let mut a_w = Vec::new();
    for j in (0..f.num_rays()).filter(|&j| j != i) {
        let c = CurveClass::new(i, j).expect("distinct");
        let order = BigRational::new(f.mult_sigma(j).clone(), f.mult_mu(c).clone());
        a_ok &= order.is_integer() && order <= floor_q;
        a_w.push(Witness::new(format!("|A^{j}_({i},{j})|", i = i + 1, j = j + 1), order));
    }
    a_w.push(Witness::int("floor(1/eps)", &floor));
    let check_a = CertificateCheck {
        name: "A",
        statement: "mult(sigma_j)/mult(mu_{i,j}) <= floor(1/eps) for all j != i",
        passed: a_ok,
        witnesses: a_w,
    };

    // B: 1 <= m_{1,2} <= floor(1/ε)!
    let m12 = cover.degree(head_pair()).clone();
    let check_b = CertificateCheck {
        name: "B",
        statement: "1 <= m_{1,2} <= floor(1/eps)!",
        passed: m12 >= BigInt::one() && m12 <= fact,
        witnesses: vec![
            Witness::int("m_{1,2}", &m12),
            Witness::int("floor(1/eps)!", &fact),
        ],
    };

    // C: ε < gcd(a_1, a_i)/a_1 and ε < gcd(a_2, a_i)/a_2
    let g1 = BigRational::new(a1.gcd(ai), a1.clone());
    let g2 = BigRational::new(a2.gcd(ai), a2.clone());
    let check_c = CertificateCheck {
        name: "C",
        statement: "eps < gcd(a_1, a_i)/a_1 and eps < gcd(a_2, a_i)/a_2",
        passed: *epsilon < g1 && *epsilon < g2,
        witnesses: vec![
            Witness::new("eps", epsilon.clone()),
            Witness::new("gcd(a_1, a_i)/a_1", g1),
            Witness::new("gcd(a_2, a_i)/a_2", g2),
        ],
    };

    // D: l/gcd(l, a_i) <= ε^-2 with l = lcm(a_1, a_2)
    let l = a1.lcm(a2);
    let gl = l.gcd(ai);
    let l_red = BigRational::new(l.clone(), gl.clone());
    let check_d = CertificateCheck {
        name: "D",
        statement: "lcm(a_1, a_2)/gcd(lcm(a_1, a_2), a_i) <= eps^-2",
        passed: l_red <= inv_eps_sq,
        witnesses: vec![
            Witness::new("l/gcd(l, a_i)", l_red),
            Witness::new("eps^-2", inv_eps_sq.clone()),
        ],
    };

    // E: a_i/gcd(l, a_i) <= ε^-2 floor(1/ε)!
    let ai_red = BigRational::new(ai.clone(), gl.clone());
    let e_bound = &inv_eps_sq * &fact_q;
    let check_e = CertificateCheck {
        name: "E",
        statement: "a_i/gcd(lcm(a_1, a_2), a_i) <= eps^-2 * floor(1/eps)!",
        passed: ai_red <= e_bound,
        witnesses: vec![
            Witness::new("a_i/gcd(l, a_i)", ai_red),
            Witness::new("eps^-2 * floor(1/eps)!", e_bound),
        ],
    };

    // the exponent of N/N' is its largest invariant factor
    let exponent = snf(&f.ray_matrix())
        .d
        .iter()
        .filter(|d| !d.is_zero())
        .max()
        .cloned()
        .unwrap_or_else(BigInt::one);
    let claim = CertificateCheck {
        name: "claim",
        statement: "floor(1/eps)! * N is contained in N'",
        passed: fact.is_multiple_of(&exponent),
        witnesses: vec![Witness::int("exponent of N/N'", &exponent)],
    };
    let direct = BigRational::new(ai.clone(), &m12 * &l);
    let identity = CertificateCheck {
        name: "tail-identity",
        statement: "mult(mu_{1,2}) a_i/(a_1 mult(sigma_2)) = a_i/(m_{1,2} lcm(a_1, a_2))",
        passed: direct == m_value,
        witnesses: vec![Witness::new("a_i/(m_{1,2} l)", direct)],
    };

    Ok(AccCertificate {
        epsilon: epsilon.clone(),
        i: i + 1,
        m_value,
        floor_inv_epsilon: floor,
        bound_factorial: fact,
        checks: vec![check_a, check_b, check_c, check_d, check_e],
        supplementary: vec![claim, identity],
    })
}

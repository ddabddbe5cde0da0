use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::fan::{FanError, FanoFan};
use crate::intersection::length;
use crate::lattice::enumerate_overlattices;
use crate::rational::{format_ratio, serialize_ratio, serialize_ratio_vec};

/// Nondecreasing tuples of length `len` with entries in `1..=max`,
/// lexicographically.
struct Tuples {
    current: Option<Vec<u64>>,
    max: u64,
}

impl Tuples {
    fn new(len: usize, max: u64) -> Self {
        Self {
            current: (len > 0 && max > 0).then(|| vec![1; len]),
            max,
        }
    }
}

impl Iterator for Tuples {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        let t = self.current.as_mut().expect("checked above");
        match t.iter().rposition(|&x| x < self.max) {
            Some(p) => {
                let v = t[p] + 1;
                t[p..].iter_mut().for_each(|x| *x = v);
            }
            None => self.current = None,
        }
        Some(out)
    }
}

fn well_formed(a: &[u64]) -> bool {
    (0..a.len()).all(|omit| {
        a.iter()
            .enumerate()
            .filter(|&(j, _)| j != omit)
            .fold(0u64, |g, (_, &x)| g.gcd(&x))
            == 1
    })
}

/// Weighted projective spaces of dimension `n` with nondecreasing,
/// well-formed weights bounded by `max_weight`, in lexicographic order.
pub fn enumerate_wps(n: usize, max_weight: u64) -> impl Iterator<Item = FanoFan> {
    Tuples::new(n + 1, max_weight)
        .filter(|a| well_formed(a))
        .map(|a| FanoFan::from_weights_u64(&a).expect("well-formed weights"))
}

/// Invariants used to merge fans that are very likely isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub weights: Vec<BigInt>,
    pub mult_sigma: Vec<BigInt>,
    pub mult_mu: Vec<BigInt>,
    pub cover_index: BigInt,
    pub degrees: Vec<BigInt>,
}

impl Fingerprint {
    pub fn of(f: &FanoFan) -> Self {
        let sorted = |mut v: Vec<BigInt>| {
            v.sort();
            v
        };
        let cover = f.covering();
        Self {
            weights: sorted(f.weights().to_vec()),
            mult_sigma: sorted(f.mult_sigmas().to_vec()),
            mult_mu: sorted(f.curves().map(|c| f.mult_mu(c).clone()).collect()),
            cover_index: cover.cover_index.clone(),
            degrees: sorted(cover.degrees().map(|(_, m)| m.clone()).collect()),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct FakeEnumeration {
    pub fans: Vec<FanoFan>,
    /// Overlattices skipped because a ray stopped being primitive.
    pub absorbed: u64,
    /// Fans dropped as fingerprint duplicates.
    pub duplicates: u64,
}

/// Each weighted projective space from [`enumerate_wps`] together with its
/// quotients by overlattices of index `2..=max_index` that keep every ray
/// primitive, deduplicated by [`Fingerprint`]. Order is deterministic.
pub fn enumerate_fake(n: usize, max_weight: u64, max_index: u64) -> FakeEnumeration {
    let lattices: Vec<_> = (2..=max_index)
        .flat_map(|m| enumerate_overlattices(n, m))
        .collect();
    let mut out = FakeEnumeration::default();
    let mut seen = HashSet::new();
    let mut push = |f: FanoFan, out: &mut FakeEnumeration| {
        if seen.insert(Fingerprint::of(&f)) {
            out.fans.push(f);
        } else {
            out.duplicates += 1;
        }
    };
    for wps in enumerate_wps(n, max_weight) {
        let a = wps.weights().to_vec();
        push(wps, &mut out);
        for lat in &lattices {
            match FanoFan::from_weights_with_overlattice(&a, lat) {
                Ok(f) => push(f, &mut out),
                Err(FanError::RayAbsorbed { .. }) => out.absorbed += 1,
                Err(e) => unreachable!("well-formed weights over an overlattice: {e}"),
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanParams {
    pub dim: usize,
    pub max_weight: u64,
    pub max_index: u64,
    #[serde(serialize_with = "serialize_ratio")]
    pub epsilon: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub weights: Vec<u64>,
    pub cover_index: u64,
    #[serde(serialize_with = "serialize_ratio")]
    pub length: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AboveThreshold {
    #[serde(serialize_with = "serialize_ratio")]
    pub length: BigRational,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub params: ScanParams,
    pub instances: u64,
    pub absorbed: u64,
    pub duplicates: u64,
    /// Distinct lengths, ascending.
    #[serde(serialize_with = "serialize_ratio_vec")]
    pub lengths: Vec<BigRational>,
    /// Lengths `> ε` with the number of instances realising each, ascending.
    pub above_threshold: Vec<AboveThreshold>,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per instance: `weights,cover_index,length_num,length_den`,
    /// weights space-separated.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["weights", "cover_index", "length_num", "length_den"])
            .expect("in-memory write");
        for r in &self.rows {
            let weights = r
                .weights
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            w.write_record([
                weights,
                r.cover_index.to_string(),
                r.length.numer().to_string(),
                r.length.denom().to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 records")
    }
}

/// Lengths of every enumerated instance, aggregated.
pub fn scan_lengths(params: &ScanParams) -> ScanReport {
    let found = enumerate_fake(params.dim, params.max_weight, params.max_index);
    let rows: Vec<ScanRow> = found
        .fans
        .iter()
        .map(|f| ScanRow {
            weights: f
                .weights()
                .iter()
                .map(|a| a.to_u64().expect("weights are bounded by max_weight"))
                .collect(),
            cover_index: f.cover_index().to_u64().expect("bounded by max_index"),
            length: length(f).value,
        })
        .collect();
    let mut counts: BTreeMap<BigRational, u64> = BTreeMap::new();
    for r in &rows {
        *counts.entry(r.length.clone()).or_default() += 1;
    }
    let above_threshold = counts
        .iter()
        .filter(|(l, _)| **l > params.epsilon)
        .map(|(l, &count)| AboveThreshold {
            length: l.clone(),
            count,
        })
        .collect();
    ScanReport {
        params: params.clone(),
        instances: rows.len() as u64,
        absorbed: found.absorbed,
        duplicates: found.duplicates,
        lengths: counts.into_keys().collect(),
        above_threshold,
        rows,
    }
}

/// `l(P(1, k-1, k))` for `k = 2..=k_max`.
pub fn series_abab(k_max: u64) -> Vec<(u64, BigRational)> {
    (2..=k_max)
        .map(|k| {
            let f = FanoFan::from_weights_u64(&[1, k - 1, k]).expect("pairwise coprime");
            (k, length(&f).value)
        })
        .collect()
}

/// Minkowski sum of two finite sets.
pub fn sumset(a: &BTreeSet<BigRational>, b: &BTreeSet<BigRational>) -> BTreeSet<BigRational> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x + y))
        .collect()
}

impl std::fmt::Display for ScanRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} index {} length {}", self.weights, self.cover_index, format_ratio(&self.length))
    }
}

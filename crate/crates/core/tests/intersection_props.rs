use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use toric_lengths::acc::enumerate_fake;
use toric_lengths::intersection::{
    anticanonical_degree, divisor_curve, divisor_curve_via_cover, length, weighted_blowup,
};
use toric_lengths::rational::{int, ratio};
use toric_lengths::FanoFan;

fn instances() -> Vec<FanoFan> {
    let mut fans = enumerate_fake(2, 9, 5).fans;
    fans.extend(enumerate_fake(3, 4, 3).fans);
    fans
}

#[test]
fn intersection_identities_on_enumerated_fans() {
    for f in instances() {
        let cover = f.covering();
        let up = f.cover_fan();
        assert_eq!(up.weights(), f.weights());
        assert!(up.is_wps());
        for c in f.curves() {
            let total: BigRational = (0..f.num_rays())
                .map(|i| divisor_curve(&f, i, c).unwrap())
                .sum();
            assert_eq!(anticanonical_degree(&f, c).unwrap(), total);
            for i in [c.k(), c.l()] {
                assert_eq!(
                    divisor_curve_via_cover(&f, &cover, i, c).unwrap(),
                    divisor_curve(&f, i, c).unwrap()
                );
            }
            let m = BigRational::from_integer(cover.degree(c).clone());
            assert_eq!(
                anticanonical_degree(&up, c).unwrap(),
                m * anticanonical_degree(&f, c).unwrap()
            );
            for i in 0..f.num_rays() {
                assert!(divisor_curve(&f, i, c).unwrap() > int(0));
            }
        }
    }
}

#[test]
fn length_is_at_most_n_plus_one() {
    for f in instances() {
        let r = length(&f);
        let bound = int(f.dim() as i64 + 1);
        assert!(r.value <= bound);
        assert_eq!(r.value, r.per_curve.iter().map(|(_, v)| v.clone()).min().unwrap());
        assert!(r.per_curve.iter().any(|(c, v)| *c == r.argmin && *v == r.value));
        if r.value == bound {
            assert!(f.weights().iter().all(One::is_one));
            assert!(f.mult_sigmas().iter().all(One::is_one));
            assert!(f.curves().all(|c| f.mult_mu(c).is_one()));
        }
    }
}

#[test]
fn weighted_blowup_family() {
    for a in 1..=30u64 {
        for b in 1..=a {
            if num_integer::gcd(a, b) != 1 {
                continue;
            }
            let r = weighted_blowup(a, b).unwrap();
            let (ai, bi) = (a as i64, b as i64);
            assert_eq!(r.discrepancy, ratio(1 + ai, bi) - int(1));
            assert_eq!(r.anticanonical_degree, int(1) - ratio(bi - 1, ai));
            let sum: BigRational = r.per_divisor.iter().sum();
            assert_eq!(sum, r.anticanonical_degree);
        }
    }
}

#[test]
fn weighted_blowup_any_value_in_unit_interval() {
    for k in 1..=6u64 {
        for m in 1..=5u64 {
            let r = weighted_blowup(k * k, m * k + 1).unwrap();
            assert_eq!(
                r.anticanonical_degree,
                int(1) - BigRational::new(BigInt::from(m), BigInt::from(k))
            );
        }
    }
}

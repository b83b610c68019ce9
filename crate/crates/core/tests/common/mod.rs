#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use tspp_core::qseries::{divide, invert, mul, power, CoefficientRing, TruncatedSeries};
use tspp_core::radu::{orbit_of, squares_mod, twist, RaduInstance};
use tspp_core::DivisorVector;

pub const Z: CoefficientRing = CoefficientRing::Integers;
pub const MODULI: [u64; 6] = [4, 5, 11, 25, 121, 125];

pub fn instance1() -> RaduInstance {
    RaduInstance::new(
        625,
        229,
        DivisorVector::from_ordered(10, &[123, 3, -25, 0]).unwrap(),
        10,
        DivisorVector::from_ordered(10, &[13, 0, 0, 0]).unwrap(),
        125,
    )
    .unwrap()
}

pub fn instance2() -> RaduInstance {
    RaduInstance::new(
        1375,
        1054,
        DivisorVector::from_ordered(22, &[9, 3, -1, 0]).unwrap(),
        110,
        DivisorVector::from_ordered(110, &[6, 0, 0, 0, 0, 0, 0, 0]).unwrap(),
        11,
    )
    .unwrap()
}

pub fn series_strategy(max_order: usize) -> impl Strategy<Value = Vec<i64>> {
    (0..=max_order).prop_flat_map(|order| prop::collection::vec(-50i64..50, order + 1))
}

/// Same-order pair of coefficient vectors.
pub fn series_pair(max_order: usize) -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (0..=max_order).prop_flat_map(|order| {
        (prop::collection::vec(-50i64..50, order + 1), prop::collection::vec(-50i64..50, order + 1))
    })
}

pub fn series_triple(max_order: usize) -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>)> {
    (0..=max_order).prop_flat_map(|order| {
        (
            prop::collection::vec(-20i64..20, order + 1),
            prop::collection::vec(-20i64..20, order + 1),
            prop::collection::vec(-20i64..20, order + 1),
        )
    })
}

/// Series with constant term +-1 and a sprinkling of zeros.
pub fn unit_series(max_order: usize) -> impl Strategy<Value = Vec<i64>> {
    (series_strategy(max_order), prop::bool::ANY).prop_map(|(mut v, neg)| {
        v[0] = if neg { -1 } else { 1 };
        v
    })
}

pub fn ring_homomorphism(a: &[i64], b: &[i64], u: u64) -> Result<(), TestCaseError> {
    let ring = CoefficientRing::Residues(u);
    let exact = mul(&TruncatedSeries::from_i64(Z, a), &TruncatedSeries::from_i64(Z, b)).unwrap();
    let direct = mul(&TruncatedSeries::from_i64(ring, a), &TruncatedSeries::from_i64(ring, b)).unwrap();
    prop_assert_eq!(exact.reduce(u).unwrap(), direct);
    if num_integer::gcd(a[0].rem_euclid(u as i64) as u64, u) == 1 {
        let quotient = divide(&TruncatedSeries::from_i64(ring, b), &TruncatedSeries::from_i64(ring, a)).unwrap();
        prop_assert_eq!(mul(&quotient, &TruncatedSeries::from_i64(ring, a)).unwrap(), TruncatedSeries::from_i64(ring, b));
    }
    Ok(())
}

pub fn mul_commutes_and_associates(a: &[i64], b: &[i64], c: &[i64]) -> Result<(), TestCaseError> {
    let (a, b, c) = (TruncatedSeries::from_i64(Z, a), TruncatedSeries::from_i64(Z, b), TruncatedSeries::from_i64(Z, c));
    prop_assert_eq!(mul(&a, &b).unwrap(), mul(&b, &a).unwrap());
    prop_assert_eq!(mul(&mul(&a, &b).unwrap(), &c).unwrap(), mul(&a, &mul(&b, &c).unwrap()).unwrap());
    Ok(())
}

pub fn inverse_law(a: &[i64]) -> Result<(), TestCaseError> {
    let a = TruncatedSeries::from_i64(Z, a);
    let inv = invert(&a).unwrap();
    prop_assert_eq!(mul(&a, &inv).unwrap(), TruncatedSeries::one(a.order(), Z));
    Ok(())
}

pub fn power_law(a: &[i64], e1: i64, e2: i64) -> Result<(), TestCaseError> {
    let a = TruncatedSeries::from_i64(Z, a);
    let lhs = power(&a, e1 + e2).unwrap();
    let rhs = mul(&power(&a, e1).unwrap(), &power(&a, e2).unwrap()).unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// Every image of an orbit element under every square class stays in the orbit.
pub fn orbit_closure(m: u64, t: u64, weight: i128) -> Result<(), TestCaseError> {
    let orbit = orbit_of(m, t, weight).unwrap();
    prop_assert!(orbit.contains(&t));
    for &t_prime in &orbit {
        for s in squares_mod(24 * m) {
            let image = twist(t_prime, s, m, weight).unwrap();
            prop_assert!(orbit.binary_search(&image).is_ok(), "{} -> {} leaves the orbit", t_prime, image);
            // s and s + 24 m k name the same class
            for k in 1..3u64 {
                prop_assert_eq!(twist(t_prime, s + 24 * m * k, m, weight).unwrap(), image);
            }
        }
    }
    Ok(())
}

pub fn orbit_inputs() -> impl Strategy<Value = (u64, u64, i128)> {
    (1u64..120).prop_flat_map(|m| (Just(m), 0..m, -300i128..300))
}

//! Small integer helpers shared by the series and verification code.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of zero are not defined");
    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            low.push(d);
            if d * d != n {
                high.push(n / d);
            }
        }
        d += 1;
    }
    low.extend(high.into_iter().rev());
    low
}

/// Prime factorisation as `(prime, exponent)` pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Writes `u = p^alpha` when `u` is a prime power, returning `(p, alpha)`.
pub fn prime_power(u: u64) -> Option<(u64, u32)> {
    match factorize(u).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorVectorError {
    #[error("level must be positive")]
    ZeroLevel,
    #[error("key {key} does not divide the level {level}")]
    NotADivisor { key: u64, level: u64 },
    #[error("duplicate entry for divisor {0}")]
    Duplicate(u64),
}

/// An integer vector indexed by the positive divisors of a level.
///
/// Every divisor has an entry; divisors not given explicitly hold 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorVector {
    level: u64,
    entries: BTreeMap<u64, i64>,
}

impl DivisorVector {
    pub fn new<I>(level: u64, entries: I) -> Result<Self, DivisorVectorError>
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        if level == 0 {
            return Err(DivisorVectorError::ZeroLevel);
        }
        let mut map: BTreeMap<u64, i64> = divisors(level).into_iter().map(|d| (d, 0)).collect();
        let mut seen = Vec::new();
        for (key, value) in entries {
            if key == 0 || !level.is_multiple_of(key) {
                return Err(DivisorVectorError::NotADivisor { key, level });
            }
            if seen.contains(&key) {
                return Err(DivisorVectorError::Duplicate(key));
            }
            seen.push(key);
            map.insert(key, value);
        }
        Ok(Self { level, entries: map })
    }

    /// Builds the vector from values listed in ascending divisor order.
    pub fn from_ordered(level: u64, values: &[i64]) -> Result<Self, DivisorVectorError> {
        let divs = divisors(level);
        assert_eq!(divs.len(), values.len(), "one value per divisor of {level}");
        Self::new(level, divs.into_iter().zip(values.iter().copied()))
    }

    pub fn zero(level: u64) -> Self {
        Self::new(level, std::iter::empty()).expect("positive level")
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn get(&self, divisor: u64) -> i64 {
        self.entries.get(&divisor).copied().unwrap_or(0)
    }

    /// `(divisor, value)` pairs in ascending divisor order, zeros included.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.entries.iter().map(|(&d, &v)| (d, v))
    }

    pub fn values(&self) -> Vec<i64> {
        self.entries.values().copied().collect()
    }

    /// Sum of the entries.
    pub fn total(&self) -> i128 {
        self.entries.values().map(|&v| v as i128).sum()
    }

    /// Sum of `divisor * value`.
    pub fn weighted_total(&self) -> i128 {
        self.iter().map(|(d, v)| d as i128 * v as i128).sum()
    }
}

impl fmt::Display for DivisorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values().iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

// Serialized as a map from decimal divisor strings to exponents, in
// ascending numeric order. The level is carried by the enclosing document.
impl Serialize for DivisorVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (d, v) in &self.entries {
            map.serialize_entry(&d.to_string(), v)?;
        }
        map.end()
    }
}

/// Divisor map as read from a document, before its level is known.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawDivisorMap(pub Vec<(u64, i64)>);

impl RawDivisorMap {
    pub fn into_vector(self, level: u64) -> Result<DivisorVector, DivisorVectorError> {
        DivisorVector::new(level, self.0)
    }
}

impl From<&DivisorVector> for RawDivisorMap {
    fn from(v: &DivisorVector) -> Self {
        RawDivisorMap(v.iter().collect())
    }
}

impl Serialize for RawDivisorMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (d, v) in &self.0 {
            map.serialize_entry(&d.to_string(), v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for RawDivisorMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct MapVisitor;

        impl<'de> Visitor<'de> for MapVisitor {
            type Value = RawDivisorMap;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from positive divisors to integer exponents")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut out: Vec<(u64, i64)> = Vec::new();
                while let Some((key, value)) = access.next_entry::<String, i64>()? {
                    let d: u64 = key
                        .trim()
                        .parse()
                        .map_err(|_| de::Error::custom(format!("divisor key `{key}` is not a positive integer")))?;
                    if out.iter().any(|(k, _)| *k == d) {
                        return Err(de::Error::custom(format!("duplicate divisor key {d}")));
                    }
                    out.push((d, value));
                }
                out.sort_by_key(|(d, _)| *d);
                Ok(RawDivisorMap(out))
            }
        }

        deserializer.deserialize_map(MapVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(10), vec![1, 2, 5, 10]);
        assert_eq!(divisors(110), vec![1, 2, 5, 10, 11, 22, 55, 110]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(125), Some((5, 3)));
        assert_eq!(prime_power(11), Some((11, 1)));
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(55), None);
        assert_eq!(prime_power(1), None);
        assert!(is_prime(11) && !is_prime(1) && !is_prime(25));
    }

    #[test]
    fn divisor_vector_fills_and_rejects() {
        let v = DivisorVector::new(10, [(1, 13)]).unwrap();
        assert_eq!(v.values(), vec![13, 0, 0, 0]);
        assert_eq!(
            DivisorVector::new(10, [(3, 1)]),
            Err(DivisorVectorError::NotADivisor { key: 3, level: 10 })
        );
        let r = DivisorVector::from_ordered(10, &[123, 3, -25, 0]).unwrap();
        assert_eq!(r.total(), 101);
        assert_eq!(r.weighted_total(), 4);
        assert_eq!(r.to_string(), "(123,3,-25,0)");
    }
}

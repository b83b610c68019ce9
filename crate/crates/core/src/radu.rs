//! Finite verification of eta-quotient congruences on arithmetic progressions.
//!
//! Given `f_r(q) = prod_{d | M} (q^d; q^d)^{r_d} = sum c_r(n) q^n`, a step `m`
//! and residue `t`, the orbit `P_{m,r}(t)` of `t` under the square classes
//! mod `24m` is closed, and if the admissibility conditions and the cusp
//! inequalities hold, checking `c_r(m n + t') = 0 (mod u)` for
//! `n <= floor(v)` and every `t'` in the orbit proves it for all `n`.
//!
//! All quantities in the decision path are exact integers or reduced
//! fractions of unbounded integers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{divisors, factorize, DivisorVector};
use crate::qseries::{eta_quotient, CoefficientRing, SeriesError, MAX_MODULUS};

/// Upper bound on `m` and `N`; keeps every intermediate inside `i128`.
pub const MAX_LEVEL: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RaduError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("step m = {0} is even; only odd m is supported")]
    EvenStep(u64),
    #[error("square class {s} mod {modulus} is not 1 mod 24")]
    NonIntegralTwist { s: u64, modulus: u64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Everything the finite check needs: `(m, M, N, t, r)`, the auxiliary
/// vector `r'` over the divisors of `N`, and the modulus `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaduInstance {
    m: u64,
    t: u64,
    r: DivisorVector,
    group_level: u64,
    r_prime: DivisorVector,
    u: u64,
}

impl RaduInstance {
    pub fn new(
        m: u64,
        t: u64,
        r: DivisorVector,
        group_level: u64,
        r_prime: DivisorVector,
        u: u64,
    ) -> Result<Self, RaduError> {
        let bad = |msg: String| Err(RaduError::InvalidInstance(msg));
        if m == 0 || m > MAX_LEVEL {
            return bad(format!("m = {m} must lie in 1..=2^32"));
        }
        if t >= m {
            return bad(format!("t = {t} must be below m = {m}"));
        }
        if group_level == 0 || group_level > MAX_LEVEL {
            return bad(format!("N = {group_level} must lie in 1..=2^32"));
        }
        if r_prime.level() != group_level {
            return bad(format!("r' is indexed by divisors of {}, not of N = {group_level}", r_prime.level()));
        }
        if r.level() > MAX_LEVEL {
            return bad(format!("M = {} exceeds 2^32", r.level()));
        }
        if !(2..=MAX_MODULUS).contains(&u) {
            return bad(format!("modulus u = {u} must lie in 2..=2^32"));
        }
        Ok(Self { m, t, r, group_level, r_prime, u })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// The eta-quotient level `M`.
    pub fn eta_level(&self) -> u64 {
        self.r.level()
    }

    pub fn r(&self) -> &DivisorVector {
        &self.r
    }

    /// The congruence-subgroup level `N`.
    pub fn group_level(&self) -> u64 {
        self.group_level
    }

    pub fn r_prime(&self) -> &DivisorVector {
        &self.r_prime
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    pub fn with_t(&self, t: u64) -> Result<Self, RaduError> {
        Self::new(self.m, t, self.r.clone(), self.group_level, self.r_prime.clone(), self.u)
    }

    pub fn with_group_level(&self, group_level: u64, r_prime: DivisorVector) -> Result<Self, RaduError> {
        Self::new(self.m, self.t, self.r.clone(), group_level, r_prime, self.u)
    }
}

impl Serialize for RaduInstance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            m: u64,
            #[serde(rename = "M")]
            eta_level: u64,
            #[serde(rename = "N")]
            group_level: u64,
            t: u64,
            r: &'a DivisorVector,
            r_prime: &'a DivisorVector,
            u: u64,
        }
        View {
            m: self.m,
            eta_level: self.eta_level(),
            group_level: self.group_level,
            t: self.t,
            r: &self.r,
            r_prime: &self.r_prime,
            u: self.u,
        }
        .serialize(serializer)
    }
}

/// A matrix `(a b; c d)` of determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CosetRep {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl CosetRep {
    /// `(1 0; delta 1)`.
    pub fn lower(delta: u64) -> Self {
        let c = i64::try_from(delta).expect("divisor fits in i64");
        Self { a: 1, b: 0, c, d: 1 }
    }

    pub fn determinant(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }
}

/// `gcd(m^2 - 1, 24)`.
pub fn kappa(m: u64) -> u64 {
    assert!(m >= 1);
    let m = m as u128;
    ((m * m - 1) % 24).gcd(&24) as u64
}

/// Squares of the units of `Z/modulus`, sorted.
pub fn squares_mod(modulus: u64) -> Vec<u64> {
    assert!(modulus >= 1);
    let modulus = modulus as u128;
    let set: BTreeSet<u64> = (0..modulus)
        .filter(|x| x.gcd(&modulus) == 1)
        .map(|x| (x * x % modulus) as u64)
        .collect();
    set.into_iter().collect()
}

/// `t s + ((s - 1) / 24) * weight (mod m)`, where `weight = sum d r_d`.
pub fn twist(t: u64, s: u64, m: u64, weight: i128) -> Result<u64, RaduError> {
    if (s as i128 - 1).rem_euclid(24) != 0 {
        return Err(RaduError::NonIntegralTwist { s, modulus: 24 * m });
    }
    let k = (s as i128 - 1).div_euclid(24);
    let m = m as i128;
    let value = ((t as i128 % m) * (s as i128 % m) + (k % m) * weight.rem_euclid(m)).rem_euclid(m);
    Ok(value as u64)
}

/// The orbit `P_{m,r}(t)`, sorted ascending.
pub fn orbit(instance: &RaduInstance) -> Result<Vec<u64>, RaduError> {
    orbit_of(instance.m, instance.t, instance.r.weighted_total())
}

pub fn orbit_of(m: u64, t: u64, weight: i128) -> Result<Vec<u64>, RaduError> {
    let mut out = BTreeSet::new();
    for s in squares_mod(24 * m) {
        out.insert(twist(t, s, m, weight)?);
    }
    Ok(out.into_iter().collect())
}

/// `gamma_delta = (1 0; delta 1)` for every divisor of `N`, ascending.
pub fn coset_reps(group_level: u64) -> Vec<CosetRep> {
    divisors(group_level).into_iter().map(CosetRep::lower).collect()
}

/// `[Gamma : Gamma_0(N)] = N prod_{p | N} (1 + 1/p)`.
pub fn index_gamma0(group_level: u64) -> u64 {
    assert!(group_level >= 1);
    factorize(group_level)
        .into_iter()
        .fold(group_level, |acc, (p, _)| acc / p * (p + 1))
}

fn rational(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    a.abs().gcd(&b.abs())
}

/// One term of the cusp minimum:
/// `(1/24) sum_{d | M} r_d gcd^2(d (a + kappa lambda c), m c) / (d m)`.
pub fn p_mr_term(gamma: &CosetRep, m: u64, r: &DivisorVector, kappa: u64, lambda: u64) -> BigRational {
    let (a, c) = (gamma.a as i128, gamma.c as i128);
    let m = m as i128;
    let shifted = a + kappa as i128 * lambda as i128 * c;
    let mut sum = BigRational::zero();
    for (d, r_d) in r.iter().filter(|&(_, r_d)| r_d != 0) {
        let g = gcd_i128(d as i128 * shifted, m * c);
        sum += rational(BigInt::from(r_d) * BigInt::from(g) * BigInt::from(g), BigInt::from(d as i128 * m));
    }
    sum / rational(24, 1)
}

/// Minimum over `lambda in 0..m` and the smallest minimising `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspMinimum {
    pub value: BigRational,
    pub lambda: u64,
}

pub fn p_mr(gamma: &CosetRep, m: u64, r: &DivisorVector, kappa: u64) -> CuspMinimum {
    let mut best = CuspMinimum { value: p_mr_term(gamma, m, r, kappa, 0), lambda: 0 };
    for lambda in 1..m {
        let value = p_mr_term(gamma, m, r, kappa, lambda);
        if value < best.value {
            best = CuspMinimum { value, lambda };
        }
    }
    best
}

/// `(1/24) sum_{d | N} r'_d gcd^2(d, c) / d`.
pub fn p_star(gamma: &CosetRep, r_prime: &DivisorVector) -> BigRational {
    let c = gamma.c as i128;
    let mut sum = BigRational::zero();
    for (d, r_d) in r_prime.iter().filter(|&(_, r_d)| r_d != 0) {
        let g = gcd_i128(d as i128, c);
        sum += rational(BigInt::from(r_d) * BigInt::from(g * g), BigInt::from(d));
    }
    sum / rational(24, 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaCondition {
    pub id: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaStarReport {
    pub conditions: Vec<DeltaCondition>,
    pub passed: bool,
}

impl DeltaStarReport {
    pub fn first_failure(&self) -> Option<&DeltaCondition> {
        self.conditions.iter().find(|c| !c.passed)
    }
}

/// Admissibility checklist for odd `m`.
pub fn delta_star_check(instance: &RaduInstance) -> Result<DeltaStarReport, RaduError> {
    let m = instance.m;
    if m.is_multiple_of(2) {
        return Err(RaduError::EvenStep(m));
    }
    let n = instance.group_level;
    let k = kappa(m) as i128;
    let (mi, ni) = (m as i128, n as i128);
    let active: Vec<(u64, i64)> = instance.r.iter().filter(|&(_, r)| r != 0).collect();
    let mut conditions = Vec::with_capacity(5);

    let primes: Vec<u64> = factorize(m).into_iter().map(|(p, _)| p).collect();
    let missing: Vec<u64> = primes.iter().copied().filter(|p| !n.is_multiple_of(*p)).collect();
    conditions.push(DeltaCondition {
        id: "C1",
        statement: "every prime dividing m divides N",
        passed: missing.is_empty(),
        witness: format!("primes of m = {primes:?}, not dividing N = {n}: {missing:?}"),
    });

    let stray: Vec<u64> = active.iter().map(|&(d, _)| d).filter(|&d| (mi * ni) % d as i128 != 0).collect();
    conditions.push(DeltaCondition {
        id: "C2",
        statement: "every d | M with r_d != 0 divides mN",
        passed: stray.is_empty(),
        witness: format!("mN = {}, divisors with r_d != 0 not dividing mN: {stray:?}", mi * ni),
    });

    let (c3_passed, c3_witness) = if stray.is_empty() {
        let s: i128 = active.iter().map(|&(d, r)| r as i128 * (mi * ni / d as i128)).sum();
        let total = k * ni * s;
        (total.rem_euclid(24) == 0, format!("kappa N sum r_d mN/d = {total}, residue mod 24 = {}", total.rem_euclid(24)))
    } else {
        (false, "undefined: some d with r_d != 0 does not divide mN".to_string())
    };
    conditions.push(DeltaCondition {
        id: "C3",
        statement: "24 | kappa N sum_d r_d mN/d",
        passed: c3_passed,
        witness: c3_witness,
    });

    let total = k * ni * instance.r.total();
    conditions.push(DeltaCondition {
        id: "C4",
        statement: "8 | kappa N sum_d r_d",
        passed: total.rem_euclid(8) == 0,
        witness: format!("kappa N sum r_d = {total}, residue mod 8 = {}", total.rem_euclid(8)),
    });

    let twisted = k * (-24 * instance.t as i128 - instance.r.weighted_total());
    let g = gcd_i128(twisted, 24 * mi);
    let quotient = 24 * mi / g;
    conditions.push(DeltaCondition {
        id: "C5",
        statement: "24m / gcd(kappa(-24t - sum_d d r_d), 24m) divides N",
        passed: ni % quotient == 0,
        witness: format!("24m = {}, gcd = {g}, quotient = {quotient}, N mod quotient = {}", 24 * mi, ni % quotient),
    });

    let passed = conditions.iter().all(|c| c.passed);
    Ok(DeltaStarReport { conditions, passed })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub v: BigRational,
    pub v_floor: BigInt,
    pub t_min: u64,
}

/// The verification bound `v` for the given orbit.
pub fn compute_v(instance: &RaduInstance, orbit: &[u64]) -> Bound {
    let t_min = *orbit.iter().min().expect("orbit contains t");
    let index = index_gamma0(instance.group_level) as i128;
    let m = instance.m as i128;
    let head = rational(
        (instance.r.total() + instance.r_prime.total()) * index - instance.r_prime.weighted_total(),
        24,
    );
    let v = head - rational(instance.r.weighted_total(), 24 * m) - rational(t_min, m);
    let v_floor = v.floor().to_integer();
    Bound { v, v_floor, t_min }
}

pub(crate) fn serialize_fraction<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{}/{}", q.numer(), q.denom()))
}

/// Exact fraction as `numerator/denominator`, always with both parts.
pub fn fraction_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspEntry {
    pub delta: u64,
    pub gamma: CosetRep,
    #[serde(serialize_with = "serialize_fraction")]
    pub p_mr: BigRational,
    pub lambda: u64,
    #[serde(serialize_with = "serialize_fraction")]
    pub p_star: BigRational,
    #[serde(serialize_with = "serialize_fraction")]
    pub sum: BigRational,
    pub nonnegative: bool,
}

/// Cusp table over `gamma_delta`, `delta | N`.
pub fn cusp_table(instance: &RaduInstance) -> Vec<CuspEntry> {
    let k = kappa(instance.m);
    coset_reps(instance.group_level)
        .into_iter()
        .map(|gamma| {
            let min = p_mr(&gamma, instance.m, &instance.r, k);
            let star = p_star(&gamma, &instance.r_prime);
            let sum = &min.value + &star;
            CuspEntry {
                delta: gamma.c as u64,
                gamma,
                nonnegative: !sum.is_negative(),
                p_mr: min.value,
                lambda: min.lambda,
                p_star: star,
                sum,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientFailure {
    pub n: u64,
    pub index: u64,
    pub residue: u64,
}

/// Coefficients `c_r(m n + t')` confirmed to vanish mod `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckedProgression {
    pub t_prime: u64,
    pub indices: Vec<u64>,
    pub failure: Option<CoefficientFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Verified,
    Failed { reason: String },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub instance: RaduInstance,
    pub kappa: u64,
    pub orbit: Vec<u64>,
    pub delta_star: DeltaStarReport,
    pub cusp_table: Vec<CuspEntry>,
    pub index: u64,
    #[serde(serialize_with = "serialize_fraction")]
    pub v: BigRational,
    pub v_floor: i64,
    pub t_min: u64,
    /// Order the eta quotient was expanded to; absent if no coefficient was needed.
    pub expansion_order: Option<u64>,
    pub checked: Vec<CheckedProgression>,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Runs every condition of the finite check and the coefficient scan.
pub fn verify_lemma1(instance: &RaduInstance) -> Result<Certificate, RaduError> {
    let delta_star = delta_star_check(instance)?;
    let kappa = kappa(instance.m);
    let orbit = orbit(instance)?;
    let cusp_table = cusp_table(instance);
    let index = index_gamma0(instance.group_level);
    let bound = compute_v(instance, &orbit);
    let v_floor = bound.v_floor.to_i64().ok_or_else(|| {
        RaduError::InvalidInstance(format!("bound {} does not fit in 64 bits", bound.v_floor))
    })?;

    let mut certificate = Certificate {
        instance: instance.clone(),
        kappa,
        orbit,
        delta_star,
        cusp_table,
        index,
        v: bound.v,
        v_floor,
        t_min: bound.t_min,
        expansion_order: None,
        checked: Vec::new(),
        verdict: Verdict::Verified,
    };

    if let Some(c) = certificate.delta_star.first_failure() {
        certificate.verdict = Verdict::Failed { reason: format!("admissibility condition {} failed: {}", c.id, c.witness) };
        return Ok(certificate);
    }
    if let Some(e) = certificate.cusp_table.iter().find(|e| !e.nonnegative) {
        certificate.verdict = Verdict::Failed {
            reason: format!("cusp condition fails at gamma_{}: p_mr + p_star = {}", e.delta, fraction_string(&e.sum)),
        };
        return Ok(certificate);
    }
    if v_floor < 0 {
        return Ok(certificate);
    }

    let m = instance.m;
    let top = *certificate.orbit.last().expect("nonempty orbit");
    let order = m
        .checked_mul(v_floor as u64)
        .and_then(|x| x.checked_add(top))
        .filter(|&x| x <= usize::MAX as u64 / 2)
        .ok_or_else(|| RaduError::InvalidInstance("expansion order overflows".into()))?;
    certificate.expansion_order = Some(order);
    let series = eta_quotient(&instance.r, order as usize, CoefficientRing::residues(instance.u)?)?;
    let residues = series.residues().expect("residue ring");

    for &t_prime in &certificate.orbit.clone() {
        let mut entry = CheckedProgression { t_prime, indices: Vec::with_capacity(v_floor as usize + 1), failure: None };
        for n in 0..=v_floor as u64 {
            let index = m * n + t_prime;
            let residue = residues[index as usize];
            if residue != 0 {
                entry.failure = Some(CoefficientFailure { n, index, residue });
                break;
            }
            entry.indices.push(index);
        }
        let failure = entry.failure.clone();
        certificate.checked.push(entry);
        if let Some(f) = failure {
            certificate.verdict = Verdict::Failed {
                reason: format!("c_r({}) = {} (mod {}), n = {}, t' = {t_prime}", f.index, f.residue, instance.u, f.n),
            };
            break;
        }
    }
    Ok(certificate)
}

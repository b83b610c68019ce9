//! Generating functions for 1-shell totally symmetric plane partitions and
//! the reduction of `f`-congruences to eta-quotient congruences.
//!
//! `f(n)` vanishes off `n = 0` and `n = 1 (mod 3)`, and `f(6n + 1) = g(n)`
//! where `sum g(n) q^n = (q^2;q^2)^3 / (q;q)^2`. Modulo `p^alpha`, `g`
//! agrees with the coefficients of
//! `(q;q)^{p^alpha - 2} (q^2;q^2)^3 / (q^p;q^p)^{p^(alpha-1)}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{is_prime, prime_power, DivisorVector};
use crate::qseries::{eta_quotient, CoefficientRing, SeriesError, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TsppError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("alpha must be at least 1")]
    ZeroAlpha,
    #[error("p^alpha overflows")]
    Overflow,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Identifies one of the coefficient sequences the congruences are about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sequence {
    /// 1-shell TSPP counts.
    F,
    /// `(q^2;q^2)^3 / (q;q)^2`.
    G,
    /// The `p^alpha` companion eta quotient of `g`.
    GAlphaP { alpha: u32, p: u64 },
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequence::F => f.write_str("f"),
            Sequence::G => f.write_str("g"),
            Sequence::GAlphaP { alpha, p } => write!(f, "g_{{{alpha},{p}}}"),
        }
    }
}

impl FromStr for Sequence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "f" => Ok(Sequence::F),
            "g" => Ok(Sequence::G),
            other => {
                let inner = other
                    .strip_prefix("g_{")
                    .and_then(|r| r.strip_suffix('}'))
                    .ok_or_else(|| format!("unknown sequence `{other}` (expected f, g or g_{{alpha,p}})"))?;
                let (a, p) = inner.split_once(',').ok_or_else(|| format!("malformed sequence `{other}`"))?;
                let alpha: u32 = a.trim().parse().map_err(|_| format!("bad alpha in `{other}`"))?;
                let p: u64 = p.trim().parse().map_err(|_| format!("bad prime in `{other}`"))?;
                if alpha == 0 || !is_prime(p) {
                    return Err(format!("`{other}` needs alpha >= 1 and p prime"));
                }
                Ok(Sequence::GAlphaP { alpha, p })
            }
        }
    }
}

impl Serialize for Sequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Sequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `sequence(step * n + offset) = 0 (mod modulus)` for every `n >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CongruenceClaim {
    pub sequence: Sequence,
    #[serde(rename = "A")]
    pub step: u64,
    #[serde(rename = "B")]
    pub offset: u64,
    pub u: u64,
}

impl CongruenceClaim {
    pub fn new(sequence: Sequence, step: u64, offset: u64, u: u64) -> Self {
        Self { sequence, step, offset, u }
    }

    pub fn on_f(step: u64, offset: u64, u: u64) -> Self {
        Self::new(Sequence::F, step, offset, u)
    }

    /// Every index of `self` is also an index of `other`.
    pub fn progression_within(&self, other: &CongruenceClaim) -> bool {
        other.step != 0
            && self.step.is_multiple_of(other.step)
            && self.offset >= other.offset
            && (self.offset - other.offset).is_multiple_of(other.step)
    }
}

impl fmt::Display for CongruenceClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}n+{}) = 0 (mod {})", self.sequence, self.step, self.offset, self.u)
    }
}

/// Expansion of `1 + sum_{n>=1} q^{3n-2} prod_{i=0}^{n-2} (1 + q^{6i+3})`.
pub fn blecher_series(order: usize, ring: CoefficientRing) -> TruncatedSeries {
    match ring {
        CoefficientRing::Integers => {
            TruncatedSeries::from_bigints(blecher_expand(order, BigInt::from(0), BigInt::from(1), |a, b| *a += b))
        }
        CoefficientRing::Residues(u) => TruncatedSeries::from_residues(
            u,
            blecher_expand(order, 0u64, 1u64, |a, b| {
                *a += *b;
                if *a >= u {
                    *a -= u;
                }
            }),
        ),
    }
}

fn blecher_expand<T: Clone>(order: usize, zero: T, one: T, add: impl Fn(&mut T, &T)) -> Vec<T> {
    let mut f = vec![zero.clone(); order + 1];
    f[0] = one.clone();
    // running product prod_{i=0}^{n-2} (1 + q^{6i+3}), only needed below q^{order - shift}
    let mut product = vec![zero; order + 1];
    product[0] = one;
    for n in 1usize.. {
        let shift = 3 * n - 2;
        if shift > order {
            break;
        }
        let room = order - shift;
        if n >= 2 {
            let step = 6 * (n - 2) + 3;
            for k in (step..=room).rev() {
                let (lo, hi) = product.split_at_mut(k);
                add(&mut hi[0], &lo[k - step]);
            }
        }
        for k in 0..=room {
            add(&mut f[shift + k], &product[k]);
        }
    }
    f
}

pub fn g_spec() -> DivisorVector {
    DivisorVector::from_ordered(2, &[-2, 3]).expect("divisors of 2")
}

pub fn g_series(order: usize, ring: CoefficientRing) -> Result<TruncatedSeries, SeriesError> {
    eta_quotient(&g_spec(), order, ring)
}

/// Exponents `(p^alpha - 2, 3, -p^(alpha-1), 0)` over the divisors `1, 2, p, 2p`.
///
/// For `p = 2` the divisors collide and the quotient is rewritten over level 4
/// as `(q;q)^{2^alpha - 2} (q^2;q^2)^{3 - 2^(alpha-1)}`.
pub fn g_alpha_p_spec(alpha: u32, p: u64) -> Result<DivisorVector, TsppError> {
    if alpha == 0 {
        return Err(TsppError::ZeroAlpha);
    }
    if !is_prime(p) {
        return Err(TsppError::NotPrime(p));
    }
    let pa = p.checked_pow(alpha).and_then(|x| i64::try_from(x).ok()).ok_or(TsppError::Overflow)?;
    let pa1 = pa / p as i64;
    let spec = if p == 2 {
        DivisorVector::new(4, [(1, pa - 2), (2, 3 - pa1), (4, 0)])
    } else {
        DivisorVector::new(2 * p, [(1, pa - 2), (2, 3), (p, -pa1), (2 * p, 0)])
    };
    Ok(spec.expect("divisors of 2p"))
}

pub fn g_alpha_p_series(alpha: u32, p: u64, order: usize, ring: CoefficientRing) -> Result<TruncatedSeries, TsppError> {
    Ok(eta_quotient(&g_alpha_p_spec(alpha, p)?, order, ring)?)
}

/// Expansion of any of the named sequences.
pub fn sequence_series(sequence: Sequence, order: usize, ring: CoefficientRing) -> Result<TruncatedSeries, TsppError> {
    match sequence {
        Sequence::F => Ok(blecher_series(order, ring)),
        Sequence::G => Ok(g_series(order, ring)?),
        Sequence::GAlphaP { alpha, p } => g_alpha_p_series(alpha, p, order, ring),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    pub checked_through: usize,
    /// Indices `n` with `n = 0, 2 (mod 3)` that were confirmed to vanish.
    pub zeros_checked: usize,
    pub counterexample: Option<usize>,
}

impl SupportReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Confirms `f(n) = 0` for `1 <= n <= order`, `n = 0, 2 (mod 3)`.
pub fn check_support(order: usize) -> SupportReport {
    check_support_of(&blecher_series(order, CoefficientRing::Integers))
}

pub fn check_support_of(f: &TruncatedSeries) -> SupportReport {
    let mut zeros_checked = 0;
    for n in (1..=f.order()).filter(|n| n % 3 != 1) {
        if !f.is_zero_at(n) {
            return SupportReport { checked_through: f.order(), zeros_checked, counterexample: Some(n) };
        }
        zeros_checked += 1;
    }
    SupportReport { checked_through: f.order(), zeros_checked, counterexample: None }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityMismatch {
    pub n: usize,
    pub f_value: String,
    pub g_value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    /// Number of `n` with `6n + 1 <= order` compared.
    pub checked: usize,
    pub mismatch: Option<IdentityMismatch>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares `f(6n + 1)` with `g(n)` in exact integers for `6n + 1 <= order`.
pub fn check_hs_identity(order: usize) -> IdentityReport {
    if order < 1 {
        return IdentityReport { checked: 0, mismatch: None };
    }
    let f = blecher_series(order, CoefficientRing::Integers);
    let g_order = (order - 1) / 6;
    let g = g_series(g_order, CoefficientRing::Integers).expect("unit eta quotient");
    for n in 0..=g_order {
        let (fv, gv) = (f.coeff(6 * n + 1), g.coeff(n));
        if fv != gv {
            return IdentityReport {
                checked: n,
                mismatch: Some(IdentityMismatch { n, f_value: fv.to_string(), g_value: gv.to_string() }),
            };
        }
    }
    IdentityReport { checked: g_order + 1, mismatch: None }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorReport {
    pub alpha: u32,
    pub p: u64,
    pub checked_through: usize,
    pub mismatch: Option<usize>,
}

impl GeneratorReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares `g_{alpha,p}(n)` with `g(n)` modulo `p^alpha` for `n <= order`.
pub fn check_generator_congruence(alpha: u32, p: u64, order: usize) -> Result<GeneratorReport, TsppError> {
    let modulus = p.checked_pow(alpha).ok_or(TsppError::Overflow)?;
    let ring = CoefficientRing::residues(modulus)?;
    let companion = g_alpha_p_series(alpha, p, order, ring)?;
    let g = g_series(order, CoefficientRing::Integers)?.reduce(modulus)?;
    let mismatch = (0..=order).find(|&n| companion.residue(n, modulus) != g.residue(n, modulus));
    Ok(GeneratorReport { alpha, p, checked_through: order, mismatch })
}

/// Target of a reduced claim: `g_{alpha,p}(m n + t) = 0 (mod u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GClaim {
    pub alpha: u32,
    pub p: u64,
    pub m: u64,
    pub t: u64,
    pub u: u64,
}

impl GClaim {
    pub fn as_claim(&self) -> CongruenceClaim {
        CongruenceClaim::new(Sequence::GAlphaP { alpha: self.alpha, p: self.p }, self.m, self.t, self.u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReductionOutcome {
    /// Every index in the class is positive and `= 0, 2 (mod 3)`.
    TriviallyZero,
    GClaim(GClaim),
}

/// One residue class `n = 3k + residue_class` of an `f`-claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub residue_class: u8,
    /// The class as the progression `step * k + offset`.
    pub step: u64,
    pub offset: u64,
    pub outcome: ReductionOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("only claims about f can be reduced, got {0}")]
    NotAboutF(Sequence),
    #[error("modulus {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("class {residue_class}: indices {step}k+{offset} hit f(0) = 1")]
    HitsConstantTerm { residue_class: u8, step: u64, offset: u64 },
    #[error("class {residue_class}: indices {step}k+{offset} are 4 (mod 6), outside f(6n+1) = g(n)")]
    FourModSix { residue_class: u8, step: u64, offset: u64 },
    #[error("class {residue_class}: step {step} is not divisible by 6")]
    StepNotDivisibleBySix { residue_class: u8, step: u64 },
    #[error("claim step must be positive and offset below it")]
    BadProgression,
    #[error("progression overflows")]
    Overflow,
}

/// Splits an `f`-claim by `n mod 3` and maps every class either to the
/// vanishing support of `f` or to a `g_{alpha,p}` claim with `p^alpha = u`.
pub fn reduce_claim(claim: &CongruenceClaim) -> Result<Vec<ReductionStep>, ReductionError> {
    if claim.sequence != Sequence::F {
        return Err(ReductionError::NotAboutF(claim.sequence));
    }
    if claim.step == 0 || claim.offset >= claim.step {
        return Err(ReductionError::BadProgression);
    }
    let (p, alpha) = prime_power(claim.u).ok_or(ReductionError::NotPrimePower(claim.u))?;
    let step = claim.step.checked_mul(3).ok_or(ReductionError::Overflow)?;
    let mut steps = Vec::with_capacity(3);
    for residue_class in 0..3u8 {
        let offset = claim
            .step
            .checked_mul(residue_class as u64)
            .and_then(|x| x.checked_add(claim.offset))
            .ok_or(ReductionError::Overflow)?;
        // step is divisible by 3, so the whole class shares offset mod 3
        let outcome = match offset % 3 {
            0 | 2 if offset == 0 => {
                return Err(ReductionError::HitsConstantTerm { residue_class, step, offset });
            }
            0 | 2 => ReductionOutcome::TriviallyZero,
            _ => {
                if step % 6 != 0 {
                    return Err(ReductionError::StepNotDivisibleBySix { residue_class, step });
                }
                if offset % 6 == 4 {
                    return Err(ReductionError::FourModSix { residue_class, step, offset });
                }
                ReductionOutcome::GClaim(GClaim { alpha, p, m: step / 6, t: (offset - 1) / 6, u: claim.u })
            }
        };
        steps.push(ReductionStep { residue_class, step, offset, outcome });
    }
    Ok(steps)
}

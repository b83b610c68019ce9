//! Truncated power series in `q` over the integers or over `Z/uZ`.
//!
//! Everything here is built around eta quotients: their factors
//! `(q^d; q^d)_inf` are sparse by Euler's pentagonal number theorem, so the
//! multiplication and division kernels iterate over the nonzero terms of the
//! sparser operand and run in `order * nnz` coefficient operations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::DivisorVector;

/// Largest modulus accepted by the residue ring; products of two residues
/// must fit in 64 bits.
pub const MAX_MODULUS: u64 = 1 << 32;

#[cfg(feature = "parallel")]
const PARALLEL_CHUNK: usize = 1 << 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("modulus {0} is outside the supported range 2..=2^32")]
    InvalidModulus(u64),
    #[error("coefficient rings differ: {0} vs {1}")]
    RingMismatch(CoefficientRing, CoefficientRing),
    #[error("constant term {constant} is not a unit (gcd with the modulus is {gcd})")]
    NonUnitConstant { constant: BigInt, gcd: BigInt },
    #[error("progression {step}n+{offset} is invalid for a series of order {order}")]
    InvalidProgression { step: u64, offset: u64, order: usize },
    #[error("dilation factor must be positive")]
    ZeroDilation,
}

/// The ring the coefficients live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientRing {
    Integers,
    Residues(u64),
}

impl CoefficientRing {
    pub fn residues(modulus: u64) -> Result<Self, SeriesError> {
        if (2..=MAX_MODULUS).contains(&modulus) {
            Ok(Self::Residues(modulus))
        } else {
            Err(SeriesError::InvalidModulus(modulus))
        }
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            Self::Integers => None,
            Self::Residues(u) => Some(u),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Integers => f.write_str("Z"),
            Self::Residues(u) => write!(f, "Z/{u}Z"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Coeffs {
    Integers(Vec<BigInt>),
    Residues { modulus: u64, values: Vec<u64> },
}

/// A power series known through `q^order`; `order + 1` coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Coeffs,
}

impl TruncatedSeries {
    /// Series with the given integer coefficients, reduced into `ring`.
    pub fn from_integers(ring: CoefficientRing, coeffs: &[BigInt]) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least one coefficient");
        let coeffs = match ring {
            CoefficientRing::Integers => Coeffs::Integers(coeffs.to_vec()),
            CoefficientRing::Residues(u) => Coeffs::Residues {
                modulus: u,
                values: coeffs.iter().map(|c| reduce_bigint(c, u)).collect(),
            },
        };
        Self { coeffs }
    }

    pub fn from_i64(ring: CoefficientRing, coeffs: &[i64]) -> Self {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_integers(ring, &big)
    }

    pub(crate) fn from_residues(modulus: u64, values: Vec<u64>) -> Self {
        debug_assert!(values.iter().all(|&v| v < modulus));
        Self { coeffs: Coeffs::Residues { modulus, values } }
    }

    pub(crate) fn from_bigints(values: Vec<BigInt>) -> Self {
        Self { coeffs: Coeffs::Integers(values) }
    }

    pub fn one(order: usize, ring: CoefficientRing) -> Self {
        let mut s = Self::zero(order, ring);
        match &mut s.coeffs {
            Coeffs::Integers(v) => v[0] = BigInt::one(),
            Coeffs::Residues { values, .. } => values[0] = 1,
        }
        s
    }

    pub fn zero(order: usize, ring: CoefficientRing) -> Self {
        let coeffs = match ring {
            CoefficientRing::Integers => Coeffs::Integers(vec![BigInt::zero(); order + 1]),
            CoefficientRing::Residues(u) => Coeffs::Residues { modulus: u, values: vec![0; order + 1] },
        };
        Self { coeffs }
    }

    pub fn ring(&self) -> CoefficientRing {
        match &self.coeffs {
            Coeffs::Integers(_) => CoefficientRing::Integers,
            Coeffs::Residues { modulus, .. } => CoefficientRing::Residues(*modulus),
        }
    }

    pub fn order(&self) -> usize {
        self.len() - 1
    }

    fn len(&self) -> usize {
        match &self.coeffs {
            Coeffs::Integers(v) => v.len(),
            Coeffs::Residues { values, .. } => values.len(),
        }
    }

    /// Coefficient of `q^n` (canonical representative in residue mode).
    pub fn coeff(&self, n: usize) -> BigInt {
        match &self.coeffs {
            Coeffs::Integers(v) => v[n].clone(),
            Coeffs::Residues { values, .. } => BigInt::from(values[n]),
        }
    }

    /// Coefficient of `q^n` reduced into `[0, u)`.
    pub fn residue(&self, n: usize, u: u64) -> u64 {
        match &self.coeffs {
            Coeffs::Integers(v) => reduce_bigint(&v[n], u),
            Coeffs::Residues { values, .. } => values[n] % u,
        }
    }

    pub fn is_zero_at(&self, n: usize) -> bool {
        match &self.coeffs {
            Coeffs::Integers(v) => v[n].is_zero(),
            Coeffs::Residues { values, .. } => values[n] == 0,
        }
    }

    pub fn coefficients(&self) -> Vec<BigInt> {
        (0..self.len()).map(|n| self.coeff(n)).collect()
    }

    /// Coefficients as `i64`; `None` if any does not fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        match &self.coeffs {
            Coeffs::Integers(v) => v.iter().map(ToPrimitive::to_i64).collect(),
            Coeffs::Residues { values, .. } => values.iter().map(|&x| i64::try_from(x).ok()).collect(),
        }
    }

    pub fn residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Residues { values, .. } => Some(values),
            Coeffs::Integers(_) => None,
        }
    }

    pub fn integers(&self) -> Option<&[BigInt]> {
        match &self.coeffs {
            Coeffs::Integers(v) => Some(v),
            Coeffs::Residues { .. } => None,
        }
    }

    pub fn nonzero_count(&self) -> usize {
        (0..self.len()).filter(|&n| !self.is_zero_at(n)).count()
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        let coeffs = match &self.coeffs {
            Coeffs::Integers(v) => Coeffs::Integers(v[..keep].to_vec()),
            Coeffs::Residues { modulus, values } => {
                Coeffs::Residues { modulus: *modulus, values: values[..keep].to_vec() }
            }
        };
        Self { coeffs }
    }

    /// Image under `Z -> Z/uZ` (or `Z/vZ -> Z/uZ` when `u | v`).
    pub fn reduce(&self, u: u64) -> Result<Self, SeriesError> {
        let ring = CoefficientRing::residues(u)?;
        match &self.coeffs {
            Coeffs::Integers(v) => Ok(Self::from_integers(ring, v)),
            Coeffs::Residues { modulus, values } => {
                if modulus % u != 0 {
                    return Err(SeriesError::RingMismatch(self.ring(), ring));
                }
                Ok(Self::from_residues(u, values.iter().map(|x| x % u).collect()))
            }
        }
    }
}

pub(crate) fn reduce_bigint(c: &BigInt, u: u64) -> u64 {
    c.mod_floor(&BigInt::from(u)).to_u64().expect("residue below modulus")
}

/// Sparse view `(exponent, coefficient)` of the nonzero terms through `order`.
enum Sparse {
    Integers(Vec<(usize, BigInt)>),
    Residues(Vec<(usize, u64)>),
}

fn sparse_terms(a: &TruncatedSeries, order: usize) -> Sparse {
    match &a.coeffs {
        Coeffs::Integers(v) => Sparse::Integers(
            v[..=order].iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e, c.clone())).collect(),
        ),
        Coeffs::Residues { values, .. } => Sparse::Residues(
            values[..=order].iter().enumerate().filter(|(_, &c)| c != 0).map(|(e, &c)| (e, c)).collect(),
        ),
    }
}

fn nonzeros_through(a: &TruncatedSeries, order: usize) -> usize {
    (0..=order).filter(|&n| !a.is_zero_at(n)).count()
}

fn check_ring(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<(), SeriesError> {
    if a.ring() != b.ring() {
        return Err(SeriesError::RingMismatch(a.ring(), b.ring()));
    }
    Ok(())
}

// --- residue kernels -------------------------------------------------------

#[inline(always)]
fn add_mod(a: u64, b: u64, u: u64) -> u64 {
    let s = a + b;
    if s >= u {
        s - u
    } else {
        s
    }
}

#[inline(always)]
fn sub_mod(a: u64, b: u64, u: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + u - b
    }
}

/// `out[i] = sum_e c_e * dense[lo + i - e]` for one output chunk.
fn mul_chunk_mod(dense: &[u64], sparse: &[(usize, u64)], lo: usize, out: &mut [u64], u: u64) {
    let hi = lo + out.len();
    for &(e, c) in sparse {
        if e >= hi {
            break;
        }
        let start = lo.max(e);
        let src = &dense[start - e..hi - e];
        let dst = &mut out[start - lo..];
        if c == 1 {
            for (o, &x) in dst.iter_mut().zip(src) {
                *o = add_mod(*o, x, u);
            }
        } else if c == u - 1 {
            for (o, &x) in dst.iter_mut().zip(src) {
                *o = sub_mod(*o, x, u);
            }
        } else {
            for (o, &x) in dst.iter_mut().zip(src) {
                *o = (*o + c * x % u) % u;
            }
        }
    }
}

fn mul_sparse_mod(dense: &[u64], sparse: &[(usize, u64)], order: usize, u: u64) -> Vec<u64> {
    let mut out = vec![0u64; order + 1];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if order >= 2 * PARALLEL_CHUNK {
            out.par_chunks_mut(PARALLEL_CHUNK)
                .enumerate()
                .for_each(|(i, chunk)| mul_chunk_mod(dense, sparse, i * PARALLEL_CHUNK, chunk, u));
            return out;
        }
    }
    mul_chunk_mod(dense, sparse, 0, &mut out, u);
    out
}

/// In-place `num / den` where `den` is given by its nonzero terms and the
/// inverse of its constant term.
fn div_sparse_mod(values: &mut [u64], den: &[(usize, u64)], inv0: u64, u: u64) {
    let tail: Vec<(usize, u64)> = den.iter().copied().filter(|&(e, _)| e > 0).collect();
    let all_signs = tail.iter().all(|&(_, c)| c == 1 || c == u - 1);
    for n in 0..values.len() {
        let mut acc = values[n];
        if all_signs {
            for &(e, c) in &tail {
                if e > n {
                    break;
                }
                let x = values[n - e];
                acc = if c == 1 { sub_mod(acc, x, u) } else { add_mod(acc, x, u) };
            }
        } else {
            for &(e, c) in &tail {
                if e > n {
                    break;
                }
                acc = sub_mod(acc, c * values[n - e] % u, u);
            }
        }
        values[n] = if inv0 == 1 { acc } else { acc * inv0 % u };
    }
}

// --- integer kernels -------------------------------------------------------

fn mul_chunk_int(dense: &[BigInt], sparse: &[(usize, BigInt)], lo: usize, out: &mut [BigInt]) {
    let hi = lo + out.len();
    let one = BigInt::one();
    let minus_one = -BigInt::one();
    for (e, c) in sparse {
        let e = *e;
        if e >= hi {
            break;
        }
        let start = lo.max(e);
        let src = &dense[start - e..hi - e];
        let dst = &mut out[start - lo..];
        if *c == one {
            for (o, x) in dst.iter_mut().zip(src) {
                *o += x;
            }
        } else if *c == minus_one {
            for (o, x) in dst.iter_mut().zip(src) {
                *o -= x;
            }
        } else {
            for (o, x) in dst.iter_mut().zip(src) {
                *o += c * x;
            }
        }
    }
}

fn mul_sparse_int(dense: &[BigInt], sparse: &[(usize, BigInt)], order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order + 1];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if order >= 2 * PARALLEL_CHUNK {
            out.par_chunks_mut(PARALLEL_CHUNK)
                .enumerate()
                .for_each(|(i, chunk)| mul_chunk_int(dense, sparse, i * PARALLEL_CHUNK, chunk));
            return out;
        }
    }
    mul_chunk_int(dense, sparse, 0, &mut out);
    out
}

/// In-place exact division; `den[0]` must be `+1` or `-1`.
fn div_sparse_int(values: &mut [BigInt], den: &[(usize, BigInt)], den0_negative: bool) {
    let tail: Vec<&(usize, BigInt)> = den.iter().filter(|(e, _)| *e > 0).collect();
    for n in 0..values.len() {
        let mut acc = values[n].clone();
        for (e, c) in &tail {
            if *e > n {
                break;
            }
            acc -= c * &values[n - e];
        }
        values[n] = if den0_negative { -acc } else { acc };
    }
}

// --- public operations -----------------------------------------------------

/// `prod_{n>=1} (1 - q^{delta n})` through `q^order`, via the pentagonal
/// number theorem.
pub fn pentagonal_series(delta: u64, order: usize, ring: CoefficientRing) -> Result<TruncatedSeries, SeriesError> {
    if delta == 0 {
        return Err(SeriesError::ZeroDilation);
    }
    let mut coeffs = vec![0i64; order + 1];
    let delta = delta as u128;
    let limit = order as u128;
    coeffs[0] = 1;
    for k in 1u128.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let lo = delta * (k * (3 * k - 1) / 2);
        if lo > limit {
            break;
        }
        coeffs[lo as usize] = sign;
        let hi = delta * (k * (3 * k + 1) / 2);
        if hi <= limit {
            coeffs[hi as usize] = sign;
        }
    }
    Ok(TruncatedSeries::from_i64(ring, &coeffs))
}

/// Cauchy product truncated at the smaller of the two orders.
pub fn mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    check_ring(a, b)?;
    let order = a.order().min(b.order());
    let (dense, sparse) =
        if nonzeros_through(a, order) <= nonzeros_through(b, order) { (b, a) } else { (a, b) };
    Ok(mul_by_sparse(dense, sparse, order))
}

fn mul_by_sparse(dense: &TruncatedSeries, sparse: &TruncatedSeries, order: usize) -> TruncatedSeries {
    match (&dense.coeffs, sparse_terms(sparse, order)) {
        (Coeffs::Residues { modulus, values }, Sparse::Residues(terms)) => {
            TruncatedSeries::from_residues(*modulus, mul_sparse_mod(values, &terms, order, *modulus))
        }
        (Coeffs::Integers(values), Sparse::Integers(terms)) => {
            TruncatedSeries::from_bigints(mul_sparse_int(values, &terms, order))
        }
        _ => unreachable!("ring checked by caller"),
    }
}

/// Quotient `num / den` truncated at the smaller order. Runs the forward
/// recurrence over the nonzero terms of `den`.
pub fn divide(num: &TruncatedSeries, den: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    check_ring(num, den)?;
    let order = num.order().min(den.order());
    let mut out = num.truncate(order);
    match (&mut out.coeffs, sparse_terms(den, order)) {
        (Coeffs::Residues { modulus, values }, Sparse::Residues(terms)) => {
            let inv0 = unit_inverse_mod(den.residue(0, *modulus), *modulus)?;
            div_sparse_mod(values, &terms, inv0, *modulus);
        }
        (Coeffs::Integers(values), Sparse::Integers(terms)) => {
            let c0 = den.coeff(0);
            if c0.abs() != BigInt::one() {
                return Err(SeriesError::NonUnitConstant { gcd: c0.abs(), constant: c0 });
            }
            div_sparse_int(values, &terms, c0.is_negative());
        }
        _ => unreachable!("ring checked above"),
    }
    Ok(out)
}

fn unit_inverse_mod(c: u64, u: u64) -> Result<u64, SeriesError> {
    let ext = (c as i128).extended_gcd(&(u as i128));
    if ext.gcd != 1 {
        return Err(SeriesError::NonUnitConstant { constant: BigInt::from(c), gcd: BigInt::from(ext.gcd) });
    }
    Ok(ext.x.rem_euclid(u as i128) as u64)
}

/// Multiplicative inverse through `a.order()`.
pub fn invert(a: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    divide(&TruncatedSeries::one(a.order(), a.ring()), a)
}

/// `a^e` truncated at `a.order()`; negative `e` needs a unit constant term.
pub fn power(a: &TruncatedSeries, e: i64) -> Result<TruncatedSeries, SeriesError> {
    let order = a.order();
    let one = TruncatedSeries::one(order, a.ring());
    if e == 0 {
        return Ok(one);
    }
    let k = e.unsigned_abs();
    let nnz = a.nonzero_count() as u128;
    let log = u128::from(64 - k.leading_zeros());
    // Repeated sparse passes cost k * nnz * order; squaring costs ~log k dense products.
    let repeated = u128::from(k) * nnz <= 2 * log * (order as u128 + 1);
    if e > 0 {
        if repeated {
            let mut acc = a.clone();
            for _ in 1..k {
                acc = mul_by_sparse(&acc, a, order);
            }
            Ok(acc)
        } else {
            Ok(power_by_squaring(a, k))
        }
    } else if repeated {
        let mut acc = one;
        for _ in 0..k {
            acc = divide(&acc, a)?;
        }
        Ok(acc)
    } else {
        Ok(power_by_squaring(&invert(a)?, k))
    }
}

fn power_by_squaring(a: &TruncatedSeries, mut k: u64) -> TruncatedSeries {
    let mut base = a.clone();
    let mut acc: Option<TruncatedSeries> = None;
    while k > 0 {
        if k & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(x) => mul(&x, &base).expect("same ring"),
            });
        }
        k >>= 1;
        if k > 0 {
            base = mul(&base, &base).expect("same ring");
        }
    }
    acc.expect("positive exponent")
}

/// `prod_{d | M} (q^d; q^d)_inf^{r_d}` through `q^order`.
///
/// Positive exponents are applied as repeated sparse multiplications by the
/// dilated pentagonal series and negative ones as repeated sparse divisions,
/// so no dense intermediate power is ever formed.
pub fn eta_quotient(
    spec: &DivisorVector,
    order: usize,
    ring: CoefficientRing,
) -> Result<TruncatedSeries, SeriesError> {
    let mut acc = TruncatedSeries::one(order, ring);
    for (delta, r) in spec.iter() {
        if r == 0 || delta as u128 > order as u128 {
            // (q^d; q^d)_inf is 1 + O(q^d), invisible below q^d.
            continue;
        }
        let factor = pentagonal_series(delta, order, ring)?;
        for _ in 0..r.unsigned_abs() {
            acc = if r > 0 { mul_by_sparse(&acc, &factor, order) } else { divide(&acc, &factor)? };
        }
    }
    Ok(acc)
}

/// The series `sum_n a(step*n + offset) q^n`.
pub fn extract_progression(a: &TruncatedSeries, step: u64, offset: u64) -> Result<TruncatedSeries, SeriesError> {
    let order = a.order();
    if step == 0 || offset >= step || offset as u128 > order as u128 {
        return Err(SeriesError::InvalidProgression { step, offset, order });
    }
    let (step, offset) = (step as usize, offset as usize);
    let indices = (offset..=order).step_by(step);
    Ok(match &a.coeffs {
        Coeffs::Integers(v) => TruncatedSeries::from_bigints(indices.map(|i| v[i].clone()).collect()),
        Coeffs::Residues { modulus, values } => {
            TruncatedSeries::from_residues(*modulus, indices.map(|i| values[i]).collect())
        }
    })
}

//! Instance documents: a claim about `f`, the auxiliary level and vector for
//! the cusp conditions, an oracle range, optional overrides of the derived
//! instance parameters, and congruences cited without proof.
//!
//! ```toml
//! [claim]
//! sequence = "f"
//! A = 1250
//! B = 125
//! u = 125
//!
//! [hints]
//! N = 10
//! r_prime = { 1 = 13, 2 = 0, 5 = 0, 10 = 0 }
//!
//! [oracle]
//! max_index = 50000
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{DivisorVector, RawDivisorMap};
use crate::prover::{InstanceHints, Overrides};
use crate::tspp::{g_alpha_p_spec, CongruenceClaim, Sequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },
}

fn field_err(field: &'static str, message: impl Into<String>) -> InstanceError {
    InstanceError::Field { field, message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HintsSection {
    #[serde(rename = "N")]
    pub group_level: u64,
    pub r_prime: RawDivisorMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub max_index: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverridesSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    /// Exponents over the divisors of the companion level (`2p`, or 4 when `p = 2`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<RawDivisorMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CitationSection {
    pub label: String,
    pub claim: CongruenceClaim,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub claim: CongruenceClaim,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hints: Option<HintsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overrides: Option<OverridesSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub citations: Vec<CitationSection>,
}

/// A citation ready to be checked empirically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Citation {
    pub label: String,
    pub claim: CongruenceClaim,
}

/// An instance document after every field has been checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedInstance {
    pub claim: CongruenceClaim,
    pub hints: Option<InstanceHints>,
    pub overrides: Overrides,
    pub oracle_max: usize,
    pub citations: Vec<Citation>,
}

fn check_claim(claim: &CongruenceClaim, field: &'static str) -> Result<(), InstanceError> {
    if claim.step == 0 {
        return Err(field_err(field, "A must be positive"));
    }
    if claim.offset >= claim.step {
        return Err(field_err(field, format!("B = {} must be below A = {}", claim.offset, claim.step)));
    }
    if claim.u < 2 {
        return Err(field_err(field, format!("u = {} must be at least 2", claim.u)));
    }
    Ok(())
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        toml::from_str(text).map_err(|e| InstanceError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("instance serializes")
    }

    pub fn validate(&self) -> Result<ValidatedInstance, InstanceError> {
        check_claim(&self.claim, "claim")?;
        if self.claim.sequence != Sequence::F {
            return Err(field_err("claim.sequence", format!("only claims about f can be proved, got {}", self.claim.sequence)));
        }

        let hints = match &self.hints {
            None => None,
            Some(h) => {
                if h.group_level == 0 {
                    return Err(field_err("hints.N", "must be positive"));
                }
                let r_prime = h
                    .r_prime
                    .clone()
                    .into_vector(h.group_level)
                    .map_err(|e| field_err("hints.r_prime", e.to_string()))?;
                Some(InstanceHints { group_level: h.group_level, r_prime })
            }
        };

        let overrides = match &self.overrides {
            None => Overrides::default(),
            Some(o) => validate_overrides(o)?,
        };

        let oracle_max = self.oracle.as_ref().map_or(0, |o| o.max_index);
        let oracle_max = usize::try_from(oracle_max).map_err(|_| field_err("oracle.max_index", "too large"))?;

        let mut citations = Vec::with_capacity(self.citations.len());
        for c in &self.citations {
            check_claim(&c.claim, "citations.claim")?;
            if oracle_max == 0 {
                return Err(field_err("oracle.max_index", "citations need a positive empirical range"));
            }
            citations.push(Citation { label: c.label.clone(), claim: c.claim });
        }

        Ok(ValidatedInstance { claim: self.claim, hints, overrides, oracle_max, citations })
    }
}

fn validate_overrides(o: &OverridesSection) -> Result<Overrides, InstanceError> {
    if o.alpha == Some(0) {
        return Err(field_err("overrides.alpha", "must be at least 1"));
    }
    if o.m == Some(0) {
        return Err(field_err("overrides.m", "must be positive"));
    }
    if let (Some(m), Some(t)) = (o.m, o.t) {
        if t >= m {
            return Err(field_err("overrides.t", format!("t = {t} must be below m = {m}")));
        }
    }
    let r = match &o.r {
        None => None,
        Some(raw) => {
            let (alpha, p) = match (o.alpha, o.p) {
                (alpha, Some(p)) => (alpha.unwrap_or(1), p),
                _ => return Err(field_err("overrides.r", "needs overrides.p to fix the level 2p")),
            };
            let level = g_alpha_p_spec(alpha, p).map_err(|e| field_err("overrides.p", e.to_string()))?.level();
            Some(raw.clone().into_vector(level).map_err(|e| field_err("overrides.r", e.to_string()))?)
        }
    };
    Ok(Overrides { alpha: o.alpha, p: o.p, m: o.m, t: o.t, r })
}

impl From<&DivisorVector> for HintsSection {
    fn from(v: &DivisorVector) -> Self {
        HintsSection { group_level: v.level(), r_prime: v.into() }
    }
}

/// Standalone eta-quotient description, e.g. `M = 10` and
/// `r = { 1 = 123, 2 = 3, 5 = -25, 10 = 0 }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaSpecFile {
    #[serde(rename = "M")]
    pub level: u64,
    pub r: RawDivisorMap,
}

impl EtaSpecFile {
    pub fn parse(text: &str) -> Result<DivisorVector, InstanceError> {
        let file: EtaSpecFile = toml::from_str(text).map_err(|e| InstanceError::Parse(e.to_string()))?;
        if file.level == 0 {
            return Err(field_err("M", "must be positive"));
        }
        file.r.into_vector(file.level).map_err(|e| field_err("r", e.to_string()))
    }
}

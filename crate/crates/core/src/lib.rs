//! Congruences for 1-shell totally symmetric plane partitions.
//!
//! * [`qseries`]: truncated power series over `Z` and `Z/uZ`, eta quotients.
//! * [`tspp`]: the counting function `f`, its companions `g` and
//!   `g_{alpha,p}`, and the reduction of `f`-claims to eta-quotient claims.
//! * [`radu`]: orbits, admissibility, cusp conditions, the bound `v` and the
//!   finite coefficient check, producing a [`radu::Certificate`].
//! * [`prover`]: end-to-end proofs, combination of coprime moduli, the
//!   brute-force oracle and the regression suite.
//! * [`instance`]: the instance-file schema consumed by the CLI.

pub mod arith;
pub mod instance;
pub mod prover;
pub mod qseries;
pub mod radu;
pub mod tspp;

pub use arith::DivisorVector;
pub use prover::{ProofReport, ProofVerdict};
pub use qseries::{CoefficientRing, TruncatedSeries};
pub use radu::{Certificate, RaduInstance, Verdict};
pub use tspp::{CongruenceClaim, Sequence};

//! Exact arithmetic engine for base-`b` digit-sum identities.
//!
//! The crate computes the alpha/beta weight sequences attached to the
//! digit-sum function `s_b(n)`, evaluates weighted finite-difference and
//! power-sum identities over the cyclotomic field `Q(zeta_b)` both by brute
//! force and in closed form, and builds generalized Prouhet-Tarry-Escott
//! partitions together with their power-sum certificates.
//!
//! Everything is exact: integers and rationals are arbitrary precision and
//! roots of unity are represented algebraically, never numerically.

pub mod arith;
pub mod bernoulli;
pub mod digits;
mod error;
pub mod findiff;
pub mod identities;
pub mod poly;
pub mod pte;
pub mod random;
pub mod weights;

pub use arith::{xi, BigInt, CycloField, CycloNum, Rational};
pub use error::{Error, Result};
pub use identities::{CostLimit, IdentityReport, MultiIndexConfig};
pub use poly::RationalPoly;
pub use pte::{PteCertificate, PtePartition, ReducedPartition};
pub use weights::{PolyOverCyclo, WeightKind, WeightTable};

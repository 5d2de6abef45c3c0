//! Exact scalar arithmetic.
//!
//! Integers and rationals come from `num-bigint` / `num-rational`; the
//! cyclotomic field `Q(zeta_b)` is implemented here as polynomials in the
//! indeterminate reduced modulo the `b`-th cyclotomic polynomial.

mod cyclo;
mod cyclotomic;
mod rational;

pub use cyclo::{a_constant, primitive_root, xi, CycloField, CycloNum};
pub use cyclotomic::{cyclotomic_polynomial, euler_phi};
pub use rational::{
    binomial, factorial, format_rational, parse_rational, rat, rat_int, BigInt, Rational,
};

//! Shared fixtures for the criterion benchmarks.

use digitsum_core::random::SmallRationals;
use digitsum_core::{Rational, RationalPoly};

/// A reproducible random polynomial of the given degree.
pub fn fixture_poly(degree: usize, seed: u64) -> RationalPoly {
    SmallRationals::new(seed).poly(degree)
}

/// A reproducible pair of nonzero rationals.
pub fn fixture_point(seed: u64) -> (Rational, Rational) {
    let mut g = SmallRationals::new(seed);
    (g.next_rational(), g.next_nonzero())
}

//! Seeded generator of small-height rationals used for randomized
//! certificates. Numerators and denominators are drawn from `[-9, 9]`, so a
//! given seed always reproduces the same inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{rat, Rational};
use crate::poly::RationalPoly;

pub const DEFAULT_SEED: u64 = 0x5eed_d191;

const HEIGHT: i64 = 9;

#[derive(Debug, Clone)]
pub struct SmallRationals {
    rng: ChaCha8Rng,
}

impl SmallRationals {
    pub fn new(seed: u64) -> Self {
        SmallRationals { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_rational(&mut self) -> Rational {
        let n = self.rng.random_range(-HEIGHT..=HEIGHT);
        let d = self.rng.random_range(1..=HEIGHT);
        rat(n, d)
    }

    pub fn next_nonzero(&mut self) -> Rational {
        loop {
            let q = self.next_rational();
            if q != rat(0, 1) {
                return q;
            }
        }
    }

    /// A rational different from every entry of `avoid`.
    pub fn next_avoiding(&mut self, avoid: &[Rational]) -> Rational {
        loop {
            let q = self.next_rational();
            if !avoid.contains(&q) {
                return q;
            }
        }
    }

    /// Random polynomial of exactly the given degree.
    pub fn poly(&mut self, degree: usize) -> RationalPoly {
        let mut c: Vec<Rational> = (0..degree).map(|_| self.next_rational()).collect();
        c.push(self.next_nonzero());
        RationalPoly::new(c)
    }

    pub fn index(&mut self, below: u64) -> u64 {
        self.rng.random_range(0..below)
    }
}

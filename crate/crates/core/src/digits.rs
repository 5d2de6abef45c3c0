//! Base-`b` digit sums `s_b(n)` and the root-of-unity weights
//! `xi^{s_b(n)}` built on them.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{CycloField, CycloNum};
use crate::error::{Error, Result};

pub(crate) fn check_base(b: u32) -> Result<()> {
    if b < 2 {
        Err(Error::InvalidBase(b as u64))
    } else {
        Ok(())
    }
}

/// Sum of the base-`b` digits of `n`.
pub fn digit_sum(n: u64, b: u32) -> Result<u32> {
    check_base(b)?;
    Ok(digit_sum_unchecked(n, b))
}

#[inline]
pub(crate) fn digit_sum_unchecked(mut n: u64, b: u32) -> u32 {
    let b = b as u64;
    let mut s = 0u32;
    while n > 0 {
        s += (n % b) as u32;
        n /= b;
    }
    s
}

/// A digit-sum request on an arbitrary-precision argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSumQuery {
    n: BigUint,
    b: u32,
}

impl DigitSumQuery {
    pub fn new(n: BigUint, b: u32) -> Result<Self> {
        check_base(b)?;
        Ok(DigitSumQuery { n, b })
    }

    pub fn digit_sum(&self) -> BigUint {
        let base = BigUint::from(self.b);
        let mut n = self.n.clone();
        let mut s = BigUint::zero();
        while !n.is_zero() {
            let (q, r) = n.div_rem(&base);
            s += r;
            n = q;
        }
        s
    }
}

/// `xi^{s_b(n)}` for the canonical primitive root `xi` of order `b`.
pub fn xi_digit_weight(n: u64, b: u32) -> Result<CycloNum> {
    check_base(b)?;
    Ok(CycloField::get(b)?.gen_pow(digit_sum_unchecked(n, b) as i64))
}

/// The Prouhet class of `n`: `s_b(n) mod b`.
pub fn thue_morse_class(n: u64, b: u32) -> Result<u32> {
    Ok(digit_sum(n, b)? % b)
}

/// Streams `s_b(0), s_b(1), ...` with a carry-aware increment, so each step
/// costs amortised O(1) instead of a full divmod chain.
#[derive(Debug, Clone)]
pub struct DigitSums {
    b: u32,
    digits: Vec<u32>,
    sum: u32,
    started: bool,
}

impl DigitSums {
    pub fn new(b: u32) -> Result<Self> {
        check_base(b)?;
        Ok(DigitSums { b, digits: Vec::new(), sum: 0, started: false })
    }
}

impl Iterator for DigitSums {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if !self.started {
            self.started = true;
            return Some(0);
        }
        for d in self.digits.iter_mut() {
            if *d + 1 < self.b {
                *d += 1;
                self.sum += 1;
                return Some(self.sum);
            }
            self.sum -= *d;
            *d = 0;
        }
        self.digits.push(1);
        self.sum += 1;
        Some(self.sum)
    }
}

/// `s_b(n)` for every `n < len`.
pub fn digit_sum_table(b: u32, len: usize) -> Result<Vec<u32>> {
    Ok(DigitSums::new(b)?.take(len).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(digit_sum(7, 2), Ok(3));
        assert_eq!(digit_sum(0, 10), Ok(0));
        assert_eq!(digit_sum(5, 1), Err(Error::InvalidBase(1)));
        assert_eq!(thue_morse_class(8, 3), Ok(1));
        let tm: Vec<u32> = (0..8).map(|n| thue_morse_class(n, 2).unwrap()).collect();
        assert_eq!(tm, [0, 1, 1, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn weights() {
        let f2 = CycloField::get(2).unwrap();
        assert_eq!(xi_digit_weight(3, 2).unwrap(), f2.one());
        assert_eq!(xi_digit_weight(4, 2).unwrap(), f2.from_int(-1));
        assert!(xi_digit_weight(5, 3).unwrap().is_one());
    }

    #[test]
    fn leading_digit_recurrence_exhaustive() {
        for b in 2..=6u32 {
            for n_len in 1..=4u32 {
                let block = (b as u64).pow(n_len - 1);
                for n in 0..block {
                    for k in 0..b as u64 {
                        assert_eq!(
                            digit_sum(n + k * block, b).unwrap(),
                            k as u32 + digit_sum(n, b).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn binary_top_bit_flips_class() {
        for big_n in 1..=8u32 {
            for n in 0..(1u64 << big_n) {
                let a = thue_morse_class(n, 2).unwrap();
                let c = thue_morse_class(n + (1 << big_n), 2).unwrap();
                assert_eq!(a ^ 1, c);
            }
        }
    }

    #[test]
    fn streaming_table_matches_divmod() {
        for b in 2..=7 {
            let t = digit_sum_table(b, 3000).unwrap();
            for (n, s) in t.iter().enumerate() {
                assert_eq!(*s, digit_sum(n as u64, b).unwrap());
            }
        }
    }

    #[test]
    fn big_argument() {
        let n = BigUint::parse_bytes(b"99999999999999999999999999", 10).unwrap();
        assert_eq!(DigitSumQuery::new(n, 10).unwrap().digit_sum(), BigUint::from(26u32 * 9));
        assert!(DigitSumQuery::new(BigUint::zero(), 0).is_err());
    }

    #[test]
    fn digit_sum_is_bounded_by_length() {
        for b in 2..=9u32 {
            for n in 0..2000u64 {
                let mut len = 0;
                let mut m = n;
                while m > 0 {
                    len += 1;
                    m /= b as u64;
                }
                assert!(digit_sum(n, b).unwrap() <= (b - 1) * len);
            }
        }
    }
}

//! Dense univariate polynomials with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::arith::{binomial, format_rational, rat_int, Rational};

/// Coefficients constant term first, with no trailing zeros (the zero
/// polynomial has an empty coefficient vector).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * q).collect())
    }

    /// `p(a*x + c)`.
    pub fn compose_affine(&self, a: &Rational, c: &Rational) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![Rational::zero(); n];
        let mut a_pow = vec![Rational::one(); n];
        let mut c_pow = vec![Rational::one(); n];
        for i in 1..n {
            a_pow[i] = &a_pow[i - 1] * a;
            c_pow[i] = &c_pow[i - 1] * c;
        }
        for (d, coeff) in self.coeffs.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            // (a x + c)^d = sum_i C(d,i) a^i c^(d-i) x^i
            for i in 0..=d {
                let term = rat_int(binomial(d as u64, i as u64)) * &a_pow[i] * &c_pow[d - i];
                out[i] += coeff * term;
            }
        }
        Self::new(out)
    }

    /// `(x + c)^p` expanded.
    pub fn shifted_power(c: &Rational, p: usize) -> Self {
        Self::monomial(Rational::one(), p).compose_affine(&Rational::one(), c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat_int(k as i64))
                .collect(),
        )
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            if k == 0 || !mag.is_one() {
                f.write_str(&format_rational(&mag))?;
                if k > 0 {
                    f.write_str("*")?;
                }
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(v: &[(i64, i64)]) -> RationalPoly {
        RationalPoly::new(v.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn trims_and_evaluates() {
        let q = p(&[(1, 1), (0, 1), (2, 1), (0, 1)]);
        assert_eq!(q.degree(), Some(2));
        assert_eq!(q.eval(&rat(1, 2)), rat(3, 2));
        assert_eq!(RationalPoly::new(vec![rat(0, 1)]).degree(), None);
    }

    #[test]
    fn affine_composition_matches_pointwise() {
        let q = p(&[(1, 3), (-2, 1), (0, 1), (5, 7)]);
        let a = rat(-3, 2);
        let c = rat(4, 5);
        let r = q.compose_affine(&a, &c);
        for x in [rat(0, 1), rat(1, 1), rat(-7, 3), rat(9, 4)] {
            assert_eq!(r.eval(&x), q.eval(&(&a * &x + &c)));
        }
    }

    #[test]
    fn arithmetic_and_display() {
        let a = p(&[(1, 1), (1, 1)]);
        let b = p(&[(-1, 1), (1, 1)]);
        assert_eq!(&a * &b, p(&[(-1, 1), (0, 1), (1, 1)]));
        assert!((&a - &a).is_zero());
        assert_eq!((&a * &b).to_string(), "x^2 - 1");
        assert_eq!(p(&[(1, 6), (-1, 1), (1, 1)]).to_string(), "x^2 - x + 1/6");
        assert_eq!(p(&[(0, 1), (3, 1), (-3, 2)]).derivative(), p(&[(3, 1), (-3, 1)]));
    }
}

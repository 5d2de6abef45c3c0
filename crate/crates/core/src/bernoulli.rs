//! Bernoulli numbers and polynomials, Faulhaber sums, and the closed form
//! of `Delta_k^N B_{N+1}(a + k*step)`.
//!
//! Convention: `B_1 = -1/2`, so `B_1(x) = x - 1/2`.

use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::arith::{binomial, factorial, rat, rat_int, Rational};
use crate::error::{Error, Result};
use crate::poly::RationalPoly;

fn table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// `B_0, ..., B_p` via the Akiyama-Tanigawa recurrence, memoised.
pub fn bernoulli_numbers(p: usize) -> Vec<Rational> {
    {
        let t = table().read().unwrap();
        if t.len() > p {
            return t[..=p].to_vec();
        }
    }
    let mut out = Vec::with_capacity(p + 1);
    let mut a: Vec<Rational> = Vec::with_capacity(p + 1);
    for m in 0..=p {
        a.push(rat(1, m as i64 + 1));
        for j in (1..=m).rev() {
            a[j - 1] = rat_int(j as i64) * (&a[j - 1] - &a[j]);
        }
        // The recurrence produces B_1 = +1/2.
        out.push(if m == 1 { -a[0].clone() } else { a[0].clone() });
    }
    let mut t = table().write().unwrap();
    if t.len() < out.len() {
        *t = out.clone();
    }
    out
}

/// `B_p(x) = sum_j C(p, j) B_j x^{p-j}`.
pub fn bernoulli_poly(p: usize) -> RationalPoly {
    let numbers = bernoulli_numbers(p);
    let mut coeffs = vec![Rational::zero(); p + 1];
    for (j, bj) in numbers.iter().enumerate() {
        coeffs[p - j] = rat_int(binomial(p as u64, j as u64)) * bj;
    }
    RationalPoly::new(coeffs)
}

/// `sum_{i=r}^{s-1} (a + step*i)^p` through Bernoulli polynomials:
/// `step^p/(p+1) [B_{p+1}(a/step + s) - B_{p+1}(a/step + r)]`.
pub fn faulhaber_sum(a: &Rational, step: &Rational, r: i64, s: i64, p: u32) -> Result<Rational> {
    if step.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if r > s {
        return Err(Error::invalid(format!("empty range needs r <= s, got r={r}, s={s}")));
    }
    let bp = bernoulli_poly(p as usize + 1);
    let shift = a / step;
    let diff = bp.eval(&(&shift + rat_int(s))) - bp.eval(&(&shift + rat_int(r)));
    Ok(step.pow(p as i32) / rat_int(p as i64 + 1) * diff)
}

/// `Delta_k^N B_{N+1}(a + k*step) = (N+1)! step^N (a + k*step + (step*N - 1)/2)`.
pub fn delta_n_bernoulli(a: &Rational, step: &Rational, k: i64, order: u32) -> Rational {
    let n = rat_int(order as i64);
    let bracket = a + rat_int(k) * step + (step * &n - Rational::one()) / rat_int(2);
    rat_int(factorial(order as u64 + 1)) * step.pow(order as i32) * bracket
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findiff::forward_diff_n;
    use crate::random::SmallRationals;

    fn p(v: &[(i64, i64)]) -> RationalPoly {
        RationalPoly::new(v.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn low_order_polynomials() {
        assert_eq!(bernoulli_poly(0), p(&[(1, 1)]));
        assert_eq!(bernoulli_poly(1), p(&[(-1, 2), (1, 1)]));
        assert_eq!(bernoulli_poly(2), p(&[(1, 6), (-1, 1), (1, 1)]));
        assert_eq!(bernoulli_poly(3), p(&[(0, 1), (1, 2), (-3, 2), (1, 1)]));
    }

    #[test]
    fn known_numbers() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[10], rat(5, 66));
        assert_eq!(b[12], rat(-691, 2730));
        assert!(b[3].is_zero() && b[11].is_zero());
    }

    #[test]
    fn difference_property() {
        for k in 1..=10usize {
            let bp = bernoulli_poly(k);
            let shifted = bp.compose_affine(&Rational::one(), &Rational::one());
            let want = RationalPoly::monomial(rat_int(k as i64), k - 1);
            assert_eq!(&shifted - &bp, want);
        }
    }

    #[test]
    fn faulhaber_edge_cases() {
        let one = Rational::one();
        assert_eq!(faulhaber_sum(&rat(3, 2), &one, 4, 4, 5).unwrap(), Rational::zero());
        for n in 0..20 {
            assert_eq!(faulhaber_sum(&Rational::zero(), &one, 0, n, 1).unwrap(), rat(n * (n - 1) / 2, 1));
        }
        assert_eq!(faulhaber_sum(&one, &Rational::zero(), 0, 3, 2), Err(Error::DivisionByZero));
        assert!(faulhaber_sum(&one, &one, 3, 2, 2).is_err());
    }

    #[test]
    fn faulhaber_matches_direct_sums() {
        let mut g = SmallRationals::new(99);
        for _ in 0..60 {
            let a = g.next_rational();
            let step = g.next_nonzero();
            let r = g.index(11) as i64 - 5;
            let s = r + g.index(8) as i64;
            let pw = g.index(7) as u32;
            let direct: Rational =
                (r..s).map(|i| (&a + &step * rat_int(i)).pow(pw as i32)).fold(Rational::zero(), |x, y| x + y);
            assert_eq!(faulhaber_sum(&a, &step, r, s, pw).unwrap(), direct);
        }
    }

    #[test]
    fn delta_closed_form_examples() {
        let one = Rational::one();
        let zero = Rational::zero();
        assert_eq!(delta_n_bernoulli(&rat(1, 3), &rat(2, 1), 2, 0), rat(1, 3) + rat(4, 1) - rat(1, 2));
        assert_eq!(delta_n_bernoulli(&zero, &one, 0, 1), zero);
        let b2 = bernoulli_poly(2);
        assert_eq!(b2.eval(&one) - b2.eval(&zero), zero);
    }

    #[test]
    fn delta_closed_form_matches_iterated_differences() {
        let mut g = SmallRationals::new(17);
        for order in 0..=6u32 {
            let bp = bernoulli_poly(order as usize + 1);
            for _ in 0..5 {
                let a = g.next_rational();
                let step = g.next_rational();
                let k = g.index(7) as i64 - 3;
                assert_eq!(forward_diff_n(&bp, &a, &step, k, order), delta_n_bernoulli(&a, &step, k, order));
            }
        }
    }
}

use std::time::Instant;

use num_traits::Zero;

use super::{CostLimit, IdentityReport, Params};
use crate::arith::{rat_int, BigInt, CycloField, Rational};
use crate::bernoulli::{bernoulli_poly, delta_n_bernoulli, faulhaber_sum};
use crate::digits::{check_base, digit_sum_table, xi_digit_weight};
use crate::error::{Error, Result};
use crate::findiff::forward_diff_n;
use crate::poly::RationalPoly;
use crate::weights::{
    alpha_table, beta_from_convolution, beta_moment0, beta_moment1, beta_table, beta_table_shared, pow_u64,
    table_len, xi_from_table, MAX_TABLE_LEN,
};

fn check_table(b: u32, order: u32, limit: CostLimit) -> Result<()> {
    let len = table_len(b, order)?;
    if len > MAX_TABLE_LEN {
        return Err(Error::CostExceeded { what: "weight table", needed: len as u128, cap: MAX_TABLE_LEN });
    }
    limit.charge("weight table", len as u128)
}

/// Zeroth and first moments of the order `N-1` beta table against their
/// closed forms.
pub fn verify_beta_moments(b: u32, order: u32, limit: CostLimit) -> Result<IdentityReport> {
    let started = Instant::now();
    check_base(b)?;
    if order == 0 {
        return Err(Error::invalid("moments need N >= 1"));
    }
    check_table(b, order - 1, limit)?;
    let table = beta_table_shared(b, order - 1)?;
    let lhs = vec![table.moment0(), table.moment1()];
    let rhs = vec![beta_moment0(b, order)?, beta_moment1(b, order)?];
    let params = Params::new().int("b", b).int("N", order);
    Ok(IdentityReport::new("beta-moments", params, lhs, rhs, started))
}

/// `beta_n^(N) = sum_k C(n-k+N, N) xi^{s_b(k)}` against the expanded table,
/// entrywise for `n < b^N`.
pub fn verify_beta_dual1(b: u32, order: u32, limit: CostLimit) -> Result<IdentityReport> {
    let started = Instant::now();
    check_base(b)?;
    check_table(b, order, limit)?;
    let prefix = pow_u64(b, order)? as u128;
    limit.charge("first convolution", prefix * (prefix + 1) / 2)?;
    let lhs = beta_from_convolution(b, order)?;
    let table = beta_table_shared(b, order)?;
    let rhs = (0..lhs.len()).map(|n| table.get(n as i64)).collect();
    let params = Params::new().int("b", b).int("N", order);
    Ok(IdentityReport::new("beta-dual1", params, lhs, rhs, started))
}

/// `xi^{s_b(n)} = sum_k C(N,k) (-1)^k beta_{n-k}^(N-1)`, entrywise for
/// `n < b^N`.
pub fn verify_beta_dual2(b: u32, order: u32, limit: CostLimit) -> Result<IdentityReport> {
    let started = Instant::now();
    check_base(b)?;
    if order == 0 {
        return Err(Error::invalid("the second convolution needs N >= 1"));
    }
    check_table(b, order - 1, limit)?;
    let count = pow_u64(b, order)?;
    limit.charge("second convolution", count as u128 * (order as u128 + 1))?;
    let table = beta_table_shared(b, order - 1)?;
    let lhs = (0..count).map(|n| xi_from_table(&table, n)).collect();
    let rhs = (0..count).map(|n| xi_digit_weight(n, b)).collect::<Result<_>>()?;
    let params = Params::new().int("b", b).int("N", order);
    Ok(IdentityReport::new("beta-dual2", params, lhs, rhs, started))
}

/// At `b = 2` the beta weights are the alpha weights.
pub fn verify_beta_alpha(order: u32, limit: CostLimit) -> Result<IdentityReport> {
    let started = Instant::now();
    check_table(2, order, limit)?;
    let lhs = beta_table(2, order)?.values().to_vec();
    let rhs = alpha_table(order)?.values().to_vec();
    let params = Params::new().int("N", order);
    Ok(IdentityReport::new("beta-alpha", params, lhs, rhs, started))
}

/// `sum_k alpha_k^(N-1) = 2^{N(N-1)/2}` and
/// `sum_k k alpha_k^(N-1) = 2^{N(N-1)/2} (2^{N-1} - (N+1)/2)`.
pub fn verify_alpha_moments(order: u32, limit: CostLimit) -> Result<IdentityReport> {
    let started = Instant::now();
    if order == 0 {
        return Err(Error::invalid("moments need N >= 1"));
    }
    check_table(2, order - 1, limit)?;
    let table = alpha_table(order - 1)?;
    let field = table.field().clone();
    let m0 = rat_int(BigInt::from(2u32).pow(order * (order - 1) / 2));
    let m1 = &m0 * (rat_int(BigInt::from(2u32).pow(order - 1)) - Rational::new((order + 1).into(), 2.into()));
    let lhs = vec![table.moment0(), table.moment1()];
    let rhs = vec![field.from_rational(m0), field.from_rational(m1)];
    let params = Params::new().int("N", order);
    Ok(IdentityReport::new("alpha-moments", params, lhs, rhs, started))
}

/// Faulhaber's formula against direct summation of `(a + step i)^p`.
pub fn verify_faulhaber(a: &Rational, step: &Rational, r: i64, s: i64, p: u32, limit: CostLimit) -> Result<IdentityReport> {
    let started = Instant::now();
    if r > s {
        return Err(Error::invalid(format!("empty-or-reversed range {r}..{s}")));
    }
    limit.charge("faulhaber", (s - r) as u128)?;
    let field = CycloField::get(1)?;
    let mut direct = Rational::zero();
    for i in r..s {
        direct += (a + step * rat_int(i)).pow(p as i32);
    }
    let closed = faulhaber_sum(a, step, r, s, p)?;
    let params = Params::new().rat("a", a).rat("step", step).int("r", r).int("s", s).int("p", p);
    Ok(IdentityReport::new(
        "faulhaber",
        params,
        vec![field.from_rational(direct)],
        vec![field.from_rational(closed)],
        started,
    ))
}

/// `Delta^N B_{N+1}` by iterated differencing against its closed form.
pub fn verify_delta_bernoulli(a: &Rational, step: &Rational, k: i64, order: u32) -> Result<IdentityReport> {
    let started = Instant::now();
    let field = CycloField::get(1)?;
    let b = bernoulli_poly(order as usize + 1);
    let lhs = forward_diff_n(&b, a, step, k, order);
    let rhs = delta_n_bernoulli(a, step, k, order);
    let params = Params::new().rat("a", a).rat("step", step).int("k", k).int("N", order);
    Ok(IdentityReport::new(
        "delta-bernoulli",
        params,
        vec![field.from_rational(lhs)],
        vec![field.from_rational(rhs)],
        started,
    ))
}

/// `sum_{n<b^N} xi^{s_b(n)} f(s_b(n) x + n y) = 0` for `deg f < N`. Higher
/// degrees are evaluated too and generally report a mismatch.
pub fn verify_generalized_pte(
    b: u32,
    order: u32,
    f: &RationalPoly,
    x: &Rational,
    y: &Rational,
    limit: CostLimit,
) -> Result<IdentityReport> {
    let started = Instant::now();
    check_base(b)?;
    let count = pow_u64(b, order)?;
    limit.charge("generalized-pte", count as u128)?;
    let field = CycloField::get(b)?;
    let mut acc = vec![Rational::zero(); b as usize];
    for (n, &s) in digit_sum_table(b, count as usize)?.iter().enumerate() {
        let u = x * rat_int(s) + y * rat_int(n as i64);
        acc[(s % b) as usize] += f.eval(&u);
    }
    let lhs = field.combine_residues(&acc);
    let params = Params::new().int("b", b).int("N", order).poly("f", f).rat("x", x).rat("y", y);
    Ok(IdentityReport::new("generalized-pte", params, vec![lhs], vec![field.zero()], started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::random::SmallRationals;

    #[test]
    fn weight_table_identities() {
        let lim = CostLimit::default();
        for b in 2..=5 {
            for n in 1..=3 {
                assert!(verify_beta_moments(b, n, lim).unwrap().equal, "moments b={b} N={n}");
            }
        }
        for b in 2..=4 {
            for n in 1..=3 {
                assert!(verify_beta_dual1(b, n, lim).unwrap().equal, "dual1 b={b} N={n}");
                assert!(verify_beta_dual2(b, n, lim).unwrap().equal, "dual2 b={b} N={n}");
            }
        }
        for n in 0..=5 {
            assert!(verify_beta_alpha(n, lim).unwrap().equal);
        }
        for n in 1..=5 {
            assert!(verify_alpha_moments(n, lim).unwrap().equal);
        }
        assert!(verify_beta_moments(2, 0, lim).is_err());
    }

    #[test]
    fn bernoulli_identities() {
        let mut g = SmallRationals::new(2);
        for _ in 0..20 {
            let a = g.next_rational();
            let step = g.next_nonzero();
            let r = g.index(5) as i64 - 2;
            let s = r + g.index(6) as i64;
            let p = g.index(6) as u32;
            assert!(verify_faulhaber(&a, &step, r, s, p, CostLimit::default()).unwrap().equal);
        }
        for n in 0..=6 {
            let k = g.index(5) as i64;
            assert!(verify_delta_bernoulli(&g.next_rational(), &g.next_nonzero(), k, n).unwrap().equal);
        }
    }

    #[test]
    fn generalized_pte_vanishes() {
        let mut g = SmallRationals::new(6);
        for (b, n) in [(2, 3), (3, 2), (4, 2), (2, 5)] {
            let f = g.poly(n as usize - 1);
            let r = verify_generalized_pte(b, n, &f, &g.next_rational(), &g.next_rational(), CostLimit::default());
            assert!(r.unwrap().equal);
        }
        let cube = RationalPoly::monomial(rat(1, 1), 3);
        let r = verify_generalized_pte(2, 3, &cube, &rat(1, 1), &rat(1, 1), CostLimit::default()).unwrap();
        assert!(!r.equal);
    }
}

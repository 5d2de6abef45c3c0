use std::time::Instant;

use num_traits::{One, Zero};

use super::{for_each_tuple, CostLimit, IdentityReport, MultiIndexConfig, Params};
use crate::arith::{a_constant, binomial, factorial, rat_int, BigInt, CycloField, CycloNum, Rational};
use crate::digits::{check_base, digit_sum_table};
use crate::error::{Error, Result};
use crate::weights::pow_u64;

/// `S_{N,l} = sum_{n<b^N} xi^{s_b(n)} (s_b(n) x + n y)^l` by brute force.
pub fn s_sum(b: u32, order: u32, l: u32, x: &Rational, y: &Rational, limit: CostLimit) -> Result<CycloNum> {
    check_base(b)?;
    let count = pow_u64(b, order)?;
    limit.charge("s-sum", count as u128)?;
    let field = CycloField::get(b)?;
    let sums = digit_sum_table(b, count as usize)?;
    let mut acc = vec![Rational::zero(); b as usize];
    for (n, &s) in sums.iter().enumerate() {
        let u = x * rat_int(s) + y * rat_int(n as i64);
        acc[(s % b) as usize] += u.pow(l as i32);
    }
    Ok(field.combine_residues(&acc))
}

/// `S_{N,N} = b^N N! / (xi-1)^N * prod_{l<N} (x + b^l y)`.
pub fn s_closed_form(b: u32, order: u32, x: &Rational, y: &Rational) -> Result<CycloNum> {
    check_base(b)?;
    let field = CycloField::get(b)?;
    let mut scale = rat_int(num_traits::pow(BigInt::from(b), order as usize)) * rat_int(factorial(order as u64));
    let mut bl = Rational::one();
    for _ in 0..order {
        scale *= x + y * &bl;
        bl *= rat_int(b);
    }
    let xi_minus_one = &field.gen_pow(1) - &field.one();
    Ok(xi_minus_one.pow(-(order as i64))?.scale(&scale))
}

/// `S_{N,l}` against its closed form: zero below `l = N`, the product at
/// `l = N`.
pub fn verify_s_closed_form(
    b: u32,
    order: u32,
    l: u32,
    x: &Rational,
    y: &Rational,
    limit: CostLimit,
) -> Result<IdentityReport> {
    let started = Instant::now();
    if l > order {
        return Err(Error::invalid(format!("no closed form for S_(N,l) with l={l} > N={order}")));
    }
    let lhs = s_sum(b, order, l, x, y, limit)?;
    let rhs = if l < order { lhs.field().zero() } else { s_closed_form(b, order, x, y)? };
    let params = Params::new().int("b", b).int("N", order).int("l", l).rat("x", x).rat("y", y);
    Ok(IdentityReport::new("s-closed-form", params, vec![lhs], vec![rhs], started))
}

/// `S_{N,l} = sum_{m<l} C(l,m) (x + b^{N-1} y)^{l-m} a_{l-m} S_{N-1,m}`.
pub fn verify_s_recurrence(
    b: u32,
    order: u32,
    l: u32,
    x: &Rational,
    y: &Rational,
    limit: CostLimit,
) -> Result<IdentityReport> {
    let started = Instant::now();
    if order == 0 {
        return Err(Error::invalid("the recurrence needs N >= 1"));
    }
    let lhs = s_sum(b, order, l, x, y, limit)?;
    let field = lhs.field().clone();
    let root = field.gen_pow(1);
    let shift = x + y * rat_int(pow_u64(b, order - 1)?);
    let mut rhs = field.zero();
    for m in 0..l {
        let prev = s_sum(b, order - 1, m, x, y, limit)?;
        let a = a_constant(b, l - m, &root)?;
        let c = rat_int(binomial(l as u64, m as u64)) * shift.pow((l - m) as i32);
        rhs.add_scaled(&(&a * &prev), &c);
    }
    let params = Params::new().int("b", b).int("N", order).int("l", l).rat("x", x).rat("y", y);
    Ok(IdentityReport::new("s-recurrence", params, vec![lhs], vec![rhs], started))
}

/// `prod_j prod_{i<N_j} (x_j + b^i y_j) * (sum N_j)!`
fn mixed_rational_part(config: &MultiIndexConfig) -> Rational {
    let mut v = rat_int(factorial(config.total_order() as u64));
    for ((x, y), &n) in config.xs.iter().zip(&config.ys).zip(&config.orders) {
        let mut bl = Rational::one();
        for _ in 0..n {
            v *= x + y * &bl;
            bl *= rat_int(config.b);
        }
    }
    v
}

/// Mixed digit-sum power identity
/// `sum xi^{sum s_b(n_j)} (sum_j s_b(n_j) x_j + n_j y_j)^{sum N_j}
///  = (b/(xi-1))^{sum N_j} (sum N_j)! prod_j prod_{i<N_j} (x_j + b^i y_j)`.
/// For `b = 2` the signed form `(-1)^{sum N_j}` is attached as a note.
pub fn verify_mixed_power_sum(config: &MultiIndexConfig, limit: CostLimit) -> Result<IdentityReport> {
    let started = Instant::now();
    limit.charge("mixed-power-sum", config.brute_force_terms())?;
    let b = config.b;
    let field = CycloField::get(b)?;
    let extents = config.extents()?;
    let total = config.total_order();
    let sums: Vec<Vec<u32>> = extents.iter().map(|&e| digit_sum_table(b, e as usize)).collect::<Result<_>>()?;
    // Per-axis summand pieces s_b(n) x_j + n y_j.
    let pieces: Vec<Vec<Rational>> = sums
        .iter()
        .zip(config.xs.iter().zip(&config.ys))
        .map(|(t, (x, y))| t.iter().enumerate().map(|(n, &s)| x * rat_int(s) + y * rat_int(n as i64)).collect())
        .collect();

    let mut acc = vec![Rational::zero(); b as usize];
    for_each_tuple(&extents, |idx| {
        let mut s = 0u32;
        let mut u = Rational::zero();
        for (axis, &n) in idx.iter().enumerate() {
            s += sums[axis][n as usize];
            u += &pieces[axis][n as usize];
        }
        acc[(s % b) as usize] += u.pow(total as i32);
    });
    let lhs = field.combine_residues(&acc);

    let part = mixed_rational_part(config);
    let ratio = field.from_int(b as i64).try_div(&(&field.gen_pow(1) - &field.one()))?;
    let rhs = ratio.pow(total as i64)?.scale(&part);
    let mut report = IdentityReport::new("mixed-power-sum", config.params(), vec![lhs.clone()], vec![rhs], started);
    if b == 2 {
        let signed = if total % 2 == 1 { -part } else { part };
        let original = field.from_rational(signed);
        let matches = original == lhs;
        report = report.with_note("binary-signed-form", vec![original], matches);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::random::SmallRationals;

    fn q(n: i64) -> Rational {
        rat(n, 1)
    }

    #[test]
    fn base_cases() {
        let lim = CostLimit::default();
        assert!(s_sum(3, 0, 0, &q(2), &q(5), lim).unwrap().is_one());
        for b in 2..=4 {
            for n in 1..=3 {
                assert!(s_sum(b, n, 0, &q(2), &q(5), lim).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn vanishing_below_order() {
        let lim = CostLimit::default();
        let mut g = SmallRationals::new(12);
        for b in 2..=4 {
            for n in 1..=4 {
                let (x, y) = (g.next_rational(), g.next_rational());
                for l in 0..n {
                    assert!(s_sum(b, n, l, &x, &y, lim).unwrap().is_zero(), "b={b} N={n} l={l}");
                }
                assert!(verify_s_closed_form(b, n, n, &x, &y, lim).unwrap().equal, "b={b} N={n}");
            }
        }
        assert!(verify_s_closed_form(2, 2, 3, &q(1), &q(1), lim).is_err());
    }

    #[test]
    fn recurrence() {
        let lim = CostLimit::default();
        let r = verify_s_recurrence(2, 2, 0, &q(1), &q(1), lim).unwrap();
        assert!(r.equal && r.lhs[0].is_zero());
        assert!(verify_s_recurrence(2, 2, 2, &q(1), &q(1), lim).unwrap().equal);
        assert!(verify_s_recurrence(3, 2, 3, &rat(1, 2), &rat(-2, 3), lim).unwrap().equal);
        for l in 0..=5 {
            assert!(verify_s_recurrence(4, 2, l, &rat(3, 5), &q(2), lim).unwrap().equal);
        }
    }

    fn cfg(b: u32, orders: &[u32], xs: &[Rational], ys: &[Rational]) -> MultiIndexConfig {
        MultiIndexConfig::new(b, orders.to_vec(), xs.to_vec(), ys.to_vec(), q(0)).unwrap()
    }

    #[test]
    fn mixed_power_sum_examples() {
        let lim = CostLimit::default();
        let r = verify_mixed_power_sum(&cfg(2, &[3], &[q(1)], &[q(1)]), lim).unwrap();
        assert!(r.equal);
        assert_eq!(r.rhs[0].as_rational().unwrap(), &q(-180));
        assert!(r.note("binary-signed-form").unwrap().matches);
        assert!(verify_mixed_power_sum(&cfg(2, &[1], &[q(0)], &[q(1)]), lim).unwrap().equal);
        assert!(verify_mixed_power_sum(&cfg(2, &[1, 1], &[q(1), q(1)], &[q(1), q(1)]), lim).unwrap().equal);
        let r = verify_mixed_power_sum(&cfg(3, &[1, 2], &[rat(1, 2), q(-1)], &[q(2), rat(1, 3)]), lim).unwrap();
        assert!(r.equal && r.notes.is_empty());
    }
}

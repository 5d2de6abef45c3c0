use std::time::Instant;

use num_traits::{One, Zero};

use super::{for_each_tuple, CostLimit, IdentityReport, MultiIndexConfig, Params};
use crate::arith::{factorial, rat_int, BigInt, CycloField, CycloNum, Rational};
use crate::digits::{check_base, digit_sum_table};
use crate::error::{Error, Result};
use crate::findiff::{difference_stencil, lhs_sum, weighted_rhs};
use crate::poly::RationalPoly;
use crate::weights::{beta_moment0, beta_table_shared, pow_u64};

fn check_positive(order: u32) -> Result<()> {
    if order == 0 {
        Err(Error::invalid("N must be at least 1"))
    } else {
        Ok(())
    }
}

/// Weighted finite-difference identity for one polynomial `f`.
pub fn verify_weighted_difference(
    b: u32,
    order: u32,
    f: &RationalPoly,
    x: &Rational,
    y: &Rational,
    limit: CostLimit,
) -> Result<IdentityReport> {
    let started = Instant::now();
    check_base(b)?;
    check_positive(order)?;
    let terms = (b as u128).saturating_pow(order);
    limit.charge("weighted-difference", terms + terms * (order as u128 + 1))?;
    let lhs = lhs_sum(f, x, y, b, order)?;
    let rhs = weighted_rhs(f, x, y, b, order)?;
    let params = Params::new().int("b", b).int("N", order).poly("f", f).rat("x", x).rat("y", y);
    Ok(IdentityReport::new("weighted-difference", params, vec![lhs], vec![rhs], started))
}

/// Which power-sum closed form to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerCase {
    /// `f(u) = u^N`
    Matching,
    /// `f(u) = u^{N+1}`
    NextDegree,
}

/// Closed forms for `sum_n xi^{s_b(n)} (x + n y)^N` and `(x + n y)^{N+1}`.
pub fn verify_power_closed_form(
    b: u32,
    order: u32,
    x: &Rational,
    y: &Rational,
    case: PowerCase,
    limit: CostLimit,
) -> Result<IdentityReport> {
    let started = Instant::now();
    check_base(b)?;
    check_positive(order)?;
    limit.charge("power-closed-form", (b as u128).saturating_pow(order))?;
    let degree = match case {
        PowerCase::Matching => order,
        PowerCase::NextDegree => order + 1,
    };
    let f = RationalPoly::monomial(Rational::one(), degree as usize);
    let lhs = lhs_sum(&f, x, y, b, order)?;

    let m0 = beta_moment0(b, order)?;
    let field = m0.field().clone();
    let sign = if order % 2 == 1 { -Rational::one() } else { Rational::one() };
    let yn = y.pow(order as i32);
    let rhs = match case {
        PowerCase::Matching => m0.scale(&(sign * rat_int(factorial(order as u64)) * yn)),
        PowerCase::NextDegree => {
            let xi = field.gen_pow(1);
            let one_minus = &field.one() - &xi;
            let half_b = field.from_rational(Rational::new(b.into(), 2.into()));
            let geo = rat_int((pow_u64(b, order)? - 1) / (b as u64 - 1));
            let inner = (&half_b + &xi.try_div(&one_minus)?).scale(&(geo * y));
            let bracket = &field.from_rational(x.clone()) + &inner;
            (&m0 * &bracket).scale(&(sign * rat_int(factorial(order as u64 + 1)) * yn))
        }
    };
    let which = match case {
        PowerCase::Matching => "N",
        PowerCase::NextDegree => "N+1",
    };
    let params = Params::new().int("b", b).int("N", order).rat("x", x).rat("y", y).text("power", which);
    Ok(IdentityReport::new("power-closed-form", params, vec![lhs], vec![rhs], started))
}

/// Row-major strides for the given extents.
fn strides(extents: &[u64]) -> Vec<u64> {
    let mut s = vec![1u64; extents.len()];
    for i in (0..extents.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * extents[i + 1];
    }
    s
}

/// `f(shift + sum_j n_j y_j)` over the whole index box, row-major.
fn sample_grid<F: Fn(&Rational) -> Rational>(config: &MultiIndexConfig, extents: &[u64], f: F) -> Vec<Rational> {
    let mut out = Vec::with_capacity(extents.iter().product::<u64>() as usize);
    for_each_tuple(extents, |idx| {
        let mut u = config.shift.clone();
        for (n, y) in idx.iter().zip(&config.ys) {
            if *n != 0 {
                u += y * rat_int(*n as i64);
            }
        }
        out.push(f(&u));
    });
    out
}

/// `sum over the box of xi^{sum_j s_b(n_j)} * values[n]`.
fn weighted_box_sum(b: u32, extents: &[u64], values: &[Rational]) -> Result<CycloNum> {
    let field = CycloField::get(b)?;
    let sums: Vec<Vec<u32>> = extents.iter().map(|&e| digit_sum_table(b, e as usize)).collect::<Result<_>>()?;
    let mut acc = vec![Rational::zero(); b as usize];
    let mut flat = 0usize;
    for_each_tuple(extents, |idx| {
        let s: u32 = idx.iter().zip(&sums).map(|(n, t)| t[*n as usize]).sum();
        acc[(s % b) as usize] += &values[flat];
        flat += 1;
    });
    Ok(field.combine_residues(&acc))
}

/// Multiple-index weighted difference identity: r-fold brute force against
/// the r-fold beta-weighted tensor of forward differences.
pub fn verify_multisum(config: &MultiIndexConfig, f: &RationalPoly, limit: CostLimit) -> Result<IdentityReport> {
    let started = Instant::now();
    let extents = config.extents()?;
    let k_extents: Vec<u64> = extents.iter().zip(&config.orders).map(|(e, n)| e - *n as u64).collect();
    let stencil_terms: u128 = config.orders.iter().map(|&n| n as u128 + 1).product();
    let k_terms: u128 = k_extents.iter().map(|&k| k as u128).product();
    limit.charge("multisum", config.brute_force_terms() + k_terms * stencil_terms)?;

    let grid = sample_grid(config, &extents, |u| f.eval(u));
    let lhs = weighted_box_sum(config.b, &extents, &grid)?;

    let field = CycloField::get(config.b)?;
    let tables = config
        .orders
        .iter()
        .map(|&n| beta_table_shared(config.b, n - 1))
        .collect::<Result<Vec<_>>>()?;
    let stencils: Vec<Vec<Rational>> = config.orders.iter().map(|&n| difference_stencil(n)).collect();
    let stencil_extents: Vec<u64> = config.orders.iter().map(|&n| n as u64 + 1).collect();
    let stride = strides(&extents);

    let mut rhs = field.zero();
    for_each_tuple(&k_extents, |k| {
        let mut diff = Rational::zero();
        for_each_tuple(&stencil_extents, |j| {
            let mut coeff = Rational::one();
            let mut flat = 0u64;
            for axis in 0..k.len() {
                coeff *= &stencils[axis][j[axis] as usize];
                flat += (k[axis] + j[axis]) * stride[axis];
            }
            diff += coeff * &grid[flat as usize];
        });
        if diff.is_zero() {
            return;
        }
        let mut weight = tables[0].get(k[0] as i64);
        for axis in 1..k.len() {
            weight = &weight * &tables[axis].get(k[axis] as i64);
        }
        rhs.add_scaled(&weight, &diff);
    });
    if config.total_order() % 2 == 1 {
        rhs = -rhs;
    }
    let params = config.params().poly("f", f);
    Ok(IdentityReport::new("multisum", params, vec![lhs], vec![rhs], started))
}

/// `(1/(xi-1))^{sum N_j} b^{sum N_j(N_j+1)/2} (prod y_j^{N_j}) (sum N_j)!`.
pub fn multi_power_sum_closed_form(config: &MultiIndexConfig) -> Result<CycloNum> {
    let field = CycloField::get(config.b)?;
    let total = config.total_order();
    let xi_minus_one = &field.gen_pow(1) - &field.one();
    let exp: u64 = config.orders.iter().map(|&n| n as u64 * (n as u64 + 1) / 2).sum();
    let mut scale = rat_int(num_traits::pow(BigInt::from(config.b), exp as usize));
    scale *= rat_int(factorial(total as u64));
    for (y, n) in config.ys.iter().zip(&config.orders) {
        scale *= y.pow(*n as i32);
    }
    Ok(xi_minus_one.pow(-(total as i64))?.scale(&scale))
}

/// Power-sum form of the multiple-index identity with
/// `f(u) = u^{sum N_j}`; for `b = 2` the original signed statement is also
/// evaluated and attached as a note.
pub fn verify_multi_power_sum(config: &MultiIndexConfig, limit: CostLimit) -> Result<IdentityReport> {
    let started = Instant::now();
    limit.charge("multi-power-sum", config.brute_force_terms())?;
    let extents = config.extents()?;
    let total = config.total_order() as i32;
    let grid = sample_grid(config, &extents, |u| u.pow(total));
    let lhs = weighted_box_sum(config.b, &extents, &grid)?;
    let rhs = multi_power_sum_closed_form(config)?;
    let mut report =
        IdentityReport::new("multi-power-sum", config.params(), vec![lhs.clone()], vec![rhs], started);
    if config.b == 2 {
        let exp: u64 = config.orders.iter().map(|&n| n as u64 * (n as u64 - 1) / 2).sum();
        let mut v = rat_int(num_traits::pow(BigInt::from(2), exp as usize)) * rat_int(factorial(total as u64));
        for (y, n) in config.ys.iter().zip(&config.orders) {
            v *= y.pow(*n as i32);
        }
        if total % 2 == 1 {
            v = -v;
        }
        let original = lhs.field().from_rational(v);
        let matches = original == lhs;
        report = report.with_note("binary-signed-form", vec![original], matches);
    }
    Ok(report)
}

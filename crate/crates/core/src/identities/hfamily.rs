use std::time::Instant;

use num_traits::{One, Zero};

use super::{for_each_tuple, CostLimit, IdentityReport, Params};
use crate::arith::{binomial, factorial, rat_int, BigInt, CycloField, CycloNum, Rational};
use crate::digits::{check_base, digit_sum_unchecked};
use crate::error::{Error, Result};
use crate::weights::{beta_moment0, beta_moment1, pow_u64, PolyOverCyclo};

/// `H_{m,N,p}(t) = sum_{i_1..i_m < b^N} xi^{s_b(i_1+...+i_m)} (t + sum_j i_j x_j)^p`
/// expanded as a polynomial in `t`.
pub fn h_polynomial(b: u32, order: u32, p: u32, xs: &[Rational], limit: CostLimit) -> Result<PolyOverCyclo> {
    check_base(b)?;
    if xs.is_empty() {
        return Err(Error::invalid("H needs at least one x value"));
    }
    if order == 0 {
        return Err(Error::invalid("H needs N >= 1"));
    }
    let side = pow_u64(b, order)?;
    let terms = (side as u128).saturating_pow(xs.len() as u32);
    limit.charge("h-polynomial", terms.saturating_mul(p as u128 + 1))?;
    let field = CycloField::get(b)?;
    let extents = vec![side; xs.len()];
    let degree = p as usize;

    // power[r][e] = sum over tuples in residue class r of c^e.
    let mut power = vec![vec![Rational::zero(); degree + 1]; b as usize];
    for_each_tuple(&extents, |idx| {
        let total: u64 = idx.iter().sum();
        let r = (digit_sum_unchecked(total, b) % b) as usize;
        let mut c = Rational::zero();
        for (i, x) in idx.iter().zip(xs) {
            if *i != 0 {
                c += x * rat_int(*i as i64);
            }
        }
        let mut ce = Rational::one();
        for (e, slot) in power[r].iter_mut().enumerate() {
            if e > 0 {
                ce *= &c;
            }
            *slot += &ce;
        }
    });

    // Coefficient of t^{p-e} is C(p,e) * sum_r xi^r power[r][e].
    let mut coeffs = vec![field.zero(); degree + 1];
    for e in 0..=degree {
        let residues: Vec<Rational> = power.iter().map(|row| row[e].clone()).collect();
        let binom = rat_int(binomial(p as u64, e as u64));
        coeffs[degree - e] = field.combine_residues(&residues).scale(&binom);
    }
    Ok(PolyOverCyclo::new(field, coeffs))
}

/// `H_{2,N,p} = 0` for `p <= N - 2`. Three or more indices are refused:
/// there the bound fails (`H_{3,2,0} != 0`).
pub fn verify_h_vanishing(b: u32, order: u32, p: u32, xs: &[Rational], limit: CostLimit) -> Result<IdentityReport> {
    let started = Instant::now();
    if xs.len() != 2 {
        return Err(Error::invalid(format!("vanishing is checked for two indices, got {}", xs.len())));
    }
    if p + 2 > order {
        return Err(Error::invalid(format!("vanishing is only claimed for p <= N-2 (p={p}, N={order})")));
    }
    let h = h_polynomial(b, order, p, xs, limit)?;
    let zero = h.field().zero();
    let lhs = h.into_coeffs();
    let rhs = vec![zero; lhs.len()];
    let params = Params::new().int("b", b).int("N", order).int("p", p).int("m", xs.len() as u32).rats("x", xs);
    Ok(IdentityReport::new("h-vanishing", params, lhs, rhs, started))
}

/// `sum_{i<k} x1^i x2^{k-1-i}`, the divided difference `(x1^k - x2^k)/(x1 - x2)`.
fn divided_power(x1: &Rational, x2: &Rational, k: u32) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..k {
        acc += x1.pow(i as i32) * x2.pow((k - 1 - i) as i32);
    }
    acc
}

fn check_distinct(x1: &Rational, x2: &Rational) -> Result<()> {
    if x1 == x2 {
        Err(Error::invalid("x1 and x2 must differ"))
    } else {
        Ok(())
    }
}

fn signed_factorial(order: u32) -> Rational {
    let f = rat_int(factorial(order as u64));
    if order % 2 == 1 {
        -f
    } else {
        f
    }
}

/// Base-2 closed form of `H_{2,N,N}(t)`:
/// `(-1)^N N! 2^{N(N-1)/2} [2 q_N t + 2^N q_{N+1} + x1 x2 (2^N - 1) q_{N-1}]`
/// with `q_k = (x1^k - x2^k)/(x1 - x2)`.
pub fn h2n_closed_form(order: u32, x1: &Rational, x2: &Rational, t: &Rational) -> Result<Rational> {
    check_distinct(x1, x2)?;
    let two_n = rat_int(BigInt::from(2u32).pow(order));
    let mut bracket = rat_int(2) * divided_power(x1, x2, order) * t;
    bracket += &two_n * divided_power(x1, x2, order + 1);
    if order >= 1 {
        bracket += x1 * x2 * (&two_n - Rational::one()) * divided_power(x1, x2, order - 1);
    }
    let lead = rat_int(BigInt::from(2u32).pow(order * order.saturating_sub(1) / 2));
    Ok(signed_factorial(order) * lead * bracket)
}

/// Brute-force `H_{2,N,N}` at base 2 against [`h2n_closed_form`], plus the
/// slope against `(-1)^N N! 2^{N(N-1)/2+1} (x2^N - x1^N)/(x2 - x1)`.
pub fn verify_h2n(order: u32, x1: &Rational, x2: &Rational, t: &Rational, limit: CostLimit) -> Result<IdentityReport> {
    let started = Instant::now();
    check_distinct(x1, x2)?;
    let h = h_polynomial(2, order, order, &[x1.clone(), x2.clone()], limit)?;
    let field = h.field().clone();
    let at_t = h.eval_rational(t);
    let slope = h.coeff(1);
    let closed = field.from_rational(h2n_closed_form(order, x1, x2, t)?);
    let lead = rat_int(BigInt::from(2u32).pow(order * (order - 1) / 2 + 1));
    let stated_slope = field.from_rational(signed_factorial(order) * lead * divided_power(x1, x2, order));
    let params = Params::new().int("N", order).rat("x1", x1).rat("x2", x2).rat("t", t);
    Ok(IdentityReport::new("h2n", params, vec![at_t, slope], vec![closed, stated_slope], started))
}

struct GeneralBaseTerms {
    field: std::sync::Arc<CycloField>,
    m0: CycloNum,
    m1: CycloNum,
    xi: CycloNum,
    x1n: Rational,
    x2n: Rational,
    big1: Rational,
    big2: Rational,
    n: Rational,
    bn: Rational,
    prefactor: Rational,
}

impl GeneralBaseTerms {
    fn new(b: u32, order: u32, x1: &Rational, x2: &Rational) -> Result<Self> {
        check_base(b)?;
        check_distinct(x1, x2)?;
        let m0 = beta_moment0(b, order)?;
        let m1 = beta_moment1(b, order)?;
        let field = m0.field().clone();
        let gap = x2 - x1;
        Ok(GeneralBaseTerms {
            xi: field.gen_pow(1),
            field,
            m0,
            m1,
            x1n: x1.pow(order as i32),
            x2n: x2.pow(order as i32),
            big1: x1 / &gap,
            big2: x2 / &gap,
            n: rat_int(order),
            bn: rat_int(pow_u64(b, order)?),
            prefactor: signed_factorial(order),
        })
    }

    /// `m0 * q + m1 * w`
    fn mix(&self, q: Rational, w: &Rational) -> CycloNum {
        let mut v = self.m0.scale(&q);
        v.add_scaled(&self.m1, w);
        v
    }
}

/// Slope `c` and constant `d` of `H_{2,N,N}(t) = c t + d` for base `b`:
///
/// `(-1)^N/N! c = m0 (1-xi) (x2^N - x1^N)/(x2 - x1)`,
///
/// `(-1)^N/N! d = x2^N (m0 (N X2 + 1)/2 + m1 X2) - x1^N (m0 (N X1 - 1)/2 + m1 X1)
///   + xi [x1^N (m0 (b^N X2 + (N X1 - 1)/2) + m1 X1) - x2^N (m0 (b^N X1 + (N X2 + 1)/2) + m1 X2)]`
///
/// with `X_j = x_j/(x2 - x1)` and `m0`, `m1` the first two moments of the
/// order `N-1` beta weights.
pub fn general_base_h_closed_form(b: u32, order: u32, x1: &Rational, x2: &Rational) -> Result<(CycloNum, CycloNum)> {
    let g = GeneralBaseTerms::new(b, order, x1, x2)?;
    let one_minus = &g.field.one() - &g.xi;
    let c = (&g.m0 * &one_minus).scale(&(&g.prefactor * divided_power(x1, x2, order)));

    let half = Rational::new(1.into(), 2.into());
    let one = Rational::one();
    let n = &g.n;
    let mut d = g.mix((n * &g.big2 + &one) * &half, &g.big2).scale(&g.x2n);
    d -= &g.mix((n * &g.big1 - &one) * &half, &g.big1).scale(&g.x1n);
    let mut inner = g.mix(&g.bn * &g.big2 + (n * &g.big1 - &one) * &half, &g.big1).scale(&g.x1n);
    inner -= &g.mix(&g.bn * &g.big1 + (n * &g.big2 + &one) * &half, &g.big2).scale(&g.x2n);
    d += &(&g.xi * &inner);
    Ok((c, d.scale(&g.prefactor)))
}

/// The commonly printed form of the constant term, with `x2^N` in place of
/// its stray `x`. Kept for side-by-side reporting; it does not agree with
/// brute force.
pub fn general_base_h_displayed_constant(b: u32, order: u32, x1: &Rational, x2: &Rational) -> Result<CycloNum> {
    let g = GeneralBaseTerms::new(b, order, x1, x2)?;
    let half = Rational::new(1.into(), 2.into());
    let n = &g.n;
    let mut first = g.m0.scale(&((&half + n * &half) * &g.big2));
    first += &g.m1;
    let mut d = first.scale(&(&g.x2n * &g.big2));
    d -= &g.mix(n * &half * &g.big1 - &half, &g.big1).scale(&g.x1n);
    let mut inner = g.mix(&g.bn * &g.big2 + n * &half * &g.big1 - &half, &g.big1).scale(&g.x1n);
    let tail = g.mix(&g.bn * &g.big1 + &half + n * &half * &g.big2, &g.big2).scale(&g.x2n);
    inner -= &(&g.xi * &tail);
    d += &(&g.xi * &inner);
    Ok(d.scale(&g.prefactor))
}

/// Brute-force slope and constant of `H_{2,N,N}` at base `b` against
/// [`general_base_h_closed_form`]; the displayed constant rides along as a
/// note.
pub fn verify_general_base_h(b: u32, order: u32, x1: &Rational, x2: &Rational, limit: CostLimit) -> Result<IdentityReport> {
    let started = Instant::now();
    check_distinct(x1, x2)?;
    let h = h_polynomial(b, order, order, &[x1.clone(), x2.clone()], limit)?;
    let (c, d) = general_base_h_closed_form(b, order, x1, x2)?;
    let displayed = general_base_h_displayed_constant(b, order, x1, x2)?;
    let (c_bf, d_bf) = (h.coeff(1), h.coeff(0));
    let matches = displayed == d_bf;
    let params = Params::new().int("b", b).int("N", order).rat("x1", x1).rat("x2", x2);
    Ok(IdentityReport::new("general-base-h", params, vec![c_bf, d_bf], vec![c, d], started)
        .with_note("displayed-constant", vec![displayed], matches))
}

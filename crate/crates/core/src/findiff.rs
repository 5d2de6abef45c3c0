//! Forward differences in a scaled variable and the two sides of the
//! weighted finite-difference identity
//!
//! ```text
//! sum_{n<b^N} xi^{s_b(n)} f(x + n y) = (-1)^N sum_{k=0}^{b^N-N-1} beta_k^(N-1) Delta_k^N f(x + k y)
//! ```

use num_traits::Zero;

use crate::arith::{binomial, rat_int, CycloField, CycloNum, Rational};
use crate::digits::{check_base, DigitSums};
use crate::error::{Error, Result};
use crate::poly::RationalPoly;
use crate::weights::{beta_table_shared, pow_u64};

/// A deterministic map from rationals to rationals.
pub trait SampledFunction {
    fn eval(&self, u: &Rational) -> Rational;
}

impl SampledFunction for RationalPoly {
    fn eval(&self, u: &Rational) -> Rational {
        RationalPoly::eval(self, u)
    }
}

impl<F: Fn(&Rational) -> Rational> SampledFunction for F {
    fn eval(&self, u: &Rational) -> Rational {
        self(u)
    }
}

/// Row `N` of signed binomials `C(N, j) (-1)^{N-j}`.
pub(crate) fn difference_stencil(order: u32) -> Vec<Rational> {
    (0..=order as u64)
        .map(|j| {
            let c = rat_int(binomial(order as u64, j));
            if (order as u64 - j) % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

/// `Delta_k^N f(x + k y) = sum_j C(N,j) (-1)^{N-j} f(x + (k+j) y)`.
pub fn forward_diff_n<F: SampledFunction + ?Sized>(
    f: &F,
    x: &Rational,
    y: &Rational,
    k: i64,
    order: u32,
) -> Rational {
    let stencil = difference_stencil(order);
    diff_with_stencil(f, x, y, k, &stencil)
}

fn diff_with_stencil<F: SampledFunction + ?Sized>(
    f: &F,
    x: &Rational,
    y: &Rational,
    k: i64,
    stencil: &[Rational],
) -> Rational {
    let mut acc = Rational::zero();
    for (j, c) in stencil.iter().enumerate() {
        let u = x + y * rat_int(k + j as i64);
        acc += c * f.eval(&u);
    }
    acc
}

/// Right-hand side: `(-1)^N sum_k beta_k^(N-1) Delta_k^N f(x + k y)`.
pub fn weighted_rhs<F: SampledFunction + ?Sized>(
    f: &F,
    x: &Rational,
    y: &Rational,
    b: u32,
    order: u32,
) -> Result<CycloNum> {
    check_base(b)?;
    if order == 0 {
        return Err(Error::invalid("the weighted side needs N >= 1"));
    }
    let table = beta_table_shared(b, order - 1)?;
    let stencil = difference_stencil(order);
    let upper = pow_u64(b, order)? - order as u64;
    let mut acc = table.field().zero();
    for k in 0..upper {
        let d = diff_with_stencil(f, x, y, k as i64, &stencil);
        acc.add_scaled(&table.get(k as i64), &d);
    }
    Ok(if order % 2 == 1 { -acc } else { acc })
}

/// Left-hand side by brute force: `sum_{n<b^N} xi^{s_b(n)} f(x + n y)`.
/// Values are accumulated per digit-sum residue and combined once.
pub fn lhs_sum<F: SampledFunction + ?Sized>(
    f: &F,
    x: &Rational,
    y: &Rational,
    b: u32,
    order: u32,
) -> Result<CycloNum> {
    check_base(b)?;
    let field = CycloField::get(b)?;
    let count = pow_u64(b, order)?;
    let mut acc = vec![Rational::zero(); b as usize];
    let mut u = x.clone();
    for s in DigitSums::new(b)?.take(count as usize) {
        acc[(s % b) as usize] += f.eval(&u);
        u += y;
    }
    Ok(field.combine_residues(&acc))
}

//! The alpha and beta weight sequences.
//!
//! `beta_k^(N)` are the coefficients of
//!
//! ```text
//! prod_{l=0}^{N} (1 - z^{b^l})/(1 - z) * (1 + (1+xi) z^{b^l} + ... + (1+xi+...+xi^{b-1}) z^{(b-1) b^l})
//! ```
//!
//! over `Q(xi)`, and `alpha_k^(N)` are the integer coefficients of
//! `prod_{l=0}^{N-1} (1 + z^{2^l})^{N-l}`. For `b = 2` the two coincide.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, rat_int, BigInt, CycloField, CycloNum, Rational};
use crate::digits::{check_base, digit_sum_table};
use crate::error::{Error, Result};

/// Largest table length the generators will build.
pub const MAX_TABLE_LEN: u64 = 1 << 22;

/// Polynomial in one variable with coefficients in `Q(xi_b)`, constant term
/// first, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyOverCyclo {
    field: Arc<CycloField>,
    coeffs: Vec<CycloNum>,
}

impl PolyOverCyclo {
    pub fn new(field: Arc<CycloField>, mut coeffs: Vec<CycloNum>) -> Self {
        while coeffs.last().is_some_and(CycloNum::is_zero) {
            coeffs.pop();
        }
        PolyOverCyclo { field, coeffs }
    }

    pub fn one(field: Arc<CycloField>) -> Self {
        let one = field.one();
        Self::new(field, vec![one])
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[CycloNum] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<CycloNum> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CycloNum {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Schoolbook product; zero coefficients are skipped and rational ones
    /// use the cheaper scaling kernel.
    pub fn mul(&self, rhs: &PolyOverCyclo) -> PolyOverCyclo {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return PolyOverCyclo::new(self.field.clone(), Vec::new());
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (j, c) in rhs.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match c.as_rational() {
                Some(q) => {
                    for (i, a) in self.coeffs.iter().enumerate() {
                        out[i + j].add_scaled(a, q);
                    }
                }
                None => {
                    for (i, a) in self.coeffs.iter().enumerate() {
                        if !a.is_zero() {
                            out[i + j] += &(a * c);
                        }
                    }
                }
            }
        }
        PolyOverCyclo::new(self.field.clone(), out)
    }

    pub fn eval(&self, z: &CycloNum) -> CycloNum {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * z) + c)
    }

    pub fn eval_rational(&self, z: &Rational) -> CycloNum {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &acc.scale(z) + c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Alpha,
    Beta,
}

impl std::str::FromStr for WeightKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(WeightKind::Alpha),
            "beta" => Ok(WeightKind::Beta),
            _ => Err(Error::Parse(format!("unknown weight kind {s:?}"))),
        }
    }
}

/// A finite weight sequence indexed from 0. Entries outside the stored range
/// (including negative indices) read as zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    b: u32,
    order: u32,
    kind: WeightKind,
    values: Vec<CycloNum>,
}

impl WeightTable {
    pub fn base(&self) -> u32 {
        self.b
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn values(&self) -> &[CycloNum] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.values[0].field()
    }

    pub fn get(&self, k: i64) -> CycloNum {
        usize::try_from(k)
            .ok()
            .and_then(|k| self.values.get(k).cloned())
            .unwrap_or_else(|| self.field().zero())
    }

    /// `sum_k w_k`
    pub fn moment0(&self) -> CycloNum {
        self.values.iter().fold(self.field().zero(), |acc, v| &acc + v)
    }

    /// `sum_k k * w_k`
    pub fn moment1(&self) -> CycloNum {
        let mut acc = self.field().zero();
        for (k, v) in self.values.iter().enumerate() {
            acc.add_scaled(v, &rat_int(k as i64));
        }
        acc
    }

    /// The generating polynomial `sum_k w_k z^k`.
    pub fn to_poly(&self) -> PolyOverCyclo {
        PolyOverCyclo::new(self.field().clone(), self.values.clone())
    }

    pub fn to_wire(&self) -> WeightTableWire {
        WeightTableWire {
            b: self.b,
            order: self.order,
            kind: self.kind,
            phi_b: self.field().degree(),
            values: self.values.iter().map(CycloNum::coeff_strings).collect(),
        }
    }

    pub fn from_wire(w: &WeightTableWire) -> Result<Self> {
        let values = w
            .values
            .iter()
            .map(|c| CycloNum::from_coeff_strings(w.b, c))
            .collect::<Result<Vec<_>>>()?;
        let expected = match w.kind {
            WeightKind::Alpha => table_len(2, w.order)?,
            WeightKind::Beta => table_len(w.b, w.order)?,
        };
        if values.len() as u64 != expected || (w.kind == WeightKind::Alpha && w.b != 2) {
            return Err(Error::invalid("weight table shape does not match (b, N, kind)"));
        }
        Ok(WeightTable { b: w.b, order: w.order, kind: w.kind, values })
    }
}

/// Serialised form: `{b, N, kind, phi_b, values: [[rational, ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightTableWire {
    pub b: u32,
    #[serde(rename = "N")]
    pub order: u32,
    pub kind: WeightKind,
    pub phi_b: usize,
    pub values: Vec<Vec<String>>,
}

/// `b^(N+1) - N - 1`, the number of weights of order `N`.
pub fn table_len(b: u32, order: u32) -> Result<u64> {
    check_base(b)?;
    let full = (b as u64)
        .checked_pow(order + 1)
        .filter(|&n| n <= MAX_TABLE_LEN)
        .ok_or(Error::CostExceeded {
            what: "weight table",
            needed: (b as u128).saturating_pow(order + 1),
            cap: MAX_TABLE_LEN,
        })?;
    Ok(full - order as u64 - 1)
}

pub(crate) fn pow_u64(b: u32, e: u32) -> Result<u64> {
    (b as u64)
        .checked_pow(e)
        .ok_or_else(|| Error::invalid(format!("{b}^{e} overflows 64 bits")))
}

/// Integer coefficients of `prod_{l=0}^{N-1} (1 + z^{2^l})^{N-l}`.
pub fn alpha_integers(order: u32) -> Result<Vec<BigInt>> {
    let len = table_len(2, order)? as usize;
    let mut poly = vec![BigInt::one()];
    for l in 0..order {
        let step = 1usize << l;
        for _ in 0..(order - l) {
            let mut next = poly.clone();
            next.resize(poly.len() + step, BigInt::zero());
            for (i, c) in poly.iter().enumerate() {
                next[i + step] += c;
            }
            poly = next;
        }
    }
    debug_assert_eq!(poly.len(), len);
    Ok(poly)
}

pub fn alpha_table(order: u32) -> Result<WeightTable> {
    let field = CycloField::get(2)?;
    let values = alpha_integers(order)?.into_iter().map(|c| field.from_rational(rat_int(c))).collect();
    Ok(WeightTable { b: 2, order, kind: WeightKind::Alpha, values })
}

/// Expands the beta generating product exactly over `Q(xi_b)`.
pub fn beta_table(b: u32, order: u32) -> Result<WeightTable> {
    let len = table_len(b, order)? as usize;
    let field = CycloField::get(b)?;

    // Prefix sums 1, 1+xi, ..., 1+xi+...+xi^{b-1} (the last one is zero).
    let mut prefix = Vec::with_capacity(b as usize);
    let mut run = field.zero();
    for m in 0..b as i64 {
        run += &field.gen_pow(m);
        prefix.push(run.clone());
    }

    let mut acc = PolyOverCyclo::one(field.clone());
    for l in 0..=order {
        let block = pow_u64(b, l)? as usize;
        let geometric = PolyOverCyclo::new(field.clone(), vec![field.one(); block]);
        let mut bracket = vec![field.zero(); (b as usize - 1) * block + 1];
        for (m, p) in prefix.iter().enumerate() {
            bracket[m * block] = p.clone();
        }
        acc = acc.mul(&geometric).mul(&PolyOverCyclo::new(field.clone(), bracket));
    }

    let values = acc.into_coeffs();
    if values.len() != len {
        return Err(Error::invalid(format!(
            "beta product for b={b}, N={order} has {} coefficients, expected {len}",
            values.len()
        )));
    }
    Ok(WeightTable { b, order, kind: WeightKind::Beta, values })
}

type TableCache = RwLock<HashMap<(u32, u32), Arc<WeightTable>>>;

/// Memoised [`beta_table`], safe for concurrent readers.
pub fn beta_table_shared(b: u32, order: u32) -> Result<Arc<WeightTable>> {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().unwrap().get(&(b, order)) {
        return Ok(t.clone());
    }
    let t = Arc::new(beta_table(b, order)?);
    cache.write().unwrap().insert((b, order), t.clone());
    Ok(t)
}

fn check_order_positive(order: u32) -> Result<()> {
    if order == 0 {
        Err(Error::invalid("moment formulas need N >= 1"))
    } else {
        Ok(())
    }
}

/// `b^{N(N+1)/2} / (1 - xi)^N`, the closed form of `sum_k beta_k^(N-1)`.
pub fn beta_moment0(b: u32, order: u32) -> Result<CycloNum> {
    check_base(b)?;
    check_order_positive(order)?;
    let field = CycloField::get(b)?;
    let one_minus = &field.one() - &field.gen_pow(1);
    let e = order as u64 * (order as u64 + 1) / 2;
    let scale = rat_int(num_traits::pow(BigInt::from(b), e as usize));
    Ok(one_minus.pow(-(order as i64))?.scale(&scale))
}

/// Closed form of `sum_k k * beta_k^(N-1)`:
/// `m0 * [ (1-b^N)/(1-b) * (b/2 + xi/(1-xi)) - N/2 ]`.
pub fn beta_moment1(b: u32, order: u32) -> Result<CycloNum> {
    let m0 = beta_moment0(b, order)?;
    let field = m0.field().clone();
    let x = field.gen_pow(1);
    let ratio = x.try_div(&(&field.one() - &x))?;
    let half_b = field.from_rational(Rational::new(b.into(), 2.into()));
    let geo = rat_int((pow_u64(b, order)? - 1) / (b as u64 - 1));
    let bracket = (&half_b + &ratio).scale(&geo) - field.from_rational(Rational::new(order.into(), 2.into()));
    Ok(&m0 * &bracket)
}

/// `beta_n^(N) = sum_{k=0}^{n} C(n-k+N, N) xi^{s_b(k)}` for `0 <= n < b^N`.
///
/// Only this prefix of the table is produced; the identity is not claimed
/// beyond it.
pub fn beta_from_convolution(b: u32, order: u32) -> Result<Vec<CycloNum>> {
    check_base(b)?;
    let len = pow_u64(b, order)?;
    if len > MAX_TABLE_LEN {
        return Err(Error::CostExceeded { what: "convolution prefix", needed: len as u128, cap: MAX_TABLE_LEN });
    }
    let len = len as usize;
    let field = CycloField::get(b)?;
    let sums = digit_sum_table(b, len)?;
    let mut out = Vec::with_capacity(len);
    let mut acc = vec![Rational::zero(); b as usize];
    for n in 0..len {
        acc.iter_mut().for_each(|a| a.set_zero());
        for (k, s) in sums[..=n].iter().enumerate() {
            acc[(*s % b) as usize] += rat_int(binomial((n - k) as u64 + order as u64, order as u64));
        }
        out.push(field.combine_residues(&acc));
    }
    Ok(out)
}

/// `xi^{s_b(n)} = sum_{k=0}^{n} C(N,k) (-1)^k beta_{n-k}^(N-1)` for
/// `0 <= n < b^N`, evaluated from the expanded table of order `N - 1`.
pub fn xi_from_convolution(b: u32, order: u32, n: u64) -> Result<CycloNum> {
    check_order_positive(order)?;
    let limit = pow_u64(b, order)?;
    if n >= limit {
        return Err(Error::OutOfRange { index: n, len: limit });
    }
    let table = beta_table_shared(b, order - 1)?;
    Ok(xi_from_table(&table, n))
}

/// The second convolution against an explicit table of order `N - 1`.
pub fn xi_from_table(table: &WeightTable, n: u64) -> CycloNum {
    let order = table.order() as u64 + 1;
    let mut acc = table.field().zero();
    for k in 0..=n.min(order) {
        let c = rat_int(binomial(order, k));
        let c = if k % 2 == 1 { -c } else { c };
        acc.add_scaled(&table.get((n - k) as i64), &c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::digits::xi_digit_weight;

    fn ints(t: &WeightTable) -> Vec<Rational> {
        t.values().iter().map(|v| v.as_rational().unwrap().clone()).collect()
    }

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    /// Count of (k_1..k_N) with 0 <= k_j <= 2^j - 1 summing to k.
    fn lattice_count(order: u32, k: i64) -> i64 {
        fn go(j: u32, order: u32, left: i64) -> i64 {
            if j > order {
                return (left == 0) as i64;
            }
            (0..=((1i64 << j) - 1).min(left)).map(|kj| go(j + 1, order, left - kj)).sum()
        }
        go(1, order, k)
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(ints(&alpha_table(0).unwrap()), r(&[1]));
        assert_eq!(ints(&alpha_table(1).unwrap()), r(&[1, 1]));
        assert_eq!(ints(&alpha_table(2).unwrap()), r(&[1, 2, 2, 2, 1]));
    }

    #[test]
    fn alpha_counts_lattice_points() {
        for order in 0..=4 {
            let t = alpha_integers(order).unwrap();
            assert_eq!(t.len() as u64, table_len(2, order).unwrap());
            for (k, v) in t.iter().enumerate() {
                assert_eq!(*v, BigInt::from(lattice_count(order, k as i64)), "N={order} k={k}");
            }
        }
    }

    #[test]
    fn beta_base_two_is_alpha() {
        for order in 0..=5 {
            assert_eq!(beta_table(2, order).unwrap().values(), alpha_table(order).unwrap().values());
        }
    }

    #[test]
    fn beta_base_three_order_one_by_hand() {
        // (1)(1 + (1+x) z) * (1 + z + z^2)(1 + (1+x) z^3), x = xi_3.
        let f = CycloField::get(3).unwrap();
        let x = f.gen_pow(1);
        let one_x = &f.one() + &x;
        let a = PolyOverCyclo::new(f.clone(), vec![f.one(), one_x.clone()]);
        let c = PolyOverCyclo::new(
            f.clone(),
            vec![f.one(), f.one(), f.one(), one_x.clone(), one_x.clone(), one_x.clone()],
        );
        let want = a.mul(&c);
        let t = beta_table(3, 1).unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.values(), want.coeffs());
    }

    #[test]
    fn table_lengths_are_exact() {
        for b in 2..=5 {
            for order in 0..=3 {
                let t = beta_table(b, order).unwrap();
                assert_eq!(t.len() as u64, (b as u64).pow(order + 1) - order as u64 - 1);
                assert!(!t.values().last().unwrap().is_zero());
            }
        }
    }

    #[test]
    fn moments_binary_closed_forms() {
        for order in 1..=6u32 {
            let p = rat(2, 1).pow((order * (order - 1) / 2) as i32);
            assert_eq!(beta_moment0(2, order).unwrap().as_rational().unwrap(), &p);
            let m1 = &p * (rat(2, 1).pow(order as i32 - 1) - rat(order as i64 + 1, 2));
            assert_eq!(beta_moment1(2, order).unwrap().as_rational().unwrap(), &m1);
        }
        assert!(beta_moment0(3, 0).is_err());
        assert!(beta_moment0(1, 2).is_err());
    }

    #[test]
    fn moments_match_table_sums() {
        for b in 2..=5 {
            for order in 1..=3 {
                let t = beta_table(b, order - 1).unwrap();
                assert_eq!(t.moment0(), beta_moment0(b, order).unwrap(), "b={b} N={order}");
                assert_eq!(t.moment1(), beta_moment1(b, order).unwrap(), "b={b} N={order}");
            }
        }
    }

    #[test]
    fn convolution_examples() {
        let t = beta_from_convolution(2, 2).unwrap();
        assert!(t[0].is_one());
        assert_eq!(t[2].as_rational().unwrap(), &rat(2, 1));
        let f2 = CycloField::get(2).unwrap();
        assert!(xi_from_convolution(2, 2, 0).unwrap().is_one());
        assert_eq!(xi_from_convolution(2, 2, 3).unwrap(), f2.one());
        assert_eq!(xi_from_convolution(2, 2, 4), Err(Error::OutOfRange { index: 4, len: 4 }));
    }

    #[test]
    fn convolutions_agree_with_table_and_digit_weights() {
        for b in 2..=4 {
            for order in 1..=3 {
                let prefix = beta_from_convolution(b, order).unwrap();
                let table = beta_table(b, order).unwrap();
                assert_eq!(&table.values()[..prefix.len()], &prefix[..]);
                for n in 0..(b as u64).pow(order) {
                    assert_eq!(xi_from_convolution(b, order, n).unwrap(), xi_digit_weight(n, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn times_one_minus_z_power_gives_digit_weights() {
        for b in 2..=4u32 {
            for order in 1..=4u32 {
                if (b as u64).pow(order) > 256 {
                    continue;
                }
                let f = CycloField::get(b).unwrap();
                let mut lhs = beta_table(b, order - 1).unwrap().to_poly();
                let one_minus_z = PolyOverCyclo::new(f.clone(), vec![f.one(), f.from_int(-1)]);
                for _ in 0..order {
                    lhs = lhs.mul(&one_minus_z);
                }
                let n = (b as u64).pow(order);
                let rhs: Vec<_> = (0..n).map(|k| xi_digit_weight(k, b).unwrap()).collect();
                assert_eq!(lhs.coeffs(), &rhs[..], "b={b} N={order}");
            }
        }
    }

    #[test]
    fn wire_round_trip() {
        let t = beta_table(3, 1).unwrap();
        let w = t.to_wire();
        assert_eq!(w.phi_b, 2);
        let json = serde_json::to_string(&w).unwrap();
        assert!(json.starts_with(r#"{"b":3,"N":1,"kind":"beta","phi_b":2,"values":[["1","0"]"#));
        let back: WeightTableWire = serde_json::from_str(&json).unwrap();
        assert_eq!(WeightTable::from_wire(&back).unwrap(), t);
    }

    #[test]
    fn oversized_tables_are_refused() {
        assert!(matches!(beta_table(10, 9), Err(Error::CostExceeded { .. })));
    }
}

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cyclotomic::cyclotomic_polynomial;
use super::rational::{format_rational, parse_rational, rat_int, Rational};
use crate::error::{Error, Result};

/// The number field `Q(zeta_b)`, stored as `Q[x] / Phi_b(x)`.
///
/// Shared by every [`CycloNum`] of the same order; obtain it with
/// [`CycloField::get`].
pub struct CycloField {
    order: u32,
    /// Monic `Phi_b`, constant term first.
    modulus: Vec<Rational>,
    /// Reduced coefficient vectors of `x^j` for `j < b`.
    powers: Vec<Vec<Rational>>,
}

type FieldCache = RwLock<HashMap<u32, Arc<CycloField>>>;

fn fields() -> &'static FieldCache {
    static FIELDS: OnceLock<FieldCache> = OnceLock::new();
    FIELDS.get_or_init(Default::default)
}

impl CycloField {
    /// The field for root order `b >= 1` (`b = 1` gives `Q` itself).
    pub fn get(b: u32) -> Result<Arc<CycloField>> {
        if b == 0 {
            return Err(Error::invalid("root order must be positive"));
        }
        if let Some(f) = fields().read().unwrap().get(&b) {
            return Ok(f.clone());
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(b).iter().cloned().map(rat_int).collect();
        let phi = modulus.len() - 1;
        let mut field = CycloField { order: b, modulus, powers: Vec::with_capacity(b as usize) };
        let mut cur = vec![Rational::zero(); phi];
        cur[0] = Rational::one();
        for _ in 0..b {
            field.powers.push(cur.clone());
            cur = field.shift_reduce(&cur);
        }
        let field = Arc::new(field);
        fields().write().unwrap().insert(b, field.clone());
        Ok(field)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `phi(b)`, the vector-space dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero(self: &Arc<Self>) -> CycloNum {
        CycloNum { field: self.clone(), coeffs: vec![Rational::zero(); self.degree()] }
    }

    pub fn one(self: &Arc<Self>) -> CycloNum {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(self: &Arc<Self>, q: Rational) -> CycloNum {
        let mut z = self.zero();
        z.coeffs[0] = q;
        z
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> CycloNum {
        self.from_rational(rat_int(n))
    }

    /// Interprets `coeffs` as a polynomial in the generator of any length
    /// and reduces it modulo `Phi_b`.
    pub fn from_poly(self: &Arc<Self>, coeffs: Vec<Rational>) -> CycloNum {
        CycloNum { field: self.clone(), coeffs: self.reduce(coeffs) }
    }

    /// The generator `x mod Phi_b` raised to `e`, with `e` reduced mod `b`.
    pub fn gen_pow(self: &Arc<Self>, e: i64) -> CycloNum {
        let j = e.rem_euclid(self.order as i64) as usize;
        CycloNum { field: self.clone(), coeffs: self.powers[j].clone() }
    }

    /// Builds `sum_j acc[j] * x^j` for residue-class accumulators
    /// `acc[0..b]`.
    pub fn combine_residues(self: &Arc<Self>, acc: &[Rational]) -> CycloNum {
        assert_eq!(acc.len(), self.order as usize, "one accumulator per residue class");
        let mut out = vec![Rational::zero(); self.degree()];
        for (a, p) in acc.iter().zip(&self.powers) {
            if a.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(p) {
                if !c.is_zero() {
                    *o += a * c;
                }
            }
        }
        CycloNum { field: self.clone(), coeffs: out }
    }

    fn shift_reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut w = Vec::with_capacity(v.len() + 1);
        w.push(Rational::zero());
        w.extend_from_slice(v);
        self.reduce(w)
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        let phi = self.degree();
        for top in (phi..v.len()).rev() {
            let c = std::mem::take(&mut v[top]);
            if c.is_zero() {
                continue;
            }
            let base = top - phi;
            for (j, m) in self.modulus[..phi].iter().enumerate() {
                if !m.is_zero() {
                    v[base + j] -= &c * m;
                }
            }
        }
        v.resize(phi, Rational::zero());
        v
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CycloField {}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}

/// An element of `Q(zeta_b)`: exactly `phi(b)` rational coefficients of a
/// polynomial in `zeta` of degree `< phi(b)`.
///
/// Operator impls panic when the two operands live in different fields; use
/// the `try_*` methods to get an error instead.
#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CycloField>,
    coeffs: Vec<Rational>,
}

/// The canonical primitive `b`-th root of unity.
pub fn xi(b: u32) -> Result<CycloNum> {
    if b < 2 {
        return Err(Error::InvalidBase(b as u64));
    }
    Ok(CycloField::get(b)?.gen_pow(1))
}

/// `xi(b)^j`, which is again primitive exactly when `gcd(j, b) = 1`.
pub fn primitive_root(b: u32, j: i64) -> Result<CycloNum> {
    let x = xi(b)?;
    if j.gcd(&(b as i64)) != 1 {
        return Err(Error::invalid(format!("zeta_{b}^{j} is not a primitive root")));
    }
    Ok(x.field.gen_pow(j))
}

/// `a_l = sum_{k=0}^{b-1} k^l * root^k` (with `0^0 = 1`).
pub fn a_constant(b: u32, l: u32, root: &CycloNum) -> Result<CycloNum> {
    if root.order() != b {
        return Err(Error::FieldMismatch { left: b, right: root.order() });
    }
    let mut acc = root.field.zero();
    let mut power = root.field.one();
    for k in 0..b {
        let w = num_traits::pow(Rational::from_integer(k.into()), l as usize);
        acc.add_scaled(&power, &w);
        power = &power * root;
    }
    Ok(acc)
}

impl CycloNum {
    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    /// The root order `b`.
    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(One::is_one)
    }

    /// `Some(q)` when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &CycloNum) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.order == other.field.order {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: self.order(), right: other.order() })
        }
    }

    pub fn try_add(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycloNum { field: self.field.clone(), coeffs })
    }

    pub fn try_sub(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycloNum { field: self.field.clone(), coeffs })
    }

    pub fn try_mul(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check(other)?;
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(q));
        }
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(q));
        }
        let n = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, c) in other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                prod[i + j] += a * c;
            }
        }
        Ok(self.field.from_poly(prod))
    }

    pub fn scale(&self, q: &Rational) -> CycloNum {
        let coeffs = if q.is_zero() {
            vec![Rational::zero(); self.coeffs.len()]
        } else if q.is_one() {
            self.coeffs.clone()
        } else {
            self.coeffs.iter().map(|c| c * q).collect()
        };
        CycloNum { field: self.field.clone(), coeffs }
    }

    /// `self += other * q`, the accumulation kernel for weighted sums.
    pub fn add_scaled(&mut self, other: &CycloNum, q: &Rational) {
        self.check(other).expect("field mismatch in add_scaled");
        if q.is_zero() {
            return;
        }
        let unit = q.is_one();
        for (s, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if o.is_zero() {
                continue;
            }
            if unit {
                *s += o;
            } else {
                *s += o * q;
            }
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Phi_b` over `Q`.
    pub fn inv(&self) -> Result<CycloNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(self.field.from_rational(q.recip()));
        }
        let u = inverse_mod(&self.coeffs, &self.field.modulus);
        Ok(self.field.from_poly(u))
    }

    pub fn try_div(&self, other: &CycloNum) -> Result<CycloNum> {
        self.try_mul(&other.inv()?)
    }

    /// Exact integer power. Negative exponents invert first; powers of the
    /// generator itself are reduced modulo `b`.
    pub fn pow(&self, e: i64) -> Result<CycloNum> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        if self.coeffs == self.field.powers[1 % self.field.powers.len()] {
            return Ok(self.field.gen_pow(e));
        }
        let mut base = self.clone();
        let mut acc = self.field.one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Coefficients as canonical rational strings.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn from_coeff_strings(b: u32, coeffs: &[String]) -> Result<CycloNum> {
        let field = CycloField::get(b)?;
        if coeffs.len() != field.degree() {
            return Err(Error::invalid(format!(
                "expected {} coefficients for Q(zeta_{b}), got {}",
                field.degree(),
                coeffs.len()
            )));
        }
        let coeffs = coeffs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Ok(CycloNum { field, coeffs })
    }
}

/// Extended Euclid in `Q[x]`: returns `u` with `a*u = 1 (mod m)`, assuming
/// `gcd(a, m)` is a nonzero constant (true for nonzero `a` when `m` is
/// irreducible).
fn inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    let mut r0 = trim(m.to_vec());
    let mut r1 = trim(a.to_vec());
    let mut s0: Vec<Rational> = Vec::new();
    let mut s1 = vec![Rational::one()];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    debug_assert_eq!(r0.len(), 1, "element shares a factor with the modulus");
    let lead = r0[0].recip();
    s0.iter().map(|c| c * &lead).collect()
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = num.to_vec();
    if num.len() < den.len() {
        return (Vec::new(), rem);
    }
    let dn = den.len() - 1;
    let lead_inv = den[dn].recip();
    let mut quot = vec![Rational::zero(); num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dn] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs == other.coeffs
    }
}

impl Eq for CycloNum {}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [b={}]", self, self.order())
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = format_rational(&c.abs());
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => f.write_str(&mag)?,
                _ => {
                    if !c.abs().is_one() {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str("ξ")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloWire {
    b: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloWire { b: self.order(), coeffs: self.coeff_strings() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CycloWire::deserialize(d)?;
        CycloNum::from_coeff_strings(w.b, &w.coeffs).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                self.$try(rhs).expect("cyclotomic field mismatch")
            }
        }
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, rhs: &CycloNum) {
        self.check(rhs).expect("cyclotomic field mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycloNum> for CycloNum {
    fn sub_assign(&mut self, rhs: &CycloNum) {
        self.check(rhs).expect("cyclotomic field mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(mut self) -> CycloNum {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn field(b: u32) -> Arc<CycloField> {
        CycloField::get(b).unwrap()
    }

    #[test]
    fn canonical_roots() {
        assert_eq!(xi(2).unwrap(), field(2).from_int(-1));
        let x3 = xi(3).unwrap();
        assert_eq!(&x3 * &x3, -(field(3).one() + x3.clone()));
        let x4 = xi(4).unwrap();
        assert_eq!(&x4 * &x4, field(4).from_int(-1));
        assert_eq!(xi(1), Err(Error::InvalidBase(1)));
        assert_eq!(xi(0), Err(Error::InvalidBase(0)));
    }

    #[test]
    fn field_ops_examples() {
        let x3 = xi(3).unwrap();
        assert!((&x3 * &x3.pow(2).unwrap()).is_one());
        let m1 = xi(2).unwrap();
        assert!((&m1 * &m1).is_one());
        let x4 = xi(4).unwrap();
        let one_plus = field(4).one() + x4.clone();
        assert_eq!(&one_plus * &one_plus, x4.scale(&rat(2, 1)));
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let a = xi(3).unwrap();
        let b = xi(4).unwrap();
        assert_eq!(a.try_add(&b), Err(Error::FieldMismatch { left: 3, right: 4 }));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn inverses() {
        let m1 = xi(2).unwrap();
        assert_eq!(m1.inv().unwrap(), m1);
        let two = field(2).one() - m1;
        assert_eq!(two.inv().unwrap(), field(2).from_rational(rat(1, 2)));
        // (1 - xi)^{-1} = (2 + xi)/3 in Q(zeta_3).
        let x3 = xi(3).unwrap();
        let w = (field(3).one() - x3.clone()).inv().unwrap();
        let want = (field(3).from_int(2) + x3).scale(&rat(1, 3));
        assert_eq!(w, want);
        assert_eq!(field(5).zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(field(5).zero().pow(-1), Err(Error::DivisionByZero));
    }

    #[test]
    fn powers() {
        for b in 2..=12 {
            let x = xi(b).unwrap();
            assert!(x.pow(b as i64).unwrap().is_one(), "b={b}");
            assert!(x.pow(0).unwrap().is_one());
            assert_eq!(x.pow(-1).unwrap(), x.inv().unwrap());
        }
        let x3 = xi(3).unwrap();
        assert_eq!(x3.pow(5).unwrap(), x3.pow(2).unwrap());
        let y = field(7).one() + xi(7).unwrap().scale(&rat(3, 2));
        assert_eq!(y.pow(3).unwrap(), &(&y * &y) * &y);
        assert!((&y.pow(-4).unwrap() * &y.pow(4).unwrap()).is_one());
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for b in 2..=24 {
            let x = xi(b).unwrap();
            let mut acc = x.field().zero();
            for k in 0..b as i64 {
                acc += &x.pow(k).unwrap();
            }
            assert!(acc.is_zero(), "b={b}");
        }
    }

    #[test]
    fn a_constants() {
        for b in 2..=12u32 {
            let x = xi(b).unwrap();
            assert!(a_constant(b, 0, &x).unwrap().is_zero());
            let minus_one = &x - &x.field().one();
            let want = minus_one.inv().unwrap().scale(&rat(b as i64, 1));
            assert_eq!(a_constant(b, 1, &x).unwrap(), want, "b={b}");
        }
        assert_eq!(a_constant(2, 2, &xi(2).unwrap()).unwrap(), field(2).from_int(-1));
        assert!(a_constant(3, 1, &xi(4).unwrap()).is_err());
    }

    #[test]
    fn primitive_roots_are_conjugates() {
        let r = primitive_root(5, 2).unwrap();
        assert!(r.pow(5).unwrap().is_one());
        assert!(!r.is_one());
        assert!(primitive_root(6, 2).is_err());
        assert_eq!(primitive_root(6, 5).unwrap(), xi(6).unwrap().inv().unwrap());
    }

    #[test]
    fn display_and_wire_format() {
        let x = xi(3).unwrap();
        let v = field(3).from_rational(rat(3, 2)) - x.scale(&rat(2, 1));
        assert_eq!(v.to_string(), "3/2 - 2*ξ");
        assert_eq!(field(5).zero().to_string(), "0");
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"b":3,"coeffs":["3/2","-2"]}"#);
        let back: CycloNum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<CycloNum>(r#"{"b":3,"coeffs":["1"]}"#).is_err());
    }
}

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};

use super::rational::BigInt;

type Cache = RwLock<HashMap<u32, Arc<[BigInt]>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Coefficients (constant term first) of the monic cyclotomic polynomial
/// `Phi_b`, obtained by dividing `x^b - 1` by `Phi_d` for every proper
/// divisor `d` of `b`. Results are memoised per `b`.
///
/// Panics if `b == 0`.
pub fn cyclotomic_polynomial(b: u32) -> Arc<[BigInt]> {
    assert!(b >= 1, "cyclotomic polynomial of order 0 is undefined");
    if let Some(hit) = cache().read().unwrap().get(&b) {
        return hit.clone();
    }

    let mut num = vec![BigInt::zero(); b as usize + 1];
    num[0] = -BigInt::one();
    num[b as usize] = BigInt::one();
    for d in (1..b).filter(|d| b % d == 0) {
        num = div_exact_monic(&num, &cyclotomic_polynomial(d));
    }

    let phi: Arc<[BigInt]> = num.into();
    cache().write().unwrap().insert(b, phi.clone());
    phi
}

/// Euler's totient, which is also `deg Phi_b`.
pub fn euler_phi(b: u32) -> usize {
    let mut n = b;
    let mut out = b;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out as usize
}

fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

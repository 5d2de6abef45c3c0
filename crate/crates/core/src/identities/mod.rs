//! Identity verifier: every summation identity is evaluated by brute force
//! and in closed form (or through an independent route) and the two results
//! are compared exactly.

mod digit_mixing;
mod hfamily;
mod supporting;
mod power_sums;
mod suite;

use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::arith::{format_rational, CycloNum, Rational};
use crate::error::{Error, Result};
use crate::poly::RationalPoly;

pub use digit_mixing::{s_closed_form, s_sum, verify_s_closed_form, verify_s_recurrence, verify_mixed_power_sum};
pub use hfamily::{
    general_base_h_closed_form, general_base_h_displayed_constant, h2n_closed_form, h_polynomial,
    verify_general_base_h, verify_h2n, verify_h_vanishing,
};
pub use supporting::{
    verify_alpha_moments, verify_beta_alpha, verify_beta_dual1, verify_beta_dual2, verify_beta_moments,
    verify_delta_bernoulli, verify_faulhaber, verify_generalized_pte,
};
pub use power_sums::{
    multi_power_sum_closed_form, verify_multi_power_sum, verify_power_closed_form, verify_multisum, verify_weighted_difference,
    PowerCase,
};
pub use suite::{run_suite, SuiteConfig};

/// Default cap on summand evaluations per verification.
pub const DEFAULT_MAX_COST: u64 = 1 << 20;

/// Upper bound on brute-force work for a single verification. Exceeding it
/// is an explicit [`Error::CostExceeded`], never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostLimit(pub u64);

impl Default for CostLimit {
    fn default() -> Self {
        CostLimit(DEFAULT_MAX_COST)
    }
}

impl CostLimit {
    pub fn charge(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.0 as u128 {
            Err(Error::CostExceeded { what, needed, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

/// Parameters of the multiple-index identities: root order `b`, orders
/// `N_1..N_r`, per-index coefficients `x_j`, `y_j`, and a common shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndexConfig {
    pub b: u32,
    pub orders: Vec<u32>,
    pub xs: Vec<Rational>,
    pub ys: Vec<Rational>,
    pub shift: Rational,
}

impl MultiIndexConfig {
    pub fn new(b: u32, orders: Vec<u32>, xs: Vec<Rational>, ys: Vec<Rational>, shift: Rational) -> Result<Self> {
        crate::digits::check_base(b)?;
        if orders.is_empty() {
            return Err(Error::invalid("need at least one summation index"));
        }
        if orders.contains(&0) {
            return Err(Error::invalid("all orders N_j must be positive"));
        }
        if xs.len() != orders.len() || ys.len() != orders.len() {
            return Err(Error::invalid(format!(
                "{} orders but {} x values and {} y values",
                orders.len(),
                xs.len(),
                ys.len()
            )));
        }
        Ok(MultiIndexConfig { b, orders, xs, ys, shift })
    }

    pub fn r(&self) -> usize {
        self.orders.len()
    }

    pub fn total_order(&self) -> u32 {
        self.orders.iter().sum()
    }

    /// `b^{N_j}` for each index.
    pub(crate) fn extents(&self) -> Result<Vec<u64>> {
        self.orders.iter().map(|&n| crate::weights::pow_u64(self.b, n)).collect()
    }

    /// Number of terms of the full brute-force sum.
    pub(crate) fn brute_force_terms(&self) -> u128 {
        self.orders.iter().map(|&n| (self.b as u128).saturating_pow(n)).product()
    }

    pub(crate) fn params(&self) -> Params {
        Params::new()
            .int("b", self.b)
            .ints("N", &self.orders)
            .rats("x", &self.xs)
            .rats("y", &self.ys)
            .rat("shift", &self.shift)
    }
}

/// Sorted key/value parameters recorded in a report.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Params(Map<String, Value>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn int(mut self, key: &str, v: impl Into<i64>) -> Self {
        self.0.insert(key.into(), Value::from(v.into()));
        self
    }

    pub fn ints(mut self, key: &str, v: &[u32]) -> Self {
        self.0.insert(key.into(), Value::from(v.to_vec()));
        self
    }

    pub fn rat(mut self, key: &str, q: &Rational) -> Self {
        self.0.insert(key.into(), Value::from(format_rational(q)));
        self
    }

    pub fn rats(mut self, key: &str, qs: &[Rational]) -> Self {
        self.0.insert(key.into(), Value::from(qs.iter().map(format_rational).collect::<Vec<_>>()));
        self
    }

    pub fn poly(self, key: &str, p: &RationalPoly) -> Self {
        self.rats(key, p.coeffs())
    }

    pub fn text(mut self, key: &str, s: &str) -> Self {
        self.0.insert(key.into(), Value::from(s));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }
}

/// A side-by-side value attached to a report that does not take part in
/// the `equal` verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportNote {
    pub name: String,
    pub value: Vec<CycloNum>,
    pub matches: bool,
}

/// Outcome of one verification. `equal` holds exactly when `lhs` and `rhs`
/// agree entrywise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub params: Params,
    pub lhs: Vec<CycloNum>,
    pub rhs: Vec<CycloNum>,
    pub equal: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<ReportNote>,
    pub elapsed_ms: Option<f64>,
}

impl IdentityReport {
    pub(crate) fn new(identity: &str, params: Params, lhs: Vec<CycloNum>, rhs: Vec<CycloNum>, started: Instant) -> Self {
        let equal = lhs == rhs;
        IdentityReport {
            identity: identity.to_owned(),
            params,
            lhs,
            rhs,
            equal,
            notes: Vec::new(),
            elapsed_ms: Some(started.elapsed().as_secs_f64() * 1e3),
        }
    }

    pub(crate) fn with_note(mut self, name: &str, value: Vec<CycloNum>, matches: bool) -> Self {
        self.notes.push(ReportNote { name: name.to_owned(), value, matches });
        self
    }

    pub fn note(&self, name: &str) -> Option<&ReportNote> {
        self.notes.iter().find(|n| n.name == name)
    }

    /// Drops wall-clock data so that reports are byte-reproducible.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }
}

/// Calls `visit` with every index tuple of the box `[0, extents[0]) x ...`,
/// last coordinate fastest.
pub(crate) fn for_each_tuple(extents: &[u64], mut visit: impl FnMut(&[u64])) {
    if extents.contains(&0) {
        return;
    }
    let mut idx = vec![0u64; extents.len()];
    loop {
        visit(&idx);
        let mut axis = extents.len();
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < extents[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_in_order() {
        let mut seen = Vec::new();
        for_each_tuple(&[2, 3], |t| seen.push(t.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], [0, 0]);
        assert_eq!(seen[1], [0, 1]);
        assert_eq!(seen[5], [1, 2]);
        let mut n = 0;
        for_each_tuple(&[3, 0], |_| n += 1);
        assert_eq!(n, 0);
    }

    #[test]
    fn config_validation() {
        let q = |n| crate::arith::rat(n, 1);
        assert!(MultiIndexConfig::new(2, vec![1, 2], vec![q(0), q(0)], vec![q(1), q(1)], q(0)).is_ok());
        assert!(MultiIndexConfig::new(2, vec![1, 2], vec![q(0)], vec![q(1), q(1)], q(0)).is_err());
        assert!(MultiIndexConfig::new(2, vec![], vec![], vec![], q(0)).is_err());
        assert!(MultiIndexConfig::new(2, vec![0], vec![q(0)], vec![q(1)], q(0)).is_err());
        assert!(MultiIndexConfig::new(1, vec![1], vec![q(0)], vec![q(1)], q(0)).is_err());
    }

    #[test]
    fn cost_limit() {
        assert!(CostLimit(10).charge("x", 10).is_ok());
        assert_eq!(CostLimit(10).charge("x", 11), Err(Error::CostExceeded { what: "x", needed: 11, cap: 10 }));
    }
}

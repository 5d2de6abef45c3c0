//! Generalized Prouhet-Tarry-Escott partitions: the multiset
//! `{s_b(n) x + n y : n < b^N}` split by `s_b(n) mod b`.

mod search;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::{format_rational, rat_int, Rational};
use crate::digits::{check_base, DigitSums};
use crate::error::{Error, Result};
use crate::weights::pow_u64;

pub use search::{parse_grid, search_small_solutions, PteSolution, SearchOptions, SearchReport, SolutionWire};

/// Largest partition (`b^N` values) built without complaint.
pub const MAX_PARTITION_SIZE: u64 = 1 << 22;

/// Exact value -> multiplicity map.
pub type Multiset = BTreeMap<Rational, u64>;

/// Anything that exposes a list of classes.
pub trait Classes {
    fn classes(&self) -> &[Multiset];

    fn class_sizes(&self) -> Vec<u64> {
        self.classes().iter().map(|c| c.values().sum()).collect()
    }

    fn total_size(&self) -> u64 {
        self.class_sizes().iter().sum()
    }

    /// Class `i` written out in ascending order with repetition.
    fn expanded(&self, i: usize) -> Vec<Rational> {
        self.classes()[i].iter().flat_map(|(v, &m)| std::iter::repeat(v.clone()).take(m as usize)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtePartition {
    b: u32,
    order: u32,
    x: Rational,
    y: Rational,
    classes: Vec<Multiset>,
}

impl PtePartition {
    pub fn base(&self) -> u32 {
        self.b
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }
}

impl Classes for PtePartition {
    fn classes(&self) -> &[Multiset] {
        &self.classes
    }
}

/// Classes left after removing, for every value, the smallest multiplicity
/// it has across all classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedPartition {
    classes: Vec<Multiset>,
    reduced_size: u64,
}

impl ReducedPartition {
    pub fn reduced_size(&self) -> u64 {
        self.reduced_size
    }
}

impl Classes for ReducedPartition {
    fn classes(&self) -> &[Multiset] {
        &self.classes
    }
}

/// Per-class power sums `sum_{s in S_i} s^k` for `k = 0..=max_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PteCertificate {
    pub max_degree: u32,
    pub power_sums: Vec<Vec<Rational>>,
    pub valid: bool,
}

impl PteCertificate {
    /// First degree at which the classes disagree.
    pub fn first_failure(&self) -> Option<u32> {
        (0..=self.max_degree).find(|&k| {
            let k = k as usize;
            self.power_sums.iter().any(|row| row[k] != self.power_sums[0][k])
        })
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.power_sums.iter().map(|row| row.iter().map(format_rational).collect()).collect()
    }
}

/// The classical split of `0..b^N` by digit-sum residue.
pub fn prouhet_partition(b: u32, order: u32) -> Result<PtePartition> {
    generalized_partition(b, order, &Rational::zero(), &Rational::one())
}

pub fn generalized_partition(b: u32, order: u32, x: &Rational, y: &Rational) -> Result<PtePartition> {
    check_base(b)?;
    if order == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let count = pow_u64(b, order)?;
    if count > MAX_PARTITION_SIZE {
        return Err(Error::CostExceeded { what: "partition", needed: count as u128, cap: MAX_PARTITION_SIZE });
    }
    let mut classes = vec![Multiset::new(); b as usize];
    for (n, s) in DigitSums::new(b)?.take(count as usize).enumerate() {
        let v = x * rat_int(s) + y * rat_int(n as i64);
        *classes[(s % b) as usize].entry(v).or_insert(0) += 1;
    }
    Ok(PtePartition { b, order, x: x.clone(), y: y.clone(), classes })
}

pub fn verify_power_sums<P: Classes + ?Sized>(p: &P, max_degree: u32) -> PteCertificate {
    let power_sums: Vec<Vec<Rational>> = p
        .classes()
        .iter()
        .map(|class| {
            let mut sums = vec![Rational::zero(); max_degree as usize + 1];
            for (v, &m) in class {
                let m = rat_int(m);
                let mut vk = Rational::one();
                for (k, s) in sums.iter_mut().enumerate() {
                    if k > 0 {
                        vk *= v;
                    }
                    *s += &m * &vk;
                }
            }
            sums
        })
        .collect();
    let valid = power_sums.windows(2).all(|w| w[0] == w[1]);
    PteCertificate { max_degree, power_sums, valid }
}

pub fn cancel_common<P: Classes + ?Sized>(p: &P) -> ReducedPartition {
    let classes = p.classes();
    let mut out: Vec<Multiset> = classes.to_vec();
    if let Some((first, rest)) = classes.split_first() {
        for (v, &m) in first {
            let common = rest.iter().map(|c| c.get(v).copied().unwrap_or(0)).fold(m, u64::min);
            if common == 0 {
                continue;
            }
            for class in &mut out {
                let e = class.get_mut(v).expect("value present in every class");
                *e -= common;
                if *e == 0 {
                    class.remove(v);
                }
            }
        }
    }
    let reduced_size = out.iter().flat_map(|c| c.values()).sum();
    ReducedPartition { classes: out, reduced_size }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| rat(n, 1)).collect()
    }

    #[test]
    fn classical() {
        let p = prouhet_partition(2, 2).unwrap();
        assert_eq!(p.expanded(0), ints(&[0, 3]));
        assert_eq!(p.expanded(1), ints(&[1, 2]));
        let p = prouhet_partition(2, 3).unwrap();
        assert_eq!(p.expanded(0), ints(&[0, 3, 5, 6]));
        assert_eq!(p.expanded(1), ints(&[1, 2, 4, 7]));
        let p = prouhet_partition(3, 1).unwrap();
        assert_eq!((0..3).map(|i| p.expanded(i)).collect::<Vec<_>>(), [ints(&[0]), ints(&[1]), ints(&[2])]);
        let c = verify_power_sums(&p, 0);
        assert!(c.valid);
    }

    #[test]
    fn worked_example() {
        let p = generalized_partition(2, 3, &rat(1, 1), &rat(1, 1)).unwrap();
        assert_eq!(p.expanded(0), ints(&[0, 5, 7, 8]));
        assert_eq!(p.expanded(1), ints(&[2, 3, 5, 10]));
        let c = verify_power_sums(&p, 2);
        assert!(c.valid);
        assert_eq!(c.power_sums[0], ints(&[4, 20, 138]));
        assert_eq!(c.power_sums[1], ints(&[4, 20, 138]));
        let r = cancel_common(&p);
        assert_eq!(r.reduced_size(), 6);
        assert_eq!(r.expanded(0), ints(&[0, 7, 8]));
        assert_eq!(r.expanded(1), ints(&[2, 3, 10]));
        assert!(verify_power_sums(&r, 2).valid);
    }

    #[test]
    fn classical_bound_is_sharp() {
        let c = verify_power_sums(&prouhet_partition(2, 3).unwrap(), 3);
        assert!(!c.valid);
        assert_eq!(c.first_failure(), Some(3));
    }

    #[test]
    fn cancellation_edge_cases() {
        let p = prouhet_partition(2, 3).unwrap();
        let r = cancel_common(&p);
        assert_eq!(r.classes(), p.classes());
        assert_eq!(r.reduced_size(), 8);
        let z = generalized_partition(3, 2, &rat(0, 1), &rat(0, 1)).unwrap();
        assert_eq!(z.class_sizes(), [3, 3, 3]);
        assert_eq!(cancel_common(&z).reduced_size(), 0);
    }

    #[test]
    fn multiplicity_is_kept() {
        // x = y gives s_b(n) + n, which repeats within a class for larger N.
        let p = generalized_partition(2, 4, &rat(1, 1), &rat(1, 1)).unwrap();
        assert_eq!(p.total_size(), 16);
        assert!(verify_power_sums(&p, 3).valid);
    }
}

use rayon::prelude::*;

use super::{
    verify_alpha_moments, verify_beta_alpha, verify_beta_dual1, verify_beta_dual2, verify_beta_moments,
    verify_multi_power_sum, verify_power_closed_form, verify_delta_bernoulli, verify_faulhaber, verify_general_base_h,
    verify_generalized_pte, verify_h2n, verify_h_vanishing, verify_multisum, verify_s_closed_form,
    verify_s_recurrence, verify_weighted_difference, verify_mixed_power_sum, CostLimit, IdentityReport, MultiIndexConfig, PowerCase,
};
use crate::arith::Rational;
use crate::error::Result;
use crate::random::{SmallRationals, DEFAULT_SEED};

/// Inputs of a full verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub max_cost: CostLimit,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: DEFAULT_SEED, max_cost: CostLimit::default() }
    }
}

type Job = Box<dyn Fn(CostLimit) -> Result<IdentityReport> + Send + Sync>;

fn compositions(total_max: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=total_max {
        for mut rest in compositions(total_max.saturating_sub(first), parts - 1) {
            if parts > 1 && rest.is_empty() {
                continue;
            }
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out.into_iter().filter(|c| c.len() == parts).collect()
}

fn rationals(g: &mut SmallRationals, n: usize) -> Vec<Rational> {
    (0..n).map(|_| g.next_rational()).collect()
}

/// Draws every input up front from one seeded stream so the job list, and
/// hence the output, depends only on the seed.
fn jobs(seed: u64) -> Vec<Job> {
    let mut g = SmallRationals::new(seed);
    let mut jobs: Vec<Job> = Vec::new();

    for b in 2..=5u32 {
        for n in 1..=4u32 {
            for _ in 0..5 {
                let (f, x, y) = (g.poly(n as usize + 2), g.next_rational(), g.next_rational());
                jobs.push(Box::new(move |lim| verify_weighted_difference(b, n, &f, &x, &y, lim)));
            }
        }
    }
    for b in 2..=4u32 {
        for n in 1..=3u32 {
            for case in [PowerCase::Matching, PowerCase::NextDegree] {
                let (x, y) = (g.next_rational(), g.next_rational());
                jobs.push(Box::new(move |lim| verify_power_closed_form(b, n, &x, &y, case, lim)));
            }
        }
    }
    for b in 2..=6u32 {
        for n in 1..=4u32 {
            jobs.push(Box::new(move |lim| verify_beta_moments(b, n, lim)));
        }
    }
    for b in 2..=4u32 {
        for n in 1..=3u32 {
            jobs.push(Box::new(move |lim| verify_beta_dual1(b, n, lim)));
            jobs.push(Box::new(move |lim| verify_beta_dual2(b, n, lim)));
        }
    }
    for n in 0..=5u32 {
        jobs.push(Box::new(move |lim| verify_beta_alpha(n, lim)));
    }
    for n in 1..=5u32 {
        jobs.push(Box::new(move |lim| verify_alpha_moments(n, lim)));
    }
    for r in 1..=3usize {
        for orders in compositions(6, r) {
            for b in [2u32, 3] {
                let (ys, shift) = (rationals(&mut g, r), g.next_rational());
                let xs = vec![Rational::from_integer(0.into()); r];
                let orders = orders.clone();
                jobs.push(Box::new(move |lim| {
                    verify_multi_power_sum(&MultiIndexConfig::new(b, orders.clone(), xs.clone(), ys.clone(), shift.clone())?, lim)
                }));
            }
        }
    }
    for (b, orders) in [(2u32, vec![1u32, 1]), (3, vec![1, 2]), (2, vec![2, 1, 2]), (4, vec![2])] {
        let r = orders.len();
        let (ys, shift) = (rationals(&mut g, r), g.next_rational());
        let f = g.poly(orders.iter().sum::<u32>() as usize + 1);
        let xs = vec![Rational::from_integer(0.into()); r];
        jobs.push(Box::new(move |lim| {
            verify_multisum(&MultiIndexConfig::new(b, orders.clone(), xs.clone(), ys.clone(), shift.clone())?, &f, lim)
        }));
    }
    for b in 2..=4u32 {
        for n in 1..=4u32 {
            let (x, y) = (g.next_rational(), g.next_rational());
            for l in 0..=n {
                let (x, y) = (x.clone(), y.clone());
                jobs.push(Box::new(move |lim| verify_s_closed_form(b, n, l, &x, &y, lim)));
            }
            let l = n + 1;
            jobs.push(Box::new(move |lim| verify_s_recurrence(b, n, l, &x, &y, lim)));
        }
    }
    for (b, orders) in [(2u32, vec![3u32]), (2, vec![1, 1]), (3, vec![1, 2]), (2, vec![2, 2]), (4, vec![1, 1])] {
        let r = orders.len();
        let (xs, ys) = (rationals(&mut g, r), rationals(&mut g, r));
        jobs.push(Box::new(move |lim| {
            verify_mixed_power_sum(&MultiIndexConfig::new(b, orders.clone(), xs.clone(), ys.clone(), Rational::default())?, lim)
        }));
    }
    for n in 2..=4u32 {
        for p in 0..=n - 2 {
            let xs = rationals(&mut g, 2);
            jobs.push(Box::new(move |lim| verify_h_vanishing(2, n, p, &xs, lim)));
        }
    }
    for n in 1..=4u32 {
        for _ in 0..5 {
            let x1 = g.next_rational();
            let x2 = g.next_avoiding(std::slice::from_ref(&x1));
            let t = g.next_rational();
            jobs.push(Box::new(move |lim| verify_h2n(n, &x1, &x2, &t, lim)));
        }
    }
    for b in 2..=4u32 {
        for n in 1..=2u32 {
            let x1 = g.next_rational();
            let x2 = g.next_avoiding(std::slice::from_ref(&x1));
            jobs.push(Box::new(move |lim| verify_general_base_h(b, n, &x1, &x2, lim)));
        }
    }
    for _ in 0..200 {
        let (a, step) = (g.next_rational(), g.next_nonzero());
        let r = g.index(11) as i64 - 5;
        let s = r + g.index(12) as i64;
        let p = g.index(8) as u32;
        jobs.push(Box::new(move |lim| verify_faulhaber(&a, &step, r, s, p, lim)));
    }
    for n in 0..=6u32 {
        let (a, step, k) = (g.next_rational(), g.next_nonzero(), g.index(7) as i64 - 3);
        jobs.push(Box::new(move |_| verify_delta_bernoulli(&a, &step, k, n)));
    }
    for (b, n) in [(2u32, 2u32), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2)] {
        let (f, x, y) = (g.poly(n as usize - 1), g.next_rational(), g.next_rational());
        jobs.push(Box::new(move |lim| verify_generalized_pte(b, n, &f, &x, &y, lim)));
    }
    jobs
}

/// Runs the complete identity suite in parallel. Reports come back in job
/// order regardless of completion order.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<IdentityReport>> {
    let limit = config.max_cost;
    jobs(config.seed).par_iter().map(|job| job(limit)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_bounded() {
        assert_eq!(compositions(6, 1).len(), 6);
        assert_eq!(compositions(6, 2).len(), 15);
        assert_eq!(compositions(6, 3).len(), 20);
        assert!(compositions(6, 3).iter().all(|c| c.iter().sum::<u32>() <= 6 && c.iter().all(|&n| n > 0)));
    }

    #[test]
    fn job_list_is_seeded() {
        assert_eq!(jobs(1).len(), jobs(2).len());
    }
}

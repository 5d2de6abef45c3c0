//! Maps `--identity` names and `key=value` parameters onto the core
//! verifiers. Anything not given is drawn from the seeded generator.

use std::collections::BTreeMap;

use digitsum_core::arith::{parse_rational, Rational};
use digitsum_core::identities::{self as ids, CostLimit, IdentityReport, MultiIndexConfig, PowerCase};
use digitsum_core::random::SmallRationals;
use digitsum_core::RationalPoly;

use crate::CliError;

pub const IDENTITIES: &[&str] = &[
    "weighted-difference",
    "power-closed-form",
    "multisum",
    "multi-power-sum",
    "s-closed-form",
    "s-recurrence",
    "mixed-power-sum",
    "h-vanishing",
    "h2n",
    "general-base-h",
    "beta-moments",
    "beta-dual1",
    "beta-dual2",
    "beta-alpha",
    "alpha-moments",
    "faulhaber",
    "delta-bernoulli",
    "generalized-pte",
];

pub struct Request<'a> {
    pub identity: &'a str,
    pub base: Option<u32>,
    pub orders: &'a [u32],
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub limit: CostLimit,
}

struct Inputs<'a> {
    params: &'a BTreeMap<String, String>,
    rng: SmallRationals,
}

impl Inputs<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn rat(&mut self, key: &str) -> Result<Rational, CliError> {
        match self.raw(key) {
            Some(s) => Ok(parse_rational(s)?),
            None => Ok(self.rng.next_rational()),
        }
    }

    fn nonzero(&mut self, key: &str) -> Result<Rational, CliError> {
        match self.raw(key) {
            Some(s) => Ok(parse_rational(s)?),
            None => Ok(self.rng.next_nonzero()),
        }
    }

    fn rats(&mut self, key: &str, n: usize) -> Result<Vec<Rational>, CliError> {
        match self.raw(key) {
            Some(s) => {
                let v = s.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>, _>>()?;
                if v.len() != n {
                    return Err(CliError::Usage(format!("`{key}` needs {n} values, got {}", v.len())));
                }
                Ok(v)
            }
            None => Ok((0..n).map(|_| self.rng.next_rational()).collect()),
        }
    }

    /// Coefficients lowest degree first, e.g. `f=0,0,1` for `u^2`.
    fn poly(&mut self, key: &str, degree: usize) -> Result<RationalPoly, CliError> {
        match self.raw(key) {
            Some(s) => {
                let c = s.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>, _>>()?;
                Ok(RationalPoly::new(c))
            }
            None => Ok(self.rng.poly(degree)),
        }
    }

    fn int<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.raw(key) {
            Some(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("`{key}={s}` is not an integer"))),
            None => Ok(default),
        }
    }
}

fn need_base(req: &Request) -> Result<u32, CliError> {
    req.base.ok_or_else(|| CliError::Usage(format!("`{}` needs --base", req.identity)))
}

fn need_order(req: &Request) -> Result<u32, CliError> {
    match req.orders {
        [n] => Ok(*n),
        [] => Err(CliError::Usage(format!("`{}` needs --order", req.identity))),
        _ => Err(CliError::Usage(format!("`{}` takes a single --order", req.identity))),
    }
}

fn need_orders(req: &Request) -> Result<Vec<u32>, CliError> {
    if req.orders.is_empty() {
        return Err(CliError::Usage(format!("`{}` needs --order N1,N2,...", req.identity)));
    }
    Ok(req.orders.to_vec())
}

fn distinct_pair(inputs: &mut Inputs) -> Result<(Rational, Rational), CliError> {
    let x1 = inputs.rat("x1")?;
    let x2 = match inputs.raw("x2") {
        Some(s) => parse_rational(s)?,
        None => inputs.rng.next_avoiding(std::slice::from_ref(&x1)),
    };
    Ok((x1, x2))
}

pub fn run(req: &Request) -> Result<IdentityReport, CliError> {
    let mut inputs = Inputs { params: &req.params, rng: SmallRationals::new(req.seed) };
    let lim = req.limit;
    let report = match req.identity {
        "weighted-difference" => {
            let (b, n) = (need_base(req)?, need_order(req)?);
            let f = inputs.poly("f", n as usize + 2)?;
            let (x, y) = (inputs.rat("x")?, inputs.rat("y")?);
            ids::verify_weighted_difference(b, n, &f, &x, &y, lim)?
        }
        "power-closed-form" => {
            let (b, n) = (need_base(req)?, need_order(req)?);
            let case = match inputs.raw("power").unwrap_or("N") {
                "N" => PowerCase::Matching,
                "N+1" => PowerCase::NextDegree,
                other => return Err(CliError::Usage(format!("power must be N or N+1, got `{other}`"))),
            };
            let (x, y) = (inputs.rat("x")?, inputs.rat("y")?);
            ids::verify_power_closed_form(b, n, &x, &y, case, lim)?
        }
        "multisum" | "multi-power-sum" | "mixed-power-sum" => {
            let (b, orders) = (need_base(req)?, need_orders(req)?);
            let r = orders.len();
            let total: u32 = orders.iter().sum();
            let xs = if req.identity == "mixed-power-sum" { inputs.rats("x", r)? } else { vec![Rational::default(); r] };
            let ys = inputs.rats("y", r)?;
            let shift = if req.identity == "mixed-power-sum" { Rational::default() } else { inputs.rat("shift")? };
            let config = MultiIndexConfig::new(b, orders, xs, ys, shift)?;
            match req.identity {
                "multisum" => {
                    let f = inputs.poly("f", total as usize + 1)?;
                    ids::verify_multisum(&config, &f, lim)?
                }
                "multi-power-sum" => ids::verify_multi_power_sum(&config, lim)?,
                _ => ids::verify_mixed_power_sum(&config, lim)?,
            }
        }
        "s-closed-form" | "s-recurrence" => {
            let (b, n) = (need_base(req)?, need_order(req)?);
            let l = inputs.int("l", n)?;
            let (x, y) = (inputs.rat("x")?, inputs.rat("y")?);
            if req.identity == "s-closed-form" {
                ids::verify_s_closed_form(b, n, l, &x, &y, lim)?
            } else {
                ids::verify_s_recurrence(b, n, l, &x, &y, lim)?
            }
        }
        "h-vanishing" => {
            let (b, n) = (need_base(req)?, need_order(req)?);
            let p = inputs.int("p", n.saturating_sub(2))?;
            let xs = inputs.rats("x", 2)?;
            ids::verify_h_vanishing(b, n, p, &xs, lim)?
        }
        "h2n" => {
            let n = need_order(req)?;
            if req.base.is_some_and(|b| b != 2) {
                return Err(CliError::Usage("h2n is the base-2 case; use general-base-h".into()));
            }
            let (x1, x2) = distinct_pair(&mut inputs)?;
            let t = inputs.rat("t")?;
            ids::verify_h2n(n, &x1, &x2, &t, lim)?
        }
        "general-base-h" => {
            let (b, n) = (need_base(req)?, need_order(req)?);
            let (x1, x2) = distinct_pair(&mut inputs)?;
            ids::verify_general_base_h(b, n, &x1, &x2, lim)?
        }
        "beta-moments" => ids::verify_beta_moments(need_base(req)?, need_order(req)?, lim)?,
        "beta-dual1" => ids::verify_beta_dual1(need_base(req)?, need_order(req)?, lim)?,
        "beta-dual2" => ids::verify_beta_dual2(need_base(req)?, need_order(req)?, lim)?,
        "beta-alpha" => ids::verify_beta_alpha(need_order(req)?, lim)?,
        "alpha-moments" => ids::verify_alpha_moments(need_order(req)?, lim)?,
        "faulhaber" => {
            let (a, step) = (inputs.rat("a")?, inputs.nonzero("step")?);
            let (r, s, p) = (inputs.int("r", 0i64)?, inputs.int("s", 10i64)?, inputs.int("p", 3u32)?);
            ids::verify_faulhaber(&a, &step, r, s, p, lim)?
        }
        "delta-bernoulli" => {
            let n = need_order(req)?;
            let (a, step) = (inputs.rat("a")?, inputs.nonzero("step")?);
            let k = inputs.int("k", 0i64)?;
            ids::verify_delta_bernoulli(&a, &step, k, n)?
        }
        "generalized-pte" => {
            let (b, n) = (need_base(req)?, need_order(req)?);
            let f = inputs.poly("f", (n as usize).saturating_sub(1))?;
            let (x, y) = (inputs.rat("x")?, inputs.rat("y")?);
            ids::verify_generalized_pte(b, n, &f, &x, &y, lim)?
        }
        other => {
            return Err(CliError::Usage(format!("unknown identity `{other}`; known: {}", IDENTITIES.join(", "))));
        }
    };
    Ok(report)
}

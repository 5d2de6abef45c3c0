use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::{cancel_common, generalized_partition, verify_power_sums, Classes, PteCertificate, ReducedPartition};
use crate::arith::{format_rational, parse_rational, BigInt, Rational};
use crate::error::{Error, Result};

/// Largest grid accepted by [`parse_grid`].
const MAX_GRID_POINTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Highest power checked; `None` means `N - 1`.
    pub k_max: Option<u32>,
    /// Solutions whose reduced size is below this are dropped.
    pub min_size: u64,
    /// Keep only the best `top` entries.
    pub top: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { k_max: None, min_size: 1, top: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PteSolution {
    pub x: Rational,
    pub y: Rational,
    pub reduced: ReducedPartition,
    pub certificate: PteCertificate,
}

impl PteSolution {
    fn denominator_lcm(&self) -> BigInt {
        self.x.denom().lcm(self.y.denom())
    }

    fn height(&self) -> Rational {
        self.x.abs() + self.y.abs()
    }

    fn rank(&self, other: &Self) -> Ordering {
        self.reduced
            .reduced_size()
            .cmp(&other.reduced.reduced_size())
            .then_with(|| self.denominator_lcm().cmp(&other.denominator_lcm()))
            .then_with(|| self.height().cmp(&other.height()))
            .then_with(|| self.x.cmp(&other.x))
            .then_with(|| self.y.cmp(&other.y))
    }

    pub fn to_wire(&self) -> SolutionWire {
        let classes = (0..self.reduced.classes().len())
            .map(|i| self.reduced.expanded(i).iter().map(format_rational).collect())
            .collect();
        SolutionWire {
            x: format_rational(&self.x),
            y: format_rational(&self.y),
            classes,
            reduced_size: self.reduced.reduced_size(),
            power_sums: self.certificate.to_strings(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionWire {
    pub x: String,
    pub y: String,
    pub classes: Vec<Vec<String>>,
    pub reduced_size: u64,
    pub power_sums: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub b: u32,
    #[serde(rename = "N")]
    pub order: u32,
    pub solutions: Vec<SolutionWire>,
}

/// Builds, reduces and certifies the partition at every grid point in
/// parallel, then ranks by reduced size, denominator lcm, `|x| + |y|`,
/// `x`, `y`. Only valid certificates survive.
pub fn search_small_solutions(
    b: u32,
    order: u32,
    xs: &[Rational],
    ys: &[Rational],
    options: &SearchOptions,
) -> Result<Vec<PteSolution>> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::invalid("search grids must be nonempty"));
    }
    let k_max = options.k_max.unwrap_or(order.saturating_sub(1));
    let points: Vec<(&Rational, &Rational)> = xs.iter().flat_map(|x| ys.iter().map(move |y| (x, y))).collect();
    let evaluated: Vec<Option<PteSolution>> = points
        .par_iter()
        .map(|&(x, y)| -> Result<Option<PteSolution>> {
            let reduced = cancel_common(&generalized_partition(b, order, x, y)?);
            if reduced.reduced_size() < options.min_size {
                return Ok(None);
            }
            let certificate = verify_power_sums(&reduced, k_max);
            Ok(certificate.valid.then(|| PteSolution { x: x.clone(), y: y.clone(), reduced, certificate }))
        })
        .collect::<Result<_>>()?;
    let mut found: Vec<PteSolution> = evaluated.into_iter().flatten().collect();
    found.sort_by(PteSolution::rank);
    if let Some(top) = options.top {
        found.truncate(top);
    }
    Ok(found)
}

/// Parses `lo..hi/step` (inclusive of `hi` when it lies on the lattice) or a
/// comma-separated list of rationals. Duplicates are removed and the result
/// is sorted.
pub fn parse_grid(spec: &str) -> Result<Vec<Rational>> {
    let spec = spec.trim();
    let mut out = if let Some((lo, rest)) = spec.split_once("..") {
        let (hi, step) = split_step(rest)
            .ok_or_else(|| Error::Parse(format!("range `{spec}` needs a step: lo..hi/step")))?;
        let (lo, hi, step) = (parse_rational(lo)?, parse_rational(hi)?, parse_rational(step)?);
        if !step.is_positive() {
            return Err(Error::Parse(format!("grid step must be positive in `{spec}`")));
        }
        let mut v = Vec::new();
        let mut cur = lo;
        while cur <= hi {
            if v.len() == MAX_GRID_POINTS {
                return Err(Error::Parse(format!("grid `{spec}` has more than {MAX_GRID_POINTS} points")));
            }
            v.push(cur.clone());
            cur += &step;
        }
        v
    } else {
        spec.split(',').filter(|s| !s.trim().is_empty()).map(parse_rational).collect::<Result<Vec<_>>>()?
    };
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::Parse(format!("grid `{spec}` is empty")));
    }
    Ok(out)
}

/// Splits `hi/step`. With two slashes the step is the fraction (`1/1/2` is
/// `hi = 1`, `step = 1/2`); with three both are fractions.
fn split_step(rest: &str) -> Option<(&str, &str)> {
    let slashes: Vec<usize> = rest.match_indices('/').map(|(i, _)| i).collect();
    let at = match slashes.len() {
        1 | 2 => slashes[0],
        3 => slashes[1],
        _ => return None,
    };
    Some((&rest[..at], &rest[at + 1..]))
}

impl SearchReport {
    pub fn new(b: u32, order: u32, solutions: &[PteSolution]) -> Self {
        SearchReport { b, order, solutions: solutions.iter().map(PteSolution::to_wire).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1").unwrap(), [rat(1, 1)]);
        assert_eq!(parse_grid("1, -1/2,1").unwrap(), [rat(-1, 2), rat(1, 1)]);
        assert_eq!(parse_grid("0..1/1/2").unwrap(), [rat(0, 1), rat(1, 2), rat(1, 1)]);
        assert_eq!(parse_grid("-1..1/2/3").unwrap(), [rat(-1, 1), rat(-1, 3), rat(1, 3), rat(1, 1)]);
        assert_eq!(parse_grid("0..1/2/1/4").unwrap(), [rat(0, 1), rat(1, 4), rat(1, 2)]);
        assert!(parse_grid("0..1").is_err());
        assert!(parse_grid("0..1/0").is_err());
        assert!(parse_grid("1..0/1").is_err());
        assert!(parse_grid("a").is_err());
    }

    #[test]
    fn known_point_ranks_first() {
        let one = [rat(1, 1)];
        let found = search_small_solutions(2, 3, &one, &one, &SearchOptions::default()).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].reduced.reduced_size(), 6);
        let found = search_small_solutions(2, 3, &[rat(0, 1)], &one, &SearchOptions::default()).unwrap();
        assert_eq!(found[0].reduced.reduced_size(), 8);
    }

    #[test]
    fn small_grid_is_valid_and_ordered() {
        let grid = parse_grid("-4..4/1/2").unwrap();
        let found = search_small_solutions(2, 3, &grid, &grid, &SearchOptions::default()).unwrap();
        assert!(!found.is_empty());
        assert!(found.iter().all(|s| s.certificate.valid && s.reduced.reduced_size() >= 1));
        assert!(found.windows(2).all(|w| w[0].rank(&w[1]) != Ordering::Greater));
        let top = search_small_solutions(2, 3, &grid, &grid, &SearchOptions { top: Some(3), ..Default::default() });
        assert_eq!(top.unwrap(), found[..3]);
    }
}

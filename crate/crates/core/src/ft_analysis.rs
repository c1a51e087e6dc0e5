//! Exhaustive failure-scenario enumeration: coverage per failure count and
//! the degree of fault tolerance.

use itertools::Itertools;
use serde::Serialize;

use crate::bits::{subsets_of_size, AliveSet};
use crate::decoder::is_fully_recoverable;
use crate::error::{Error, Result};
use crate::layout::Layout;

/// Default cap on disks for any analysis that walks all `2^n` alive sets.
pub const DEFAULT_MAX_EXACT_DISKS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub layout: String,
    pub n: usize,
    pub f: usize,
    pub total: u64,
    pub recovered: u64,
    /// Unrecoverable alive sets, in ascending order of the failed-set bitmask.
    pub failing: Vec<AliveSet>,
}

impl CoverageReport {
    pub fn fraction(&self) -> f64 {
        self.recovered as f64 / self.total as f64
    }

    pub fn is_full(&self) -> bool {
        self.recovered == self.total
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FtDegree(pub usize);

fn check_f(layout: &Layout, f: usize) -> Result<()> {
    if f > layout.n_disks() {
        return Err(Error::InvalidFailureCount {
            f,
            n_disks: layout.n_disks(),
        });
    }
    Ok(())
}

/// Alive sets with exactly `f` failed disks, ordered by the failed set's
/// bitmask value.
fn scenarios(n: usize, f: usize) -> impl Iterator<Item = AliveSet> {
    subsets_of_size(n, f).map(move |failed| AliveSet(failed).complement(n))
}

pub fn coverage(layout: &Layout, f: usize) -> Result<CoverageReport> {
    check_f(layout, f)?;
    let n = layout.n_disks();
    let mut total = 0u64;
    let mut failing = Vec::new();
    for alive in scenarios(n, f) {
        total += 1;
        if !is_fully_recoverable(layout, alive) {
            failing.push(alive);
        }
    }
    Ok(CoverageReport {
        layout: layout.name().to_string(),
        n,
        f,
        total,
        recovered: total - failing.len() as u64,
        failing,
    })
}

/// Every scenario with `f` failures is recoverable. Stops at the first
/// counterexample.
pub fn tolerates(layout: &Layout, f: usize) -> bool {
    f <= layout.n_disks() && scenarios(layout.n_disks(), f).all(|a| is_fully_recoverable(layout, a))
}

/// Largest `f` such that every scenario with at most `f` failures is
/// recoverable.
pub fn ft_degree(layout: &Layout) -> FtDegree {
    if !tolerates(layout, 0) {
        // Not even the intact array holds every block.
        return FtDegree(0);
    }
    let mut f = 0;
    while f < layout.n_disks() && tolerates(layout, f + 1) {
        f += 1;
    }
    FtDegree(f)
}

/// One scenario row: the alive disks and whether all blocks survive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioRow {
    pub alive: AliveSet,
    pub recoverable: bool,
}

/// Scenario verdicts with alive sets listed as ascending index
/// combinations (`D0 D1`, `D0 D2`, ..., `D3 D4`).
pub fn ft_table(layout: &Layout, f: usize) -> Result<Vec<ScenarioRow>> {
    check_f(layout, f)?;
    let n = layout.n_disks();
    Ok((0..n)
        .combinations(n - f)
        .map(|disks| {
            let alive: AliveSet = disks.into_iter().collect();
            ScenarioRow {
                alive,
                recoverable: is_fully_recoverable(layout, alive),
            }
        })
        .collect())
}

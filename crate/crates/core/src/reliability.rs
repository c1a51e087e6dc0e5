//! System reliability of a layout whose disks fail independently.
//!
//! The ground truth is the structure function induced by the decoder: the
//! array works in an alive set `S` iff every block is recoverable from `S`.
//! With i.i.d. per-disk survival probability `p`,
//!
//! ```text
//! R(p) = sum over working S of p^|S| (1-p)^(n-|S|) = sum_j A_j p^j (1-p)^(n-j)
//! ```
//!
//! where `A_j` counts working alive sets of size `j`. Two simpler structures
//! are kept alongside for comparison: k-out-of-n, and the parallel-of-series
//! formula `1 - prod_i (1 - prod_j r_ij)`. The latter treats every path as
//! independent, so it overestimates whenever paths share disks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::{subsets_of_size, AliveSet};
use crate::decoder::is_fully_recoverable;
use crate::error::{Error, Result};
use crate::ft_analysis::DEFAULT_MAX_EXACT_DISKS;
use crate::layout::Layout;

/// Default disk failure rate, per hour.
pub const DEFAULT_LAMBDA: f64 = 1e-4;

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

fn check_exact(layout: &Layout, limit: usize) -> Result<()> {
    // Alive sets are enumerated as integers below 2^n.
    let limit = limit.min(63);
    if layout.n_disks() > limit {
        return Err(Error::TooLargeForExact {
            n_disks: layout.n_disks(),
            limit,
        });
    }
    Ok(())
}

/// Exponential lifetime: a disk survives to `t` hours with probability
/// `exp(-lambda * t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiskModel {
    lambda: f64,
}

impl DiskModel {
    pub fn exponential(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidRate(lambda));
        }
        Ok(DiskModel { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn survival(&self, t: f64) -> f64 {
        (-self.lambda * t).exp()
    }
}

impl Default for DiskModel {
    fn default() -> Self {
        DiskModel {
            lambda: DEFAULT_LAMBDA,
        }
    }
}

/// Parallel paths, each a series of component reliabilities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathSet {
    paths: Vec<Vec<f64>>,
}

impl PathSet {
    pub fn new(paths: Vec<Vec<f64>>) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::InvalidStructure("no parallel paths".into()));
        }
        if let Some(&bad) = paths.iter().flatten().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::InvalidProbability(bad));
        }
        Ok(PathSet { paths })
    }

    pub fn paths(&self) -> &[Vec<f64>] {
        &self.paths
    }
}

/// `1 - prod_i (1 - prod_j r_ij)`.
pub fn naive_parallel_series(paths: &PathSet) -> f64 {
    1.0 - paths
        .paths
        .iter()
        .map(|series| 1.0 - series.iter().product::<f64>())
        .product::<f64>()
}

/// Probability that at least `k` of `n` i.i.d. components work.
pub fn koon_reliability(k: usize, n: usize, p: f64) -> Result<f64> {
    if k > n {
        return Err(Error::InvalidKooN { k, n });
    }
    check_p(p)?;
    Ok((k..=n)
        .map(|j| binomial(n, j) * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32))
        .sum())
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Direct sum over every working alive set, straight from the definition.
pub fn exact_reliability(layout: &Layout, p: f64) -> Result<f64> {
    exact_reliability_bounded(layout, p, DEFAULT_MAX_EXACT_DISKS)
}

pub fn exact_reliability_bounded(layout: &Layout, p: f64, max_disks: usize) -> Result<f64> {
    check_p(p)?;
    check_exact(layout, max_disks)?;
    let n = layout.n_disks();
    let mut total = 0.0;
    for alive in 0..(1u64 << n) {
        let alive = AliveSet(alive);
        if is_fully_recoverable(layout, alive) {
            let j = alive.len();
            total += p.powi(j as i32) * (1.0 - p).powi((n - j) as i32);
        }
    }
    Ok(total)
}

/// Working-set counts by size: `counts[j]` = number of alive sets of size
/// `j` in which every block is recoverable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReliabilityPolynomial {
    pub n: usize,
    pub counts: Vec<u64>,
}

impl ReliabilityPolynomial {
    pub fn of(layout: &Layout) -> Result<Self> {
        Self::of_bounded(layout, DEFAULT_MAX_EXACT_DISKS)
    }

    pub fn of_bounded(layout: &Layout, max_disks: usize) -> Result<Self> {
        check_exact(layout, max_disks)?;
        let n = layout.n_disks();
        let counts = (0..=n)
            .map(|j| {
                subsets_of_size(n, j)
                    .filter(|&m| is_fully_recoverable(layout, AliveSet(m)))
                    .count() as u64
            })
            .collect();
        Ok(ReliabilityPolynomial { n, counts })
    }

    pub fn evaluate(&self, p: f64) -> f64 {
        let q = 1.0 - p;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(j, &c)| c as f64 * p.powi(j as i32) * q.powi((self.n - j) as i32))
            .sum()
    }
}

/// Minimal working alive sets: removing any one disk breaks recovery.
pub fn minimal_path_sets(layout: &Layout) -> Result<Vec<AliveSet>> {
    minimal_path_sets_bounded(layout, DEFAULT_MAX_EXACT_DISKS)
}

pub fn minimal_path_sets_bounded(layout: &Layout, max_disks: usize) -> Result<Vec<AliveSet>> {
    check_exact(layout, max_disks)?;
    let n = layout.n_disks();
    let mut out = Vec::new();
    for j in 0..=n {
        for m in subsets_of_size(n, j) {
            let alive = AliveSet(m);
            if is_fully_recoverable(layout, alive)
                && alive.iter().all(|d| {
                    let mut less = alive;
                    less.remove(d);
                    !is_fully_recoverable(layout, less)
                })
            {
                out.push(alive);
            }
        }
    }
    Ok(out)
}

/// The parallel-of-series formula applied to the layout's minimal path
/// sets, every disk with reliability `p`.
pub fn naive_rbd_reliability(paths: &[AliveSet], p: f64) -> Result<f64> {
    check_p(p)?;
    let set = PathSet::new(paths.iter().map(|s| vec![p; s.len()]).collect())?;
    Ok(naive_parallel_series(&set))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "k")]
pub enum CurveMode {
    /// Every recoverable scenario counts.
    Exact,
    /// Only scenarios with at least `k` alive disks count.
    Koon(usize),
    /// Parallel-of-series over minimal path sets.
    NaiveRbd,
}

impl CurveMode {
    pub fn label(&self) -> String {
        match self {
            CurveMode::Exact => "exact".into(),
            CurveMode::Koon(k) => format!("koon{k}"),
            CurveMode::NaiveRbd => "naive-rbd".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReliabilityCurve {
    pub layout: String,
    pub mode: CurveMode,
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
}

/// Evaluates `mode` at `p(t)` for each time in `t_grid` (hours).
pub fn reliability_curve(
    layout: &Layout,
    model: DiskModel,
    t_grid: &[f64],
    mode: CurveMode,
) -> Result<ReliabilityCurve> {
    reliability_curve_bounded(layout, model, t_grid, mode, DEFAULT_MAX_EXACT_DISKS)
}

pub fn reliability_curve_bounded(
    layout: &Layout,
    model: DiskModel,
    t_grid: &[f64],
    mode: CurveMode,
    max_disks: usize,
) -> Result<ReliabilityCurve> {
    if let Some(&t) = t_grid.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::InvalidTime(format!(
            "time {t} is negative or not finite"
        )));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTime(
            "time grid must be strictly ascending".into(),
        ));
    }
    let n = layout.n_disks();
    let eval: Box<dyn Fn(f64) -> f64> = match mode {
        CurveMode::Exact => {
            let poly = ReliabilityPolynomial::of_bounded(layout, max_disks)?;
            Box::new(move |p| poly.evaluate(p))
        }
        CurveMode::Koon(k) => {
            koon_reliability(k, n, 1.0)?;
            Box::new(move |p| koon_reliability(k, n, p).expect("validated"))
        }
        CurveMode::NaiveRbd => {
            let paths = minimal_path_sets_bounded(layout, max_disks)?;
            if paths.is_empty() {
                Box::new(|_| 0.0)
            } else {
                Box::new(move |p| naive_rbd_reliability(&paths, p).expect("validated"))
            }
        }
    };
    let values = t_grid.iter().map(|&t| eval(model.survival(t))).collect();
    Ok(ReliabilityCurve {
        layout: layout.name().to_string(),
        mode,
        t_grid: t_grid.to_vec(),
        values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub successes: u64,
}

/// Samples `trials` alive sets with per-disk survival `p` and reports the
/// fraction that recover every block, with its binomial standard error.
/// The ChaCha8 stream is seeded from `seed` alone, so equal inputs give
/// equal outputs.
pub fn monte_carlo_reliability(
    layout: &Layout,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_p(p)?;
    if trials == 0 {
        return Err(Error::InvalidTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = layout.n_disks();
    let mut successes = 0u64;
    for _ in 0..trials {
        let mut alive = AliveSet::EMPTY;
        for d in 0..n {
            if rng.gen::<f64>() < p {
                alive.insert(d);
            }
        }
        if is_fully_recoverable(layout, alive) {
            successes += 1;
        }
    }
    let estimate = successes as f64 / trials as f64;
    let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    Ok(McEstimate {
        estimate,
        std_error,
        trials,
        successes,
    })
}

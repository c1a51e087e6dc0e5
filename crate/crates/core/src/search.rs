//! Exhaustive searches over cell placements.
//!
//! The parity families are searched over their rotation offsets (every disk
//! uses the same pattern shifted by its index). The replication-only family
//! is searched over every balanced placement: each block stored three times,
//! each disk holding three copies, deduplicated up to relabeling of disks
//! and blocks.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ft_analysis::{coverage, ft_degree};
use crate::layout::{generate_pp, generate_rp, Cell, Layout, MIN_GENERATED_DISKS};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Descriptor {
    /// Rows `{d}`, `{d+a1, d+b1}`, `{d+a2, d+b2}`.
    Pp {
        a1: usize,
        b1: usize,
        a2: usize,
        b2: usize,
    },
    /// Rows `{d}`, `{d-rho}`, `{d+a, d+b}`.
    Rp { rho: usize, a: usize, b: usize },
    /// `copies[d][b]` copies of block `b` on disk `d`.
    Replication { copies: Vec<Vec<u8>> },
}

impl Descriptor {
    /// Ordering key used to break ties between equal scores.
    pub fn key(&self) -> Vec<usize> {
        match self {
            Descriptor::Pp { a1, b1, a2, b2 } => vec![*a1, *b1, *a2, *b2],
            Descriptor::Rp { rho, a, b } => vec![*rho, *a, *b],
            Descriptor::Replication { copies } => canonical_key(copies),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Descriptor::Pp { a1, b1, a2, b2 } => format!("pp({a1},{b1},{a2},{b2})"),
            Descriptor::Rp { rho, a, b } => format!("rp({rho},{a},{b})"),
            Descriptor::Replication { copies } => {
                let disks: Vec<String> = copies
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .flat_map(|(b, &c)| std::iter::repeat_n(b, c as usize))
                            .map(|b| b.to_string())
                            .collect::<Vec<_>>()
                            .join("")
                    })
                    .collect();
                format!("rep[{}]", disks.join("|"))
            }
        }
    }

    pub fn build(&self, n: usize) -> Result<Layout> {
        match self {
            Descriptor::Pp { a1, b1, a2, b2 } => {
                generate_pp(n, *a1 as i64, *b1 as i64, *a2 as i64, *b2 as i64)
            }
            Descriptor::Rp { rho, a, b } => generate_rp(n, *rho as i64, *a as i64, *b as i64),
            Descriptor::Replication { copies } => replication_layout(copies),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateScore {
    pub descriptor: Descriptor,
    pub label: String,
    pub ft_degree: usize,
    /// Fully recoverable scenarios with `ft_degree + 1` failures.
    pub next_recovered: u64,
    pub next_total: u64,
    pub key: Vec<usize>,
}

impl CandidateScore {
    pub fn next_fraction(&self) -> f64 {
        if self.next_total == 0 {
            1.0
        } else {
            self.next_recovered as f64 / self.next_total as f64
        }
    }

    /// Degree descending, then next-step coverage descending, then key
    /// ascending.
    pub fn rank_cmp(&self, other: &CandidateScore) -> Ordering {
        other
            .ft_degree
            .cmp(&self.ft_degree)
            .then_with(|| fraction_cmp(other, self))
            .then_with(|| self.key.cmp(&other.key))
    }
}

/// Exact comparison of `recovered / total`.
fn fraction_cmp(x: &CandidateScore, y: &CandidateScore) -> Ordering {
    let lhs = x.next_recovered as u128 * y.next_total.max(1) as u128;
    let rhs = y.next_recovered as u128 * x.next_total.max(1) as u128;
    let (lhs, rhs) = match (x.next_total, y.next_total) {
        (0, 0) => (1, 1),
        (0, _) => (1, 0),
        (_, 0) => (0, 1),
        _ => (lhs, rhs),
    };
    lhs.cmp(&rhs)
}

/// Scores one layout from scratch with the fault-tolerance routines.
pub fn score_layout(descriptor: Descriptor, layout: &Layout) -> CandidateScore {
    let degree = ft_degree(layout).0;
    let (next_recovered, next_total) = if degree < layout.n_disks() {
        let r = coverage(layout, degree + 1).expect("degree + 1 <= n");
        (r.recovered, r.total)
    } else {
        (0, 0)
    };
    CandidateScore {
        label: descriptor.label(),
        key: descriptor.key(),
        descriptor,
        ft_degree: degree,
        next_recovered,
        next_total,
    }
}

fn rank(n: usize, candidates: Vec<Descriptor>) -> Vec<CandidateScore> {
    let mut scored: Vec<CandidateScore> = candidates
        .into_par_iter()
        .map(|d| {
            let layout = d.build(n).expect("candidates are valid by construction");
            score_layout(d, &layout)
        })
        .collect();
    scored.sort_by(|a, b| a.rank_cmp(b));
    scored
}

/// The leading run of candidates sharing the best score.
pub fn maximizers(ranked: &[CandidateScore]) -> &[CandidateScore] {
    let Some(first) = ranked.first() else {
        return ranked;
    };
    let end = ranked
        .iter()
        .position(|c| c.ft_degree != first.ft_degree || fraction_cmp(c, first) != Ordering::Equal)
        .unwrap_or(ranked.len());
    &ranked[..end]
}

fn check_rotational(n: usize) -> Result<()> {
    if n < MIN_GENERATED_DISKS {
        return Err(Error::UnsupportedSize(format!(
            "offset search needs at least {MIN_GENERATED_DISKS} disks, got {n}"
        )));
    }
    Ok(())
}

/// Every parity-parity offset pattern, with each parity cell's offsets
/// sorted and the two parity rows in ascending order.
pub fn pp_candidates(n: usize) -> Vec<Descriptor> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let mut out = Vec::new();
    for (i, &(a1, b1)) in pairs.iter().enumerate() {
        for &(a2, b2) in &pairs[i..] {
            out.push(Descriptor::Pp { a1, b1, a2, b2 });
        }
    }
    out
}

pub fn rp_candidates(n: usize) -> Vec<Descriptor> {
    (1..n)
        .flat_map(|rho| {
            (0..n)
                .tuple_combinations()
                .map(move |(a, b)| Descriptor::Rp { rho, a, b })
        })
        .collect()
}

pub fn search_pp_offsets(n: usize) -> Result<Vec<CandidateScore>> {
    check_rotational(n)?;
    Ok(rank(n, pp_candidates(n)))
}

pub fn search_rp_offsets(n: usize) -> Result<Vec<CandidateScore>> {
    check_rotational(n)?;
    Ok(rank(n, rp_candidates(n)))
}

/// Copies per disk and per block in a balanced replication placement.
pub const REPLICATION_FACTOR: u8 = 3;

fn replication_layout(copies: &[Vec<u8>]) -> Result<Layout> {
    let n_blocks = copies.first().map_or(0, |r| r.len());
    let disks = copies
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .flat_map(|(b, &c)| std::iter::repeat_n(Cell::single(b), c as usize))
                .collect()
        })
        .collect();
    Layout::new("replication", n_blocks, disks)
}

/// All `n x n` matrices of copy counts whose rows and columns each sum to
/// [`REPLICATION_FACTOR`].
pub fn balanced_placements(n: usize) -> Vec<Vec<Vec<u8>>> {
    fn rows_with_sum(n: usize, sum: u8, caps: &[u8], prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let j = prefix.len();
        if j == n {
            if sum == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for c in 0..=sum.min(caps[j]) {
            prefix.push(c);
            rows_with_sum(n, sum - c, caps, prefix, out);
            prefix.pop();
        }
    }

    fn fill(n: usize, caps: &mut Vec<u8>, acc: &mut Vec<Vec<u8>>, out: &mut Vec<Vec<Vec<u8>>>) {
        if acc.len() == n {
            if caps.iter().all(|&c| c == 0) {
                out.push(acc.clone());
            }
            return;
        }
        let mut rows = Vec::new();
        rows_with_sum(n, REPLICATION_FACTOR, caps, &mut Vec::new(), &mut rows);
        for row in rows {
            for (c, r) in caps.iter_mut().zip(&row) {
                *c -= r;
            }
            acc.push(row.clone());
            fill(n, caps, acc, out);
            acc.pop();
            for (c, r) in caps.iter_mut().zip(&row) {
                *c += r;
            }
        }
    }

    let mut out = Vec::new();
    fill(
        n,
        &mut vec![REPLICATION_FACTOR; n],
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Smallest column-major reading over all disk orders, with blocks (columns)
/// sorted for each order. Equal for placements that differ only by
/// relabeling disks and blocks.
pub fn canonical_key(copies: &[Vec<u8>]) -> Vec<usize> {
    let orders: Vec<Vec<usize>> = (0..copies.len()).permutations(copies.len()).collect();
    canonical_key_with(copies, &orders)
}

/// Columns are packed two bits per entry, first row most significant, so
/// integer order on packed columns is lexicographic order on the columns.
fn canonical_key_with(copies: &[Vec<u8>], orders: &[Vec<usize>]) -> Vec<usize> {
    let n_rows = copies.len();
    let n_cols = copies.first().map_or(0, |r| r.len());
    assert!(n_rows <= 32 && copies.iter().flatten().all(|&c| c <= 3));
    let mut best: Option<Vec<u64>> = None;
    let mut cols = vec![0u64; n_cols];
    for order in orders {
        for (b, col) in cols.iter_mut().enumerate() {
            *col = order
                .iter()
                .fold(0, |acc, &d| acc << 2 | copies[d][b] as u64);
        }
        cols.sort_unstable();
        if best.as_ref().is_none_or(|cur| cols < *cur) {
            best = Some(cols.clone());
        }
    }
    best.unwrap_or_default()
        .into_iter()
        .flat_map(|packed| {
            (0..n_rows)
                .rev()
                .map(move |r| (packed >> (2 * r) & 3) as usize)
        })
        .collect()
}

fn from_key(key: &[usize], n: usize) -> Vec<Vec<u8>> {
    (0..n)
        .map(|d| (0..n).map(|b| key[b * n + d] as u8).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplicationSearch {
    pub n: usize,
    /// Balanced placements enumerated before deduplication.
    pub placements: usize,
    /// Classes up to disk and block relabeling.
    pub classes: usize,
    pub max_ft_degree: usize,
    /// Best count of recoverable scenarios with three failed disks.
    pub max_recovered_at_3: u64,
    pub total_at_3: u64,
    /// Classes that survive every three-disk failure. Zero certifies that no
    /// balanced replication placement reaches degree 3.
    pub classes_tolerating_3: usize,
    pub best: CandidateScore,
    pub ranking: Vec<CandidateScore>,
}

pub fn search_replication_placements(n: usize) -> Result<ReplicationSearch> {
    if n != 5 {
        return Err(Error::UnsupportedSize(format!(
            "replication placement search is exhaustive only for 5 disks, got {n}"
        )));
    }
    let placements = balanced_placements(n);
    let orders: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let classes: BTreeSet<Vec<usize>> = placements
        .par_iter()
        .map(|m| canonical_key_with(m, &orders))
        .collect();
    let candidates: Vec<Descriptor> = classes
        .iter()
        .map(|key| Descriptor::Replication {
            copies: from_key(key, n),
        })
        .collect();

    let at_3: Vec<(u64, u64)> = candidates
        .par_iter()
        .map(|d| {
            let r = coverage(&d.build(n).expect("balanced placement"), 3).expect("3 <= n");
            (r.recovered, r.total)
        })
        .collect();
    let ranking = rank(n, candidates);
    let best = ranking.first().cloned().expect("at least one placement");

    Ok(ReplicationSearch {
        n,
        placements: placements.len(),
        classes: classes.len(),
        max_ft_degree: best.ft_degree,
        max_recovered_at_3: at_3.iter().map(|&(r, _)| r).max().unwrap_or(0),
        total_at_3: at_3.first().map_or(0, |&(_, t)| t),
        classes_tolerating_3: at_3.iter().filter(|&&(r, t)| r == t).count(),
        best,
        ranking,
    })
}

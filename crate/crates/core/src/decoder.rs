//! Recoverability of data blocks from the cells on surviving disks.
//!
//! Each cell is a vector over GF(2) (bit `i` set iff block `i` is a member).
//! Block `i` is recoverable exactly when the unit vector `e_i` lies in the
//! span of the surviving cells' vectors; that is decided by Gaussian
//! elimination over `u64` rows. Chaining pairwise XORs, as one does by hand,
//! finds a subset of these cases.

use serde::Serialize;

use crate::bits::{AliveSet, BlockSet};
use crate::error::{Error, Result};
use crate::layout::{BlockId, Cell, Layout};

/// Echelon basis keyed by each row's highest set bit.
#[derive(Clone)]
struct XorBasis {
    rows: [u64; 64],
    rank: usize,
}

impl XorBasis {
    fn new() -> Self {
        XorBasis {
            rows: [0; 64],
            rank: 0,
        }
    }

    fn reduce(&self, mut v: u64) -> u64 {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if self.rows[top] == 0 {
                break;
            }
            v ^= self.rows[top];
        }
        v
    }

    fn insert(&mut self, v: u64) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        self.rows[63 - r.leading_zeros() as usize] = r;
        self.rank += 1;
        true
    }

    /// `v` is in the span iff reducing it leaves nothing. Reduction only stops
    /// early when the top bit has no pivot, in which case `v` is outside.
    fn spans(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }
}

fn alive_cells(
    layout: &Layout,
    alive: AliveSet,
) -> impl Iterator<Item = (usize, usize, Cell)> + '_ {
    layout.cells().filter(move |&(d, _, _)| alive.contains(d))
}

fn basis_of(layout: &Layout, alive: AliveSet) -> XorBasis {
    let mut basis = XorBasis::new();
    for (_, _, cell) in alive_cells(layout, alive) {
        basis.insert(cell.vector());
        if basis.rank == layout.n_blocks() {
            break;
        }
    }
    basis
}

/// Blocks whose unit vector lies in the span of the alive cells.
/// Disk indices in `alive` beyond the layout are ignored.
pub fn recoverable_blocks(layout: &Layout, alive: AliveSet) -> BlockSet {
    let basis = basis_of(layout, alive);
    (0..layout.n_blocks())
        .filter(|&i| basis.spans(1u64 << i))
        .collect()
}

/// True iff every data block can be rebuilt. Cell vectors live in a
/// `n_blocks`-dimensional space, so this is a rank test.
pub fn is_fully_recoverable(layout: &Layout, alive: AliveSet) -> bool {
    basis_of(layout, alive).rank == layout.n_blocks()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveryStep {
    pub disk: usize,
    pub row: usize,
    pub cell: Cell,
}

/// Cells whose XOR equals one data block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveryPlan {
    pub target: BlockId,
    pub steps: Vec<RecoveryStep>,
}

impl RecoveryPlan {
    /// GF(2) sum of the step cells' member sets.
    pub fn combined(&self) -> BlockSet {
        BlockSet(self.steps.iter().fold(0, |acc, s| acc ^ s.cell.vector()))
    }

    /// Reads each step cell off `disk_contents[disk][row]` and XORs them.
    pub fn replay<F: Fn(usize, usize) -> u64>(&self, read: F) -> u64 {
        self.steps
            .iter()
            .fold(0, |acc, s| acc ^ read(s.disk, s.row))
    }
}

/// Echelon row plus the set of alive-cell indices it was built from.
struct TrackedRow {
    vector: u64,
    sources: Vec<u64>,
}

fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (a, b) in dst.iter_mut().zip(src) {
        *a ^= *b;
    }
}

/// Builds an XOR recipe for `target` from cells on alive disks.
///
/// A verbatim copy on an alive disk wins outright. Otherwise cells are
/// eliminated in (disk, row) order and the row operations are replayed to
/// express `e_target` in terms of the independent cells; steps are then
/// ordered so each partial XOR stays as small as possible, which reads like
/// a chain of pairwise recoveries.
pub fn recovery_plan(layout: &Layout, alive: AliveSet, target: BlockId) -> Result<RecoveryPlan> {
    if target.0 >= layout.n_blocks() {
        return Err(Error::IndexOutOfRange {
            index: target.0,
            n_blocks: layout.n_blocks(),
        });
    }
    let cells: Vec<(usize, usize, Cell)> = alive_cells(layout, alive).collect();

    if let Some(&(disk, row, cell)) = cells.iter().find(|(_, _, c)| c.as_copy() == Some(target)) {
        return Ok(RecoveryPlan {
            target,
            steps: vec![RecoveryStep { disk, row, cell }],
        });
    }

    let words = cells.len().div_ceil(64).max(1);
    let mut pivots: [Option<TrackedRow>; 64] = std::array::from_fn(|_| None);
    for (idx, &(_, _, cell)) in cells.iter().enumerate() {
        let mut vector = cell.vector();
        let mut sources = vec![0u64; words];
        sources[idx / 64] |= 1 << (idx % 64);
        while vector != 0 {
            let top = 63 - vector.leading_zeros() as usize;
            match &pivots[top] {
                Some(row) => {
                    vector ^= row.vector;
                    xor_words(&mut sources, &row.sources);
                }
                None => break,
            }
        }
        if vector != 0 {
            let top = 63 - vector.leading_zeros() as usize;
            pivots[top] = Some(TrackedRow { vector, sources });
        }
    }

    let mut vector = 1u64 << target.0;
    let mut sources = vec![0u64; words];
    while vector != 0 {
        let top = 63 - vector.leading_zeros() as usize;
        match &pivots[top] {
            Some(row) => {
                vector ^= row.vector;
                xor_words(&mut sources, &row.sources);
            }
            None => return Err(Error::NotRecoverable(target.0)),
        }
    }

    let mut chosen: Vec<RecoveryStep> = (0..cells.len())
        .filter(|&i| sources[i / 64] >> (i % 64) & 1 == 1)
        .map(|i| {
            let (disk, row, cell) = cells[i];
            RecoveryStep { disk, row, cell }
        })
        .collect();

    let mut steps = Vec::with_capacity(chosen.len());
    let mut acc = 0u64;
    while !chosen.is_empty() {
        // First minimum keeps (disk, row) order among ties.
        let (pick, _) = chosen
            .iter()
            .enumerate()
            .min_by_key(|(_, s)| (acc ^ s.cell.vector()).count_ones())
            .expect("nonempty");
        let step = chosen.remove(pick);
        acc ^= step.cell.vector();
        steps.push(step);
    }
    debug_assert_eq!(acc, 1u64 << target.0);
    Ok(RecoveryPlan { target, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{generate_named, Scheme};

    fn alive(ds: &[usize]) -> AliveSet {
        ds.iter().copied().collect()
    }

    fn named(s: Scheme) -> Layout {
        generate_named(s, 5).unwrap()
    }

    #[test]
    fn recoverable_examples() {
        assert_eq!(
            recoverable_blocks(&named(Scheme::RR), alive(&[0, 1])).to_vec(),
            vec![0, 1, 3, 4]
        );
        assert_eq!(
            recoverable_blocks(&named(Scheme::PP1), alive(&[0, 1])).to_vec(),
            vec![0, 1, 2, 3, 4]
        );
        assert_eq!(
            recoverable_blocks(&named(Scheme::RP1), alive(&[0, 2])).to_vec(),
            vec![0, 1, 2, 4]
        );
        for s in Scheme::ALL {
            assert_eq!(
                recoverable_blocks(&named(s), AliveSet::full(5)),
                BlockSet::full(5)
            );
            assert!(recoverable_blocks(&named(s), AliveSet::EMPTY).is_empty());
        }
    }

    #[test]
    fn full_recovery_examples() {
        assert!(is_fully_recoverable(&named(Scheme::RR), alive(&[0, 2])));
        assert!(!is_fully_recoverable(&named(Scheme::PP1), alive(&[0, 2])));
        assert!(is_fully_recoverable(&named(Scheme::PP2), alive(&[3, 4])));
        assert!(!is_fully_recoverable(&named(Scheme::PP2), AliveSet::EMPTY));
    }

    #[test]
    fn plan_by_chaining() {
        let plan = recovery_plan(&named(Scheme::PP1), alive(&[0, 1]), BlockId(3)).unwrap();
        let got: Vec<(usize, Vec<usize>)> = plan
            .steps
            .iter()
            .map(|s| (s.disk, s.cell.members().to_vec()))
            .collect();
        assert_eq!(got, vec![(1, vec![1]), (0, vec![1, 2]), (1, vec![2, 3])]);
        assert_eq!(plan.combined().to_vec(), vec![3]);
    }

    #[test]
    fn plan_uses_replica() {
        let plan = recovery_plan(&named(Scheme::RR), alive(&[0, 2]), BlockId(1)).unwrap();
        assert_eq!(
            plan.steps,
            vec![RecoveryStep {
                disk: 2,
                row: 1,
                cell: Cell::single(1)
            }]
        );
    }

    #[test]
    fn plan_errors() {
        assert_eq!(
            recovery_plan(&named(Scheme::RR), alive(&[0, 1]), BlockId(2)),
            Err(Error::NotRecoverable(2))
        );
        assert!(matches!(
            recovery_plan(&named(Scheme::RR), alive(&[0, 1]), BlockId(5)),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn plans_over_many_cells() {
        // More than 64 alive cells exercises multi-word source tracking.
        let n = 40;
        let layout = generate_named(Scheme::PP1, n).unwrap();
        let all = AliveSet::full(n);
        let mut only_parity = all;
        only_parity.remove(7);
        for t in 0..n {
            let plan = recovery_plan(&layout, only_parity, BlockId(t)).unwrap();
            assert_eq!(plan.combined(), BlockSet::singleton(t));
            assert!(plan.steps.iter().all(|s| only_parity.contains(s.disk)));
        }
    }
}

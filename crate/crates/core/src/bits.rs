//! Fixed-width index sets backed by a single `u64`.
//!
//! Disks and blocks are both capped at [`MAX_WIDTH`], which keeps cell vectors
//! and failure scenarios as plain machine words.

use std::fmt;

use serde::{Serialize, Serializer};

/// Upper bound on disks per layout and blocks per stripe.
pub const MAX_WIDTH: usize = 64;

macro_rules! index_set {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
        pub struct $name(pub u64);

        impl $name {
            pub const EMPTY: Self = Self(0);

            /// `{0, 1, ..., n-1}`.
            pub fn full(n: usize) -> Self {
                debug_assert!(n <= MAX_WIDTH);
                if n >= 64 {
                    Self(u64::MAX)
                } else {
                    Self((1u64 << n) - 1)
                }
            }

            pub fn singleton(i: usize) -> Self {
                debug_assert!(i < MAX_WIDTH);
                Self(1u64 << i)
            }

            pub fn bits(self) -> u64 {
                self.0
            }

            pub fn contains(self, i: usize) -> bool {
                i < MAX_WIDTH && self.0 >> i & 1 == 1
            }

            pub fn insert(&mut self, i: usize) {
                debug_assert!(i < MAX_WIDTH);
                self.0 |= 1u64 << i;
            }

            pub fn remove(&mut self, i: usize) {
                debug_assert!(i < MAX_WIDTH);
                self.0 &= !(1u64 << i);
            }

            pub fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            pub fn is_empty(self) -> bool {
                self.0 == 0
            }

            pub fn is_subset(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            /// Members in ascending order.
            pub fn iter(self) -> impl Iterator<Item = usize> {
                let mut rest = self.0;
                std::iter::from_fn(move || {
                    if rest == 0 {
                        None
                    } else {
                        let i = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        Some(i)
                    }
                })
            }

            pub fn to_vec(self) -> Vec<usize> {
                self.iter().collect()
            }
        }

        impl FromIterator<usize> for $name {
            fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
                let mut s = Self::EMPTY;
                for i in iter {
                    s.insert(i);
                }
                s
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_seq(self.iter())
            }
        }
    };
}

index_set!(
    /// Disks that survive a failure scenario. The complement within
    /// `0..n_disks` is the failed set.
    AliveSet
);

index_set!(
    /// A set of data block indices.
    BlockSet
);

impl AliveSet {
    /// Disks of `0..n` not in this set.
    pub fn complement(self, n: usize) -> Self {
        Self(!self.0 & Self::full(n).0)
    }

    /// Renders as the table label used for scenario rows, e.g. `D0 D2`.
    pub fn label(self) -> String {
        self.iter()
            .map(|d| format!("D{d}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for AliveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Iterates every `k`-subset of `0..n` as a bitmask, in ascending integer
/// order (Gosper's hack).
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(n <= MAX_WIDTH, "n = {n} exceeds {MAX_WIDTH}");
    let limit: u128 = 1u128 << n;
    let mut next: Option<u64> = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(((1u128 << k) - 1) as u64)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur as u128 + c as u128;
            let succ = ((((r as u64) ^ cur) >> 2) / c) as u128 | r;
            (succ < limit).then_some(succ as u64)
        };
        Some(cur)
    })
}

//! Stripe layouts: which cells each disk stores.
//!
//! A layout holds one stripe of `n_blocks` data blocks spread over `n_disks`
//! disks. Each disk stores an ordered list of cells (its rows). A cell is a
//! nonempty set of block indices: a singleton is a stored copy of that block
//! (primary or replica), and a larger set is the XOR parity of its members.
//!
//! The five named schemes place three cells per disk using a pattern of
//! offsets rotated by disk index, modulo `n`:
//!
//! | scheme | row 0 | row 1          | row 2          |
//! |--------|-------|----------------|----------------|
//! | RR     | `{d}` | `{d-1}`        | `{d-2}`        |
//! | PP1    | `{d}` | `{d+1, d+2}`   | `{d+3, d+4}`   |
//! | PP2    | `{d}` | `{d, d+2}`     | `{d+3, d+4}`   |
//! | RP1    | `{d}` | `{d-1}`        | `{d, d+2}`     |
//! | RP2    | `{d}` | `{d-1}`        | `{d+1, d+2}`   |

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bits::{BlockSet, MAX_WIDTH};
use crate::error::{Error, Result};

/// Smallest disk count the rotational generators accept.
pub const MIN_GENERATED_DISKS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockId(pub usize);

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}", self.0)
    }
}

/// A stored cell: one block copy, or the XOR of two or more distinct blocks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell(BlockSet);

impl Cell {
    /// Builds a cell from its member blocks. Repeated members are rejected,
    /// since `x ^ x` cancels and would leave a useless cell.
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Result<Self> {
        let mut set = BlockSet::EMPTY;
        for i in members {
            if i >= MAX_WIDTH {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    n_blocks: MAX_WIDTH,
                });
            }
            if set.contains(i) {
                return Err(Error::DegenerateCell(format!(
                    "block {i} appears twice in one cell"
                )));
            }
            set.insert(i);
        }
        if set.is_empty() {
            return Err(Error::DegenerateCell("empty cell".into()));
        }
        Ok(Cell(set))
    }

    pub fn single(block: usize) -> Self {
        Cell(BlockSet::singleton(block))
    }

    pub fn members(self) -> BlockSet {
        self.0
    }

    /// Characteristic vector over GF(2).
    pub fn vector(self) -> u64 {
        self.0.bits()
    }

    pub fn is_parity(self) -> bool {
        self.0.len() >= 2
    }

    /// The block this cell stores verbatim, if it is a singleton.
    pub fn as_copy(self) -> Option<BlockId> {
        (self.0.len() == 1).then(|| BlockId(self.0.bits().trailing_zeros() as usize))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_copy() {
            Some(b) => write!(f, "{b}"),
            None => {
                let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
                write!(f, "X({})", parts.join(","))
            }
        }
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// One stripe's placement of cells on disks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Layout {
    name: String,
    n_blocks: usize,
    disks: Vec<Vec<Cell>>,
}

impl Layout {
    /// Validates block indices against `n_blocks`. Blocks that are never
    /// stored as a singleton are allowed; see [`Layout::unstored_blocks`].
    pub fn new(name: impl Into<String>, n_blocks: usize, disks: Vec<Vec<Cell>>) -> Result<Self> {
        let name = name.into();
        if disks.is_empty() || disks.len() > MAX_WIDTH {
            return Err(Error::UnsupportedSize(format!(
                "disk count must be in 1..={MAX_WIDTH}, got {}",
                disks.len()
            )));
        }
        if n_blocks == 0 || n_blocks > MAX_WIDTH {
            return Err(Error::UnsupportedSize(format!(
                "block count must be in 1..={MAX_WIDTH}, got {n_blocks}"
            )));
        }
        for cell in disks.iter().flatten() {
            if let Some(index) = cell.members().iter().find(|&i| i >= n_blocks) {
                return Err(Error::IndexOutOfRange { index, n_blocks });
            }
        }
        Ok(Layout {
            name,
            n_blocks,
            disks,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n_disks(&self) -> usize {
        self.disks.len()
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn disk(&self, d: usize) -> &[Cell] {
        &self.disks[d]
    }

    pub fn disks(&self) -> &[Vec<Cell>] {
        &self.disks
    }

    /// `(disk, row, cell)` in disk-major, row-minor order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, Cell)> + '_ {
        self.disks
            .iter()
            .enumerate()
            .flat_map(|(d, rows)| rows.iter().enumerate().map(move |(r, &c)| (d, r, c)))
    }

    /// Same grid, ignoring the name.
    pub fn same_cells(&self, other: &Layout) -> bool {
        self.n_blocks == other.n_blocks && self.disks == other.disks
    }

    /// Blocks never stored verbatim anywhere in the grid.
    pub fn unstored_blocks(&self) -> Vec<BlockId> {
        let stored: BlockSet = self
            .cells()
            .filter_map(|(_, _, c)| c.as_copy())
            .map(|b| b.0)
            .collect();
        (0..self.n_blocks)
            .filter(|&i| !stored.contains(i))
            .map(BlockId)
            .collect()
    }

    /// Copy of this layout with disk `d` moved to position `perm[d]`.
    pub fn permute_disks(&self, perm: &[usize]) -> Layout {
        assert_eq!(perm.len(), self.n_disks());
        let mut disks = vec![Vec::new(); self.n_disks()];
        for (d, rows) in self.disks.iter().enumerate() {
            disks[perm[d]] = rows.clone();
        }
        Layout {
            name: self.name.clone(),
            n_blocks: self.n_blocks,
            disks,
        }
    }
}

/// The five named rotational schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Scheme {
    RR,
    PP1,
    PP2,
    RP1,
    RP2,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::RR,
        Scheme::PP1,
        Scheme::PP2,
        Scheme::RP1,
        Scheme::RP2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::RR => "RR",
            Scheme::PP1 => "PP1",
            Scheme::PP2 => "PP2",
            Scheme::RP1 => "RP1",
            Scheme::RP2 => "RP2",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::InvalidLayout(format!(
                    "unknown scheme `{s}` (expected RR, PP1, PP2, RP1 or RP2)"
                ))
            })
    }
}

/// Per-row member offsets relative to the disk index.
type RowPattern = Vec<Vec<i64>>;

fn rotate(name: String, n: usize, pattern: &RowPattern) -> Result<Layout> {
    let ni = n as i64;
    let disks = (0..n)
        .map(|d| {
            pattern
                .iter()
                .map(|offsets| {
                    Cell::new(
                        offsets
                            .iter()
                            .map(|o| (d as i64 + o).rem_euclid(ni) as usize),
                    )
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Layout::new(name, n, disks)
}

fn check_generated_size(n: usize) -> Result<()> {
    if n < MIN_GENERATED_DISKS {
        return Err(Error::UnsupportedSize(format!(
            "rotational schemes need at least {MIN_GENERATED_DISKS} disks, got {n}"
        )));
    }
    if n > MAX_WIDTH {
        return Err(Error::UnsupportedSize(format!(
            "at most {MAX_WIDTH} disks supported, got {n}"
        )));
    }
    Ok(())
}

pub fn generate_named(scheme: Scheme, n: usize) -> Result<Layout> {
    check_generated_size(n)?;
    let pattern: RowPattern = match scheme {
        Scheme::RR => vec![vec![0], vec![-1], vec![-2]],
        Scheme::PP1 => vec![vec![0], vec![1, 2], vec![3, 4]],
        Scheme::PP2 => vec![vec![0], vec![0, 2], vec![3, 4]],
        Scheme::RP1 => vec![vec![0], vec![-1], vec![0, 2]],
        Scheme::RP2 => vec![vec![0], vec![-1], vec![1, 2]],
    };
    rotate(scheme.name().to_string(), n, &pattern)
}

fn same_mod(a: i64, b: i64, n: usize) -> bool {
    (a - b).rem_euclid(n as i64) == 0
}

/// Parity-parity family: disk `d` stores `{d}`, `{d+a1, d+b1}`, `{d+a2, d+b2}`.
pub fn generate_pp(n: usize, a1: i64, b1: i64, a2: i64, b2: i64) -> Result<Layout> {
    check_generated_size(n)?;
    if same_mod(a1, b1, n) || same_mod(a2, b2, n) {
        return Err(Error::DegenerateCell(format!(
            "parity offsets ({a1},{b1}) / ({a2},{b2}) coincide mod {n}"
        )));
    }
    let m = |x: i64| x.rem_euclid(n as i64);
    let name = format!("PP_{}_{}_{}_{}", m(a1), m(b1), m(a2), m(b2));
    rotate(name, n, &vec![vec![0], vec![a1, b1], vec![a2, b2]])
}

/// Replica-parity family: disk `d` stores `{d}`, `{d-rho}`, `{d+a, d+b}`.
pub fn generate_rp(n: usize, rho: i64, a: i64, b: i64) -> Result<Layout> {
    check_generated_size(n)?;
    if same_mod(rho, 0, n) {
        return Err(Error::DegenerateCell(format!(
            "replica offset {rho} places the replica on its primary's disk"
        )));
    }
    if same_mod(a, b, n) {
        return Err(Error::DegenerateCell(format!(
            "parity offsets ({a},{b}) coincide mod {n}"
        )));
    }
    let m = |x: i64| x.rem_euclid(n as i64);
    let name = format!("RP_{}_{}_{}", m(rho), m(a), m(b));
    rotate(name, n, &vec![vec![0], vec![-rho], vec![a, b]])
}

/// Canonical text form: header lines, then one `disk` line per disk in
/// ascending order with members sorted inside each parity cell.
pub fn serialize_layout(layout: &Layout) -> String {
    let mut out = String::new();
    out.push_str(&format!("name = {}\n", layout.name));
    out.push_str(&format!("disks = {}\n", layout.n_disks()));
    out.push_str(&format!("blocks = {}\n", layout.n_blocks));
    for (d, rows) in layout.disks.iter().enumerate() {
        let cells: Vec<String> = rows.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("disk {d}: {}\n", cells.join(", ")));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseWarning {
    /// The block only occurs inside parity cells.
    UnstoredBlock(BlockId),
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWarning::UnstoredBlock(b) => {
                write!(
                    f,
                    "warning: block {} is never stored as a singleton cell",
                    b.0
                )
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParsedLayout {
    pub layout: Layout,
    pub warnings: Vec<ParseWarning>,
}

pub fn parse_layout(text: &str) -> Result<ParsedLayout> {
    let mut name: Option<String> = None;
    let mut n_disks: Option<usize> = None;
    let mut n_blocks: Option<usize> = None;
    // (line number, disk index, cells)
    let mut disk_lines: Vec<(usize, usize, Vec<Vec<usize>>)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(content, line_no);
        cur.skip_ws();
        let word = cur.word();
        match word.as_str() {
            "name" | "disks" | "blocks" => {
                cur.skip_ws();
                cur.expect('=')?;
                cur.skip_ws();
                let col = cur.column();
                let value = cur.rest().trim_end().to_string();
                if value.is_empty() {
                    return Err(cur.error_at(col, format!("missing value for `{word}`")));
                }
                let slot_taken = match word.as_str() {
                    "name" => {
                        if !value
                            .chars()
                            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
                        {
                            return Err(cur.error_at(col, format!("invalid identifier `{value}`")));
                        }
                        name.replace(value).is_some()
                    }
                    "disks" => n_disks.replace(parse_count(&value, &cur, col)?).is_some(),
                    _ => n_blocks.replace(parse_count(&value, &cur, col)?).is_some(),
                };
                if slot_taken {
                    return Err(cur.error_at(1, format!("`{word}` declared more than once")));
                }
            }
            "disk" => {
                cur.skip_ws();
                let d = cur.number()?;
                cur.skip_ws();
                cur.expect(':')?;
                let mut cells = Vec::new();
                loop {
                    cur.skip_ws();
                    cells.push(cur.cell()?);
                    cur.skip_ws();
                    if cur.at_end() {
                        break;
                    }
                    cur.expect(',')?;
                }
                disk_lines.push((line_no, d, cells));
            }
            "" => return Err(cur.error_at(cur.column(), "expected a keyword".into())),
            other => {
                return Err(cur.error_at(
                    1 + raw.len() - raw.trim_start().len(),
                    format!("unknown keyword `{other}`"),
                ))
            }
        }
    }

    let missing = |what: &str| Error::Syntax {
        line: text.lines().count().max(1),
        column: 1,
        message: format!("missing `{what}` declaration"),
    };
    let name = name.ok_or_else(|| missing("name"))?;
    let n_disks = n_disks.ok_or_else(|| missing("disks"))?;
    let n_blocks = n_blocks.ok_or_else(|| missing("blocks"))?;
    if n_disks == 0 || n_disks > MAX_WIDTH || n_blocks == 0 || n_blocks > MAX_WIDTH {
        return Err(Error::UnsupportedSize(format!(
            "disks and blocks must be in 1..={MAX_WIDTH} (got disks = {n_disks}, blocks = {n_blocks})"
        )));
    }

    let mut grid: Vec<Option<Vec<Cell>>> = vec![None; n_disks];
    for (line, d, cells) in disk_lines {
        if d >= n_disks {
            return Err(Error::Syntax {
                line,
                column: 1,
                message: format!("disk {d} out of range (disks = {n_disks})"),
            });
        }
        if grid[d].is_some() {
            return Err(Error::Syntax {
                line,
                column: 1,
                message: format!("disk {d} listed more than once"),
            });
        }
        let mut row = Vec::with_capacity(cells.len());
        for members in cells {
            if let Some(&index) = members.iter().find(|&&i| i >= n_blocks) {
                return Err(Error::IndexOutOfRange { index, n_blocks });
            }
            row.push(Cell::new(members)?);
        }
        grid[d] = Some(row);
    }
    let disks = grid
        .into_iter()
        .enumerate()
        .map(|(d, rows)| {
            rows.ok_or_else(|| Error::InvalidLayout(format!("disk {d} has no `disk` line")))
        })
        .collect::<Result<Vec<_>>>()?;
    let layout = Layout::new(name, n_blocks, disks)?;
    let warnings = layout
        .unstored_blocks()
        .into_iter()
        .map(ParseWarning::UnstoredBlock)
        .collect();
    Ok(ParsedLayout { layout, warnings })
}

fn parse_count(value: &str, cur: &Cursor, col: usize) -> Result<usize> {
    value.parse::<usize>().map_err(|_| {
        cur.error_at(
            col,
            format!("expected a non-negative integer, found `{value}`"),
        )
    })
}

/// Character cursor over one line, tracking 1-based columns.
struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn rest(&self) -> String {
        self.chars[self.pos..].iter().collect()
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn error_at(&self, column: usize, message: String) -> Error {
        Error::Syntax {
            line: self.line,
            column,
            message,
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error_at(self.column(), format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error_at(
                self.column(),
                format!("expected `{want}`, found end of line"),
            )),
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error_at(self.column(), "expected a number".into()));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse()
            .map_err(|_| self.error_at(start + 1, format!("number `{digits}` too large")))
    }

    /// `B<i>` or `X(<i>,<j>[,...])`.
    fn cell(&mut self) -> Result<Vec<usize>> {
        match self.peek() {
            Some('B') => {
                self.pos += 1;
                Ok(vec![self.number()?])
            }
            Some('X') => {
                self.pos += 1;
                self.skip_ws();
                self.expect('(')?;
                let mut members = Vec::new();
                loop {
                    self.skip_ws();
                    members.push(self.number()?);
                    self.skip_ws();
                    if self.peek() == Some(')') {
                        self.pos += 1;
                        break;
                    }
                    self.expect(',')?;
                }
                if members.len() < 2 {
                    return Err(self.error_at(
                        self.column(),
                        "parity cell needs at least two blocks".into(),
                    ));
                }
                Ok(members)
            }
            Some(c) => Err(self.error_at(
                self.column(),
                format!("expected `B<i>` or `X(...)`, found `{c}`"),
            )),
            None => Err(self.error_at(self.column(), "expected a cell, found end of line".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(layout: &Layout, d: usize) -> Vec<Vec<usize>> {
        layout
            .disk(d)
            .iter()
            .map(|c| c.members().to_vec())
            .collect()
    }

    /// Reference 5-disk grids, one inner vec per disk.
    fn figure(scheme: Scheme) -> Vec<Vec<Vec<usize>>> {
        match scheme {
            Scheme::RR => vec![
                vec![vec![0], vec![4], vec![3]],
                vec![vec![1], vec![0], vec![4]],
                vec![vec![2], vec![1], vec![0]],
                vec![vec![3], vec![2], vec![1]],
                vec![vec![4], vec![3], vec![2]],
            ],
            Scheme::PP1 => vec![
                vec![vec![0], vec![1, 2], vec![3, 4]],
                vec![vec![1], vec![2, 3], vec![0, 4]],
                vec![vec![2], vec![3, 4], vec![0, 1]],
                vec![vec![3], vec![0, 4], vec![1, 2]],
                vec![vec![4], vec![0, 1], vec![2, 3]],
            ],
            Scheme::RP1 => vec![
                vec![vec![0], vec![4], vec![0, 2]],
                vec![vec![1], vec![0], vec![1, 3]],
                vec![vec![2], vec![1], vec![2, 4]],
                vec![vec![3], vec![2], vec![0, 3]],
                vec![vec![4], vec![3], vec![1, 4]],
            ],
            Scheme::PP2 => vec![
                vec![vec![0], vec![0, 2], vec![3, 4]],
                vec![vec![1], vec![1, 3], vec![0, 4]],
                vec![vec![2], vec![2, 4], vec![0, 1]],
                vec![vec![3], vec![0, 3], vec![1, 2]],
                vec![vec![4], vec![1, 4], vec![2, 3]],
            ],
            Scheme::RP2 => vec![
                vec![vec![0], vec![4], vec![1, 2]],
                vec![vec![1], vec![0], vec![2, 3]],
                vec![vec![2], vec![1], vec![3, 4]],
                vec![vec![3], vec![2], vec![0, 4]],
                vec![vec![4], vec![3], vec![0, 1]],
            ],
        }
    }

    #[test]
    fn named_schemes_match_figures() {
        for scheme in Scheme::ALL {
            let l = generate_named(scheme, 5).unwrap();
            let grid: Vec<_> = (0..5).map(|d| rows(&l, d)).collect();
            assert_eq!(grid, figure(scheme), "{scheme}");
        }
    }

    #[test]
    fn named_examples() {
        assert_eq!(
            rows(&generate_named(Scheme::RR, 5).unwrap(), 0),
            vec![vec![0], vec![4], vec![3]]
        );
        assert_eq!(
            rows(&generate_named(Scheme::PP2, 5).unwrap(), 1),
            vec![vec![1], vec![1, 3], vec![0, 4]]
        );
        assert_eq!(
            rows(&generate_named(Scheme::RP2, 5).unwrap(), 4),
            vec![vec![4], vec![3], vec![0, 1]]
        );
        assert_eq!(
            rows(&generate_named(Scheme::PP1, 5).unwrap(), 2),
            vec![vec![2], vec![3, 4], vec![0, 1]]
        );
    }

    #[test]
    fn too_small() {
        for scheme in Scheme::ALL {
            assert!(matches!(
                generate_named(scheme, 4),
                Err(Error::UnsupportedSize(_))
            ));
        }
        assert!(matches!(
            generate_pp(4, 1, 2, 3, 4),
            Err(Error::UnsupportedSize(_))
        ));
        assert!(matches!(
            generate_rp(3, 1, 0, 2),
            Err(Error::UnsupportedSize(_))
        ));
    }

    #[test]
    fn families_contain_named() {
        for n in 5..=9 {
            let pp1 = generate_named(Scheme::PP1, n).unwrap();
            let pp2 = generate_named(Scheme::PP2, n).unwrap();
            let rp1 = generate_named(Scheme::RP1, n).unwrap();
            let rp2 = generate_named(Scheme::RP2, n).unwrap();
            assert!(generate_pp(n, 1, 2, 3, 4).unwrap().same_cells(&pp1));
            assert!(generate_pp(n, 0, 2, 3, 4).unwrap().same_cells(&pp2));
            assert!(generate_rp(n, 1, 0, 2).unwrap().same_cells(&rp1));
            assert!(generate_rp(n, 1, 1, 2).unwrap().same_cells(&rp2));
        }
    }

    #[test]
    fn degenerate_offsets() {
        assert!(matches!(
            generate_pp(5, 1, 1, 3, 4),
            Err(Error::DegenerateCell(_))
        ));
        assert!(matches!(
            generate_pp(5, 1, 2, 3, 8),
            Err(Error::DegenerateCell(_))
        ));
        assert!(matches!(
            generate_rp(5, 0, 1, 2),
            Err(Error::DegenerateCell(_))
        ));
        assert!(matches!(
            generate_rp(5, 5, 1, 2),
            Err(Error::DegenerateCell(_))
        ));
        assert!(matches!(
            generate_rp(5, 1, 2, 7),
            Err(Error::DegenerateCell(_))
        ));
    }

    #[test]
    fn shape_and_redundancy_count() {
        for n in 5..=12 {
            for scheme in Scheme::ALL {
                let l = generate_named(scheme, n).unwrap();
                assert_eq!(l.n_disks(), n);
                assert_eq!(l.n_blocks(), n);
                assert!(l.disks().iter().all(|rows| rows.len() == 3));
                assert_eq!(l.cells().count(), 3 * n);
                assert_eq!(l.cells().filter(|&(_, r, _)| r > 0).count(), 2 * n);
                for d in 0..n {
                    assert_eq!(l.disk(d)[0], Cell::single(d));
                }
                assert!(l.unstored_blocks().is_empty());
            }
        }
    }

    #[test]
    fn rotation_symmetry() {
        for n in 5..=10 {
            for scheme in Scheme::ALL {
                let l = generate_named(scheme, n).unwrap();
                for d in 0..n {
                    let shifted: Vec<Cell> = l
                        .disk(0)
                        .iter()
                        .map(|c| Cell::new(c.members().iter().map(|i| (i + d) % n)).unwrap())
                        .collect();
                    assert_eq!(l.disk(d), &shifted[..]);
                }
            }
        }
    }

    #[test]
    fn serialize_canonical_lines() {
        let rr = serialize_layout(&generate_named(Scheme::RR, 5).unwrap());
        assert!(rr.lines().any(|l| l == "disk 0: B0, B4, B3"));
        let pp1 = serialize_layout(&generate_named(Scheme::PP1, 5).unwrap());
        assert!(pp1.lines().any(|l| l == "disk 0: B0, X(1,2), X(3,4)"));
        assert!(pp1.starts_with("name = PP1\ndisks = 5\nblocks = 5\n"));
        assert_eq!(
            pp1,
            serialize_layout(&generate_named(Scheme::PP1, 5).unwrap())
        );
    }

    #[test]
    fn parse_figure_one() {
        let text = "\
# three-way replication
name = RR
disks = 5
blocks = 5
disk 0: B0, B4, B3   # B0 M4 M'3
disk 1: B1, B0, B4
disk 2: B2, B1, B0
disk 3: B3, B2, B1
disk 4: B4, B3, B2
";
        let parsed = parse_layout(text).unwrap();
        assert!(parsed.warnings.is_empty());
        assert_eq!(parsed.layout, generate_named(Scheme::RR, 5).unwrap());
    }

    #[test]
    fn parse_normalizes() {
        let text = "blocks=3\n disk 1 : X( 2 ,0 ),B1\nname = t\ndisks = 2\ndisk 0: B0,B2\n";
        let parsed = parse_layout(text).unwrap();
        assert_eq!(
            serialize_layout(&parsed.layout),
            "name = t\ndisks = 2\nblocks = 3\ndisk 0: B0, B2\ndisk 1: X(0,2), B1\n"
        );
    }

    fn header(n: usize, k: usize) -> String {
        format!("name = t\ndisks = {n}\nblocks = {k}\n")
    }

    #[test]
    fn parse_errors() {
        let err = parse_layout(&(header(1, 3) + "disk 0: X(2,2)\n")).unwrap_err();
        assert!(matches!(err, Error::DegenerateCell(_)), "{err}");

        let err = parse_layout(&(header(1, 3) + "disk 0: B0, B3\n")).unwrap_err();
        assert_eq!(
            err,
            Error::IndexOutOfRange {
                index: 3,
                n_blocks: 3
            }
        );

        let err = parse_layout(&(header(1, 3) + "disk 0: B0, Y1\n")).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 4,
                    column: 13,
                    ..
                }
            ),
            "{err}"
        );

        let err = parse_layout(&(header(1, 3) + "disk 0: X(1)\n")).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 4, .. }), "{err}");

        let err = parse_layout(&(header(2, 2) + "disk 0: B0\n")).unwrap_err();
        assert!(matches!(err, Error::InvalidLayout(_)), "{err}");

        let err = parse_layout(&(header(1, 2) + "disk 0: B0\ndisk 0: B1\n")).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 5, .. }), "{err}");

        let err = parse_layout("disks = 1\nblocks = 1\ndisk 0: B0\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }), "{err}");

        let err = parse_layout(&(header(1, 1) + "disk 0: B0\nbogus\n")).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 5,
                    column: 1,
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn parse_warns_on_unstored_block() {
        let parsed = parse_layout(&(header(2, 2) + "disk 0: B0\ndisk 1: X(0,1)\n")).unwrap();
        assert_eq!(
            parsed.warnings,
            vec![ParseWarning::UnstoredBlock(BlockId(1))]
        );
    }

    #[test]
    fn cell_rejects_duplicates_and_empty() {
        assert!(matches!(Cell::new([1, 1]), Err(Error::DegenerateCell(_))));
        assert!(matches!(Cell::new([]), Err(Error::DegenerateCell(_))));
        assert_eq!(Cell::new([4, 1]).unwrap().to_string(), "X(1,4)");
    }
}

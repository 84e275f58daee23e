//! Cells of the n-cube in star notation.
//!
//! A cell of `Q^n = [0,1]^n` is a product of points and unit intervals, one factor per
//! coordinate, written as a word over `{0, 1, *}`. Position `i` of the word is
//! coordinate `i`; a `*` marks a free interval direction, so the cell dimension is the
//! number of stars.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Star,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Star => '*',
        }
    }
}

/// A cell of `Q^n`, stored as two bit masks over the coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellCode {
    n: u8,
    stars: u8,
    ones: u8,
}

impl CellCode {
    pub fn from_symbols(symbols: &[Symbol]) -> Result<Self> {
        let n = symbols.len();
        check_dim(n)?;
        let mut cell = CellCode {
            n: n as u8,
            stars: 0,
            ones: 0,
        };
        for (i, s) in symbols.iter().enumerate() {
            match s {
                Symbol::Zero => {}
                Symbol::One => cell.ones |= 1 << i,
                Symbol::Star => cell.stars |= 1 << i,
            }
        }
        Ok(cell)
    }

    /// Builds a cell from raw masks. Bits of `ones` under a star are cleared.
    pub fn from_masks(n: usize, stars: u8, ones: u8) -> Result<Self> {
        check_dim(n)?;
        let full = full_mask(n);
        Ok(CellCode {
            n: n as u8,
            stars: stars & full,
            ones: ones & !stars & full,
        })
    }

    /// The vertex whose coordinates are the low `n` bits of `bits` (bit `i` = coordinate `i`).
    pub fn vertex(n: usize, bits: u8) -> Result<Self> {
        Self::from_masks(n, 0, bits)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n as usize
    }

    pub fn dimension(&self) -> usize {
        self.stars.count_ones() as usize
    }

    pub fn star_mask(&self) -> u8 {
        self.stars
    }

    pub fn ones_mask(&self) -> u8 {
        self.ones
    }

    pub fn symbol(&self, i: usize) -> Symbol {
        debug_assert!(i < self.ambient_dim());
        if self.stars >> i & 1 == 1 {
            Symbol::Star
        } else if self.ones >> i & 1 == 1 {
            Symbol::One
        } else {
            Symbol::Zero
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.ambient_dim()).map(|i| self.symbol(i))
    }

    /// Coordinates holding a star, ascending.
    pub fn free_axes(&self) -> Vec<usize> {
        (0..self.ambient_dim())
            .filter(|&i| self.stars >> i & 1 == 1)
            .collect()
    }

    pub fn word(&self) -> String {
        self.symbols().map(Symbol::as_char).collect()
    }

    /// Whether `other` is a face of `self` (or equal to it).
    pub fn contains(&self, other: &CellCode) -> bool {
        self.n == other.n
            && other.stars & !self.stars == 0
            && (other.ones ^ self.ones) & !self.stars == 0
    }

    /// Replaces the star at `axis` with the given bit.
    pub fn fix_axis(&self, axis: usize, bit: bool) -> CellCode {
        debug_assert!(self.stars >> axis & 1 == 1);
        let mut c = *self;
        c.stars &= !(1 << axis);
        if bit {
            c.ones |= 1 << axis;
        }
        c
    }

    /// Unit-cube coordinates of a vertex cell.
    pub fn vertex_coords(&self) -> Vec<f64> {
        debug_assert_eq!(self.dimension(), 0);
        (0..self.ambient_dim())
            .map(|i| f64::from(self.ones >> i & 1))
            .collect()
    }

    /// Base-3 rank with digits `0 < 1 < *`, most significant digit at position 0.
    fn rank(&self) -> u32 {
        self.symbols().fold(0u32, |acc, s| {
            acc * 3
                + match s {
                    Symbol::Zero => 0,
                    Symbol::One => 1,
                    Symbol::Star => 2,
                }
        })
    }
}

fn full_mask(n: usize) -> u8 {
    if n >= 8 {
        u8::MAX
    } else {
        (1u8 << n) - 1
    }
}

fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidDimension(n))
    }
}

impl Ord for CellCode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.rank().cmp(&other.rank()))
    }
}

impl PartialOrd for CellCode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CellCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

impl fmt::Debug for CellCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CellCode({})", self.word())
    }
}

impl Serialize for CellCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.word())
    }
}

impl<'de> Deserialize<'de> for CellCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_cell(&s, s.chars().count()).map_err(serde::de::Error::custom)
    }
}

/// Parses a star-notation word of length `n`. No normalization is applied.
pub fn parse_cell(text: &str, n: usize) -> Result<CellCode> {
    let found = text.chars().count();
    if found != n {
        return Err(Error::WrongLength {
            text: text.to_string(),
            found,
            expected: n,
        });
    }
    let symbols = text
        .chars()
        .enumerate()
        .map(|(position, ch)| match ch {
            '0' => Ok(Symbol::Zero),
            '1' => Ok(Symbol::One),
            '*' => Ok(Symbol::Star),
            symbol => Err(Error::BadSymbol {
                text: text.to_string(),
                symbol,
                position,
            }),
        })
        .collect::<Result<Vec<_>>>()?;
    CellCode::from_symbols(&symbols)
}

/// All `k`-cells on the boundary of `cell`: every way of fixing `dim - k` of its stars
/// to 0 or 1. At `k = dim` this is the cell itself.
pub fn boundary_cells(cell: &CellCode, k: usize) -> Result<BTreeSet<CellCode>> {
    let dim = cell.dimension();
    if k > dim {
        return Err(Error::InvalidK { k, dim });
    }
    let axes = cell.free_axes();
    let mut out = BTreeSet::new();
    // `keep` selects which stars survive.
    for keep in 0u32..(1 << dim) {
        if keep.count_ones() as usize != k {
            continue;
        }
        let fixed: Vec<usize> = (0..dim)
            .filter(|b| keep >> b & 1 == 0)
            .map(|b| axes[b])
            .collect();
        for bits in 0u32..(1 << fixed.len()) {
            let mut c = *cell;
            for (j, &axis) in fixed.iter().enumerate() {
                c = c.fix_axis(axis, bits >> j & 1 == 1);
            }
            out.insert(c);
        }
    }
    Ok(out)
}

/// Every `k`-cell of `Q^n`, in cell order.
pub fn full_skeleton(n: usize, k: usize) -> Result<BTreeSet<CellCode>> {
    check_dim(n)?;
    if k > n {
        return Err(Error::InvalidK { k, dim: n });
    }
    let mut out = BTreeSet::new();
    for stars in 0u16..(1 << n) {
        if stars.count_ones() as usize != k {
            continue;
        }
        let stars = stars as u8;
        for ones in 0u16..(1 << n) {
            let ones = ones as u8;
            if ones & stars != 0 {
                continue;
            }
            out.insert(CellCode::from_masks(n, stars, ones)?);
        }
    }
    Ok(out)
}

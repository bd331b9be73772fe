//! The reduced index set of a column-symmetric `p x q` assignment matrix.
//!
//! Matrices with lexicographically non-increasing columns and at most one
//! 1-entry per row always have `x_ij = 0` for `j > i`, so those components are
//! dropped: row `i` keeps `q_of_row(i) = min(i, q)` cells. All coordinates are
//! 1-based, in the serialization formats as well.

use crate::{Error, Result};

/// Row and column counts of the reduced matrix, with `p >= q >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrbitopeShape {
    p: u32,
    q: u32,
}

/// A cell `(i, j)` of the reduced index set, `1 <= j <= min(i, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex {
    pub i: u32,
    pub j: u32,
}

/// The same cell addressed by diagonal: `<eta, j>` is `(j + eta - 1, j)`,
/// where `eta` counts diagonals from above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagonalCoord {
    pub eta: u32,
    pub j: u32,
}

impl CellIndex {
    pub fn new(i: u32, j: u32) -> Self {
        CellIndex { i, j }
    }
}

impl DiagonalCoord {
    pub fn new(eta: u32, j: u32) -> Self {
        DiagonalCoord { eta, j }
    }
}

impl OrbitopeShape {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p >= q && q >= 2 {
            Ok(OrbitopeShape { p, q })
        } else {
            Err(Error::InvalidShape { p, q })
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of cells in row `i`: `min(i, q)`.
    pub fn q_of_row(&self, i: u32) -> Result<u32> {
        if i >= 1 && i <= self.p {
            Ok(i.min(self.q))
        } else {
            Err(Error::RowOutOfRange { i, p: self.p })
        }
    }

    /// Unchecked variant of [`q_of_row`](Self::q_of_row) for internal loops.
    #[inline]
    pub(crate) fn row_len(&self, i: u32) -> u32 {
        debug_assert!(i >= 1 && i <= self.p);
        i.min(self.q)
    }

    pub fn contains(&self, cell: CellIndex) -> bool {
        cell.i >= 1 && cell.i <= self.p && cell.j >= 1 && cell.j <= self.row_len_or_zero(cell.i)
    }

    fn row_len_or_zero(&self, i: u32) -> u32 {
        if i >= 1 && i <= self.p {
            self.row_len(i)
        } else {
            0
        }
    }

    /// Total number of cells in the reduced index set.
    pub fn num_cells(&self) -> usize {
        let (p, q) = (self.p as usize, self.q as usize);
        q * (q + 1) / 2 + (p - q) * q
    }

    /// Row-major offset of a cell; rows are packed without gaps.
    #[inline]
    pub fn cell_offset(&self, cell: CellIndex) -> usize {
        debug_assert!(self.contains(cell));
        let (i, q) = (cell.i as usize, self.q as usize);
        let before = if i <= q + 1 {
            (i - 1) * i / 2
        } else {
            q * (q + 1) / 2 + (i - 1 - q) * q
        };
        before + cell.j as usize - 1
    }

    /// Inverse of [`cell_offset`](Self::cell_offset).
    pub fn cell_at_offset(&self, offset: usize) -> CellIndex {
        debug_assert!(offset < self.num_cells());
        let q = self.q as usize;
        let tri = q * (q + 1) / 2;
        if offset < tri {
            // within the triangular top: row i has i cells
            let mut i = 1usize;
            let mut base = 0usize;
            while base + i <= offset {
                base += i;
                i += 1;
            }
            CellIndex::new(i as u32, (offset - base + 1) as u32)
        } else {
            let rest = offset - tri;
            CellIndex::new((q + 1 + rest / q) as u32, (rest % q + 1) as u32)
        }
    }

    /// `<eta, j>  ->  (j + eta - 1, j)`.
    pub fn diag_to_cell(&self, d: DiagonalCoord) -> Result<CellIndex> {
        let ok = d.j >= 1 && d.j <= self.q && d.eta >= 1 && d.eta <= self.p - d.j + 1;
        if !ok {
            return Err(Error::DiagOutOfShape { eta: d.eta, j: d.j, p: self.p, q: self.q });
        }
        Ok(CellIndex::new(d.j + d.eta - 1, d.j))
    }

    /// `(i, j)  ->  <i - j + 1, j>`.
    pub fn cell_to_diag(&self, cell: CellIndex) -> Result<DiagonalCoord> {
        if !self.contains(cell) {
            return Err(Error::CellOutOfShape { i: cell.i, j: cell.j, p: self.p, q: self.q });
        }
        Ok(DiagonalCoord::new(cell.i - cell.j + 1, cell.j))
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        (1..=self.p).flat_map(move |i| (1..=self.row_len(i)).map(move |j| CellIndex::new(i, j)))
    }

    /// The cells of row `i`.
    pub fn row_cells(&self, i: u32) -> impl Iterator<Item = CellIndex> + '_ {
        (1..=self.row_len(i)).map(move |j| CellIndex::new(i, j))
    }
}

/// A set of cells stored as a bit vector over the reduced index set in
/// row-major order, giving constant-time membership tests and insertion.
#[derive(Clone, PartialEq, Eq)]
pub struct CellSet {
    shape: OrbitopeShape,
    words: Vec<u64>,
    len: usize,
}

impl CellSet {
    pub fn new(shape: OrbitopeShape) -> Self {
        let words = vec![0u64; shape.num_cells().div_ceil(64)];
        CellSet { shape, words, len: 0 }
    }

    pub fn from_cells<I: IntoIterator<Item = CellIndex>>(
        shape: OrbitopeShape,
        cells: I,
    ) -> Result<Self> {
        let mut set = CellSet::new(shape);
        for c in cells {
            if !shape.contains(c) {
                return Err(Error::CellOutOfShape { i: c.i, j: c.j, p: shape.p, q: shape.q });
            }
            set.insert(c);
        }
        Ok(set)
    }

    pub fn shape(&self) -> OrbitopeShape {
        self.shape
    }

    #[inline]
    pub fn contains(&self, cell: CellIndex) -> bool {
        let off = self.shape.cell_offset(cell);
        self.words[off / 64] >> (off % 64) & 1 == 1
    }

    /// Inserts a cell; returns whether it was newly added.
    #[inline]
    pub fn insert(&mut self, cell: CellIndex) -> bool {
        let off = self.shape.cell_offset(cell);
        let word = &mut self.words[off / 64];
        let mask = 1u64 << (off % 64);
        if *word & mask == 0 {
            *word |= mask;
            self.len += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, cell: CellIndex) -> bool {
        let off = self.shape.cell_offset(cell);
        let word = &mut self.words[off / 64];
        let mask = 1u64 << (off % 64);
        if *word & mask != 0 {
            *word &= !mask;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        debug_assert_eq!(self.shape, other.shape);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &CellSet) -> bool {
        debug_assert_eq!(self.shape, other.shape);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &CellSet) {
        debug_assert_eq!(self.shape, other.shape);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    /// Number of set cells within row `i`.
    pub fn row_count(&self, i: u32) -> u32 {
        (1..=self.shape.row_len(i)).filter(|&j| self.contains(CellIndex::new(i, j))).count() as u32
    }

    /// Cells in ascending row-major order.
    pub fn iter(&self) -> impl Iterator<Item = CellIndex> + '_ {
        self.words.iter().enumerate().flat_map(move |(w, &word)| {
            let shape = self.shape;
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(shape.cell_at_offset(w * 64 + b))
            })
        })
    }
}

impl std::fmt::Debug for CellSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter().map(|c| (c.i, c.j))).finish()
    }
}

//! Square bit-packed matrices over GF(2).
//!
//! Each row is packed into `u64` words. Rank comes from Gaussian elimination
//! that XORs whole words, pivoting column by column on the lowest-indexed
//! remaining row that has a one in that column.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("position {position} is outside 1..={n}")]
    OutOfRange { position: usize, n: usize },
    #[error("line {line} has {found} entries, expected {expected}")]
    RaggedRow {
        line: usize,
        found: usize,
        expected: usize,
    },
    #[error("line {line} contains {ch:?}; entries must be 0 or 1")]
    BadEntry { line: usize, ch: char },
}

/// Set of diagonal positions to flip. Bit `k` stands for position `k + 1`,
/// so masks address at most the first 64 diagonal entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ToggleMask(u64);

impl ToggleMask {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    /// Mask from 1-based positions.
    pub fn from_positions(positions: &[usize]) -> Result<Self, MatrixError> {
        let mut bits = 0u64;
        for &p in positions {
            if p == 0 || p > WORD {
                return Err(MatrixError::OutOfRange {
                    position: p,
                    n: WORD,
                });
            }
            bits |= 1 << (p - 1);
        }
        Ok(Self(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    /// 1-based positions in ascending order.
    pub fn positions(self) -> Vec<usize> {
        (0..WORD)
            .filter(|k| self.0 >> k & 1 == 1)
            .map(|k| k + 1)
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    n: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(n: usize) -> Self {
        let words_per_row = n.div_ceil(WORD);
        Self {
            n,
            words_per_row,
            data: vec![0; n * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds from 0/1 rows. Panics if the rows are not square.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| {
            let row = rows[i].as_ref();
            assert_eq!(
                row.len(),
                n,
                "row {i} has length {} in a {n}x{n} matrix",
                row.len()
            );
            row[j] != 0
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of range");
        self.row(i)[j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of range");
        let word = &mut self.data[i * self.words_per_row + j / WORD];
        let bit = 1u64 << (j % WORD);
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of range");
        self.data[i * self.words_per_row + j / WORD] ^= 1u64 << (j % WORD);
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn diagonal(&self) -> Vec<bool> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Number of ones in row `i`.
    pub fn row_weight(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Rows as single words; only valid for `n <= 64`.
    pub(crate) fn packed_rows(&self) -> Option<Vec<u64>> {
        (self.words_per_row <= 1).then(|| self.data.clone())
    }

    pub fn rank(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        if self.words_per_row == 1 {
            let mut rows = [0u64; WORD];
            rows[..self.n].copy_from_slice(&self.data);
            return rank_packed(&mut rows[..self.n]);
        }
        self.rank_multiword()
    }

    fn rank_multiword(&self) -> usize {
        let wpr = self.words_per_row;
        let mut rows = self.data.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let (w, bit) = (col / WORD, 1u64 << (col % WORD));
            let Some(pivot) = (rank..self.n).find(|&r| rows[r * wpr + w] & bit != 0) else {
                continue;
            };
            if pivot != rank {
                for k in 0..wpr {
                    rows.swap(rank * wpr + k, pivot * wpr + k);
                }
            }
            for r in rank + 1..self.n {
                if rows[r * wpr + w] & bit != 0 {
                    for k in w..wpr {
                        rows[r * wpr + k] ^= rows[rank * wpr + k];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn nullity(&self) -> usize {
        self.n - self.rank()
    }

    /// Copy with the diagonal entries at the mask positions flipped.
    pub fn toggle_diagonal(&self, mask: ToggleMask) -> Result<Self, MatrixError> {
        let bits = mask.bits();
        if self.n < WORD && bits >> self.n != 0 {
            return Err(MatrixError::OutOfRange {
                position: (WORD - bits.leading_zeros() as usize),
                n: self.n,
            });
        }
        let mut out = self.clone();
        for k in 0..self.n.min(WORD) {
            if bits >> k & 1 == 1 {
                out.flip(k, k);
            }
        }
        Ok(out)
    }

    /// Places the blocks along the diagonal, zeros elsewhere.
    pub fn block_diag(blocks: &[Gf2Matrix]) -> Self {
        let n = blocks.iter().map(Gf2Matrix::n).sum();
        let mut out = Self::zeros(n);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    if b.get(i, j) {
                        out.set(offset + i, offset + j, true);
                    }
                }
            }
            offset += b.n;
        }
        out
    }

    /// Square sub-matrix on the given 0-based indices, in the given order.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |i, j| self.get(indices[i], indices[j]))
    }

    /// Swaps rows `i` and `j` (0-based).
    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let wpr = self.words_per_row;
        for k in 0..wpr {
            self.data.swap(i * wpr + k, j * wpr + k);
        }
    }

    /// Swaps columns `i` and `j` (0-based).
    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.n {
            let (a, b) = (self.get(r, i), self.get(r, j));
            self.set(r, i, b);
            self.set(r, j, a);
        }
    }

    /// Simultaneous row/column permutation: entry `(images[i], images[j])` of
    /// the result is entry `(i, j)` of `self`. `images` is 0-based.
    pub(crate) fn congruent_by(&self, images: impl Fn(usize) -> usize) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) {
                    out.set(images(i), images(j), true);
                }
            }
        }
        out
    }

    /// Parses `n` lines of `n` 0/1 characters; spaces and tabs inside a line
    /// are ignored, as are blank lines.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        let rows: Vec<(usize, Vec<u8>)> = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(idx, line)| {
                line.chars()
                    .filter(|c| *c != ' ' && *c != '\t' && *c != '\r')
                    .map(|ch| match ch {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        _ => Err(MatrixError::BadEntry { line: idx + 1, ch }),
                    })
                    .collect::<Result<Vec<u8>, _>>()
                    .map(|r| (idx + 1, r))
            })
            .collect::<Result<_, _>>()?;
        let n = rows.len();
        if let Some((line, row)) = rows.iter().find(|(_, r)| r.len() != n) {
            return Err(MatrixError::RaggedRow {
                line: *line,
                found: row.len(),
                expected: n,
            });
        }
        let rows: Vec<Vec<u8>> = rows.into_iter().map(|(_, r)| r).collect();
        Ok(Self::from_rows(&rows))
    }
}

/// Rank of single-word rows; destroys `rows`.
pub(crate) fn rank_packed(rows: &mut [u64]) -> usize {
    let n = rows.len();
    let mut rank = 0;
    for col in 0..WORD {
        if rank == n {
            break;
        }
        let bit = 1u64 << col;
        let Some(pivot) = (rank..n).find(|&r| rows[r] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for row in &mut rows[rank + 1..] {
            if *row & bit != 0 {
                *row ^= p;
            }
        }
        rank += 1;
    }
    rank
}

impl fmt::Display for Gf2Matrix {
    /// One line per row, no separators, no trailing newline.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                f.write_str("\n")?;
            }
            for j in 0..self.n {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Matrix({}x{})\n{}", self.n, self.n, self)
    }
}

impl FromStr for Gf2Matrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

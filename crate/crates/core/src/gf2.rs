//! Dense matrices over GF(2) with rows packed into 64-bit words.
//!
//! A `k x n` [`BinMatrix`] plays two roles: the linear hash `x -> x M^T`
//! that compresses an `n`-bit string to `k` bits, and the generator matrix of
//! the `[n, k]` code spanned by its rows.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Largest message dimension accepted by [`BinMatrix::min_distance`].
pub const MAX_DISTANCE_ROWS: usize = 24;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(WORD);
        Self {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from nested rows of 0/1 values.
    ///
    /// # Panics
    ///
    /// Panics if the rows are ragged or an entry is not 0 or 1.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &bit) in row.iter().enumerate() {
                assert!(bit <= 1, "entry ({i}, {j}) = {bit} is not a bit");
                m.set(i, j, bit == 1);
            }
        }
        m
    }

    /// Uniformly random `k x n` matrix. The same `(k, n, seed)` gives the
    /// same bits on every platform.
    pub fn random(k: usize, n: usize, seed: u64) -> Result<Self> {
        if k > n {
            return Err(Error::RowsExceedColumns { k, n });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Self::zeros(k, n);
        let tail = n % WORD;
        for r in 0..k {
            let row = &mut m.data[r * m.words..(r + 1) * m.words];
            for w in row.iter_mut() {
                *w = rng.next_u64();
            }
            if tail != 0 {
                if let Some(last) = row.last_mut() {
                    *last &= (1u64 << tail) - 1;
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 0-based `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols);
        (self.data[row * self.words + col / WORD] >> (col % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols);
        let w = &mut self.data[row * self.words + col / WORD];
        let mask = 1u64 << (col % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row_words(&self, row: usize) -> &[u64] {
        &self.data[row * self.words..(row + 1) * self.words]
    }

    /// `row[dst] += row[src]` over GF(2).
    pub fn add_row(&mut self, dst: usize, src: usize) {
        assert!(dst < self.rows && src < self.rows && dst != src);
        for w in 0..self.words {
            let v = self.data[src * self.words + w];
            self.data[dst * self.words + w] ^= v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words {
            self.data.swap(a * self.words + w, b * self.words + w);
        }
    }

    /// GF(2) rank by Gaussian elimination. Empty matrices have rank 0.
    pub fn rank(&self) -> usize {
        self.echelon().0.rows
    }

    /// Row-reduced echelon form with zero rows dropped, plus the 0-based
    /// pivot column of each remaining row.
    pub fn echelon(&self) -> (BinMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in 0..m.rows {
                if r != rank && m.get(r, col) {
                    m.add_row(r, rank);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        m.rows = rank;
        m.data.truncate(rank * m.words);
        (m, pivots)
    }

    /// Column `col` (0-based) as a bitmask over rows; requires `rows <= 64`.
    pub fn column_mask(&self, col: usize) -> u64 {
        assert!(self.rows <= WORD, "column masks need at most 64 rows");
        (0..self.rows).fold(0u64, |acc, r| acc | (u64::from(self.get(r, col)) << r))
    }

    /// Sub-matrix made of the columns in `set`, in increasing index order.
    pub fn submatrix_cols(&self, set: &IndexSet) -> Result<BinMatrix> {
        if set.ambient() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: set.ambient(),
            });
        }
        let mut out = BinMatrix::zeros(self.rows, set.len());
        for (dst, &src) in set.members().iter().enumerate() {
            for r in 0..self.rows {
                if self.get(r, src - 1) {
                    out.set(r, dst, true);
                }
            }
        }
        Ok(out)
    }

    /// Minimum Hamming weight of `u M` over nonzero messages `u`.
    ///
    /// A rank-deficient matrix maps some nonzero message to the zero word, in
    /// which case the result is 0.
    pub fn min_distance(&self) -> Result<usize> {
        if self.rows == 0 {
            return Err(Error::EmptyCode);
        }
        if self.rows > MAX_DISTANCE_ROWS {
            return Err(Error::TooLarge {
                what: "message dimension k for distance enumeration",
                value: self.rows,
                limit: MAX_DISTANCE_ROWS,
            });
        }
        // Gray-code walk: each step flips one message bit, i.e. adds one row.
        let mut word = vec![0u64; self.words];
        let mut best = usize::MAX;
        for step in 1u64..(1u64 << self.rows) {
            let flip = step.trailing_zeros() as usize;
            for (w, r) in word.iter_mut().zip(self.row_words(flip)) {
                *w ^= r;
            }
            let weight: usize = word.iter().map(|w| w.count_ones() as usize).sum();
            best = best.min(weight);
            if best == 0 {
                break;
            }
        }
        Ok(best)
    }

    /// Encodes the message `u` (bit `i` multiplies row `i`) as `u M`.
    pub fn encode(&self, message: u64) -> Vec<bool> {
        let mut word = vec![0u64; self.words];
        for r in 0..self.rows.min(WORD) {
            if (message >> r) & 1 == 1 {
                for (w, x) in word.iter_mut().zip(self.row_words(r)) {
                    *w ^= x;
                }
            }
        }
        (0..self.cols)
            .map(|c| (word[c / WORD] >> (c % WORD)) & 1 == 1)
            .collect()
    }

    /// Serializes to the text format read by [`BinMatrix::from_str`].
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinMatrix({}x{})[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(" ")?;
            }
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Display for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Text format: a header line `k n`, then `k` lines of exactly `n`
/// characters from `{0, 1}`. A single trailing newline is allowed.
impl FromStr for BinMatrix {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let parse_err = |line: usize, column: usize, message: String| Error::Parse {
            line,
            column,
            message,
        };
        let body = text.strip_suffix('\n').unwrap_or(text);
        let mut lines = body.split('\n');
        let header = lines
            .next()
            .ok_or_else(|| parse_err(1, 1, "missing header".into()))?;
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 2 {
            return Err(parse_err(
                1,
                1,
                format!("header must be \"k n\", got {header:?}"),
            ));
        }
        let k: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(1, 1, format!("invalid row count {:?}", fields[0])))?;
        let n: usize = fields[1].parse().map_err(|_| {
            parse_err(
                1,
                fields[0].len() + 2,
                format!("invalid column count {:?}", fields[1]),
            )
        })?;

        let mut m = BinMatrix::zeros(k, n);
        for r in 0..k {
            let line_no = r + 2;
            let line = lines
                .next()
                .ok_or_else(|| parse_err(line_no, 1, format!("expected {k} rows, found {r}")))?;
            let mut count = 0;
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' | '1' if c < n => m.set(r, c, ch == '1'),
                    '0' | '1' => {
                        return Err(parse_err(line_no, c + 1, format!("row longer than {n}")))
                    }
                    other => {
                        return Err(parse_err(
                            line_no,
                            c + 1,
                            format!("unexpected character {other:?}"),
                        ))
                    }
                }
                count += 1;
            }
            if count != n {
                return Err(parse_err(
                    line_no,
                    count + 1,
                    format!("row has {count} entries, expected {n}"),
                ));
            }
        }
        if let Some(extra) = lines.next() {
            return Err(parse_err(
                k + 2,
                1,
                format!("unexpected trailing content {extra:?}"),
            ));
        }
        Ok(m)
    }
}

/// A subset of `{1, ..., n}` (1-based, sorted, without duplicates).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSet {
    n: usize,
    members: Vec<usize>,
}

impl IndexSet {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { n, members })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            members: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            members: (1..=n).collect(),
        }
    }

    /// Members are the set bits of `mask`, bit `i` standing for index `i + 1`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n < 64 && mask >> n != 0 {
            return Err(Error::IndexOutOfRange {
                index: 64 - mask.leading_zeros() as usize,
                n,
            });
        }
        Ok(Self {
            n,
            members: (0..n.min(64))
                .filter(|i| (mask >> i) & 1 == 1)
                .map(|i| i + 1)
                .collect(),
        })
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            members: (1..=self.n).filter(|i| !self.contains(*i)).collect(),
        }
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.n == other.n && self.members.iter().all(|i| other.contains(*i))
    }
}

/// Rank of a set of column vectors, each packed into a `u64` bitmask.
///
/// Used on hot enumeration paths where the matrix has at most 64 rows.
#[derive(Clone, Copy, Debug)]
pub(crate) struct XorBasis {
    // basis[b] holds a vector whose highest set bit is b, or 0
    basis: [u64; 64],
    rank: u32,
}

impl XorBasis {
    pub(crate) fn new() -> Self {
        Self {
            basis: [0; 64],
            rank: 0,
        }
    }

    /// Adds `v` to the span. Returns true if the rank grew.
    #[inline]
    pub(crate) fn insert(&mut self, mut v: u64) -> bool {
        while v != 0 {
            let hb = 63 - v.leading_zeros() as usize;
            if self.basis[hb] == 0 {
                self.basis[hb] = v;
                self.rank += 1;
                return true;
            }
            v ^= self.basis[hb];
        }
        false
    }

    #[inline]
    pub(crate) fn rank(&self) -> usize {
        self.rank as usize
    }
}

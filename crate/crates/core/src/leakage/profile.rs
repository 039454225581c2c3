//! Rank statistics of column subsets, enumerated once and reused for every
//! channel parameter.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{BinMatrix, XorBasis};

/// Largest block length handled by exhaustive `2^n` enumeration.
pub const MAX_EXACT_N: usize = 26;

// Columns fixed by the outer parallel split.
const SPLIT_BITS: usize = 8;

/// For every subset size `w`, integer sums over all `J ⊆ {1..n}` with `|J| = w`:
/// the rank deficit `rank(M) - rank(M_J)` and the number of `J` whose
/// columns have rank below `k`.
///
/// All counts are exact integers, so the result does not depend on how the
/// enumeration is split across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    n: usize,
    k: usize,
    rank: usize,
    deficit: Vec<u64>,
    short: Vec<u64>,
}

impl RankProfile {
    pub fn new(m: &BinMatrix) -> Result<Self> {
        let n = m.cols();
        let k = m.rows();
        check_exact_size(n)?;
        if k > 64 {
            return Err(Error::TooLarge {
                what: "row count k for exact enumeration",
                value: k,
                limit: 64,
            });
        }
        let columns: Vec<u64> = (0..n).map(|c| m.column_mask(c)).collect();
        let rank = {
            let mut b = XorBasis::new();
            columns.iter().for_each(|&c| {
                b.insert(c);
            });
            b.rank()
        };
        let binom = binomials(n);
        let split = n.min(SPLIT_BITS);

        let ctx = Walk {
            columns: &columns,
            rank,
            k,
            binom: &binom,
        };
        let (deficit, short) = (0u64..1 << split)
            .into_par_iter()
            .map(|prefix| {
                let mut acc = Counts::new(n);
                let mut basis = XorBasis::new();
                for (i, &col) in columns.iter().enumerate().take(split) {
                    if (prefix >> i) & 1 == 1 {
                        basis.insert(col);
                    }
                }
                ctx.descend(split, prefix.count_ones() as usize, basis, &mut acc);
                acc
            })
            .reduce(|| Counts::new(n), Counts::merge)
            .into_parts();

        Ok(Self {
            n,
            k,
            rank,
            deficit,
            short,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `Σ_{|J|=w} (rank(M) - rank(M_J))`.
    pub fn deficit(&self, w: usize) -> u64 {
        self.deficit[w]
    }

    /// `#{J : |J| = w, rank(M_J) < k}`.
    pub fn short_count(&self, w: usize) -> u64 {
        self.short[w]
    }

    /// `E[rank(M) - rank(M_J)]` when each index joins `J` independently
    /// with probability `q`.
    pub fn expected_deficit(&self, q: f64) -> f64 {
        self.weighted(&self.deficit, q)
    }

    /// `Pr[rank(M_J) < k]` when each index joins `J` independently with
    /// probability `q`.
    pub fn short_probability(&self, q: f64) -> f64 {
        self.weighted(&self.short, q)
    }

    fn weighted(&self, counts: &[u64], q: f64) -> f64 {
        let n = self.n as i32;
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(w, &c)| {
                let w = w as i32;
                c as f64 * q.powi(w) * (1.0 - q).powi(n - w)
            })
            .sum()
    }
}

pub(crate) fn check_exact_size(n: usize) -> Result<()> {
    if n > MAX_EXACT_N {
        return Err(Error::TooLarge {
            what: "block length n for exact enumeration",
            value: n,
            limit: MAX_EXACT_N,
        });
    }
    Ok(())
}

pub(crate) fn binomials(n: usize) -> Vec<Vec<u64>> {
    let mut c = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1] + if j < i { c[i - 1][j] } else { 0 };
        }
    }
    c
}

struct Counts {
    deficit: Vec<u64>,
    short: Vec<u64>,
}

impl Counts {
    fn new(n: usize) -> Self {
        Self {
            deficit: vec![0; n + 1],
            short: vec![0; n + 1],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.deficit.iter_mut().zip(other.deficit) {
            *a += b;
        }
        for (a, b) in self.short.iter_mut().zip(other.short) {
            *a += b;
        }
        self
    }

    fn into_parts(self) -> (Vec<u64>, Vec<u64>) {
        (self.deficit, self.short)
    }
}

struct Walk<'a> {
    columns: &'a [u64],
    rank: usize,
    k: usize,
    binom: &'a [Vec<u64>],
}

impl Walk<'_> {
    /// Visits every completion of the subset chosen among the first `i` columns.
    fn descend(&self, i: usize, size: usize, basis: XorBasis, acc: &mut Counts) {
        let remaining = self.columns.len() - i;
        if basis.rank() == self.rank {
            // Saturated: every superset has full rank, so no further deficit.
            if self.rank < self.k {
                for j in 0..=remaining {
                    acc.short[size + j] += self.binom[remaining][j];
                }
            }
            return;
        }
        if remaining == 0 {
            acc.deficit[size] += (self.rank - basis.rank()) as u64;
            if basis.rank() < self.k {
                acc.short[size] += 1;
            }
            return;
        }
        self.descend(i + 1, size, basis, acc);
        let mut with = basis;
        with.insert(self.columns[i]);
        self.descend(i + 1, size + 1, with, acc);
    }
}

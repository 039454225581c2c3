//! Entropy of the syndrome `V M^T` of i.i.d. Bernoulli(eps) noise `V`.
//!
//! With `X` uniform and `Z = X + V`, the pair `(Z, V)` is independent, so
//! `S = X M^T = Z M^T + V M^T` given `Z = z` is a shift of the syndrome of
//! `V`. Hence `H(S | Z) = H(V M^T)`.

use rayon::prelude::*;

use crate::error::Result;
use crate::gf2::BinMatrix;

use super::profile::check_exact_size;

const CHUNK: usize = 1 << 12;

/// `H(V M^T)` in nats for `V ~ Bernoulli(eps)^n`.
pub fn syndrome_entropy(m: &BinMatrix, eps: f64) -> Result<f64> {
    let n = m.cols();
    check_exact_size(n)?;
    let (g, pivots) = m.echelon();
    let r = g.rows();
    if r == 0 {
        return Ok(0.0);
    }
    let pattern_prob: Vec<f64> = (0..=n as i32)
        .map(|w| eps.powi(w) * (1.0 - eps).powi(n as i32 - w))
        .collect();

    // Syndrome bit i is <v, row_i>; column j contributes its mask over rows.
    let columns: Vec<u64> = (0..n).map(|c| g.column_mask(c)).collect();

    if 2 * r <= n {
        Ok(by_full_walk(&columns, r, &pattern_prob))
    } else {
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        Ok(by_cosets(&columns, &free, r, &pattern_prob))
    }
}

/// Few syndromes: walk all `2^n` noise patterns and histogram
/// `(syndrome, weight)` in integers.
fn by_full_walk(columns: &[u64], r: usize, pattern_prob: &[f64]) -> f64 {
    let n = columns.len();
    let stride = n + 1;
    let low = n.min(16);
    let high = n - low;

    let counts = (0u64..1 << high)
        .into_par_iter()
        .fold(
            || vec![0u64; (1 << r) * stride],
            |mut hist, prefix| {
                let mut s = 0u64;
                let mut w = 0usize;
                for (i, &col) in columns[low..].iter().enumerate() {
                    if (prefix >> i) & 1 == 1 {
                        s ^= col;
                        w += 1;
                    }
                }
                // Gray-code walk over the low bits.
                let mut gray = 0u64;
                hist[s as usize * stride + w] += 1;
                for step in 1u64..1 << low {
                    let bit = step.trailing_zeros() as usize;
                    gray ^= 1 << bit;
                    s ^= columns[bit];
                    if (gray >> bit) & 1 == 1 {
                        w += 1;
                    } else {
                        w -= 1;
                    }
                    hist[s as usize * stride + w] += 1;
                }
                hist
            },
        )
        .reduce(
            || vec![0u64; (1 << r) * stride],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    counts
        .chunks(stride)
        .map(|hist| {
            let q: f64 = hist
                .iter()
                .zip(pattern_prob)
                .filter(|(&c, _)| c != 0)
                .map(|(&c, &p)| c as f64 * p)
                .sum();
            entropy_term(q)
        })
        .sum()
}

/// Many syndromes: with `M` in reduced echelon form, the coset of syndrome
/// `u` is `{ v : v_free = f, v_pivot = u + f A^T }`, so each `Q(u)` is a sum
/// over the `2^(n-r)` free patterns.
fn by_cosets(columns: &[u64], free: &[usize], r: usize, pattern_prob: &[f64]) -> f64 {
    let shifts: Vec<(u64, u32)> = (0u64..1 << free.len())
        .map(|f| {
            let mut s = 0;
            for (i, &c) in free.iter().enumerate() {
                if (f >> i) & 1 == 1 {
                    s ^= columns[c];
                }
            }
            (s, f.count_ones())
        })
        .collect();

    let total = 1usize << r;
    let partial: Vec<f64> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(total);
            (start..end)
                .map(|u| {
                    let q: f64 = shifts
                        .iter()
                        .map(|&(s, wf)| pattern_prob[((u as u64 ^ s).count_ones() + wf) as usize])
                        .sum();
                    entropy_term(q)
                })
                .sum::<f64>()
        })
        .collect();
    partial.iter().sum()
}

#[inline]
fn entropy_term(q: f64) -> f64 {
    if q > 0.0 {
        -q * q.ln()
    } else {
        0.0
    }
}

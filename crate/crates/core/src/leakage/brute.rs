use crate::channel::JointSource;
use crate::error::{Error, Result};
use crate::gf2::BinMatrix;

/// Largest `n` for brute force with a ternary (erasure) alphabet.
pub const BRUTE_MAX_N_TERNARY: usize = 12;
/// Largest `n` for brute force with a binary alphabet.
pub const BRUTE_MAX_N_BINARY: usize = 14;

/// `I(S; Z^n)` in nats from the full joint table
/// `P(s, z^n) = Σ_{x^n : x^n M^T = s} P_XZ^n(x^n, z^n)`.
///
/// Enumerates every `z^n` and every `x^n`, skipping only products that are
/// already zero. Reference oracle for the exact leakage routines.
pub fn brute_force_leakage(m: &BinMatrix, src: &JointSource) -> Result<f64> {
    let n = m.cols();
    let k = m.rows();
    let zs = src.z_size();
    let limit = match zs {
        0 | 1 => 26,
        2 => BRUTE_MAX_N_BINARY,
        3 => BRUTE_MAX_N_TERNARY,
        _ => {
            // keep |Z|^n 2^n within what the ternary limit allows
            let budget = (3f64 * 2.0).powi(BRUTE_MAX_N_TERNARY as i32).ln();
            (budget / (2.0 * zs as f64).ln()).floor() as usize
        }
    };
    if n > limit {
        return Err(Error::TooLarge {
            what: "block length n for brute-force leakage",
            value: n,
            limit,
        });
    }
    if k > 20 {
        return Err(Error::TooLarge {
            what: "row count k for brute-force leakage",
            value: k,
            limit: 20,
        });
    }
    let columns: Vec<u64> = (0..n).map(|c| m.column_mask(c)).collect();

    let mut p_s = vec![0.0f64; 1 << k];
    let mut p_sz = vec![0.0f64; 1 << k];
    let mut touched: Vec<usize> = Vec::new();
    let mut h_z = 0.0;
    let mut h_sz = 0.0;

    let mut z = vec![0usize; n];
    loop {
        fill(src, &columns, &z, 0, 0, 1.0, &mut p_sz, &mut touched);
        let mut pz = 0.0;
        for &s in &touched {
            let p = p_sz[s];
            if p > 0.0 {
                pz += p;
                p_s[s] += p;
                h_sz -= p * p.ln();
                p_sz[s] = 0.0;
            }
        }
        touched.clear();
        if pz > 0.0 {
            h_z -= pz * pz.ln();
        }
        // odometer over Z^n
        let mut i = 0;
        while i < n {
            z[i] += 1;
            if z[i] < zs {
                break;
            }
            z[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }

    let h_s: f64 = p_s.iter().filter(|&&p| p > 0.0).map(|p| -p * p.ln()).sum();
    Ok(h_s + h_z - h_sz)
}

#[allow(clippy::too_many_arguments)]
fn fill(
    src: &JointSource,
    columns: &[u64],
    z: &[usize],
    i: usize,
    s: u64,
    prob: f64,
    p_sz: &mut [f64],
    touched: &mut Vec<usize>,
) {
    if i == z.len() {
        let s = s as usize;
        if p_sz[s] == 0.0 {
            touched.push(s);
        }
        p_sz[s] += prob;
        return;
    }
    for x in 0..2 {
        let p = src.prob(x, z[i]);
        if p > 0.0 {
            let s = if x == 1 { s ^ columns[i] } else { s };
            fill(src, columns, z, i + 1, s, prob * p, p_sz, touched);
        }
    }
}

//! Joint source models: a uniform bit `X` observed through an erasure or a
//! symmetric channel.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// Side-information symbol. The erasure `?` is encoded as 2 everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZSymbol(pub u8);

impl ZSymbol {
    pub const ZERO: ZSymbol = ZSymbol(0);
    pub const ONE: ZSymbol = ZSymbol(1);
    pub const ERASURE: ZSymbol = ZSymbol(2);

    pub fn is_erasure(self) -> bool {
        self == Self::ERASURE
    }
}

impl fmt::Display for ZSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_erasure() {
            f.write_str("?")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Finite joint distribution `P_XZ` over `{0, 1} x Z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointSource {
    z_alphabet: Vec<ZSymbol>,
    // probs[x][z_index]
    probs: [Vec<f64>; 2],
}

impl JointSource {
    /// Builds a source from a 2 x |Z| table. Entries must be non-negative and
    /// sum to one within 1e-12.
    pub fn new(z_alphabet: Vec<ZSymbol>, probs: [Vec<f64>; 2]) -> Result<Self> {
        if probs.iter().any(|row| row.len() != z_alphabet.len()) {
            return Err(Error::Invariant(
                "probability table does not match the Z alphabet".into(),
            ));
        }
        if let Some(&bad) = probs.iter().flatten().find(|p| p.is_nan() || **p < 0.0) {
            return Err(Error::Probability {
                name: "P_XZ entry",
                value: bad,
            });
        }
        let total: f64 = probs.iter().flatten().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Invariant(format!("P_XZ sums to {total}, not 1")));
        }
        Ok(Self { z_alphabet, probs })
    }

    pub fn z_alphabet(&self) -> &[ZSymbol] {
        &self.z_alphabet
    }

    pub fn z_size(&self) -> usize {
        self.z_alphabet.len()
    }

    /// `P_XZ(x, z)` with `z` given by its index in the alphabet.
    #[inline]
    pub fn prob(&self, x: usize, z_index: usize) -> f64 {
        self.probs[x][z_index]
    }

    pub fn p_z(&self, z_index: usize) -> f64 {
        self.probs[0][z_index] + self.probs[1][z_index]
    }

    pub fn p_x(&self, x: usize) -> f64 {
        self.probs[x].iter().sum()
    }

    /// Conditional entropy `H(X|Z)` in nats, straight from the table.
    pub fn conditional_entropy(&self) -> f64 {
        let mut h = 0.0;
        for z in 0..self.z_size() {
            let pz = self.p_z(z);
            for x in 0..2 {
                let p = self.prob(x, z);
                if p > 0.0 {
                    h -= p * (p / pz).ln();
                }
            }
        }
        h
    }

    /// Mutual information `I(X; Z)` in nats.
    pub fn mutual_information(&self) -> f64 {
        let hx: f64 = (0..2)
            .map(|x| self.p_x(x))
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.ln())
            .sum();
        hx - self.conditional_entropy()
    }
}

/// Uniform `X` through BEC(eps): `P(x, x) = (1-eps)/2`, `P(x, ?) = eps/2`.
pub fn bec_joint(eps: f64) -> Result<JointSource> {
    check_probability("eps", eps)?;
    let keep = (1.0 - eps) / 2.0;
    let erase = eps / 2.0;
    JointSource::new(
        vec![ZSymbol::ZERO, ZSymbol::ONE, ZSymbol::ERASURE],
        [vec![keep, 0.0, erase], vec![0.0, keep, erase]],
    )
}

/// Uniform `X` through BSC(eps): `P(x, x) = (1-eps)/2`, `P(x, x+1) = eps/2`.
pub fn bsc_joint(eps: f64) -> Result<JointSource> {
    check_probability("eps", eps)?;
    let same = (1.0 - eps) / 2.0;
    let flip = eps / 2.0;
    JointSource::new(
        vec![ZSymbol::ZERO, ZSymbol::ONE],
        [vec![same, flip], vec![flip, same]],
    )
}

/// Erasure probability `4 eps (1 - eps)` of the BEC that is less noisy than
/// BSC(eps).
pub fn less_noisy_erasure_param(eps: f64) -> Result<f64> {
    check_probability("eps", eps)?;
    Ok(4.0 * eps * (1.0 - eps))
}

/// Eavesdropper channel, written `bec:<eps>` or `bsc:<eps>` on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "eps", rename_all = "lowercase")]
pub enum Channel {
    Bec(f64),
    Bsc(f64),
}

impl Channel {
    pub fn eps(self) -> f64 {
        match self {
            Channel::Bec(e) | Channel::Bsc(e) => e,
        }
    }

    pub fn joint(self) -> Result<JointSource> {
        match self {
            Channel::Bec(e) => bec_joint(e),
            Channel::Bsc(e) => bsc_joint(e),
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Channel::Bec(e) => write!(f, "bec:{e}"),
            Channel::Bsc(e) => write!(f, "bsc:{e}"),
        }
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Channel(s.to_string());
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        let eps: f64 = value.parse().map_err(|_| bad())?;
        if !value
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '-' | '+'))
        {
            return Err(bad());
        }
        check_probability("eps", eps)?;
        match kind {
            "bec" => Ok(Channel::Bec(eps)),
            "bsc" => Ok(Channel::Bsc(eps)),
            _ => Err(bad()),
        }
    }
}

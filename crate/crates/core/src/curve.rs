use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::exponent::{e_r, e_r_bec_closed, e_r_bsc_closed, e_x_bec, e_x_bsc_reduction, OptResult};
use crate::format::csv_num;

pub const CSV_HEADER: &str = "R_nats,value_nats,R_bits,value_bits,theta_star";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    /// `E_r` through the generic `psi` of the channel's joint source.
    ErGeneral,
    ErBec,
    ErBsc,
    /// `E_x(R, 1 - eps)` for BEC(eps) side information.
    ExBec,
    /// `E_x(R, 1 - 4 eps (1 - eps))` for BSC(eps) side information.
    ExBscReduction,
}

impl CurveKind {
    pub const ALL: [CurveKind; 5] = [
        CurveKind::ErGeneral,
        CurveKind::ErBec,
        CurveKind::ErBsc,
        CurveKind::ExBec,
        CurveKind::ExBscReduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::ErGeneral => "er-general",
            CurveKind::ErBec => "er-bec",
            CurveKind::ErBsc => "er-bsc",
            CurveKind::ExBec => "ex-bec",
            CurveKind::ExBscReduction => "ex-bsc-reduction",
        }
    }

    /// Evaluates the exponent at one rate.
    pub fn evaluate(self, channel: Channel, rate: f64) -> Result<OptResult> {
        match (self, channel) {
            (CurveKind::ErGeneral, ch) => e_r(rate, &ch.joint()?),
            (CurveKind::ErBec, Channel::Bec(eps)) => e_r_bec_closed(rate, eps),
            (CurveKind::ErBsc, Channel::Bsc(eps)) => e_r_bsc_closed(rate, eps),
            (CurveKind::ExBec, Channel::Bec(eps)) => e_x_bec(rate, 1.0 - eps),
            (CurveKind::ExBscReduction, Channel::Bsc(eps)) => e_x_bsc_reduction(rate, eps),
            (kind, ch) => Err(Error::CurveChannel {
                kind: kind.name().into(),
                channel: ch.to_string(),
            }),
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CurveKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unknown {
                what: "curve kind",
                name: s.into(),
            })
    }
}

/// Uniform rate grid `r_min, ..., r_max` with `steps` points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub steps: usize,
}

impl RateGrid {
    pub fn new(r_min: f64, r_max: f64, steps: usize) -> Result<Self> {
        if !(r_min >= 0.0 && r_min < r_max && r_max.is_finite()) {
            return Err(Error::Grid(format!(
                "need 0 <= r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if steps < 2 {
            return Err(Error::Grid(format!("need at least 2 steps, got {steps}")));
        }
        Ok(Self {
            r_min,
            r_max,
            steps,
        })
    }

    /// Full-rate range `[0, ln 2]` of a binary source.
    pub fn full_rate(steps: usize) -> Result<Self> {
        Self::new(0.0, LN_2, steps)
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.r_max;
        }
        self.r_min + (self.r_max - self.r_min) * i as f64 / (self.steps - 1) as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|i| self.point(i))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub rate: f64,
    pub value: f64,
    pub theta_star: Option<f64>,
}

/// Exponent values on a rate grid, ready for CSV emission.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    pub kind: CurveKind,
    pub channel: Channel,
    pub clamped: bool,
    pub points: Vec<CurvePoint>,
}

impl CurveTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.points.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let theta = p.theta_star.map_or_else(String::new, csv_num);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_num(p.rate),
                csv_num(p.value),
                csv_num(p.rate / LN_2),
                csv_num(p.value / LN_2),
                theta
            ));
        }
        out
    }
}

/// Evaluates `kind` on `grid`. With `clamp`, negative (vacuous) values are
/// reported as 0.
pub fn curve(kind: CurveKind, channel: Channel, grid: RateGrid, clamp: bool) -> Result<CurveTable> {
    let points = (0..grid.steps)
        .into_par_iter()
        .map(|i| {
            let rate = grid.point(i);
            let r = kind.evaluate(channel, rate)?;
            let value = if clamp { r.value.max(0.0) } else { r.value };
            Ok(CurvePoint {
                rate,
                value,
                theta_star: r.theta_star,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveTable {
        kind,
        channel,
        clamped: clamp,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in CurveKind::ALL {
            assert_eq!(k.name().parse::<CurveKind>().unwrap(), k);
        }
        assert!("ex-awgn".parse::<CurveKind>().is_err());
    }

    #[test]
    fn kind_channel_mismatch() {
        assert!(matches!(
            CurveKind::ErBsc.evaluate(Channel::Bec(0.5), 0.1),
            Err(Error::CurveChannel { .. })
        ));
        assert!(CurveKind::ExBscReduction
            .evaluate(Channel::Bec(0.5), 0.1)
            .is_err());
        assert!(CurveKind::ErGeneral
            .evaluate(Channel::Bsc(0.2), 0.1)
            .is_ok());
    }

    #[test]
    fn grid_validation() {
        assert!(RateGrid::new(0.0, 1.0, 1).is_err());
        assert!(RateGrid::new(0.5, 0.5, 3).is_err());
        assert!(RateGrid::new(-0.1, 0.5, 3).is_err());
        let g = RateGrid::new(0.0, 1.0, 5).unwrap();
        assert_eq!(
            g.points().collect::<Vec<_>>(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
    }

    #[test]
    fn two_steps_two_rows() {
        let t = curve(
            CurveKind::ExBec,
            Channel::Bec(0.5),
            RateGrid::full_rate(2).unwrap(),
            false,
        )
        .unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], CSV_HEADER);
        // R = 0 limit is unattained: theta printed as inf
        assert_eq!(lines[1], "0,0.34657359028,0,0.5,inf");
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
    }

    #[test]
    fn clamping_only_affects_negative_values() {
        let g = RateGrid::full_rate(20).unwrap();
        let raw = curve(CurveKind::ExBec, Channel::Bec(0.5), g, false).unwrap();
        let clamped = curve(CurveKind::ExBec, Channel::Bec(0.5), g, true).unwrap();
        assert!(raw.points.last().unwrap().value < 0.0);
        for (a, b) in raw.points.iter().zip(&clamped.points) {
            assert_eq!(b.value, a.value.max(0.0));
        }
    }

    #[test]
    fn curves_are_non_increasing() {
        let g = RateGrid::full_rate(120).unwrap();
        for (kind, ch) in [
            (CurveKind::ErGeneral, Channel::Bsc(0.11)),
            (CurveKind::ErGeneral, Channel::Bec(0.3)),
            (CurveKind::ErBec, Channel::Bec(0.5)),
            (CurveKind::ErBsc, Channel::Bsc(0.25)),
            (CurveKind::ExBec, Channel::Bec(0.5)),
            (CurveKind::ExBscReduction, Channel::Bsc(0.11)),
        ] {
            let t = curve(kind, ch, g, false).unwrap();
            for w in t.points.windows(2) {
                assert!(
                    w[1].value <= w[0].value + 1e-12,
                    "{kind} {ch} at R={}",
                    w[1].rate
                );
                assert!(w[1].value.is_finite());
            }
        }
    }
}

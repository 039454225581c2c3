//! Golden-section search for maxima of unimodal functions on an interval.

/// Interval width at which the search stops.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Maximum {
    pub arg: f64,
    pub value: f64,
}

/// Maximizes `f` on `[lo, hi]`, assuming `f` is unimodal there.
///
/// The endpoints are evaluated as well, so a maximum sitting on the boundary
/// is returned exactly at the boundary. In debug builds the result is checked
/// against a coarse grid to catch objectives that are not unimodal.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Maximum {
    assert!(lo <= hi, "empty interval [{lo}, {hi}]");
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = Maximum {
        arg: mid,
        value: f(mid),
    };
    for x in [lo, hi] {
        let v = f(x);
        if v >= best.value {
            best = Maximum { arg: x, value: v };
        }
    }
    debug_assert!(
        unimodal_guard(&f, lo, hi, best.value),
        "objective not unimodal on [{lo}, {hi}]: search returned {best:?}"
    );
    best
}

/// Minimizes `f` on `[lo, hi]`, assuming `f` is unimodal there.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Maximum {
    let m = golden_max(|x| -f(x), lo, hi, tol);
    Maximum {
        arg: m.arg,
        value: -m.value,
    }
}

fn unimodal_guard<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, best: f64) -> bool {
    const POINTS: usize = 16;
    (0..=POINTS).all(|i| {
        let x = lo + (hi - lo) * i as f64 / POINTS as f64;
        let v = f(x);
        !v.is_finite() || v <= best + 1e-9 * (1.0 + best.abs())
    })
}

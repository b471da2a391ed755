//! One-dimensional maximization: dense grid followed by golden-section refinement
//! of the bracketing cell.

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Maximum {
    pub arg: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of `f` on `[a, b]` down to interval width `tol`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Maximum {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iters = 0;
    while (b - a).abs() > tol && iters < 200 {
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
        iters += 1;
    }
    if fc >= fd {
        Maximum { arg: c, value: fc }
    } else {
        Maximum { arg: d, value: fd }
    }
}

/// Evaluate `f` on `lo, lo + step, …, hi`, then refine around the best grid point.
/// Ties keep the first (smallest) argument.
pub(crate) fn grid_then_golden<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, step: f64, tol: f64) -> Maximum {
    let cells = ((hi - lo) / step).round().max(1.0) as usize;
    let mut best = Maximum { arg: lo, value: f(lo) };
    let mut best_i = 0;
    for i in 1..=cells {
        let x = if i == cells {
            hi
        } else {
            lo + (hi - lo) * i as f64 / cells as f64
        };
        let v = f(x);
        if v > best.value {
            best = Maximum { arg: x, value: v };
            best_i = i;
        }
    }
    let h = (hi - lo) / cells as f64;
    let a = (lo + h * best_i.saturating_sub(1) as f64).max(lo);
    let b = (lo + h * (best_i + 1) as f64).min(hi);
    let refined = golden_max(f, a, b, tol);
    // a flat top must not drift off the grid point on rounding noise
    if refined.value > best.value + 4.0 * f64::EPSILON * best.value.abs() {
        refined
    } else {
        best
    }
}

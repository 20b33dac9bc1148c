//! Scalar root finding: bracket scanning, bisection and Newton polishing.

/// Bisection on `[lo, hi]`, which must bracket a sign change of `f`.
///
/// Stops when the bracket is narrower than `x_tol` or after `max_iter`
/// halvings. Returns `None` if the endpoints do not bracket a root.
pub fn bisect<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    x_tol: f64,
    max_iter: usize,
) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= x_tol || mid == lo || mid == hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Newton iteration confined to `[lo, hi]`.
///
/// Returns `None` if an iterate leaves the bracket, the derivative vanishes, or
/// the residual does not fall below `f_tol` within `max_iter` steps.
pub fn newton<F, D>(
    f: F,
    df: D,
    x0: f64,
    (lo, hi): (f64, f64),
    f_tol: f64,
    max_iter: usize,
) -> Option<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = x0;
    for _ in 0..max_iter {
        let fx = f(x);
        if fx.abs() <= f_tol {
            return Some(x);
        }
        let dfx = df(x);
        if dfx == 0.0 || !dfx.is_finite() {
            return None;
        }
        let next = x - fx / dfx;
        if !next.is_finite() || next < lo || next > hi {
            return None;
        }
        if next == x {
            return (f(x).abs() <= f_tol).then_some(x);
        }
        x = next;
    }
    (f(x).abs() <= f_tol).then_some(x)
}

/// All roots of `f` on `[lo, hi]`, ascending.
///
/// The interval is scanned on `intervals` equal steps; every sign change is
/// bisected and then Newton-polished with a central-difference derivative.
/// Grid nodes where `|f| <= f_tol` count as roots, which catches tangential
/// roots at the ends of the interval.
pub fn bracketed_roots<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    intervals: usize,
    f_tol: f64,
    max_iter: usize,
) -> Vec<f64> {
    let n = intervals.max(1);
    let step = (hi - lo) / n as f64;
    let node = |i: usize| if i == n { hi } else { lo + step * i as f64 };
    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if roots.last().is_none_or(|&last| (r - last).abs() > 1e-12) {
            roots.push(r);
        }
    };
    let mut prev_x = node(0);
    let mut prev_f = f(prev_x);
    if prev_f.abs() <= f_tol {
        push(prev_x, &mut roots);
    }
    for i in 1..=n {
        let x = node(i);
        let fx = f(x);
        if fx.abs() <= f_tol {
            push(x, &mut roots);
        } else if prev_f.abs() > f_tol && prev_f.signum() != fx.signum() {
            if let Some(r) = bisect(&f, prev_x, x, 0.0, max_iter) {
                let h = 1e-7 * (hi - lo).abs().max(1.0);
                let df = |t: f64| (f(t + h) - f(t - h)) / (2.0 * h);
                let polished = newton(&f, df, r, (prev_x, x), f_tol, 20)
                    .filter(|p| f(*p).abs() <= f(r).abs())
                    .unwrap_or(r);
                push(polished, &mut roots);
            }
        }
        prev_x = x;
        prev_f = fx;
    }
    roots
}

#![allow(dead_code)]

/// `(a + b) + r == total`, or no double `r` can make it so. The sum is
/// monotone in `r`, so neighbours of `r` bracketing `total` from both sides
/// prove unreachability.
pub fn additive_or_unreachable(a: f64, b: f64, r: f64, total: f64) -> bool {
    let p = a + b;
    let s = p + r;
    if s == total {
        return true;
    }
    let (lo, hi) = if s < total {
        (s, p + r.next_up())
    } else {
        (p + r.next_down(), s)
    };
    lo < total && hi > total && (s - total).abs() <= p.abs().max(total.abs()) * f64::EPSILON
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

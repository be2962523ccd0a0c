//! Bessel function of order zero.
//!
//! Ascending power series below |x| = 8, Hankel-style asymptotic form above.

use std::f64::consts::{FRAC_PI_4, PI};

/// J₀(x).
pub fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 8.0 {
        // Σ (-x²/4)^k / (k!)²
        let m = -0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..80 {
            term *= m / ((k * k) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1.0) {
                break;
            }
        }
        sum
    } else {
        let z = 8.0 / ax;
        let y = z * z;
        let chi = ax - FRAC_PI_4;
        let p = 1.0
            + y * (-0.1098628627e-2
                + y * (0.2734510407e-4 + y * (-0.2073370639e-5 + y * 0.2093887211e-6)));
        let q = -0.1562499995e-1
            + y * (0.1430488765e-3
                + y * (-0.6911147651e-5 + y * (0.7621095161e-6 - y * 0.934935152e-7)));
        (2.0 / (PI * ax)).sqrt() * (chi.cos() * p - z * chi.sin() * q)
    }
}

/// k-th positive zero of J₀ (k = 1, 2), by bisection of the series branch.
pub fn j0_zero(k: usize) -> f64 {
    let (mut lo, mut hi) = match k {
        1 => (2.0, 3.0),
        2 => (5.0, 6.0),
        _ => panic!("only the first two zeros are tabulated here"),
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < f64::EPSILON * mid {
            break;
        }
        if j0(lo) * j0(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

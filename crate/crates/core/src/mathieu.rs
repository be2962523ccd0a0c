//! Reference evaluation of the lowest Mathieu characteristic values through
//! the classical three-term recurrences and their continued fractions.
//!
//! For φ'' + (a − 2q cos 2z) φ = 0 the π-periodic even solution attached to
//! a₀ has cosine coefficients A₂ᵣ obeying
//!
//! ```text
//! a A₀ = q A₂
//! (a − 4) A₂ = q (2A₀ + A₄)
//! (a − 4r²) A₂ᵣ = q (A₂ᵣ₋₂ + A₂ᵣ₊₂)      r ≥ 2
//! ```
//!
//! and the 2π-periodic odd solution attached to b₁ has sine coefficients
//! B₂ᵣ₊₁ with
//!
//! ```text
//! (a − 1 + q) B₁ = q B₃
//! (a − (2r+1)²) B₂ᵣ₊₁ = q (B₂ᵣ₋₁ + B₂ᵣ₊₃)   r ≥ 1
//! ```
//!
//! Evaluating the tail ratios downward turns each system into a single
//! scalar equation f(a) = 0 solved here by bisection. This path never touches
//! the matrix diagonalization used elsewhere in the crate, which is exactly
//! why it serves as an independent cross-check.

const TAIL_TERMS: usize = 60;
const BISECTION_STEPS: usize = 200;

/// Characteristic value a₀(q) of the even π-periodic solution.
pub fn a0(q: f64) -> f64 {
    assert!(q >= 0.0, "a0(q) requires q >= 0");
    if q == 0.0 {
        return 0.0;
    }
    let f = |a: f64| {
        // t_r = A_{2r} / A_{2r-2}, evaluated downward
        let mut t = 0.0;
        for r in (2..=TAIL_TERMS).rev() {
            let r2 = (2 * r) as f64;
            t = q / (a - r2 * r2 - q * t);
        }
        a - 2.0 * q * q / (a - 4.0 - q * t)
    };
    // a0 decreases from 0 as q grows; generous bracket below the q=0 value
    let lo = -(2.0 * q + 0.5 * q * q + 2.0);
    let hi = 0.5;
    bisect(f, lo, hi)
}

/// Characteristic value b₁(q) of the odd 2π-periodic solution.
pub fn b1(q: f64) -> f64 {
    assert!(q >= 0.0, "b1(q) requires q >= 0");
    if q == 0.0 {
        return 1.0;
    }
    let f = |a: f64| {
        let mut t = 0.0;
        for r in (1..=TAIL_TERMS).rev() {
            let odd = (2 * r + 1) as f64;
            t = q / (a - odd * odd - q * t);
        }
        a - 1.0 + q - q * t
    };
    let lo = 1.0 - q - 0.5 * q * q - 2.0;
    let hi = 1.0 + 0.5;
    bisect(f, lo, hi)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    let fhi = f(hi);
    assert!(
        flo * fhi <= 0.0,
        "characteristic-value bracket does not straddle a root: f({lo}) = {flo}, f({hi}) = {fhi}"
    );
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if hi - lo < f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
        let fm = f(mid);
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_limits() {
        assert_eq!(a0(0.0), 0.0);
        assert_eq!(b1(0.0), 1.0);
    }

    #[test]
    fn small_q_series() {
        // a0 = -q²/2 + 7q⁴/128 - ..., b1 = 1 - q - q²/8 + q³/64 - ...
        let q: f64 = 0.05;
        let a_series = -q * q / 2.0 + 7.0 * q.powi(4) / 128.0;
        assert!((a0(q) - a_series).abs() < 1e-9);
        let b_series = 1.0 - q - q * q / 8.0 + q.powi(3) / 64.0;
        assert!((b1(q) - b_series).abs() < 1e-8);
    }

    #[test]
    fn tabulated_values() {
        assert!((a0(1.0) - (-0.45513860)).abs() < 1e-6);
        assert!((b1(1.0) - (-0.11024882)).abs() < 1e-6);
        assert!((a0(2.0) - (-1.51395626)).abs() < 1e-6);
    }

    #[test]
    fn monotone_ground_edge() {
        assert!(a0(2.0) < a0(1.0));
        assert!(a0(4.0) < a0(2.0));
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Binomial mass and tail probabilities in log space.
//!
//! Point masses use Loader's saddle-point form (Stirling remainder plus the
//! deviance term `bd0`), which keeps full double precision for `n` well past
//! 10^5 where `ln C(n, k)` built from log-gamma differences would lose digits
//! to cancellation. Tails are summed outward from their largest term with a
//! max-shifted log-sum-exp, so nothing underflows before the final `exp`.

use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Relative weight below which the rest of a monotone tail is dropped.
const TAIL_EPS: f64 = 1e-18;

/// `ln(k!) - ln(sqrt(2 pi k) (k/e)^k)`, the Stirling remainder.
fn stirlerr(k: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    debug_assert!(k > 0);
    let x = k as f64;
    if k <= 15 {
        // k! is exact in f64 here
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        return fact.ln() - LN_SQRT_2PI - (x + 0.5) * x.ln() + x;
    }
    let xx = x * x;
    if k > 500 {
        (S0 - S1 / xx) / x
    } else if k > 80 {
        (S0 - (S1 - S2 / xx) / xx) / x
    } else if k > 35 {
        (S0 - (S1 - (S2 - S3 / xx) / xx) / xx) / x
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / xx) / xx) / xx) / xx) / x
    }
}

/// Deviance term `x ln(x / np) + np - x`, evaluated without cancellation.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let v = (x - np) / (x + np);
        let v2 = v * v;
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        let mut j = 1.0;
        loop {
            ej *= v2;
            let next = s + ej / (2.0 * j + 1.0);
            if next == s {
                return next;
            }
            s = next;
            j += 1.0;
        }
    }
    x * (x / np).ln() + np - x
}

/// `ln P(X = k)` for `X ~ Binomial(n, p)`, `0 < p < 1`.
pub fn ln_pmf(n: u64, k: u64, p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    if k > n {
        return f64::NEG_INFINITY;
    }
    let q = 1.0 - p;
    let nf = n as f64;
    if k == 0 {
        return if p < 0.1 {
            -bd0(nf, nf * q) - nf * p
        } else {
            nf * (-p).ln_1p()
        };
    }
    if k == n {
        return if q < 0.1 {
            -bd0(nf, nf * p) - nf * q
        } else {
            nf * p.ln()
        };
    }
    let kf = k as f64;
    let lc = stirlerr(n) - stirlerr(k) - stirlerr(n - k) - bd0(kf, nf * p) - bd0(nf - kf, nf * q);
    let lf = (2.0 * PI).ln() + kf.ln() + (-kf / nf).ln_1p();
    lc - 0.5 * lf
}

/// `ln P(lo <= X <= hi)`; an empty range gives negative infinity.
pub fn ln_range_mass(n: u64, p: f64, lo: u64, hi: u64) -> f64 {
    let hi = hi.min(n);
    if lo > hi {
        return f64::NEG_INFINITY;
    }
    if lo == 0 && hi == n {
        return 0.0;
    }
    let mode = (((n + 1) as f64 * p).floor() as u64).min(n);
    let start = mode.clamp(lo, hi);
    let l_max = ln_pmf(n, start, p);
    let mut sum = 1.0;

    // pmf is unimodal, so terms shrink monotonically walking away from `start`
    // and `term * remaining` bounds everything not yet added.
    let mut k = start;
    while k > lo {
        k -= 1;
        let term = (ln_pmf(n, k, p) - l_max).exp();
        sum += term;
        if term * (k - lo) as f64 <= TAIL_EPS * sum {
            break;
        }
    }
    let mut k = start;
    while k < hi {
        k += 1;
        let term = (ln_pmf(n, k, p) - l_max).exp();
        sum += term;
        if term * (hi - k) as f64 <= TAIL_EPS * sum {
            break;
        }
    }
    l_max + sum.ln()
}

/// `ln P(X < k)`, for any `k` (values above `n` give `ln 1 = 0`).
pub fn ln_lower_tail(n: u64, p: f64, k: u64) -> f64 {
    if k == 0 {
        return f64::NEG_INFINITY;
    }
    ln_range_mass(n, p, 0, k - 1)
}

/// `ln P(X >= k)`.
pub fn ln_upper_tail(n: u64, p: f64, k: u64) -> f64 {
    ln_range_mass(n, p, k, n)
}

pub fn lower_tail(n: u64, p: f64, k: u64) -> f64 {
    ln_lower_tail(n, p, k).exp()
}

pub fn upper_tail(n: u64, p: f64, k: u64) -> f64 {
    ln_upper_tail(n, p, k).exp()
}

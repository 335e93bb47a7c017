//! Shared helpers for the drifted scale function
//! f_mu(x) = (e^{2 mu x} - 2 mu x - 1) / (2 mu^2) and for stable
//! log-domain arithmetic.

/// e^s - s - 1, accurate near zero via the series
/// s^2/2 (1 + s/3 + s^2/12 + s^3/60 + s^4/360 + ...).
pub fn expm1m(s: f64) -> f64 {
    if s.abs() < 0.5 {
        let mut term = s * s / 2.0;
        let mut sum = term;
        // e^s - 1 - s = sum_{k>=2} s^k / k!
        for k in 3..24 {
            term *= s / k as f64;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        s.exp_m1() - s
    }
}

/// ln(e^s - s - 1) for s >= 0, stable through the overflow regime.
pub fn ln_expm1m(s: f64) -> f64 {
    if s > 600.0 {
        // (s + 1) e^{-s} is negligible or tiny
        s + (-((s + 1.0) * (-s).exp())).ln_1p()
    } else {
        expm1m(s).ln()
    }
}

/// f_mu(x) for any real x.
pub fn f_mu(mu: f64, x: f64) -> f64 {
    expm1m(2.0 * mu * x) / (2.0 * mu * mu)
}

/// ln f_mu(x), stable for large positive x.
pub fn ln_f_mu(mu: f64, x: f64) -> f64 {
    let s = 2.0 * mu * x;
    if s > 600.0 {
        ln_expm1m(s) - (2.0 * mu * mu).ln()
    } else {
        f_mu(mu, x).ln()
    }
}

/// f_mu'(x) = (e^{2 mu x} - 1) / mu.
pub fn f_mu_prime(mu: f64, x: f64) -> f64 {
    (2.0 * mu * x).exp_m1() / mu
}

/// ln(1 + e^z) without overflow.
pub fn softplus(z: f64) -> f64 {
    if z > 36.0 {
        z + (-z).exp()
    } else {
        z.exp().ln_1p()
    }
}

/// ln(e^z - 1) for z > 0, stable at both ends.
pub fn ln_expm1(z: f64) -> f64 {
    if z > 36.0 {
        z + (-(-z).exp()).ln_1p()
    } else {
        z.exp_m1().ln()
    }
}

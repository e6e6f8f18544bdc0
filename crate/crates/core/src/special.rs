//! Special functions. `erf`/`erfc`/`lgamma` come from `libm` (musl ports,
//! accurate to about one ulp); the rest is built on them.

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// Scaled complementary error function `exp(x^2) erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x < 25.0 {
        return (x * x).exp() * erfc(x);
    }
    // asymptotic series; the next term is below 1e-12 relative at x = 25
    let inv2 = 1.0 / (2.0 * x * x);
    let series = 1.0 - inv2 + 3.0 * inv2 * inv2 - 15.0 * inv2.powi(3) + 105.0 * inv2.powi(4);
    series / (x * std::f64::consts::PI.sqrt())
}

/// `exp(a) * (1 + erf(x))`, without overflow in `exp(a)` or cancellation in
/// `1 + erf(x)` for very negative `x`.
pub fn exp_times_one_plus_erf(a: f64, x: f64) -> f64 {
    if x >= 0.0 {
        a.exp() * (1.0 + erf(x))
    } else {
        // 1 + erf(x) = erfc(-x) = exp(-x^2) erfcx(-x)
        (a - x * x).exp() * erfcx(-x)
    }
}

/// Regularized lower incomplete gamma `P(n+1, x)` for integer `n`, i.e. the
/// probability that a Poisson(x) variable exceeds `n`.
pub fn poisson_tail(n: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    let ln_x = x.ln();
    let ln_term = |k: usize| -x + k as f64 * ln_x - ln_factorial(k);
    if x < n as f64 + 1.0 {
        // sum_{k > n} of decreasing terms
        let mut sum = 0.0;
        let mut k = n + 1;
        let mut term = ln_term(k).exp();
        while term > 0.0 {
            sum += term;
            k += 1;
            term *= x / k as f64;
            if term < sum * 1e-17 {
                break;
            }
        }
        sum
    } else {
        // 1 - sum_{k <= n}
        let q: f64 = (0..=n).map(|k| ln_term(k).exp()).sum();
        (1.0 - q).max(0.0)
    }
}

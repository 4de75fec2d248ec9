//! Gauss hypergeometric function `₂F₁(a, b; c; x)` on `[0, 1]`.

use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000_000;
const SERIES_RTOL: f64 = 1e-16;

/// `ln|Γ(x)|` and the sign of `Γ(x)`, or `None` at the poles `0, −1, −2, …`.
pub fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if x > 0.0 {
        return Some((ln_gamma(x), 1.0));
    }
    if x == x.floor() {
        return None;
    }
    // reflection Γ(x)Γ(1−x) = π / sin(πx)
    let s = (PI * x).sin();
    Some((PI.ln() - s.abs().ln() - ln_gamma(1.0 - x), s.signum()))
}

/// `Π Γ(num) / Π Γ(den)`, with poles in the denominator giving zero.
fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    let mut log = 0.0;
    let mut sign = 1.0;
    for &x in den {
        match ln_gamma_signed(x) {
            Some((l, s)) => {
                log -= l;
                sign *= s;
            }
            None => return Ok(0.0),
        }
    }
    for &x in num {
        let (l, s) = ln_gamma_signed(x).ok_or_else(|| Error::Domain(format!("Γ has a pole at {x}")))?;
        log += l;
        sign *= s;
    }
    Ok(sign * log.exp())
}

fn nonpositive_integer(x: f64) -> Option<usize> {
    (x <= 0.0 && x == x.floor() && x > -(MAX_TERMS as f64)).then(|| (-x) as usize)
}

/// Degree of the polynomial when `a` or `b` is a nonpositive integer.
fn terminating_degree(a: f64, b: f64) -> Option<usize> {
    match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(m), Some(n)) => Some(m.min(n)),
        (m, n) => m.or(n),
    }
}

/// Finite sum of a terminating series at `x`.
fn polynomial(a: f64, b: f64, c: f64, x: f64, degree: usize) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..degree {
        let k = k as f64;
        if c + k == 0.0 {
            return Err(Error::Domain(format!("₂F₁ undefined: c = {c} hits zero before termination")));
        }
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
    }
    Ok(sum)
}

/// `Γ(c)Γ(c−a−b) / (Γ(c−a)Γ(c−b))`, valid for `c > 0` and `c > a + b`.
pub fn gauss_sum_at_1(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(c > 0.0 && c > a + b) {
        return Err(Error::Domain(format!("Gauss summation needs c > max(0, a+b), got a={a}, b={b}, c={c}")));
    }
    gamma_ratio(&[c, c - a - b], &[c - a, c - b])
}

/// Exact sum at `x = 1` of a series that terminates because `a` or `b` is a
/// nonpositive integer.
pub fn terminating_sum_at_1(a: f64, b: f64, c: f64) -> Result<f64> {
    let degree = terminating_degree(a, b)
        .ok_or_else(|| Error::Domain(format!("series with a={a}, b={b} does not terminate")))?;
    polynomial(a, b, c, 1.0, degree)
}

/// `₂F₁(a, b; c; 1)`: the terminating sum when available, otherwise Gauss's
/// Γ-ratio.
pub fn hypergeom_2f1_at_1(a: f64, b: f64, c: f64) -> Result<f64> {
    if terminating_degree(a, b).is_some() {
        terminating_sum_at_1(a, b, c)
    } else {
        gauss_sum_at_1(a, b, c)
    }
}

/// `₂F₁(a, b; c; x)` for `x ∈ [0, 1]`.
///
/// Sums the power series until the geometric tail bound falls below machine
/// precision. Close to `x = 1` the `1 − x` connection formula is used when
/// `c − a − b` is safely away from an integer.
pub fn hypergeom_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("₂F₁ argument {x} outside [0, 1]")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if let Some(degree) = terminating_degree(a, b) {
        return polynomial(a, b, c, x, degree);
    }
    if nonpositive_integer(c).is_some() {
        return Err(Error::Domain(format!("₂F₁ undefined for c = {c}")));
    }
    if x == 1.0 {
        return hypergeom_2f1_at_1(a, b, c);
    }
    let gap = c - a - b;
    if x > 0.9 && (gap - gap.round()).abs() > 0.05 {
        return connection_near_1(a, b, c, x);
    }
    series(a, b, c, x)
}

fn series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        term *= ratio;
        sum += term;
        let rho = ratio.abs();
        // once the ratio is below 1 and the terms shrink, the tail is bounded
        // by a geometric series
        if rho < 1.0 && kf > a.abs() + b.abs() + c.abs() {
            let tail = term.abs() * rho / (1.0 - rho);
            if tail <= SERIES_RTOL * sum.abs() {
                return Ok(sum);
            }
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(Error::Domain(format!("₂F₁({a}, {b}; {c}; {x}) series did not converge")))
}

fn connection_near_1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let y = 1.0 - x;
    let gap = c - a - b;
    let first = gamma_ratio(&[c, gap], &[c - a, c - b])?;
    let second = gamma_ratio(&[c, -gap], &[a, b])?;
    let mut value = 0.0;
    if first != 0.0 {
        value += first * series(a, b, 1.0 - gap, y)?;
    }
    if second != 0.0 {
        value += second * y.powf(gap) * series(c - a, c - b, gap + 1.0, y)?;
    }
    Ok(value)
}

//! Closed-form reference values.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `ln Γ(x)` for `x > 0`. Integer and half-integer arguments (the only ones
/// volume formulas produce for integer exponents) are evaluated exactly as
/// sums of logarithms; other arguments use the Lanczos approximation.
pub fn ln_gamma(x: f64) -> f64 {
    let twice = 2.0 * x;
    if twice == twice.round() && x <= 4096.0 {
        let n2 = twice as u64;
        if n2 % 2 == 0 {
            // Γ(n) = (n-1)!
            return (2..n2 / 2).map(|k| (k as f64).ln()).sum();
        }
        // Γ(m + 1/2) = (2m)! √π / (4^m m!)
        let m = (n2 - 1) / 2;
        let num: f64 = (m + 1..=2 * m).map(|k| (k as f64).ln()).sum();
        return num - m as f64 * 4f64.ln() + 0.5 * std::f64::consts::PI.ln();
    }
    lanczos_ln_gamma(x)
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - lanczos_ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * std::f64::consts::TAU.ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// `ln κ_s` for real `s ≥ 0`, where `κ_s = π^{s/2} / Γ(s/2 + 1)`.
pub fn ln_kappa(s: f64) -> f64 {
    0.5 * s * std::f64::consts::PI.ln() - ln_gamma(0.5 * s + 1.0)
}

/// Volume of the unit ball `B^d`.
pub fn kappa(d: usize) -> f64 {
    ln_kappa(d as f64).exp()
}

/// Which closed form [`ball_moment`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallMomentKind {
    /// `E^p_*(B^d)`, one vertex at the centre.
    Centroid,
    /// `E^p_{d+1}(B^d)`, all vertices random.
    FullSimplex,
}

fn ln_binomial(n: f64, k: f64) -> f64 {
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

fn ln_factorial(d: usize) -> f64 {
    ln_gamma(d as f64 + 1.0)
}

/// `Σ ln κ_i − Σ ln κ_{p+i}` over `i = 1..d`.
fn ln_kappa_ratio(d: usize, p: f64) -> f64 {
    (1..=d).map(|i| ln_kappa(i as f64) - ln_kappa(p + i as f64)).sum()
}

/// The centroid-vertex ball formula exactly as usually printed, without the
/// `(d!)^{-p}` normalization of the simplex volume. Kept for validation:
/// it overshoots the true moment by `(d!)^p`.
pub fn ball_centroid_moment_unnormalized(d: usize, p: f64) -> f64 {
    let (df, dd) = (p, d as f64);
    (-ln_binomial(dd + df, dd) + (-dd - df) * ln_kappa(dd) + dd * ln_kappa(dd + df) + ln_kappa_ratio(d, p)).exp()
}

/// Closed-form moments of random simplices in the unit ball.
pub fn ball_moment(d: usize, p: f64, kind: BallMomentKind) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    let dd = d as f64;
    let norm = -p * ln_factorial(d) - ln_binomial(dd + p, dd) + ln_kappa_ratio(d, p);
    let ln = match kind {
        BallMomentKind::Centroid => norm + (-dd - p) * ln_kappa(dd) + dd * ln_kappa(dd + p),
        BallMomentKind::FullSimplex => {
            let big = dd * dd + dd * p + dd;
            norm + (-dd - p - 1.0) * ln_kappa(dd) + (dd + 1.0) * ln_kappa(dd + p) + ln_kappa(big)
                - ln_kappa(big + p)
        }
    };
    Ok(ln.exp())
}

/// An exact rational value together with its floating-point rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalValue {
    pub value: f64,
    pub exact: BigRational,
}

impl RationalValue {
    pub fn numer(&self) -> &BigInt {
        self.exact.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.exact.denom()
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Reed's exact value of `E^p_3(T²)` for integer `p ≥ 1`.
pub fn reed_moment(p: f64) -> Result<RationalValue> {
    if !(p >= 1.0) || p.fract() != 0.0 || p > 1e6 {
        return Err(Error::InvalidExponent(p));
    }
    let p = p as u64;
    let big = |x: u64| BigRational::from_integer(BigInt::from(x));
    let mut sum = BigRational::zero();
    for i in 0..=p {
        let b = binomial(p, i);
        sum += BigRational::new(BigInt::one(), &b * &b);
    }
    let pre = big(12)
        / (big(p + 1).pow(3) * big(p + 2).pow(3) * big(p + 3) * big(2 * p + 5));
    let bracket = big(6) * big(p + 1).pow(2) + big(p + 2).pow(2) * sum;
    let exact = pre * bracket;
    let value = exact.to_f64().unwrap_or(f64::NAN);
    Ok(RationalValue { value, exact })
}

/// Upper bound `1/d!` on `E²_*(T^d)`.
pub fn simplex_second_moment_bound(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Ok((-ln_factorial(d)).exp())
}

//! Scalar special functions used by the closed forms: harmonic numbers and
//! their real continuation, digamma, log-gamma, the beta function and the
//! principal branch of the Lambert W function.
//!
//! All functions are pure and take `f64` arguments. Domain violations are
//! reported through [`Error::Domain`] instead of returning NaN.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const INV_E: f64 = 1.0 / E;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Integer arguments up to this value are summed term by term.
const HARMONIC_DIRECT_MAX: f64 = 1.0e4;

/// Digamma shifts its argument up to at least this value before using the
/// asymptotic expansion.
const DIGAMMA_SHIFT: f64 = 8.0;

/// Coefficients B_{2k} / (2k) for k = 1..=7 of the digamma asymptotic series.
const DIGAMMA_ASYMPTOTIC: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// Harmonic number `H_y`.
///
/// Integers up to 10^4 are summed directly with compensation; every other
/// argument uses the continuation `H_y = psi(y + 1) + gamma`.
pub fn harmonic(y: f64) -> Result<f64> {
    if !(y >= 0.0) || y.is_infinite() {
        return Err(Error::domain("harmonic", y, "y >= 0 and finite"));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y.fract() == 0.0 && y <= HARMONIC_DIRECT_MAX {
        return Ok(harmonic_sum(y as u64));
    }
    Ok(digamma(y + 1.0)? + EULER_GAMMA)
}

/// Kahan-compensated `sum_{k=1}^{n} 1/k`, accumulated from the smallest term.
fn harmonic_sum(n: u64) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for k in (1..=n).rev() {
        let term = 1.0 / k as f64 - carry;
        let next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    sum
}

/// Digamma function `psi(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::domain("digamma", x, "x > 0 and finite"));
    }
    let mut shift = 0.0;
    let mut z = x;
    while z < DIGAMMA_SHIFT {
        shift += 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    // Horner in 1/z^2, highest order first.
    let series = DIGAMMA_ASYMPTOTIC.iter().rev().fold(0.0, |acc, &c| acc * inv2 + c) * inv2;
    Ok(z.ln() - 0.5 / z - series - shift)
}

/// `(eps(x), eta(x))` with `H_x = ln x + gamma + eps(x)` and
/// `H_x = ln x + gamma + 1/(2x) - eta(x)`.
///
/// Both remainders are positive and decreasing for `x >= 1`. For larger `x`
/// they are evaluated from the asymptotic series directly, which avoids the
/// cancellation in `H_x - ln x - gamma`.
pub fn harmonic_remainders(x: f64) -> Result<(f64, f64)> {
    if !(x >= 1.0) || x.is_infinite() {
        return Err(Error::domain("harmonic_remainders", x, "x >= 1 and finite"));
    }
    if x >= DIGAMMA_SHIFT {
        let inv2 = 1.0 / (x * x);
        let eta = DIGAMMA_ASYMPTOTIC.iter().rev().fold(0.0, |acc, &c| acc * inv2 + c) * inv2;
        return Ok((0.5 / x - eta, eta));
    }
    let h = harmonic(x)?;
    let eps = h - x.ln() - EULER_GAMMA;
    let eta = x.ln() + EULER_GAMMA + 0.5 / x - h;
    Ok((eps, eta))
}

/// Stirling correction `ln Gamma(x) - [(x - 1/2) ln x - x + ln sqrt(2 pi)]`, valid for `x >= 10`.
fn lgamma_correction(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    inv * (1.0 / 12.0
        + inv2
            * (-1.0 / 360.0
                + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0 - inv2 * 691.0 / 360_360.0)))))
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
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

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::domain("ln_gamma", x, "x > 0 and finite"));
    }
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x >= 10.0 {
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + lgamma_correction(x);
    }
    if x < 0.5 {
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Natural log of the beta function.
///
/// Large arguments are split so that the dominant Stirling terms cancel
/// analytically rather than in floating point.
pub fn ln_beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::domain("beta", x, "x > 0 and finite"));
    }
    if !(y > 0.0) || y.is_infinite() {
        return Err(Error::domain("beta", y, "y > 0 and finite"));
    }
    let (p, q) = if x <= y { (x, y) } else { (y, x) };
    let sum = p + q;
    let lb = if p >= 10.0 {
        let corr = lgamma_correction(p) + lgamma_correction(q) - lgamma_correction(sum);
        -0.5 * q.ln() + LN_SQRT_2PI + corr + (p - 0.5) * (p / sum).ln() + q * (-p / sum).ln_1p()
    } else if q >= 10.0 {
        let corr = lgamma_correction(q) - lgamma_correction(sum);
        ln_gamma_unchecked(p) + corr + p - p * sum.ln() + (q - 0.5) * (-p / sum).ln_1p()
    } else {
        ln_gamma_unchecked(p) + ln_gamma_unchecked(q) - ln_gamma_unchecked(sum)
    };
    Ok(lb)
}

/// Beta function `B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)`.
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    ln_beta(x, y).map(f64::exp)
}

/// Principal branch `W_0` of the Lambert W function, `W(x) e^{W(x)} = x`, `W >= -1`.
///
/// Halley iteration started from `ln(1 + x)` (or from the branch-point
/// series close to `-1/e`).
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !(x >= -INV_E) {
        return Err(Error::domain("lambert_w0", x, "x >= -1/e"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == -INV_E {
        return Ok(-1.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if x > 1.0e100 {
        // w e^w would overflow during the iteration; solve in log space.
        return lambert_w0_exp(x.ln());
    }

    let mut w = if x < -0.25 {
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0))
    } else {
        x.ln_1p()
    };
    let scale = x.abs().max(1.0);
    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 1e-14 * scale {
            return Ok(w);
        }
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            return Ok(w);
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = (w - step).max(-1.0);
        if (next - w).abs() <= 4.0 * f64::EPSILON * w.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        w = next;
    }
    let residual = w * w.exp() - x;
    if residual.abs() <= 1e-12 * scale {
        Ok(w)
    } else {
        Err(Error::Numeric {
            what: "lambert_w0",
            estimated_error: residual.abs(),
            evaluations: 50,
        })
    }
}

/// `W_0(e^l)` without forming `e^l`, for arguments that would overflow.
///
/// Newton iteration on `w + ln w = l`.
pub fn lambert_w0_exp(l: f64) -> Result<f64> {
    if l.is_nan() {
        return Err(Error::domain("lambert_w0_exp", l, "finite log-argument"));
    }
    if l < 40.0 {
        return lambert_w0(l.exp());
    }
    if l.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = l - l.ln();
    for _ in 0..50 {
        let g = w + w.ln() - l;
        let step = g / (1.0 + 1.0 / w);
        w -= step;
        if step.abs() <= 2.0 * f64::EPSILON * w {
            return Ok(w);
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exact `H_n` as a reduced rational `num/den`.
    fn harmonic_rational(n: u64) -> (i128, i128) {
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let (mut num, mut den) = (0_i128, 1_i128);
        for k in 1..=n as i128 {
            num = num * k + den;
            den *= k;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
        (num, den)
    }

    /// Bisection oracle for W on [lo, hi].
    fn lambert_bisect(x: f64) -> f64 {
        let (mut lo, mut hi) = (-1.0_f64, x.max(1.0));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() < x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(1.0).unwrap(), 1.0);
        let (num, den) = harmonic_rational(10);
        assert_eq!((num, den), (7381, 2520));
        let exact = num as f64 / den as f64;
        assert!((exact - 2.928_968_253_968_253_8).abs() < 1e-15);
        let h10 = harmonic(10.0).unwrap();
        assert!(((h10 - exact) / exact).abs() <= 1e-13);
        // 2 - 2 ln 2
        let h_half = harmonic(0.5).unwrap();
        assert!((h_half - (2.0 - 2.0 * std::f64::consts::LN_2)).abs() <= 1e-12);
        assert!((h_half - 0.613_705_638_880_109_4).abs() <= 1e-12);
        assert!((harmonic(2.5).unwrap() - 1.680_372_305_546_776).abs() <= 1e-12);
    }

    #[test]
    fn harmonic_large_integers_match_reference() {
        // 40-digit references.
        assert!((harmonic(1.0e4).unwrap() - 9.787_606_036_044_382).abs() <= 1e-12);
        assert!((harmonic(1.0e6).unwrap() - 14.392_726_722_865_724).abs() <= 1e-12);
        // both sides of the summation/continuation crossover agree
        let below = harmonic(1.0e4).unwrap();
        let above = digamma(1.0e4 + 1.0).unwrap() + EULER_GAMMA;
        assert!((below - above).abs() <= 1e-13);
    }

    #[test]
    fn harmonic_rejects_negative() {
        assert!(matches!(harmonic(-0.1), Err(Error::Domain { .. })));
        assert!(harmonic(f64::NAN).is_err());
    }

    #[test]
    fn harmonic_increments() {
        let mut prev = harmonic(0.0).unwrap();
        for n in 1..=10_000u32 {
            let cur = harmonic(n as f64).unwrap();
            assert!((cur - prev - 1.0 / n as f64).abs() <= 1e-12, "n = {n}");
            prev = cur;
        }
    }

    #[test]
    fn digamma_examples() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() <= 1e-12);
        assert!((digamma(1.0).unwrap() - (-0.577_215_664_901_532_9)).abs() <= 1e-12);
        assert!((digamma(2.0).unwrap() - 0.422_784_335_098_467_1).abs() <= 1e-12);
        assert!((digamma(8.5).unwrap() - 2.080_090_817_579_42).abs() <= 1e-12);
        assert!((digamma(0.25).unwrap() - (-4.227_453_533_376_265)).abs() <= 1e-12);
        assert!((digamma(100.3).unwrap() - 4.603_172_366_627_386).abs() <= 1e-12);
    }

    #[test]
    fn digamma_domain() {
        assert!(digamma(0.0).is_err());
        assert!(digamma(-2.5).is_err());
    }

    #[test]
    fn digamma_recurrence() {
        for &x in &[0.1, 0.7, 1.3, 5.5, 7.99, 8.0, 12.25, 300.0] {
            let lhs = digamma(x + 1.0).unwrap();
            let rhs = digamma(x).unwrap() + 1.0 / x;
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + 1.0 / x), "x = {x}");
        }
    }

    #[test]
    fn lambert_examples() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(E).unwrap() - 1.0).abs() <= 1e-14);
        let w1 = lambert_w0(1.0).unwrap();
        assert!((w1 - lambert_bisect(1.0)).abs() <= 1e-14);
        assert!((w1 - 0.567_143_290_409_783_8).abs() <= 1e-15);
        assert!((lambert_w0(10.0).unwrap() - 1.745_528_002_740_699_4).abs() <= 1e-14);
        assert!((lambert_w0(1e10).unwrap() - 20.028_685_413_304_95).abs() <= 1e-12);
        assert!((lambert_w0(-0.2).unwrap() - (-0.259_171_101_819_073_7)).abs() <= 1e-14);
        let near = -INV_E + 1e-6;
        assert!((lambert_w0(near).unwrap() - (-0.997_670_166_272_007_9)).abs() <= 1e-9);
        assert_eq!(lambert_w0(-INV_E).unwrap(), -1.0);
    }

    #[test]
    fn lambert_domain() {
        assert!(lambert_w0(-0.5).is_err());
        assert!(lambert_w0(f64::NAN).is_err());
    }

    #[test]
    fn lambert_identity_on_log_grid() {
        let mut x = 1e-6;
        while x <= 1e12 {
            let w = lambert_w0(x).unwrap();
            assert!(((w * w.exp() - x) / x).abs() <= 1e-12, "x = {x}");
            x *= 1.7;
        }
    }

    #[test]
    fn lambert_log_form_matches_direct() {
        for &l in &[0.5, 5.0, 39.0, 41.0, 200.0, 700.0] {
            let via_log = lambert_w0_exp(l).unwrap();
            assert!((via_log + via_log.ln() - l).abs() <= 1e-12 * l.max(1.0), "l = {l}");
            if l < 700.0 {
                let direct = lambert_w0(l.exp()).unwrap();
                assert!((via_log - direct).abs() <= 1e-12 * direct, "l = {l}");
            }
        }
        let huge = lambert_w0_exp(1.0e4).unwrap();
        assert!((huge + huge.ln() - 1.0e4).abs() <= 1e-9);
    }

    #[test]
    fn beta_examples() {
        // B(2, n) = 1/(n(n+1))
        assert!((beta_fn(2.0, 5.0).unwrap() - 1.0 / 30.0).abs() <= 1e-12 / 30.0);
        assert!((beta_fn(1.0, 7.0).unwrap() - 1.0 / 7.0).abs() <= 1e-12 / 7.0);
        assert!((beta_fn(3.0, 4.0).unwrap() - 1.0 / 60.0).abs() <= 1e-12 / 60.0);
        let b = beta_fn(2.5, 3.7).unwrap();
        assert!(((b - 0.032_727_368_606_257_84) / b).abs() <= 1e-12);
        let b = beta_fn(0.3, 200.0).unwrap();
        assert!(((b - 0.610_686_197_204_130_5) / b).abs() <= 1e-12);
        for n in [1u32, 10, 100, 1000] {
            let n = n as f64;
            let b = beta_fn(2.0, n).unwrap();
            let exact = 1.0 / (n * (n + 1.0));
            assert!(((b - exact) / exact).abs() <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn beta_domain() {
        assert!(beta_fn(0.0, 1.0).is_err());
        assert!(beta_fn(1.0, -1.0).is_err());
    }

    #[test]
    fn remainder_examples() {
        let (eps, eta) = harmonic_remainders(1.0).unwrap();
        assert!((eps - (1.0 - EULER_GAMMA)).abs() <= 1e-12);
        assert!((eps - 0.422_784_3).abs() < 1e-7);
        assert!((eta - (EULER_GAMMA - 0.5)).abs() <= 1e-12);
        assert!((eta - 0.077_215_7).abs() < 1e-7);
        let (eps, eta) = harmonic_remainders(1.0e6).unwrap();
        assert!(eps > 0.0 && eps < 1e-6);
        assert!(eta > 0.0 && eta < 1e-6);
        // reference: eps(1e6) = 4.999999166666...e-7, eta(1e6) = 8.3333333333325e-14
        assert!((eps - 4.999_999_166_666_667e-7).abs() <= 1e-18);
        assert!(((eta - 8.333_333_333_332_5e-14) / eta).abs() <= 1e-12);
    }

    #[test]
    fn remainders_positive_and_decreasing() {
        let grid = [1.0, 2.0, 5.0, 10.0, 100.0, 1.0e4];
        let vals: Vec<(f64, f64)> = grid.iter().map(|&x| harmonic_remainders(x).unwrap()).collect();
        for w in vals.windows(2) {
            assert!(w[0].0 > w[1].0 && w[1].0 > 0.0);
            assert!(w[0].1 > w[1].1 && w[1].1 > 0.0);
        }
    }

    #[test]
    fn remainders_consistent_with_harmonic() {
        for &x in &[1.0, 1.5, 3.0, 7.9, 8.0, 8.1, 20.0, 1234.5] {
            let (eps, eta) = harmonic_remainders(x).unwrap();
            let h = harmonic(x).unwrap();
            assert!((x.ln() + EULER_GAMMA + eps - h).abs() <= 1e-12, "x = {x}");
            assert!((x.ln() + EULER_GAMMA + 0.5 / x - eta - h).abs() <= 1e-12, "x = {x}");
        }
        assert!(harmonic_remainders(0.9).is_err());
    }

    proptest! {
        #[test]
        fn beta_symmetric_and_recurrent(x in 0.05f64..60.0, y in 0.05f64..60.0) {
            let bxy = beta_fn(x, y).unwrap();
            let byx = beta_fn(y, x).unwrap();
            prop_assert!(((bxy - byx) / bxy).abs() <= 1e-12);
            let ratio = beta_fn(x + 1.0, y).unwrap() / bxy;
            prop_assert!((ratio - x / (x + y)).abs() <= 1e-12);
        }

        #[test]
        fn lambert_inverts(x in -0.367f64..1e6) {
            let w = lambert_w0(x).unwrap();
            prop_assert!(w >= -1.0);
            prop_assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }
}

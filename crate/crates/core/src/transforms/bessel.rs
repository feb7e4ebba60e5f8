//! Bessel functions of the first kind for integer and half-integer orders.
//!
//! Small arguments use the power series. Integer orders use Miller's backward
//! recurrence normalised by `J_0 + 2 * sum J_2k = 1`, switching to the Hankel
//! asymptotic expansion once `x >= max(25, nu^2)`. Half-integer orders go
//! through the spherical Bessel functions: upward recurrence from the sin/cos
//! closed forms when `n < x`, normalised backward recurrence otherwise.

use std::f64::consts::PI;

use statrs::function::gamma::{gamma, ln_gamma};

/// `J_nu(x)` for `nu` in `{-1/2, 0, 1/2, 1, 3/2, ...}` and `x >= 0`.
///
/// Returns NaN for orders that are not half-integers or for negative `x`.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    let twice = 2.0 * nu;
    if x < 0.0 || x.is_nan() || twice.fract() != 0.0 || nu < -0.5 {
        return f64::NAN;
    }
    if nu == -0.5 {
        if x == 0.0 {
            return f64::INFINITY;
        }
        return (2.0 / (PI * x)).sqrt() * x.cos();
    }
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if nu.fract() != 0.0 {
        let n = (nu - 0.5) as usize;
        return (2.0 * x / PI).sqrt() * spherical_j(n, x);
    }
    if x * x / 4.0 < (nu + 1.0).max(4.0) {
        return series(nu, x);
    }
    if x >= (nu * nu).max(25.0) {
        hankel_asymptotic(nu, x)
    } else {
        miller_integer(nu as usize, x)
    }
}

fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    // leading term (x/2)^nu / Gamma(nu + 1)
    let lead = if nu < 60.0 {
        half.powf(nu) / gamma(nu + 1.0)
    } else {
        (nu * half.ln() - ln_gamma(nu + 1.0)).exp()
    };
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn hankel_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let chi = x - (0.5 * nu + 0.25) * PI;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * 8.0 * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        // a_k / x^k alternates between Q (odd k) and P (even k) with signs (-1)^(k/2)
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn miller_integer(n: usize, x: f64) -> f64 {
    let start = {
        let m = (x.max(n as f64) + 30.0 + (40.0 * x.max(n as f64)).sqrt()) as usize;
        m + (m % 2)
    };
    let mut j_next = 0.0;
    let mut j_cur = 1e-300;
    let mut norm = 0.0;
    let mut result = 0.0;
    for k in (1..=start).rev() {
        let j_prev = 2.0 * k as f64 / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        // j_cur now holds the unnormalised J_{k-1}
        let idx = k - 1;
        if idx == n {
            result = j_cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * j_cur;
        }
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    norm += j_cur;
    result / norm
}

/// Spherical Bessel `j_n(x)` for `x > 0`.
pub fn spherical_j(n: usize, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if n == 0 {
        return j0;
    }
    let j1 = s / (x * x) - c / x;
    if (n as f64) < x {
        let (mut a, mut b) = (j0, j1);
        for k in 1..n {
            let next = (2 * k + 1) as f64 / x * b - a;
            a = b;
            b = next;
        }
        return b;
    }
    // backward recurrence, normalised against whichever of j0, j1 is better conditioned
    let start = n + 20 + (x as usize) + (10.0 * (n as f64).sqrt()) as usize;
    let mut up = 0.0;
    let mut cur = 1e-300;
    let mut at_n = 0.0;
    let mut at_1 = 0.0;
    for k in (1..=start).rev() {
        let prev = (2 * k + 1) as f64 / x * cur - up;
        up = cur;
        cur = prev;
        if k - 1 == n {
            at_n = cur;
        }
        if k - 1 == 1 {
            at_1 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            up *= 1e-250;
            at_n *= 1e-250;
            at_1 *= 1e-250;
        }
    }
    if j0.abs() >= j1.abs() {
        at_n * j0 / cur
    } else {
        at_n * j1 / at_1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values: mpmath.besselj at 30 digits
    const REFS: &[(f64, f64, f64)] = &[
        (6.0, 10.0, -0.014_458_842_084_785_105_317_745_612_601_5),
        (0.0, 30.5, -0.019_389_754_517_762_152_066_235_896_504_1),
        (1.0, 7.0, -0.004_682_823_482_345_832_699_113_806_196_31),
        (3.0, 0.5, 0.002_563_729_994_587_244_075_354_471_589_78),
        (2.5, 3.0, 0.412_710_032_209_715_993_437_496_795_942),
        (12.0, 100.0, 0.066_236_048_659_638_041_257_802_430_046),
    ];

    #[test]
    fn matches_reference_values() {
        for &(nu, x, want) in REFS {
            let got = bessel_j(nu, x);
            assert!((got - want).abs() < 1e-14, "J_{nu}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn half_order_closed_form() {
        let x = PI / 2.0;
        assert!((bessel_j(0.5, x) - 2.0 / PI).abs() < 1e-15, "{}", bessel_j(0.5, x) - 2.0 / PI);
        for &x in &[0.3, 2.0, 17.0, 45.0] {
            let want = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((bessel_j(0.5, x) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn origin_values() {
        assert_eq!(bessel_j(0.0, 0.0), 1.0);
        assert_eq!(bessel_j(3.0, 0.0), 0.0);
        assert_eq!(bessel_j(1.5, 0.0), 0.0);
    }

    #[test]
    fn rejects_non_half_integer_order() {
        assert!(bessel_j(0.3, 1.0).is_nan());
        assert!(bessel_j(1.0, -1.0).is_nan());
    }

    #[test]
    fn branches_agree_at_switch_points() {
        // the three-term recurrence J_{n-1} + J_{n+1} = (2n/x) J_n holds across every branch
        for &nu in &[1.0, 1.5, 3.0, 3.5, 6.0, 11.5] {
            for &x in &[1.9, 2.1, 4.0, 12.0, 24.9, 25.1, 36.5, 144.5, 400.0] {
                let lhs = bessel_j(nu - 1.0, x) + bessel_j(nu + 1.0, x);
                let rhs = 2.0 * nu / x * bessel_j(nu, x);
                assert!((lhs - rhs).abs() < 5e-13, "nu={nu} x={x}: {lhs} vs {rhs}");
            }
        }
    }
}

//! Laguerre polynomials, sine/cosine integrals and ball-volume constants.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

/// Lebesgue measure of the unit ball in `R^d`: `pi^(d/2) / Gamma(d/2 + 1)`.
pub fn ball_volume(d: usize) -> f64 {
    // nu_d = 2 pi / d * nu_{d-2}, exact to rounding
    let (mut v, mut k) = if d % 2 == 0 { (1.0, 2) } else { (2.0, 3) };
    while k <= d {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    v
}

/// Surface area of the unit sphere `S^(d-1)`, i.e. `d * ball_volume(d)`.
///
/// For `d = 1` this is 2 (the two endpoints), which makes the radial
/// integral `omega * int_0^inf r^(d-1) f(r) dr` correct in every dimension.
pub fn sphere_area(d: usize) -> f64 {
    d as f64 * ball_volume(d)
}

/// Generalised Laguerre polynomials `L_0^a(u), ..., L_n^a(u)` by the three-term recurrence.
pub fn laguerre_all(n: usize, a: f64, u: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(1.0 + a - u);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - u) * out[k] - (kf + a) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// Monomial coefficients of `L_k^a(u)`, lowest degree first.
pub fn laguerre_monomial(k: usize, a: f64) -> Vec<f64> {
    // coefficient of u^j: (-1)^j / j! * binom(k + a, k - j)
    (0..=k)
        .map(|j| {
            let ln_binom = ln_gamma(k as f64 + a + 1.0) - ln_gamma((k - j) as f64 + 1.0) - ln_gamma(j as f64 + a + 1.0);
            let mag = (ln_binom - ln_gamma(j as f64 + 1.0)).exp();
            if j % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

/// Sine and cosine integrals `(Si(x), Ci(x))` for `x > 0`.
///
/// Power series below 2, Lentz continued fraction for the complex exponential integral above.
pub fn sici(x: f64) -> (f64, f64) {
    const EULER: f64 = 0.577_215_664_901_532_860_6;
    assert!(x > 0.0, "sici requires x > 0");
    if x < 2.0 {
        let mut si = 0.0;
        let mut ci = 0.0;
        let mut term = 1.0; // x^k / k!
        for k in 1..60 {
            term *= x / k as f64;
            if k % 2 == 1 {
                let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
                si += sign * term / k as f64;
            } else {
                let sign = if (k / 2) % 2 == 1 { -1.0 } else { 1.0 };
                ci += sign * term / k as f64;
            }
            if term < 1e-18 {
                break;
            }
        }
        return (si, EULER + x.ln() + ci);
    }
    // E1(ix) by continued fraction; Ci = -Re E1(ix), Si = pi/2 + Im E1(ix)
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 1..200 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    let e1 = Complex64::new(x.cos(), -x.sin()) * h;
    (PI / 2.0 + e1.im, -e1.re)
}

/// `int_R^inf cos(omega r) / r^2 dr` for `R > 0`, `omega >= 0`.
pub fn cos_over_r2_tail(omega: f64, r: f64) -> f64 {
    let omega = omega.abs();
    if omega == 0.0 {
        return 1.0 / r;
    }
    let z = omega * r;
    let (si, _) = sici(z);
    (z.cos()) / r - omega * (PI / 2.0 - si)
}

/// `int_R^inf sin(omega r) / r^2 dr` for `R > 0`, `omega >= 0`.
pub fn sin_over_r2_tail(omega: f64, r: f64) -> f64 {
    let omega = omega.abs();
    if omega == 0.0 {
        return 0.0;
    }
    let z = omega * r;
    let (_, ci) = sici(z);
    z.sin() / r - omega * ci
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(1) - 2.0).abs() < 1e-14);
        assert!((ball_volume(2) - PI).abs() < 1e-14);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((ball_volume(12) - PI.powi(6) / 720.0).abs() < 1e-14);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn laguerre_low_orders() {
        let l = laguerre_all(3, 0.5, 1.3);
        let u: f64 = 1.3;
        let a: f64 = 0.5;
        assert!((l[1] - (1.0 + a - u)).abs() < 1e-15);
        let l2 = 0.5 * (u * u - 2.0 * (a + 2.0) * u + (a + 1.0) * (a + 2.0));
        assert!((l[2] - l2).abs() < 1e-14);
        for k in 0..=3 {
            let m = laguerre_monomial(k, a);
            let v: f64 = m.iter().enumerate().map(|(j, c)| c * u.powi(j as i32)).sum();
            assert!((v - l[k]).abs() < 1e-13);
        }
    }

    #[test]
    fn sici_reference() {
        // mpmath: si(1), ci(1), si(10), ci(10)
        let (s1, c1) = sici(1.0);
        assert!((s1 - 0.946_083_070_367_183_014_9).abs() < 1e-15);
        assert!((c1 - 0.337_403_922_900_968_134_7).abs() < 1e-15);
        let (s10, c10) = sici(10.0);
        assert!((s10 - 1.658_347_594_218_874_049_3).abs() < 1e-14);
        assert!((c10 - (-0.045_456_433_004_455_372_64)).abs() < 1e-14);
        // continuity across the branch switch
        let (a, b) = sici(2.0 - 1e-12);
        let (c, d) = sici(2.0 + 1e-12);
        assert!((a - c).abs() < 1e-11 && (b - d).abs() < 1e-11);
    }

    #[test]
    fn cos_tail_matches_quadrature() {
        let q = crate::transforms::quadrature::Quadrature::default();
        for &(w, r) in &[(0.0, 3.0), (2.0, 5.0), (0.1, 40.0)] {
            let direct = q.integrate_panels(&|t: f64| (w * t).cos() / (t * t), r, 2e4, 4000).unwrap().value
                + cos_over_r2_tail(w, 2e4);
            assert!((direct - cos_over_r2_tail(w, r)).abs() < 1e-10);
            let direct = q.integrate_panels(&|t: f64| (w * t).sin() / (t * t), r, 2e4, 4000).unwrap().value;
            // the sine tail beyond 2e4 is below 1/(2e4)^2 * (2 / w) in size; skip w = 0
            if w > 0.0 {
                assert!((direct - sin_over_r2_tail(w, r)).abs() < 1e-7);
            }
        }
    }
}

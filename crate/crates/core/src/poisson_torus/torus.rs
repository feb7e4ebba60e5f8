use std::f64::consts::PI;

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcrep::decay::Decay;
use crate::funcrep::{FunctionSpec, Sign};
use crate::transforms::fourier_transform;

/// Even trigonometric polynomial on `T^d`, coefficients stored on the cube `[-K, K]^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPolynomial {
    pub dim: usize,
    pub half_width: usize,
    coeffs: Vec<f64>,
    /// Bound on the absolute sum of the coefficients that were cut off.
    pub tail_mass: f64,
}

/// Coefficient budget for the dense cube.
const MAX_ENTRIES: usize = 1 << 22;
/// Coefficients below this fraction of the largest are dropped.
const DROP_REL: f64 = 1e-14;

impl TorusPolynomial {
    fn side(&self) -> usize {
        2 * self.half_width + 1
    }

    fn index(&self, n: &[i64]) -> Option<usize> {
        let k = self.half_width as i64;
        let mut idx = 0usize;
        for &c in n {
            if c.abs() > k {
                return None;
            }
            idx = idx * self.side() + (c + k) as usize;
        }
        Some(idx)
    }

    fn point(&self, mut idx: usize) -> Vec<i64> {
        let mut n = vec![0i64; self.dim];
        for slot in n.iter_mut().rev() {
            *slot = (idx % self.side()) as i64 - self.half_width as i64;
            idx /= self.side();
        }
        n
    }

    /// Builds from a coefficient function of `n`; values are symmetrised under `n -> -n`.
    pub fn from_fn(dim: usize, half_width: usize, c: impl Fn(&[i64]) -> f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let side = 2 * half_width + 1;
        let total = side.checked_pow(dim as u32).filter(|&t| t <= MAX_ENTRIES).ok_or_else(|| {
            Error::InvalidParameter(format!("coefficient cube [-{half_width}, {half_width}]^{dim} is too large"))
        })?;
        let mut p = TorusPolynomial { dim, half_width, coeffs: vec![0.0; total], tail_mass: 0.0 };
        for i in 0..total {
            let n = p.point(i);
            let neg: Vec<i64> = n.iter().map(|v| -v).collect();
            p.coeffs[i] = 0.5 * (c(&n) + c(&neg));
        }
        Ok(p)
    }

    pub fn coefficient(&self, n: &[i64]) -> f64 {
        if n.len() != self.dim {
            return 0.0;
        }
        self.index(n).map(|i| self.coeffs[i]).unwrap_or(0.0)
    }

    /// Nonzero coefficients with their lattice points.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<i64>, f64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, &v)| (self.point(i), v))
    }

    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|v| v.abs()).sum()
    }

    /// `sum_n ghat(n) cos(2 pi n . x)`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        if self.dim == 1 {
            return self.eval_1d(x[0]);
        }
        self.entries()
            .map(|(n, v)| {
                let t: f64 = n.iter().zip(x).map(|(a, b)| *a as f64 * b).sum();
                v * (2.0 * PI * t).cos()
            })
            .sum()
    }

    /// Rotation recurrence for `cos(2 pi k x)`, re-anchored every 256 steps.
    fn eval_1d(&self, x: f64) -> f64 {
        let k = self.half_width;
        let mut s = self.coeffs[k];
        let step = Complex::from_polar(1.0, 2.0 * PI * x);
        let mut z = Complex::new(1.0, 0.0);
        for j in 1..=k {
            if j % 256 == 0 {
                z = Complex::from_polar(1.0, 2.0 * PI * ((j as f64 * x).fract()));
            } else {
                z *= step;
            }
            s += (self.coeffs[k + j] + self.coeffs[k - j]) * z.re;
        }
        s
    }
}

impl Serialize for TorusPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<(Vec<i64>, f64)> = self.entries().collect();
        let mut st = s.serialize_struct("TorusPolynomial", 4)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("half_width", &self.half_width)?;
        st.serialize_field("tail_mass", &self.tail_mass)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

fn sphere_area(d: usize) -> f64 {
    // S_{d-1} = 2 pi^{d/2} / Gamma(d/2)
    2.0 * PI.powf(d as f64 / 2.0) / statrs::function::gamma::gamma(d as f64 / 2.0)
}

/// Bound on `sum_{|n|_inf > K} |f(lambda |n|)|`.
fn lattice_tail(decay: &Decay, d: usize, lambda: f64, k: usize) -> Result<f64> {
    let kf = k as f64;
    match decay {
        Decay::Compact(r) if lambda * kf >= *r => Ok(0.0),
        Decay::Rapid(r) if lambda * kf >= *r => Ok(1e-17),
        _ => {
            let (from, c, p) = decay
                .as_power()
                .ok_or_else(|| Error::NotIntegrable(format!("no envelope to bound the coefficient tail ({decay:?})")))?;
            let p_eff = p;
            if p_eff <= d as f64 {
                return Err(Error::NotIntegrable(format!("coefficients ~ |n|^-{p} are not summable on Z^{d}")));
            }
            if lambda * kf < from {
                return Err(Error::InvalidParameter(format!("cube half-width {k} is inside the decay window {from}")));
            }
            let amp = c * lambda.powf(-p);
            if d == 1 {
                return Ok(2.0 * amp * kf.powf(1.0 - p) / (p - 1.0));
            }
            // shells: #{n : t <= |n| < t + 1} <= S_{d-1} (t + sqrt d)^{d-1}
            let sd = (d as f64).sqrt();
            let t0 = (kf - sd).max(sd);
            Ok(amp * sphere_area(d) * 2f64.powi(d as i32 - 1) * t0.powf(d as f64 - p) / (p - d as f64))
        }
    }
}

fn default_half_width(d: usize) -> usize {
    match d {
        1 => 1 << 20,
        2 => 512,
        3 => 48,
        _ => (((MAX_ENTRIES as f64).powf(1.0 / d as f64) - 1.0) / 2.0).floor().max(1.0) as usize,
    }
}

/// `ghat(k) = s f(lambda k)`: the periodisation of `s fhat_lambda`, valid when the
/// dilated transform sits inside `(-1/2, 1/2)^d`.
pub fn periodize(f: &FunctionSpec, lambda: f64, s: Sign) -> Result<TorusPolynomial> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let fhat = fourier_transform(f)?;
    let a = fhat
        .support_radius()
        .ok_or_else(|| Error::InvalidParameter("f is not bandlimited: its transform has no compact support".into()))?;
    if 2.0 * a * lambda >= 1.0 {
        return Err(Error::Aliasing(format!("2 a lambda = {} must be < 1 (a = {a}, lambda = {lambda})", 2.0 * a * lambda)));
    }
    let d = f.dim();
    let decay = f.decay();
    let k = match decay {
        Decay::Compact(r) | Decay::Rapid(r) => ((r / lambda).ceil() as usize + 1).min(default_half_width(d)),
        _ => default_half_width(d),
    };
    let sv = s.value();
    let mut p = TorusPolynomial::from_fn(d, k, |n| {
        let r = n.iter().map(|&v| (v * v) as f64).sum::<f64>().sqrt();
        sv * f.value(lambda * r)
    })?;
    let max = p.coeffs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut dropped = 0.0;
    for v in &mut p.coeffs {
        if v.abs() < DROP_REL * max {
            dropped += v.abs();
            *v = 0.0;
        }
    }
    p.tail_mass = dropped + lattice_tail(&decay, d, lambda, k)?;
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusMetrics {
    pub r_torus: f64,
    pub k_s: usize,
    pub product: f64,
    /// Values above `-threshold` count as nonnegative.
    pub threshold: f64,
    /// Grid spacing, or the refinement width in one dimension.
    pub resolution: f64,
    /// Number of evaluation points; sampled (not a full grid) when `d > 3`.
    pub points: usize,
    pub sampled: bool,
}

fn grid_size(d: usize) -> Option<usize> {
    match d {
        1 => Some(1 << 14),
        2 => Some(512),
        3 => Some(64),
        _ => None,
    }
}

/// Values on the uniform grid `j / m`, all axes, by folding coefficients mod `m`.
fn grid_values(g: &TorusPolynomial, m: usize) -> Vec<f64> {
    let d = g.dim;
    let total = m.pow(d as u32);
    let mut buf = vec![Complex::new(0.0, 0.0); total];
    for (n, v) in g.entries() {
        let mut idx = 0usize;
        for &c in &n {
            idx = idx * m + c.rem_euclid(m as i64) as usize;
        }
        buf[idx].re += v;
    }
    let fft = FftPlanner::new().plan_fft_inverse(m);
    // axis by axis: stride m^(d-1-axis)
    for axis in 0..d {
        let stride = m.pow((d - 1 - axis) as u32);
        let mut line = vec![Complex::new(0.0, 0.0); m];
        for start in 0..total {
            if (start / stride) % m != 0 {
                continue;
            }
            for (i, slot) in line.iter_mut().enumerate() {
                *slot = buf[start + i * stride];
            }
            fft.process(&mut line);
            for (i, v) in line.iter().enumerate() {
                buf[start + i * stride] = *v;
            }
        }
    }
    buf.into_iter().map(|c| c.re).collect()
}

fn halton(i: usize, base: usize) -> f64 {
    let (mut f, mut r, mut i) = (1.0, 0.0, i);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [usize; 24] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];

/// `r(g; T^d)` by a scan of the fundamental domain inside `|x| <= sqrt(d)/2`, and
/// `k_s = min{k >= 1 : s ghat(n) >= 0 for |n| >= k}` from the coefficients.
pub fn torus_metrics(g: &TorusPolynomial, s: Sign) -> Result<TorusMetrics> {
    let d = g.dim;
    let sv = s.value();
    let mut worst_neg: f64 = 0.0;
    for (n, v) in g.entries() {
        let r = n.iter().map(|&c| (c * c) as f64).sum::<f64>().sqrt();
        if r > 0.0 && sv * v < 0.0 {
            worst_neg = worst_neg.max(r);
        }
    }
    // smallest integer strictly above every negative radius
    let k_s = (worst_neg.floor() as usize + 1).max(1);

    let threshold = g.tail_mass + 1e-12 * g.abs_sum();
    let norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let (r_torus, resolution, points, sampled) = if let Some(m) = grid_size(d) {
        let vals = grid_values(g, m);
        let h = 1.0 / m as f64;
        let mut r_neg: Option<f64> = None;
        let mut x = vec![0.0; d];
        for (i, &v) in vals.iter().enumerate() {
            if v >= -threshold {
                continue;
            }
            let mut idx = i;
            for slot in x.iter_mut().rev() {
                let j = idx % m;
                idx /= m;
                *slot = if j <= m / 2 { j as f64 * h } else { j as f64 * h - 1.0 };
            }
            let r = norm(&x);
            r_neg = Some(r_neg.map_or(r, |q: f64| q.max(r)));
        }
        match (r_neg, d) {
            (None, _) => (0.0, h, vals.len(), false),
            (Some(r), 1) => {
                // refine the crossing of -threshold between r and the next grid point
                let (mut lo, mut hi) = (r, (r + h).min(0.5));
                if g.eval(&[hi]) < -threshold {
                    (0.5, h, vals.len(), false)
                } else {
                    for _ in 0..40 {
                        let mid = 0.5 * (lo + hi);
                        if g.eval(&[mid]) < -threshold {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    (hi, hi - lo, vals.len(), false)
                }
            }
            (Some(r), _) => (r, h * (d as f64).sqrt(), vals.len(), false),
        }
    } else {
        let n = 20_000;
        let mut r_max: f64 = 0.0;
        let mut x = vec![0.0; d];
        for i in 1..=n {
            for (a, slot) in x.iter_mut().enumerate() {
                *slot = halton(i, PRIMES[a % PRIMES.len()]) - 0.5;
            }
            let r = norm(&x);
            if r <= (d as f64).sqrt() / 2.0 && g.eval(&x) < -threshold {
                r_max = r_max.max(r);
            }
        }
        (r_max, f64::NAN, n, true)
    };
    Ok(TorusMetrics { r_torus, k_s, product: r_torus * k_s as f64, threshold, resolution, points, sampled })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::ClosedKind;

    #[test]
    fn prop1_bridge() {
        let f = FunctionSpec::closed(1, ClosedKind::Prop1Minimizer).unwrap();
        let g = periodize(&f, 0.5, Sign::Plus).unwrap();
        assert!((g.coefficient(&[3]) - f.value(1.5)).abs() < 1e-16);
        let m = torus_metrics(&g, Sign::Plus).unwrap();
        assert!(m.k_s <= 2, "{m:?}");
        assert!((m.r_torus - 0.25).abs() < 1e-4, "{m:?}");
        assert!(m.product <= 0.5 + 1e-6, "{m:?}");
    }

    #[test]
    fn aliasing_and_non_bandlimited_are_rejected() {
        let f = FunctionSpec::closed(1, ClosedKind::Prop1Minimizer).unwrap();
        assert!(matches!(periodize(&f, 1.0, Sign::Plus), Err(Error::Aliasing(_))));
        let gauss = FunctionSpec::closed(1, ClosedKind::Gaussian).unwrap();
        assert!(periodize(&gauss, 0.5, Sign::Plus).is_err());
    }

    #[test]
    fn constant_and_one_signed_coefficients() {
        let c = TorusPolynomial::from_fn(1, 2, |n| if n[0] == 0 { -1.0 } else { 0.0 }).unwrap();
        let m = torus_metrics(&c, Sign::Plus).unwrap();
        assert_eq!(m.k_s, 1);
        // negative everywhere: no annulus below sqrt(d)/2 is nonnegative
        assert_eq!(m.r_torus, 0.5);
        let p = TorusPolynomial::from_fn(2, 3, |n| if n == [0, 0] { -1.0 } else { 0.25 }).unwrap();
        assert_eq!(torus_metrics(&p, Sign::Plus).unwrap().k_s, 1);
    }

    #[test]
    fn two_dimensional_grid_matches_direct_sum() {
        let p = TorusPolynomial::from_fn(2, 2, |n| 1.0 / (1.0 + (n[0] * n[0] + 2 * n[1] * n[1]) as f64)).unwrap();
        let vals = grid_values(&p, 8);
        let direct = p.eval(&[3.0 / 8.0, 5.0 / 8.0]);
        assert!((vals[3 * 8 + 5] - direct).abs() < 1e-12);
    }

    #[test]
    fn json_lists_entries() {
        let p = TorusPolynomial::from_fn(1, 1, |n| n[0] as f64 * n[0] as f64).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["entries"].as_array().unwrap().len(), 2);
    }
}

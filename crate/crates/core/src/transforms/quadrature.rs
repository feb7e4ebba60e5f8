//! Adaptive Gauss–Kronrod (10/21 point) quadrature with global subdivision.
//!
//! Error estimates follow the QUADPACK heuristic and are not rigorous bounds.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_056_350,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod abscissae XGK[1], XGK[3], ...
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        QuadratureResult { value: 0.0, error_estimate: 0.0, evaluations: 0 }
    }

    pub fn scaled(self, c: f64) -> Self {
        QuadratureResult {
            value: self.value * c,
            error_estimate: self.error_estimate * c.abs(),
            evaluations: self.evaluations,
        }
    }
}

impl std::ops::Add for QuadratureResult {
    type Output = QuadratureResult;
    fn add(self, o: QuadratureResult) -> QuadratureResult {
        QuadratureResult {
            value: self.value + o.value,
            error_estimate: self.error_estimate + o.error_estimate,
            evaluations: self.evaluations + o.evaluations,
        }
    }
}

impl std::iter::Sum for QuadratureResult {
    fn sum<I: Iterator<Item = QuadratureResult>>(iter: I) -> Self {
        iter.fold(QuadratureResult::zero(), |a, b| a + b)
    }
}

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { abs_tol: 1e-12, rel_tol: 1e-12, max_subdivisions: 2000 }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// One 21-point Kronrod panel. Returns (value, error estimate).
pub fn gk21<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

impl Quadrature {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Quadrature { abs_tol, rel_tol, ..Default::default() }
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64 + ?Sized>(&self, f: &F, a: f64, b: f64) -> Result<QuadratureResult> {
        self.integrate_with_breaks(f, a, b, &[])
    }

    /// Integrates over `[a, b]`, starting from panels split at the interior `breaks`.
    pub fn integrate_with_breaks<F: Fn(f64) -> f64 + ?Sized>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        breaks: &[f64],
    ) -> Result<QuadratureResult> {
        if a == b {
            return Ok(QuadratureResult::zero());
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite interval [{a}, {b}]")));
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let mut points: Vec<f64> = std::iter::once(lo)
            .chain(breaks.iter().copied().filter(|&p| p > lo && p < hi))
            .chain(std::iter::once(hi))
            .collect();
        points.sort_by(|x, y| x.partial_cmp(y).unwrap());
        points.dedup();

        let mut heap = BinaryHeap::new();
        let mut total = 0.0;
        let mut total_err = 0.0;
        let mut evals = 0;
        for w in points.windows(2) {
            let (v, e) = gk21(f, w[0], w[1]);
            evals += 21;
            total += v;
            total_err += e;
            heap.push(Segment { a: w[0], b: w[1], value: v, error: e });
        }
        let mut n_seg = heap.len();
        while total_err > self.abs_tol.max(self.rel_tol * total.abs()) {
            if n_seg >= self.max_subdivisions {
                return Err(Error::QuadratureFailed { a, b, value: sign * total, error: total_err });
            }
            let seg = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (seg.a + seg.b);
            if mid <= seg.a || mid >= seg.b {
                // interval cannot be split further in floating point
                heap.push(seg);
                break;
            }
            let (v1, e1) = gk21(f, seg.a, mid);
            let (v2, e2) = gk21(f, mid, seg.b);
            evals += 42;
            total += v1 + v2 - seg.value;
            total_err += e1 + e2 - seg.error;
            heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
            heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
            n_seg += 1;
        }
        // recompute sums to shed accumulated cancellation from the running totals
        let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        Ok(QuadratureResult { value: sign * value, error_estimate: error, evaluations: evals })
    }

    /// Integrates over `[a, b]` split into `panels` equal pieces first; useful for oscillatory integrands.
    pub fn integrate_panels<F: Fn(f64) -> f64 + ?Sized>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        panels: usize,
    ) -> Result<QuadratureResult> {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let breaks: Vec<f64> = (1..panels).map(|i| a + h * i as f64).collect();
        let q = Quadrature { max_subdivisions: self.max_subdivisions.max(4 * panels), ..*self };
        q.integrate_with_breaks(f, a, b, &breaks)
    }
}

/// Weight applied to a radial integrand: `r^0`, `r^(d-1)` or `r^(d+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadialWeight {
    One,
    SurfaceMeasure,
    SecondMoment,
}

impl RadialWeight {
    pub fn exponent(self, dim: usize) -> i32 {
        match self {
            RadialWeight::One => 0,
            RadialWeight::SurfaceMeasure => dim as i32 - 1,
            RadialWeight::SecondMoment => dim as i32 + 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let s: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        assert!((s - 2.0).abs() < 1e-15);
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_exactness() {
        // 21-point Kronrod integrates degree 31 exactly
        let (v, _) = gk21(&|x: f64| x.powi(30), -1.0, 1.0);
        assert!((v - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_half_line() {
        let q = Quadrature::default();
        let r = q.integrate(&|r: f64| (-std::f64::consts::PI * r * r).exp(), 0.0, 8.0).unwrap();
        assert!((r.value - 0.5).abs() < 1e-13);
        assert!(r.error_estimate < 1e-11);
    }

    #[test]
    fn tent_second_moment() {
        let q = Quadrature::default();
        let r = q.integrate(&|r: f64| r * r * (1.0 - r), 0.0, 1.0).unwrap();
        assert!((r.value - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn kink_handled_by_breaks() {
        let q = Quadrature::default();
        let r = q.integrate_with_breaks(&|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[0.3]).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-15);
        let r2 = q.integrate(&|x: f64| (x - 0.3).abs(), 0.0, 1.0).unwrap();
        assert!((r2.value - 0.29).abs() < 1e-11);
    }

    #[test]
    fn reversed_interval_negates() {
        let q = Quadrature::default();
        let r = q.integrate(&|x: f64| x, 1.0, 0.0).unwrap();
        assert!((r.value + 0.5).abs() < 1e-15);
    }

    #[test]
    fn nonconvergence_reports_error() {
        let q = Quadrature { abs_tol: 1e-15, rel_tol: 0.0, max_subdivisions: 5 };
        let err = q.integrate(&|x: f64| (1.0 / x).sin(), 1e-6, 1.0).unwrap_err();
        assert!(matches!(err, Error::QuadratureFailed { .. }));
    }
}

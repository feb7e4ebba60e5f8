//! Tabulated radial profiles with linear or clamped-cubic interpolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    Linear,
    #[default]
    Cubic,
}

/// What the profile does past its last radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Tail {
    Zero,
    /// `|f(r)| <= c r^-p`; values continue as `f(r_last) (r_last / r)^p`.
    Decay { c: f64, p: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
    interpolation: Interpolation,
    tail: Tail,
    // second derivatives at the knots (cubic only)
    m: Vec<f64>,
}

impl SampledProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>, interpolation: Interpolation, tail: Tail) -> Result<Self> {
        if radii.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "radii and values differ in length ({} vs {})",
                radii.len(),
                values.len()
            )));
        }
        if radii.len() < 2 {
            return Err(Error::InvalidParameter("a sampled profile needs at least two points".into()));
        }
        if radii[0] != 0.0 {
            return Err(Error::InvalidParameter("radii must start at 0".into()));
        }
        if let Some(i) = radii.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(format!("radii not strictly increasing at index {}", i + 1)));
        }
        if values.iter().chain(&radii).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        if let Tail::Decay { c, p } = tail {
            if !(c.is_finite() && c >= 0.0 && p.is_finite() && p > 0.0) {
                return Err(Error::InvalidParameter(format!("invalid decay tail c={c}, p={p}")));
            }
        }
        let m = match interpolation {
            Interpolation::Linear => Vec::new(),
            Interpolation::Cubic => clamped_second_derivatives(&radii, &values),
        };
        Ok(SampledProfile { radii, values, interpolation, tail, m })
    }

    /// Samples `f` on `radii`.
    pub fn from_fn(radii: Vec<f64>, f: impl Fn(f64) -> f64, interpolation: Interpolation, tail: Tail) -> Result<Self> {
        let values = radii.iter().map(|&r| f(r)).collect();
        Self::new(radii, values, interpolation, tail)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn last_radius(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    pub fn value(&self, r: f64) -> f64 {
        let r = r.abs();
        let n = self.radii.len();
        let last = self.radii[n - 1];
        if r > last {
            return match self.tail {
                Tail::Zero => 0.0,
                Tail::Decay { p, .. } => self.values[n - 1] * (last / r).powf(p),
            };
        }
        let i = match self.radii.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => return self.values[i],
            Err(i) => i - 1,
        };
        let (x0, x1) = (self.radii[i], self.radii[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let h = x1 - x0;
        let t = (r - x0) / h;
        match self.interpolation {
            Interpolation::Linear => y0 + t * (y1 - y0),
            Interpolation::Cubic => {
                let a = 1.0 - t;
                a * y0 + t * y1 + ((a * a * a - a) * self.m[i] + (t * t * t - t) * self.m[i + 1]) * h * h / 6.0
            }
        }
    }

    pub fn scaled(&self, c: f64) -> SampledProfile {
        let tail = match self.tail {
            Tail::Zero => Tail::Zero,
            Tail::Decay { c: k, p } => Tail::Decay { c: k * c.abs(), p },
        };
        SampledProfile {
            radii: self.radii.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            interpolation: self.interpolation,
            tail,
            m: self.m.iter().map(|v| c * v).collect(),
        }
    }
}

/// Cubic spline with zero slope at the origin (even extension) and a one-sided
/// difference slope at the last knot.
fn clamped_second_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let slope0 = 0.0;
    let slope_n = (y[n - 1] - y[n - 2]) / h[n - 2];
    // tridiagonal system for the second derivatives
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut lower = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    diag[0] = h[0] / 3.0;
    upper[0] = h[0] / 6.0;
    rhs[0] = (y[1] - y[0]) / h[0] - slope0;
    for i in 1..n - 1 {
        lower[i] = h[i - 1] / 6.0;
        diag[i] = (h[i - 1] + h[i]) / 3.0;
        upper[i] = h[i] / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
    }
    lower[n - 1] = h[n - 2] / 6.0;
    diag[n - 1] = h[n - 2] / 3.0;
    rhs[n - 1] = slope_n - (y[n - 1] - y[n - 2]) / h[n - 2];
    // Thomas algorithm
    for i in 1..n {
        let w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut m = vec![0.0; n];
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, end: f64) -> Vec<f64> {
        (0..n).map(|i| end * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn linear_reproduces_tent() {
        let r = grid(11, 2.0);
        let p = SampledProfile::from_fn(r, |x| (1.0 - x).max(0.0), Interpolation::Linear, Tail::Zero).unwrap();
        assert!((p.value(0.35) - 0.65).abs() < 1e-15);
        assert_eq!(p.value(5.0), 0.0);
    }

    #[test]
    fn cubic_is_accurate_on_smooth_data() {
        let r = grid(201, 4.0);
        let f = |x: f64| (-std::f64::consts::PI * x * x).exp();
        let p = SampledProfile::from_fn(r, f, Interpolation::Cubic, Tail::Zero).unwrap();
        for i in 0..400 {
            let x = 4.0 * i as f64 / 400.0 + 0.003;
            assert!((p.value(x) - f(x)).abs() < 2e-6, "x={x}");
        }
        // even extension: zero slope at the origin
        assert!((p.value(1e-4) - p.value(0.0)).abs() < 1e-7);
    }

    #[test]
    fn decay_tail_extrapolates() {
        let p = SampledProfile::new(vec![0.0, 1.0], vec![2.0, 1.0], Interpolation::Linear, Tail::Decay { c: 1.0, p: 2.0 })
            .unwrap();
        assert!((p.value(2.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn invariants_are_checked() {
        let bad = |r: Vec<f64>, v: Vec<f64>| SampledProfile::new(r, v, Interpolation::Cubic, Tail::Zero).is_err();
        assert!(bad(vec![0.0, 1.0], vec![1.0]));
        assert!(bad(vec![0.1, 1.0], vec![1.0, 2.0]));
        assert!(bad(vec![0.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]));
        assert!(bad(vec![0.0, 1.0], vec![f64::NAN, 2.0]));
    }
}

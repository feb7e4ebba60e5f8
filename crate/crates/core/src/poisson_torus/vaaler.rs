use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `g(x) = (sin(pi x) / pi)^2 (sum_m g(m) / (x - m)^2 + sum_n g'(n) / (x - n))`,
/// truncated to the samples it holds.
#[derive(Debug, Clone, PartialEq)]
pub struct VaalerSeries {
    pub values: BTreeMap<i64, f64>,
    pub derivatives: BTreeMap<i64, f64>,
}

impl VaalerSeries {
    pub fn eval(&self, x: f64) -> f64 {
        let j = x.round();
        let delta = x - j;
        if delta == 0.0 {
            // limit at a node: every other term carries sin^2(pi x) = 0
            return self.values.get(&(j as i64)).copied().unwrap_or(0.0);
        }
        // sin(pi x)^2 = sin(pi delta)^2 without the loss from reducing pi x
        let s = (PI * delta).sin() / PI;
        let mut acc = 0.0;
        for (&m, &v) in &self.values {
            let d = x - m as f64;
            acc += v / (d * d);
        }
        for (&n, &v) in &self.derivatives {
            acc += v / (x - n as f64);
        }
        s * s * acc
    }
}

/// Keeps the samples with `|n| <= truncation` and drops exact zeros.
pub fn vaaler_interpolate(
    values: &BTreeMap<i64, f64>,
    derivatives: &BTreeMap<i64, f64>,
    truncation: i64,
) -> Result<VaalerSeries> {
    if truncation < 0 {
        return Err(Error::InvalidParameter(format!("truncation must be nonnegative, got {truncation}")));
    }
    let keep = |m: &BTreeMap<i64, f64>| -> Result<BTreeMap<i64, f64>> {
        let mut out = BTreeMap::new();
        for (&n, &v) in m {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("non-finite sample at n = {n}")));
            }
            if n.abs() <= truncation && v != 0.0 {
                out.insert(n, v);
            }
        }
        Ok(out)
    };
    Ok(VaalerSeries { values: keep(values)?, derivatives: keep(derivatives)? })
}

/// `g(n)` and `g'(n)` for `|n| <= n_max`; the derivative is a fourth-order central difference.
pub fn lattice_samples(g: &dyn Fn(f64) -> f64, n_max: i64, h: f64) -> (BTreeMap<i64, f64>, BTreeMap<i64, f64>) {
    let mut values = BTreeMap::new();
    let mut derivs = BTreeMap::new();
    for n in -n_max..=n_max {
        let x = n as f64;
        values.insert(n, g(x));
        let d = (8.0 * (g(x + h) - g(x - h)) - (g(x + 2.0 * h) - g(x - 2.0 * h))) / (12.0 * h);
        derivs.insert(n, d);
    }
    (values, derivs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::{ClosedKind, FunctionSpec};

    #[test]
    fn two_derivative_samples() {
        let (a, b) = (0.7, -1.3);
        let vals = BTreeMap::new();
        let ders = BTreeMap::from([(-1, a), (0, b)]);
        let s = vaaler_interpolate(&vals, &ders, 10).unwrap();
        for x in [-2.6, -0.4, 0.25, 1.9] {
            let w = ((PI * x).sin() / PI).powi(2) * (a / (x + 1.0) + b / x);
            assert!((s.eval(x) - w).abs() < 1e-14);
        }
    }

    #[test]
    fn nodes_reproduce_samples() {
        let vals = BTreeMap::from([(-2, 0.5), (1, -1.25), (3, 2.0)]);
        let s = vaaler_interpolate(&vals, &BTreeMap::new(), 5).unwrap();
        for (n, v) in [(-2, 0.5), (1, -1.25), (3, 2.0), (0, 0.0)] {
            assert_eq!(s.eval(n as f64), v);
        }
        assert!((s.eval(1.0 + 1e-9) + 1.25).abs() < 1e-8);
    }

    #[test]
    fn zero_samples_give_zero() {
        let s = vaaler_interpolate(&BTreeMap::new(), &BTreeMap::new(), 3).unwrap();
        assert_eq!(s.eval(0.3), 0.0);
    }

    #[test]
    fn reconstructs_odd_lattice_restriction() {
        let f = FunctionSpec::closed(1, ClosedKind::Prop1Minimizer).unwrap();
        let g = |x: f64| f.value((2.0 * x + 1.0).abs());
        let (v, d) = lattice_samples(&g, 200, 1e-3);
        let s = vaaler_interpolate(&v, &d, 200).unwrap();
        for i in 0..=600 {
            let x = -3.0 + i as f64 * 0.01;
            assert!((s.eval(x) - g(x)).abs() < 1e-8, "x = {x}: {} vs {}", s.eval(x), g(x));
        }
    }
}

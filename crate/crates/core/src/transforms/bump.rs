//! The smooth bump `psi(x) = C exp(-1 / (1 - x^2))`, its transform, and its autocorrelation.
//!
//! These have no closed form, so each is tabulated once with piecewise Chebyshev
//! interpolants built from adaptive quadrature.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::quadrature::Quadrature;

/// Past this frequency `|psi_hat|` is below 1e-16 and treated as zero.
pub const PSI_HAT_CUTOFF: f64 = 160.0;

fn raw_bump(x: f64) -> f64 {
    let t = 1.0 - x * x;
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

fn norm_const() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        let q = Quadrature::with_tol(1e-15, 1e-14);
        let sq = q.integrate(&|x: f64| raw_bump(x).powi(2), 0.0, 1.0).expect("bump norm").value;
        1.0 / (2.0 * sq).sqrt()
    })
}

/// `psi(x)`, normalised to unit L2 norm on the line.
pub fn psi(x: f64) -> f64 {
    norm_const() * raw_bump(x)
}

struct ChebTable {
    start: f64,
    width: f64,
    coeffs: Vec<Vec<f64>>,
}

impl ChebTable {
    fn build(f: impl Fn(f64) -> f64 + Sync, start: f64, end: f64, panels: usize, degree: usize) -> Self {
        use rayon::prelude::*;
        let width = (end - start) / panels as f64;
        let n = degree + 1;
        let coeffs = (0..panels)
            .into_par_iter()
            .map(|p| {
                let a = start + p as f64 * width;
                let nodes: Vec<f64> = (0..n)
                    .map(|j| {
                        let t = (PI * (j as f64 + 0.5) / n as f64).cos();
                        f(a + 0.5 * width * (t + 1.0))
                    })
                    .collect();
                (0..n)
                    .map(|k| {
                        let s: f64 = nodes
                            .iter()
                            .enumerate()
                            .map(|(j, v)| v * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos())
                            .sum();
                        let c = 2.0 * s / n as f64;
                        if k == 0 {
                            0.5 * c
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        ChebTable { start, width, coeffs }
    }

    fn eval(&self, x: f64) -> f64 {
        let idx = (((x - self.start) / self.width) as usize).min(self.coeffs.len() - 1);
        let a = self.start + idx as f64 * self.width;
        let t = 2.0 * (x - a) / self.width - 1.0;
        // Clenshaw
        let c = &self.coeffs[idx];
        let (mut b1, mut b2) = (0.0, 0.0);
        for &ck in c.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + ck;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + c[0]
    }
}

fn psi_hat_direct(xi: f64) -> f64 {
    let q = Quadrature::with_tol(1e-14, 1e-13);
    let w = 2.0 * PI * xi;
    let panels = 4 + (2.0 * xi) as usize;
    2.0 * q.integrate_panels(&|x: f64| psi(x) * (w * x).cos(), 0.0, 1.0, panels).expect("bump transform").value
}

fn phi_direct(x: f64) -> f64 {
    if x >= 2.0 {
        return 0.0;
    }
    let q = Quadrature::with_tol(1e-14, 1e-13);
    q.integrate_with_breaks(&|y: f64| psi(y) * psi(x - y), x - 1.0, 1.0, &[0.5 * x])
        .expect("bump autocorrelation")
        .value
}

fn psi_hat_table() -> &'static ChebTable {
    static T: OnceLock<ChebTable> = OnceLock::new();
    T.get_or_init(|| ChebTable::build(psi_hat_direct, 0.0, PSI_HAT_CUTOFF, 320, 24))
}

fn phi_table() -> &'static ChebTable {
    static T: OnceLock<ChebTable> = OnceLock::new();
    T.get_or_init(|| ChebTable::build(phi_direct, 0.0, 2.0, 128, 24))
}

/// `psi_hat(xi) = 2 int_0^1 psi(x) cos(2 pi x xi) dx`.
pub fn psi_hat(xi: f64) -> f64 {
    let xi = xi.abs();
    if xi >= PSI_HAT_CUTOFF {
        0.0
    } else {
        psi_hat_table().eval(xi)
    }
}

/// `phi = psi * psi`, supported on `[-2, 2]` with `phi(0) = 1`.
pub fn phi(x: f64) -> f64 {
    let x = x.abs();
    if x >= 2.0 {
        0.0
    } else {
        phi_table().eval(x).max(0.0)
    }
}

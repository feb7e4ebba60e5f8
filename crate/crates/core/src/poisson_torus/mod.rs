//! Poisson summation checks for bandlimited functions, Vaaler interpolation,
//! and periodisation onto the torus.

mod torus;
mod vaaler;

pub use torus::{periodize, torus_metrics, TorusMetrics, TorusPolynomial};
pub use vaaler::{lattice_samples, vaaler_interpolate, VaalerSeries};

use serde::Serialize;
use serde_json::json;

use crate::certificates::CertificateResult;
use crate::error::{Error, Result};
use crate::funcrep::decay::Decay;
use crate::funcrep::FunctionSpec;
use crate::signtools::last_sign_change;
use crate::transforms::fourier_transform;

/// Default number of lattice terms on each side.
pub const DEFAULT_TRUNCATION: usize = 100_000;

#[derive(Debug, Clone, Serialize)]
pub struct LatticeSum {
    /// Extrapolated value.
    pub value: f64,
    /// Plain partial sum at the larger truncation.
    pub partial: f64,
    /// Bound on what the plain partial sum leaves out.
    pub tail_bound: f64,
    pub terms: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PoissonReport {
    pub alpha: f64,
    pub beta: f64,
    pub lhs: LatticeSum,
    pub rhs: LatticeSum,
    pub residual: f64,
}

impl PoissonReport {
    /// Combined declared tail bounds of both sides.
    pub fn tail_bound(&self) -> f64 {
        self.lhs.tail_bound + self.rhs.tail_bound
    }
}

/// `sum_{|n| <= n_max} w(n) g(a n + b)`, summed by increasing `|n|`.
fn partial(g: &dyn Fn(f64) -> f64, w: &dyn Fn(i64) -> f64, a: f64, b: f64, n_max: usize) -> f64 {
    let mut s = w(0) * g(b);
    for n in 1..=n_max as i64 {
        s += w(n) * g(a * n as f64 + b) + w(-n) * g(-a * n as f64 + b);
    }
    s
}

/// Bound on `sum_{|n| > n_max} |g(a n + b)|` from a power-law envelope.
fn power_tail(decay: &Decay, a: f64, b: f64, n_max: usize) -> Result<f64> {
    let start = a * n_max as f64 - b.abs();
    match decay {
        Decay::Compact(r) if start >= *r => Ok(0.0),
        Decay::Rapid(r) if start >= *r => Ok(1e-17),
        _ => {
            let (from, c, p) = decay.as_power().ok_or_else(|| {
                Error::NotIntegrable(format!("no power-law envelope to bound the lattice tail ({decay:?})"))
            })?;
            if p <= 1.0 {
                return Err(Error::NotIntegrable(format!("lattice sum with tail ~ x^-{p} is not summable")));
            }
            if start < from {
                return Err(Error::InvalidParameter(format!(
                    "truncation {n_max} stops at {start}, before the decay estimate starts at {from}"
                )));
            }
            // sum_{n > N} c (a n - |b|)^-p <= c int_N^inf (a t - |b|)^-p dt, both sides
            Ok(2.0 * c * start.powf(1.0 - p) / (a * (p - 1.0)))
        }
    }
}

/// Lattice sum of an even profile with weights; Richardson in the truncation
/// removes the `1/N` part of power-law tails.
fn lattice_sum(f: &FunctionSpec, w: &dyn Fn(i64) -> f64, a: f64, b: f64, n: usize) -> Result<LatticeSum> {
    let decay = f.decay();
    let g = |x: f64| f.value(x.abs());
    match decay {
        Decay::Compact(r) | Decay::Rapid(r) => {
            let need = ((r + b.abs()) / a).ceil() as usize + 1;
            let n_eff = n.max(need);
            let s = partial(&g, w, a, b, n_eff);
            Ok(LatticeSum { value: s, partial: s, tail_bound: power_tail(&decay, a, b, n_eff)?, terms: n_eff })
        }
        _ => {
            // keep N a multiple of 4 so the period of common oscillations repeats
            let n1 = n.div_ceil(4) * 4;
            let s1 = partial(&g, w, a, b, n1);
            let s2 = partial(&g, w, a, b, 2 * n1);
            let tail = power_tail(&decay, a, b, 2 * n1)?;
            Ok(LatticeSum { value: 2.0 * s2 - s1, partial: s2, tail_bound: tail, terms: 2 * n1 })
        }
    }
}

/// `|alpha sum_n f(alpha n + beta) - sum_k fhat(k / alpha) e^{2 pi i beta k / alpha}|` in one dimension.
pub fn poisson_residual(f: &FunctionSpec, alpha: f64, beta: f64, truncation: usize) -> Result<PoissonReport> {
    if f.dim() != 1 {
        return Err(Error::Unsupported(format!("lattice sums are one-dimensional (got d = {})", f.dim())));
    }
    if !(alpha > 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("need alpha > 0 and finite beta (alpha = {alpha}, beta = {beta})")));
    }
    if truncation == 0 {
        return Err(Error::InvalidParameter("truncation must be positive".into()));
    }
    let fhat = fourier_transform(f)?;
    let one = |_: i64| 1.0;
    let mut lhs = lattice_sum(f, &one, alpha, beta, truncation)?;
    lhs.value *= alpha;
    lhs.partial *= alpha;
    lhs.tail_bound *= alpha;
    // f is even, so the imaginary parts cancel in pairs
    let theta = 2.0 * std::f64::consts::PI * beta / alpha;
    let phase = move |k: i64| (theta * k as f64).cos();
    let rhs = lattice_sum(&fhat, &phase, 1.0 / alpha, 0.0, truncation)?;
    let residual = (lhs.value - rhs.value).abs();
    Ok(PoissonReport { alpha, beta, lhs, rhs, residual })
}

/// For `f` with `supp fhat` in `[-1/2, 1/2]`: on every `beta` in `[r(f), 1]` the sum
/// `sum_n f((2n+1) beta)` equals `fhat(0) / (2 beta) <= 0` while each term is `>= 0`,
/// so all of them vanish. Passes iff no grid point violates this.
pub fn prop1_certificate(f: &FunctionSpec) -> Result<CertificateResult> {
    if f.dim() != 1 {
        return Err(Error::Unsupported("the odd-lattice argument is one-dimensional".into()));
    }
    let fhat = fourier_transform(f)?;
    let a = fhat.support_radius().ok_or_else(|| {
        Error::InvalidParameter("f is not bandlimited: its transform has no compact support".into())
    })?;
    if a > 0.5 + 1e-12 {
        return Err(Error::InvalidParameter(format!("transform support radius {a} exceeds 1/2")));
    }
    let fhat0 = fhat.value(0.0);
    let r = last_sign_change(f, 1e-10)?.radius;
    let betas: Vec<f64> = if r >= 1.0 {
        vec![r]
    } else {
        let n = 64;
        (0..=n).map(|i| r.max(1e-6) + (1.0 - r.max(1e-6)) * i as f64 / n as f64).collect()
    };
    let scale = f.value(0.0).abs().max(1e-300);
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut sums = Vec::with_capacity(betas.len());
    for &b in &betas {
        let s = lattice_sum(f, &|_| 1.0, 2.0 * b, b, DEFAULT_TRUNCATION)?;
        worst = worst.max(s.value - s.tail_bound.min(1e-9 * scale));
        sums.push(json!({"beta": b, "sum": s.value, "poisson_value": fhat0 / (2.0 * b)}));
    }
    // odd nodes, where the sum forces zeros
    let node_max = (0..=1000)
        .map(|n| f.value((2 * n + 1) as f64 * r.max(1.0)).abs())
        .fold(0.0, f64::max);
    let tol = 1e-9 * scale;
    let mut margin = -worst.max(fhat0) + tol;
    let mut notes = vec![format!("r(f) = {r}, fhat(0) = {fhat0}, max |f((2n+1) beta)| at beta = max(r, 1): {node_max:.3e}")];
    if r < 1.0 - 1e-6 {
        // f would have to vanish on [r, 1]; a nonzero value there is the contradiction
        let grid = 200;
        let interior = (0..=grid)
            .map(|i| f.value(r + (1.0 - r) * i as f64 / grid as f64).abs())
            .fold(0.0, f64::max);
        if interior > tol {
            notes.push(format!(
                "r(f) = {r} < 1 forces f to vanish on [{r}, 1], but max |f| there is {interior:.3e}: f cannot vanish on a non-degenerate interval"
            ));
            margin = margin.min(-interior);
        }
    }
    let inputs = json!({"r": r, "support_radius": a, "fhat0": fhat0, "sums": sums});
    let mut c = CertificateResult::from_margin("prop1", margin, inputs);
    for n in notes {
        c = c.note(n);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::ClosedKind;

    fn p1() -> FunctionSpec {
        FunctionSpec::closed(1, ClosedKind::Prop1Minimizer).unwrap()
    }

    #[test]
    fn gaussian_classical_identity() {
        let g = FunctionSpec::closed(1, ClosedKind::Gaussian).unwrap();
        let r = poisson_residual(&g, 1.0, 0.0, 50).unwrap();
        assert!(r.residual < 1e-12, "{r:?}");
    }

    #[test]
    fn prop1_grid_of_dilations_and_shifts() {
        let f = p1();
        for a in [0.5, 1.0, 2.0] {
            for b in [0.0, 0.5, 1.0] {
                let r = poisson_residual(&f, a, b, DEFAULT_TRUNCATION).unwrap();
                assert!(r.residual < 1e-8, "alpha {a} beta {b}: {r:?}");
                assert!(r.residual <= r.tail_bound());
            }
        }
    }

    #[test]
    fn odd_lattice_sum_vanishes() {
        let r = poisson_residual(&p1(), 2.0, 1.0, DEFAULT_TRUNCATION).unwrap();
        assert!(r.lhs.value.abs() < 1e-9 && r.rhs.value.abs() < 1e-15, "{r:?}");
    }

    #[test]
    fn tent_two_sided_identity() {
        // 0.7 * (tent(0.3) + tent(-0.4)) = 0.7 * 1.3
        let t = FunctionSpec::closed(1, ClosedKind::Tent).unwrap();
        let r = poisson_residual(&t, 0.7, 0.3, DEFAULT_TRUNCATION).unwrap();
        assert!((r.lhs.value - 0.91).abs() < 1e-15);
        assert!(r.residual < 1e-9, "{r:?}");
    }

    #[test]
    fn prop1_certificate_passes_at_one() {
        let c = prop1_certificate(&p1()).unwrap();
        assert!(c.passed, "{c:?}");
        assert!((c.inputs["r"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn wide_support_is_rejected() {
        let f = p1().dilate(2.0).unwrap();
        assert!(prop1_certificate(&f).is_err());
        let g = FunctionSpec::closed(1, ClosedKind::Gaussian).unwrap();
        assert!(prop1_certificate(&g).is_err());
    }

    #[test]
    fn positive_odd_values_fail() {
        // sinc^2(x/2) has transform 2 tent(2 xi), inside [-1/2, 1/2]
        let bump = FunctionSpec::closed(1, ClosedKind::SincSq).unwrap().dilate(0.5).unwrap();
        let f = p1().add(&bump.scale(0.05)).unwrap();
        assert!(f.value(3.0) > 0.0);
        let c = prop1_certificate(&f).unwrap();
        assert!(!c.passed, "{c:?}");
    }
}

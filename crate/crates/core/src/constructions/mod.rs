//! Constructive transformations: Dirac symmetrisation, Gaussian correction,
//! the eta function, mollification to bandlimited functions, Schwartz
//! smoothing and eigen-symmetrisation.

pub mod pipeline;

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcrep::{ClosedForm, ClosedKind, Composite, FunctionSpec, Sign};
use crate::signtools::{last_sign_change, scan_grid, DEFAULT_TOL};
use crate::transforms::bump;
use crate::transforms::fourier_transform;
use crate::transforms::quadrature::Quadrature;
use crate::transforms::special::ball_volume;

/// Finitely many weighted point masses, symmetric under negation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiracComb {
    pub atoms: Vec<(f64, f64)>,
}

impl DiracComb {
    /// `delta_{x0} + delta_{-x0} + 2 delta_0`.
    pub fn canonical(x0: f64) -> Self {
        DiracComb { atoms: vec![(-x0, 1.0), (0.0, 2.0), (x0, 1.0)] }
    }

    pub fn is_symmetric(&self) -> bool {
        self.atoms.iter().all(|&(x, w)| self.atoms.iter().any(|&(y, v)| (x + y).abs() < 1e-15 && v == w))
    }

    /// `sum w exp(-2 pi i x xi)`, real for symmetric combs.
    pub fn transform(&self, xi: f64) -> f64 {
        self.atoms.iter().map(|&(x, w)| w * (2.0 * PI * x * xi).cos()).sum()
    }
}

/// `g(x) = f(x - x0) + f(x + x0) + 2 f(x)`, whose transform is `(2 cos(2 pi x0 xi) + 2) hat f`.
pub fn dirac_symmetrize(f: &FunctionSpec, x0: f64) -> Result<FunctionSpec> {
    if !(x0 > 0.0) || !x0.is_finite() {
        return Err(Error::InvalidParameter(format!("x0 must be positive, got {x0}")));
    }
    if f.dim() != 1 {
        return Err(Error::Unsupported("Dirac symmetrisation is implemented on the line".into()));
    }
    FunctionSpec::composite(1, Composite::DiracSym { inner: std::sync::Arc::new(f.clone()), x0 })
}

/// `h = g + hat g - (g(0) + hat g(0)) / 2 * exp(-pi |x|^2)`.
pub fn gaussian_correct(g: &FunctionSpec) -> Result<FunctionSpec> {
    let ghat = fourier_transform(g)?;
    let s = g.value(0.0) + ghat.value(0.0);
    if !(s < 0.0) {
        return Err(Error::CorrectionNotApplicable(s));
    }
    let gauss = FunctionSpec::closed(g.dim(), ClosedKind::Gaussian)?;
    FunctionSpec::linear_combination(vec![(1.0, g.clone()), (1.0, ghat), (-0.5 * s, gauss)])
}

/// `F = f + s hat f`, so that `hat F = s F`.
pub fn eigen_symmetrize(f: &FunctionSpec, s: Sign) -> Result<FunctionSpec> {
    let fhat = fourier_transform(f)?;
    FunctionSpec::linear_combination(vec![(1.0, f.clone()), (s.value(), fhat)])
}

// ---- eta ----------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Eta {
    pub function: FunctionSpec,
    /// Lower constant in `|x|^{d+1} psi(x) >= A` used for the normalisation.
    pub a: f64,
    /// Radius past which `|x|^{d+1} eta(x) >= 1` on the verification grid.
    pub r0: f64,
    /// Smallest value of `|x|^{d+1} eta(x)` on the grid past `r0`.
    pub min_growth: f64,
    /// Largest radius of the verification grid.
    pub checked_to: f64,
}

/// `eta = A^-1 (psi - 2 psi(0) exp(-pi |x|^2))` with `psi = phi + hat phi`, `phi = chi * hat chi`
/// and `chi` the autocorrelation of the unit ball's indicator.
pub fn build_eta(d: usize) -> Result<Eta> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let chi = FunctionSpec::closed(d, ClosedKind::IndicatorBallAutocorr)?;
    let chi_hat = fourier_transform(&chi)?;
    let phi = chi.convolve(&chi_hat)?;
    let phi_hat = fourier_transform(&phi)?;
    let psi = phi.add(&phi_hat)?;
    let psi0 = psi.value(0.0);
    let gauss = FunctionSpec::closed(d, ClosedKind::Gaussian)?;
    let core = FunctionSpec::linear_combination(vec![(1.0, psi), (-2.0 * psi0, gauss)])?;

    // |x|^{d+1} phi(x) tends to nu_d^2 / (2 pi^2); normalise by a fraction of that limit
    let limit = ball_volume(d).powi(2) / (2.0 * PI * PI);
    let a = 0.8 * limit;
    let checked_to = if d == 1 { 1e3 } else { 2e2 };
    let n = 400;
    let lo: f64 = 0.5;
    let grid: Vec<f64> = (0..n).map(|i| lo * (checked_to / lo).powf(i as f64 / (n - 1) as f64)).collect();
    let growth: Vec<f64> = grid.par_iter().map(|&x| x.powi(d as i32 + 1) * core.value(x) / a).collect();
    if growth.iter().any(|v| !v.is_finite()) {
        return Err(Error::QuadratureFailed { a: lo, b: checked_to, value: f64::NAN, error: f64::NAN });
    }
    let Some(last_bad) = growth.iter().rposition(|&g| g < 1.0) else {
        return Ok(Eta { function: core.scale(1.0 / a), a, r0: grid[0], min_growth: min(&growth), checked_to });
    };
    if last_bad + 1 >= grid.len() {
        return Err(Error::Search(format!("|x|^{{d+1}} eta(x) stays below 1 up to {checked_to}")));
    }
    let r0 = grid[last_bad + 1];
    Ok(Eta { function: core.scale(1.0 / a), a, r0, min_growth: min(&growth[last_bad + 1..]), checked_to })
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `beta` with `h + beta eta > 0` on `[r(h) + delta / n, r0]`: the smallest ratio
/// `h / |eta|` over points where `eta < 0`, divided by a 1.1 safety factor.
pub fn eta_weight(h: &FunctionSpec, eta: &Eta, delta: f64, n: usize) -> Result<f64> {
    let rh = last_sign_change(h, DEFAULT_TOL)?.radius;
    if rh >= eta.r0 {
        return Ok(1.0);
    }
    let start = rh + delta / n.max(1) as f64;
    if start >= eta.r0 {
        return Err(Error::InvalidParameter(format!("r(h) + delta/n = {start} is not below r0 = {}", eta.r0)));
    }
    let pts: Vec<f64> = (0..=512).map(|i| start + (eta.r0 - start) * i as f64 / 512.0).collect();
    let ratios: Vec<f64> = pts
        .par_iter()
        .filter_map(|&x| {
            let e = eta.function.value(x);
            (e < 0.0).then(|| h.value(x) / -e)
        })
        .collect();
    if ratios.is_empty() {
        return Ok(1.0);
    }
    let m = min(&ratios);
    if !(m > 0.0) {
        return Err(Error::Search(format!("h is not positive on [{start}, {}]", eta.r0)));
    }
    Ok(m / 1.1)
}

/// `h + beta eta` with `beta` from [`eta_weight`].
pub fn add_eta(h: &FunctionSpec, eta: &Eta, delta: f64, n: usize) -> Result<FunctionSpec> {
    let beta = eta_weight(h, eta, delta, n)?;
    FunctionSpec::linear_combination(vec![(1.0, h.clone()), (beta, eta.function.clone())])
}

// ---- mollification ------------------------------------------------------

/// `int |psi|` for the catalog bump.
pub fn bump_l1() -> f64 {
    static L1: OnceLock<f64> = OnceLock::new();
    *L1.get_or_init(|| {
        2.0 * Quadrature::with_tol(1e-14, 1e-13).integrate(&bump::psi, 0.0, 1.0).expect("bump integrates").value
    })
}

/// `phi_delta(x) = phi(delta x)` with `phi = psi * psi`.
pub fn phi_delta(delta: f64) -> Result<FunctionSpec> {
    FunctionSpec::closed_form(1, ClosedForm { kind: ClosedKind::BumpAutocorr, amplitude: 1.0, dilation: delta })
}

#[derive(Debug, Clone)]
pub struct Mollified {
    pub function: FunctionSpec,
    /// Radius of the support of the transform.
    pub band_radius: f64,
    pub delta: f64,
}

/// `g_delta = f * hat phi_delta`; its transform `hat f phi_delta` is supported in `|xi| <= 2 / delta`.
pub fn mollify_bandlimit(f: &FunctionSpec, delta: f64) -> Result<Mollified> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    if f.dim() != 1 {
        return Err(Error::Unsupported("the mollifier is defined on the line".into()));
    }
    let kernel = fourier_transform(&phi_delta(delta)?)?;
    Ok(Mollified { function: f.convolve(&kernel)?, band_radius: 2.0 / delta, delta })
}

/// Positivity requirements for the mollified function (hypotheses of the bandlimiting step).
#[derive(Debug, Clone, Copy)]
pub struct PositivityTarget {
    /// Target: `g > 0` on `|x| >= r(f) + eps`.
    pub eps: f64,
    /// `x^2 f(x) >= c` for `|x| >= big_r`.
    pub c: f64,
    pub big_r: f64,
}

/// Radius `R1 >= R` past which `|hat phi(xi)| <= 1e-6 c |xi|^-3`.
fn hat_phi_radius(c: f64, big_r: f64) -> f64 {
    let mut last_bad: f64 = 0.0;
    let mut xi: f64 = 0.5;
    while xi <= 64.0 {
        if bump::psi_hat(xi).powi(2) > 1e-6 * c * xi.powi(-3) {
            last_bad = xi;
        }
        xi += 0.01;
    }
    (last_bad + 0.01).max(big_r)
}

/// Whether `g_delta > 0` on `[r(f) + eps, inf)`: grid check on `[r(f) + eps, 2 R1]`,
/// and past `2 R1` the three estimates of the tail argument.
fn mollified_positive(f: &FunctionSpec, rf: f64, delta: f64, t: &PositivityTarget) -> Result<bool> {
    let m = mollify_bandlimit(f, delta)?;
    let r1 = hat_phi_radius(t.c, t.big_r);
    // mass of hat phi_delta within sqrt(delta) must be at least 1/2
    let reach = delta.sqrt() / delta;
    let q = Quadrature::with_tol(1e-12, 1e-10);
    let mass = 2.0 * q.integrate_panels(&|x| bump::psi_hat(x).powi(2), 0.0, reach.min(64.0), 256)?.value;
    if mass < 0.5 || 2.0 * delta * delta >= 100.0 || 2.0 * r1 - delta.sqrt() < t.big_r {
        return Ok(false);
    }
    let start = rf + t.eps;
    let end = 2.0 * r1;
    if start >= end {
        return Ok(true);
    }
    let grid: Vec<f64> = (0..=1024).map(|i| start + (end - start) * i as f64 / 1024.0).collect();
    Ok(grid.par_iter().all(|&x| m.function.value(x) > 0.0))
}

/// Mollifies and checks positivity past `r(f) + eps`; on failure reports the largest
/// admissible `delta` found by halving.
pub fn mollify_with_positivity(f: &FunctionSpec, delta: f64, target: &PositivityTarget) -> Result<Mollified> {
    let rf = last_sign_change(f, DEFAULT_TOL)?.radius;
    if mollified_positive(f, rf, delta, target)? {
        return mollify_bandlimit(f, delta);
    }
    let mut d = delta;
    for _ in 0..12 {
        d *= 0.5;
        if mollified_positive(f, rf, d, target)? {
            return Err(Error::ScaleTooLarge { delta, admissible: Some(d) });
        }
    }
    Err(Error::ScaleTooLarge { delta, admissible: None })
}

// ---- Schwartz smoothing -------------------------------------------------

/// `L^1`-normalised bump on `B_delta`, autocorrelated: `phi_delta = psi_delta * psi_delta`.
fn smoothing_kernel(delta: f64) -> Result<FunctionSpec> {
    let l1 = bump_l1();
    FunctionSpec::closed_form(
        1,
        ClosedForm { kind: ClosedKind::BumpAutocorr, amplitude: 1.0 / (delta * l1 * l1), dilation: 1.0 / delta },
    )
}

/// `h = hat g * phi_delta + g hat phi_delta` with `g = f * phi_delta`; `hat h = h` when `hat f = f`.
pub fn schwartz_smooth(f: &FunctionSpec, delta: f64) -> Result<FunctionSpec> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    if f.dim() != 1 {
        return Err(Error::Unsupported("Schwartz smoothing uses the one-dimensional bump".into()));
    }
    let phi = smoothing_kernel(delta)?;
    let phi_hat = fourier_transform(&phi)?;
    let g = f.convolve(&phi)?;
    let ghat = fourier_transform(&g)?;
    let first = ghat.convolve(&phi)?;
    let second = g.multiply(&phi_hat)?;
    let (a, b) = (first.value(0.0), second.value(0.0));
    if !(a + b < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "h(0) = {} is not negative (hat g * phi_delta contributes {a:.3e}, g hat phi_delta {b:.3e}); decrease delta",
            a + b
        )));
    }
    first.add(&second)
}

/// `sup |F - s hat F|` over a grid on `[0, end]`.
pub fn eigen_defect(f: &FunctionSpec, s: Sign, end: f64, points: usize) -> Result<f64> {
    let fhat = fourier_transform(f)?;
    let grid = scan_grid(f, end, points);
    Ok(grid.par_iter().map(|&x| (f.value(x) - s.value() * fhat.value(x)).abs()).reduce(|| 0.0, f64::max))
}

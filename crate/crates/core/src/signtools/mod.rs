//! Radius of the last sign change, positive mass, superlevel sets, negative
//! points and dilation balancing.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcrep::{FunctionSpec, Representation, TailArgument};
use crate::transforms::special::ball_volume;
use crate::transforms::{fourier_transform, integrate_fn, l1_norm};
use crate::funcrep::Decay;

pub const DEFAULT_SCAN_POINTS: usize = 4096;
pub const DEFAULT_TOL: f64 = 1e-9;
/// Relative size below which a sample counts as zero.
const ZERO_REL: f64 = 1e-13;
const MAX_SCAN_POINTS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignChangeReport {
    pub radius: f64,
    /// Intervals on which a sign flip was isolated, in increasing order.
    pub brackets: Vec<(f64, f64)>,
    pub tail_argument: TailArgument,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassReport {
    pub sigma: f64,
    pub ratio: f64,
    pub r_used: f64,
    pub l1: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperlevelReport {
    pub measure: f64,
    /// Radial intervals of `[0, r]` on which `f >= 0`.
    pub intervals: Vec<(f64, f64)>,
    pub uncertainty: f64,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativePoint {
    pub x0: f64,
    pub value: f64,
    /// `(r(f)^d - 1/(2 nu_d))^(1/d)` when `f` looks normalised (`||f||_1 = 1`, `f(0) = 0`).
    pub bound: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Balanced {
    pub function: FunctionSpec,
    pub lambda: f64,
    pub r_f: f64,
    pub r_fhat: f64,
    /// Common radius `sqrt(r(f) r(fhat))` after rescaling.
    pub radius: f64,
}

// ---- sign classification ------------------------------------------------

/// Three-way sign of `f` with a noise-aware zero band.
pub(crate) struct SignOracle<'a> {
    f: &'a FunctionSpec,
    threshold: f64,
}

impl<'a> SignOracle<'a> {
    /// `samples` fixes the global scale used for non-polynomial representations.
    pub(crate) fn new(f: &'a FunctionSpec, samples: &[f64]) -> Self {
        let scale = match f.representation() {
            Representation::Eigen(_) => 0.0,
            _ => samples.par_iter().map(|&r| f.value(r).abs()).reduce(|| 0.0, f64::max),
        };
        SignOracle { f, threshold: ZERO_REL * scale }
    }

    pub(crate) fn sign(&self, r: f64) -> i8 {
        let (v, noise) = match self.f.representation() {
            Representation::Eigen(e) => {
                let (v, abs) = e.sign_value_with_noise(r);
                (v, ZERO_REL * abs)
            }
            _ => (self.f.value(r), self.threshold),
        };
        if v.is_nan() {
            0
        } else if v > noise {
            1
        } else if v < -noise {
            -1
        } else {
            0
        }
    }

    /// Shrinks `[a, b]` (with `sign(a) == sa != 0`) onto the point where the sign leaves `sa`.
    pub(crate) fn bisect(&self, mut a: f64, mut b: f64, sa: i8, tol: f64) -> (f64, f64) {
        while b - a > tol {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if self.sign(m) == sa {
                a = m;
            } else {
                b = m;
            }
        }
        (a, b)
    }
}

/// Scan grid on `[0, end]`: dense near the origin, uniform (or oscillation-adapted
/// for eigen expansions), plus every kink.
pub fn scan_grid(f: &FunctionSpec, end: f64, n: usize) -> Vec<f64> {
    let n = n.max(64);
    let mut pts = Vec::with_capacity(n + 16);
    if end <= 0.0 {
        return vec![0.0];
    }
    let fs = f.feature_scale();
    let n_geo = n / 8;
    let (uniform_end, tail_geo) = match f.representation() {
        Representation::Eigen(e) => {
            let a = f.dim() as f64 / 2.0 - 1.0;
            let top = e.top_index().unwrap_or(0) as f64;
            // zeros of L_k^(a)(u) lie below u = 4k + 2a + 2
            let r_osc = 1.1 * ((4.0 * top + 2.0 * a + 6.0) / (2.0 * std::f64::consts::PI)).sqrt();
            (r_osc.min(end), end > r_osc)
        }
        _ => (end, false),
    };
    let n_uni = (n - 2 * n_geo).max(((uniform_end / (fs / 8.0)).ceil()) as usize).min(MAX_SCAN_POINTS);
    pts.extend((0..=n_uni).map(|i| uniform_end * i as f64 / n_uni as f64));
    // geometric refinement near the origin
    let lo = uniform_end * 1e-7;
    let hi = uniform_end / 64.0;
    pts.extend((0..n_geo).map(|i| lo * (hi / lo).powf(i as f64 / (n_geo - 1) as f64)));
    if tail_geo {
        let q = (end / uniform_end).powf(1.0 / n_geo as f64);
        pts.extend((1..=n_geo).map(|i| uniform_end * q.powi(i as i32)));
    }
    pts.extend(f.kinks().into_iter().filter(|&k| k > 0.0 && k < end));
    pts.push(end);
    pts.retain(|&x| x <= end);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

fn no_tail_error(f: &FunctionSpec) -> Error {
    if let Representation::Eigen(e) = f.representation() {
        if e.leading_sign() < 0.0 {
            return Error::NotEventuallyNonnegative { radius: e.root_bound_radius().unwrap_or(f64::INFINITY) };
        }
    }
    let probes = [4.0, 8.0, 16.0, 32.0, 64.0];
    let signs: Vec<f64> = probes.iter().map(|&r| f.sign_value(r)).collect();
    if signs.iter().all(|&v| v < 0.0) {
        return Error::NotEventuallyNonnegative { radius: probes[probes.len() - 1] };
    }
    Error::TailNotCertifiable(format!(
        "no closed-form, polynomial or decay argument applies (decay description: {:?})",
        f.decay()
    ))
}

// ---- operations ---------------------------------------------------------

/// `r(f)`: the infimum of radii beyond which `f >= 0`.
pub fn last_sign_change(f: &FunctionSpec, tol: f64) -> Result<SignChangeReport> {
    last_sign_change_with(f, tol, DEFAULT_SCAN_POINTS)
}

pub fn last_sign_change_with(f: &FunctionSpec, tol: f64, points: usize) -> Result<SignChangeReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let tail = f.tail_argument().ok_or_else(|| no_tail_error(f))?;
    let window = tail.radius();
    if window == 0.0 {
        return Ok(SignChangeReport { radius: 0.0, brackets: Vec::new(), tail_argument: tail, tolerance: tol });
    }
    let grid = scan_grid(f, window, points);
    let oracle = SignOracle::new(f, &grid);
    let signs: Vec<i8> = grid.par_iter().map(|&r| oracle.sign(r)).collect();

    // sign flips between consecutive nonzero samples
    let mut raw = Vec::new();
    let mut last: Option<(f64, i8)> = None;
    for (&x, &s) in grid.iter().zip(&signs) {
        if s == 0 {
            continue;
        }
        if let Some((px, ps)) = last {
            if ps != s {
                raw.push((px, x, ps));
            }
        }
        last = Some((x, s));
    }
    let brackets: Vec<(f64, f64)> = raw.par_iter().map(|&(a, b, sa)| oracle.bisect(a, b, sa, tol)).collect();

    let Some(i_neg) = signs.iter().rposition(|&s| s < 0) else {
        return Ok(SignChangeReport { radius: 0.0, brackets, tail_argument: tail, tolerance: tol });
    };
    let a = grid[i_neg];
    let b = grid[i_neg + 1..].iter().zip(&signs[i_neg + 1..]).find(|(_, &s)| s > 0).map_or(window, |(&x, _)| x);
    let b = b.max(a);
    let (_, radius) = if a == b { (a, b) } else { oracle.bisect(a, b, -1, tol) };
    Ok(SignChangeReport { radius, brackets, tail_argument: tail, tolerance: tol })
}

/// Sorted sign-change points of `f` in `(0, r)`, refined to `tol`.
pub fn sign_changes_in(f: &FunctionSpec, r: f64, tol: f64) -> Vec<f64> {
    if r <= 0.0 {
        return Vec::new();
    }
    let grid = scan_grid(f, r, DEFAULT_SCAN_POINTS);
    let oracle = SignOracle::new(f, &grid);
    let signs: Vec<i8> = grid.par_iter().map(|&x| oracle.sign(x)).collect();
    let mut raw = Vec::new();
    for i in 1..grid.len() {
        // transitions between the classes "negative" and "nonnegative"
        if (signs[i - 1] < 0) != (signs[i] < 0) {
            raw.push((grid[i - 1], grid[i], signs[i - 1]));
        }
    }
    raw.par_iter()
        .map(|&(a, b, sa)| {
            let (lo, hi) = if sa < 0 { oracle.bisect(a, b, -1, tol) } else { bisect_nonneg(&oracle, a, b, tol) };
            0.5 * (lo + hi)
        })
        .collect()
}

fn bisect_nonneg(o: &SignOracle, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if o.sign(m) >= 0 {
            a = m;
        } else {
            b = m;
        }
    }
    (a, b)
}

/// `sigma = int_{B_r} f_+` and its share of `||f||_1`.
pub fn sigma_plus_mass(f: &FunctionSpec, r: f64) -> Result<MassReport> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be nonnegative, got {r}")));
    }
    let d = f.dim();
    let mut breaks = sign_changes_in(f, r, 1e-13);
    breaks.extend(f.kinks());
    let h = f.feature_scale().min(0.25);
    let q = integrate_fn(&|x| f.value(x).max(0.0), &Decay::Compact(r), d as i32 - 1, 0.0, r, &breaks, h)?;
    let omega = crate::transforms::special::sphere_area(d);
    let sigma = omega * q.value;
    let l1 = l1_norm(f)?;
    let ratio = if l1.value > 0.0 { sigma / l1.value } else { 0.0 };
    // rounding can push a fully positive function a hair past 1
    let ratio = if ratio > 1.0 && ratio - 1.0 < 1e-9 { 1.0 } else { ratio.max(0.0) };
    Ok(MassReport { sigma, ratio, r_used: r, l1: l1.value, error_estimate: omega * q.error_estimate + l1.error_estimate })
}

/// Lebesgue measure of `{x in B_r : f(x) >= 0}`.
pub fn superlevel_measure(f: &FunctionSpec, r: f64) -> Result<SuperlevelReport> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be nonnegative, got {r}")));
    }
    let d = f.dim() as i32;
    let nu = ball_volume(f.dim());
    if r == 0.0 {
        return Ok(SuperlevelReport { measure: 0.0, intervals: Vec::new(), uncertainty: 0.0, warning: None });
    }
    let grid = scan_grid(f, r, DEFAULT_SCAN_POINTS);
    let oracle = SignOracle::new(f, &grid);
    let nonneg: Vec<bool> = grid.par_iter().map(|&x| oracle.sign(x) >= 0).collect();
    let mut cuts = Vec::new();
    for i in 1..grid.len() {
        if nonneg[i - 1] != nonneg[i] {
            let (lo, hi) = if nonneg[i - 1] {
                bisect_nonneg(&oracle, grid[i - 1], grid[i], 1e-13)
            } else {
                oracle.bisect(grid[i - 1], grid[i], -1, 1e-13)
            };
            cuts.push((0.5 * (lo + hi), nonneg[i]));
        }
    }
    let mut intervals = Vec::new();
    let mut start = if nonneg[0] { Some(0.0) } else { None };
    for &(x, becomes_nonneg) in &cuts {
        if becomes_nonneg {
            start = Some(x);
        } else if let Some(s) = start.take() {
            intervals.push((s, x));
        }
    }
    if let Some(s) = start {
        intervals.push((s, r));
    }
    let measure = intervals.iter().map(|&(a, b)| nu * (b.powi(d) - a.powi(d))).sum();
    let (uncertainty, warning) = if cuts.len() > grid.len() / 8 {
        let h = r / grid.len() as f64;
        (
            cuts.len() as f64 * nu * ((r).powi(d) - (r - h).max(0.0).powi(d)),
            Some(format!("{} sign changes on {} samples: oscillation may be unresolved", cuts.len(), grid.len())),
        )
    } else {
        (0.0, None)
    };
    Ok(SuperlevelReport { measure, intervals, uncertainty, warning })
}

/// Smallest radius where `f` is negative (grid scan, then bisection onto the boundary).
pub fn find_negative_point(f: &FunctionSpec) -> Result<NegativePoint> {
    let f0 = f.value(0.0);
    if f0 < 0.0 {
        return Ok(NegativePoint { x0: 0.0, value: f0, bound: None });
    }
    let window = f.tail_argument().map(|t| t.radius()).unwrap_or(20.0).max(f.feature_scale());
    let grid = scan_grid(f, window, DEFAULT_SCAN_POINTS);
    let oracle = SignOracle::new(f, &grid);
    let signs: Vec<i8> = grid.par_iter().map(|&x| oracle.sign(x)).collect();
    let Some(i) = signs.iter().position(|&s| s < 0) else {
        return Err(Error::NoNegativePoint { window });
    };
    let x0 = if i == 0 { grid[0] } else { bisect_nonneg(&oracle, grid[i - 1], grid[i], 1e-13).1 };
    let normalised = f0.abs() < 1e-12 && l1_norm(f).map(|q| (q.value - 1.0).abs() < 1e-6).unwrap_or(false);
    let bound = if normalised {
        let d = f.dim() as f64;
        let r = last_sign_change(f, DEFAULT_TOL)?.radius;
        let base = r.powf(d) - 1.0 / (2.0 * ball_volume(f.dim()));
        (base > 0.0).then(|| base.powf(1.0 / d))
    } else {
        None
    };
    Ok(NegativePoint { x0, value: f.value(x0), bound })
}

/// Rescales `f` so that `r(f) = r(fhat)`.
pub fn balance_scale(f: &FunctionSpec, tol: f64) -> Result<Balanced> {
    let fhat = fourier_transform(f)?;
    let r_f = last_sign_change(f, tol)?.radius;
    let r_fhat = last_sign_change(&fhat, tol)?.radius;
    if r_f <= tol || r_fhat <= tol {
        return Err(Error::DegenerateBalance { r_f, r_fhat });
    }
    let lambda = (r_f / r_fhat).sqrt();
    let function = if (lambda - 1.0).abs() <= tol { f.clone() } else { f.dilate(lambda)? };
    Ok(Balanced { function, lambda, r_f, r_fhat, radius: (r_f * r_fhat).sqrt() })
}

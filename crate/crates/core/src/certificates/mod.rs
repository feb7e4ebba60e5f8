//! Checks of the quantitative inequality chains: second moments, the pointwise
//! positive-part bound and the Phi sweep, bathtub shells, convexity gaps and
//! the improvement factor.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::funcrep::{FunctionSpec, SampledProfile};
use crate::transforms::quadrature::{Quadrature, QuadratureResult, RadialWeight};
use crate::transforms::special::{ball_volume, sphere_area};
use crate::transforms::integrate;

/// Named verification outcome; `margin >= 0` exactly when `passed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateResult {
    pub name: String,
    pub passed: bool,
    pub margin: f64,
    pub inputs: Value,
    pub notes: Vec<String>,
}

impl CertificateResult {
    pub fn new(name: &str, passed: bool, margin: f64, inputs: Value) -> Self {
        // keep the sign of the margin consistent with the verdict at the boundary
        let margin = match (passed, margin) {
            (true, m) if m < 0.0 => 0.0,
            (false, m) if m >= 0.0 => -f64::MIN_POSITIVE,
            (_, m) => m,
        };
        CertificateResult { name: name.into(), passed, margin, inputs, notes: Vec::new() }
    }

    /// Pass iff `margin >= 0`.
    pub fn from_margin(name: &str, margin: f64, inputs: Value) -> Self {
        Self::new(name, margin >= 0.0, margin, inputs)
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }
}

// ---- second moment ------------------------------------------------------

/// `int |y|^2 f(y) dy` over `R^d`.
pub fn second_moment(f: &FunctionSpec) -> Result<QuadratureResult> {
    match integrate(f, RadialWeight::SecondMoment, 0.0, f64::INFINITY) {
        Ok(q) => Ok(q.scaled(sphere_area(f.dim()))),
        Err(Error::NotIntegrable(why)) => Err(Error::NotIntegrable(format!(
            "second moment diverges, so the sign hypotheses cannot be met ({why})"
        ))),
        Err(e) => Err(e),
    }
}

/// For `hat f = s f`, `f(0) = 0` and `s f >= 0` near the origin the second moment is `<= 0`.
pub fn second_moment_certificate(f: &FunctionSpec, tol: f64) -> Result<CertificateResult> {
    let m = second_moment(f)?;
    Ok(CertificateResult::from_margin("second-moment-sign", tol - m.value, json!({ "tol": tol, "dim": f.dim() }))
        .note(format!("second moment {:.3e} +/- {:.1e}", m.value, m.error_estimate)))
}

// ---- pointwise bound and Phi -------------------------------------------

fn check_bound_range(r: f64) -> Result<()> {
    if !(0.25..=FRAC_1_SQRT_2).contains(&r) {
        return Err(Error::InvalidParameter(format!("r = {r} outside [1/4, 1/sqrt 2]")));
    }
    Ok(())
}

fn bound_unchecked(r: f64, x: f64) -> f64 {
    let a = 2.0 * PI * (r - 0.25);
    let b = 2.0 * PI * r;
    if x.abs() < 1e-3 {
        let x2 = x * x;
        let s = (a - b) - (a.powi(3) - b.powi(3)) * x2 / 6.0 + (a.powi(5) - b.powi(5)) * x2 * x2 / 120.0
            - (a.powi(7) - b.powi(7)) * x2 * x2 * x2 / 5040.0;
        0.5 + s / PI
    } else {
        0.5 + ((a * x).sin() - (b * x).sin()) / (PI * x)
    }
}

/// `1/2 + [sin(2 pi (r - 1/4) x) - sin(2 pi r x)] / (pi x)`, the pointwise bound on `f_+`.
pub fn lemma_two_bound(r: f64, x: f64) -> Result<f64> {
    check_bound_range(r)?;
    if !(0.0..=r).contains(&x) {
        return Err(Error::InvalidParameter(format!("x = {x} outside [0, r = {r}]")));
    }
    Ok(bound_unchecked(r, x))
}

/// `Phi(r) = int_{1/4}^r bound(r, x) dx` with error estimate.
pub fn phi(r: f64) -> Result<QuadratureResult> {
    if !(r >= 0.25) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("Phi needs r >= 1/4, got {r}")));
    }
    if r == 0.25 {
        return Ok(QuadratureResult::zero());
    }
    Quadrature::with_tol(1e-14, 1e-13).integrate(&|x| bound_unchecked(r, x), 0.25, r)
}

/// `(r + 1/4) sigma (r + 1/4 - sigma) >= r / 8`.
pub fn import_inequality(r: f64, sigma: f64) -> CertificateResult {
    let lhs = (r + 0.25) * sigma * (r + 0.25 - sigma);
    let rhs = r / 8.0;
    CertificateResult::from_margin("import-inequality", lhs - rhs, json!({ "r": r, "sigma": sigma }))
        .note(format!("lhs {lhs:.6e}, rhs {rhs:.6e}"))
}

/// Step-1 contradiction: `Phi(r_high) <= sigma_bound` and the import inequality
/// fails on the whole `1e-3` grid of `[r_low, r_high]`.
pub fn step1_contradiction(r_low: f64, r_high: f64, sigma_bound: f64) -> Result<CertificateResult> {
    check_bound_range(r_low)?;
    check_bound_range(r_high)?;
    if r_low > r_high || !(sigma_bound >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need r_low <= r_high and sigma_bound >= 0 (got {r_low}, {r_high}, {sigma_bound})"
        )));
    }
    let n = ((r_high - r_low) / 1e-3 + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|i| r_low + i as f64 * 1e-3).collect();
    if *grid.last().unwrap() < r_high - 1e-12 {
        grid.push(r_high);
    }
    let phis = grid.par_iter().map(|&r| phi(r)).collect::<Result<Vec<_>>>()?;
    let monotone = phis.windows(2).all(|w| w[0].value <= w[1].value);
    let phi_high = phis.last().unwrap();
    // with Phi increasing, Phi(r_high) bounds sigma on the whole window; otherwise check each point
    let phi_margin = if monotone {
        sigma_bound - phi_high.value
    } else {
        phis.iter().map(|p| sigma_bound - p.value).fold(f64::INFINITY, f64::min)
    };
    let import_max = grid.iter().map(|&r| import_inequality(r, sigma_bound).margin).fold(f64::NEG_INFINITY, f64::max);
    let passed = phi_margin >= 0.0 && import_max < 0.0;
    let margin = phi_margin.min(-import_max);
    let mut cert = CertificateResult::new(
        "step1-contradiction",
        passed,
        margin,
        json!({ "r_low": r_low, "r_high": r_high, "sigma_bound": sigma_bound }),
    )
    .note(format!("Phi(r_high) = {:.12} (+/- {:.1e})", phi_high.value, phi_high.error_estimate))
    .note(format!("largest import margin on {} grid points: {:.6e}", grid.len(), import_max));
    if !monotone {
        cert = cert.note("Phi not monotone on the grid; per-point bounds used");
    }
    Ok(cert)
}

// ---- bathtub ------------------------------------------------------------

/// Radii `s < r < t` with `|B_r \ B_s| = |B_t \ B_r| = 1/2`.
pub fn bathtub_radii(d: usize, r: f64) -> Result<(f64, f64)> {
    if d == 0 || !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("need d >= 1 and r > 0 (got {d}, {r})")));
    }
    let nu = ball_volume(d);
    let half = 1.0 / (2.0 * nu);
    let rd = r.powi(d as i32);
    if rd <= half {
        return Err(Error::ShellDoesNotFit(r));
    }
    let inv = 1.0 / d as f64;
    Ok(((rd - half).powf(inv), (rd + half).powf(inv)))
}

/// `nu_d / (1 + 2/d) (t^{d+2} + s^{d+2} - 2 r^{d+2})`, positive by strict convexity.
pub fn convexity_gap(d: usize, r: f64) -> Result<CertificateResult> {
    let (s, t) = bathtub_radii(d, r)?;
    let nu = ball_volume(d);
    let p = d as i32 + 2;
    let gap = nu / (1.0 + 2.0 / d as f64) * (t.powi(p) + s.powi(p) - 2.0 * r.powi(p));
    Ok(CertificateResult::new("convexity-gap", gap > 0.0, gap, json!({ "d": d, "r": r, "s": s, "t": t })))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BathtubSolution {
    /// Threshold level `s`.
    pub level: f64,
    /// Fill fraction on `{h = s}` (zero when that set is null).
    pub fraction: f64,
    /// Measure of `{h = s}` as resolved.
    pub level_measure: f64,
    /// Measure of `{h < s}`.
    pub below_measure: f64,
    /// `int g` for the returned minimiser.
    pub integral: f64,
    /// `int g h` for the returned minimiser.
    pub objective: f64,
}

/// Radial cost `h` on `B_R`, piecewise linear between the profile's knots.
pub struct RadialCost<'a> {
    pub dim: usize,
    pub profile: &'a SampledProfile,
}

impl RadialCost<'_> {
    fn cells(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        let r = self.profile.radii();
        let v = self.profile.values();
        (0..r.len() - 1).map(move |i| (r[i], r[i + 1], v[i], v[i + 1]))
    }

    fn shell(&self, a: f64, b: f64) -> f64 {
        let d = self.dim as i32;
        ball_volume(self.dim) * (b.powi(d) - a.powi(d))
    }

    /// `|{h < t}|` (strict) or `|{h <= t}|`.
    fn measure_below(&self, t: f64, inclusive: bool) -> f64 {
        let below = |v: f64| if inclusive { v <= t } else { v < t };
        self.cells()
            .map(|(a, b, ha, hb)| {
                match (below(ha), below(hb)) {
                    (true, true) => self.shell(a, b),
                    (false, false) => 0.0,
                    (ia, _) => {
                        // linear crossing of the level t
                        let x = a + (t - ha) / (hb - ha) * (b - a);
                        let x = x.clamp(a, b);
                        if ia { self.shell(a, x) } else { self.shell(x, b) }
                    }
                }
            })
            .sum()
    }

    /// `int_{h < t} h` plus `c * int_{h = t} h`, used for the objective.
    fn integral_below(&self, t: f64, c: f64) -> f64 {
        let w = self.dim as i32 - 1;
        let omega = sphere_area(self.dim);
        let q = Quadrature::with_tol(1e-13, 1e-12);
        let mut total = 0.0;
        for (a, b, ha, hb) in self.cells() {
            let h = |x: f64| ha + (hb - ha) * (x - a) / (b - a);
            let weight = |x: f64| {
                let v = h(x);
                let g = if v < t { 1.0 } else if v == t { c } else { 0.0 };
                g * v * x.powi(w)
            };
            let mut breaks = Vec::new();
            if (ha - t) * (hb - t) < 0.0 {
                breaks.push(a + (t - ha) / (hb - ha) * (b - a));
            }
            total += q.integrate_with_breaks(&weight, a, b, &breaks).map(|r| r.value).unwrap_or(f64::NAN);
        }
        omega * total
    }
}

/// Minimises `int g h` over `0 <= g <= 1`, `int g = G`: `g = 1{h < s} + c 1{h = s}`.
pub fn bathtub_minimize(cost: &RadialCost, mass: f64) -> Result<BathtubSolution> {
    if !(mass > 0.0) {
        return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
    }
    let vals = cost.profile.values();
    let (mut lo, mut hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let total = cost.measure_below(hi, true);
    if mass > total * (1.0 + 1e-14) {
        return Err(Error::InvalidParameter(format!("mass {mass} exceeds the available measure {total}")));
    }
    // s = sup{t : |{h < t}| <= G}
    if cost.measure_below(lo, true) >= mass {
        hi = lo;
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if cost.measure_below(mid, false) <= mass {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let level = if cost.measure_below(hi, false) <= mass { hi } else { lo };
    let below = cost.measure_below(level, false);
    let at_or_below = cost.measure_below(level, true);
    let level_measure = at_or_below - below;
    let fraction = if level_measure > 1e-12 { ((mass - below) / level_measure).clamp(0.0, 1.0) } else { 0.0 };
    let integral = below + fraction * level_measure;
    let objective = cost.integral_below(level, fraction);
    Ok(BathtubSolution { level, fraction, level_measure, below_measure: below, integral, objective })
}

/// Greedy fill of `cells` equal-radius cells in order of increasing midpoint cost.
/// Returns the fill fraction of each cell.
pub fn bathtub_greedy(cost: &RadialCost, mass: f64, cells: usize) -> Vec<f64> {
    let end = cost.profile.last_radius();
    let width = end / cells as f64;
    let mut order: Vec<(f64, usize, f64)> = (0..cells)
        .map(|i| {
            let (a, b) = (i as f64 * width, (i + 1) as f64 * width);
            (cost.profile_linear(0.5 * (a + b)), i, cost.shell(a, b))
        })
        .collect();
    order.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)));
    let mut fill = vec![0.0; cells];
    let mut left = mass;
    for (_, i, vol) in order {
        if left <= 0.0 {
            break;
        }
        let take = (left / vol).min(1.0);
        fill[i] = take;
        left -= take * vol;
    }
    fill
}

/// `sum_i fill_i int_{cell i} h` for a fill from [`bathtub_greedy`].
pub fn bathtub_greedy_objective(cost: &RadialCost, fill: &[f64]) -> f64 {
    let end = cost.profile.last_radius();
    let width = end / fill.len() as f64;
    let omega = cost.dim as f64 * ball_volume(cost.dim);
    // 3-point Gauss-Legendre per cell on h(r) omega r^{d-1}
    let nodes = [(-(0.6f64).sqrt(), 5.0 / 9.0), (0.0, 8.0 / 9.0), ((0.6f64).sqrt(), 5.0 / 9.0)];
    fill.iter()
        .enumerate()
        .filter(|(_, f)| **f > 0.0)
        .map(|(i, &f)| {
            let (a, b) = (i as f64 * width, (i + 1) as f64 * width);
            let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
            let s: f64 = nodes
                .iter()
                .map(|&(x, w)| {
                    let r = m + h * x;
                    w * cost.profile_linear(r) * omega * r.powi(cost.dim as i32 - 1)
                })
                .sum();
            f * h * s
        })
        .sum()
}

impl RadialCost<'_> {
    /// Piecewise-linear value of the cost.
    pub fn profile_linear(&self, x: f64) -> f64 {
        let r = self.profile.radii();
        let v = self.profile.values();
        let i = match r.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(i) => return v[i],
            Err(0) => return v[0],
            Err(i) if i >= r.len() => return v[r.len() - 1],
            Err(i) => i - 1,
        };
        v[i] + (v[i + 1] - v[i]) * (x - r[i]) / (r[i + 1] - r[i])
    }

    /// `g(x)` for the bathtub solution `sol`.
    pub fn minimiser_value(&self, sol: &BathtubSolution, x: f64) -> f64 {
        let v = self.profile_linear(x);
        if v < sol.level {
            1.0
        } else if v == sol.level {
            sol.fraction
        } else {
            0.0
        }
    }
}

// ---- improvement factor and ball mass -----------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Improvement {
    pub theta: f64,
    pub factor: f64,
    /// `2 - theta / d`, which the factor never exceeds.
    pub bound: f64,
}

/// `theta = (2 nu_d A^d)^-1` and `factor = 1 + (1 - theta)^(1/d)`.
pub fn improvement_factor(d: usize, a_plus: f64) -> Result<Improvement> {
    if d == 0 || !(a_plus > 0.0) {
        return Err(Error::InvalidParameter(format!("need d >= 1 and A > 0 (got {d}, {a_plus})")));
    }
    let mass = 2.0 * ball_volume(d) * a_plus.powi(d as i32);
    if mass <= 1.0 {
        return Err(Error::InvalidParameter(format!("2 nu_d A^d = {mass} must exceed 1")));
    }
    let theta = 1.0 / mass;
    // 1 - (1 - theta)^(1/d) without cancellation
    let drop = -(1.0 / d as f64 * (-theta).ln_1p()).exp_m1();
    let factor = 2.0 - drop;
    let bound = 2.0 - theta / d as f64;
    if factor > bound {
        return Err(Error::InvalidParameter(format!("factor {factor} exceeds 2 - theta/d = {bound}")));
    }
    Ok(Improvement { theta, factor, bound })
}

/// `int_{B_r} f <= -K`, with `K` supplied by the caller.
pub fn ball_mass_bound(f: &FunctionSpec, r: f64, k: f64) -> Result<CertificateResult> {
    let q = integrate(f, RadialWeight::SurfaceMeasure, 0.0, r)?.scaled(sphere_area(f.dim()));
    Ok(CertificateResult::from_margin("ball-mass-bound", -k - q.value, json!({ "r": r, "K": k }))
        .note(format!("int over B_r = {:.12e}", q.value)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::{ClosedKind, EigenExpansion, Interpolation, Sign, Tail};

    #[test]
    fn second_moments() {
        let g = FunctionSpec::closed(1, ClosedKind::Gaussian).unwrap();
        assert!((second_moment(&g).unwrap().value - 1.0 / (2.0 * PI)).abs() < 1e-13);
        let fig = FunctionSpec::closed(1, ClosedKind::SincSq)
            .unwrap()
            .sub(&FunctionSpec::closed(1, ClosedKind::Tent).unwrap())
            .unwrap();
        assert!(matches!(second_moment(&fig), Err(Error::NotIntegrable(_))));
    }

    #[test]
    fn eigen_fixture_has_nonpositive_second_moment() {
        // c0 l_0 + c2 l_2 in d = 1 with f(0) = 0 and f >= 0 near the origin
        let n0 = crate::funcrep::eigen::basis_norm(1, 0);
        let n2 = crate::funcrep::eigen::basis_norm(1, 2);
        let c0 = -0.375 * n2 / n0;
        let e = EigenExpansion::from_parity_coeffs(1, Sign::Plus, &[c0, 1.0]).unwrap();
        let f = FunctionSpec::eigen(e);
        assert!(f.value(0.0).abs() < 1e-15);
        let near = f.value(0.05);
        let f = if near < 0.0 { f.scale(-1.0) } else { f };
        let c = second_moment_certificate(&f, 1e-8).unwrap();
        assert!(c.passed, "{c:?}");
    }

    #[test]
    fn pointwise_bound_values() {
        for &r in &[0.25, 0.4, 0.7] {
            assert!(lemma_two_bound(r, 0.0).unwrap().abs() < 1e-15);
        }
        let want = 0.5 + (0.5f64.sqrt() - 1.0) * 2.0 / PI;
        assert!((lemma_two_bound(0.5, 0.5).unwrap() - want).abs() < 1e-15);
        // the series and direct branches meet
        let (s, d) = (bound_unchecked(0.6, 0.999e-3), bound_unchecked(0.6, 1.001e-3));
        assert!((s - d).abs() < 1e-5);
        assert!(lemma_two_bound(0.8, 0.1).is_err());
        assert!(lemma_two_bound(0.5, 0.6).is_err());
    }

    #[test]
    fn phi_matches_oracles() {
        // oracles: mpmath quad at 30 digits
        for &(r, want) in &[
            (0.595, 0.120_672_350_237_477_49),
            (0.45, 0.025_929_939_006_225_412),
            (0.26, 0.000_149_107_047_282_409_69),
            (0.5, 0.047_917_882_014_368_363),
        ] {
            let p = phi(r).unwrap();
            assert!((p.value - want).abs() < 1e-13, "r={r}: {}", p.value);
            assert!(p.error_estimate < 1e-10);
        }
        assert_eq!(phi(0.25).unwrap().value, 0.0);
    }

    #[test]
    fn import_examples() {
        let c = import_inequality(0.5, 0.25);
        assert!(c.passed && (c.margin - (0.09375 - 0.0625)).abs() < 1e-15);
        assert!(!import_inequality(0.45, 0.121).passed);
        assert!(!import_inequality(0.3, 0.0).passed);
        // increasing in sigma below 1/4
        let r = 0.5;
        let m: Vec<f64> = (0..250).map(|i| import_inequality(r, i as f64 * 1e-3).margin).collect();
        assert!(m.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn step1_examples() {
        let c = step1_contradiction(0.45, 0.595, 0.121).unwrap();
        assert!(c.passed, "{c:?}");
        assert!(!step1_contradiction(0.45, 0.595, 0.25).unwrap().passed);
        // Phi(0.26) > 0 = sigma_bound, so the Phi half of the contract fails
        let b = step1_contradiction(0.26, 0.26, 0.0).unwrap();
        assert!(!b.passed && b.margin < 0.0);
        assert!(step1_contradiction(0.6, 0.5, 0.1).is_err());
    }

    #[test]
    fn bathtub_shells() {
        let (s, t) = bathtub_radii(1, 1.0).unwrap();
        assert!((s - 0.75).abs() < 1e-15 && (t - 1.25).abs() < 1e-15);
        let (s, t) = bathtub_radii(2, 1.0).unwrap();
        assert!((s - (1.0 - 0.5 / PI).sqrt()).abs() < 1e-15 && (t - (1.0 + 0.5 / PI).sqrt()).abs() < 1e-15);
        assert!(matches!(bathtub_radii(3, 0.1), Err(Error::ShellDoesNotFit(_))));
        let g = convexity_gap(1, 1.0).unwrap();
        assert!((g.margin - 0.25).abs() < 1e-12);
        // oracle: exact rational arithmetic at 40 digits
        let g8 = convexity_gap(8, 2f64.sqrt()).unwrap();
        assert!((g8.margin - 0.001_924_884_153_835_496).abs() < 1e-15, "{}", g8.margin);
    }

    #[test]
    fn bathtub_parabola_and_flat_cost() {
        let radii: Vec<f64> = (0..=2000).map(|i| i as f64 * 1e-3).collect();
        let p = SampledProfile::from_fn(radii.clone(), |x| x * x, Interpolation::Linear, Tail::Zero).unwrap();
        let sol = bathtub_minimize(&RadialCost { dim: 1, profile: &p }, 1.0).unwrap();
        assert!((sol.level - 0.25).abs() < 1e-6, "{sol:?}");
        assert!((sol.integral - 1.0).abs() < 1e-10);
        let flat = SampledProfile::from_fn(radii, |_| 3.0, Interpolation::Linear, Tail::Zero).unwrap();
        let sol = bathtub_minimize(&RadialCost { dim: 1, profile: &flat }, 1.0).unwrap();
        assert_eq!(sol.level, 3.0);
        assert!((sol.fraction - 0.25).abs() < 1e-14);
        assert!((sol.objective - 3.0).abs() < 1e-12);
        assert!(bathtub_minimize(&RadialCost { dim: 1, profile: &flat }, 5.0).is_err());
    }

    #[test]
    fn improvement_d12() {
        // oracles: mpmath
        let i = improvement_factor(12, 2f64.sqrt()).unwrap();
        assert!((i.theta - 0.005_850_908_287_289_169_2).abs() < 1e-16);
        assert!((i.factor - 1.999_511_111_885_550_1).abs() < 1e-15);
        assert!(i.factor <= i.bound);
        assert!(improvement_factor(1, 0.1).is_err());
        let far = improvement_factor(4, 1e3).unwrap();
        assert!(far.factor < 2.0 && far.factor > 2.0 - 1e-12);
    }

    #[test]
    fn certificate_json_shape() {
        let c = import_inequality(0.5, 0.25);
        let v: Value = serde_json::from_str(&c.to_json()).unwrap();
        for k in ["name", "passed", "margin", "inputs", "notes"] {
            assert!(v.get(k).is_some());
        }
    }
}

//! Upper bounds for the sign-uncertainty constants by linear programming over
//! radial eigenfunction expansions, with bisection on the radius.

pub mod simplex;

use std::f64::consts::{E, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcrep::eigen::{basis_norm, parity_indices};
use crate::funcrep::{EigenExpansion, Sign};
use crate::signtools::{last_sign_change, SignChangeReport};
use crate::transforms::special::laguerre_all;
pub use simplex::{solve_lp, Constraint, LpOutcome, LpProblem, LpStatus, Relation};

/// Discretisation of the positivity constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    /// Chebyshev points on `[r, R]`.
    pub points: usize,
    /// Spacing of the cutting-plane check grid.
    pub check_step: f64,
    /// Cutting-plane rounds before giving up.
    pub rounds: usize,
    /// `R` is where the summed absolute basis values fall below this.
    pub tail_eps: f64,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams { points: 400, check_step: 2e-3, rounds: 20, tail_eps: 1e-14 }
    }
}

impl GridParams {
    fn refined(&self) -> GridParams {
        GridParams { points: self.points * 2, check_step: self.check_step / 2.0, rounds: self.rounds * 2, ..*self }
    }
}

/// Smallest slack accepted as a strictly positive margin.
pub const SLACK_MIN: f64 = 1e-9;
/// The top coefficient must carry at least this multiple of the slack.
const LEAD_FRACTION: f64 = 1e-3;
/// The cutting-plane check stops here even if the root bound is larger.
const CHECK_LIMIT: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    pub radius: f64,
    pub feasible: bool,
    /// Optimal `t` of the last LP.
    pub slack: f64,
    pub lp: LpOutcome,
    /// Parity-basis coefficients of the candidate.
    pub coeffs: Vec<f64>,
    pub rounds: usize,
    pub constraint_points: usize,
    pub note: Option<String>,
}

/// Basis `k` values without the common Gaussian factor: `n_k L_k(2 pi x^2)`.
struct Basis {
    dim: usize,
    ks: Vec<usize>,
    norms: Vec<f64>,
}

impl Basis {
    fn new(dim: usize, sign: Sign, m: usize) -> Self {
        let ks = parity_indices(sign, m);
        let norms = ks.iter().map(|&k| basis_norm(dim, k)).collect();
        Basis { dim, ks, norms }
    }

    fn row(&self, x: f64) -> Vec<f64> {
        let a = self.dim as f64 / 2.0 - 1.0;
        let top = *self.ks.last().unwrap();
        let l = laguerre_all(top, a, 2.0 * PI * x * x);
        self.ks.iter().zip(&self.norms).map(|(&k, &n)| n * l[k]).collect()
    }

    /// Row scaled to unit max-norm; the positive scale does not change signs.
    fn unit_row(&self, x: f64) -> Vec<f64> {
        let mut r = self.row(x);
        let s = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if s > 0.0 && s.is_finite() {
            for v in &mut r {
                *v /= s;
            }
        }
        r
    }

    /// `log sum_k |l_k(x)|`, including the Gaussian.
    fn log_envelope(&self, x: f64) -> f64 {
        self.row(x).iter().map(|v| v.abs()).sum::<f64>().ln() - PI * x * x
    }

    fn expansion(&self, sign: Sign, coeffs: &[f64]) -> Result<EigenExpansion> {
        EigenExpansion::from_parity_coeffs(self.dim, sign, coeffs)
    }
}

fn chebyshev(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| 0.5 * (a + b) - 0.5 * (b - a) * (PI * (j as f64 + 0.5) / n as f64).cos()).collect()
}

/// Largest radius in `[r, 40]` where the summed basis magnitudes still exceed `eps`.
fn tail_radius(b: &Basis, r: f64, eps: f64) -> f64 {
    let le = eps.ln();
    let mut last = r;
    let mut x = r;
    while x <= 40.0 {
        if b.log_envelope(x) > le {
            last = x;
        }
        x += 0.01;
    }
    last.max(r + 0.5)
}

/// Check grid for cutting planes: uniform up to `big_r`, then geometric to `end`.
fn check_grid(r: f64, big_r: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((big_r - r) / step).ceil().max(1.0) as usize;
    let mut g: Vec<f64> = (0..=n).map(|i| r + (big_r - r) * i as f64 / n as f64).collect();
    let mut x = big_r;
    while x < end {
        x *= 1.0 + step;
        g.push(x.min(end));
    }
    g
}

fn build_lp(b: &Basis, sign: Sign, points: &[f64], origin: &[f64]) -> LpProblem {
    let m = b.ks.len();
    let n = m + 1; // coefficients, then t
    let mut p = LpProblem::new(n);
    p.objective[m] = 1.0;
    for j in 0..m {
        p.bounds[j] = (-1.0, 1.0);
    }
    p.bounds[m] = (0.0, 1.0);
    let rows: Vec<Vec<f64>> = points.par_iter().map(|&x| b.unit_row(x)).collect();
    for row in rows {
        // f(x)/scale - t >= 0
        let mut c = row;
        c.push(-1.0);
        p.push(c, Relation::Ge, 0.0);
    }
    let mut eq = origin.to_vec();
    eq.push(0.0);
    p.push(eq, Relation::Eq, 0.0);
    // eventual sign: (-1)^k_top c_top >= LEAD_FRACTION t
    let top = *b.ks.last().unwrap();
    let mut lead = vec![0.0; n];
    lead[m - 1] = if top % 2 == 0 { 1.0 } else { -1.0 };
    lead[m] = -LEAD_FRACTION;
    p.push(lead, Relation::Ge, 0.0);
    let _ = sign;
    p
}

/// Golden-section search for the minimum of the normalised value on `[lo, hi]`,
/// starting from the grid point `(x0, v0)`.
fn polish_minimum(cand: &EigenExpansion, lo: f64, hi: f64, x0: f64, v0: f64) -> (f64, f64) {
    let f = |x: f64| {
        let (v, abs) = cand.sign_value_with_noise(x);
        if abs > 0.0 { v / abs } else { 0.0 }
    };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = (x0, v0);
    for _ in 0..48 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        for (x, v) in [(c, fc), (d, fd)] {
            if v < best.1 {
                best = (x, v);
            }
        }
    }
    best
}

/// LP feasibility of an `s`-eigenfunction with `f(0) = 0` and `f >= 0` past `r`,
/// using `m` parity-matching basis functions.
pub fn feasibility_at_radius(d: usize, s: Sign, r: f64, m: usize, grid: &GridParams) -> Result<Feasibility> {
    if d == 0 || m < 2 {
        return Err(Error::InvalidParameter(format!("need d >= 1 and at least two basis functions (d={d}, m={m})")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    let b = Basis::new(d, s, m);
    let big_r = tail_radius(&b, r, grid.tail_eps);
    let mut points = vec![r];
    points.extend(chebyshev(r, big_r, grid.points));
    points.push(big_r);
    let origin = b.unit_row(0.0);

    let mut rounds = 0;
    loop {
        let p = build_lp(&b, s, &points, &origin);
        let lp = solve_lp(&p)?;
        let slack = if lp.status == LpStatus::Optimal { lp.solution[m].max(0.0) } else { 0.0 };
        let coeffs: Vec<f64> = if lp.status == LpStatus::Optimal { lp.solution[..m].to_vec() } else { vec![0.0; m] };
        let npts = points.len();
        let done = move |feasible: bool, note: Option<String>, lp: LpOutcome, coeffs: Vec<f64>, rounds: usize| Feasibility {
            radius: r,
            feasible,
            slack,
            lp,
            coeffs,
            rounds,
            constraint_points: npts,
            note,
        };
        if lp.status == LpStatus::Stalled {
            return Err(Error::Lp(format!("simplex stalled after {} pivots at r = {r}", lp.iterations)));
        }
        if lp.status != LpStatus::Optimal || slack <= SLACK_MIN {
            return Ok(done(false, None, lp, coeffs, rounds));
        }
        // cutting planes: negative local minima on a fine grid out to the root bound
        let cand = b.expansion(s, &coeffs)?;
        let end = cand.root_bound_radius().unwrap_or(big_r).clamp(big_r, CHECK_LIMIT.max(big_r));
        let fine = check_grid(r, big_r, end, grid.check_step);
        let vals: Vec<f64> = fine
            .par_iter()
            .map(|&x| {
                let (v, abs) = cand.sign_value_with_noise(x);
                if abs > 0.0 { v / abs } else { 0.0 }
            })
            .collect();
        let minima: Vec<usize> = (0..vals.len())
            .filter(|&i| {
                let left = if i == 0 { f64::INFINITY } else { vals[i - 1] };
                let right = if i + 1 == vals.len() { f64::INFINITY } else { vals[i + 1] };
                vals[i] <= left && vals[i] <= right
            })
            .collect();
        // dips near double roots can be narrower than the grid: polish every local minimum
        let bad: Vec<f64> = minima
            .par_iter()
            .filter_map(|&i| {
                let lo = fine[i.saturating_sub(1)];
                let hi = fine[(i + 1).min(fine.len() - 1)];
                let (x, v) = polish_minimum(&cand, lo, hi, fine[i], vals[i]);
                (v < 0.0).then_some(x)
            })
            .collect();
        if bad.is_empty() {
            return Ok(done(true, None, lp, coeffs, rounds));
        }
        rounds += 1;
        if rounds >= grid.rounds {
            let note = format!("{} negative local minima remain after {rounds} rounds", bad.len());
            return Ok(done(false, Some(note), lp, coeffs, rounds));
        }
        points.extend(bad);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub r: f64,
    pub slack: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub dim: usize,
    pub sign: Sign,
    /// Coefficients on `l_0, l_1, ...` (zeros on the wrong parity).
    pub coeffs: Vec<f64>,
}

impl Candidate {
    pub fn expansion(&self) -> Result<EigenExpansion> {
        EigenExpansion::new(self.dim, self.sign, self.coeffs.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub sign: Sign,
    pub dimension: usize,
    pub degree: usize,
    pub r_upper: f64,
    pub candidate: Candidate,
    pub verification: SignChangeReport,
    pub bisection_trace: Vec<TraceRow>,
    pub grid: GridParams,
}

impl SearchResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("search result serialises")
    }

    pub fn trace_csv(&self) -> String {
        let mut s = String::from("r,slack_t,feasible\n");
        for t in &self.bisection_trace {
            s.push_str(&format!("{},{},{}\n", t.r, t.slack, t.feasible));
        }
        s
    }
}

/// Default bracket around the asymptotic window `sqrt(d / (2 pi e)) .. sqrt(d / (2 pi))`,
/// widened for small `d`.
pub fn default_bracket(d: usize) -> (f64, f64) {
    let df = d as f64;
    ((df / (2.0 * PI * E)).sqrt(), 2.0 * ((df + 2.0) / (2.0 * PI)).sqrt().max(0.75))
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub tol: f64,
    pub grid: GridParams,
    pub bracket: Option<(f64, f64)>,
    pub max_depth: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { tol: 1e-3, grid: GridParams::default(), bracket: None, max_depth: 30 }
    }
}

/// Bisection for the smallest feasible radius, then verification of the candidate's `r`.
pub fn bisect_min_radius(d: usize, s: Sign, m: usize, opts: &SearchOptions) -> Result<SearchResult> {
    match bisect_once(d, s, m, opts, &opts.grid) {
        Err(Error::Search(why)) if why.starts_with("verification") => {
            let finer = opts.grid.refined();
            bisect_once(d, s, m, opts, &finer)
                .map_err(|e| Error::Search(format!("{why}; retry on a finer grid failed too: {e}")))
        }
        other => other,
    }
}

fn bisect_once(d: usize, s: Sign, m: usize, opts: &SearchOptions, grid: &GridParams) -> Result<SearchResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let (mut lo, mut hi) = opts.bracket.unwrap_or_else(|| default_bracket(d));
    if !(0.0 < lo && lo < hi) {
        return Err(Error::InvalidParameter(format!("invalid bracket [{lo}, {hi}]")));
    }
    let mut trace = Vec::new();
    let record = |f: &Feasibility, trace: &mut Vec<TraceRow>| {
        trace.push(TraceRow { r: f.radius, slack: f.slack, feasible: f.feasible });
    };
    let mut best = feasibility_at_radius(d, s, hi, m, grid)?;
    record(&best, &mut trace);
    let mut widen = 0;
    while !best.feasible {
        widen += 1;
        if widen > 4 || opts.bracket.is_some() {
            return Err(Error::Search(format!("upper end {hi} of the bracket is infeasible at m = {m}")));
        }
        lo = hi;
        hi *= 1.5;
        best = feasibility_at_radius(d, s, hi, m, grid)?;
        record(&best, &mut trace);
    }
    let low = feasibility_at_radius(d, s, lo, m, grid)?;
    record(&low, &mut trace);
    if low.feasible {
        return Err(Error::Search(format!("lower end {lo} of the bracket is already feasible")));
    }
    let mut depth = 0;
    while hi - lo > opts.tol && depth < opts.max_depth {
        let mid = 0.5 * (lo + hi);
        let f = feasibility_at_radius(d, s, mid, m, grid)?;
        record(&f, &mut trace);
        if f.feasible {
            hi = mid;
            best = f;
        } else {
            lo = mid;
        }
        depth += 1;
    }
    let b = Basis::new(d, s, m);
    let exp = b.expansion(s, &best.coeffs)?;
    let verification = last_sign_change(&crate::funcrep::FunctionSpec::eigen(exp.clone()), 1e-9)?;
    if verification.radius > hi + 1e-6 {
        return Err(Error::Search(format!(
            "verification: candidate at r = {hi} has r(f) = {} (grid too coarse)",
            verification.radius
        )));
    }
    Ok(SearchResult {
        sign: s,
        dimension: d,
        degree: m,
        r_upper: hi,
        candidate: Candidate { dim: d, sign: s, coeffs: exp.coeffs().to_vec() },
        verification,
        bisection_trace: trace,
        grid: *grid,
    })
}

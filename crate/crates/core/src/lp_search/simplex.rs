//! Dense two-phase tableau simplex.
//!
//! Dantzig pricing until the objective stalls, then Bland's rule for the rest of
//! the phase, which rules out cycling.
//!
//! The tableau works on the dual problem: the problems here have a few dozen
//! variables and hundreds of rows, so the dual basis is small and stays well
//! conditioned. The primal vertex is recovered by re-solving the active rows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// Maximise `objective . x` subject to the rows and `lo <= x <= hi` (infinite bounds allowed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    Stalled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub objective_value: f64,
    pub solution: Vec<f64>,
    pub iterations: usize,
}

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;
const STALL_PIVOTS: usize = 64;
const PERTURB: f64 = 1e-10;
/// Feasibility tolerance of returned optimal points, relative to `1 + max|x|`.
const FEAS_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITERATIONS: usize = 200_000;

impl LpProblem {
    pub fn new(n: usize) -> Self {
        LpProblem { objective: vec![0.0; n], constraints: Vec::new(), bounds: vec![(0.0, f64::INFINITY); n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::Lp(format!("{} bounds for {n} variables", self.bounds.len())));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::Lp(format!("row {i} has {} coefficients, expected {n}", c.coeffs.len())));
            }
            if c.coeffs.iter().any(|v| !v.is_finite()) || !c.rhs.is_finite() {
                return Err(Error::Lp(format!("row {i} has a non-finite entry")));
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::Lp("non-finite objective".into()));
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(Error::Lp(format!("invalid bounds [{lo}, {hi}] on variable {j}")));
            }
        }
        Ok(())
    }

    /// Largest violation of rows and bounds at `x`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.constraints {
            let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
            let v = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (&xi, &(lo, hi)) in x.iter().zip(&self.bounds) {
            worst = worst.max(lo - xi).max(xi - hi);
        }
        worst
    }
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// `rows x (cols + 1)`, last column is the right-hand side
    t: Vec<f64>,
    basis: Vec<usize>,
    /// reduced-cost row, length `cols + 1` (last entry: minus the objective)
    z: Vec<f64>,
    eligible: Vec<bool>,
    iterations: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.t[pr * w + pc];
        for v in &mut self.t[pr * w..(pr + 1) * w] {
            *v /= p;
        }
        let prow: Vec<f64> = self.t[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.t[r * w + pc];
            if f != 0.0 {
                for (v, &q) in self.t[r * w..(r + 1) * w].iter_mut().zip(&prow) {
                    *v -= f * q;
                }
                self.t[r * w + pc] = 0.0;
            }
        }
        let f = self.z[pc];
        if f != 0.0 {
            for (v, &q) in self.z.iter_mut().zip(&prow) {
                *v -= f * q;
            }
            self.z[pc] = 0.0;
        }
        self.basis[pr] = pc;
        self.iterations += 1;
    }

    /// Sets the reduced-cost row for maximising `cost . y`.
    fn set_objective(&mut self, cost: &[f64]) {
        self.z = vec![0.0; self.cols + 1];
        for (j, &c) in cost.iter().enumerate() {
            self.z[j] = -c;
        }
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for j in 0..=self.cols {
                    self.z[j] += cb * self.at(r, j);
                }
            }
        }
    }

    fn objective(&self) -> f64 {
        self.z[self.cols]
    }

    /// Runs to optimality (or until the objective reaches `stop_at`); `Ok(false)` means unbounded.
    fn optimise(&mut self, cap: usize, stop_at: Option<f64>) -> std::result::Result<bool, ()> {
        let mut bland = false;
        let mut best = self.objective();
        let mut since = 0usize;
        loop {
            if stop_at.is_some_and(|s| self.objective() >= s) {
                return Ok(true);
            }
            if self.iterations >= cap {
                return Err(());
            }
            let entering = if bland {
                (0..self.cols).find(|&j| self.eligible[j] && self.z[j] < -COST_EPS)
            } else {
                let mut pick = None;
                let mut most = -COST_EPS;
                for j in 0..self.cols {
                    if self.eligible[j] && self.z[j] < most {
                        most = self.z[j];
                        pick = Some(j);
                    }
                }
                pick
            };
            let Some(pc) = entering else { return Ok(true) };
            // two-pass ratio test: minimum ratio, then the largest pivot among near-ties
            // (smallest basic index under Bland's rule)
            let mut min_ratio = f64::INFINITY;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > PIVOT_EPS {
                    min_ratio = min_ratio.min(self.rhs(r).max(0.0) / a);
                }
            }
            let mut leave: Option<(usize, f64)> = None;
            if min_ratio.is_finite() {
                let slack = 1e-12 * min_ratio.max(1.0);
                for r in 0..self.rows {
                    let a = self.at(r, pc);
                    if a > PIVOT_EPS && self.rhs(r).max(0.0) / a <= min_ratio + slack {
                        let better = match leave {
                            None => true,
                            Some((lr, la)) => {
                                if bland { self.basis[r] < self.basis[lr] } else { a > la }
                            }
                        };
                        if better {
                            leave = Some((r, a));
                        }
                    }
                }
            }
            let Some((pr, _)) = leave else { return Ok(false) };
            self.pivot(pr, pc);
            let obj = self.objective();
            if obj > best + 1e-12 * best.abs().max(1.0) {
                best = obj;
                since = 0;
            } else {
                since += 1;
                if since >= STALL_PIVOTS {
                    bland = true;
                }
            }
        }
    }
}

/// Solves with the default iteration cap.
pub fn solve_lp(p: &LpProblem) -> Result<LpOutcome> {
    solve_lp_capped(p, DEFAULT_MAX_ITERATIONS)
}

/// Primal rows in the form `g . x <= h` (equalities kept apart), bounds included.
struct Rows {
    le: Vec<(Vec<f64>, f64)>,
    eq: Vec<(Vec<f64>, f64)>,
}

fn primal_rows(p: &LpProblem) -> Rows {
    let n = p.num_vars();
    let mut le = Vec::new();
    let mut eq = Vec::new();
    for c in &p.constraints {
        match c.relation {
            Relation::Le => le.push((c.coeffs.clone(), c.rhs)),
            Relation::Ge => le.push((c.coeffs.iter().map(|v| -v).collect(), -c.rhs)),
            Relation::Eq => eq.push((c.coeffs.clone(), c.rhs)),
        }
    }
    for (j, &(lo, hi)) in p.bounds.iter().enumerate() {
        let unit = |s: f64| {
            let mut v = vec![0.0; n];
            v[j] = s;
            v
        };
        if lo == hi {
            eq.push((unit(1.0), lo));
            continue;
        }
        if lo.is_finite() {
            le.push((unit(-1.0), -lo));
        }
        if hi.is_finite() {
            le.push((unit(1.0), hi));
        }
    }
    Rows { le, eq }
}

enum DualEnd {
    /// final basis (column indices) and the row sign flips
    Optimal { basis: Vec<usize>, flips: Vec<f64> },
    Infeasible,
    Unbounded,
    Stalled,
}

/// Maximises `-(h . y)` over `G^T y + E^T (w+ - w-) = c`, `y, w+, w- >= 0`.
/// Columns: `le` rows, then `+eq`, then `-eq`, then one artificial per row.
fn solve_dual(rows: &Rows, c: &[f64], cap: usize, iterations: &mut usize) -> DualEnd {
    let n = c.len();
    let (nl, ne) = (rows.le.len(), rows.eq.len());
    let nstruct = nl + 2 * ne;
    let cols = nstruct + n;
    let w = cols + 1;
    let mut t = vec![0.0; n * w];
    let mut flips = vec![1.0; n];
    for i in 0..n {
        let f = if c[i] < 0.0 { -1.0 } else { 1.0 };
        flips[i] = f;
        for (j, (g, _)) in rows.le.iter().enumerate() {
            t[i * w + j] = f * g[i];
        }
        for (j, (e, _)) in rows.eq.iter().enumerate() {
            t[i * w + nl + j] = f * e[i];
            t[i * w + nl + ne + j] = -f * e[i];
        }
        t[i * w + nstruct + i] = 1.0;
        t[i * w + cols] = f * c[i];
    }
    let basis = (nstruct..cols).collect();
    let mut tab = Tableau { rows: n, cols, t, basis, z: Vec::new(), eligible: vec![true; cols], iterations: 0 };

    let mut cost = vec![0.0; cols];
    for c in cost.iter_mut().skip(nstruct) {
        *c = -1.0;
    }
    tab.set_objective(&cost);
    let scale = c.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let phase1 = tab.optimise(cap, Some(-1e-13 * scale));
    *iterations = tab.iterations;
    if phase1.is_err() {
        return DualEnd::Stalled;
    }
    if tab.objective() < -1e-9 * scale {
        return DualEnd::Infeasible;
    }
    for r in 0..n {
        if tab.basis[r] >= nstruct {
            let pc = (0..nstruct)
                .filter(|&j| tab.at(r, j).abs() > 1e-7)
                .max_by(|&a, &b| tab.at(r, a).abs().partial_cmp(&tab.at(r, b).abs()).unwrap());
            if let Some(pc) = pc {
                tab.pivot(r, pc);
            }
        }
    }
    for j in nstruct..cols {
        tab.eligible[j] = false;
    }
    let mut cost = vec![0.0; cols];
    for (j, (_, h)) in rows.le.iter().enumerate() {
        cost[j] = -h;
    }
    for (j, (_, e)) in rows.eq.iter().enumerate() {
        cost[nl + j] = -e;
        cost[nl + ne + j] = *e;
    }
    tab.set_objective(&cost);
    let phase2 = tab.optimise(cap, None);
    *iterations = tab.iterations;
    match phase2 {
        Err(()) => DualEnd::Stalled,
        Ok(false) => DualEnd::Unbounded,
        Ok(true) => DualEnd::Optimal { basis: tab.basis, flips },
    }
}

/// Primal point from the optimal dual basis: each basic dual column is a primal
/// row that holds with equality. A leftover artificial fixes its coordinate's
/// multiplier at zero.
fn primal_point(rows: &Rows, n: usize, basis: &[usize], flips: &[f64]) -> Option<Vec<f64>> {
    let (nl, ne) = (rows.le.len(), rows.eq.len());
    let nstruct = nl + 2 * ne;
    // B^T pi = cost_B with B the (flipped) basic columns; x = -F pi
    let mut a = vec![0.0; n * (n + 1)];
    let mw = n + 1;
    for (k, &col) in basis.iter().enumerate() {
        let (g, rhs, sign) = if col < nl {
            (&rows.le[col].0, rows.le[col].1, 1.0)
        } else if col < nl + ne {
            (&rows.eq[col - nl].0, rows.eq[col - nl].1, 1.0)
        } else if col < nstruct {
            (&rows.eq[col - nl - ne].0, rows.eq[col - nl - ne].1, -1.0)
        } else {
            // artificial: unit column, zero cost
            let i = col - nstruct;
            a[k * mw + i] = 1.0;
            continue;
        };
        for i in 0..n {
            a[k * mw + i] = sign * flips[i] * g[i];
        }
        a[k * mw + n] = -sign * rhs;
    }
    let pi = lu_solve(&mut a, n)?;
    Some(pi.iter().zip(flips).map(|(p, f)| -f * p).collect())
}

/// Solves the `m x m` system stored row-major with the right-hand side as the last column.
fn lu_solve(a: &mut [f64], m: usize) -> Option<Vec<f64>> {
    let mw = m + 1;
    for k in 0..m {
        let p = (k..m).max_by(|&i, &j| a[i * mw + k].abs().partial_cmp(&a[j * mw + k].abs()).unwrap())?;
        if a[p * mw + k].abs() < 1e-14 {
            return None;
        }
        if p != k {
            for j in 0..mw {
                a.swap(k * mw + j, p * mw + j);
            }
        }
        let piv = a[k * mw + k];
        let prow: Vec<f64> = a[k * mw + k..(k + 1) * mw].to_vec();
        for i in k + 1..m {
            let f = a[i * mw + k] / piv;
            if f != 0.0 {
                for (v, &q) in a[i * mw + k..(i + 1) * mw].iter_mut().zip(&prow) {
                    *v -= f * q;
                }
            }
        }
    }
    let mut x = vec![0.0; m];
    for k in (0..m).rev() {
        let mut s = a[k * mw + m];
        for j in k + 1..m {
            s -= a[k * mw + j] * x[j];
        }
        x[k] = s / a[k * mw + k];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Distinct tiny objective tilts break the degeneracy of the dual right-hand side.
fn perturbed(c: &[f64]) -> Vec<f64> {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    c.iter()
        .enumerate()
        .map(|(i, &v)| v + PERTURB * scale * (1.0 + (i as f64 * 0.618_033_988_749_895).fract()))
        .collect()
}

pub fn solve_lp_capped(p: &LpProblem, max_iterations: usize) -> Result<LpOutcome> {
    p.validate()?;
    let n = p.num_vars();
    let rows = primal_rows(p);
    let mut iterations = 0;
    let nan = |status, iterations| LpOutcome { status, objective_value: f64::NAN, solution: vec![f64::NAN; n], iterations };

    let mut end = DualEnd::Infeasible;
    for c in [perturbed(&p.objective), p.objective.clone()] {
        let mut it = 0;
        end = solve_dual(&rows, &c, max_iterations, &mut it);
        iterations += it;
        if let DualEnd::Optimal { basis, flips } = &end {
            if let Some(x) = primal_point(&rows, n, basis, flips) {
                let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if p.violation(&x) <= FEAS_TOL * scale {
                    let value = p.objective.iter().zip(&x).map(|(a, b)| a * b).sum();
                    return Ok(LpOutcome { status: LpStatus::Optimal, objective_value: value, solution: x, iterations });
                }
            }
        }
    }
    match end {
        DualEnd::Stalled => Ok(nan(LpStatus::Stalled, iterations)),
        DualEnd::Unbounded => Ok(nan(LpStatus::Infeasible, iterations)),
        DualEnd::Optimal { .. } => Ok(nan(LpStatus::Stalled, iterations)),
        DualEnd::Infeasible => {
            // primal is unbounded or infeasible; a zero objective tells them apart
            let mut it = 0;
            let zero = solve_dual(&rows, &vec![0.0; n], max_iterations, &mut it);
            iterations += it;
            match zero {
                DualEnd::Unbounded => Ok(nan(LpStatus::Infeasible, iterations)),
                DualEnd::Stalled => Ok(nan(LpStatus::Stalled, iterations)),
                _ => Ok(LpOutcome {
                    status: LpStatus::Unbounded,
                    objective_value: f64::INFINITY,
                    solution: vec![f64::NAN; n],
                    iterations,
                }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_upper_bound() {
        let mut p = LpProblem::new(1);
        p.objective[0] = 1.0;
        p.push(vec![1.0], Relation::Le, 1.0);
        let o = solve_lp(&p).unwrap();
        assert_eq!(o.status, LpStatus::Optimal);
        assert!((o.objective_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_pair() {
        let mut p = LpProblem::new(1);
        p.push(vec![1.0], Relation::Le, 0.0);
        p.push(vec![1.0], Relation::Ge, 1.0);
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut p = LpProblem::new(2);
        p.objective = vec![1.0, 1.0];
        p.push(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn textbook_example_with_free_and_boxed_variables() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x in [-1, 3], y free
        let mut p = LpProblem::new(2);
        p.objective = vec![3.0, 2.0];
        p.bounds = vec![(-1.0, 3.0), (f64::NEG_INFINITY, f64::INFINITY)];
        p.push(vec![1.0, 1.0], Relation::Le, 4.0);
        p.push(vec![1.0, 3.0], Relation::Le, 6.0);
        let o = solve_lp(&p).unwrap();
        assert_eq!(o.status, LpStatus::Optimal);
        assert!((o.objective_value - 11.0).abs() < 1e-10, "{o:?}");
        assert!(p.violation(&o.solution) < 1e-9);
    }

    #[test]
    fn equality_and_degenerate_rows() {
        // max x2 with x1 + x2 = 1, many redundant zero-rhs rows
        let mut p = LpProblem::new(2);
        p.objective = vec![0.0, 1.0];
        p.push(vec![1.0, 1.0], Relation::Eq, 1.0);
        for k in 0..20 {
            p.push(vec![-(k as f64), 0.0], Relation::Le, 0.0);
        }
        let o = solve_lp(&p).unwrap();
        assert!((o.objective_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let mut p = LpProblem::new(2);
        p.push(vec![1.0], Relation::Le, 1.0);
        assert!(solve_lp(&p).is_err());
    }
}

//! Property checks shared by the proptest suite and the acceptance run.
#![allow(dead_code)]

use proptest::prelude::*;

use signlab::constructions::{mollify_bandlimit, schwartz_smooth};
use signlab::funcrep::{ClosedForm, ClosedKind, EigenExpansion, FunctionSpec, Sign};
use signlab::lp_search::simplex::{solve_lp, LpProblem, LpStatus, Relation};
use signlab::signtools::last_sign_change;
use signlab::transforms::{fourier_transform, hankel_point};

pub fn grid(end: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| end * i as f64 / n as f64).collect()
}

fn closed(dim: usize, kind: ClosedKind, amplitude: f64, dilation: f64) -> FunctionSpec {
    FunctionSpec::closed_form(dim, ClosedForm { kind, amplitude, dilation }).unwrap()
}

// ---- strategies ---------------------------------------------------------

/// Catalog functions valid in `dim`, with random amplitude and dilation.
fn catalog_term(dim: usize) -> impl Strategy<Value = FunctionSpec> {
    let kinds: Vec<ClosedKind> = if dim == 1 {
        vec![ClosedKind::Gaussian, ClosedKind::Tent, ClosedKind::SincSq, ClosedKind::Prop1Minimizer, ClosedKind::BumpAutocorr]
    } else {
        vec![ClosedKind::Gaussian, ClosedKind::IndicatorBallAutocorr, ClosedKind::ChiHat]
    };
    (prop::sample::select(kinds), -2.0..2.0f64, 0.5..2.0f64).prop_map(move |(k, a, l)| closed(dim, k, a, l))
}

pub fn eigen_expansion() -> impl Strategy<Value = EigenExpansion> {
    (1usize..=6, prop::bool::ANY, prop::collection::vec(-1.0..1.0f64, 1..8)).prop_map(|(d, plus, c)| {
        let s = if plus { Sign::Plus } else { Sign::Minus };
        EigenExpansion::from_parity_coeffs(d, s, &c).unwrap()
    })
}

/// Sums of catalog terms and eigen expansions in a common dimension.
pub fn radial_function() -> impl Strategy<Value = FunctionSpec> {
    (1usize..=4).prop_flat_map(|d| {
        let eig = (prop::bool::ANY, prop::collection::vec(-1.0..1.0f64, 1..6)).prop_map(move |(plus, c)| {
            let s = if plus { Sign::Plus } else { Sign::Minus };
            FunctionSpec::eigen(EigenExpansion::from_parity_coeffs(d, s, &c).unwrap())
        });
        (prop::collection::vec(catalog_term(d), 1..4), eig)
            .prop_map(|(terms, e)| terms.into_iter().fold(e, |acc, t| acc.add(&t).unwrap()))
    })
}

// ---- checks -------------------------------------------------------------

fn max_dev(xs: &[f64], a: impl Fn(f64) -> f64, b: impl Fn(f64) -> f64) -> f64 {
    xs.iter().map(|&x| (a(x) - b(x)).abs()).fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) })
}

/// `F(F f) = f` for even functions, relative to `max |f|` on the grid.
pub fn check_involution(f: &FunctionSpec) -> Result<(), String> {
    let back = fourier_transform(&fourier_transform(f).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let xs = grid(4.0, 80);
    let scale = xs.iter().map(|&x| f.value(x).abs()).fold(1.0, f64::max);
    let dev = max_dev(&xs, |x| back.value(x), |x| f.value(x));
    if dev <= 1e-12 * scale {
        Ok(())
    } else {
        Err(format!("F F f deviates by {dev:e}"))
    }
}

/// The symbolic transform of an expansion is `s f`, and Hankel quadrature agrees.
pub fn check_eigen_parity(e: &EigenExpansion) -> Result<(), String> {
    let f = FunctionSpec::eigen(e.clone());
    let fhat = fourier_transform(&f).map_err(|e| e.to_string())?;
    let s = e.sign().value();
    let xs = grid(3.0, 30);
    let structural = max_dev(&xs, |x| fhat.value(x), |x| s * f.value(x));
    if structural != 0.0 {
        return Err(format!("structural transform differs from s f by {structural:e}"));
    }
    for &x in &[0.0, 0.45, 1.3] {
        let q = hankel_point(&f, x).map_err(|e| e.to_string())?;
        let scale = 1.0 + e.coeffs().iter().map(|c| c.abs()).sum::<f64>();
        if (q.value - s * f.value(x)).abs() > 1e-8 * scale {
            return Err(format!("quadrature at {x}: {} vs {}", q.value, s * f.value(x)));
        }
    }
    Ok(())
}

/// `r(f(lambda .)) = r(f) / lambda`.
pub fn check_dilation(f: &FunctionSpec, lambda: f64) -> Result<(), String> {
    let r = last_sign_change(f, 1e-10).map_err(|e| e.to_string())?.radius;
    let g = f.dilate(lambda).map_err(|e| e.to_string())?;
    let rl = last_sign_change(&g, 1e-10).map_err(|e| e.to_string())?.radius;
    if (rl - r / lambda).abs() <= 1e-6 * (1.0 + r / lambda) {
        Ok(())
    } else {
        Err(format!("r = {r}, lambda = {lambda}, r(f(lambda .)) = {rl}"))
    }
}

/// Dilation fixtures in one dimension with a known last sign change.
pub fn dilation_fixture() -> impl Strategy<Value = FunctionSpec> {
    prop_oneof![
        Just(FunctionSpec::closed(1, ClosedKind::SincSq).unwrap().sub(&FunctionSpec::closed(1, ClosedKind::Tent).unwrap()).unwrap()),
        Just(FunctionSpec::closed(1, ClosedKind::Prop1Minimizer).unwrap()),
        Just(FunctionSpec::eigen(EigenExpansion::from_parity_coeffs(3, Sign::Plus, &[-1.0, 0.0, 0.2]).unwrap())),
    ]
}

/// Mollifying a nonnegative function keeps it nonnegative, and the transform
/// `hat f phi_delta` has the sign of `hat f` pointwise.
pub fn check_mollifier(f: &FunctionSpec, delta: f64) -> Result<(), String> {
    let m = mollify_bandlimit(f, delta).map_err(|e| e.to_string())?;
    let fhat = fourier_transform(f).map_err(|e| e.to_string())?;
    let mhat = fourier_transform(&m.function).map_err(|e| e.to_string())?;
    for x in grid(3.0, 12) {
        let v = m.function.value(x);
        if v < -1e-12 {
            return Err(format!("mollified value {v:e} at {x}"));
        }
    }
    for xi in grid(1.8 / delta, 40) {
        let (a, b) = (fhat.value(xi), mhat.value(xi));
        if b != 0.0 && a.signum() != b.signum() {
            return Err(format!("sign flip of the transform at {xi}: {a:e} vs {b:e}"));
        }
    }
    Ok(())
}

/// Nonnegative one-dimensional inputs for the mollifier.
pub fn nonnegative_function() -> impl Strategy<Value = FunctionSpec> {
    (prop::collection::vec((prop::sample::select(vec![ClosedKind::Gaussian, ClosedKind::Tent, ClosedKind::SincSq]), 0.1..2.0f64, 0.5..2.0f64), 1..3))
        .prop_map(|terms| {
            let parts: Vec<(f64, FunctionSpec)> = terms.into_iter().map(|(k, a, l)| (1.0, closed(1, k, a, l))).collect();
            FunctionSpec::linear_combination(parts).unwrap()
        })
}

/// `hat h = h` for the Schwartz smoothing of a +1 eigenfunction with `f(0) < 0`.
pub fn check_schwartz(f: &FunctionSpec, delta: f64) -> Result<(), String> {
    let h = schwartz_smooth(f, delta).map_err(|e| e.to_string())?;
    let hhat = fourier_transform(&h).map_err(|e| e.to_string())?;
    let xs = grid(5.0, 20);
    let scale = xs.iter().map(|&x| h.value(x).abs()).fold(0.0, f64::max);
    let dev = max_dev(&xs, |x| hhat.value(x), |x| h.value(x));
    if dev <= 1e-7 * scale.max(1.0) && h.value(0.0) < 0.0 {
        Ok(())
    } else {
        Err(format!("self-duality defect {dev:e}, h(0) = {}", h.value(0.0)))
    }
}

pub fn schwartz_input() -> impl Strategy<Value = FunctionSpec> {
    (-0.4..0.4f64, -0.2..0.2f64).prop_map(|(a, b)| {
        FunctionSpec::eigen(EigenExpansion::from_parity_coeffs(1, Sign::Plus, &[-1.0, a, b]).unwrap())
    })
}

// ---- LP oracle ----------------------------------------------------------

/// A random LP with `rows` constraints over `vars` bounded variables; `feasible`
/// builds the right-hand sides around an interior point.
pub fn random_lp(rows: usize, vars: usize, feasible: bool) -> impl Strategy<Value = LpProblem> {
    let row = (prop::collection::vec(-1.0..1.0f64, vars), 0usize..5, 0.0..1.0f64);
    (prop::collection::vec(-1.0..1.0f64, vars), prop::collection::vec(-0.9..0.9f64, vars), prop::collection::vec(row, rows))
        .prop_map(move |(obj, x0, rows)| {
            let mut p = LpProblem::new(vars);
            p.objective = obj;
            p.bounds = vec![(-1.0, 1.0); vars];
            for (i, (a, kind, slack)) in rows.into_iter().enumerate() {
                let ax: f64 = a.iter().zip(&x0).map(|(u, v)| u * v).sum();
                let (rel, rhs) = match kind {
                    0 => (Relation::Eq, ax),
                    1 | 2 => (Relation::Ge, ax - slack),
                    _ => (Relation::Le, ax + slack),
                };
                p.push(a, rel, rhs);
                if !feasible && i == 0 {
                    // a row and its negation pushed past each other
                    let a = p.constraints[0].coeffs.clone();
                    p.push(a.iter().map(|v| -v).collect(), Relation::Ge, -ax + 0.5);
                    p.push(a, Relation::Ge, ax + 0.5);
                }
            }
            p
        })
}

pub fn minilp_solve(p: &LpProblem) -> Result<f64, minilp::Error> {
    use minilp::{ComparisonOp, OptimizationDirection, Problem};
    let mut q = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = p.objective.iter().zip(&p.bounds).map(|(&c, &b)| q.add_var(c, b)).collect();
    for c in &p.constraints {
        let expr: Vec<_> = vars.iter().copied().zip(c.coeffs.iter().copied()).collect();
        let op = match c.relation {
            Relation::Le => ComparisonOp::Le,
            Relation::Ge => ComparisonOp::Ge,
            Relation::Eq => ComparisonOp::Eq,
        };
        q.add_constraint(&expr[..], op, c.rhs);
    }
    q.solve().map(|s| s.objective())
}

/// Status and objective agree with minilp.
pub fn check_lp_oracle(p: &LpProblem) -> Result<(), String> {
    let ours = solve_lp(p).map_err(|e| e.to_string())?;
    match (ours.status, minilp_solve(p)) {
        (LpStatus::Optimal, Ok(v)) => {
            if (ours.objective_value - v).abs() > 1e-7 * (1.0 + v.abs()) {
                return Err(format!("objective {} vs oracle {v}", ours.objective_value));
            }
            if p.violation(&ours.solution) > 1e-9 {
                return Err(format!("returned point violates rows by {:e}", p.violation(&ours.solution)));
            }
            Ok(())
        }
        (LpStatus::Infeasible, Err(minilp::Error::Infeasible)) => Ok(()),
        (s, o) => Err(format!("status {s:?} vs oracle {o:?}")),
    }
}

//! Named verification suites. Each runs a fixed set of certificates.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::certificates::{
    bathtub_greedy, bathtub_greedy_objective, bathtub_minimize, bathtub_radii, convexity_gap, improvement_factor, phi,
    step1_contradiction, CertificateResult, RadialCost,
};
use crate::error::{Error, Result};
use crate::funcrep::sampled::{Interpolation, SampledProfile, Tail};
use crate::funcrep::{ClosedKind, FunctionSpec, Sign};
use crate::poisson_torus::{
    lattice_samples, periodize, poisson_residual, prop1_certificate, torus_metrics, vaaler_interpolate,
    DEFAULT_TRUNCATION,
};
use crate::signtools::last_sign_change;
use crate::transforms::special::ball_volume;
use crate::transforms::{cosine_transform, fourier_transform};

pub struct SuiteContext {
    pub seed: u64,
}

pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<CertificateResult>>;
}

/// `margin = tol - deviation`.
fn within(name: &str, deviation: f64, tol: f64, inputs: serde_json::Value) -> CertificateResult {
    let margin = if deviation.is_nan() { f64::NEG_INFINITY } else { tol - deviation };
    CertificateResult::from_margin(name, margin, inputs)
}

fn max_dev(points: &[f64], a: impl Fn(f64) -> f64 + Sync, b: impl Fn(f64) -> f64 + Sync) -> f64 {
    points.par_iter().map(|&x| (a(x) - b(x)).abs()).reduce(|| 0.0, |p, q| if p.is_nan() || q.is_nan() { f64::NAN } else { p.max(q) })
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// `SincSq - Tent` in one dimension.
pub fn fig1_function() -> Result<FunctionSpec> {
    FunctionSpec::closed(1, ClosedKind::SincSq)?.sub(&FunctionSpec::closed(1, ClosedKind::Tent)?)
}

struct Fig1;
impl Suite for Fig1 {
    fn name(&self) -> &'static str {
        "fig1-minimizer"
    }
    fn describe(&self) -> &'static str {
        "sinc^2 - tent: r(g) = 1, hat g = -g, g(0) = 0"
    }
    fn run(&self, _: &SuiteContext) -> Result<Vec<CertificateResult>> {
        let g = fig1_function()?;
        let r = last_sign_change(&g, 1e-10)?.radius;
        let ghat = fourier_transform(&g)?;
        let grid = linspace(0.0, 4.0, 401);
        let dev = max_dev(&grid, |x| ghat.value(x), |x| -g.value(x));
        let coarse = linspace(0.0, 4.0, 41);
        let numeric = max_dev(&coarse, |x| cosine_transform(&g, x).map(|q| q.value).unwrap_or(f64::NAN), |x| -g.value(x));
        let g0 = g.value(0.0);
        Ok(vec![
            within("r(g) = 1", (r - 1.0).abs(), 1e-6, json!({"r": r})),
            within("hat g = -g (structural)", dev, 1e-8, json!({"points": grid.len(), "max_dev": dev})),
            within("hat g = -g (quadrature)", numeric, 1e-8, json!({"points": coarse.len(), "max_dev": numeric})),
            CertificateResult::new("g(0) = 0", g0 == 0.0, 0.0 - g0.abs(), json!({"g0": g0})),
        ])
    }
}

struct Prop1;
impl Suite for Prop1 {
    fn name(&self) -> &'static str {
        "prop1"
    }
    fn describe(&self) -> &'static str {
        "bandlimited minimizer: r(f) = 1, transform, Poisson sums, odd-lattice certificate, Vaaler"
    }
    fn run(&self, _: &SuiteContext) -> Result<Vec<CertificateResult>> {
        let f = FunctionSpec::closed(1, ClosedKind::Prop1Minimizer)?;
        let r = last_sign_change(&f, 1e-10)?.radius;
        let fhat = fourier_transform(&f)?;
        let grid = linspace(0.0, 1.0, 200);
        let dev = max_dev(&grid, |x| cosine_transform(&f, x).map(|q| q.value).unwrap_or(f64::NAN), |x| fhat.value(x));
        let mut out = vec![
            within("r(f) = 1", (r - 1.0).abs(), 1e-6, json!({"r": r})),
            within("numeric transform = closed form", dev, 1e-8, json!({"points": 200, "max_dev": dev})),
        ];
        let mut worst: f64 = 0.0;
        let mut cases = Vec::new();
        for a in [0.5, 1.0, 2.0] {
            for b in [0.0, 0.5, 1.0] {
                let rep = poisson_residual(&f, a, b, DEFAULT_TRUNCATION)?;
                worst = worst.max(rep.residual);
                cases.push(json!({"alpha": a, "beta": b, "residual": rep.residual}));
            }
        }
        out.push(within("Poisson residuals", worst, 1e-8, json!({ "cases": cases })));
        out.push(prop1_certificate(&f)?);
        let g = |x: f64| f.value((2.0 * x + 1.0).abs());
        let (v, d) = lattice_samples(&g, 200, 1e-3);
        let series = vaaler_interpolate(&v, &d, 200)?;
        let pts = linspace(-3.0, 3.0, 601);
        let vdev = max_dev(&pts, |x| series.eval(x), g);
        out.push(within("Vaaler reconstruction of f(2x+1)", vdev, 1e-8, json!({"max_dev": vdev})));
        Ok(out)
    }
}

struct Step1;
impl Suite for Step1 {
    fn name(&self) -> &'static str {
        "step1"
    }
    fn describe(&self) -> &'static str {
        "Phi(0.595) < 0.121 and the import inequality fails on [0.45, 0.595]"
    }
    fn run(&self, _: &SuiteContext) -> Result<Vec<CertificateResult>> {
        let p = phi(0.595)?;
        let bound = CertificateResult::from_margin(
            "Phi(0.595) < 0.121",
            if p.error_estimate < 1e-10 { 0.121 - p.value } else { -p.error_estimate },
            json!({"phi": p.value, "error_estimate": p.error_estimate}),
        );
        Ok(vec![bound, step1_contradiction(0.45, 0.595, 0.121)?])
    }
}

/// Random piecewise-linear radial cost and a mass that fits in its ball.
fn random_cost(rng: &mut ChaCha8Rng) -> (usize, SampledProfile, f64) {
    let d = rng.gen_range(1..=6);
    let knots = 24;
    let end = 1.5;
    let radii = linspace(0.0, end, knots);
    let values: Vec<f64> = (0..knots).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let p = SampledProfile::new(radii, values, Interpolation::Linear, Tail::Zero).expect("valid knots");
    let mass = rng.gen_range(0.1..0.9) * ball_volume(d) * end.powi(d as i32);
    (d, p, mass)
}

struct Bathtub;
impl Suite for Bathtub {
    fn name(&self) -> &'static str {
        "bathtub"
    }
    fn describe(&self) -> &'static str {
        "half-volume shells, convexity gaps, bathtub minimiser vs greedy fill"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<CertificateResult>> {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let mut out = Vec::new();
        let (mut shell_dev, mut gap_min) = (0.0f64, f64::INFINITY);
        let mut cases = Vec::new();
        for _ in 0..20 {
            let d: usize = rng.gen_range(1..=24);
            // nu_d r^d in (1/2, 5]
            let vol = rng.gen_range(0.55..5.0);
            let r = (vol / ball_volume(d)).powf(1.0 / d as f64);
            let (s, t) = bathtub_radii(d, r)?;
            let nu = ball_volume(d);
            let inner = nu * (r.powi(d as i32) - s.powi(d as i32));
            let outer = nu * (t.powi(d as i32) - r.powi(d as i32));
            shell_dev = shell_dev.max((inner - 0.5).abs()).max((outer - 0.5).abs());
            let gap = convexity_gap(d, r)?;
            gap_min = gap_min.min(gap.margin);
            cases.push(json!({"d": d, "r": r, "gap": gap.margin}));
        }
        out.push(within("shell volumes = 1/2", shell_dev, 1e-12, json!({ "cases": cases })));
        out.push(CertificateResult::from_margin("convexity gaps > 0", gap_min, json!({"min_gap": gap_min})));
        let g1 = convexity_gap(1, 1.0)?.margin;
        out.push(within("gap(d=1, r=1) = 1/4", (g1 - 0.25).abs(), 1e-12, json!({"gap": g1})));
        let mut worst = 0.0f64;
        let mut inst = Vec::new();
        for _ in 0..10 {
            let (d, p, mass) = random_cost(&mut rng);
            let cost = RadialCost { dim: d, profile: &p };
            let sol = bathtub_minimize(&cost, mass)?;
            let fill = bathtub_greedy(&cost, mass, 20_000);
            let greedy = bathtub_greedy_objective(&cost, &fill);
            worst = worst.max((sol.objective - greedy).abs());
            inst.push(json!({"d": d, "mass": mass, "objective": sol.objective, "greedy": greedy}));
        }
        out.push(within("bathtub vs greedy", worst, 1e-3, json!({ "instances": inst })));
        Ok(out)
    }
}

struct ImprovementSuite;
impl Suite for ImprovementSuite {
    fn name(&self) -> &'static str {
        "improvement"
    }
    fn describe(&self) -> &'static str {
        "improvement factor at d = 12, A = sqrt 2"
    }
    fn run(&self, _: &SuiteContext) -> Result<Vec<CertificateResult>> {
        let i = improvement_factor(12, 2f64.sqrt())?;
        let window = (i.factor - 1.9994).min(1.9996 - i.factor);
        let cap = 2.0 - i.theta / 12.0 - i.factor;
        let inputs = json!({"theta": i.theta, "factor": i.factor});
        Ok(vec![
            CertificateResult::from_margin("factor in [1.9994, 1.9996]", window, inputs.clone()),
            CertificateResult::from_margin("factor <= 2 - theta/12", cap, inputs),
        ])
    }
}

struct TorusBridge;
impl Suite for TorusBridge {
    fn name(&self) -> &'static str {
        "torus-bridge"
    }
    fn describe(&self) -> &'static str {
        "periodised minimizer on T^1: r_torus * k_+ <= 1/2"
    }
    fn run(&self, _: &SuiteContext) -> Result<Vec<CertificateResult>> {
        let f = FunctionSpec::closed(1, ClosedKind::Prop1Minimizer)?;
        let g = periodize(&f, 0.5, Sign::Plus)?;
        let m = torus_metrics(&g, Sign::Plus)?;
        let inputs = json!({"r_torus": m.r_torus, "k_s": m.k_s, "product": m.product, "threshold": m.threshold});
        Ok(vec![CertificateResult::from_margin("r_torus k_+ <= 1/2", 0.5 + 1e-6 - m.product, inputs)
            .note(format!("certifies P_+(T^1) <= sqrt(product) = {:.6}", m.product.sqrt()))])
    }
}

pub fn registry() -> &'static BTreeMap<&'static str, Box<dyn Suite>> {
    static REG: OnceLock<BTreeMap<&'static str, Box<dyn Suite>>> = OnceLock::new();
    REG.get_or_init(|| {
        let all: Vec<Box<dyn Suite>> = vec![
            Box::new(Fig1),
            Box::new(Prop1),
            Box::new(Step1),
            Box::new(Bathtub),
            Box::new(ImprovementSuite),
            Box::new(TorusBridge),
        ];
        all.into_iter().map(|s| (s.name(), s)).collect()
    })
}

pub fn suite(name: &str) -> Result<&'static dyn Suite> {
    registry().get(name).map(|b| b.as_ref()).ok_or_else(|| {
        let known: Vec<&str> = registry().keys().copied().collect();
        Error::InvalidParameter(format!("unknown suite '{name}' (known: {})", known.join(", ")))
    })
}

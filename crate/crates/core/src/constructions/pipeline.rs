//! Named transformation stages and JSON pipeline files.
//!
//! A pipeline file looks like
//! `{"base": <function spec>, "stages": [{"op": "dirac_symmetrize", "params": {"x0": 0.1}}, ...]}`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde_json::{json, Value};

use super::{add_eta, build_eta, dirac_symmetrize, eigen_symmetrize, gaussian_correct, mollify_bandlimit, schwartz_smooth};
use crate::error::{Error, Result};
use crate::funcrep::json::{from_value, to_value};
use crate::funcrep::{FunctionSpec, Sign};
use crate::signtools::balance_scale;

pub trait Stage: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn apply(&self, f: &FunctionSpec, params: &Value) -> Result<FunctionSpec>;
}

fn param_f64(params: &Value, key: &str, op: &str) -> Result<f64> {
    params.get(key).and_then(Value::as_f64).ok_or_else(|| Error::Parse {
        path: format!("$.stages[{op}].params.{key}"),
        message: "expected a number".into(),
    })
}

fn param_f64_or(params: &Value, key: &str, default: f64) -> f64 {
    params.get(key).and_then(Value::as_f64).unwrap_or(default)
}

struct EigenSymmetrize;
impl Stage for EigenSymmetrize {
    fn name(&self) -> &'static str {
        "eigen_symmetrize"
    }
    fn describe(&self) -> &'static str {
        "f + s hat f (params: sign)"
    }
    fn apply(&self, f: &FunctionSpec, p: &Value) -> Result<FunctionSpec> {
        let s = p.get("sign").and_then(Value::as_str).and_then(Sign::parse).ok_or_else(|| Error::Parse {
            path: "$.stages[eigen_symmetrize].params.sign".into(),
            message: "expected \"+\" or \"-\"".into(),
        })?;
        eigen_symmetrize(f, s)
    }
}

struct DiracSymmetrize;
impl Stage for DiracSymmetrize {
    fn name(&self) -> &'static str {
        "dirac_symmetrize"
    }
    fn describe(&self) -> &'static str {
        "f(x - x0) + f(x + x0) + 2 f(x) (params: x0)"
    }
    fn apply(&self, f: &FunctionSpec, p: &Value) -> Result<FunctionSpec> {
        dirac_symmetrize(f, param_f64(p, "x0", self.name())?)
    }
}

struct GaussianCorrect;
impl Stage for GaussianCorrect {
    fn name(&self) -> &'static str {
        "gaussian_correct"
    }
    fn describe(&self) -> &'static str {
        "g + hat g - (g(0) + hat g(0))/2 exp(-pi x^2)"
    }
    fn apply(&self, f: &FunctionSpec, _: &Value) -> Result<FunctionSpec> {
        gaussian_correct(f)
    }
}

struct MollifyBandlimit;
impl Stage for MollifyBandlimit {
    fn name(&self) -> &'static str {
        "mollify_bandlimit"
    }
    fn describe(&self) -> &'static str {
        "f * hat phi_delta (params: delta)"
    }
    fn apply(&self, f: &FunctionSpec, p: &Value) -> Result<FunctionSpec> {
        Ok(mollify_bandlimit(f, param_f64(p, "delta", self.name())?)?.function)
    }
}

struct SchwartzSmooth;
impl Stage for SchwartzSmooth {
    fn name(&self) -> &'static str {
        "schwartz_smooth"
    }
    fn describe(&self) -> &'static str {
        "hat g * phi_delta + g hat phi_delta with g = f * phi_delta (params: delta)"
    }
    fn apply(&self, f: &FunctionSpec, p: &Value) -> Result<FunctionSpec> {
        schwartz_smooth(f, param_f64(p, "delta", self.name())?)
    }
}

struct BalanceScale;
impl Stage for BalanceScale {
    fn name(&self) -> &'static str {
        "balance_scale"
    }
    fn describe(&self) -> &'static str {
        "dilate so that r(f) = r(hat f) (params: tol, optional)"
    }
    fn apply(&self, f: &FunctionSpec, p: &Value) -> Result<FunctionSpec> {
        Ok(balance_scale(f, param_f64_or(p, "tol", 1e-9))?.function)
    }
}

struct AddEta;
impl Stage for AddEta {
    fn name(&self) -> &'static str {
        "add_eta"
    }
    fn describe(&self) -> &'static str {
        "h + beta eta with the growth function eta (params: delta, n)"
    }
    fn apply(&self, f: &FunctionSpec, p: &Value) -> Result<FunctionSpec> {
        let eta = build_eta(f.dim())?;
        let n = p.get("n").and_then(Value::as_u64).unwrap_or(1) as usize;
        add_eta(f, &eta, param_f64_or(p, "delta", 1e-2), n)
    }
}

/// All stages, keyed by name.
pub fn registry() -> &'static BTreeMap<&'static str, Box<dyn Stage>> {
    static REG: OnceLock<BTreeMap<&'static str, Box<dyn Stage>>> = OnceLock::new();
    REG.get_or_init(|| {
        let stages: Vec<Box<dyn Stage>> = vec![
            Box::new(EigenSymmetrize),
            Box::new(DiracSymmetrize),
            Box::new(GaussianCorrect),
            Box::new(MollifyBandlimit),
            Box::new(SchwartzSmooth),
            Box::new(BalanceScale),
            Box::new(AddEta),
        ];
        stages.into_iter().map(|s| (s.name(), s)).collect()
    })
}

pub fn stage(name: &str) -> Result<&'static dyn Stage> {
    registry().get(name).map(|b| b.as_ref()).ok_or_else(|| {
        let known: Vec<&str> = registry().keys().copied().collect();
        Error::InvalidParameter(format!("unknown stage '{name}' (known: {})", known.join(", ")))
    })
}

#[derive(Debug, Clone)]
pub struct StageCall {
    pub op: String,
    pub params: Value,
}

#[derive(Debug, Clone)]
pub struct Pipeline {
    pub base: FunctionSpec,
    pub stages: Vec<StageCall>,
}

impl Pipeline {
    pub fn parse(text: &str) -> Result<Pipeline> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse { path: "$".into(), message: e.to_string() })?;
        let obj = v.as_object().ok_or_else(|| Error::Parse { path: "$".into(), message: "expected an object".into() })?;
        if let Some(k) = obj.keys().find(|k| *k != "base" && *k != "stages") {
            return Err(Error::Parse { path: format!("$.{k}"), message: "unknown key".into() });
        }
        let base = from_value(
            obj.get("base").ok_or_else(|| Error::Parse { path: "$.base".into(), message: "missing".into() })?,
            "$.base",
            None,
        )?;
        let list = match obj.get("stages") {
            None => Vec::new(),
            Some(Value::Array(a)) => a.clone(),
            Some(_) => return Err(Error::Parse { path: "$.stages".into(), message: "expected an array".into() }),
        };
        let mut stages = Vec::new();
        for (i, s) in list.iter().enumerate() {
            let path = format!("$.stages[{i}]");
            let op = s
                .get("op")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse { path: format!("{path}.op"), message: "expected a string".into() })?;
            stage(op).map_err(|e| Error::Parse { path: format!("{path}.op"), message: e.to_string() })?;
            let params = s.get("params").cloned().unwrap_or_else(|| json!({}));
            if !params.is_object() {
                return Err(Error::Parse { path: format!("{path}.params"), message: "expected an object".into() });
            }
            stages.push(StageCall { op: op.to_string(), params });
        }
        Ok(Pipeline { base, stages })
    }

    /// Applies the stages in order, returning every intermediate function.
    pub fn run(&self) -> Result<Vec<FunctionSpec>> {
        let mut out = vec![self.base.clone()];
        for call in &self.stages {
            let next = stage(&call.op)?.apply(out.last().unwrap(), &call.params)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "base": to_value(&self.base),
            "stages": self.stages.iter().map(|s| json!({"op": s.op, "params": s.params})).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lists_every_stage() {
        let names: Vec<&str> = registry().keys().copied().collect();
        for n in ["eigen_symmetrize", "dirac_symmetrize", "gaussian_correct", "mollify_bandlimit", "schwartz_smooth", "balance_scale"] {
            assert!(names.contains(&n), "{n}");
        }
        assert!(stage("nope").is_err());
    }

    #[test]
    fn parse_and_run() {
        let text = r#"{"base": {"dim": 1, "closed_form": {"kind": "tent"}},
                       "stages": [{"op": "eigen_symmetrize", "params": {"sign": "-"}}]}"#;
        let p = Pipeline::parse(text).unwrap();
        let out = p.run().unwrap();
        assert_eq!(out.len(), 2);
        let x: f64 = 0.5;
        let sinc2 = ((std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x)).powi(2);
        assert!((out[1].value(x) - (0.5 - sinc2)).abs() < 1e-15);
        let again = Pipeline::parse(&p.to_value().to_string()).unwrap();
        assert_eq!(again.stages.len(), 1);
    }

    #[test]
    fn parse_errors_carry_paths() {
        let bad = r#"{"base": {"dim": 1, "closed_form": {"kind": "tent"}}, "stages": [{"op": "fold"}]}"#;
        match Pipeline::parse(bad) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "$.stages[0].op"),
            other => panic!("{other:?}"),
        }
    }
}

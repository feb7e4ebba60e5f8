//! JSON encoding of function specs.
//!
//! ```json
//! {"dim": 1, "closed_form": {"kind": "tent"}}
//! {"dim": 1, "eigen": {"sign": "-", "coeffs": [0.0, 0.3, 0.0, -0.1]}}
//! {"dim": 1, "sampled": {"radii": [...], "values": [...], "tail": {"kind": "zero"}}}
//! ```
//!
//! Composites use a fourth key, `"composite"`, holding `{"op": ..., ...}` with
//! nested specs; nested specs may omit `"dim"` and inherit it.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::{
    ClosedForm, ClosedKind, Composite, EigenExpansion, FunctionSpec, Interpolation, Representation, SampledProfile,
    Sign, Tail,
};
use crate::error::{Error, Result};

fn perr(path: &str, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_string(), message: message.into() }
}

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| perr(path, "expected an object"))
}

fn num(v: &Value, path: &str) -> Result<f64> {
    let x = v.as_f64().ok_or_else(|| perr(path, "expected a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(perr(path, "number is not finite"))
    }
}

fn opt_num(m: &Map<String, Value>, key: &str, path: &str, default: f64) -> Result<f64> {
    match m.get(key) {
        None => Ok(default),
        Some(v) => num(v, &format!("{path}.{key}")),
    }
}

fn num_array(v: &Value, path: &str) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| perr(path, "expected an array of numbers"))?;
    arr.iter().enumerate().map(|(i, x)| num(x, &format!("{path}[{i}]"))).collect()
}

fn str_field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a str> {
    m.get(key)
        .ok_or_else(|| perr(path, format!("missing key \"{key}\"")))?
        .as_str()
        .ok_or_else(|| perr(&format!("{path}.{key}"), "expected a string"))
}

fn reject_unknown(m: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for k in m.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(perr(path, format!("unknown key \"{k}\"")));
        }
    }
    Ok(())
}

pub fn parse_spec(text: &str) -> Result<FunctionSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| perr("$", e.to_string()))?;
    from_value(&v, "$", None)
}

pub fn from_value(v: &Value, path: &str, inherited_dim: Option<usize>) -> Result<FunctionSpec> {
    let m = obj(v, path)?;
    reject_unknown(m, &["dim", "closed_form", "eigen", "sampled", "composite", "metadata"], path)?;
    let dim = match m.get("dim") {
        Some(d) => {
            let d = d.as_u64().ok_or_else(|| perr(&format!("{path}.dim"), "expected a positive integer"))?;
            if d == 0 {
                return Err(perr(&format!("{path}.dim"), "dimension must be at least 1"));
            }
            d as usize
        }
        None => inherited_dim.ok_or_else(|| perr(path, "missing key \"dim\""))?,
    };
    if let Some(parent) = inherited_dim {
        if parent != dim {
            return Err(perr(&format!("{path}.dim"), format!("dimension {dim} differs from enclosing {parent}")));
        }
    }
    let reps: Vec<&str> =
        ["closed_form", "eigen", "sampled", "composite"].into_iter().filter(|k| m.contains_key(*k)).collect();
    if reps.len() != 1 {
        return Err(perr(
            path,
            format!("expected exactly one of closed_form, eigen, sampled, composite; found {}", reps.len()),
        ));
    }
    let key = reps[0];
    let sub = &format!("{path}.{key}");
    let inner = &m[key];
    let wrap = |e: Error| match e {
        Error::Parse { .. } => e,
        other => perr(sub, other.to_string()),
    };
    let mut spec = match key {
        "closed_form" => {
            let c = obj(inner, sub)?;
            reject_unknown(c, &["kind", "amplitude", "dilation"], sub)?;
            let name = str_field(c, "kind", sub)?;
            let kind = ClosedKind::from_name(name)
                .ok_or_else(|| perr(&format!("{sub}.kind"), format!("unknown closed form \"{name}\"")))?;
            let cf = ClosedForm {
                kind,
                amplitude: opt_num(c, "amplitude", sub, 1.0)?,
                dilation: opt_num(c, "dilation", sub, 1.0)?,
            };
            FunctionSpec::closed_form(dim, cf).map_err(wrap)?
        }
        "eigen" => {
            let e = obj(inner, sub)?;
            reject_unknown(e, &["sign", "coeffs"], sub)?;
            let s = str_field(e, "sign", sub)?;
            let sign = match s {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                _ => return Err(perr(&format!("{sub}.sign"), format!("expected \"+\" or \"-\", got \"{s}\""))),
            };
            let cpath = format!("{sub}.coeffs");
            let coeffs = num_array(e.get("coeffs").ok_or_else(|| perr(sub, "missing key \"coeffs\""))?, &cpath)?;
            if let Some(k) = coeffs.iter().enumerate().position(|(k, &c)| c != 0.0 && Sign::of_index(k) != sign) {
                return Err(perr(
                    &format!("{cpath}[{k}]"),
                    format!("nonzero coefficient has eigenvalue parity (-1)^{k} but sign is {sign}"),
                ));
            }
            FunctionSpec::eigen(EigenExpansion::new(dim, sign, coeffs).map_err(wrap)?)
        }
        "sampled" => {
            let s = obj(inner, sub)?;
            reject_unknown(s, &["radii", "values", "tail", "interpolation"], sub)?;
            let radii = num_array(s.get("radii").ok_or_else(|| perr(sub, "missing key \"radii\""))?, &format!("{sub}.radii"))?;
            let values =
                num_array(s.get("values").ok_or_else(|| perr(sub, "missing key \"values\""))?, &format!("{sub}.values"))?;
            let interpolation = match s.get("interpolation") {
                None => Interpolation::Cubic,
                Some(v) => match v.as_str() {
                    Some("linear") => Interpolation::Linear,
                    Some("cubic") => Interpolation::Cubic,
                    _ => return Err(perr(&format!("{sub}.interpolation"), "expected \"linear\" or \"cubic\"")),
                },
            };
            let tpath = format!("{sub}.tail");
            let t = obj(s.get("tail").ok_or_else(|| perr(sub, "missing key \"tail\""))?, &tpath)?;
            let tail = match str_field(t, "kind", &tpath)? {
                "zero" => {
                    reject_unknown(t, &["kind"], &tpath)?;
                    Tail::Zero
                }
                "decay" => {
                    reject_unknown(t, &["kind", "c", "p"], &tpath)?;
                    let c = num(t.get("c").ok_or_else(|| perr(&tpath, "missing key \"c\""))?, &format!("{tpath}.c"))?;
                    let p = num(t.get("p").ok_or_else(|| perr(&tpath, "missing key \"p\""))?, &format!("{tpath}.p"))?;
                    Tail::Decay { c, p }
                }
                other => return Err(perr(&format!("{tpath}.kind"), format!("expected \"zero\" or \"decay\", got \"{other}\""))),
            };
            FunctionSpec::sampled(dim, SampledProfile::new(radii, values, interpolation, tail).map_err(wrap)?)
                .map_err(wrap)?
        }
        _ => {
            let c = obj(inner, sub)?;
            let op = str_field(c, "op", sub)?;
            let child = |k: &str| -> Result<Arc<FunctionSpec>> {
                let v = c.get(k).ok_or_else(|| perr(sub, format!("missing key \"{k}\"")))?;
                Ok(Arc::new(from_value(v, &format!("{sub}.{k}"), Some(dim))?))
            };
            let field = |k: &str| -> Result<f64> { num(c.get(k).ok_or_else(|| perr(sub, format!("missing key \"{k}\"")))?, &format!("{sub}.{k}")) };
            let comp = match op {
                "sum" => {
                    reject_unknown(c, &["op", "terms"], sub)?;
                    let tp = format!("{sub}.terms");
                    let arr = c.get("terms").and_then(Value::as_array).ok_or_else(|| perr(&tp, "expected an array"))?;
                    let mut terms = Vec::with_capacity(arr.len());
                    for (i, t) in arr.iter().enumerate() {
                        let ip = format!("{tp}[{i}]");
                        let tm = obj(t, &ip)?;
                        reject_unknown(tm, &["weight", "function"], &ip)?;
                        let w = opt_num(tm, "weight", &ip, 1.0)?;
                        let f = from_value(
                            tm.get("function").ok_or_else(|| perr(&ip, "missing key \"function\""))?,
                            &format!("{ip}.function"),
                            Some(dim),
                        )?;
                        terms.push((w, f));
                    }
                    Composite::Sum(terms)
                }
                "dilate" => {
                    reject_unknown(c, &["op", "lambda", "function"], sub)?;
                    Composite::Dilate { inner: child("function")?, lambda: field("lambda")? }
                }
                "dirac_sym" => {
                    reject_unknown(c, &["op", "x0", "function"], sub)?;
                    Composite::DiracSym { inner: child("function")?, x0: field("x0")? }
                }
                "cos_weight" => {
                    reject_unknown(c, &["op", "x0", "function"], sub)?;
                    Composite::CosWeight { inner: child("function")?, x0: field("x0")? }
                }
                "multiply" => {
                    reject_unknown(c, &["op", "left", "right"], sub)?;
                    Composite::Multiply(child("left")?, child("right")?)
                }
                "convolve" => {
                    reject_unknown(c, &["op", "left", "right"], sub)?;
                    Composite::Convolve(child("left")?, child("right")?)
                }
                "transform" => {
                    reject_unknown(c, &["op", "function"], sub)?;
                    Composite::Transform(child("function")?)
                }
                other => return Err(perr(&format!("{sub}.op"), format!("unknown composite op \"{other}\""))),
            };
            FunctionSpec::composite(dim, comp).map_err(wrap)?
        }
    };
    if let Some(md) = m.get("metadata") {
        let s = md.as_str().ok_or_else(|| perr(&format!("{path}.metadata"), "expected a string"))?;
        spec.metadata = Some(s.to_string());
    }
    Ok(spec)
}

pub fn to_value(f: &FunctionSpec) -> Value {
    let mut m = Map::new();
    m.insert("dim".into(), json!(f.dim()));
    let (key, body) = match f.representation() {
        Representation::ClosedForm(c) => {
            let mut b = Map::new();
            b.insert("kind".into(), json!(c.kind.name()));
            if c.amplitude != 1.0 {
                b.insert("amplitude".into(), json!(c.amplitude));
            }
            if c.dilation != 1.0 {
                b.insert("dilation".into(), json!(c.dilation));
            }
            ("closed_form", Value::Object(b))
        }
        Representation::Eigen(e) => ("eigen", json!({"sign": e.sign().to_string(), "coeffs": e.coeffs()})),
        Representation::Sampled(p) => {
            let mut b = Map::new();
            b.insert("radii".into(), json!(p.radii()));
            b.insert("values".into(), json!(p.values()));
            if p.interpolation() == Interpolation::Linear {
                b.insert("interpolation".into(), json!("linear"));
            }
            let tail = match p.tail() {
                Tail::Zero => json!({"kind": "zero"}),
                Tail::Decay { c, p } => json!({"kind": "decay", "c": c, "p": p}),
            };
            b.insert("tail".into(), tail);
            ("sampled", Value::Object(b))
        }
        Representation::Composite(c) => {
            let body = match c {
                Composite::Sum(terms) => json!({
                    "op": "sum",
                    "terms": terms.iter().map(|(w, g)| json!({"weight": w, "function": to_value(g)})).collect::<Vec<_>>(),
                }),
                Composite::Dilate { inner, lambda } => json!({"op": "dilate", "lambda": lambda, "function": to_value(inner)}),
                Composite::DiracSym { inner, x0 } => json!({"op": "dirac_sym", "x0": x0, "function": to_value(inner)}),
                Composite::CosWeight { inner, x0 } => json!({"op": "cos_weight", "x0": x0, "function": to_value(inner)}),
                Composite::Multiply(a, b) => json!({"op": "multiply", "left": to_value(a), "right": to_value(b)}),
                Composite::Convolve(a, b) => json!({"op": "convolve", "left": to_value(a), "right": to_value(b)}),
                Composite::Transform(inner) => json!({"op": "transform", "function": to_value(inner)}),
            };
            ("composite", body)
        }
    };
    m.insert(key.into(), body);
    if let Some(md) = &f.metadata {
        m.insert("metadata".into(), json!(md));
    }
    Value::Object(m)
}

pub fn serialize_spec(f: &FunctionSpec) -> String {
    serde_json::to_string_pretty(&to_value(f)).expect("spec serialisation cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tent() {
        let f = parse_spec(r#"{"dim":1,"closed_form":{"kind":"tent"}}"#).unwrap();
        assert_eq!(f.as_closed().unwrap().kind, ClosedKind::Tent);
    }

    #[test]
    fn round_trips() {
        let docs = [
            r#"{"dim":1,"closed_form":{"kind":"prop1_minimizer","amplitude":0.8105694691387022}}"#,
            r#"{"dim":3,"eigen":{"sign":"-","coeffs":[0.0,0.25,0.0,-1.5]},"metadata":"lp candidate"}"#,
            r#"{"dim":2,"sampled":{"radii":[0.0,0.5,1.0],"values":[1.0,0.5,0.0],"interpolation":"linear","tail":{"kind":"decay","c":1.0,"p":3.0}}}"#,
            r#"{"dim":1,"composite":{"op":"sum","terms":[{"weight":1.0,"function":{"dim":1,"closed_form":{"kind":"sinc_sq"}}},{"weight":-1.0,"function":{"dim":1,"closed_form":{"kind":"tent"}}}]}}"#,
        ];
        for d in docs {
            let v: Value = serde_json::from_str(d).unwrap();
            let f = parse_spec(d).unwrap();
            assert_eq!(to_value(&f), v, "{d}");
            assert_eq!(parse_spec(&serialize_spec(&f)).unwrap(), f);
        }
    }

    #[test]
    fn errors_carry_json_paths() {
        let e = parse_spec(r#"{"dim":1,"eigen":{"sign":"+","coeffs":[1.0,0.5]}}"#).unwrap_err();
        assert!(matches!(&e, Error::Parse { path, .. } if path == "$.eigen.coeffs[1]"), "{e}");
        let e = parse_spec(r#"{"dim":1,"closed_form":{"kind":"nope"}}"#).unwrap_err();
        assert!(matches!(&e, Error::Parse { path, .. } if path == "$.closed_form.kind"), "{e}");
        let e = parse_spec(r#"{"dim":1,"sampled":{"radii":[0.0,1.0],"values":[1.0,"x"],"tail":{"kind":"zero"}}}"#)
            .unwrap_err();
        assert!(matches!(&e, Error::Parse { path, .. } if path == "$.sampled.values[1]"), "{e}");
        let e = parse_spec(r#"{"dim":1}"#).unwrap_err();
        assert!(matches!(&e, Error::Parse { path, .. } if path == "$"), "{e}");
        let e = parse_spec(r#"{"dim":0,"closed_form":{"kind":"tent"}}"#).unwrap_err();
        assert!(matches!(&e, Error::Parse { path, .. } if path == "$.dim"), "{e}");
    }
}

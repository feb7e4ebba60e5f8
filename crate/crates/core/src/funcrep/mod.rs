//! Radial function representations.
//!
//! A [`FunctionSpec`] is a profile `f(r)` on `[0, inf)` standing for the radial
//! function `x -> f(|x|)` on `R^d`. Leaves are closed forms, eigenfunction
//! expansions or samples; composites build the constructions on top of them.

pub mod closed;
pub mod decay;
pub mod eigen;
pub mod json;
pub mod sampled;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use closed::ClosedKind;
pub use decay::{Decay, Osc};
pub use eigen::EigenExpansion;
pub use sampled::{Interpolation, SampledProfile, Tail};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Eigenvalue sign `(-1)^k` of the `k`-th basis function.
    pub fn of_index(k: usize) -> Sign {
        if k % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s {
            "+" | "plus" | "+1" | "1" => Some(Sign::Plus),
            "-" | "minus" | "-1" => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// `amplitude * kind(dilation * r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub kind: ClosedKind,
    pub amplitude: f64,
    pub dilation: f64,
}

impl ClosedForm {
    pub fn new(kind: ClosedKind) -> Self {
        ClosedForm { kind, amplitude: 1.0, dilation: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Composite {
    /// `sum c_i f_i`
    Sum(Vec<(f64, FunctionSpec)>),
    /// `f(lambda r)`
    Dilate { inner: Arc<FunctionSpec>, lambda: f64 },
    /// `f(r - x0) + f(r + x0) + 2 f(r)`, one-dimensional
    DiracSym { inner: Arc<FunctionSpec>, x0: f64 },
    /// `(2 cos(2 pi x0 r) + 2) f(r)`, the transform side of `DiracSym`
    CosWeight { inner: Arc<FunctionSpec>, x0: f64 },
    Multiply(Arc<FunctionSpec>, Arc<FunctionSpec>),
    Convolve(Arc<FunctionSpec>, Arc<FunctionSpec>),
    /// Fourier transform of the inner function, evaluated by Hankel quadrature.
    Transform(Arc<FunctionSpec>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    ClosedForm(ClosedForm),
    Eigen(EigenExpansion),
    Sampled(SampledProfile),
    Composite(Composite),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    dim: usize,
    repr: Representation,
    pub metadata: Option<String>,
}

/// Why a function is nonnegative past a radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailArgument {
    /// Catalog facts about closed forms (and sums of them with compact negative parts).
    ClosedFormPositivity { radius: f64 },
    /// Past the root bound of the polynomial part the sign is that of the leading coefficient.
    PolynomialRootBound { radius: f64, leading_sign: f64 },
    /// A decay description: zero tail, dominant positive inverse-square term, or negligible values.
    DecayBound { radius: f64, constant: f64, power: f64 },
}

impl TailArgument {
    pub fn radius(&self) -> f64 {
        match *self {
            TailArgument::ClosedFormPositivity { radius }
            | TailArgument::PolynomialRootBound { radius, .. }
            | TailArgument::DecayBound { radius, .. } => radius,
        }
    }

    fn with_radius(&self, r: f64) -> TailArgument {
        let mut out = self.clone();
        match &mut out {
            TailArgument::ClosedFormPositivity { radius }
            | TailArgument::PolynomialRootBound { radius, .. }
            | TailArgument::DecayBound { radius, .. } => *radius = r,
        }
        out
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::InvalidParameter("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

impl FunctionSpec {
    pub fn closed(dim: usize, kind: ClosedKind) -> Result<Self> {
        Self::closed_form(dim, ClosedForm::new(kind))
    }

    pub fn closed_form(dim: usize, c: ClosedForm) -> Result<Self> {
        check_dim(dim)?;
        check_finite("amplitude", c.amplitude)?;
        check_finite("dilation", c.dilation)?;
        if c.dilation <= 0.0 {
            return Err(Error::InvalidParameter(format!("dilation must be positive, got {}", c.dilation)));
        }
        if c.kind.one_dimensional_only() && dim != 1 {
            return Err(Error::Unsupported(format!("{} is only defined for d = 1", c.kind.name())));
        }
        Ok(FunctionSpec { dim, repr: Representation::ClosedForm(c), metadata: None })
    }

    pub fn eigen(e: EigenExpansion) -> Self {
        FunctionSpec { dim: e.dim(), repr: Representation::Eigen(e), metadata: None }
    }

    pub fn sampled(dim: usize, p: SampledProfile) -> Result<Self> {
        check_dim(dim)?;
        Ok(FunctionSpec { dim, repr: Representation::Sampled(p), metadata: None })
    }

    pub fn composite(dim: usize, c: Composite) -> Result<Self> {
        check_dim(dim)?;
        let children: Vec<&FunctionSpec> = match &c {
            Composite::Sum(terms) => {
                if terms.is_empty() {
                    return Err(Error::InvalidParameter("empty sum".into()));
                }
                for (w, _) in terms {
                    check_finite("sum weight", *w)?;
                }
                terms.iter().map(|(_, f)| f).collect()
            }
            Composite::Dilate { inner, lambda } => {
                if !(lambda.is_finite() && *lambda > 0.0) {
                    return Err(Error::InvalidParameter(format!("dilation must be positive, got {lambda}")));
                }
                vec![inner.as_ref()]
            }
            Composite::DiracSym { inner, x0 } | Composite::CosWeight { inner, x0 } => {
                check_finite("x0", *x0)?;
                if dim != 1 {
                    return Err(Error::Unsupported("Dirac symmetrization is implemented for d = 1".into()));
                }
                vec![inner.as_ref()]
            }
            Composite::Multiply(a, b) | Composite::Convolve(a, b) => vec![a.as_ref(), b.as_ref()],
            Composite::Transform(inner) => vec![inner.as_ref()],
        };
        for ch in children {
            if ch.dim != dim {
                return Err(Error::DimensionMismatch(dim, ch.dim));
            }
        }
        Ok(FunctionSpec { dim, repr: Representation::Composite(c), metadata: None })
    }

    pub fn with_metadata(mut self, m: impl Into<String>) -> Self {
        self.metadata = Some(m.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn as_eigen(&self) -> Option<&EigenExpansion> {
        match &self.repr {
            Representation::Eigen(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_closed(&self) -> Option<&ClosedForm> {
        match &self.repr {
            Representation::ClosedForm(c) => Some(c),
            _ => None,
        }
    }

    // ---- algebra -------------------------------------------------------

    pub fn scale(&self, c: f64) -> FunctionSpec {
        match &self.repr {
            Representation::ClosedForm(cf) => FunctionSpec {
                dim: self.dim,
                repr: Representation::ClosedForm(ClosedForm { amplitude: cf.amplitude * c, ..*cf }),
                metadata: None,
            },
            Representation::Eigen(e) => FunctionSpec::eigen(e.scaled(c)),
            Representation::Sampled(p) => {
                FunctionSpec { dim: self.dim, repr: Representation::Sampled(p.scaled(c)), metadata: None }
            }
            Representation::Composite(Composite::Sum(terms)) => FunctionSpec {
                dim: self.dim,
                repr: Representation::Composite(Composite::Sum(
                    terms.iter().map(|(w, f)| (w * c, f.clone())).collect(),
                )),
                metadata: None,
            },
            _ => FunctionSpec {
                dim: self.dim,
                repr: Representation::Composite(Composite::Sum(vec![(c, self.clone())])),
                metadata: None,
            },
        }
    }

    /// `sum c_i f_i`, flattening nested sums and merging eigen expansions of one sign.
    pub fn linear_combination(terms: Vec<(f64, FunctionSpec)>) -> Result<FunctionSpec> {
        let dim = terms.first().map(|t| t.1.dim).ok_or_else(|| Error::InvalidParameter("empty sum".into()))?;
        let mut flat: Vec<(f64, FunctionSpec)> = Vec::new();
        for (c, f) in terms {
            if f.dim != dim {
                return Err(Error::DimensionMismatch(dim, f.dim));
            }
            match f.repr {
                Representation::Composite(Composite::Sum(inner)) => {
                    flat.extend(inner.into_iter().map(|(w, g)| (c * w, g)));
                }
                _ => flat.push((c, f)),
            }
        }
        // merge eigen expansions that share a sign
        let mut merged: Vec<(f64, FunctionSpec)> = Vec::new();
        for (c, f) in flat {
            if let Representation::Eigen(e) = &f.repr {
                if let Some((_, g)) = merged.iter_mut().find(|(_, g)| {
                    matches!(&g.repr, Representation::Eigen(h) if h.sign() == e.sign())
                }) {
                    let h = g.as_eigen().unwrap();
                    let n = h.coeffs().len().max(e.coeffs().len());
                    let coeffs: Vec<f64> = (0..n)
                        .map(|k| h.coeffs().get(k).copied().unwrap_or(0.0) + c * e.coeffs().get(k).copied().unwrap_or(0.0))
                        .collect();
                    *g = FunctionSpec::eigen(EigenExpansion::new(dim, e.sign(), coeffs)?);
                    continue;
                }
                merged.push((1.0, FunctionSpec::eigen(e.scaled(c))));
                continue;
            }
            merged.push((c, f));
        }
        if merged.len() == 1 && merged[0].0 == 1.0 {
            return Ok(merged.pop().unwrap().1);
        }
        FunctionSpec::composite(dim, Composite::Sum(merged))
    }

    pub fn add(&self, other: &FunctionSpec) -> Result<FunctionSpec> {
        Self::linear_combination(vec![(1.0, self.clone()), (1.0, other.clone())])
    }

    pub fn sub(&self, other: &FunctionSpec) -> Result<FunctionSpec> {
        Self::linear_combination(vec![(1.0, self.clone()), (-1.0, other.clone())])
    }

    /// `f(lambda r)`.
    pub fn dilate(&self, lambda: f64) -> Result<FunctionSpec> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("dilation must be positive, got {lambda}")));
        }
        if lambda == 1.0 {
            return Ok(self.clone());
        }
        match &self.repr {
            Representation::ClosedForm(cf) => FunctionSpec::closed_form(
                self.dim,
                ClosedForm { dilation: cf.dilation * lambda, ..*cf },
            ),
            Representation::Composite(Composite::Dilate { inner, lambda: l }) => {
                inner.dilate(l * lambda)
            }
            _ => FunctionSpec::composite(self.dim, Composite::Dilate { inner: Arc::new(self.clone()), lambda }),
        }
    }

    pub fn multiply(&self, other: &FunctionSpec) -> Result<FunctionSpec> {
        FunctionSpec::composite(self.dim, Composite::Multiply(Arc::new(self.clone()), Arc::new(other.clone())))
    }

    pub fn convolve(&self, other: &FunctionSpec) -> Result<FunctionSpec> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        FunctionSpec::composite(self.dim, Composite::Convolve(Arc::new(self.clone()), Arc::new(other.clone())))
    }

    // ---- evaluation ----------------------------------------------------

    /// `f(r)`; radial, so `f(-r) = f(r)`.
    pub fn value(&self, r: f64) -> f64 {
        let r = r.abs();
        match &self.repr {
            Representation::ClosedForm(c) => c.amplitude * c.kind.base_value(self.dim, c.dilation * r),
            Representation::Eigen(e) => e.value(r),
            Representation::Sampled(p) => p.value(r),
            Representation::Composite(c) => match c {
                Composite::Sum(terms) => terms.iter().map(|(w, f)| w * f.value(r)).sum(),
                Composite::Dilate { inner, lambda } => inner.value(lambda * r),
                Composite::DiracSym { inner, x0 } => inner.value(r - x0) + inner.value(r + x0) + 2.0 * inner.value(r),
                Composite::CosWeight { inner, x0 } => {
                    (2.0 * (2.0 * std::f64::consts::PI * x0 * r).cos() + 2.0) * inner.value(r)
                }
                Composite::Multiply(a, b) => a.value(r) * b.value(r),
                Composite::Convolve(a, b) => crate::transforms::convolution_value(a, b, r),
                Composite::Transform(inner) => crate::transforms::radial_ft_value(inner, r),
            },
        }
    }

    /// Checked evaluation: rejects negative or non-finite radii.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::InvalidParameter(format!("radius must be a finite nonnegative number, got {x}")));
        }
        Ok(self.value(x))
    }

    /// A positive multiple of `f(r)`; for eigen expansions the Gaussian factor is dropped.
    pub fn sign_value(&self, r: f64) -> f64 {
        match &self.repr {
            Representation::Eigen(e) => e.sign_value(r),
            _ => self.value(r),
        }
    }

    // ---- structure -----------------------------------------------------

    pub fn decay(&self) -> Decay {
        match &self.repr {
            Representation::ClosedForm(c) => {
                closed::base_decay(c.kind, self.dim).dilated(c.dilation).scaled(c.amplitude)
            }
            Representation::Eigen(e) => Decay::Rapid(e.negligible_radius(1e-17)),
            Representation::Sampled(p) => match p.tail() {
                Tail::Zero => Decay::Compact(p.last_radius()),
                Tail::Decay { c, p: q } => Decay::Power { from: p.last_radius(), c, p: q },
            },
            Representation::Composite(c) => match c {
                Composite::Sum(terms) => {
                    let mut it = terms.iter().map(|(w, f)| f.decay().scaled(*w));
                    let first = it.next().unwrap();
                    it.fold(first, |acc, d| acc.sum(&d))
                }
                Composite::Dilate { inner, lambda } => inner.decay().dilated(*lambda),
                Composite::DiracSym { inner, x0 } => inner.decay().dirac_symmetrized(*x0),
                Composite::CosWeight { inner, x0 } => inner.decay().cos_weighted(*x0),
                Composite::Multiply(a, b) => a.decay().product(&b.decay()),
                Composite::Convolve(a, b) => a.decay().convolved(&b.decay()),
                Composite::Transform(inner) => match inner.decay() {
                    // transforms of Gaussian-type profiles stay Gaussian-type
                    Decay::Rapid(_) if inner.is_gaussian_like() => Decay::Rapid(3.9 * inner.gaussian_width()),
                    _ => Decay::Unknown,
                },
            },
        }
    }

    fn is_gaussian_like(&self) -> bool {
        match &self.repr {
            Representation::ClosedForm(c) => c.kind == ClosedKind::Gaussian,
            Representation::Eigen(_) => true,
            Representation::Composite(Composite::Sum(t)) => t.iter().all(|(_, f)| f.is_gaussian_like()),
            _ => false,
        }
    }

    fn gaussian_width(&self) -> f64 {
        match &self.repr {
            Representation::ClosedForm(c) => c.dilation,
            Representation::Eigen(e) => e.negligible_radius(1e-17) / 3.9,
            Representation::Composite(Composite::Sum(t)) => t.iter().map(|(_, f)| f.gaussian_width()).fold(0.0, f64::max),
            _ => 1.0,
        }
    }

    /// Radii where the profile may fail to be smooth; quadrature splits there.
    pub fn kinks(&self) -> Vec<f64> {
        let mut out = match &self.repr {
            Representation::ClosedForm(c) => c.kind.kinks().iter().map(|k| k / c.dilation).collect(),
            Representation::Eigen(_) => vec![],
            Representation::Sampled(p) => match p.interpolation() {
                Interpolation::Linear => p.radii().to_vec(),
                Interpolation::Cubic => vec![p.last_radius()],
            },
            Representation::Composite(c) => match c {
                Composite::Sum(t) => t.iter().flat_map(|(_, f)| f.kinks()).collect(),
                Composite::Dilate { inner, lambda } => inner.kinks().into_iter().map(|k| k / lambda).collect(),
                Composite::DiracSym { inner, x0 } => inner
                    .kinks()
                    .into_iter()
                    .flat_map(|k| [k, k + x0, (k - x0).abs()])
                    .chain(std::iter::once(*x0))
                    .collect(),
                Composite::CosWeight { inner, .. } => inner.kinks(),
                Composite::Multiply(a, b) => a.kinks().into_iter().chain(b.kinks()).collect(),
                Composite::Convolve(..) | Composite::Transform(_) => vec![],
            },
        };
        out.retain(|k| k.is_finite() && *k > 0.0);
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        out
    }

    /// Smallest feature scale, used to size quadrature panels and scan grids.
    pub fn feature_scale(&self) -> f64 {
        let s = match &self.repr {
            Representation::ClosedForm(c) => 0.5 / c.dilation,
            Representation::Eigen(e) => {
                let k = e.top_index().unwrap_or(0) as f64;
                0.5 / (1.0 + k).sqrt()
            }
            Representation::Sampled(p) => {
                p.radii().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min).max(1e-6) * 4.0
            }
            Representation::Composite(c) => match c {
                Composite::Sum(t) => t.iter().map(|(_, f)| f.feature_scale()).fold(f64::INFINITY, f64::min),
                Composite::Dilate { inner, lambda } => inner.feature_scale() / lambda,
                Composite::DiracSym { inner, .. } => inner.feature_scale(),
                Composite::CosWeight { inner, x0 } => inner.feature_scale().min(0.25 / x0.abs().max(1e-9)),
                Composite::Multiply(a, b) => a.feature_scale().min(b.feature_scale()),
                Composite::Convolve(a, b) => a.feature_scale().max(b.feature_scale()),
                Composite::Transform(inner) => match inner.decay().radius() {
                    Some(r) if inner.decay().is_finite_range() => 0.25 / r.max(0.5),
                    _ => 0.1,
                },
            },
        };
        s.clamp(1e-4, 1.0)
    }

    /// Nonnegativity certificate past some radius, if one of the known arguments applies.
    pub fn tail_argument(&self) -> Option<TailArgument> {
        match self.repr {
            // the polynomial sign is exact; a negligible-decay argument would hide a negative tail
            Representation::Eigen(_) => self.structural_tail(),
            _ => self.structural_tail().or_else(|| self.decay_tail()),
        }
    }

    fn decay_tail(&self) -> Option<TailArgument> {
        match self.decay() {
            Decay::Compact(r) => Some(TailArgument::DecayBound { radius: r, constant: 0.0, power: 0.0 }),
            d @ Decay::InverseSquare { .. } => d
                .positivity_radius()
                .map(|r| TailArgument::DecayBound { radius: r, constant: d.envelope(r).unwrap_or(0.0), power: 2.0 }),
            Decay::Rapid(r) => Some(TailArgument::DecayBound { radius: r, constant: 1e-17, power: f64::INFINITY }),
            _ => None,
        }
    }

    fn structural_tail(&self) -> Option<TailArgument> {
        match &self.repr {
            Representation::ClosedForm(c) => {
                if c.amplitude == 0.0 {
                    return Some(TailArgument::ClosedFormPositivity { radius: 0.0 });
                }
                if c.amplitude > 0.0 {
                    c.kind.nonnegative_beyond().map(|r| TailArgument::ClosedFormPositivity { radius: r / c.dilation })
                } else {
                    c.kind.support().map(|r| TailArgument::ClosedFormPositivity { radius: r / c.dilation })
                }
            }
            Representation::Eigen(e) => {
                let lead = e.leading_sign();
                if lead == 0.0 {
                    return Some(TailArgument::PolynomialRootBound { radius: 0.0, leading_sign: 0.0 });
                }
                if lead < 0.0 {
                    return None;
                }
                e.root_bound_radius().map(|radius| TailArgument::PolynomialRootBound { radius, leading_sign: lead })
            }
            Representation::Sampled(p) => match p.tail() {
                Tail::Zero => Some(TailArgument::DecayBound { radius: p.last_radius(), constant: 0.0, power: 0.0 }),
                Tail::Decay { c, p: q } if *p.values().last().unwrap() >= 0.0 => {
                    Some(TailArgument::DecayBound { radius: p.last_radius(), constant: c, power: q })
                }
                Tail::Decay { .. } => None,
            },
            Representation::Composite(c) => match c {
                Composite::Sum(terms) => {
                    let mut radius: f64 = 0.0;
                    let mut all_closed = true;
                    let mut first: Option<TailArgument> = None;
                    for (w, f) in terms {
                        let arg = if *w >= 0.0 {
                            f.tail_argument()?
                        } else {
                            // a subtracted term must vanish identically past some radius
                            match f.decay() {
                                Decay::Compact(r) => TailArgument::ClosedFormPositivity { radius: r },
                                _ => return None,
                            }
                        };
                        all_closed &= matches!(arg, TailArgument::ClosedFormPositivity { .. });
                        radius = radius.max(arg.radius());
                        first.get_or_insert(arg);
                    }
                    let arg = first?;
                    Some(if all_closed {
                        TailArgument::ClosedFormPositivity { radius }
                    } else {
                        arg.with_radius(radius)
                    })
                }
                Composite::Dilate { inner, lambda } => {
                    inner.tail_argument().map(|a| a.with_radius(a.radius() / lambda))
                }
                Composite::DiracSym { inner, x0 } => inner.tail_argument().map(|a| a.with_radius(a.radius() + x0.abs())),
                Composite::CosWeight { inner, .. } => inner.tail_argument(),
                Composite::Multiply(a, b) => {
                    let (ta, tb) = (a.tail_argument()?, b.tail_argument()?);
                    Some(ta.with_radius(ta.radius().max(tb.radius())))
                }
                Composite::Convolve(a, b) => {
                    let (ta, tb) = (a.tail_argument()?, b.tail_argument()?);
                    if ta.radius() == 0.0 && tb.radius() == 0.0 {
                        Some(ta)
                    } else {
                        None
                    }
                }
                Composite::Transform(_) => None,
            },
        }
    }

    /// Support radius of `f`, if compact.
    pub fn support_radius(&self) -> Option<f64> {
        match self.decay() {
            Decay::Compact(r) => Some(r),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tent() -> FunctionSpec {
        FunctionSpec::closed(1, ClosedKind::Tent).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(tent().evaluate(0.0).unwrap(), 1.0);
        let a = 8.0 / (PI * PI);
        let p = FunctionSpec::closed_form(1, ClosedForm { kind: ClosedKind::Prop1Minimizer, amplitude: a, dilation: 1.0 })
            .unwrap();
        assert!((p.evaluate(0.0).unwrap() + 8.0 / (PI * PI)).abs() < 1e-15);
        assert!(p.evaluate(-1.0).is_err());
        assert!(p.evaluate(f64::NAN).is_err());
    }

    #[test]
    fn nan_parameters_are_rejected() {
        let bad = ClosedForm { kind: ClosedKind::Gaussian, amplitude: f64::NAN, dilation: 1.0 };
        assert!(FunctionSpec::closed_form(1, bad).is_err());
        let bad = ClosedForm { kind: ClosedKind::Gaussian, amplitude: 1.0, dilation: 0.0 };
        assert!(FunctionSpec::closed_form(1, bad).is_err());
        assert!(FunctionSpec::closed(2, ClosedKind::Tent).is_err());
    }

    #[test]
    fn sums_merge_eigen_terms() {
        let e1 = FunctionSpec::eigen(EigenExpansion::from_parity_coeffs(1, Sign::Plus, &[1.0, 0.5]).unwrap());
        let e2 = FunctionSpec::eigen(EigenExpansion::from_parity_coeffs(1, Sign::Plus, &[1.0]).unwrap());
        let s = e1.sub(&e2).unwrap();
        let e = s.as_eigen().expect("merged into one expansion");
        assert_eq!(e.coeffs(), &[0.0, 0.0, 0.5]);
    }

    #[test]
    fn tail_arguments_for_catalog_sums() {
        let sinc = FunctionSpec::closed(1, ClosedKind::SincSq).unwrap();
        let g = sinc.sub(&tent()).unwrap();
        assert_eq!(g.tail_argument(), Some(TailArgument::ClosedFormPositivity { radius: 1.0 }));
        // a subtracted non-compact function has no tail argument
        assert!(tent().sub(&sinc).unwrap().structural_tail().is_none());
        let gauss = FunctionSpec::closed(1, ClosedKind::Gaussian).unwrap().dilate(2.0).unwrap();
        assert_eq!(gauss.tail_argument().unwrap().radius(), 0.0);
    }

    #[test]
    fn dilation_folds_into_closed_forms() {
        let t = tent().dilate(2.0).unwrap().dilate(0.25).unwrap();
        assert_eq!(t.as_closed().unwrap().dilation, 0.5);
        assert!((t.value(1.0) - 0.5).abs() < 1e-15);
        assert_eq!(t.kinks(), vec![2.0]);
    }

    #[test]
    fn dirac_symmetrization_values() {
        let g = FunctionSpec::closed(1, ClosedKind::Gaussian).unwrap();
        let d = FunctionSpec::composite(1, Composite::DiracSym { inner: Arc::new(g), x0: 1.0 }).unwrap();
        assert!((d.value(0.0) - (2.0 * (-PI).exp() + 2.0)).abs() < 1e-15);
    }
}

//! Catalog of closed-form radial profiles and their Fourier duals.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use super::decay::{Decay, Osc};
use crate::transforms::bessel::bessel_j;
use crate::transforms::bump;
use crate::transforms::special::ball_volume;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedKind {
    /// `(1 - |x|)_+`
    Tent,
    /// `sin^2(pi x) / (pi x)^2`
    SincSq,
    /// `sin^2(pi (x - 1) / 2) / (x^2 - 1)`, the extremal bandlimited function
    Prop1Minimizer,
    /// `-(pi / 2) sin(2 pi |x|)` on `|x| <= 1/2`, zero outside
    Prop1MinimizerHat,
    /// `exp(-pi |x|^2)`
    Gaussian,
    /// `(2 - |x|)_+` read as a radial profile
    Chi,
    /// `(J_{d/2}(2 pi |x|) / |x|^{d/2})^2`
    ChiHat,
    /// volume of the intersection of two unit balls at distance `|x|`
    IndicatorBallAutocorr,
    /// `C exp(-1 / (1 - x^2))` on `(-1, 1)`, unit L2 norm (one-dimensional)
    Bump,
    BumpHat,
    /// `Bump * Bump`, supported on `[-2, 2]`
    BumpAutocorr,
    /// `BumpHat^2`
    BumpAutocorrHat,
}

impl ClosedKind {
    pub fn all() -> &'static [ClosedKind] {
        use ClosedKind::*;
        &[
            Tent,
            SincSq,
            Prop1Minimizer,
            Prop1MinimizerHat,
            Gaussian,
            Chi,
            ChiHat,
            IndicatorBallAutocorr,
            Bump,
            BumpHat,
            BumpAutocorr,
            BumpAutocorrHat,
        ]
    }

    pub fn name(self) -> &'static str {
        use ClosedKind::*;
        match self {
            Tent => "tent",
            SincSq => "sinc_sq",
            Prop1Minimizer => "prop1_minimizer",
            Prop1MinimizerHat => "prop1_minimizer_hat",
            Gaussian => "gaussian",
            Chi => "chi",
            ChiHat => "chi_hat",
            IndicatorBallAutocorr => "indicator_ball_autocorr",
            Bump => "bump",
            BumpHat => "bump_hat",
            BumpAutocorr => "bump_autocorr",
            BumpAutocorrHat => "bump_autocorr_hat",
        }
    }

    pub fn from_name(s: &str) -> Option<ClosedKind> {
        ClosedKind::all().iter().copied().find(|k| k.name() == s)
    }

    /// Kinds that only make sense on the real line.
    pub fn one_dimensional_only(self) -> bool {
        use ClosedKind::*;
        matches!(self, Tent | SincSq | Prop1Minimizer | Prop1MinimizerHat | Bump | BumpHat | BumpAutocorr | BumpAutocorrHat)
    }

    /// Fourier dual in dimension `dim`, if the catalog knows it.
    pub fn dual(self, dim: usize) -> Option<ClosedKind> {
        use ClosedKind::*;
        let one = dim == 1;
        match self {
            Tent if one => Some(SincSq),
            SincSq if one => Some(Tent),
            Prop1Minimizer if one => Some(Prop1MinimizerHat),
            Prop1MinimizerHat if one => Some(Prop1Minimizer),
            Gaussian => Some(Gaussian),
            Chi if one => Some(ChiHat),
            ChiHat => Some(IndicatorBallAutocorr),
            IndicatorBallAutocorr => Some(ChiHat),
            Bump if one => Some(BumpHat),
            BumpHat if one => Some(Bump),
            BumpAutocorr if one => Some(BumpAutocorrHat),
            BumpAutocorrHat if one => Some(BumpAutocorr),
            _ => None,
        }
    }

    /// Support radius of the undilated profile, if compact.
    pub fn support(self) -> Option<f64> {
        use ClosedKind::*;
        match self {
            Tent | Bump => Some(1.0),
            Prop1MinimizerHat => Some(0.5),
            Chi | IndicatorBallAutocorr | BumpAutocorr => Some(2.0),
            _ => None,
        }
    }

    /// Radii where the profile is not smooth.
    pub fn kinks(self) -> &'static [f64] {
        use ClosedKind::*;
        match self {
            Tent => &[1.0],
            Prop1MinimizerHat => &[0.5],
            Chi | IndicatorBallAutocorr => &[2.0],
            _ => &[],
        }
    }

    /// True when the undilated profile is nonnegative everywhere.
    pub fn nonnegative(self) -> bool {
        use ClosedKind::*;
        !matches!(self, Prop1Minimizer | Prop1MinimizerHat | BumpHat)
    }

    /// Radius beyond which the undilated profile is nonnegative (for positive amplitude).
    pub fn nonnegative_beyond(self) -> Option<f64> {
        use ClosedKind::*;
        match self {
            Prop1Minimizer => Some(1.0),
            Prop1MinimizerHat => Some(0.5),
            BumpHat => None,
            _ => Some(0.0),
        }
    }

    /// Undilated profile value at radius `r >= 0`.
    pub fn base_value(self, dim: usize, r: f64) -> f64 {
        use ClosedKind::*;
        let r = r.abs();
        match self {
            Tent => (1.0 - r).max(0.0),
            SincSq => {
                if r == 0.0 {
                    1.0
                } else {
                    let s = (PI * r).sin() / (PI * r);
                    s * s
                }
            }
            Prop1Minimizer => prop1_value(r),
            Prop1MinimizerHat => {
                if r < 0.5 {
                    -0.5 * PI * (2.0 * PI * r).sin()
                } else {
                    0.0
                }
            }
            Gaussian => (-PI * r * r).exp(),
            Chi => (2.0 - r).max(0.0),
            ChiHat => chi_hat(dim, r),
            IndicatorBallAutocorr => lens_volume(dim, r),
            Bump => bump::psi(r),
            BumpHat => bump::psi_hat(r),
            BumpAutocorr => bump::phi(r),
            BumpAutocorrHat => {
                let h = bump::psi_hat(r);
                h * h
            }
        }
    }
}

fn prop1_value(r: f64) -> f64 {
    let u = r - 1.0;
    if u.abs() < 1e-3 {
        // sin(pi u / 2) / u by its Taylor series, then times sin(pi u / 2) / (u + 2)
        let z = 0.5 * PI * u;
        let z2 = z * z;
        let ratio = 0.5
            * PI
            * (1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0 + z2.powi(4) / 362_880.0
                - z2.powi(5) / 39_916_800.0);
        return ratio * z.sin() / (u + 2.0);
    }
    let s = (0.5 * PI * u).sin();
    s * s / (u * (u + 2.0))
}

fn chi_hat(dim: usize, r: f64) -> f64 {
    let nu = dim as f64 / 2.0;
    if r < 1e-8 {
        let v = ball_volume(dim);
        return v * v;
    }
    let j = bessel_j(nu, 2.0 * PI * r);
    let q = j / r.powf(nu);
    q * q
}

/// `|B_1(0) ∩ B_1(x)|` in `R^d` for `|x| = r`.
pub fn lens_volume(dim: usize, r: f64) -> f64 {
    if r >= 2.0 {
        return 0.0;
    }
    let x = 1.0 - r * r / 4.0;
    ball_volume(dim) * beta_reg((dim as f64 + 1.0) / 2.0, 0.5, x)
}

/// Large-radius description of the undilated, unit-amplitude profile.
pub fn base_decay(kind: ClosedKind, dim: usize) -> Decay {
    use ClosedKind::*;
    if let Some(r) = kind.support() {
        return Decay::Compact(r);
    }
    let k = 1.0 / (2.0 * PI * PI);
    let osc = |amp: f64, freq: f64| Osc { amp, freq, phase: 0.0 };
    match kind {
        // exp(-pi r^2) < 2e-21 past 3.9
        Gaussian => Decay::Rapid(3.9),
        BumpHat => Decay::Rapid(bump::PSI_HAT_CUTOFF),
        BumpAutocorrHat => Decay::Rapid(64.0),
        // sin^2(pi r) = (1 - cos(2 pi r)) / 2
        SincSq => Decay::InverseSquare { from: 1.0, terms: vec![osc(k, 0.0), osc(-k, 2.0 * PI)], rem_c: 0.0, rem_q: 4.0 },
        // sin^2(pi(r-1)/2) = (1 + cos(pi r)) / 2 and 1/(r^2-1) - 1/r^2 = 1/(r^2 (r^2-1)) <= (4/3) r^-4 for r >= 2
        Prop1Minimizer => Decay::InverseSquare {
            from: 2.0,
            terms: vec![osc(0.5, 0.0), osc(0.5, PI)],
            rem_c: 4.0 / 3.0,
            rem_q: 4.0,
        },
        ChiHat if dim == 1 => {
            Decay::InverseSquare { from: 1.0, terms: vec![osc(k, 0.0), osc(-k, 4.0 * PI)], rem_c: 0.0, rem_q: 4.0 }
        }
        ChiHat => {
            // x J_nu(x)^2 <= 1.1 * 2 / pi once x >= max(nu^2, 2 pi) (checked numerically up to d = 24)
            let nu = dim as f64 / 2.0;
            let from = (nu * nu).max(2.0 * PI) / (2.0 * PI);
            Decay::Power { from, c: 1.1 / (PI * PI), p: dim as f64 + 1.0 }
        }
        _ => Decay::Unknown,
    }
}

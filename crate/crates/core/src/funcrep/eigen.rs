//! Radial Fourier eigenfunction expansions.
//!
//! `l_k(x) = n_k L_k^{(d/2-1)}(2 pi |x|^2) exp(-pi |x|^2)` has `hat(l_k) = (-1)^k l_k`
//! and unit L2 norm on `R^d`.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use super::Sign;
use crate::error::{Error, Result};
use crate::transforms::special::{laguerre_all, laguerre_monomial, sphere_area};

#[derive(Debug, Clone, PartialEq)]
pub struct EigenExpansion {
    dim: usize,
    sign: Sign,
    coeffs: Vec<f64>,
    norms: Vec<f64>,
}

/// Normalisation constant `n_k` making `l_k` a unit vector in `L^2(R^d)`.
pub fn basis_norm(dim: usize, k: usize) -> f64 {
    let a = dim as f64 / 2.0 - 1.0;
    let ln_sq = (0.5 * sphere_area(dim)).ln() - (dim as f64 / 2.0) * (2.0 * PI).ln() + ln_gamma(k as f64 + a + 1.0)
        - ln_gamma(k as f64 + 1.0);
    (-0.5 * ln_sq).exp()
}

/// Indices `k` whose eigenvalue `(-1)^k` equals `sign`, in increasing order.
pub fn parity_indices(sign: Sign, count: usize) -> Vec<usize> {
    let first = match sign {
        Sign::Plus => 0,
        Sign::Minus => 1,
    };
    (0..count).map(|i| first + 2 * i).collect()
}

impl EigenExpansion {
    /// `coeffs[k]` multiplies `l_k`; entries of the wrong parity must be zero.
    pub fn new(dim: usize, sign: Sign, coeffs: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        for (k, &c) in coeffs.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::InvalidParameter(format!("coefficient {k} is not finite")));
            }
            if c != 0.0 && Sign::of_index(k) != sign {
                return Err(Error::InvalidParameter(format!(
                    "coefficient {k} is nonzero but (-1)^{k} does not match sign {sign}"
                )));
            }
        }
        let norms = (0..coeffs.len()).map(|k| basis_norm(dim, k)).collect();
        Ok(EigenExpansion { dim, sign, coeffs, norms })
    }

    /// Builds from coefficients on the parity-matching basis only (`k = j*2 + (0|1)`).
    pub fn from_parity_coeffs(dim: usize, sign: Sign, parity: &[f64]) -> Result<Self> {
        let idx = parity_indices(sign, parity.len());
        let len = idx.last().map_or(0, |k| k + 1);
        let mut coeffs = vec![0.0; len];
        for (&k, &c) in idx.iter().zip(parity) {
            coeffs[k] = c;
        }
        Self::new(dim, sign, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Highest index with a nonzero coefficient.
    pub fn top_index(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    fn norm(&self, k: usize) -> f64 {
        self.norms[k]
    }

    /// Polynomial part `P(u) = sum c_k n_k L_k(u)` at `u = 2 pi r^2`.
    pub fn poly_part(&self, r: f64) -> f64 {
        let u = 2.0 * PI * r * r;
        let a = self.dim as f64 / 2.0 - 1.0;
        let Some(top) = self.top_index() else { return 0.0 };
        let l = laguerre_all(top, a, u);
        (0..=top).map(|k| self.coeffs[k] * self.norm(k) * l[k]).sum()
    }

    pub fn value(&self, r: f64) -> f64 {
        self.poly_part(r) * (-PI * r * r).exp()
    }

    /// A positive multiple of `P(2 pi r^2)`: same sign, no overflow at large radii.
    pub fn sign_value(&self, r: f64) -> f64 {
        let u = 2.0 * PI * r * r;
        if u < 200.0 {
            return self.poly_part(r);
        }
        self.sign_value_with_noise(r).0
    }

    /// `sign_value` together with the same multiple of `sum |c_k n_k L_k(u)|`,
    /// which sizes the rounding noise of the sum.
    pub fn sign_value_with_noise(&self, r: f64) -> (f64, f64) {
        let u = 2.0 * PI * r * r;
        let a = self.dim as f64 / 2.0 - 1.0;
        let Some(top) = self.top_index() else { return (0.0, 0.0) };
        let (mut prev, mut cur) = (1.0, 1.0 + a - u);
        let mut sum = self.coeffs[0] * self.norm(0) * prev;
        let mut abs = sum.abs();
        if top >= 1 {
            let t = self.coeffs[1] * self.norm(1) * cur;
            sum += t;
            abs += t.abs();
        }
        for k in 1..top {
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0 + a - u) * cur - (kf + a) * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
            if cur.abs() > 1e200 {
                prev *= 1e-200;
                cur *= 1e-200;
                sum *= 1e-200;
                abs *= 1e-200;
            }
            let t = self.coeffs[k + 1] * self.norm(k + 1) * cur;
            sum += t;
            abs += t.abs();
        }
        (sum, abs)
    }

    /// Fujiwara bound on the positive roots of `P` in `u`, as a radius.
    ///
    /// Beyond it `P` has the sign of its leading coefficient.
    pub fn root_bound_radius(&self) -> Option<f64> {
        let top = self.top_index()?;
        if top == 0 {
            return Some(0.0);
        }
        let a = self.dim as f64 / 2.0 - 1.0;
        let mut mono = vec![0.0; top + 1];
        for k in 0..=top {
            let c = self.coeffs[k];
            if c == 0.0 {
                continue;
            }
            let w = c * self.norm(k);
            for (j, m) in laguerre_monomial(k, a).into_iter().enumerate() {
                mono[j] += w * m;
            }
        }
        let lead = mono[top];
        if lead == 0.0 {
            return None;
        }
        let mut bound: f64 = 0.0;
        for i in 1..=top {
            let mut ratio = (mono[top - i] / lead).abs();
            if i == top {
                ratio /= 2.0;
            }
            bound = bound.max(ratio.powf(1.0 / i as f64));
        }
        let u_max = 2.0 * bound;
        Some((u_max / (2.0 * PI)).sqrt())
    }

    /// Sign of `P` as `u -> infinity`: `sign(c_top) * (-1)^top`.
    pub fn leading_sign(&self) -> f64 {
        match self.top_index() {
            None => 0.0,
            Some(top) => self.coeffs[top].signum() * if top % 2 == 0 { 1.0 } else { -1.0 },
        }
    }

    /// Radius past which every basis term is below `eps` in absolute value.
    pub fn negligible_radius(&self, eps: f64) -> f64 {
        let a = self.dim as f64 / 2.0 - 1.0;
        let Some(top) = self.top_index() else { return 0.0 };
        let mut r = 1.0;
        loop {
            let u = 2.0 * PI * r * r;
            let l = laguerre_all(top, a, u);
            let env: f64 = (0..=top).map(|k| (self.coeffs[k] * self.norm(k) * l[k]).abs()).sum::<f64>()
                * (-PI * r * r).exp();
            if env < eps || r > 60.0 {
                return r;
            }
            r += 0.25;
        }
    }

    /// Fourier transform: coefficient `k` picks up `(-1)^k`.
    pub fn transformed(&self) -> EigenExpansion {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c } else { -c })
            .collect();
        EigenExpansion { dim: self.dim, sign: self.sign, coeffs, norms: self.norms.clone() }
    }

    pub fn scaled(&self, c: f64) -> EigenExpansion {
        EigenExpansion {
            dim: self.dim,
            sign: self.sign,
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
            norms: self.norms.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::quadrature::Quadrature;

    #[test]
    fn basis_has_unit_norm() {
        let q = Quadrature::default();
        for &d in &[1usize, 2, 3, 8] {
            for k in [0usize, 1, 4, 9] {
                let mut c = vec![0.0; k + 1];
                c[k] = 1.0;
                let e = EigenExpansion::new(d, Sign::of_index(k), c).unwrap();
                let v = q
                    .integrate_panels(&|r: f64| r.powi(d as i32 - 1) * e.value(r).powi(2), 0.0, 12.0, 48)
                    .unwrap()
                    .value
                    * sphere_area(d);
                assert!((v - 1.0).abs() < 1e-10, "d={d} k={k}: {v}");
            }
        }
    }

    #[test]
    fn hermite_case_in_one_dimension() {
        // l_0 in d = 1 is 2^(1/4) exp(-pi x^2)
        let e = EigenExpansion::new(1, Sign::Plus, vec![1.0]).unwrap();
        assert!((e.value(0.3) - 2f64.powf(0.25) * (-PI * 0.09f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn wrong_parity_is_rejected() {
        assert!(EigenExpansion::new(1, Sign::Plus, vec![1.0, 0.5]).is_err());
        assert!(EigenExpansion::new(1, Sign::Minus, vec![0.0, 0.5, 0.0, 1.0]).is_ok());
    }

    #[test]
    fn sign_value_matches_poly_part_sign() {
        let e = EigenExpansion::from_parity_coeffs(3, Sign::Minus, &[0.3, -0.2, 0.5, 0.1]).unwrap();
        for &r in &[5.7, 6.0, 8.0, 20.0] {
            assert_eq!(e.sign_value(r).signum(), e.poly_part(r).signum());
            let ratio = e.sign_value(r) / e.poly_part(r);
            assert!((ratio - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn root_bound_is_an_upper_bound() {
        let e = EigenExpansion::from_parity_coeffs(1, Sign::Plus, &[1.0, -0.7, 0.4, 0.25]).unwrap();
        let rb = e.root_bound_radius().unwrap();
        let lead = e.leading_sign();
        for i in 0..200 {
            let r = rb * (1.0 + i as f64 * 0.05);
            assert_eq!(e.sign_value(r).signum(), lead);
        }
    }
}

//! Large-radius behaviour of a radial profile.
//!
//! Tail integrals and eventual-sign arguments are only as good as this
//! description, so every constructor keeps its constants explicit.

use crate::transforms::special::{cos_over_r2_tail, sin_over_r2_tail};

/// `amp * cos(freq * r + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Osc {
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
}

impl Osc {
    fn normalised(self) -> Osc {
        if self.freq < 0.0 {
            Osc { amp: self.amp, freq: -self.freq, phase: -self.phase }
        } else {
            self
        }
    }

    /// `int_t^inf amp cos(freq r + phase) / r^2 dr`.
    pub fn tail_integral(self, t: f64) -> f64 {
        let o = self.normalised();
        let (s, c) = o.phase.sin_cos();
        o.amp * (c * cos_over_r2_tail(o.freq, t) - s * sin_over_r2_tail(o.freq, t))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decay {
    /// Identically zero past the radius.
    Compact(f64),
    /// Below 1e-17 of its scale past the radius, faster than any power.
    Rapid(f64),
    /// For `r >= from`: `f(r) = sum(terms) / r^2 + E(r)` with `|E(r)| <= rem_c * r^-rem_q`.
    InverseSquare { from: f64, terms: Vec<Osc>, rem_c: f64, rem_q: f64 },
    /// `|f(r)| <= c r^-p` for `r >= from`.
    Power { from: f64, c: f64, p: f64 },
    Unknown,
}

impl Decay {
    pub fn radius(&self) -> Option<f64> {
        match *self {
            Decay::Compact(r) | Decay::Rapid(r) => Some(r),
            Decay::InverseSquare { from, .. } | Decay::Power { from, .. } => Some(from),
            Decay::Unknown => None,
        }
    }

    pub fn is_finite_range(&self) -> bool {
        matches!(self, Decay::Compact(_) | Decay::Rapid(_))
    }

    /// Largest oscillation frequency in the tail terms.
    pub fn max_freq(&self) -> f64 {
        match self {
            Decay::InverseSquare { terms, .. } => terms.iter().map(|t| t.freq.abs()).fold(0.0, f64::max),
            _ => 0.0,
        }
    }

    /// Sum of `|amp|` over the inverse-square terms.
    fn amp_sum(terms: &[Osc]) -> f64 {
        terms.iter().map(|t| t.amp.abs()).sum()
    }

    /// Weakest power-law envelope implied by this description.
    pub fn as_power(&self) -> Option<(f64, f64, f64)> {
        match self {
            Decay::InverseSquare { from, terms, rem_c, rem_q } => {
                let f = from.max(1.0);
                Some((f, Self::amp_sum(terms) + rem_c * f.powf(2.0 - rem_q), 2.0))
            }
            Decay::Power { from, c, p } => Some((*from, *c, *p)),
            _ => None,
        }
    }

    pub fn scaled(&self, k: f64) -> Decay {
        if k == 0.0 {
            return Decay::Compact(0.0);
        }
        match self {
            Decay::InverseSquare { from, terms, rem_c, rem_q } => Decay::InverseSquare {
                from: *from,
                terms: terms.iter().map(|t| Osc { amp: k * t.amp, ..*t }).collect(),
                rem_c: rem_c * k.abs(),
                rem_q: *rem_q,
            },
            Decay::Power { from, c, p } => Decay::Power { from: *from, c: c * k.abs(), p: *p },
            other => other.clone(),
        }
    }

    /// Description of `f(lambda r)`.
    pub fn dilated(&self, lambda: f64) -> Decay {
        match self {
            Decay::Compact(r) => Decay::Compact(r / lambda),
            Decay::Rapid(r) => Decay::Rapid(r / lambda),
            Decay::InverseSquare { from, terms, rem_c, rem_q } => Decay::InverseSquare {
                from: from / lambda,
                terms: terms
                    .iter()
                    .map(|t| Osc { amp: t.amp / (lambda * lambda), freq: t.freq * lambda, phase: t.phase })
                    .collect(),
                rem_c: rem_c * lambda.powf(-rem_q),
                rem_q: *rem_q,
            },
            Decay::Power { from, c, p } => Decay::Power { from: from / lambda, c: c * lambda.powf(-p), p: *p },
            Decay::Unknown => Decay::Unknown,
        }
    }

    pub fn sum(&self, other: &Decay) -> Decay {
        use Decay::*;
        match (self, other) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (Compact(a), Compact(b)) => Compact(a.max(*b)),
            (Compact(a) | Rapid(a), Compact(b) | Rapid(b)) => Rapid(a.max(*b)),
            (Compact(r) | Rapid(r), InverseSquare { from, terms, rem_c, rem_q })
            | (InverseSquare { from, terms, rem_c, rem_q }, Compact(r) | Rapid(r)) => InverseSquare {
                from: from.max(*r),
                terms: terms.clone(),
                rem_c: *rem_c,
                rem_q: *rem_q,
            },
            (Compact(r) | Rapid(r), Power { from, c, p }) | (Power { from, c, p }, Compact(r) | Rapid(r)) => {
                Power { from: from.max(*r), c: *c, p: *p }
            }
            (
                InverseSquare { from: f1, terms: t1, rem_c: c1, rem_q: q1 },
                InverseSquare { from: f2, terms: t2, rem_c: c2, rem_q: q2 },
            ) => {
                let from = f1.max(*f2).max(1.0);
                let q = q1.min(*q2);
                // r^-q_i <= r^-q for r >= 1
                InverseSquare { from, terms: t1.iter().chain(t2).copied().collect(), rem_c: c1 + c2, rem_q: q }
            }
            (InverseSquare { from, terms, rem_c, rem_q }, Power { from: fp, c, p })
            | (Power { from: fp, c, p }, InverseSquare { from, terms, rem_c, rem_q })
                if *p > 2.0 =>
            {
                let from = from.max(*fp).max(1.0);
                let q = rem_q.min(*p);
                InverseSquare { from, terms: terms.clone(), rem_c: rem_c + c, rem_q: q }
            }
            (a, b) => {
                let (f1, c1, p1) = a.as_power().unwrap();
                let (f2, c2, p2) = b.as_power().unwrap();
                let from = f1.max(f2).max(1.0);
                Power { from, c: c1 + c2, p: p1.min(p2) }
            }
        }
    }

    /// Description of `f(r - x0) + f(r + x0) + 2 f(r)` on the line.
    pub fn dirac_symmetrized(&self, x0: f64) -> Decay {
        match self {
            Decay::Compact(r) => Decay::Compact(r + x0),
            Decay::Rapid(r) => Decay::Rapid(r + x0),
            Decay::InverseSquare { from, terms, rem_c, rem_q } => {
                let a = Self::amp_sum(terms);
                let mut out = Vec::with_capacity(3 * terms.len());
                for t in terms {
                    out.push(Osc { phase: t.phase - t.freq * x0, ..*t });
                    out.push(Osc { phase: t.phase + t.freq * x0, ..*t });
                    out.push(Osc { amp: 2.0 * t.amp, ..*t });
                }
                // for r >= 2 x0: |1/(r -+ x0)^2 - 1/r^2| <= (8 or 2) x0 / r^3 and (r - x0)^-q <= 2^q r^-q
                let q = rem_q.min(3.0);
                let from = (from + x0).max(2.0 * x0).max(1.0);
                let rem = (2f64.powf(*rem_q) + 1.0 + 2.0) * rem_c + 10.0 * x0 * a;
                Decay::InverseSquare { from, terms: out, rem_c: rem, rem_q: q }
            }
            Decay::Power { from, c, p } => Decay::Power {
                from: (from + x0).max(2.0 * x0),
                c: (2f64.powf(*p) + 3.0) * c,
                p: *p,
            },
            Decay::Unknown => Decay::Unknown,
        }
    }

    /// Description of `(2 cos(2 pi x0 r) + 2) f(r)`.
    pub fn cos_weighted(&self, x0: f64) -> Decay {
        let nu = 2.0 * std::f64::consts::PI * x0;
        match self {
            Decay::InverseSquare { from, terms, rem_c, rem_q } => {
                let mut out = Self::modulate_terms(terms, nu);
                out.extend(terms.iter().map(|t| Osc { amp: 2.0 * t.amp, ..*t }));
                Decay::InverseSquare { from: *from, terms: out, rem_c: 4.0 * rem_c, rem_q: *rem_q }
            }
            Decay::Power { from, c, p } => Decay::Power { from: *from, c: 4.0 * c, p: *p },
            other => other.clone(),
        }
    }

    fn modulate_terms(terms: &[Osc], nu: f64) -> Vec<Osc> {
        // 2 cos(nu r) * a cos(w r + ph) = a cos((w + nu) r + ph) + a cos((w - nu) r + ph)
        terms
            .iter()
            .flat_map(|t| {
                [Osc { freq: t.freq + nu, ..*t }.normalised(), Osc { freq: t.freq - nu, ..*t }.normalised()]
            })
            .collect()
    }

    /// Description of `2 cos(nu r) f(r)`, the one-dimensional Fourier kernel.
    pub fn modulated(&self, nu: f64) -> Decay {
        match self {
            Decay::InverseSquare { from, terms, rem_c, rem_q } => Decay::InverseSquare {
                from: *from,
                terms: Self::modulate_terms(terms, nu),
                rem_c: 2.0 * rem_c,
                rem_q: *rem_q,
            },
            Decay::Power { from, c, p } => Decay::Power { from: *from, c: 2.0 * c, p: *p },
            other => other.clone(),
        }
    }

    pub fn product(&self, other: &Decay) -> Decay {
        use Decay::*;
        match (self, other) {
            (Compact(a), Compact(b)) => Compact(a.min(*b)),
            (Compact(a), _) | (_, Compact(a)) => Compact(*a),
            (Rapid(a), Rapid(b)) => Rapid(a.min(*b)),
            (Rapid(a), _) | (_, Rapid(a)) => Rapid(*a),
            (Unknown, _) | (_, Unknown) => Unknown,
            (a, b) => {
                let (f1, c1, p1) = a.as_power().unwrap();
                let (f2, c2, p2) = b.as_power().unwrap();
                Power { from: f1.max(f2), c: c1 * c2, p: p1 + p2 }
            }
        }
    }

    pub fn convolved(&self, other: &Decay) -> Decay {
        use Decay::*;
        match (self, other) {
            (Compact(a), Compact(b)) => Compact(a + b),
            (Compact(a) | Rapid(a), Compact(b) | Rapid(b)) => Rapid(a + b),
            _ => Unknown,
        }
    }

    /// Upper bound for `|f(r)|` at `r >= radius()`.
    pub fn envelope(&self, r: f64) -> Option<f64> {
        match self {
            Decay::Compact(_) | Decay::Rapid(_) => Some(0.0),
            Decay::InverseSquare { terms, rem_c, rem_q, .. } => {
                Some(Self::amp_sum(terms) / (r * r) + rem_c * r.powf(-rem_q))
            }
            Decay::Power { c, p, .. } => Some(c * r.powf(-p)),
            Decay::Unknown => None,
        }
    }

    /// Radius past which the leading inverse-square part keeps `f` nonnegative,
    /// when its non-oscillating coefficient dominates the oscillating ones.
    pub fn positivity_radius(&self) -> Option<f64> {
        match self {
            Decay::Compact(r) => Some(*r),
            Decay::InverseSquare { from, terms, rem_c, rem_q } => {
                let constant: f64 =
                    terms.iter().filter(|t| t.freq == 0.0).map(|t| t.amp * t.phase.cos()).sum();
                let osc: f64 = terms.iter().filter(|t| t.freq != 0.0).map(|t| t.amp.abs()).sum();
                let m = constant - osc;
                if m <= 0.0 {
                    return None;
                }
                if *rem_c == 0.0 {
                    return Some(*from);
                }
                // m / r^2 > rem_c r^-q  <=>  r > (rem_c / m)^(1 / (q - 2))
                if *rem_q <= 2.0 {
                    return None;
                }
                Some(from.max((rem_c / m).powf(1.0 / (rem_q - 2.0))))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn osc_tail_matches_pure_cases() {
        let o = Osc { amp: 2.0, freq: 3.0, phase: 0.0 };
        assert!((o.tail_integral(5.0) - 2.0 * cos_over_r2_tail(3.0, 5.0)).abs() < 1e-15);
        let s = Osc { amp: 1.0, freq: 3.0, phase: -PI / 2.0 };
        // cos(3r - pi/2) = sin(3r)
        assert!((s.tail_integral(5.0) - sin_over_r2_tail(3.0, 5.0)).abs() < 1e-14);
        let neg = Osc { amp: 1.0, freq: -3.0, phase: 0.4 };
        let pos = Osc { amp: 1.0, freq: 3.0, phase: -0.4 };
        assert!((neg.tail_integral(2.0) - pos.tail_integral(2.0)).abs() < 1e-15);
    }

    #[test]
    fn dilation_and_scaling() {
        let d = Decay::InverseSquare { from: 1.0, terms: vec![Osc { amp: 1.0, freq: PI, phase: 0.0 }], rem_c: 1.0, rem_q: 4.0 };
        if let Decay::InverseSquare { from, terms, rem_c, .. } = d.dilated(2.0) {
            assert_eq!(from, 0.5);
            assert_eq!(terms[0].amp, 0.25);
            assert_eq!(terms[0].freq, 2.0 * PI);
            assert_eq!(rem_c, 1.0 / 16.0);
        } else {
            panic!("shape changed");
        }
        assert_eq!(Decay::Compact(2.0).dilated(4.0), Decay::Compact(0.5));
    }

    #[test]
    fn sums_keep_the_weakest_tail() {
        assert_eq!(Decay::Compact(1.0).sum(&Decay::Compact(3.0)), Decay::Compact(3.0));
        assert_eq!(Decay::Compact(1.0).sum(&Decay::Rapid(0.5)), Decay::Rapid(1.0));
        assert_eq!(Decay::Compact(1.0).sum(&Decay::Unknown), Decay::Unknown);
        let p = Decay::Power { from: 1.0, c: 1.0, p: 3.0 }.sum(&Decay::Power { from: 2.0, c: 2.0, p: 2.5 });
        assert_eq!(p, Decay::Power { from: 2.0, c: 3.0, p: 2.5 });
    }

    #[test]
    fn positivity_radius_needs_a_dominant_constant() {
        let k = 1.0 / (2.0 * PI * PI);
        let sinc = Decay::InverseSquare {
            from: 1.0,
            terms: vec![Osc { amp: k, freq: 0.0, phase: 0.0 }, Osc { amp: -k, freq: 2.0 * PI, phase: 0.0 }],
            rem_c: 0.0,
            rem_q: 4.0,
        };
        // touches zero at the integers, so no strict margin
        assert_eq!(sinc.positivity_radius(), None);
        let dominant = Decay::InverseSquare {
            from: 1.0,
            terms: vec![Osc { amp: 1.0, freq: 0.0, phase: 0.0 }, Osc { amp: 0.5, freq: 2.0, phase: 0.0 }],
            rem_c: 2.0,
            rem_q: 3.0,
        };
        assert_eq!(dominant.positivity_radius(), Some(4.0));
    }
}

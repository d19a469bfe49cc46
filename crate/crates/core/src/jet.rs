//! Truncated power series in one variable.
//!
//! A [`Jet`] of order `n` stores the Taylor coefficients `c[0..=n]` of a
//! function around a point; products and reciprocals are truncated at the
//! same order. The Frenet Laplacian coefficients are expanded in `eta`
//! around the interface this way, which gives their `eta`-derivatives
//! without finite differences.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// `value + slope * t`, truncated at `order`.
    pub fn linear(value: f64, slope: f64, order: usize) -> Self {
        let mut j = Jet::constant(value, order);
        if order >= 1 {
            j.coeffs[1] = slope;
        }
        j
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Taylor coefficient of `t^k`.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.coeff(k) * fact
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// Multiplicative inverse; panics if the constant term is zero.
    pub fn recip(&self) -> Jet {
        let c0 = self.coeffs[0];
        assert!(c0 != 0.0, "reciprocal of a jet with zero constant term");
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        out[0] = 1.0 / c0;
        for k in 1..n {
            let s: f64 = (1..=k).map(|i| self.coeffs[i] * out[k - i]).sum();
            out[k] = -s / c0;
        }
        Jet { coeffs: out }
    }

    pub fn powi(&self, p: u32) -> Jet {
        let mut acc = Jet::constant(1.0, self.order());
        for _ in 0..p {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Substitute `t = lambda * t'`: coefficient `k` is multiplied by `lambda^k`.
    pub fn rescale_variable(&self, lambda: f64) -> Jet {
        let mut f = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * f;
                f *= lambda;
                v
            })
            .collect();
        Jet { coeffs }
    }
}

impl<'a> Mul<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = vec![0.0; n];
        for (k, o) in out.iter_mut().enumerate() {
            *o = (0..=k).map(|i| self.coeffs[i] * rhs.coeffs[k - i]).sum();
        }
        Jet { coeffs: out }
    }
}

impl<'a> Add<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        Jet {
            coeffs: (0..n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect(),
        }
    }
}

impl<'a> Sub<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        Jet {
            coeffs: (0..n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect(),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

//! Gauss rules, Legendre polynomials, nodal Lagrange bases and a small
//! bivariate polynomial type.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(q >= 1, "a Gauss rule needs at least one point");
    let mut x = vec![0.0; q];
    let mut w = vec![0.0; q];
    for i in 0..q.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(q, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(q, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[q - 1 - i] = z;
        w[i] = wi;
        w[q - 1 - i] = wi;
    }
    if q % 2 == 1 {
        x[q / 2] = 0.0;
    }
    (x, w)
}

/// Gauss rule mapped to `[a, b]`.
pub fn gauss_interval(a: f64, b: f64, q: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(q);
    let (m, r) = ((a + b) / 2.0, (b - a) / 2.0);
    (
        x.iter().map(|t| m + r * t).collect(),
        w.iter().map(|v| v * r).collect(),
    )
}

/// `(P_n(x), P_n'(x))`.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let v = legendre_all(n, x);
    (v[n].0, v[n].1)
}

/// `(P_k, P_k', P_k'')` at `x` for `k = 0..=n`.
pub fn legendre_all(n: usize, x: f64) -> Vec<(f64, f64, f64)> {
    let mut out = vec![(1.0, 0.0, 0.0)];
    if n == 0 {
        return out;
    }
    out.push((x, 1.0, 0.0));
    for k in 1..n {
        let kf = k as f64;
        let (p, dp, ddp) = out[k];
        let (pm, dpm, ddpm) = out[k - 1];
        let a = (2.0 * kf + 1.0) / (kf + 1.0);
        let b = kf / (kf + 1.0);
        out.push((
            a * x * p - b * pm,
            a * (p + x * dp) - b * dpm,
            a * (2.0 * dp + x * ddp) - b * ddpm,
        ));
    }
    out
}

/// Power-basis coefficients of `P_0..=P_n` (entry `[k][i]` multiplies `x^i`).
pub fn legendre_coeffs(n: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![1.0]];
    if n >= 1 {
        out.push(vec![0.0, 1.0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let mut next = vec![0.0; k + 2];
        for (i, c) in out[k].iter().enumerate() {
            next[i + 1] += (2.0 * kf + 1.0) / (kf + 1.0) * c;
        }
        for (i, c) in out[k - 1].iter().enumerate() {
            next[i] -= kf / (kf + 1.0) * c;
        }
        out.push(next);
    }
    out
}

/// Gauss–Lobatto nodes on `[-1, 1]` for degree `m`.
pub fn lobatto_nodes(m: usize) -> Vec<f64> {
    assert!(m >= 1);
    let mut nodes = vec![-1.0];
    // interior nodes are the roots of P_m'
    for i in 1..m {
        let mut z = -(PI * i as f64 / m as f64).cos();
        for _ in 0..100 {
            let v = legendre_all(m, z);
            let (d1, d2) = (v[m].1, v[m].2);
            let dz = d1 / d2;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(z);
    }
    nodes.push(1.0);
    nodes
}

/// 1D Lagrange basis on the given nodes: values and derivatives at `x`.
pub fn lagrange_1d(nodes: &[f64], x: f64) -> (Vec<f64>, Vec<f64>) {
    let n = nodes.len();
    let mut val = vec![0.0; n];
    let mut der = vec![0.0; n];
    for i in 0..n {
        let mut v = 1.0;
        for j in 0..n {
            if j != i {
                v *= (x - nodes[j]) / (nodes[i] - nodes[j]);
            }
        }
        val[i] = v;
        let mut d = 0.0;
        for k in 0..n {
            if k == i {
                continue;
            }
            let mut t = 1.0 / (nodes[i] - nodes[k]);
            for j in 0..n {
                if j != i && j != k {
                    t *= (x - nodes[j]) / (nodes[i] - nodes[j]);
                }
            }
            d += t;
        }
        der[i] = d;
    }
    (val, der)
}

/// Bivariate polynomial `sum c[j*(m+1)+i] t^j u^i` with `0 <= i, j <= m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    degree: usize,
    coeffs: Vec<f64>,
}

impl Poly2 {
    pub fn zero(degree: usize) -> Self {
        Poly2 {
            degree,
            coeffs: vec![0.0; (degree + 1) * (degree + 1)],
        }
    }

    pub fn monomial(degree: usize, j: usize, i: usize) -> Self {
        let mut p = Poly2::zero(degree);
        p.coeffs[j * (degree + 1) + i] = 1.0;
        p
    }

    pub fn from_coeffs(degree: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), (degree + 1) * (degree + 1));
        Poly2 { degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `t^j u^i`.
    pub fn coeff(&self, j: usize, i: usize) -> f64 {
        self.coeffs[j * (self.degree + 1) + i]
    }

    pub fn scale(&self, s: f64) -> Poly2 {
        Poly2 {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Value and partial derivatives `(p, p_t, p_u)`.
    pub fn eval_grad(&self, t: f64, u: f64) -> (f64, f64, f64) {
        let m = self.degree;
        let mut tp = vec![1.0; m + 1];
        let mut up = vec![1.0; m + 1];
        for k in 1..=m {
            tp[k] = tp[k - 1] * t;
            up[k] = up[k - 1] * u;
        }
        let (mut v, mut dt, mut du) = (0.0, 0.0, 0.0);
        for j in 0..=m {
            for i in 0..=m {
                let c = self.coeffs[j * (m + 1) + i];
                if c == 0.0 {
                    continue;
                }
                v += c * tp[j] * up[i];
                if j > 0 {
                    dt += c * j as f64 * tp[j - 1] * up[i];
                }
                if i > 0 {
                    du += c * i as f64 * tp[j] * up[i - 1];
                }
            }
        }
        (v, dt, du)
    }

    pub fn eval(&self, t: f64, u: f64) -> f64 {
        self.eval_grad(t, u).0
    }

    /// Coefficients in `u` of the `t^j` term.
    pub fn t_slice(&self, j: usize) -> Vec<f64> {
        let m = self.degree;
        if j > m {
            return vec![0.0; m + 1];
        }
        self.coeffs[j * (m + 1)..(j + 1) * (m + 1)].to_vec()
    }
}

/// Evaluate a 1D power series with coefficients `c` and its first two derivatives.
pub fn eval_1d(c: &[f64], u: f64) -> (f64, f64, f64) {
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    let mut up = 1.0;
    for i in 0..c.len() {
        v += c[i] * up;
        if i + 1 < c.len() {
            d1 += c[i + 1] * (i + 1) as f64 * up;
        }
        if i + 2 < c.len() {
            d2 += c[i + 2] * ((i + 2) * (i + 1)) as f64 * up;
        }
        up *= u;
    }
    (v, d1, d2)
}

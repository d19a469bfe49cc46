//! Local Frenet IFE basis on an interface element, built as the direct sum
//! of `X0` (continuous polynomials with vanishing normal derivative on the
//! interface and the weak operator conditions) and `X1 / beta` (polynomials
//! vanishing on the interface, divided by the side coefficient).
//!
//! Polynomials live in the scaled variables `t = eta / h`,
//! `u = (xi - xi_c) / delta` on `[-1, 1] x [-1, 1]`.

use nalgebra::DMatrix;
use serde::Serialize;

use super::laplacian::laplacian_jets;
use crate::error::{Error, Result};
use crate::geometry::{FrenetChart, Side};
use crate::poly::{gauss_legendre, legendre_all, Poly2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// Member of `X0`: the same polynomial on both sides.
    Continuous,
    /// Member of `X1` divided by the side coefficient.
    Weighted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IfeFunction {
    pub minus: Poly2,
    pub plus: Poly2,
    pub origin: Origin,
}

impl IfeFunction {
    pub fn side(&self, side: Side) -> &Poly2 {
        match side {
            Side::Minus => &self.minus,
            Side::Plus => &self.plus,
        }
    }
}

/// Affine change of variables between `(eta, xi)` and `(t, u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetScaling {
    pub h: f64,
    pub xi_c: f64,
    pub delta: f64,
}

impl FrenetScaling {
    pub fn new(h: f64, interval: (f64, f64)) -> Self {
        FrenetScaling {
            h,
            xi_c: 0.5 * (interval.0 + interval.1),
            delta: 0.5 * (interval.1 - interval.0),
        }
    }

    pub fn to_scaled(&self, eta: f64, xi: f64) -> (f64, f64) {
        (eta / self.h, (xi - self.xi_c) / self.delta)
    }

    pub fn xi_of(&self, u: f64) -> f64 {
        self.xi_c + self.delta * u
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceBasis {
    pub degree: usize,
    pub scaling: FrenetScaling,
    pub beta_minus: f64,
    pub beta_plus: f64,
    pub functions: Vec<IfeFunction>,
}

impl InterfaceBasis {
    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    pub fn beta(&self, side: Side) -> f64 {
        match side {
            Side::Minus => self.beta_minus,
            Side::Plus => self.beta_plus,
        }
    }

    /// `(phi, phi_eta, phi_xi)` for every basis function.
    pub fn eval_frenet(&self, side: Side, eta: f64, xi: f64) -> Vec<(f64, f64, f64)> {
        let (t, u) = self.scaling.to_scaled(eta, xi);
        let (h, d) = (self.scaling.h, self.scaling.delta);
        self.functions
            .iter()
            .map(|f| {
                let (v, pt, pu) = f.side(side).eval_grad(t, u);
                (v, pt / h, pu / d)
            })
            .collect()
    }
}

/// Coefficient of `t^j` in `h^2 L(t^jp u^i)`, as a function of `u`, given the
/// scaled coefficient jets (`at[l]` multiplies `t^l`).
fn operator_coef(j: usize, jp: usize, i: usize, u: f64, at: &[f64], bt: &[f64], ct: &[f64]) -> f64 {
    let upow = |k: i64| if k < 0 { 0.0 } else { u.powi(k as i32) };
    let i_f = i as f64;
    let mut s = 0.0;
    if jp == j + 2 {
        s += ((j + 2) * (j + 1)) as f64 * upow(i as i64);
    }
    for l in 0..=j {
        if jp + l == j + 1 {
            s += at[l] * (j - l + 1) as f64 * upow(i as i64);
        }
        if jp + l == j {
            s += bt[l] * i_f * (i_f - 1.0) * upow(i as i64 - 2);
            s += ct[l] * i_f * upow(i as i64 - 1);
        }
    }
    s
}

/// Rows `int_{-1}^{1} [d_t^j h^2 L(p)](0, u) P_k(u) du` for `j = 0..m-2` and
/// `k = 0..m`, acting on the coefficient vector of `p`.
pub fn weak_moment_rows(chart: &FrenetChart, scaling: &FrenetScaling, m: usize, q: usize) -> Result<DMatrix<f64>> {
    let n = (m + 1) * (m + 1);
    let rows = m.saturating_sub(1) * (m + 1);
    let mut mat = DMatrix::zeros(rows, n);
    if rows == 0 {
        return Ok(mat);
    }
    let (h, d) = (scaling.h, scaling.delta);
    let (us, ws) = gauss_legendre(q);
    for (u, w) in us.iter().zip(&ws) {
        let jets = laplacian_jets(chart, scaling.xi_of(*u), m)?;
        let at: Vec<f64> = jets.a.rescale_variable(h).scale(h).coeffs().to_vec();
        let bt: Vec<f64> = jets.b.rescale_variable(h).scale((h / d).powi(2)).coeffs().to_vec();
        let ct: Vec<f64> = jets.c.rescale_variable(h).scale(h * h / d).coeffs().to_vec();
        let leg = legendre_all(m, *u);
        for j in 0..m - 1 {
            for jp in 0..=m {
                for i in 0..=m {
                    let v = operator_coef(j, jp, i, *u, &at, &bt, &ct);
                    if v == 0.0 {
                        continue;
                    }
                    for (k, lk) in leg.iter().enumerate() {
                        mat[(j * (m + 1) + k, jp * (m + 1) + i)] += w * v * lk.0;
                    }
                }
            }
        }
    }
    Ok(mat)
}

/// Full constraint matrix defining `X0` inside `Q^m`.
pub fn x0_constraints(chart: &FrenetChart, scaling: &FrenetScaling, m: usize, q: usize) -> Result<DMatrix<f64>> {
    let n = (m + 1) * (m + 1);
    let weak = weak_moment_rows(chart, scaling, m, q)?;
    let mut mat = DMatrix::zeros(m + 1 + weak.nrows(), n);
    for i in 0..=m {
        mat[(i, (m + 1) + i)] = 1.0;
    }
    mat.rows_mut(m + 1, weak.nrows()).copy_from(&weak);
    Ok(mat)
}

/// Orthonormal basis of the null space of `mat` (relative tolerance `rel_tol`).
pub fn null_space(mat: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = mat.ncols();
    let mut a = DMatrix::zeros(n.max(mat.nrows()), n);
    for (r, row) in mat.row_iter().enumerate() {
        let scale = row.amax();
        if scale > 0.0 {
            a.row_mut(r).copy_from(&(row / scale));
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.amax();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= rel_tol * smax.max(1e-300))
        .collect();
    let mut out = DMatrix::zeros(n, keep.len());
    for (c, &k) in keep.iter().enumerate() {
        out.set_column(c, &v_t.row(k).transpose());
    }
    out
}

/// `X0` as `m + 1` polynomials.
pub fn build_x0(
    chart: &FrenetChart,
    scaling: &FrenetScaling,
    m: usize,
    q: usize,
    element: usize,
) -> Result<Vec<Poly2>> {
    let cons = x0_constraints(chart, scaling, m, q)?;
    let ns = null_space(&cons, 1e-10);
    if ns.ncols() != m + 1 {
        return Err(Error::DimensionMismatch {
            element,
            expected: m + 1,
            found: ns.ncols(),
        });
    }
    Ok(ns
        .column_iter()
        .map(|c| Poly2::from_coeffs(m, c.iter().copied().collect()))
        .collect())
}

/// Monomials `t^j u^i` with `1 <= j <= m`, `0 <= i <= m`.
pub fn build_x1(m: usize) -> Vec<Poly2> {
    let mut out = Vec::with_capacity(m * (m + 1));
    for j in 1..=m {
        for i in 0..=m {
            out.push(Poly2::monomial(m, j, i));
        }
    }
    out
}

/// Local IFE basis on the fictitious element `[-h, h] x [xi0, xi1]`.
#[allow(clippy::too_many_arguments)]
pub fn build_interface_basis(
    chart: &FrenetChart,
    interval: (f64, f64),
    h: f64,
    beta_minus: f64,
    beta_plus: f64,
    m: usize,
    q: usize,
    element: usize,
) -> Result<InterfaceBasis> {
    let scaling = FrenetScaling::new(h, interval);
    let mut functions: Vec<IfeFunction> = build_x0(chart, &scaling, m, q, element)?
        .into_iter()
        .map(|p| IfeFunction {
            minus: p.clone(),
            plus: p,
            origin: Origin::Continuous,
        })
        .collect();
    functions.extend(build_x1(m).into_iter().map(|p| IfeFunction {
        minus: p.scale(1.0 / beta_minus),
        plus: p.scale(1.0 / beta_plus),
        origin: Origin::Weighted,
    }));
    Ok(InterfaceBasis {
        degree: m,
        scaling,
        beta_minus,
        beta_plus,
        functions,
    })
}

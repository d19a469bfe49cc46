//! Laplacian in Frenet coordinates:
//! `L(u) = u_ee + a u_e + b u_xx + c u_x` with `J = s (1 + eta kappa)`,
//! `a = s kappa / J`, `b = 1 / J^2`, `c = -J_xi / J^3`.

use crate::error::Result;
use crate::geometry::FrenetChart;
use crate::jet::Jet;

/// Coefficients `(a, b, c)` at `(eta, xi)`.
pub fn laplacian_coeffs(chart: &FrenetChart, eta: f64, xi: f64) -> Result<(f64, f64, f64)> {
    chart.jacobian_det(eta, xi)?;
    let mj = chart.curve().metric_jet(xi);
    let (s, k) = (mj.speed, mj.curvature);
    let jac = s * (1.0 + eta * k);
    let jac_xi = mj.dspeed * (1.0 + eta * k) + s * eta * mj.dcurvature;
    Ok((s * k / jac, 1.0 / (jac * jac), -jac_xi / jac.powi(3)))
}

/// Taylor jets in `eta` at `eta = 0` of the coefficients `a`, `b`, `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianJets {
    pub a: Jet,
    pub b: Jet,
    pub c: Jet,
}

pub fn laplacian_jets(chart: &FrenetChart, xi: f64, order: usize) -> Result<LaplacianJets> {
    chart.curve().frame(xi)?;
    let mj = chart.curve().metric_jet(xi);
    let (s, k) = (mj.speed, mj.curvature);
    let jac = Jet::linear(s, s * k, order);
    let jac_xi = Jet::linear(mj.dspeed, mj.dspeed * k + s * mj.dcurvature, order);
    let inv = jac.recip();
    let inv2 = &inv * &inv;
    let inv3 = &inv2 * &inv;
    Ok(LaplacianJets {
        a: inv.scale(s * k),
        b: inv2,
        c: -&(&jac_xi * &inv3),
    })
}

/// `L(u)` from the Frenet derivatives `[u_e, u_ee, u_x, u_xx]`.
pub fn apply_laplacian(chart: &FrenetChart, eta: f64, xi: f64, d: [f64; 4]) -> Result<f64> {
    let (a, b, c) = laplacian_coeffs(chart, eta, xi)?;
    Ok(d[1] + a * d[0] + b * d[3] + c * d[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CurveSpec, InterfaceCurve, Orientation};

    fn chart(spec: CurveSpec) -> FrenetChart {
        FrenetChart::new(InterfaceCurve::new(spec, Orientation::Ccw).unwrap(), 1.0)
    }

    #[test]
    fn unit_circle_is_polar() {
        let ch = chart(CurveSpec::Circle {
            center: [0.0, 0.0],
            radius: 1.0,
        });
        for &eta in &[-0.3, 0.0, 0.2] {
            let (a, b, c) = laplacian_coeffs(&ch, eta, 0.7).unwrap();
            assert!((a - 1.0 / (1.0 + eta)).abs() < 1e-14);
            assert!((b - 1.0 / (1.0 + eta).powi(2)).abs() < 1e-14);
            assert!(c.abs() < 1e-14);
        }
        // u = x^2 + y^2 = (1 + eta)^2
        let eta = 0.15;
        let r = 1.0 + eta;
        let l = apply_laplacian(&ch, eta, 1.1, [2.0 * r, 2.0, 0.0, 0.0]).unwrap();
        assert!((l - 4.0).abs() < 1e-14);
    }

    #[test]
    fn line_is_flat() {
        let ch = chart(CurveSpec::Line {
            point: [0.0, 0.0],
            direction: [1.0, 0.0],
            extent: 3.0,
        });
        let (a, b, c) = laplacian_coeffs(&ch, 0.1, 0.4).unwrap();
        assert_eq!((a, b, c), (0.0, 1.0, 0.0));
    }

    #[test]
    fn jets_match_pointwise_coefficients() {
        let ch = chart(CurveSpec::Ellipse {
            center: [0.0, 0.0],
            semi_axes: [0.8, 0.5],
        });
        let xi = 0.9;
        let jets = laplacian_jets(&ch, xi, 8).unwrap();
        for &eta in &[-0.01, 0.004, 0.02] {
            let (a, b, c) = laplacian_coeffs(&ch, eta, xi).unwrap();
            assert!((jets.a.eval(eta) - a).abs() < 1e-12);
            assert!((jets.b.eval(eta) - b).abs() < 1e-12);
            assert!((jets.c.eval(eta) - c).abs() < 1e-12);
        }
    }
}

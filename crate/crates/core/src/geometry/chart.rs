use nalgebra::Matrix2;

use super::curve::{FrenetFrame, InterfaceCurve, Vec2};
use crate::error::{Error, Result};

/// Side of the interface; `Plus` is the side the normal points into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn of(eta: f64) -> Side {
        if eta < 0.0 {
            Side::Minus
        } else {
            Side::Plus
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonSettings {
    /// Absolute residual tolerance in physical length units.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        NewtonSettings {
            tol: 1e-12,
            max_iters: 40,
        }
    }
}

/// Frenet coordinates `P(eta, xi) = g(xi) + eta n(xi)` around an interface curve.
#[derive(Debug, Clone)]
pub struct FrenetChart {
    curve: InterfaceCurve,
    newton: NewtonSettings,
}

impl FrenetChart {
    /// `length_scale` (typically the domain diameter) scales the Newton tolerance.
    pub fn new(curve: InterfaceCurve, length_scale: f64) -> Self {
        let newton = NewtonSettings {
            tol: 1e-12 * length_scale.max(1e-3),
            ..NewtonSettings::default()
        };
        FrenetChart { curve, newton }
    }

    pub fn with_newton(curve: InterfaceCurve, newton: NewtonSettings) -> Self {
        FrenetChart { curve, newton }
    }

    pub fn curve(&self) -> &InterfaceCurve {
        &self.curve
    }

    pub fn newton(&self) -> NewtonSettings {
        self.newton
    }

    /// Refuses mesh sizes with `h * kappa_max > 1/2`.
    pub fn check_mesh_size(&self, h: f64) -> Result<()> {
        let value = h * self.curve.max_curvature();
        if value > 0.5 {
            return Err(Error::MeshTooCoarse { value, limit: 0.5 });
        }
        Ok(())
    }

    fn strip_check(&self, eta: f64) -> Result<()> {
        let value = eta.abs() * self.curve.max_curvature();
        if value >= 1.0 {
            return Err(Error::OutsideValidityStrip { value });
        }
        Ok(())
    }

    pub fn map(&self, eta: f64, xi: f64) -> Result<Vec2> {
        self.strip_check(eta)?;
        let d = self.curve.derivatives(xi);
        let f = super::curve::frame_from(xi, &d)?;
        Ok(d[0] + f.normal * eta)
    }

    /// Frame at `xi` and the point `P(eta, xi)`, without the strip check.
    fn point_and_frame(&self, eta: f64, xi: f64) -> Result<(Vec2, FrenetFrame)> {
        let d = self.curve.derivatives(xi);
        let f = super::curve::frame_from(xi, &d)?;
        Ok((d[0] + f.normal * eta, f))
    }

    /// Jacobian with columns `(dP/deta, dP/dxi) = (n, s (1 + eta kappa) tau)`.
    pub fn jacobian(&self, eta: f64, xi: f64) -> Result<Matrix2<f64>> {
        self.strip_check(eta)?;
        let f = self.curve.frame(xi)?;
        let dxi = f.tangent * (f.speed * (1.0 + eta * f.curvature));
        Ok(Matrix2::from_columns(&[f.normal, dxi]))
    }

    /// `det(DP) = s (1 + eta kappa)`.
    pub fn jacobian_det(&self, eta: f64, xi: f64) -> Result<f64> {
        self.strip_check(eta)?;
        let f = self.curve.frame(xi)?;
        Ok(f.speed * (1.0 + eta * f.curvature))
    }

    /// Damped Newton solve of `P(eta, xi) = x` from `guess`.
    pub fn inverse_from(&self, x: Vec2, guess: (f64, f64)) -> Result<(f64, f64)> {
        let (mut eta, mut xi) = guess;
        let diverged = |res: f64| Error::NewtonDivergence {
            x: x.x,
            y: x.y,
            residual: res,
        };
        let (p, mut frame) = self.point_and_frame(eta, xi)?;
        let mut r = x - p;
        let mut res = r.norm();
        for _ in 0..self.newton.max_iters {
            if res <= self.newton.tol {
                break;
            }
            let jac = frame.speed * (1.0 + eta * frame.curvature);
            if !(jac.abs() > 1e-14) {
                return Err(diverged(res));
            }
            let d_eta = frame.normal.dot(&r);
            let d_xi = frame.tangent.dot(&r) / jac;
            let mut lambda = 1.0;
            loop {
                let (ce, cx) = (eta + lambda * d_eta, xi + lambda * d_xi);
                let (cp, cf) = self.point_and_frame(ce, cx)?;
                let cr = x - cp;
                let cres = cr.norm();
                if cres < res || lambda < 1e-4 {
                    eta = ce;
                    xi = cx;
                    frame = cf;
                    r = cr;
                    res = cres;
                    break;
                }
                lambda *= 0.5;
            }
        }
        if !(res <= self.newton.tol) {
            return Err(diverged(res));
        }
        // one polishing step brings the residual to roundoff
        let jac = frame.speed * (1.0 + eta * frame.curvature);
        if res > 0.0 && jac.abs() > 1e-14 {
            let (ce, cx) = (eta + frame.normal.dot(&r), xi + frame.tangent.dot(&r) / jac);
            if let Ok((cp, _)) = self.point_and_frame(ce, cx) {
                if (x - cp).norm() < res {
                    eta = ce;
                    xi = cx;
                }
            }
        }
        self.strip_check(eta)?;
        Ok((eta, xi))
    }

    /// `R(x)`, starting from the chord projection onto the sampled curve.
    pub fn inverse(&self, x: Vec2) -> Result<(f64, f64)> {
        let guess = self.curve.foot_guess(x);
        self.inverse_from(x, guess)
    }

    /// `R(x)` with `xi` unwrapped to the period closest to `reference`.
    pub fn inverse_near(&self, x: Vec2, guess: (f64, f64), reference: f64) -> Result<(f64, f64)> {
        let (eta, xi) = self.inverse_from(x, guess)?;
        Ok((eta, self.curve.unwrap_near(xi, reference)))
    }

    /// Side of the interface containing `x`. Far from the curve the sign is
    /// read off the nearest sampled foot point.
    pub fn side(&self, x: Vec2) -> Side {
        match self.inverse(x) {
            Ok((eta, _)) => Side::of(eta),
            Err(_) => Side::of(self.curve.foot_guess(x).0),
        }
    }

    /// Parameter range `[xi0, xi1]` of `R(K)` for the rectangle `[lo, hi]`.
    ///
    /// The extremes of `xi` over a convex element are attained on its
    /// boundary; they are bracketed by sampling `samples_per_edge` points per
    /// edge and polished with a golden-section search.
    pub fn fictitious_interval(
        &self,
        lo: Vec2,
        hi: Vec2,
        reference: f64,
        samples_per_edge: usize,
    ) -> Result<(f64, f64)> {
        let corners = [
            lo,
            Vec2::new(hi.x, lo.y),
            hi,
            Vec2::new(lo.x, hi.y),
        ];
        let center = (lo + hi) * 0.5;
        let start = self.inverse(center)?;
        let start = (start.0, self.curve.unwrap_near(start.1, reference));
        let per = samples_per_edge + 1;
        let loop_point = |s: f64| -> Vec2 {
            // s in [0, 4): edge index + local parameter
            let e = (s.floor() as usize).min(3);
            let t = s - e as f64;
            corners[e] + (corners[(e + 1) % 4] - corners[e]) * t
        };
        let xi_at = |s: f64| -> Result<f64> {
            let p = loop_point(s);
            let guess = (start.0 + (p - center).dot(&self.curve.frame(start.1)?.normal), start.1);
            Ok(self.inverse_near(p, guess, start.1)?.1)
        };
        let n = 4 * per;
        let mut vals = Vec::with_capacity(n);
        for i in 0..n {
            vals.push(xi_at(i as f64 / per as f64)?);
        }
        let (imin, _) = vals
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |a, (i, &v)| if v < a.1 { (i, v) } else { a });
        let (imax, _) = vals
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |a, (i, &v)| if v > a.1 { (i, v) } else { a });
        let polish = |i: usize, sign: f64| -> Result<f64> {
            let mut best = sign * vals[i];
            for (a, b) in [(i + n - 1, i), (i, i + 1)] {
                let (sa, sb) = (a as f64 / per as f64, b as f64 / per as f64);
                let v = golden_max(|s| xi_at(s % 4.0).map(|x| sign * x), sa, sb, 60)?;
                best = best.max(v);
            }
            Ok(sign * best)
        };
        let xi0 = polish(imin, -1.0)?;
        let xi1 = polish(imax, 1.0)?;
        Ok((xi0, xi1))
    }
}

fn golden_max<F>(f: F, mut a: f64, mut b: f64, iters: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(fc.max(fd).max(f(a)?).max(f(b)?))
}

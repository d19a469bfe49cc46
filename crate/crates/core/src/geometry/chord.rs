use nalgebra::Matrix2;

use super::chart::FrenetChart;
use super::curve::{rotate_to_normal, Vec2};
use crate::error::{Error, Result};

/// Affine chart built from the linear interpolant of `g` at `xi0`, `xi1`:
/// `Pc(eta, xi) = gc(xi) + eta nc`, with `gc` the chord through `g(xi0)`, `g(xi1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordChart {
    pub xi0: f64,
    pub xi1: f64,
    pub origin: Vec2,
    /// `gc'`, constant along the chord.
    pub direction: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    /// Columns `(nc, gc')`.
    forward: Matrix2<f64>,
    inverse: Matrix2<f64>,
}

impl ChordChart {
    pub fn new(chart: &FrenetChart, xi0: f64, xi1: f64) -> Result<Self> {
        let g0 = chart.curve().point(xi0);
        let g1 = chart.curve().point(xi1);
        if !(xi1 > xi0) || (g1 - g0).norm() < 1e-12 {
            return Err(Error::DegenerateChord { xi0, xi1 });
        }
        let direction = (g1 - g0) / (xi1 - xi0);
        let tangent = direction.normalize();
        let normal = rotate_to_normal(tangent);
        let forward = Matrix2::from_columns(&[normal, direction]);
        // columns are orthogonal: closed-form inverse
        let inverse = Matrix2::from_rows(&[
            normal.transpose(),
            direction.transpose() / direction.norm_squared(),
        ]);
        Ok(ChordChart {
            xi0,
            xi1,
            origin: g0,
            direction,
            tangent,
            normal,
            forward,
            inverse,
        })
    }

    pub fn chord_point(&self, xi: f64) -> Vec2 {
        self.origin + self.direction * (xi - self.xi0)
    }

    pub fn map(&self, eta: f64, xi: f64) -> Vec2 {
        self.chord_point(xi) + self.normal * eta
    }

    pub fn inverse(&self, x: Vec2) -> (f64, f64) {
        let v = self.inverse * (x - self.origin);
        (v.x, v.y + self.xi0)
    }

    pub fn forward_matrix(&self) -> Matrix2<f64> {
        self.forward
    }

    pub fn inverse_matrix(&self) -> Matrix2<f64> {
        self.inverse
    }

    /// Transition map `T = Rc o P` evaluated at `(eta, xi)`.
    pub fn transition(&self, chart: &FrenetChart, eta: f64, xi: f64) -> Result<(f64, f64)> {
        Ok(self.inverse(chart.map(eta, xi)?))
    }

    /// Jacobian of the transition map, `DRc * DP`.
    pub fn transition_jacobian(&self, chart: &FrenetChart, eta: f64, xi: f64) -> Result<Matrix2<f64>> {
        Ok(self.inverse * chart.jacobian(eta, xi)?)
    }
}

use serde::{Deserialize, Serialize};

use crate::assembly::ProblemData;
use crate::discretization::Coefficients;
use crate::geometry::{Side, Vec2};

/// Exact solution of the interface problem with its gradient.
pub trait ExactSolution: ProblemData {
    fn value(&self, x: Vec2, side: Side) -> f64;
    fn grad(&self, x: Vec2, side: Side) -> Vec2;
}

/// Radial benchmark around a circle of radius `r0`:
/// `u- = r^p / beta-`, `u+ = r^p / beta+ + r0^p (1/beta- - 1/beta+)`,
/// `f = -p^2 r^(p-2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManufacturedCircle {
    pub center: [f64; 2],
    pub r0: f64,
    pub beta: Coefficients,
    pub power: i32,
}

impl ManufacturedCircle {
    pub fn new(center: [f64; 2], r0: f64, beta: Coefficients, power: i32) -> Self {
        ManufacturedCircle {
            center,
            r0,
            beta,
            power,
        }
    }

    fn rel(&self, x: Vec2) -> Vec2 {
        x - Vec2::new(self.center[0], self.center[1])
    }

    /// Side by the sign of `r - r0`.
    pub fn side_of(&self, x: Vec2) -> Side {
        if self.rel(x).norm() < self.r0 {
            Side::Minus
        } else {
            Side::Plus
        }
    }

    /// Largest `|[u]|` and `|[beta du/dn]|` over `samples` points of the circle.
    pub fn jump_residuals(&self, samples: usize) -> (f64, f64) {
        let mut worst = (0.0f64, 0.0f64);
        for k in 0..samples {
            let th = std::f64::consts::TAU * k as f64 / samples as f64;
            let n = Vec2::new(th.cos(), th.sin());
            let x = Vec2::new(self.center[0], self.center[1]) + n * self.r0;
            let du = self.value(x, Side::Plus) - self.value(x, Side::Minus);
            let df = self.beta.plus * self.grad(x, Side::Plus).dot(&n) - self.beta.minus * self.grad(x, Side::Minus).dot(&n);
            worst = (worst.0.max(du.abs()), worst.1.max(df.abs()));
        }
        worst
    }
}

impl ProblemData for ManufacturedCircle {
    fn source(&self, x: Vec2, _side: Side) -> f64 {
        let p = self.power as f64;
        -p * p * self.rel(x).norm().powi(self.power - 2)
    }

    fn boundary(&self, x: Vec2) -> f64 {
        self.value(x, self.side_of(x))
    }
}

impl ExactSolution for ManufacturedCircle {
    fn value(&self, x: Vec2, side: Side) -> f64 {
        let rp = self.rel(x).norm().powi(self.power);
        match side {
            Side::Minus => rp / self.beta.minus,
            Side::Plus => rp / self.beta.plus + self.r0.powi(self.power) * (1.0 / self.beta.minus - 1.0 / self.beta.plus),
        }
    }

    fn grad(&self, x: Vec2, side: Side) -> Vec2 {
        let d = self.rel(x);
        let g = d * (self.power as f64 * d.norm().powi(self.power - 2));
        g / self.beta.of(side)
    }
}

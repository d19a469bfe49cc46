use super::basis::{build_interface_basis, InterfaceBasis};
use crate::error::Result;
use crate::geometry::{ChordChart, FrenetChart, Side, Vec2};
use crate::mesh::{Element, ElementTag};
use crate::poly::{lagrange_1d, lobatto_nodes};

/// Shape function values and physical gradients at one point.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShapeValues {
    pub values: Vec<f64>,
    pub grads: Vec<Vec2>,
}

/// Tensor Lagrange `Q^m` basis on Gauss–Lobatto nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorBasis {
    pub lo: Vec2,
    pub hi: Vec2,
    pub nodes: Vec<f64>,
}

impl TensorBasis {
    pub fn new(lo: Vec2, hi: Vec2, m: usize) -> Self {
        TensorBasis {
            lo,
            hi,
            nodes: lobatto_nodes(m),
        }
    }

    pub fn eval(&self, x: Vec2) -> ShapeValues {
        let (hx, hy) = (self.hi.x - self.lo.x, self.hi.y - self.lo.y);
        let r = (2.0 * x.x - self.lo.x - self.hi.x) / hx;
        let s = (2.0 * x.y - self.lo.y - self.hi.y) / hy;
        let (lr, dr) = lagrange_1d(&self.nodes, r);
        let (ls, ds) = lagrange_1d(&self.nodes, s);
        let n = self.nodes.len();
        let mut out = ShapeValues {
            values: Vec::with_capacity(n * n),
            grads: Vec::with_capacity(n * n),
        };
        for j in 0..n {
            for i in 0..n {
                out.values.push(lr[i] * ls[j]);
                out.grads
                    .push(Vec2::new(dr[i] * ls[j] * 2.0 / hx, lr[i] * ds[j] * 2.0 / hy));
            }
        }
        out
    }
}

/// Frenet IFE space on an interface element.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceSpace {
    pub basis: InterfaceBasis,
    pub chord: ChordChart,
    pub xi_ref: f64,
}

impl InterfaceSpace {
    /// `R(x)` with `xi` in the element's period window.
    pub fn locate(&self, chart: &FrenetChart, x: Vec2) -> Result<(f64, f64)> {
        let guess = self.chord.inverse(x);
        chart.inverse_near(x, guess, self.xi_ref)
    }

    pub fn eval(&self, chart: &FrenetChart, x: Vec2, side: Side) -> Result<ShapeValues> {
        let (eta, xi) = self.locate(chart, x)?;
        self.eval_at(chart, eta, xi, side)
    }

    /// Evaluation at known Frenet coordinates.
    pub fn eval_at(&self, chart: &FrenetChart, eta: f64, xi: f64, side: Side) -> Result<ShapeValues> {
        let frame = chart.curve().frame(xi)?;
        let jac = frame.speed * (1.0 + eta * frame.curvature);
        let mut out = ShapeValues::default();
        for (v, de, dx) in self.basis.eval_frenet(side, eta, xi) {
            out.values.push(v);
            out.grads.push(frame.normal * de + frame.tangent * (dx / jac));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LocalSpace {
    Polynomial(TensorBasis),
    Interface(Box<InterfaceSpace>),
}

impl LocalSpace {
    /// Local space of `el`; interface elements use the fictitious element of
    /// half-width `h` in `eta`.
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        chart: &FrenetChart,
        el: &Element,
        tag: &ElementTag,
        m: usize,
        h: f64,
        beta_minus: f64,
        beta_plus: f64,
        q_interface: usize,
    ) -> Result<Self> {
        match tag {
            ElementTag::NonInterface { .. } => Ok(LocalSpace::Polynomial(TensorBasis::new(el.lo, el.hi, m))),
            ElementTag::Interface(cut) => {
                let basis = build_interface_basis(
                    chart,
                    cut.interval,
                    h,
                    beta_minus,
                    beta_plus,
                    m,
                    q_interface,
                    el.id,
                )?;
                Ok(LocalSpace::Interface(Box::new(InterfaceSpace {
                    basis,
                    chord: cut.chord,
                    xi_ref: cut.xi_ref(),
                })))
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            LocalSpace::Polynomial(t) => t.nodes.len() * t.nodes.len(),
            LocalSpace::Interface(s) => s.basis.dim(),
        }
    }

    pub fn is_interface(&self) -> bool {
        matches!(self, LocalSpace::Interface(_))
    }

    /// Values and gradients at `x`; `side` selects the piece on interface elements.
    pub fn eval(&self, chart: &FrenetChart, x: Vec2, side: Side) -> Result<ShapeValues> {
        match self {
            LocalSpace::Polynomial(t) => Ok(t.eval(x)),
            LocalSpace::Interface(s) => s.eval(chart, x, side),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_basis_is_nodal() {
        let b = TensorBasis::new(Vec2::new(0.0, 1.0), Vec2::new(0.5, 2.0), 2);
        let sv = b.eval(Vec2::new(0.25, 2.0));
        // node (i=1, j=2)
        for (k, v) in sv.values.iter().enumerate() {
            let expect = if k == 2 * 3 + 1 { 1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-14);
        }
        let total: Vec2 = sv.grads.iter().sum();
        assert!(total.norm() < 1e-12);
    }
}

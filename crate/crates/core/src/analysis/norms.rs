use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::manufactured::ExactSolution;
use crate::discretization::Discretization;
use crate::geometry::{Side, Vec2};
use crate::ife_space::ShapeValues;

/// A discrete function that can be evaluated element by element.
pub trait DiscreteField: Sync {
    /// Value and gradient at `x` in `element`; `shape` holds the tabulated
    /// local shape functions of the discretization at that point.
    fn eval(&self, element: usize, x: Vec2, side: Side, shape: &ShapeValues) -> (f64, Vec2);
}

/// Finite element function given by global coefficients.
pub struct FeFunction<'a> {
    pub disc: &'a Discretization,
    pub coeffs: &'a [f64],
}

impl DiscreteField for FeFunction<'_> {
    fn eval(&self, element: usize, _x: Vec2, _side: Side, shape: &ShapeValues) -> (f64, Vec2) {
        let off = self.disc.offset(element);
        let c = &self.coeffs[off..off + shape.values.len()];
        let v = shape.values.iter().zip(c).map(|(a, b)| a * b).sum();
        let g = shape.grads.iter().zip(c).map(|(a, b)| a * *b).sum();
        (v, g)
    }
}

/// Errors of one discrete solution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorNorms {
    pub l2: f64,
    /// Broken H1 seminorm (unweighted).
    pub h1: f64,
    pub norm_h: f64,
    pub energy: f64,
}

/// L2, broken H1, `||.||_h` and energy norms of `u - u_h`.
pub fn error_norms(
    disc: &Discretization,
    field: &dyn DiscreteField,
    exact: &dyn ExactSolution,
    sigma0: f64,
) -> ErrorNorms {
    let (l2, h1, grad_b) = (0..disc.mesh.num_elements())
        .into_par_iter()
        .map(|k| {
            let mut acc = (0.0, 0.0, 0.0);
            for p in &disc.volume[k] {
                let (v, g) = field.eval(k, p.x, p.side, &p.shape);
                let e = exact.value(p.x, p.side) - v;
                let ge = exact.grad(p.x, p.side) - g;
                acc.0 += p.weight * e * e;
                acc.1 += p.weight * ge.norm_squared();
                acc.2 += p.weight * p.beta * ge.norm_squared();
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let (jump, flux) = (0..disc.mesh.edges.len())
        .into_par_iter()
        .map(|e| {
            let mut acc = (0.0, 0.0);
            for p in &disc.edges[e] {
                let err = |t: &crate::discretization::Trace| {
                    let (v, g) = field.eval(t.element, p.x, t.side, &t.shape);
                    let ev = exact.value(p.x, t.side) - v;
                    let eg = exact.grad(p.x, t.side) - g;
                    (ev, t.beta * eg.dot(&p.normal))
                };
                let (eo, fo) = err(&p.owner);
                let (j, f) = match &p.neighbor {
                    Some(nb) => {
                        let (en, fnb) = err(nb);
                        (eo - en, 0.5 * (fo + fnb))
                    }
                    None => (eo, fo),
                };
                acc.0 += p.weight * j * j;
                acc.1 += p.weight * f * f;
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let pen = sigma0 * disc.beta.gamma() / disc.h();
    let norm_h2 = grad_b + pen * jump;
    ErrorNorms {
        l2: l2.sqrt(),
        h1: h1.sqrt(),
        norm_h: norm_h2.sqrt(),
        energy: (norm_h2 + flux / pen).sqrt(),
    }
}

//! Mesh, interface classification, local spaces and tabulated shape
//! functions at every volume and edge quadrature point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{FrenetChart, Side, Vec2};
use crate::ife_space::{LocalSpace, ShapeValues};
use crate::mesh::{classify_elements, Classification, ElementTag, RectMesh};
use crate::quadrature::{cut_cell_rule, cut_edge_rule, gauss_rect, QuadRule};

/// Gauss points per direction for each kind of integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadOrders {
    pub volume: usize,
    pub edge: usize,
    pub interface: usize,
}

impl QuadOrders {
    pub fn for_degree(m: usize) -> Self {
        QuadOrders {
            volume: m + 2,
            edge: m + 3,
            interface: m + 3,
        }
    }
}

/// Piecewise constant diffusion coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub minus: f64,
    pub plus: f64,
}

impl Coefficients {
    pub fn new(minus: f64, plus: f64) -> Result<Self> {
        if !(minus > 0.0 && plus >= minus && plus.is_finite()) {
            return Err(Error::Config(format!(
                "coefficients must satisfy beta_plus >= beta_minus > 0 (got {minus}, {plus})"
            )));
        }
        Ok(Coefficients { minus, plus })
    }

    pub fn of(&self, side: Side) -> f64 {
        match side {
            Side::Minus => self.minus,
            Side::Plus => self.plus,
        }
    }

    /// `gamma = beta_plus^2 / beta_minus`.
    pub fn gamma(&self) -> f64 {
        self.plus * self.plus / self.minus
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumePoint {
    pub x: Vec2,
    pub weight: f64,
    pub side: Side,
    pub beta: f64,
    pub shape: ShapeValues,
}

/// One element's restriction to an edge quadrature point.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub element: usize,
    pub side: Side,
    pub beta: f64,
    pub shape: ShapeValues,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgePoint {
    pub x: Vec2,
    pub weight: f64,
    /// Unit normal pointing out of the owner.
    pub normal: Vec2,
    pub owner: Trace,
    pub neighbor: Option<Trace>,
}

#[derive(Debug, Clone)]
pub struct Discretization {
    pub mesh: RectMesh,
    pub chart: FrenetChart,
    pub classification: Classification,
    pub degree: usize,
    pub beta: Coefficients,
    pub quad: QuadOrders,
    pub spaces: Vec<LocalSpace>,
    pub volume: Vec<Vec<VolumePoint>>,
    pub edges: Vec<Vec<EdgePoint>>,
}

impl Discretization {
    pub fn new(
        mesh: RectMesh,
        chart: FrenetChart,
        degree: usize,
        beta: Coefficients,
        quad: QuadOrders,
    ) -> Result<Self> {
        if !(1..=3).contains(&degree) {
            return Err(Error::Config(format!("degree must be 1, 2 or 3 (got {degree})")));
        }
        chart.check_mesh_size(mesh.side_length())?;
        let classification = classify_elements(&mesh, &chart)?;
        let h = mesh.h();
        let spaces = mesh
            .elements
            .par_iter()
            .zip(&classification.tags)
            .map(|(el, tag)| LocalSpace::build(&chart, el, tag, degree, h, beta.minus, beta.plus, quad.interface))
            .collect::<Result<Vec<_>>>()?;
        let mut disc = Discretization {
            mesh,
            chart,
            classification,
            degree,
            beta,
            quad,
            spaces,
            volume: Vec::new(),
            edges: Vec::new(),
        };
        disc.volume = (0..disc.mesh.num_elements())
            .into_par_iter()
            .map(|k| disc.tabulate_element(k))
            .collect::<Result<_>>()?;
        disc.edges = (0..disc.mesh.edges.len())
            .into_par_iter()
            .map(|e| disc.tabulate_edge(e))
            .collect::<Result<_>>()?;
        Ok(disc)
    }

    pub fn local_dim(&self) -> usize {
        (self.degree + 1) * (self.degree + 1)
    }

    pub fn num_dofs(&self) -> usize {
        self.mesh.num_elements() * self.local_dim()
    }

    pub fn offset(&self, element: usize) -> usize {
        element * self.local_dim()
    }

    pub fn h(&self) -> f64 {
        self.mesh.h()
    }

    pub fn tag(&self, element: usize) -> &ElementTag {
        &self.classification.tags[element]
    }

    /// Quadrature rule on the `side` part of an element (empty if absent).
    pub fn element_rule(&self, element: usize, side: Side, q: usize) -> Result<QuadRule> {
        let el = &self.mesh.elements[element];
        match self.tag(element) {
            ElementTag::NonInterface { side: s } => Ok(if *s == side {
                gauss_rect(el.lo, el.hi, q)
            } else {
                QuadRule::default()
            }),
            ElementTag::Interface(cut) => cut_cell_rule(&self.chart, el, cut, side, q),
        }
    }

    fn tabulate_element(&self, k: usize) -> Result<Vec<VolumePoint>> {
        let mut out = Vec::new();
        for side in [Side::Minus, Side::Plus] {
            let rule = self.element_rule(k, side, self.quad.volume)?;
            for (x, w) in rule.points.iter().zip(&rule.weights) {
                out.push(VolumePoint {
                    x: *x,
                    weight: *w,
                    side,
                    beta: self.beta.of(side),
                    shape: self.spaces[k].eval(&self.chart, *x, side)?,
                });
            }
        }
        Ok(out)
    }

    /// Side used by `element` at a point whose edge sub-segment lies on `side`.
    fn element_side(&self, element: usize, side: Side) -> Side {
        match self.tag(element) {
            ElementTag::NonInterface { side: s } => *s,
            ElementTag::Interface(_) => side,
        }
    }

    fn trace(&self, element: usize, x: Vec2, side: Side) -> Result<Trace> {
        let side = self.element_side(element, side);
        Ok(Trace {
            element,
            side,
            beta: self.beta.of(side),
            shape: self.spaces[element].eval(&self.chart, x, side)?,
        })
    }

    fn tabulate_edge(&self, e: usize) -> Result<Vec<EdgePoint>> {
        let edge = &self.mesh.edges[e];
        let cut = &self.classification.edges[e];
        cut_edge_rule(edge, cut, self.quad.edge)
            .into_iter()
            .map(|p| {
                Ok(EdgePoint {
                    x: p.x,
                    weight: p.weight,
                    normal: edge.normal,
                    owner: self.trace(edge.owner, p.x, p.side)?,
                    neighbor: edge.neighbor.map(|nb| self.trace(nb, p.x, p.side)).transpose()?,
                })
            })
            .collect()
    }

    /// Side of the interface containing `x`, as seen from `element`.
    pub fn side_at(&self, element: usize, x: Vec2) -> Result<Side> {
        match (&self.spaces[element], self.tag(element)) {
            (_, ElementTag::NonInterface { side }) => Ok(*side),
            (LocalSpace::Interface(s), _) => Ok(Side::of(s.locate(&self.chart, x)?.0)),
            (LocalSpace::Polynomial(_), _) => Ok(self.chart.side(x)),
        }
    }

    /// Value of the discrete function with global coefficients `coeffs` at `x`.
    pub fn eval(&self, coeffs: &[f64], x: Vec2) -> Result<f64> {
        let k = self.mesh.locate(x);
        let side = self.side_at(k, x)?;
        let sv = self.spaces[k].eval(&self.chart, x, side)?;
        let off = self.offset(k);
        Ok(sv.values.iter().enumerate().map(|(i, v)| v * coeffs[off + i]).sum())
    }
}

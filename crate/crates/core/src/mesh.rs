//! Uniform rectangular meshes and their classification against the interface.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ChordChart, FrenetChart, Side, Vec2};

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub id: usize,
    pub ix: usize,
    pub iy: usize,
    pub lo: Vec2,
    pub hi: Vec2,
    /// Bottom, right, top, left.
    pub edges: [usize; 4],
}

impl Element {
    pub fn center(&self) -> Vec2 {
        (self.lo + self.hi) * 0.5
    }

    pub fn area(&self) -> f64 {
        (self.hi.x - self.lo.x) * (self.hi.y - self.lo.y)
    }

    /// Corners in counter-clockwise order starting at `lo`.
    pub fn corners(&self) -> [Vec2; 4] {
        [
            self.lo,
            Vec2::new(self.hi.x, self.lo.y),
            self.hi,
            Vec2::new(self.lo.x, self.hi.y),
        ]
    }

    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        p.x >= self.lo.x - tol && p.x <= self.hi.x + tol && p.y >= self.lo.y - tol && p.y <= self.hi.y + tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: usize,
    pub a: Vec2,
    pub b: Vec2,
    /// Unit normal pointing out of `owner`.
    pub normal: Vec2,
    pub owner: usize,
    pub neighbor: Option<usize>,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.neighbor.is_none()
    }

    pub fn length(&self) -> f64 {
        (self.b - self.a).norm()
    }

    pub fn point(&self, t: f64) -> Vec2 {
        self.a + (self.b - self.a) * t
    }
}

/// Axis-aligned uniform grid. Element `ix + nx * iy`; horizontal edges run
/// left to right, vertical edges bottom to top.
#[derive(Debug, Clone)]
pub struct RectMesh {
    pub lo: Vec2,
    pub hi: Vec2,
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub elements: Vec<Element>,
    pub edges: Vec<Edge>,
}

impl RectMesh {
    pub fn new(lo: Vec2, hi: Vec2, nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::Config("mesh needs at least one subdivision per axis".into()));
        }
        if !(hi.x > lo.x && hi.y > lo.y) {
            return Err(Error::Config("empty domain box".into()));
        }
        let hx = (hi.x - lo.x) / nx as f64;
        let hy = (hi.y - lo.y) / ny as f64;
        let node = |i: usize, j: usize| {
            let x = if i == nx { hi.x } else { lo.x + i as f64 * hx };
            let y = if j == ny { hi.y } else { lo.y + j as f64 * hy };
            Vec2::new(x, y)
        };
        let elem = |i: usize, j: usize| i + nx * j;
        let mut edges = Vec::with_capacity(nx * (ny + 1) + ny * (nx + 1));
        let mut horiz = vec![0usize; nx * (ny + 1)];
        for j in 0..=ny {
            for i in 0..nx {
                let (owner, neighbor, normal) = if j == 0 {
                    (elem(i, 0), None, Vec2::new(0.0, -1.0))
                } else if j == ny {
                    (elem(i, ny - 1), None, Vec2::new(0.0, 1.0))
                } else {
                    (elem(i, j - 1), Some(elem(i, j)), Vec2::new(0.0, 1.0))
                };
                horiz[i + nx * j] = edges.len();
                edges.push(Edge {
                    id: edges.len(),
                    a: node(i, j),
                    b: node(i + 1, j),
                    normal,
                    owner,
                    neighbor,
                });
            }
        }
        let mut vert = vec![0usize; (nx + 1) * ny];
        for j in 0..ny {
            for i in 0..=nx {
                let (owner, neighbor, normal) = if i == 0 {
                    (elem(0, j), None, Vec2::new(-1.0, 0.0))
                } else if i == nx {
                    (elem(nx - 1, j), None, Vec2::new(1.0, 0.0))
                } else {
                    (elem(i - 1, j), Some(elem(i, j)), Vec2::new(1.0, 0.0))
                };
                vert[i + (nx + 1) * j] = edges.len();
                edges.push(Edge {
                    id: edges.len(),
                    a: node(i, j),
                    b: node(i, j + 1),
                    normal,
                    owner,
                    neighbor,
                });
            }
        }
        let mut elements = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                elements.push(Element {
                    id: elem(i, j),
                    ix: i,
                    iy: j,
                    lo: node(i, j),
                    hi: node(i + 1, j + 1),
                    edges: [
                        horiz[i + nx * j],
                        vert[i + 1 + (nx + 1) * j],
                        horiz[i + nx * (j + 1)],
                        vert[i + (nx + 1) * j],
                    ],
                });
            }
        }
        Ok(RectMesh {
            lo,
            hi,
            nx,
            ny,
            hx,
            hy,
            elements,
            edges,
        })
    }

    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        RectMesh::new(Vec2::new(lo, lo), Vec2::new(hi, hi), n, n)
    }

    /// Element diameter.
    pub fn h(&self) -> f64 {
        self.hx.hypot(self.hy)
    }

    /// Longest element side.
    pub fn side_length(&self) -> f64 {
        self.hx.max(self.hy)
    }

    pub fn domain_diameter(&self) -> f64 {
        (self.hi - self.lo).norm()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// Index of the element containing `p` (clamped to the domain).
    pub fn locate(&self, p: Vec2) -> usize {
        let i = (((p.x - self.lo.x) / self.hx).floor().max(0.0) as usize).min(self.nx - 1);
        let j = (((p.y - self.lo.y) / self.hy).floor().max(0.0) as usize).min(self.ny - 1);
        i + self.nx * j
    }
}

/// Point where the interface meets an element boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Intersection {
    pub point: [f64; 2],
    pub xi: f64,
}

impl Intersection {
    pub fn position(&self) -> Vec2 {
        Vec2::new(self.point[0], self.point[1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceCut {
    /// Ordered by increasing (unwrapped) `xi`.
    pub intersections: [Intersection; 2],
    /// Fictitious interval `[xi0, xi1]`.
    pub interval: (f64, f64),
    pub chord: ChordChart,
}

impl InterfaceCut {
    pub fn xi_ref(&self) -> f64 {
        0.5 * (self.interval.0 + self.interval.1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ElementTag {
    NonInterface { side: Side },
    Interface(Box<InterfaceCut>),
}

impl ElementTag {
    pub fn is_interface(&self) -> bool {
        matches!(self, ElementTag::Interface(_))
    }

    pub fn cut(&self) -> Option<&InterfaceCut> {
        match self {
            ElementTag::Interface(c) => Some(c),
            ElementTag::NonInterface { .. } => None,
        }
    }
}

/// Crossing of the interface through the interior of an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCrossing {
    pub t: f64,
    pub xi: f64,
    pub point: Vec2,
}

/// Sign pattern of the interface along one edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCut {
    pub crossings: Vec<EdgeCrossing>,
    /// Side on each of the `crossings.len() + 1` sub-segments.
    pub sides: Vec<Side>,
    /// Sign of `eta` at the sample points: -1, 0 or 1.
    samples: Vec<i8>,
}

impl EdgeCut {
    /// Parameter breakpoints `0 = t_0 < ... < t_k = 1`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = vec![0.0];
        b.extend(self.crossings.iter().map(|c| c.t));
        b.push(1.0);
        b
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub tags: Vec<ElementTag>,
    pub edges: Vec<EdgeCut>,
}

impl Classification {
    pub fn interface_elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.tags
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_interface())
            .map(|(i, _)| i)
    }

    pub fn num_interface(&self) -> usize {
        self.interface_elements().count()
    }
}

const EDGE_SAMPLES: usize = 17;

fn sign_of(eta: f64, tol: f64) -> i8 {
    if eta > tol {
        1
    } else if eta < -tol {
        -1
    } else {
        0
    }
}

fn side_of_sign(s: i8) -> Side {
    if s < 0 {
        Side::Minus
    } else {
        Side::Plus
    }
}

fn classify_edge(chart: &FrenetChart, edge: &Edge, zero_tol: f64) -> Result<EdgeCut> {
    let len = edge.length();
    let mid = edge.point(0.5);
    let near = match chart.inverse(mid) {
        Ok((eta, _)) => eta.abs() <= len,
        Err(_) => false,
    };
    if !near {
        let side = chart.side(mid);
        let s = if side == Side::Minus { -1 } else { 1 };
        return Ok(EdgeCut {
            crossings: Vec::new(),
            sides: vec![side],
            samples: vec![s; EDGE_SAMPLES],
        });
    }
    let mut coords = Vec::with_capacity(EDGE_SAMPLES);
    let mut guess = chart.curve().foot_guess(edge.a);
    for k in 0..EDGE_SAMPLES {
        let t = k as f64 / (EDGE_SAMPLES - 1) as f64;
        let p = edge.point(t);
        let c = chart
            .inverse_from(p, guess)
            .or_else(|_| chart.inverse(p))?;
        guess = c;
        coords.push(c);
    }
    let samples: Vec<i8> = coords.iter().map(|c| sign_of(c.0, zero_tol)).collect();
    let dir = (edge.b - edge.a) / len;
    let mut crossings = Vec::new();
    let mut push_root = |t: f64, guess: (f64, f64)| -> Result<()> {
        let p = edge.point(t);
        let (_, xi) = chart.inverse_from(p, guess).or_else(|_| chart.inverse(p))?;
        let slope = chart.curve().frame(xi)?.normal.dot(&dir);
        if slope.abs() < 1e-10 {
            return Err(Error::TangentialIntersection {
                edge: edge.id,
                slope: slope.abs(),
            });
        }
        crossings.push(EdgeCrossing { t, xi, point: p });
        Ok(())
    };
    let step = 1.0 / (EDGE_SAMPLES - 1) as f64;
    for k in 0..EDGE_SAMPLES - 1 {
        let (s0, s1) = (samples[k], samples[k + 1]);
        if s0 != 0 && s1 != 0 && s0 != s1 {
            let (mut a, mut b) = (k as f64 * step, (k + 1) as f64 * step);
            let mut g = coords[k];
            while b - a > 1e-13 {
                let m = 0.5 * (a + b);
                let c = chart
                    .inverse_from(edge.point(m), g)
                    .or_else(|_| chart.inverse(edge.point(m)))?;
                g = c;
                if sign_of(c.0, 0.0) == s0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            push_root(0.5 * (a + b), g)?;
        }
    }
    for k in 1..EDGE_SAMPLES - 1 {
        if samples[k] == 0 {
            let (l, r) = (samples[k - 1], samples[k + 1]);
            if l != 0 && r != 0 && l == r {
                let xi = coords[k].1;
                let slope = chart.curve().frame(xi)?.normal.dot(&dir);
                return Err(Error::TangentialIntersection {
                    edge: edge.id,
                    slope: slope.abs(),
                });
            }
            if l != 0 && r != 0 {
                push_root(k as f64 * step, coords[k])?;
            }
        }
    }
    crossings.sort_by(|a, b| a.t.total_cmp(&b.t));
    let mut bps = vec![0.0];
    bps.extend(crossings.iter().map(|c| c.t));
    bps.push(1.0);
    let mut sides = Vec::with_capacity(bps.len() - 1);
    for w in bps.windows(2) {
        let tm = 0.5 * (w[0] + w[1]);
        let k = ((tm / step).round() as usize).min(EDGE_SAMPLES - 1);
        let s = if samples[k] != 0 {
            samples[k]
        } else {
            let p = edge.point(tm);
            let c = chart.inverse_from(p, coords[k]).or_else(|_| chart.inverse(p))?;
            sign_of(c.0, 0.0)
        };
        sides.push(side_of_sign(s));
    }
    Ok(EdgeCut {
        crossings,
        sides,
        samples,
    })
}

/// Tags every element as interface or non-interface and locates the
/// interface crossings on the element boundaries.
///
/// An element is an interface element when the signed Frenet distance takes
/// both strict signs on its boundary; elements whose closure only touches the
/// interface along mesh lines or at corners are non-interface elements.
pub fn classify_elements(mesh: &RectMesh, chart: &FrenetChart) -> Result<Classification> {
    let zero_tol = 1e-13 * mesh.h();
    let edges: Vec<EdgeCut> = mesh
        .edges
        .par_iter()
        .map(|e| classify_edge(chart, e, zero_tol))
        .collect::<Result<_>>()?;
    let tags = mesh
        .elements
        .par_iter()
        .map(|el| tag_element(chart, &edges, el))
        .collect::<Result<Vec<_>>>()?;
    Ok(Classification { tags, edges })
}

fn tag_element(chart: &FrenetChart, edges: &[EdgeCut], el: &Element) -> Result<ElementTag> {
    let (mut plus, mut minus) = (false, false);
    for &e in &el.edges {
        for &s in &edges[e].samples {
            plus |= s > 0;
            minus |= s < 0;
        }
    }
    if !(plus && minus) {
        let side = if minus { Side::Minus } else if plus { Side::Plus } else { chart.side(el.center()) };
        return Ok(ElementTag::NonInterface { side });
    }
    let mut found: Vec<(Vec2, f64)> = Vec::new();
    for &e in &el.edges {
        for c in &edges[e].crossings {
            found.push((c.point, c.xi));
        }
    }
    // corners lying on the interface
    let corner_samples = [
        (el.edges[0], 0),
        (el.edges[0], EDGE_SAMPLES - 1),
        (el.edges[2], EDGE_SAMPLES - 1),
        (el.edges[2], 0),
    ];
    for (corner, (e, k)) in el.corners().iter().zip(corner_samples) {
        if edges[e].samples[k] == 0 {
            let (_, xi) = chart.inverse(*corner)?;
            found.push((*corner, xi));
        }
    }
    if found.len() != 2 {
        return Err(Error::AmbiguousCut {
            element: el.id,
            count: found.len(),
        });
    }
    let curve = chart.curve();
    let xi_a = found[0].1;
    let xi_b = curve.unwrap_near(found[1].1, xi_a);
    let (first, second) = if xi_a <= xi_b {
        ((found[0].0, xi_a), (found[1].0, xi_b))
    } else {
        ((found[1].0, xi_b), (found[0].0, xi_a))
    };
    let reference = 0.5 * (first.1 + second.1);
    let interval = chart.fictitious_interval(el.lo, el.hi, reference, 8)?;
    let chord = ChordChart::new(chart, interval.0, interval.1)?;
    let inter = |(p, xi): (Vec2, f64)| Intersection {
        point: [p.x, p.y],
        xi,
    };
    Ok(ElementTag::Interface(Box::new(InterfaceCut {
        intersections: [inter(first), inter(second)],
        interval,
        chord,
    })))
}

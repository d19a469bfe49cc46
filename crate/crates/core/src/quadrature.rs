//! Tensor Gauss rules on rectangles and curved cut cells, split edge rules
//! and 1D rules along the interface.

use crate::error::{Error, Result};
use crate::geometry::curve::det2;
use crate::geometry::{FrenetChart, Side, Vec2};
use crate::mesh::{EdgeCut, Edge, Element, InterfaceCut};
use crate::poly::{gauss_interval, gauss_legendre};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuadRule {
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate<F: Fn(Vec2) -> f64>(&self, f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(*p))
            .sum()
    }

    fn push(&mut self, p: Vec2, w: f64) {
        self.points.push(p);
        self.weights.push(w);
    }

    fn extend(&mut self, other: QuadRule) {
        self.points.extend(other.points);
        self.weights.extend(other.weights);
    }
}

/// Tensor Gauss–Legendre rule with `q` points per axis, exact on `Q^{2q-1}`.
pub fn gauss_rect(lo: Vec2, hi: Vec2, q: usize) -> QuadRule {
    let (xs, wx) = gauss_interval(lo.x, hi.x, q);
    let (ys, wy) = gauss_interval(lo.y, hi.y, q);
    let mut rule = QuadRule::default();
    for (y, wyv) in ys.iter().zip(&wy) {
        for (x, wxv) in xs.iter().zip(&wx) {
            rule.push(Vec2::new(*x, *y), wxv * wyv);
        }
    }
    rule
}

/// Gauss rule on `[xi0, xi1]` along the interface parameter.
pub fn interface_line_rule(xi0: f64, xi1: f64, q: usize) -> (Vec<f64>, Vec<f64>) {
    gauss_interval(xi0, xi1, q)
}

/// Quadrature point on an edge with the interface side of its sub-segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgePoint {
    pub x: Vec2,
    pub weight: f64,
    pub side: Side,
}

/// Gauss rule on each sub-segment of an edge split at its interface crossings.
pub fn cut_edge_rule(edge: &Edge, cut: &EdgeCut, q: usize) -> Vec<EdgePoint> {
    let len = edge.length();
    let bps = cut.breakpoints();
    let mut out = Vec::with_capacity(q * (bps.len() - 1));
    for (k, w) in bps.windows(2).enumerate() {
        let (ts, ws) = gauss_interval(w[0], w[1], q);
        for (t, wt) in ts.iter().zip(&ws) {
            out.push(EdgePoint {
                x: edge.point(*t),
                weight: wt * len,
                side: cut.sides[k],
            });
        }
    }
    out
}

/// Sub-region of a cut cell: the arc `g([xa, xb])` followed by the polygonal
/// chain from `g(xb)` back to `g(xa)`.
#[derive(Debug, Clone)]
struct Region {
    xa: f64,
    xb: f64,
    chain: Vec<Vec2>,
}

struct Fan {
    pivot: Vec2,
    /// Chain segments forming straight triangles with the pivot.
    triangles: Vec<(Vec2, Vec2)>,
    score: f64,
}

fn perimeter_coord(el: &Element, p: Vec2) -> f64 {
    let (hx, hy) = (el.hi.x - el.lo.x, el.hi.y - el.lo.y);
    let tol = 1e-9 * hx.max(hy);
    if (p.y - el.lo.y).abs() <= tol {
        p.x - el.lo.x
    } else if (p.x - el.hi.x).abs() <= tol {
        hx + (p.y - el.lo.y)
    } else if (p.y - el.hi.y).abs() <= tol {
        hx + hy + (el.hi.x - p.x)
    } else {
        2.0 * hx + hy + (el.hi.y - p.y)
    }
}

/// Chain from `b` to `a` along the element boundary; counter-clockwise for
/// the minus side and clockwise for the plus side.
fn boundary_chain(el: &Element, a: Vec2, b: Vec2, side: Side) -> Vec<Vec2> {
    let (hx, hy) = (el.hi.x - el.lo.x, el.hi.y - el.lo.y);
    let perim = 2.0 * (hx + hy);
    let eps = 1e-12 * perim;
    let (la, lb) = (perimeter_coord(el, a), perimeter_coord(el, b));
    let corners = el.corners();
    let corner_l = [0.0, hx, hx + hy, 2.0 * hx + hy];
    let offset = |l: f64| -> f64 {
        match side {
            Side::Minus => (l - lb).rem_euclid(perim),
            Side::Plus => (lb - l).rem_euclid(perim),
        }
    };
    let span = offset(la);
    let mut inner: Vec<(f64, Vec2)> = corners
        .iter()
        .zip(corner_l)
        .map(|(c, l)| (offset(l), *c))
        .filter(|(o, _)| *o > eps && *o < span - eps)
        .collect();
    inner.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut chain = vec![b];
    chain.extend(inner.into_iter().map(|(_, c)| c));
    chain.push(a);
    chain
}

fn arc_sine(chart: &FrenetChart, region: &Region, v: Vec2, orient: f64, samples: usize) -> f64 {
    let mut worst = f64::INFINITY;
    for k in 0..=samples {
        let xi = region.xa + (region.xb - region.xa) * k as f64 / samples as f64;
        let d = chart.curve().derivatives(xi);
        let rel = d[0] - v;
        let denom = rel.norm() * d[1].norm();
        if denom == 0.0 {
            return -1.0;
        }
        worst = worst.min(orient * det2(rel, d[1]) / denom);
    }
    worst
}

fn try_fan(chart: &FrenetChart, region: &Region, v: Vec2, orient: f64, scale: f64) -> Option<Fan> {
    let mut score = arc_sine(chart, region, v, orient, 32);
    let mut triangles = Vec::new();
    for w in region.chain.windows(2) {
        let (p, q) = (w[0], w[1]);
        if (q - p).norm() < 1e-14 * scale {
            continue;
        }
        let (dp, dq) = (p - v, q - v);
        if dp.norm() < 1e-14 * scale || dq.norm() < 1e-14 * scale {
            continue;
        }
        let sine = orient * det2(dp, dq) / (dp.norm() * dq.norm());
        if sine.abs() < 1e-14 && (p - v).dot(&(q - v)) < 0.0 {
            // pivot inside this segment
            continue;
        }
        score = score.min(sine);
        triangles.push((p, q));
    }
    if score > 1e-10 {
        Some(Fan {
            pivot: v,
            triangles,
            score,
        })
    } else {
        None
    }
}

fn pivot_candidates(region: &Region) -> Vec<Vec2> {
    let c = &region.chain;
    let mut out: Vec<Vec2> = c[1..c.len() - 1].to_vec();
    out.extend(c.windows(2).map(|w| (w[0] + w[1]) * 0.5));
    out
}

fn fan_rule(chart: &FrenetChart, region: &Region, fan: &Fan, q: usize) -> QuadRule {
    let (xs, wxs) = gauss_interval(region.xa, region.xb, q);
    let (rs, wrs) = gauss_legendre(q + 1);
    let rs: Vec<f64> = rs.iter().map(|r| 0.5 * (r + 1.0)).collect();
    let wrs: Vec<f64> = wrs.iter().map(|w| 0.5 * w).collect();
    let v = fan.pivot;
    let mut rule = QuadRule::default();
    for (xi, wx) in xs.iter().zip(&wxs) {
        let d = chart.curve().derivatives(*xi);
        let rel = d[0] - v;
        let jac = det2(d[1], rel).abs();
        for (r, wr) in rs.iter().zip(&wrs) {
            rule.push(v + rel * *r, wx * wr * r * jac);
        }
    }
    let (ss, wss) = gauss_interval(0.0, 1.0, q);
    for &(p, qv) in &fan.triangles {
        let jac = det2(qv - p, p - v).abs();
        for (s, ws) in ss.iter().zip(&wss) {
            let e = p + (qv - p) * *s - v;
            for (r, wr) in rs.iter().zip(&wrs) {
                rule.push(v + e * *r, ws * wr * r * jac);
            }
        }
    }
    rule
}

fn region_rule(
    chart: &FrenetChart,
    region: &Region,
    orient: f64,
    q: usize,
    scale: f64,
    level: usize,
    element: usize,
) -> Result<QuadRule> {
    let best = pivot_candidates(region)
        .into_iter()
        .filter_map(|v| try_fan(chart, region, v, orient, scale))
        .max_by(|a, b| a.score.total_cmp(&b.score));
    if let Some(fan) = best {
        return Ok(fan_rule(chart, region, &fan, q));
    }
    if level >= 3 {
        return Err(Error::DegeneratePartition {
            element,
            levels: level,
        });
    }
    let xm = 0.5 * (region.xa + region.xb);
    let m = chart.curve().point(xm);
    // split along a segment from the arc midpoint to a chain vertex or midpoint
    let n = region.chain.len();
    let mut splits: Vec<(Vec<Vec2>, usize)> = (1..n - 1).map(|k| (region.chain.clone(), k)).collect();
    for k in 0..n - 1 {
        let mut c = region.chain.clone();
        c.insert(k + 1, (c[k] + c[k + 1]) * 0.5);
        splits.push((c, k + 1));
    }
    splits.sort_by(|a, b| {
        let da = (a.0[a.1] - m).norm();
        let db = (b.0[b.1] - m).norm();
        da.total_cmp(&db)
    });
    let mut last = None;
    for (chain, k) in splits {
        let mut c1 = vec![m];
        c1.extend_from_slice(&chain[k..]);
        let mut c2 = chain[..=k].to_vec();
        c2.push(m);
        let r1 = Region {
            xa: region.xa,
            xb: xm,
            chain: c1,
        };
        let r2 = Region {
            xa: xm,
            xb: region.xb,
            chain: c2,
        };
        match (
            region_rule(chart, &r1, orient, q, scale, level + 1, element),
            region_rule(chart, &r2, orient, q, scale, level + 1, element),
        ) {
            (Ok(mut a), Ok(b)) => {
                a.extend(b);
                return Ok(a);
            }
            (Err(e), _) | (_, Err(e)) => last = Some(e),
        }
    }
    Err(last.unwrap_or(Error::DegeneratePartition {
        element,
        levels: level,
    }))
}

/// Rule on the part of an interface element lying on `side` of the
/// interface, built from fans of curved and straight triangles.
pub fn cut_cell_rule(
    chart: &FrenetChart,
    el: &Element,
    cut: &InterfaceCut,
    side: Side,
    q: usize,
) -> Result<QuadRule> {
    let [ia, ib] = cut.intersections;
    let (a, b) = (ia.position(), ib.position());
    let region = Region {
        xa: ia.xi,
        xb: ib.xi,
        chain: boundary_chain(el, a, b, side),
    };
    let orient = match side {
        Side::Minus => 1.0,
        Side::Plus => -1.0,
    };
    let scale = (el.hi - el.lo).norm();
    region_rule(chart, &region, orient, q, scale, 0, el.id)
}

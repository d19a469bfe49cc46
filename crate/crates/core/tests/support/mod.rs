#![allow(dead_code)]

pub mod plain_dg;

use frenet_ife::analysis::ExactSolution;
use frenet_ife::assembly::ProblemData;
use frenet_ife::discretization::{Coefficients, Discretization, QuadOrders};
use frenet_ife::geometry::{CurveSpec, FrenetChart, InterfaceCurve, Orientation, Side, Vec2};
use frenet_ife::mesh::RectMesh;

pub fn chart(spec: CurveSpec) -> FrenetChart {
    FrenetChart::new(InterfaceCurve::new(spec, Orientation::Ccw).unwrap(), 2.0 * 2f64.sqrt())
}

pub fn circle(r: f64) -> FrenetChart {
    chart(CurveSpec::Circle {
        center: [0.0, 0.0],
        radius: r,
    })
}

pub fn ellipse() -> FrenetChart {
    chart(CurveSpec::Ellipse {
        center: [0.037, -0.021],
        semi_axes: [0.7, 0.45],
    })
}

pub fn flower() -> FrenetChart {
    chart(CurveSpec::Flower {
        center: [0.0, 0.0],
        r0: 0.55,
        amplitude: 0.08,
        lobes: 5,
    })
}

/// Analytic test function with value, gradient, Hessian and Laplacian.
pub struct Analytic {
    pub name: &'static str,
    pub f: fn(Vec2) -> (f64, Vec2, [[f64; 2]; 2]),
}

impl Analytic {
    pub fn laplacian(&self, x: Vec2) -> f64 {
        let (_, _, h) = (self.f)(x);
        h[0][0] + h[1][1]
    }
}

pub fn analytic_functions() -> Vec<Analytic> {
    vec![
        Analytic {
            name: "cubic",
            f: |p| {
                let (x, y) = (p.x, p.y);
                (
                    x.powi(3) - 2.0 * x * y * y + y,
                    Vec2::new(3.0 * x * x - 2.0 * y * y, -4.0 * x * y + 1.0),
                    [[6.0 * x, -4.0 * y], [-4.0 * y, -4.0 * x]],
                )
            },
        },
        Analytic {
            name: "trig",
            f: |p| {
                let (s2, c2, s1, c1) = ((2.0 * p.x).sin(), (2.0 * p.x).cos(), p.y.sin(), p.y.cos());
                (
                    s2 * c1,
                    Vec2::new(2.0 * c2 * c1, -s2 * s1),
                    [[-4.0 * s2 * c1, -2.0 * c2 * s1], [-2.0 * c2 * s1, -s2 * c1]],
                )
            },
        },
        Analytic {
            name: "radial",
            f: |p| {
                let e = (-(p.x * p.x + p.y * p.y)).exp();
                (
                    e,
                    Vec2::new(-2.0 * p.x * e, -2.0 * p.y * e),
                    [
                        [(4.0 * p.x * p.x - 2.0) * e, 4.0 * p.x * p.y * e],
                        [4.0 * p.x * p.y * e, (4.0 * p.y * p.y - 2.0) * e],
                    ],
                )
            },
        },
    ]
}

fn rot(v: Vec2) -> Vec2 {
    Vec2::new(v.y, -v.x)
}

/// Frenet derivatives `[u_e, u_ee, u_x, u_xx]` of `u o P` by the chain rule.
pub fn frenet_derivatives(chart: &FrenetChart, u: &Analytic, eta: f64, xi: f64) -> [f64; 4] {
    let d = chart.curve().derivatives(xi);
    let (g, g1, g2, g3) = (d[0], d[1], d[2], d[3]);
    let s = g1.norm();
    let s1 = g1.dot(&g2) / s;
    let s2 = (g2.dot(&g2) + g1.dot(&g3)) / s - g1.dot(&g2).powi(2) / s.powi(3);
    let n = rot(g1 / s);
    let n1 = rot(g2 / s - g1 * (s1 / (s * s)));
    let n2 = rot(
        g3 / s - g2 * (2.0 * s1 / (s * s)) - g1 * (s2 / (s * s)) + g1 * (2.0 * s1 * s1 / s.powi(3)),
    );
    let x = g + n * eta;
    let px = g1 + n1 * eta;
    let pxx = g2 + n2 * eta;
    let (_, grad, h) = (u.f)(x);
    let hv = |a: Vec2, b: Vec2| a.x * (h[0][0] * b.x + h[0][1] * b.y) + a.y * (h[1][0] * b.x + h[1][1] * b.y);
    [grad.dot(&n), hv(n, n), grad.dot(&px), hv(px, px) + grad.dot(&pxx)]
}

/// Least-squares slope of `log(y)` against `log(x)`.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

/// Horizontal line `y = y0`; the minus side is `y > y0`.
pub fn line(y0: f64) -> FrenetChart {
    chart(CurveSpec::Line {
        point: [0.0, y0],
        direction: [1.0, 0.0],
        extent: 10.0,
    })
}

pub fn discretize(chart: FrenetChart, n: usize, m: usize, beta_minus: f64, beta_plus: f64) -> Discretization {
    Discretization::new(
        RectMesh::square(-1.0, 1.0, n).unwrap(),
        chart,
        m,
        Coefficients::new(beta_minus, beta_plus).unwrap(),
        QuadOrders::for_degree(m),
    )
    .unwrap()
}

/// Smooth solution with one coefficient on both sides: `u = r^4 / beta`.
pub struct Quartic {
    pub beta: f64,
}

impl ProblemData for Quartic {
    fn source(&self, x: Vec2, _side: Side) -> f64 {
        -16.0 * x.norm_squared()
    }

    fn boundary(&self, x: Vec2) -> f64 {
        self.value(x, Side::Plus)
    }
}

impl ExactSolution for Quartic {
    fn value(&self, x: Vec2, _side: Side) -> f64 {
        x.norm_squared().powi(2) / self.beta
    }

    fn grad(&self, x: Vec2, _side: Side) -> Vec2 {
        x * (4.0 * x.norm_squared() / self.beta)
    }
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (l, r) = (simpson(f, a, m), simpson(f, m, b));
        if depth > 40 || (l + r - whole).abs() <= 15.0 * tol {
            return l + r + (l + r - whole) / 15.0;
        }
        rec(f, a, m, l, tol / 2.0, depth + 1) + rec(f, m, b, r, tol / 2.0, depth + 1)
    }
    rec(&f, a, b, simpson(&f, a, b), tol, 0)
}

/// Area of `{|x - center| < r}` inside the box `[lo, hi]`, integrating the
/// vertical chord length piecewise between its kinks.
pub fn disk_box_area(center: Vec2, r: f64, lo: Vec2, hi: Vec2) -> f64 {
    let chord = |x: f64| {
        let d = r * r - (x - center.x).powi(2);
        if d <= 0.0 {
            return 0.0;
        }
        let s = d.sqrt();
        ((center.y + s).min(hi.y) - (center.y - s).max(lo.y)).max(0.0)
    };
    let mut breaks = vec![lo.x, hi.x, center.x - r, center.x + r];
    for y in [lo.y, hi.y] {
        let d = r * r - (y - center.y).powi(2);
        if d > 0.0 {
            breaks.push(center.x - d.sqrt());
            breaks.push(center.x + d.sqrt());
        }
    }
    breaks.retain(|&x| x >= lo.x && x <= hi.x);
    breaks.sort_by(f64::total_cmp);
    breaks
        .windows(2)
        .map(|w| adaptive_simpson(chord, w[0], w[1], 1e-15))
        .sum()
}

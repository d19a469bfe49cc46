use std::f64::consts::TAU;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec2 = Vector2<f64>;

/// Rotation taking the unit tangent to the unit normal, `n = [[0, 1], [-1, 0]] tau`.
#[inline]
pub fn rotate_to_normal(v: Vec2) -> Vec2 {
    Vec2::new(v.y, -v.x)
}

#[inline]
pub fn det2(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Truncated Fourier series `c + sum_k (cos[k-1] cos(k xi) + sin[k-1] sin(k xi))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigSeries {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl TrigSeries {
    /// Value and first three derivatives.
    fn jet(&self, xi: f64) -> [f64; 4] {
        let mut out = [self.constant, 0.0, 0.0, 0.0];
        let n = self.cos.len().max(self.sin.len());
        for k in 1..=n {
            let a = self.cos.get(k - 1).copied().unwrap_or(0.0);
            let b = self.sin.get(k - 1).copied().unwrap_or(0.0);
            let kf = k as f64;
            let (s, c) = (kf * xi).sin_cos();
            out[0] += a * c + b * s;
            out[1] += kf * (-a * s + b * c);
            out[2] += kf * kf * (-a * c - b * s);
            out[3] += kf * kf * kf * (a * s - b * c);
        }
        out
    }

    fn is_finite(&self) -> bool {
        self.constant.is_finite()
            && self.cos.iter().all(|v| v.is_finite())
            && self.sin.iter().all(|v| v.is_finite())
    }
}

/// Analytic curve families with derivatives available to third order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveSpec {
    Circle {
        #[serde(default)]
        center: [f64; 2],
        radius: f64,
    },
    Ellipse {
        #[serde(default)]
        center: [f64; 2],
        semi_axes: [f64; 2],
    },
    /// Polar graph `r(theta) = r0 + amplitude * cos(lobes * theta)`.
    Flower {
        #[serde(default)]
        center: [f64; 2],
        r0: f64,
        amplitude: f64,
        lobes: u32,
    },
    /// Straight line `point + xi * direction`, `xi` in `[-extent, extent]`.
    Line {
        point: [f64; 2],
        direction: [f64; 2],
        #[serde(default = "default_line_extent")]
        extent: f64,
    },
    Trig {
        x: TrigSeries,
        y: TrigSeries,
    },
}

fn default_line_extent() -> f64 {
    10.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Ccw,
    Cw,
}

/// Unit tangent, unit normal, signed curvature and speed at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetFrame {
    pub tangent: Vec2,
    pub normal: Vec2,
    pub curvature: f64,
    pub speed: f64,
}

/// Speed and curvature together with their parameter derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet {
    pub speed: f64,
    pub dspeed: f64,
    pub curvature: f64,
    pub dcurvature: f64,
}

const SAMPLE_COUNT: usize = 2048;

/// Regular parametrized interface curve `g : [xi_s, xi_e] -> R^2`.
#[derive(Debug, Clone)]
pub struct InterfaceCurve {
    spec: CurveSpec,
    reversed: bool,
    domain: (f64, f64),
    periodic: bool,
    max_curvature: f64,
    samples: Vec<(f64, Vec2)>,
}

impl InterfaceCurve {
    pub fn new(spec: CurveSpec, orientation: Orientation) -> Result<Self> {
        validate_spec(&spec)?;
        let (domain, periodic) = match &spec {
            CurveSpec::Line { extent, .. } => ((-extent, *extent), false),
            _ => ((0.0, TAU), true),
        };
        let mut curve = InterfaceCurve {
            spec,
            reversed: orientation == Orientation::Cw,
            domain,
            periodic,
            max_curvature: 0.0,
            samples: Vec::new(),
        };
        let (a, b) = domain;
        let n = if periodic { SAMPLE_COUNT } else { 64 };
        let mut kmax: f64 = 0.0;
        for i in 0..=n {
            if periodic && i == n {
                break;
            }
            let xi = a + (b - a) * i as f64 / n as f64;
            let d = curve.derivatives(xi);
            let speed = d[1].norm();
            if speed < 1e-12 {
                return Err(Error::DegenerateParametrization { xi, speed });
            }
            kmax = kmax.max((det2(d[1], d[2]) / speed.powi(3)).abs());
            curve.samples.push((xi, d[0]));
        }
        curve.max_curvature = match &curve.spec {
            CurveSpec::Circle { radius, .. } => 1.0 / radius,
            CurveSpec::Line { .. } => 0.0,
            _ => curve.refine_max_curvature(kmax),
        };
        Ok(curve)
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn period(&self) -> f64 {
        self.domain.1 - self.domain.0
    }

    /// Upper bound for `|kappa|` over the whole curve.
    pub fn max_curvature(&self) -> f64 {
        self.max_curvature
    }

    fn refine_max_curvature(&self, coarse: f64) -> f64 {
        let n = 16 * SAMPLE_COUNT;
        let (a, b) = self.domain;
        let mut kmax = coarse;
        for i in 0..n {
            let xi = a + (b - a) * i as f64 / n as f64;
            let d = self.derivatives(xi);
            kmax = kmax.max((det2(d[1], d[2]) / d[1].norm().powi(3)).abs());
        }
        kmax * (1.0 + 1e-3)
    }

    fn raw_derivatives(&self, xi: f64) -> [Vec2; 4] {
        match &self.spec {
            CurveSpec::Circle { center, radius } => {
                let (s, c) = xi.sin_cos();
                let r = *radius;
                [
                    Vec2::new(center[0] + r * c, center[1] + r * s),
                    Vec2::new(-r * s, r * c),
                    Vec2::new(-r * c, -r * s),
                    Vec2::new(r * s, -r * c),
                ]
            }
            CurveSpec::Ellipse { center, semi_axes } => {
                let (s, c) = xi.sin_cos();
                let (a, b) = (semi_axes[0], semi_axes[1]);
                [
                    Vec2::new(center[0] + a * c, center[1] + b * s),
                    Vec2::new(-a * s, b * c),
                    Vec2::new(-a * c, -b * s),
                    Vec2::new(a * s, -b * c),
                ]
            }
            CurveSpec::Flower {
                center,
                r0,
                amplitude,
                lobes,
            } => {
                let k = *lobes as f64;
                let (sk, ck) = (k * xi).sin_cos();
                let r = [
                    r0 + amplitude * ck,
                    -amplitude * k * sk,
                    -amplitude * k * k * ck,
                    amplitude * k * k * k * sk,
                ];
                let (s, c) = xi.sin_cos();
                let e = Vec2::new(c, s);
                let ep = Vec2::new(-s, c);
                [
                    Vec2::new(center[0], center[1]) + e * r[0],
                    e * r[1] + ep * r[0],
                    e * (r[2] - r[0]) + ep * (2.0 * r[1]),
                    e * (r[3] - 3.0 * r[1]) + ep * (3.0 * r[2] - r[0]),
                ]
            }
            CurveSpec::Line {
                point, direction, ..
            } => {
                let d = Vec2::new(direction[0], direction[1]).normalize();
                [
                    Vec2::new(point[0], point[1]) + d * xi,
                    d,
                    Vec2::zeros(),
                    Vec2::zeros(),
                ]
            }
            CurveSpec::Trig { x, y } => {
                let jx = x.jet(xi);
                let jy = y.jet(xi);
                [
                    Vec2::new(jx[0], jy[0]),
                    Vec2::new(jx[1], jy[1]),
                    Vec2::new(jx[2], jy[2]),
                    Vec2::new(jx[3], jy[3]),
                ]
            }
        }
    }

    /// `[g, g', g'', g''']` at `xi`.
    pub fn derivatives(&self, xi: f64) -> [Vec2; 4] {
        if self.reversed {
            let d = self.raw_derivatives(-xi);
            [d[0], -d[1], d[2], -d[3]]
        } else {
            self.raw_derivatives(xi)
        }
    }

    pub fn point(&self, xi: f64) -> Vec2 {
        self.derivatives(xi)[0]
    }

    pub fn frame(&self, xi: f64) -> Result<FrenetFrame> {
        let d = self.derivatives(xi);
        frame_from(xi, &d)
    }

    /// Speed, curvature and their `xi`-derivatives.
    pub fn metric_jet(&self, xi: f64) -> MetricJet {
        let d = self.derivatives(xi);
        let s = d[1].norm();
        let ds = d[1].dot(&d[2]) / s;
        let k = det2(d[1], d[2]) / s.powi(3);
        let dk = det2(d[1], d[3]) / s.powi(3) - 3.0 * det2(d[1], d[2]) * ds / s.powi(4);
        MetricJet {
            speed: s,
            dspeed: ds,
            curvature: k,
            dcurvature: dk,
        }
    }

    /// Shift `xi` by a multiple of the period so that it lies closest to `reference`.
    pub fn unwrap_near(&self, xi: f64, reference: f64) -> f64 {
        if !self.periodic {
            return xi;
        }
        let p = self.period();
        xi - ((xi - reference) / p).round() * p
    }

    /// Chord-projection guess `(eta, xi)` for the foot point of `x`.
    pub fn foot_guess(&self, x: Vec2) -> (f64, f64) {
        if let CurveSpec::Line { .. } = self.spec {
            let d = self.derivatives(0.0);
            let t = d[1].normalize();
            let xi = (x - d[0]).dot(&t);
            return ((x - d[0]).dot(&rotate_to_normal(t)), xi);
        }
        let (best, _) = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, (_, p))| (i, (p - x).norm_squared()))
            .fold((0, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc });
        let n = self.samples.len();
        let step = self.period() / n as f64;
        let mut guess = (self.samples[best].0, f64::INFINITY);
        for nb in [best + n - 1, best + 1] {
            let (xa, pa) = self.samples[best];
            let pb = self.samples[nb % n].1;
            let dir = pb - pa;
            let len2 = dir.norm_squared();
            if len2 == 0.0 {
                continue;
            }
            let t = ((x - pa).dot(&dir) / len2).clamp(0.0, 1.0);
            let dist = (pa + dir * t - x).norm_squared();
            if dist < guess.1 {
                let sign = if nb == best + 1 { 1.0 } else { -1.0 };
                guess = (xa + sign * t * step, dist);
            }
        }
        let xi = guess.0;
        let d = self.derivatives(xi);
        let n_vec = rotate_to_normal(d[1].normalize());
        ((x - d[0]).dot(&n_vec), xi)
    }
}

pub(crate) fn frame_from(xi: f64, d: &[Vec2; 4]) -> Result<FrenetFrame> {
    let speed = d[1].norm();
    if !(speed >= 1e-12) {
        return Err(Error::DegenerateParametrization { xi, speed });
    }
    let tangent = d[1] / speed;
    Ok(FrenetFrame {
        tangent,
        normal: rotate_to_normal(tangent),
        curvature: det2(d[1], d[2]) / speed.powi(3),
        speed,
    })
}

/// Frenet apparatus of `curve` at `xi`.
pub fn frenet_apparatus(curve: &InterfaceCurve, xi: f64) -> Result<FrenetFrame> {
    curve.frame(xi)
}

fn finite2(v: &[f64; 2]) -> bool {
    v[0].is_finite() && v[1].is_finite()
}

fn validate_spec(spec: &CurveSpec) -> Result<()> {
    let bad = |msg: &str| Err(Error::Config(msg.to_string()));
    match spec {
        CurveSpec::Circle { center, radius } => {
            if !finite2(center) || !(radius.is_finite() && *radius > 0.0) {
                return bad("circle needs a finite center and a positive radius");
            }
        }
        CurveSpec::Ellipse { center, semi_axes } => {
            if !finite2(center) || !semi_axes.iter().all(|a| a.is_finite() && *a > 0.0) {
                return bad("ellipse needs a finite center and positive semi-axes");
            }
        }
        CurveSpec::Flower {
            center,
            r0,
            amplitude,
            lobes,
        } => {
            if !finite2(center) || !r0.is_finite() || !amplitude.is_finite() {
                return bad("flower parameters must be finite");
            }
            if *r0 <= 0.0 || amplitude.abs() >= *r0 || *lobes == 0 || *lobes > 64 {
                return bad("flower needs r0 > |amplitude| and 1 <= lobes <= 64");
            }
        }
        CurveSpec::Line {
            point,
            direction,
            extent,
        } => {
            if !finite2(point) || !finite2(direction) || !(extent.is_finite() && *extent > 0.0) {
                return bad("line needs a finite point, direction and positive extent");
            }
            if Vec2::new(direction[0], direction[1]).norm() < 1e-12 {
                return bad("line direction must be nonzero");
            }
        }
        CurveSpec::Trig { x, y } => {
            if !x.is_finite() || !y.is_finite() {
                return bad("trigonometric coefficients must be finite");
            }
            if x.cos.len().max(x.sin.len()).max(y.cos.len()).max(y.sin.len()) > 64 {
                return bad("trigonometric series limited to 64 harmonics");
            }
        }
    }
    Ok(())
}

//! Run configuration read from TOML, with validation and the objects it
//! describes (chart, coefficients, benchmark case).

use serde::{Deserialize, Serialize};

use crate::analysis::{ManufacturedCircle, StudySetup};
use crate::discretization::{Coefficients, QuadOrders};
use crate::error::{Error, Result};
use crate::geometry::{CurveSpec, FrenetChart, InterfaceCurve, Orientation, Vec2};

const MAX_MESH: usize = 4096;
const MAX_QUAD: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Default for DomainConfig {
    fn default() -> Self {
        DomainConfig {
            lo: [-1.0, -1.0],
            hi: [1.0, 1.0],
        }
    }
}

/// Interface curve: a [`CurveSpec`] plus its orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterfaceConfig {
    #[serde(flatten)]
    pub spec: CurveSpec,
    #[serde(default)]
    pub orientation: Orientation,
}

impl InterfaceConfig {
    pub fn curve(&self) -> Result<InterfaceCurve> {
        InterfaceCurve::new(self.spec.clone(), self.orientation)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientConfig {
    pub beta_minus: f64,
    pub beta_plus: f64,
}

impl Default for CoefficientConfig {
    fn default() -> Self {
        CoefficientConfig {
            beta_minus: 1.0,
            beta_plus: 10.0,
        }
    }
}

/// Penalty parameter: a fixed value or `"auto"` (from the trace probe).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Sigma0Repr", into = "Sigma0Repr")]
pub enum Sigma0 {
    #[default]
    Auto,
    Fixed(f64),
}

impl Sigma0 {
    pub fn fixed(self) -> Option<f64> {
        match self {
            Sigma0::Auto => None,
            Sigma0::Fixed(v) => Some(v),
        }
    }
}

impl std::str::FromStr for Sigma0 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "auto" {
            return Ok(Sigma0::Auto);
        }
        s.trim()
            .parse::<f64>()
            .map(Sigma0::Fixed)
            .map_err(|_| Error::Config(format!("sigma0 must be \"auto\" or a number (got {s:?})")))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Sigma0Repr {
    Number(f64),
    Text(String),
}

impl TryFrom<Sigma0Repr> for Sigma0 {
    type Error = Error;

    fn try_from(r: Sigma0Repr) -> Result<Self> {
        match r {
            Sigma0Repr::Number(v) => Ok(Sigma0::Fixed(v)),
            Sigma0Repr::Text(s) => s.parse(),
        }
    }
}

impl From<Sigma0> for Sigma0Repr {
    fn from(s: Sigma0) -> Self {
        match s {
            Sigma0::Auto => Sigma0Repr::Text("auto".into()),
            Sigma0::Fixed(v) => Sigma0Repr::Number(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizationConfig {
    pub degree: usize,
    #[serde(default)]
    pub sigma0: Sigma0,
    pub meshes: Vec<usize>,
}

impl Default for DiscretizationConfig {
    fn default() -> Self {
        DiscretizationConfig {
            degree: 1,
            sigma0: Sigma0::Auto,
            meshes: vec![8, 16, 32, 64],
        }
    }
}

/// Quadrature overrides; missing entries take the degree defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interface: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseId {
    /// Radial solution `r^p / beta` around a circular interface.
    #[default]
    Circle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub id: CaseId,
    #[serde(default = "default_power")]
    pub power: i32,
}

fn default_power() -> i32 {
    4
}

impl Default for CaseConfig {
    fn default() -> Self {
        CaseConfig {
            id: CaseId::Circle,
            power: default_power(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub deterministic: bool,
    #[serde(default)]
    pub dump_ife: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: "out".into(),
            seed: 0,
            deterministic: false,
            dump_ife: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub domain: DomainConfig,
    pub interface: InterfaceConfig,
    #[serde(default)]
    pub coefficients: CoefficientConfig,
    #[serde(default)]
    pub discretization: DiscretizationConfig,
    #[serde(default)]
    pub quad: QuadConfig,
    #[serde(default)]
    pub case: CaseConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Parses and validates a configuration file.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Parses a standalone interface table (`kind = "circle"`, ...) and builds the curve.
pub fn parse_curve(text: &str) -> Result<InterfaceCurve> {
    let cfg: InterfaceConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
    cfg.curve()
}

fn config_err(msg: String) -> Error {
    Error::Config(msg)
}

impl RunConfig {
    /// Circle benchmark on `(-1, 1)^2` with the given radius.
    pub fn circle(radius: f64) -> Self {
        RunConfig {
            domain: DomainConfig::default(),
            interface: InterfaceConfig {
                spec: CurveSpec::Circle {
                    center: [0.0, 0.0],
                    radius,
                },
                orientation: Orientation::Ccw,
            },
            coefficients: CoefficientConfig::default(),
            discretization: DiscretizationConfig::default(),
            quad: QuadConfig::default(),
            case: CaseConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let d = &self.domain;
        if !d.lo.iter().chain(&d.hi).all(|v| v.is_finite()) || !(d.hi[0] > d.lo[0] && d.hi[1] > d.lo[1]) {
            return Err(config_err("domain must satisfy hi > lo componentwise".into()));
        }
        self.coefficients()?;
        let disc = &self.discretization;
        if !(1..=3).contains(&disc.degree) {
            return Err(config_err(format!("degree must be 1, 2 or 3 (got {})", disc.degree)));
        }
        if let Sigma0::Fixed(v) = disc.sigma0 {
            if !(v > 0.0 && v.is_finite()) {
                return Err(config_err(format!("sigma0 must be positive (got {v})")));
            }
        }
        if disc.meshes.is_empty() || disc.meshes.iter().any(|&n| n == 0 || n > MAX_MESH) {
            return Err(config_err(format!("meshes must be a non-empty list of sizes in 1..={MAX_MESH}")));
        }
        let q = self.quad_orders();
        if [q.volume, q.edge, q.interface].iter().any(|&v| v == 0 || v > MAX_QUAD) {
            return Err(config_err(format!("quadrature orders must lie in 1..={MAX_QUAD}")));
        }
        let curve = self.interface.curve().map_err(|e| config_err(format!("interface: {e}")))?;
        for &n in &disc.meshes {
            let side = ((d.hi[0] - d.lo[0]) / n as f64).max((d.hi[1] - d.lo[1]) / n as f64);
            let hk = side * curve.max_curvature();
            if hk > 0.5 {
                return Err(config_err(format!(
                    "mesh n = {n} too coarse for the interface: h * kappa = {hk:.4} > 0.5"
                )));
            }
        }
        match self.case.id {
            CaseId::Circle => {
                if !matches!(self.interface.spec, CurveSpec::Circle { .. }) {
                    return Err(config_err("case \"circle\" requires a circular interface".into()));
                }
                let p = self.case.power;
                if p < 4 || p % 2 != 0 || p > 64 {
                    return Err(config_err(format!("case power must be an even integer in 4..=64 (got {p})")));
                }
            }
        }
        Ok(())
    }

    pub fn coefficients(&self) -> Result<Coefficients> {
        Coefficients::new(self.coefficients.beta_minus, self.coefficients.beta_plus)
    }

    pub fn quad_orders(&self) -> QuadOrders {
        let def = QuadOrders::for_degree(self.discretization.degree);
        QuadOrders {
            volume: self.quad.volume.unwrap_or(def.volume),
            edge: self.quad.edge.unwrap_or(def.edge),
            interface: self.quad.interface.unwrap_or(def.interface),
        }
    }

    /// Copy with every quadrature default written out.
    pub fn resolved(&self) -> RunConfig {
        let q = self.quad_orders();
        let mut out = self.clone();
        out.quad = QuadConfig {
            volume: Some(q.volume),
            edge: Some(q.edge),
            interface: Some(q.interface),
        };
        out
    }

    pub fn lo(&self) -> Vec2 {
        Vec2::new(self.domain.lo[0], self.domain.lo[1])
    }

    pub fn hi(&self) -> Vec2 {
        Vec2::new(self.domain.hi[0], self.domain.hi[1])
    }

    pub fn chart(&self) -> Result<FrenetChart> {
        let diam = (self.hi() - self.lo()).norm();
        Ok(FrenetChart::new(self.interface.curve()?, diam))
    }

    pub fn setup(&self) -> Result<StudySetup> {
        Ok(StudySetup {
            lo: self.lo(),
            hi: self.hi(),
            chart: self.chart()?,
            beta: self.coefficients()?,
            degree: self.discretization.degree,
            quad: self.quad_orders(),
            sigma0: self.discretization.sigma0.fixed(),
        })
    }

    pub fn exact(&self) -> Result<ManufacturedCircle> {
        match (self.case.id, &self.interface.spec) {
            (CaseId::Circle, CurveSpec::Circle { center, radius }) => Ok(ManufacturedCircle::new(
                *center,
                *radius,
                self.coefficients()?,
                self.case.power,
            )),
            _ => Err(config_err("case \"circle\" requires a circular interface".into())),
        }
    }
}

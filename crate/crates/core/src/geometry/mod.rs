//! Interface curves, Frenet coordinates and their chord approximations.

pub mod chart;
pub mod chord;
pub mod curve;

pub use chart::{FrenetChart, NewtonSettings, Side};
pub use chord::ChordChart;
pub use curve::{
    frenet_apparatus, CurveSpec, FrenetFrame, InterfaceCurve, MetricJet, Orientation, TrigSeries,
    Vec2,
};

use serde::{Deserialize, Serialize};

use super::manufactured::ExactSolution;
use super::norms::{error_norms, ErrorNorms, FeFunction};
use super::probes::{auto_sigma0, trace_probe};
use crate::assembly::{assemble_parts, solve};
use crate::discretization::{Coefficients, Discretization, QuadOrders};
use crate::error::Result;
use crate::geometry::{FrenetChart, Vec2};
use crate::ife_space::project_l2;
use crate::mesh::RectMesh;

/// Everything needed to discretize one problem on a chain of meshes.
#[derive(Debug, Clone)]
pub struct StudySetup {
    pub lo: Vec2,
    pub hi: Vec2,
    pub chart: FrenetChart,
    pub beta: Coefficients,
    pub degree: usize,
    pub quad: QuadOrders,
    /// `None` selects the penalty from the trace probe.
    pub sigma0: Option<f64>,
}

impl StudySetup {
    pub fn discretize(&self, n: usize) -> Result<Discretization> {
        let mesh = RectMesh::new(self.lo, self.hi, n, n)?;
        Discretization::new(mesh, self.chart.clone(), self.degree, self.beta, self.quad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelResult {
    pub n: usize,
    pub h: f64,
    pub dofs: usize,
    pub interface_elements: usize,
    pub errors: ErrorNorms,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub l2: f64,
    pub h1: f64,
    pub norm_h: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub sigma0: f64,
    pub levels: Vec<LevelResult>,
    /// Rates between consecutive levels (one fewer than `levels`).
    pub rates: Vec<Rates>,
    /// Whether the L2 and energy errors decrease at every refinement.
    pub monotone: bool,
}

fn rate(e0: f64, e1: f64, h0: f64, h1: f64) -> f64 {
    (e0 / e1).ln() / (h0 / h1).ln()
}

pub fn rates(levels: &[LevelResult]) -> Vec<Rates> {
    levels
        .windows(2)
        .map(|w| {
            let (a, b) = (&w[0], &w[1]);
            Rates {
                l2: rate(a.errors.l2, b.errors.l2, a.h, b.h),
                h1: rate(a.errors.h1, b.errors.h1, a.h, b.h),
                norm_h: rate(a.errors.norm_h, b.errors.norm_h, a.h, b.h),
                energy: rate(a.errors.energy, b.errors.energy, a.h, b.h),
            }
        })
        .collect()
}

fn report(sigma0: f64, levels: Vec<LevelResult>) -> StudyReport {
    let monotone = levels
        .windows(2)
        .all(|w| w[1].errors.l2 < w[0].errors.l2 && w[1].errors.energy < w[0].errors.energy);
    StudyReport {
        sigma0,
        rates: rates(&levels),
        levels,
        monotone,
    }
}

/// Largest trace constant over all elements of all levels and the penalty
/// `4 C_t^2 + 1` derived from it.
pub fn resolve_sigma0(discs: &[Discretization]) -> Result<f64> {
    let mut ct = 0.0f64;
    for d in discs {
        ct = ct.max(trace_probe(d)?.max);
    }
    Ok(auto_sigma0(ct))
}

/// Solves on every level and reports errors and rates. With automatic
/// penalty one `sigma0` is chosen for the whole chain.
pub fn convergence_study(setup: &StudySetup, meshes: &[usize], exact: &dyn ExactSolution) -> Result<StudyReport> {
    let discs = meshes
        .iter()
        .map(|&n| setup.discretize(n))
        .collect::<Result<Vec<_>>>()?;
    let sigma0 = match setup.sigma0 {
        Some(s) => s,
        None => resolve_sigma0(&discs)?,
    };
    let mut levels = Vec::with_capacity(discs.len());
    for d in &discs {
        let parts = assemble_parts(d, Some(exact));
        let coeffs = solve(&parts.system(sigma0))?;
        let field = FeFunction {
            disc: d,
            coeffs: coeffs.as_slice(),
        };
        levels.push(LevelResult {
            n: d.mesh.nx,
            h: d.h(),
            dofs: d.num_dofs(),
            interface_elements: d.classification.num_interface(),
            errors: error_norms(d, &field, exact, sigma0),
        });
    }
    Ok(report(sigma0, levels))
}

/// L2 projection errors and rates on every level.
pub fn projection_study(setup: &StudySetup, meshes: &[usize], exact: &dyn ExactSolution) -> Result<StudyReport> {
    let sigma0 = setup.sigma0.unwrap_or(1.0);
    let mut levels = Vec::with_capacity(meshes.len());
    for &n in meshes {
        let d = setup.discretize(n)?;
        let coeffs = project_l2(&d, |x, side| exact.value(x, side))?;
        let field = FeFunction { disc: &d, coeffs: &coeffs };
        levels.push(LevelResult {
            n,
            h: d.h(),
            dofs: d.num_dofs(),
            interface_elements: d.classification.num_interface(),
            errors: error_norms(&d, &field, exact, sigma0),
        });
    }
    Ok(report(sigma0, levels))
}

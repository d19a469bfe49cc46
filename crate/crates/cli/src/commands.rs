use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use frenet_ife::analysis::probes::{
    auto_sigma0, coercivity_constant, coercivity_threshold, geometry_level, geometry_slopes, trace_probe,
    GeometryLevel, GeometrySlopes,
};
use frenet_ife::analysis::{
    convergence_study, error_norms, projection_study, ErrorNorms, ExactSolution, FeFunction, LevelResult, Rates,
};
use frenet_ife::assembly::{assemble_parts, asymmetry, solve as solve_system, write_matrix_market, write_vector_market};
use frenet_ife::config::RunConfig;
use frenet_ife::discretization::Discretization;
use frenet_ife::geometry::{Side, Vec2};
use frenet_ife::ife_space::{LocalSpace, Origin};
use frenet_ife::mesh::RectMesh;
use frenet_ife::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::{write_errors, write_json, write_solution, write_study, SolutionSample};

const INTERFACE_SAMPLES: usize = 50;
const GEOMETRY_SAMPLES: usize = 9;
const COERCIVITY_MAX_DOFS: usize = 6000;
const COERCIVITY_TARGET: f64 = 0.25;

fn elapsed(cfg: &RunConfig, t0: Instant) -> Option<f64> {
    (!cfg.output.deterministic).then(|| t0.elapsed().as_secs_f64())
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Minus => "minus",
        Side::Plus => "plus",
    }
}

#[derive(Serialize)]
struct InterfaceJump {
    samples: usize,
    max_value_jump: f64,
    max_flux_jump: f64,
}

#[derive(Serialize)]
struct SolveReport {
    command: &'static str,
    config: RunConfig,
    n: usize,
    h: f64,
    dofs: usize,
    interface_elements: usize,
    sigma0: f64,
    sigma0_auto: bool,
    trace_constant_max: f64,
    /// `C_t^2 + 1/2`, the penalty above which coercivity is guaranteed.
    coercivity_bound: f64,
    errors: ErrorNorms,
    relative_residual: f64,
    asymmetry: f64,
    interface_jump: InterfaceJump,
    elapsed_seconds: Option<f64>,
}

/// Jumps of the discrete solution and its flux at random interface points.
fn interface_jump(disc: &Discretization, coeffs: &[f64], seed: u64) -> Result<InterfaceJump, Error> {
    let ids: Vec<usize> = disc.classification.interface_elements().collect();
    let mut out = InterfaceJump {
        samples: 0,
        max_value_jump: 0.0,
        max_flux_jump: 0.0,
    };
    if ids.is_empty() {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tries = 0;
    while out.samples < INTERFACE_SAMPLES && tries < 100 * INTERFACE_SAMPLES {
        tries += 1;
        let k = ids[rng.random_range(0..ids.len())];
        let LocalSpace::Interface(space) = &disc.spaces[k] else {
            continue;
        };
        let (x0, x1) = disc.tag(k).cut().expect("interface element").interval;
        let xi = rng.random_range(x0..x1);
        let x = disc.chart.map(0.0, xi)?;
        if !disc.mesh.elements[k].contains(x, 0.0) {
            continue;
        }
        let normal = disc.chart.curve().frame(xi)?.normal;
        let off = disc.offset(k);
        let c = &coeffs[off..off + space.basis.dim()];
        let mut vals = [0.0; 2];
        let mut flux = [0.0; 2];
        for (s, side) in [Side::Minus, Side::Plus].into_iter().enumerate() {
            let sv = space.eval_at(&disc.chart, 0.0, xi, side)?;
            vals[s] = sv.values.iter().zip(c).map(|(a, b)| a * b).sum();
            let g: Vec2 = sv.grads.iter().zip(c).map(|(a, b)| a * *b).sum();
            flux[s] = disc.beta.of(side) * g.dot(&normal);
        }
        out.max_value_jump = out.max_value_jump.max((vals[1] - vals[0]).abs());
        out.max_flux_jump = out.max_flux_jump.max((flux[1] - flux[0]).abs());
        out.samples += 1;
    }
    Ok(out)
}

fn solution_samples(
    disc: &Discretization,
    coeffs: &[f64],
    exact: &dyn ExactSolution,
) -> Result<Vec<SolutionSample>, Error> {
    let s = disc.degree + 1;
    let mut rows = Vec::with_capacity(disc.mesh.num_elements() * s * s);
    for el in &disc.mesh.elements {
        let off = disc.offset(el.id);
        for b in 0..s {
            for a in 0..s {
                let t = Vec2::new((a as f64 + 0.5) / s as f64, (b as f64 + 0.5) / s as f64);
                let x = el.lo + (el.hi - el.lo).component_mul(&t);
                let side = disc.side_at(el.id, x)?;
                let sv = disc.spaces[el.id].eval(&disc.chart, x, side)?;
                let value = sv.values.iter().zip(&coeffs[off..]).map(|(v, c)| v * c).sum();
                rows.push(SolutionSample {
                    element: el.id,
                    x: x.x,
                    y: x.y,
                    side: side_name(side),
                    value,
                    exact: exact.value(x, side),
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
struct IfeFunctionDump {
    origin: Origin,
    minus: Vec<f64>,
    plus: Vec<f64>,
}

#[derive(Serialize)]
struct IfeElementDump {
    element: usize,
    interval: (f64, f64),
    h: f64,
    xi_c: f64,
    delta: f64,
    functions: Vec<IfeFunctionDump>,
}

fn dump_ife(disc: &Discretization, path: &Path) -> Result<(), Error> {
    let rows: Vec<IfeElementDump> = disc
        .spaces
        .iter()
        .enumerate()
        .filter_map(|(k, s)| match s {
            LocalSpace::Interface(sp) => Some(IfeElementDump {
                element: k,
                interval: disc.tag(k).cut().expect("interface element").interval,
                h: sp.basis.scaling.h,
                xi_c: sp.basis.scaling.xi_c,
                delta: sp.basis.scaling.delta,
                functions: sp
                    .basis
                    .functions
                    .iter()
                    .map(|f| IfeFunctionDump {
                        origin: f.origin,
                        minus: f.minus.coeffs().to_vec(),
                        plus: f.plus.coeffs().to_vec(),
                    })
                    .collect(),
            }),
            LocalSpace::Polynomial(_) => None,
        })
        .collect();
    write_json(path, &rows)
}

pub fn solve(cfg: &RunConfig, out: &Path, dump_system: bool) -> Result<(), Error> {
    let t0 = Instant::now();
    let setup = cfg.setup()?;
    let exact = cfg.exact()?;
    let n = *cfg.discretization.meshes.last().expect("validated mesh list");
    let disc = setup.discretize(n)?;
    let trace = trace_probe(&disc)?;
    let sigma0 = setup.sigma0.unwrap_or_else(|| auto_sigma0(trace.max));
    let parts = assemble_parts(&disc, Some(&exact));
    let system = parts.system(sigma0);
    let coeffs = solve_system(&system)?;
    let residual = (&system.rhs - &system.matrix * &coeffs).norm() / system.rhs.norm().max(f64::MIN_POSITIVE);
    let field = FeFunction {
        disc: &disc,
        coeffs: coeffs.as_slice(),
    };
    let errors = error_norms(&disc, &field, &exact, sigma0);
    let level = LevelResult {
        n,
        h: disc.h(),
        dofs: disc.num_dofs(),
        interface_elements: disc.classification.num_interface(),
        errors,
    };
    write_errors(&out.join("errors.csv"), &[level])?;
    write_solution(&out.join("solution.csv"), &solution_samples(&disc, coeffs.as_slice(), &exact)?)?;
    if dump_system {
        write_matrix_market(BufWriter::new(File::create(out.join("system_S.mtx"))?), &system.matrix)?;
        write_vector_market(BufWriter::new(File::create(out.join("system_F.mtx"))?), &system.rhs)?;
    }
    if cfg.output.dump_ife {
        dump_ife(&disc, &out.join("ife_basis.json"))?;
    }
    let report = SolveReport {
        command: "solve",
        config: cfg.resolved(),
        n,
        h: level.h,
        dofs: level.dofs,
        interface_elements: level.interface_elements,
        sigma0,
        sigma0_auto: setup.sigma0.is_none(),
        trace_constant_max: trace.max,
        coercivity_bound: trace.max * trace.max + 0.5,
        errors,
        relative_residual: residual,
        asymmetry: asymmetry(&system.matrix),
        interface_jump: interface_jump(&disc, coeffs.as_slice(), cfg.output.seed)?,
        elapsed_seconds: elapsed(cfg, t0),
    };
    write_json(&out.join("report.json"), &report)
}

#[derive(Serialize)]
struct ConvergenceReport {
    command: &'static str,
    config: RunConfig,
    sigma0: f64,
    monotone: bool,
    levels: Vec<LevelResult>,
    rates: Vec<Rates>,
    projection_levels: Vec<LevelResult>,
    projection_rates: Vec<Rates>,
    elapsed_seconds: Option<f64>,
}

pub fn convergence(cfg: &RunConfig, out: &Path) -> Result<(), Error> {
    let t0 = Instant::now();
    let setup = cfg.setup()?;
    let exact = cfg.exact()?;
    let meshes = &cfg.discretization.meshes;
    let study = convergence_study(&setup, meshes, &exact)?;
    let proj = projection_study(&setup, meshes, &exact)?;
    write_study(&out.join("convergence.csv"), &study)?;
    write_study(&out.join("projection.csv"), &proj)?;
    write_errors(&out.join("errors.csv"), &study.levels)?;
    let report = ConvergenceReport {
        command: "convergence",
        config: cfg.resolved(),
        sigma0: study.sigma0,
        monotone: study.monotone,
        levels: study.levels,
        rates: study.rates,
        projection_levels: proj.levels,
        projection_rates: proj.rates,
        elapsed_seconds: elapsed(cfg, t0),
    };
    write_json(&out.join("report.json"), &report)
}

#[derive(Serialize)]
struct GeometryReport {
    command: &'static str,
    config: RunConfig,
    samples_per_direction: usize,
    levels: Vec<GeometryLevel>,
    slopes: GeometrySlopes,
    interval_ratio_min: f64,
    interval_ratio_max: f64,
    elapsed_seconds: Option<f64>,
}

pub fn probe_geometry(cfg: &RunConfig, out: &Path) -> Result<(), Error> {
    let t0 = Instant::now();
    let chart = cfg.chart()?;
    let levels = cfg
        .discretization
        .meshes
        .iter()
        .map(|&n| geometry_level(&RectMesh::new(cfg.lo(), cfg.hi(), n, n)?, &chart, GEOMETRY_SAMPLES))
        .collect::<Result<Vec<_>, Error>>()?;
    let with_cuts: Vec<&GeometryLevel> = levels.iter().filter(|l| l.interface_elements > 0).collect();
    let report = GeometryReport {
        command: "probe-geometry",
        config: cfg.resolved(),
        samples_per_direction: GEOMETRY_SAMPLES,
        slopes: geometry_slopes(&levels),
        interval_ratio_min: with_cuts.iter().map(|l| l.interval_ratio_min).fold(f64::INFINITY, f64::min),
        interval_ratio_max: with_cuts.iter().map(|l| l.interval_ratio_max).fold(0.0, f64::max),
        levels,
        elapsed_seconds: elapsed(cfg, t0),
    };
    write_json(&out.join("geometry_probes.json"), &report)
}

#[derive(Serialize)]
struct TraceLevel {
    n: usize,
    h: f64,
    interface_elements: usize,
    max: f64,
    max_interface: f64,
    median_interface: f64,
}

#[derive(Serialize)]
struct TraceReport {
    command: &'static str,
    config: RunConfig,
    levels: Vec<TraceLevel>,
    /// Largest over smallest per-level maximum.
    spread: f64,
    sigma0_auto: f64,
    elapsed_seconds: Option<f64>,
}

pub fn probe_trace(cfg: &RunConfig, out: &Path) -> Result<(), Error> {
    let t0 = Instant::now();
    let setup = cfg.setup()?;
    let mut levels = Vec::new();
    for &n in &cfg.discretization.meshes {
        let disc = setup.discretize(n)?;
        let t = trace_probe(&disc)?;
        levels.push(TraceLevel {
            n,
            h: disc.h(),
            interface_elements: disc.classification.num_interface(),
            max: t.max,
            max_interface: t.max_interface,
            median_interface: t.median_interface,
        });
    }
    let hi = levels.iter().map(|l| l.max).fold(0.0, f64::max);
    let lo = levels.iter().map(|l| l.max).fold(f64::INFINITY, f64::min);
    let report = TraceReport {
        command: "probe-trace",
        config: cfg.resolved(),
        spread: hi / lo,
        sigma0_auto: auto_sigma0(hi),
        levels,
        elapsed_seconds: elapsed(cfg, t0),
    };
    write_json(&out.join("trace_probe.json"), &report)
}

#[derive(Serialize)]
struct CoercivityLevel {
    n: usize,
    h: f64,
    dofs: usize,
    sigma0: f64,
    asymmetry: f64,
    /// Smallest eigenvalue of `a_h` relative to the energy Gram at `sigma0`.
    coercivity: f64,
    /// Smallest penalty reaching the target ratio; `null` if none up to the search bound.
    threshold_sigma0: Option<f64>,
}

#[derive(Serialize)]
struct CoercivityReport {
    command: &'static str,
    config: RunConfig,
    target: f64,
    levels: Vec<CoercivityLevel>,
    elapsed_seconds: Option<f64>,
}

pub fn probe_coercivity(cfg: &RunConfig, out: &Path) -> Result<(), Error> {
    let t0 = Instant::now();
    let setup = cfg.setup()?;
    let mut levels = Vec::new();
    for &n in &cfg.discretization.meshes {
        let dofs = n * n * (cfg.discretization.degree + 1).pow(2);
        if dofs > COERCIVITY_MAX_DOFS {
            return Err(Error::Config(format!(
                "coercivity probe is dense; n = {n} gives {dofs} dofs (limit {COERCIVITY_MAX_DOFS})"
            )));
        }
        let disc = setup.discretize(n)?;
        let sigma0 = match setup.sigma0 {
            Some(s) => s,
            None => auto_sigma0(trace_probe(&disc)?.max),
        };
        let parts = assemble_parts(&disc, None);
        let threshold = coercivity_threshold(&parts, COERCIVITY_TARGET, 1e-2, 4.0 * sigma0.max(1.0))?;
        levels.push(CoercivityLevel {
            n,
            h: disc.h(),
            dofs,
            sigma0,
            asymmetry: asymmetry(&parts.stiffness(sigma0)),
            coercivity: coercivity_constant(&parts, sigma0)?,
            threshold_sigma0: threshold.is_finite().then_some(threshold),
        });
    }
    let report = CoercivityReport {
        command: "probe-coercivity",
        config: cfg.resolved(),
        target: COERCIVITY_TARGET,
        levels,
        elapsed_seconds: elapsed(cfg, t0),
    };
    write_json(&out.join("coercivity_probe.json"), &report)
}

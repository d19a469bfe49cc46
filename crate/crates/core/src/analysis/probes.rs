//! Numerical probes of the trace inequality, discrete coercivity and the
//! geometric estimates for the chord approximation of the Frenet map.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::SystemParts;
use crate::discretization::Discretization;
use crate::error::{Error, Result};
use crate::geometry::FrenetChart;
use crate::mesh::{classify_elements, RectMesh};

/// Normalized trace constant `sqrt(lambda_max(B, A)) sqrt(h) sqrt(beta-) / beta+`
/// of one element, with `A` the weighted gradient Gram on the element and `B`
/// the Gram of `beta grad phi` on its boundary.
pub fn trace_constant(disc: &Discretization, element: usize) -> Result<f64> {
    let n = disc.local_dim();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for p in &disc.volume[element] {
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] += p.weight * p.beta * p.shape.grads[i].dot(&p.shape.grads[j]);
            }
        }
    }
    let mut b = DMatrix::<f64>::zeros(n, n);
    for &e in &disc.mesh.elements[element].edges {
        for p in &disc.edges[e] {
            let t = if p.owner.element == element {
                &p.owner
            } else {
                p.neighbor.as_ref().expect("element edge")
            };
            for i in 0..n {
                let gi = t.shape.grads[i] * t.beta;
                for j in 0..n {
                    b[(i, j)] += p.weight * gi.dot(&(t.shape.grads[j] * t.beta));
                }
            }
        }
    }
    let eig = SymmetricEigen::new(a);
    let amax = eig.eigenvalues.amax();
    let keep: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > 1e-10 * amax).collect();
    if keep.is_empty() {
        return Err(Error::SingularGram { element });
    }
    // restrict to the complement of the null space of A and whiten
    let mut w = DMatrix::<f64>::zeros(n, keep.len());
    for (c, &k) in keep.iter().enumerate() {
        w.set_column(c, &(eig.eigenvectors.column(k) / eig.eigenvalues[k].sqrt()));
    }
    let reduced = w.transpose() * b * &w;
    let lmax = SymmetricEigen::new(reduced).eigenvalues.max();
    let beta = disc.beta;
    Ok(lmax.max(0.0).sqrt() * disc.h().sqrt() * beta.minus.sqrt() / beta.plus)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TraceSummary {
    pub max: f64,
    pub max_interface: f64,
    pub median_interface: f64,
    pub per_element: Vec<f64>,
}

pub fn trace_probe(disc: &Discretization) -> Result<TraceSummary> {
    let per_element = (0..disc.mesh.num_elements())
        .into_par_iter()
        .map(|k| trace_constant(disc, k))
        .collect::<Result<Vec<_>>>()?;
    let mut iface: Vec<f64> = disc
        .classification
        .interface_elements()
        .map(|k| per_element[k])
        .collect();
    iface.sort_by(f64::total_cmp);
    let median_interface = if iface.is_empty() { 0.0 } else { iface[iface.len() / 2] };
    Ok(TraceSummary {
        max: per_element.iter().copied().fold(0.0, f64::max),
        max_interface: iface.last().copied().unwrap_or(0.0),
        median_interface,
        per_element,
    })
}

/// Penalty from the largest trace constant: `4 C_t^2 + 1`.
pub fn auto_sigma0(max_trace_constant: f64) -> f64 {
    4.0 * max_trace_constant * max_trace_constant + 1.0
}

/// Smallest generalized eigenvalue of `(S, E)` with `E` the energy Gram:
/// the discrete coercivity constant at `sigma0`.
pub fn coercivity_constant(parts: &SystemParts, sigma0: f64) -> Result<f64> {
    let to_dense = |m: &nalgebra_sparse::CscMatrix<f64>| DMatrix::from(m);
    let s = to_dense(&parts.stiffness(sigma0));
    let e = to_dense(&parts.energy_gram(sigma0));
    let chol = e.cholesky().ok_or(Error::NotPositiveDefinite { sigma0 })?;
    let l = chol.l();
    let linv_s = l
        .solve_lower_triangular(&s)
        .ok_or(Error::NotPositiveDefinite { sigma0 })?;
    let m = l
        .solve_lower_triangular(&linv_s.transpose())
        .ok_or(Error::NotPositiveDefinite { sigma0 })?;
    let sym = (&m + m.transpose()) * 0.5;
    Ok(SymmetricEigen::new(sym).eigenvalues.min())
}

/// Smallest `sigma0` in `[lo, hi]` (to relative accuracy `1e-3`) whose
/// coercivity constant reaches `target`.
pub fn coercivity_threshold(parts: &SystemParts, target: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    if coercivity_constant(parts, hi)? < target {
        return Ok(f64::INFINITY);
    }
    if coercivity_constant(parts, lo)? >= target {
        return Ok(lo);
    }
    while hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        if coercivity_constant(parts, mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct GeometryLevel {
    pub n: usize,
    pub h: f64,
    pub interface_elements: usize,
    pub transition_error: f64,
    pub jacobian_error: f64,
    pub determinant_error: f64,
    pub interval_ratio_min: f64,
    pub interval_ratio_max: f64,
    pub max_overlap: usize,
}

fn spectral_norm(m: &nalgebra::Matrix2<f64>) -> f64 {
    m.singular_values().max()
}

/// Transition-map and interval probes over the interface elements of one mesh.
pub fn geometry_level(mesh: &RectMesh, chart: &FrenetChart, samples: usize) -> Result<GeometryLevel> {
    let cls = classify_elements(mesh, chart)?;
    let h = mesh.h();
    let ids: Vec<usize> = cls.interface_elements().collect();
    let per = ids
        .par_iter()
        .map(|&k| -> Result<(f64, f64, f64, f64, usize)> {
            let cut = cls.tags[k].cut().expect("interface element");
            let (x0, x1) = cut.interval;
            let (mut te, mut je, mut de) = (0.0f64, 0.0f64, 0.0f64);
            let mut touched = std::collections::BTreeSet::new();
            for a in 0..samples {
                let eta = -h + 2.0 * h * a as f64 / (samples - 1) as f64;
                for b in 0..samples {
                    let xi = x0 + (x1 - x0) * b as f64 / (samples - 1) as f64;
                    let (te_eta, te_xi) = cut.chord.transition(chart, eta, xi)?;
                    te = te.max(((te_eta - eta).powi(2) + (te_xi - xi).powi(2)).sqrt());
                    let dt = cut.chord.transition_jacobian(chart, eta, xi)?;
                    je = je.max(spectral_norm(&(dt - nalgebra::Matrix2::identity())));
                    de = de.max((dt.determinant() - 1.0).abs());
                    let p = chart.map(eta, xi)?;
                    if p.x >= mesh.lo.x && p.x <= mesh.hi.x && p.y >= mesh.lo.y && p.y <= mesh.hi.y {
                        touched.insert(mesh.locate(p));
                    }
                }
            }
            Ok((te, je, de, (x1 - x0) / h, touched.len()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut lvl = GeometryLevel {
        n: mesh.nx,
        h,
        interface_elements: ids.len(),
        transition_error: 0.0,
        jacobian_error: 0.0,
        determinant_error: 0.0,
        interval_ratio_min: f64::INFINITY,
        interval_ratio_max: 0.0,
        max_overlap: 0,
    };
    for (te, je, de, r, o) in per {
        lvl.transition_error = lvl.transition_error.max(te);
        lvl.jacobian_error = lvl.jacobian_error.max(je);
        lvl.determinant_error = lvl.determinant_error.max(de);
        lvl.interval_ratio_min = lvl.interval_ratio_min.min(r);
        lvl.interval_ratio_max = lvl.interval_ratio_max.max(r);
        lvl.max_overlap = lvl.max_overlap.max(o);
    }
    Ok(lvl)
}

/// Least-squares slope of `log y` against `log x`; `None` if any value is
/// not positive.
pub fn fitted_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    Some(num / den)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GeometrySlopes {
    pub transition_error: Option<f64>,
    pub jacobian_error: Option<f64>,
    pub determinant_error: Option<f64>,
}

pub fn geometry_slopes(levels: &[GeometryLevel]) -> GeometrySlopes {
    let h: Vec<f64> = levels.iter().map(|l| l.h).collect();
    let col = |f: fn(&GeometryLevel) -> f64| levels.iter().map(f).collect::<Vec<_>>();
    GeometrySlopes {
        transition_error: fitted_slope(&h, &col(|l| l.transition_error)),
        jacobian_error: fitted_slope(&h, &col(|l| l.jacobian_error)),
        determinant_error: fitted_slope(&h, &col(|l| l.determinant_error)),
    }
}

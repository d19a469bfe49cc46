//! Symmetric interior penalty assembly and the sparse solve.
//!
//! The bilinear form is stored in parts so that the stiffness matrix for any
//! penalty `sigma0` is `S = volume + consistency + (sigma0 gamma / h) jump`,
//! and the energy-norm Gram is
//! `E = volume + (sigma0 gamma / h) jump + (h / (sigma0 gamma)) flux`.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix};
use rayon::prelude::*;

use crate::discretization::{Discretization, Trace};
use crate::error::{Error, Result};
use crate::geometry::{Side, Vec2};

/// Source and boundary data of the problem `-div(beta grad u) = f`, `u = g` on the boundary.
pub trait ProblemData: Sync {
    fn source(&self, x: Vec2, side: Side) -> f64;
    fn boundary(&self, x: Vec2) -> f64;
}

#[derive(Debug, Clone)]
pub struct SystemParts {
    pub volume: CscMatrix<f64>,
    pub consistency: CscMatrix<f64>,
    pub jump: CscMatrix<f64>,
    pub flux: CscMatrix<f64>,
    pub load_source: DVector<f64>,
    pub load_consistency: DVector<f64>,
    pub load_penalty: DVector<f64>,
    /// `gamma / h`.
    pub penalty_scale: f64,
    pub h: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone)]
pub struct SipdgSystem {
    pub matrix: CscMatrix<f64>,
    pub rhs: DVector<f64>,
    pub sigma0: f64,
    pub gamma: f64,
}

type Triplets = Vec<(usize, usize, f64)>;

#[derive(Default)]
struct EdgeBlocks {
    consistency: Triplets,
    jump: Triplets,
    flux: Triplets,
    load_consistency: Vec<(usize, f64)>,
    load_penalty: Vec<(usize, f64)>,
}

fn to_csc(n: usize, parts: impl IntoIterator<Item = Triplets>) -> CscMatrix<f64> {
    let mut coo = CooMatrix::new(n, n);
    for list in parts {
        for (i, j, v) in list {
            coo.push(i, j, v);
        }
    }
    CscMatrix::from(&coo)
}

/// Trace data entering the edge terms: dof offset, jump sign, average
/// weight, and the values / normal fluxes of every shape function.
struct Side1<'a> {
    offset: usize,
    sign: f64,
    avg: f64,
    trace: &'a Trace,
}

fn edge_blocks(disc: &Discretization, e: usize, data: Option<&dyn ProblemData>) -> EdgeBlocks {
    let n = disc.local_dim();
    let mut out = EdgeBlocks::default();
    let mut cons = DMatrix::<f64>::zeros(2 * n, 2 * n);
    let mut jump = DMatrix::<f64>::zeros(2 * n, 2 * n);
    let mut flux = DMatrix::<f64>::zeros(2 * n, 2 * n);
    let boundary = disc.mesh.edges[e].is_boundary();
    let mut lc = vec![0.0; n];
    let mut lp = vec![0.0; n];
    for p in &disc.edges[e] {
        let mut sides = vec![Side1 {
            offset: 0,
            sign: 1.0,
            avg: if boundary { 1.0 } else { 0.5 },
            trace: &p.owner,
        }];
        if let Some(nb) = &p.neighbor {
            sides.push(Side1 {
                offset: n,
                sign: -1.0,
                avg: 0.5,
                trace: nb,
            });
        }
        // jump value and average flux contributions per local function
        let mut jv = vec![0.0; 2 * n];
        let mut af = vec![0.0; 2 * n];
        for s in &sides {
            for i in 0..n {
                jv[s.offset + i] = s.sign * s.trace.shape.values[i];
                af[s.offset + i] = s.avg * s.trace.beta * s.trace.shape.grads[i].dot(&p.normal);
            }
        }
        let w = p.weight;
        let m = sides.len() * n;
        for i in 0..m {
            for j in 0..m {
                cons[(i, j)] -= w * (af[j] * jv[i] + af[i] * jv[j]);
                jump[(i, j)] += w * jv[i] * jv[j];
                flux[(i, j)] += w * af[i] * af[j];
            }
        }
        if boundary {
            if let Some(d) = data {
                let g = d.boundary(p.x);
                for i in 0..n {
                    lc[i] -= w * af[i] * g;
                    lp[i] += w * jv[i] * g;
                }
            }
        }
    }
    let edge = &disc.mesh.edges[e];
    let global = |local: usize| -> usize {
        if local < n {
            disc.offset(edge.owner) + local
        } else {
            disc.offset(edge.neighbor.expect("interior edge")) + local - n
        }
    };
    let m = if boundary { n } else { 2 * n };
    for i in 0..m {
        for j in 0..m {
            let (gi, gj) = (global(i), global(j));
            out.consistency.push((gi, gj, cons[(i, j)]));
            out.jump.push((gi, gj, jump[(i, j)]));
            out.flux.push((gi, gj, flux[(i, j)]));
        }
    }
    if boundary {
        for i in 0..n {
            out.load_consistency.push((global(i), lc[i]));
            out.load_penalty.push((global(i), lp[i]));
        }
    }
    out
}

fn volume_block(disc: &Discretization, k: usize, data: Option<&dyn ProblemData>) -> (Triplets, Vec<(usize, f64)>) {
    let n = disc.local_dim();
    let off = disc.offset(k);
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut f = vec![0.0; n];
    for p in &disc.volume[k] {
        let wb = p.weight * p.beta;
        for i in 0..n {
            let gi = p.shape.grads[i];
            for j in 0..n {
                a[(i, j)] += wb * gi.dot(&p.shape.grads[j]);
            }
        }
        if let Some(d) = data {
            let s = d.source(p.x, p.side);
            for i in 0..n {
                f[i] += p.weight * s * p.shape.values[i];
            }
        }
    }
    let mut trip = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            trip.push((off + i, off + j, a[(i, j)]));
        }
    }
    (trip, f.into_iter().enumerate().map(|(i, v)| (off + i, v)).collect())
}

/// Assembles every part of the bilinear and linear forms. Element and edge
/// contributions are computed in parallel and accumulated in index order.
pub fn assemble_parts(disc: &Discretization, data: Option<&dyn ProblemData>) -> SystemParts {
    let ndof = disc.num_dofs();
    let vol: Vec<_> = (0..disc.mesh.num_elements())
        .into_par_iter()
        .map(|k| volume_block(disc, k, data))
        .collect();
    let edges: Vec<EdgeBlocks> = (0..disc.mesh.edges.len())
        .into_par_iter()
        .map(|e| edge_blocks(disc, e, data))
        .collect();
    let mut load_source = DVector::zeros(ndof);
    let mut load_consistency = DVector::zeros(ndof);
    let mut load_penalty = DVector::zeros(ndof);
    let mut vol_trip = Vec::with_capacity(vol.len());
    for (t, f) in vol {
        for (i, v) in f {
            load_source[i] += v;
        }
        vol_trip.push(t);
    }
    let (mut cons, mut jump, mut flux) = (Vec::new(), Vec::new(), Vec::new());
    for b in edges {
        for (i, v) in b.load_consistency {
            load_consistency[i] += v;
        }
        for (i, v) in b.load_penalty {
            load_penalty[i] += v;
        }
        cons.push(b.consistency);
        jump.push(b.jump);
        flux.push(b.flux);
    }
    let h = disc.h();
    let gamma = disc.beta.gamma();
    SystemParts {
        volume: to_csc(ndof, vol_trip),
        consistency: to_csc(ndof, cons),
        jump: to_csc(ndof, jump),
        flux: to_csc(ndof, flux),
        load_source,
        load_consistency,
        load_penalty,
        penalty_scale: gamma / h,
        h,
        gamma,
    }
}

impl SystemParts {
    pub fn penalty(&self, sigma0: f64) -> f64 {
        sigma0 * self.penalty_scale
    }

    pub fn stiffness(&self, sigma0: f64) -> CscMatrix<f64> {
        &(&self.volume + &self.consistency) + &(&self.jump * self.penalty(sigma0))
    }

    pub fn load(&self, sigma0: f64) -> DVector<f64> {
        &self.load_source + &self.load_consistency + &self.load_penalty * self.penalty(sigma0)
    }

    /// Gram matrix of the energy norm.
    pub fn energy_gram(&self, sigma0: f64) -> CscMatrix<f64> {
        let p = self.penalty(sigma0);
        &(&self.volume + &(&self.jump * p)) + &(&self.flux * (1.0 / p))
    }

    pub fn system(&self, sigma0: f64) -> SipdgSystem {
        SipdgSystem {
            matrix: self.stiffness(sigma0),
            rhs: self.load(sigma0),
            sigma0,
            gamma: self.gamma,
        }
    }
}

pub fn assemble(disc: &Discretization, data: &dyn ProblemData, sigma0: f64) -> SipdgSystem {
    assemble_parts(disc, Some(data)).system(sigma0)
}

/// `max |S - S^T| / max |S|`.
pub fn asymmetry(matrix: &CscMatrix<f64>) -> f64 {
    let t = matrix.transpose();
    let diff = matrix - &t;
    let dmax = diff.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let smax = matrix.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if smax == 0.0 {
        0.0
    } else {
        dmax / smax
    }
}

fn spmv(a: &CscMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
    a * x
}

/// Sparse Cholesky solve with iterative refinement; requires
/// `|S c - F| <= 1e-11 |F|`.
pub fn solve(system: &SipdgSystem) -> Result<DVector<f64>> {
    let chol = CscCholesky::factor(&system.matrix).map_err(|_| Error::NotPositiveDefinite {
        sigma0: system.sigma0,
    })?;
    let f = &system.rhs;
    let fnorm = f.norm();
    let mut x: DVector<f64> = chol.solve(f).column(0).into_owned();
    let bound = 1e-11 * fnorm.max(f64::MIN_POSITIVE);
    let mut res = f - spmv(&system.matrix, &x);
    for _ in 0..3 {
        if res.norm() <= bound {
            break;
        }
        let dx = chol.solve(&res).column(0).into_owned();
        x += dx;
        res = f - spmv(&system.matrix, &x);
    }
    let r = res.norm();
    if !(r <= bound) && fnorm > 0.0 {
        return Err(Error::NonConvergence { residual: r / fnorm, bound: 1e-11 });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotPositiveDefinite { sigma0: system.sigma0 });
    }
    Ok(x)
}

/// Writes a sparse matrix in coordinate matrix-market format.
pub fn write_matrix_market<W: Write>(mut w: W, matrix: &CscMatrix<f64>) -> std::io::Result<()> {
    nalgebra_sparse::io::save_to_matrix_market(&mut w, matrix)
}

/// Writes a vector in dense (array) matrix-market format.
pub fn write_vector_market<W: Write>(mut w: W, v: &DVector<f64>) -> std::io::Result<()> {
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} 1", v.len())?;
    for x in v.iter() {
        writeln!(w, "{x:e}")?;
    }
    Ok(())
}

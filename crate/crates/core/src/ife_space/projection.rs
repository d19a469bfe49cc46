use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::discretization::Discretization;
use crate::error::{Error, Result};
use crate::geometry::{Side, Vec2};

/// Element-wise L2 projection of the side-resolved function `f`.
pub fn project_l2<F>(disc: &Discretization, f: F) -> Result<Vec<f64>>
where
    F: Fn(Vec2, Side) -> f64 + Sync,
{
    let n = disc.local_dim();
    let blocks = (0..disc.mesh.num_elements())
        .into_par_iter()
        .map(|k| {
            let mut mass = DMatrix::zeros(n, n);
            let mut rhs = DVector::zeros(n);
            for p in &disc.volume[k] {
                let fv = f(p.x, p.side);
                for i in 0..n {
                    let wi = p.weight * p.shape.values[i];
                    rhs[i] += wi * fv;
                    for j in 0..n {
                        mass[(i, j)] += wi * p.shape.values[j];
                    }
                }
            }
            let eig = mass.clone().symmetric_eigenvalues();
            let (lo, hi) = (eig.min(), eig.max());
            let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
            if !(condition <= 1e12) {
                return Err(Error::SingularMass { element: k, condition });
            }
            let chol = mass.cholesky().ok_or(Error::SingularMass { element: k, condition })?;
            Ok(chol.solve(&rhs).iter().copied().collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.concat())
}

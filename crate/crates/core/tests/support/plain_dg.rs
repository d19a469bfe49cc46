//! Plain symmetric interior penalty DG for `-div(beta grad u) = f` with a
//! single constant `beta`, assembled with its own Gauss rules, a monomial
//! basis and its own element/edge loops.

use frenet_ife::analysis::DiscreteField;
use frenet_ife::geometry::{Side, Vec2};
use frenet_ife::ife_space::ShapeValues;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix};

/// Gauss-Legendre rule on `[-1, 1]` by the Golub-Welsch eigenvalue method.
pub fn gauss(q: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(q, q);
    for k in 1..q {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        j[(k, k - 1)] = b;
        j[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..q)
        .map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

pub struct PlainSipdg {
    pub lo: Vec2,
    pub hi: Vec2,
    pub n: usize,
    pub m: usize,
    pub beta: f64,
    pub coeffs: Vec<f64>,
    pub matrix: CscMatrix<f64>,
    pub rhs: DVector<f64>,
}

struct Cell {
    center: Vec2,
    half: Vec2,
}

impl PlainSipdg {
    fn nloc(&self) -> usize {
        (self.m + 1) * (self.m + 1)
    }

    fn cell(&self, i: usize, j: usize) -> Cell {
        let hx = (self.hi.x - self.lo.x) / self.n as f64;
        let hy = (self.hi.y - self.lo.y) / self.n as f64;
        Cell {
            center: Vec2::new(self.lo.x + (i as f64 + 0.5) * hx, self.lo.y + (j as f64 + 0.5) * hy),
            half: Vec2::new(0.5 * hx, 0.5 * hy),
        }
    }

    /// Monomials `s^a t^b` in the cell's local coordinates and their gradients.
    fn basis(&self, c: &Cell, x: Vec2) -> Vec<(f64, Vec2)> {
        let s = (x.x - c.center.x) / c.half.x;
        let t = (x.y - c.center.y) / c.half.y;
        let p = |v: f64, k: usize| if k == 0 { (1.0, 0.0) } else { (v.powi(k as i32), k as f64 * v.powi(k as i32 - 1)) };
        let mut out = Vec::with_capacity(self.nloc());
        for a in 0..=self.m {
            for b in 0..=self.m {
                let (sa, dsa) = p(s, a);
                let (tb, dtb) = p(t, b);
                out.push((sa * tb, Vec2::new(dsa * tb / c.half.x, sa * dtb / c.half.y)));
            }
        }
        out
    }

    fn index(&self, i: usize, j: usize) -> usize {
        (j * self.n + i) * self.nloc()
    }

    #[allow(clippy::too_many_arguments)]
    pub fn solve(
        lo: Vec2,
        hi: Vec2,
        n: usize,
        m: usize,
        beta: f64,
        sigma0: f64,
        gamma: f64,
        f: &dyn Fn(Vec2) -> f64,
        g: &dyn Fn(Vec2) -> f64,
    ) -> Self {
        let mut me = PlainSipdg {
            lo,
            hi,
            n,
            m,
            beta,
            coeffs: Vec::new(),
            matrix: CscMatrix::zeros(0, 0),
            rhs: DVector::zeros(0),
        };
        let nl = me.nloc();
        let ndof = n * n * nl;
        let hx = (hi.x - lo.x) / n as f64;
        let hy = (hi.y - lo.y) / n as f64;
        let h = hx.hypot(hy);
        let pen = sigma0 * gamma / h;
        let mut coo = CooMatrix::new(ndof, ndof);
        let mut rhs = DVector::zeros(ndof);
        let (gv, gw) = gauss(m + 2);
        let (ev, ew) = gauss(m + 3);
        for j in 0..n {
            for i in 0..n {
                let c = me.cell(i, j);
                let off = me.index(i, j);
                for (a, wa) in gv.iter().zip(&gw) {
                    for (b, wb) in gv.iter().zip(&gw) {
                        let x = c.center + Vec2::new(a * c.half.x, b * c.half.y);
                        let w = wa * wb * c.half.x * c.half.y;
                        let phi = me.basis(&c, x);
                        let fx = f(x);
                        for (p, (vp, gp)) in phi.iter().enumerate() {
                            rhs[off + p] += w * fx * vp;
                            for (q, (_, gq)) in phi.iter().enumerate() {
                                coo.push(off + p, off + q, w * beta * gp.dot(gq));
                            }
                        }
                    }
                }
            }
        }
        // faces: (cell a, optional cell b, point on face, outward normal of a, length)
        let mut faces: Vec<((usize, usize), Option<(usize, usize)>, Vec2, Vec2, Vec2, f64)> = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let c = me.cell(i, j);
                let left = Vec2::new(c.center.x - c.half.x, c.center.y - c.half.y);
                // bottom face of this cell
                let bottom_nb = (j > 0).then(|| (i, j - 1));
                faces.push(((i, j), bottom_nb, left, Vec2::new(1.0, 0.0), Vec2::new(0.0, -1.0), hx));
                // left face of this cell
                let left_nb = (i > 0).then(|| (i - 1, j));
                faces.push(((i, j), left_nb, left, Vec2::new(0.0, 1.0), Vec2::new(-1.0, 0.0), hy));
                if j == n - 1 {
                    let top = Vec2::new(left.x, left.y + hy);
                    faces.push(((i, j), None, top, Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), hx));
                }
                if i == n - 1 {
                    let right = Vec2::new(left.x + hx, left.y);
                    faces.push(((i, j), None, right, Vec2::new(0.0, 1.0), Vec2::new(1.0, 0.0), hy));
                }
            }
        }
        for (a, b, start, dir, normal, len) in faces {
            let ca = me.cell(a.0, a.1);
            let cb = b.map(|b| me.cell(b.0, b.1));
            let mut dofs = vec![me.index(a.0, a.1)];
            if let Some(b) = b {
                dofs.push(me.index(b.0, b.1));
            }
            let size = dofs.len() * nl;
            let mut k = DMatrix::<f64>::zeros(size, size);
            let mut r = DVector::<f64>::zeros(size);
            for (t, w) in ev.iter().zip(&ew) {
                let x = start + dir * (0.5 * (t + 1.0) * len);
                let w = 0.5 * len * w;
                let mut jump = vec![0.0; size];
                let mut avg = vec![0.0; size];
                let avg_w = if cb.is_some() { 0.5 } else { 1.0 };
                for (p, (v, gr)) in me.basis(&ca, x).into_iter().enumerate() {
                    jump[p] = v;
                    avg[p] = avg_w * beta * gr.dot(&normal);
                }
                if let Some(cb) = &cb {
                    for (p, (v, gr)) in me.basis(cb, x).into_iter().enumerate() {
                        jump[nl + p] = -v;
                        avg[nl + p] = 0.5 * beta * gr.dot(&normal);
                    }
                }
                for p in 0..size {
                    for q in 0..size {
                        k[(p, q)] += w * (-avg[q] * jump[p] - avg[p] * jump[q] + pen * jump[p] * jump[q]);
                    }
                }
                if cb.is_none() {
                    let gx = g(x);
                    for p in 0..size {
                        r[p] += w * (-avg[p] * gx + pen * jump[p] * gx);
                    }
                }
            }
            let global = |p: usize| dofs[p / nl] + p % nl;
            for p in 0..size {
                rhs[global(p)] += r[p];
                for q in 0..size {
                    coo.push(global(p), global(q), k[(p, q)]);
                }
            }
        }
        let mat = CscMatrix::from(&coo);
        let chol = CscCholesky::factor(&mat).expect("plain SIPDG matrix is positive definite");
        let mut x: DVector<f64> = chol.solve(&rhs).column(0).into_owned();
        for _ in 0..2 {
            let res = &rhs - &mat * &x;
            x += chol.solve(&res).column(0).into_owned();
        }
        me.coeffs = x.iter().copied().collect();
        me.matrix = mat;
        me.rhs = rhs;
        me
    }

    /// Value and gradient at `x`.
    pub fn eval(&self, x: Vec2) -> (f64, Vec2) {
        let hx = (self.hi.x - self.lo.x) / self.n as f64;
        let hy = (self.hi.y - self.lo.y) / self.n as f64;
        let i = (((x.x - self.lo.x) / hx).floor().max(0.0) as usize).min(self.n - 1);
        let j = (((x.y - self.lo.y) / hy).floor().max(0.0) as usize).min(self.n - 1);
        self.eval_in(i, j, x)
    }

    /// Value and gradient of the restriction to cell `(i, j)`.
    pub fn eval_in(&self, i: usize, j: usize, x: Vec2) -> (f64, Vec2) {
        let c = self.cell(i, j);
        let off = self.index(i, j);
        let mut v = 0.0;
        let mut g = Vec2::zeros();
        for (p, (bv, bg)) in self.basis(&c, x).into_iter().enumerate() {
            v += self.coeffs[off + p] * bv;
            g += bg * self.coeffs[off + p];
        }
        (v, g)
    }
}

impl DiscreteField for PlainSipdg {
    /// `element` is the row-major cell index `i + n j`.
    fn eval(&self, element: usize, x: Vec2, _side: Side, _shape: &ShapeValues) -> (f64, Vec2) {
        self.eval_in(element % self.n, element / self.n, x)
    }
}

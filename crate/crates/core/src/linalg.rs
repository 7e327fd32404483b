//! One-sided Jacobi SVD for the small dense matrices of the kernel, accurate
//! on rank-deficient input.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct Svd {
    /// Left singular vectors; columns of zero singular values are zero.
    pub u: DMatrix<f64>,
    /// Singular values in decreasing order.
    pub singular_values: DVector<f64>,
    /// Right singular vectors as columns.
    pub v: DMatrix<f64>,
}

pub fn svd(m: &DMatrix<f64>) -> Svd {
    let (rows, n) = m.shape();
    let mut a = m.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dot(&a.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = c * x - s * y;
                    a[(i, q)] = s * x + c * y;
                }
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|x, y| norms[*y].total_cmp(&norms[*x]));
    let mut u = DMatrix::zeros(rows, n);
    let mut vs = DMatrix::zeros(n, n);
    let mut sv = DVector::zeros(n);
    for (k, j) in order.iter().enumerate() {
        sv[k] = norms[*j];
        if norms[*j] > 0.0 {
            u.set_column(k, &(a.column(*j) / norms[*j]));
        }
        vs.set_column(k, &v.column(*j));
    }
    Svd {
        u,
        singular_values: sv,
        v: vs,
    }
}

use super::cholesky::{check_symmetric, cholesky, solve_lower, solve_lower_transpose};
use super::DenseMatrix;
use crate::error::{Error, Result};

/// Off-diagonal convergence threshold, relative to ‖S‖_F.
pub const JACOBI_OFF_TOL: f64 = 1e-13;

/// Hard cap on cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 60;

/// Eigenvalues in ascending order with matching eigenvector columns.
///
/// When `metric` is set the columns are orthonormal in that Gram
/// (Vᵀ·G·V = I), otherwise in the Euclidean inner product.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
    pub metric: Option<DenseMatrix>,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// V·diag(f(λ))·Vᵀ.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let weights: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        self.vectors
            .scale_columns(&weights)
            .matmul(&self.vectors.transpose())
    }
}

/// Flips each column so that its first entry of largest magnitude is positive.
pub(crate) fn normalize_signs(v: &mut DenseMatrix) {
    for j in 0..v.cols() {
        let mut best = 0.0_f64;
        let mut sign = 1.0;
        for i in 0..v.rows() {
            let x = v[(i, j)];
            if x.abs() > best {
                best = x.abs();
                sign = x.signum();
            }
        }
        if sign < 0.0 {
            for i in 0..v.rows() {
                v[(i, j)] = -v[(i, j)];
            }
        }
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j] * a[i * n + j];
            }
        }
    }
    sum.sqrt()
}

/// Mutable rows p < q of a row-major n×n buffer.
fn row_pair(buf: &mut [f64], n: usize, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    let (head, tail) = buf.split_at_mut(q * n);
    (&mut head[p * n..(p + 1) * n], &mut tail[..n])
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
pub fn sym_eig(s: &DenseMatrix) -> Result<EigenDecomposition> {
    check_symmetric(s)?;
    let n = s.rows();
    let mut a = s.symmetrized().as_slice().to_vec();
    // rows of `vt` are the eigenvectors, so rotations touch contiguous memory
    let mut vt = DenseMatrix::identity(n).as_slice().to_vec();
    let tol = JACOBI_OFF_TOL * s.frobenius_norm();

    let mut converged = off_diagonal_norm(&a, n) <= tol;
    let mut sweep = 0;
    while !converged {
        if sweep == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: sweep });
        }
        sweep += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // negligible against both diagonal entries: drop it
                let g = 100.0 * apq.abs();
                if sweep > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                rotate(&mut a, &mut vt, n, p, q, c, sn, t * apq);
            }
        }
        converged = off_diagonal_norm(&a, n) <= tol;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = DenseMatrix::from_fn(n, n, |i, j| vt[order[j] * n + i]);
    normalize_signs(&mut vectors);
    Ok(EigenDecomposition {
        values,
        vectors,
        metric: None,
    })
}

/// Applies the rotation that annihilates a[p][q]; `shift` = t·a_pq.
///
/// Rows p and q are rotated in place and mirrored into the columns.
#[allow(clippy::too_many_arguments)]
fn rotate(a: &mut [f64], vt: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64, shift: f64) {
    let app = a[p * n + p] - shift;
    let aqq = a[q * n + q] + shift;
    {
        let (rp, rq) = row_pair(a, n, p, q);
        for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
            let akp = *x;
            let akq = *y;
            *x = c * akp - s * akq;
            *y = s * akp + c * akq;
        }
    }
    for k in 0..n {
        a[k * n + p] = a[p * n + k];
        a[k * n + q] = a[q * n + k];
    }
    a[p * n + p] = app;
    a[q * n + q] = aqq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    let (vp, vq) = row_pair(vt, n, p, q);
    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
        let vkp = *x;
        let vkq = *y;
        *x = c * vkp - s * vkq;
        *y = s * vkp + c * vkq;
    }
}

/// Solves S·v = λ·G·v through the congruence G = L·Lᵀ, L⁻¹·S·L⁻ᵀ.
pub fn gen_sym_eig(s: &DenseMatrix, g: &DenseMatrix) -> Result<EigenDecomposition> {
    if s.shape() != g.shape() {
        return Err(Error::ShapeMismatch {
            op: "gen_sym_eig",
            detail: format!("S is {:?}, G is {:?}", s.shape(), g.shape()),
        });
    }
    check_symmetric(s)?;
    let l = cholesky(g)?;
    let half = solve_lower(&l, s);
    let reduced = solve_lower(&l, &half.transpose()).symmetrized();
    let inner = sym_eig(&reduced)?;
    let mut vectors = solve_lower_transpose(&l, &inner.vectors);
    normalize_signs(&mut vectors);
    Ok(EigenDecomposition {
        values: inner.values,
        vectors,
        metric: Some(g.clone()),
    })
}

/// Spectral power S^p of an SPD matrix.
pub fn spd_power(s: &DenseMatrix, p: f64) -> Result<DenseMatrix> {
    cholesky(s)?;
    let n = s.rows();
    if p == 0.0 {
        return Ok(DenseMatrix::identity(n));
    }
    if p == 1.0 {
        return Ok(s.clone());
    }
    let eig = sym_eig(s)?;
    if let Some((index, &pivot)) = eig.values.iter().enumerate().find(|(_, &l)| l <= 0.0) {
        return Err(Error::NotPositiveDefinite { index, pivot });
    }
    Ok(eig.reassemble(|l| l.powf(p)).symmetrized())
}

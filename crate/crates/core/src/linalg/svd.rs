use super::eigen::JACOBI_MAX_SWEEPS;
use super::matrix::dot;
use super::DenseMatrix;
use crate::error::{Error, Result};

/// Column pairs whose normalized inner product is below this are treated as orthogonal.
const ORTHOGONALITY_TOL: f64 = 4.0 * f64::EPSILON;

/// Thin Euclidean SVD A = U·diag(σ)·Wᵀ with `min(m, n)` triplets, σ descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub w: DenseMatrix,
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Singular values carry high relative accuracy, so exact rank deficiency shows
/// up as values at roundoff level of the largest one instead of its square root.
/// Left vectors belonging to zero singular values are left as zero columns.
pub fn svd(a: &DenseMatrix) -> Result<Svd> {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.transpose())?;
        return Ok(Svd {
            u: t.w,
            sigma: t.sigma,
            w: t.u,
        });
    }

    // columns of the working matrix, rotated in place
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.col(j)).collect();
    let mut right: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();

    let mut sweep = 0;
    loop {
        let mut rotated = false;
        // squared column norms, refreshed each sweep and updated per rotation
        let mut norms2: Vec<f64> = cols.iter().map(|c| dot(c, c)).collect();
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norms2[p];
                let beta = norms2[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= ORTHOGONALITY_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut cols, p, q, c, s);
                rotate_pair(&mut right, p, q, c, s);
                norms2[p] = (alpha - t * gamma).max(0.0);
                norms2[q] = beta + t * gamma;
            }
        }
        if !rotated {
            break;
        }
        sweep += 1;
        if sweep == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: sweep });
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let mut u = DenseMatrix::zeros(m, n);
    let mut w = DenseMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        sigma.push(s);
        w.set_col(k, &right[j]);
        if s > 0.0 {
            let scaled: Vec<f64> = cols[j].iter().map(|v| v / s).collect();
            u.set_col(k, &scaled);
        }
    }
    align_signs(&mut u, &mut w);
    Ok(Svd { u, sigma, w })
}

fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let a = *x;
        let b = *y;
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Applies the eigenvector sign rule to W and mirrors each flip in U.
fn align_signs(u: &mut DenseMatrix, w: &mut DenseMatrix) {
    for j in 0..w.cols() {
        let lead = (0..w.rows())
            .map(|i| w[(i, j)])
            .fold(0.0_f64, |best, x| if x.abs() > best.abs() { x } else { best });
        if lead < 0.0 {
            for i in 0..w.rows() {
                w[(i, j)] = -w[(i, j)];
            }
            for i in 0..u.rows() {
                u[(i, j)] = -u[(i, j)];
            }
        }
    }
}

use super::DenseMatrix;
use crate::error::{Error, Result};

/// Relative asymmetry accepted by the symmetric kernels.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Pivots must exceed this fraction of the largest diagonal entry.
pub const PIVOT_TOL: f64 = 1e-14;

pub(crate) fn check_symmetric(s: &DenseMatrix) -> Result<()> {
    if !s.is_square() {
        return Err(Error::ShapeMismatch {
            op: "symmetric check",
            detail: format!("{}x{} is not square", s.rows(), s.cols()),
        });
    }
    let asymmetry = s.relative_asymmetry();
    if asymmetry > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { asymmetry });
    }
    Ok(())
}

/// Lower-triangular factor L with L·Lᵀ = S.
///
/// Only the lower triangle of `s` is read once symmetry has been checked.
pub fn cholesky(s: &DenseMatrix) -> Result<DenseMatrix> {
    check_symmetric(s)?;
    let n = s.rows();
    let max_diag = s.diag().iter().fold(0.0_f64, |m, v| m.max(*v));
    let threshold = PIVOT_TOL * max_diag;
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = s[(j, j)];
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if pivot.is_nan() || pivot <= threshold || pivot <= 0.0 {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        let d = pivot.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut v = s[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / d;
        }
    }
    Ok(l)
}

/// Solves L·X = B for lower-triangular L.
pub fn solve_lower(l: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = l.rows();
    assert_eq!(b.rows(), n, "solve_lower shape mismatch");
    let m = b.cols();
    let mut x = b.as_slice().to_vec();
    for i in 0..n {
        let (done, rest) = x.split_at_mut(i * m);
        let xi = &mut rest[..m];
        for (k, &lik) in l.row(i)[..i].iter().enumerate() {
            if lik == 0.0 {
                continue;
            }
            for (o, v) in xi.iter_mut().zip(&done[k * m..(k + 1) * m]) {
                *o -= lik * v;
            }
        }
        let d = l[(i, i)];
        xi.iter_mut().for_each(|o| *o /= d);
    }
    DenseMatrix::from_fn(n, m, |i, j| x[i * m + j])
}

/// Solves Lᵀ·X = B for lower-triangular L.
pub fn solve_lower_transpose(l: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = l.rows();
    assert_eq!(b.rows(), n, "solve_lower_transpose shape mismatch");
    let m = b.cols();
    let mut x = b.as_slice().to_vec();
    for i in (0..n).rev() {
        let (head, done) = x.split_at_mut((i + 1) * m);
        let xi = &mut head[i * m..];
        for k in (i + 1)..n {
            let lki = l[(k, i)];
            if lki == 0.0 {
                continue;
            }
            let off = (k - i - 1) * m;
            for (o, v) in xi.iter_mut().zip(&done[off..off + m]) {
                *o -= lki * v;
            }
        }
        let d = l[(i, i)];
        xi.iter_mut().for_each(|o| *o /= d);
    }
    DenseMatrix::from_fn(n, m, |i, j| x[i * m + j])
}

/// Solves S·X = B given the Cholesky factor of S.
pub fn cholesky_solve(l: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    solve_lower_transpose(l, &solve_lower(l, b))
}

pub fn cholesky_solve_vec(l: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let rhs = DenseMatrix::from_columns(b.len(), &[b.to_vec()]);
    cholesky_solve(l, &rhs).col(0)
}

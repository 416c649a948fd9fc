//! Dense helpers: rank-revealing spans, null spaces, Hermitian eigenproblems
//! and the real/complex coordinate conventions on V.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

/// Orthonormal basis of the column space of `m`, rank cut at
/// `tol_rank * max(1, s_max)`.
pub fn orth(m: &RMat, tol_rank: f64) -> RMat {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return RMat::zeros(rows, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("svd requested u");
    let s = &svd.singular_values;
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let thr = tol_rank * smax.max(1.0);
    let mut idx: Vec<usize> = (0..s.len()).filter(|&i| s[i] > thr).collect();
    idx.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap());
    let mut out = RMat::zeros(rows, idx.len());
    for (c, &i) in idx.iter().enumerate() {
        out.set_column(c, &u.column(i));
    }
    out
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns `q` in R^dim.
pub fn complement(q: &RMat, dim: usize) -> RMat {
    if q.ncols() == 0 {
        return RMat::identity(dim, dim);
    }
    if q.ncols() >= dim {
        return RMat::zeros(dim, 0);
    }
    let proj = RMat::identity(dim, dim) - q * q.transpose();
    let eig = SymmetricEigen::new(proj);
    let mut idx: Vec<usize> = (0..dim).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    idx.sort();
    let mut out = RMat::zeros(dim, idx.len());
    for (c, &i) in idx.iter().enumerate() {
        out.set_column(c, &eig.eigenvectors.column(i));
    }
    // re-orthonormalize against roundoff
    orth(&out, 1e-6)
}

/// Orthonormal basis of {x : a x = 0}.
pub fn null_space(a: &RMat, tol_rank: f64) -> RMat {
    let m = a.ncols();
    if a.nrows() == 0 {
        return RMat::identity(m, m);
    }
    let row_space = orth(&a.transpose(), tol_rank);
    complement(&row_space, m)
}

/// Eigen-decomposition of a real symmetric matrix, eigenvalues descending.
pub fn sym_eigen(a: &RMat) -> Result<(RVec, RMat)> {
    let n = a.nrows();
    if n == 0 {
        return Ok((RVec::zeros(0), RMat::zeros(0, 0)));
    }
    let sym = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, EIG_EPS, EIG_MAX_ITER).ok_or(Error::EigSolverFailure)?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let vals = RVec::from_iterator(n, idx.iter().map(|&i| eig.eigenvalues[i]));
    let mut vecs = RMat::zeros(n, n);
    for (c, &i) in idx.iter().enumerate() {
        vecs.set_column(c, &eig.eigenvectors.column(i));
    }
    Ok((vals, vecs))
}

/// Eigen-decomposition of a complex Hermitian matrix, eigenvalues descending.
pub fn herm_eigen(a: &CMat) -> Result<(RVec, CMat)> {
    let n = a.nrows();
    if n == 0 {
        return Ok((RVec::zeros(0), CMat::zeros(0, 0)));
    }
    let h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(h, EIG_EPS, EIG_MAX_ITER).ok_or(Error::EigSolverFailure)?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let vals = RVec::from_iterator(n, idx.iter().map(|&i| eig.eigenvalues[i]));
    let mut vecs = CMat::zeros(n, n);
    for (c, &i) in idx.iter().enumerate() {
        vecs.set_column(c, &eig.eigenvectors.column(i));
    }
    Ok((vals, vecs))
}

/// f(H) for Hermitian H through its eigen-decomposition.
pub fn herm_fn(a: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (vals, vecs) = herm_eigen(a)?;
    let d = CMat::from_diagonal(&vals.map(|l| Complex64::new(f(l), 0.0)));
    Ok(&vecs * d * vecs.adjoint())
}

/// (Re v, Im v).
pub fn to_real(v: &CVec) -> RVec {
    let n = v.len();
    RVec::from_fn(2 * n, |i, _| if i < n { v[i].re } else { v[i - n].im })
}

pub fn from_real(x: &RVec) -> CVec {
    let n = x.len() / 2;
    CVec::from_fn(n, |i, _| Complex64::new(x[i], x[i + n]))
}

/// Real matrix of a complex-linear map in (Re, Im) coordinates: [[A, -B], [B, A]].
pub fn complex_to_real(m: &CMat) -> RMat {
    let (r, c) = m.shape();
    let mut out = RMat::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i, j + c)] = -z.im;
            out[(i + r, j)] = z.im;
            out[(i + r, j + c)] = z.re;
        }
    }
    out
}

/// Inverse of [`complex_to_real`]; assumes the real map commutes with j.
pub fn real_to_complex(m: &RMat) -> CMat {
    let r = m.nrows() / 2;
    let c = m.ncols() / 2;
    CMat::from_fn(r, c, |i, j| Complex64::new(m[(i, j)], m[(i + r, j)]))
}

/// Multiplication by i on V_R.
pub fn j_matrix(n: usize) -> RMat {
    let mut j = RMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k + n, k)] = 1.0;
        j[(k, k + n)] = -1.0;
    }
    j
}

pub fn cvec_from_real(x: &RVec) -> CVec {
    x.map(|a| Complex64::new(a, 0.0))
}

pub fn re(v: &CVec) -> RVec {
    v.map(|z| z.re)
}

pub fn im(v: &CVec) -> RVec {
    v.map(|z| z.im)
}

pub fn spectral_norm(m: &RMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max)
}

/// Smallest and largest singular values.
pub fn singular_range(m: &RMat) -> (f64, f64) {
    if m.is_empty() {
        return (0.0, 0.0);
    }
    let s = m.clone().svd(false, false).singular_values;
    let lo = s.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = s.iter().cloned().fold(0.0, f64::max);
    (lo, hi)
}

/// Stack column blocks side by side.
pub fn hcat(blocks: &[&RMat]) -> RMat {
    let rows = blocks.first().map(|b| b.nrows()).unwrap_or(0);
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = RMat::zeros(rows, cols);
    let mut c = 0;
    for b in blocks {
        out.view_mut((0, c), (rows, b.ncols())).copy_from(*b);
        c += b.ncols();
    }
    out
}

/// Block-diagonal assembly.
pub fn block_diag(blocks: &[&RMat]) -> RMat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = RMat::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(*b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

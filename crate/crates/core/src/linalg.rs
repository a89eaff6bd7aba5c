//! Thin wrappers over faer's dense symmetric eigensolver.

use std::io::Write;

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatRef, Par, Side};

use crate::{Error, Result};

/// Eigenvalues (nondecreasing) and matching eigenvector columns.
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
}

pub fn sym_eigen(m: MatRef<'_, f64>) -> Result<SymEigen> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let values = evd.S().column_vector().iter().copied().collect();
    Ok(SymEigen {
        values,
        vectors: evd.U().to_owned(),
    })
}

/// Eigenvalues in nonincreasing order.
pub fn eigenvalues_desc(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    let mut v = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    v.reverse();
    Ok(v)
}

/// `sum_j w_j u_j u_j^T` over the selected eigenpairs, with `w_j >= 0`.
pub(crate) fn low_rank_sum(vectors: MatRef<'_, f64>, picks: &[(usize, f64)], n: usize) -> Mat<f64> {
    let r = picks.len();
    let mut out = Mat::<f64>::zeros(n, n);
    if r == 0 {
        return out;
    }
    let mut f = Mat::<f64>::zeros(n, r);
    for (c, &(j, w)) in picks.iter().enumerate() {
        let s = w.sqrt();
        for i in 0..n {
            f[(i, c)] = vectors[(i, j)] * s;
        }
    }
    matmul(out.as_mut(), Accum::Replace, f.as_ref(), f.transpose(), 1.0, Par::Seq);
    out
}

pub fn frobenius(m: MatRef<'_, f64>) -> f64 {
    let mut s = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            s += m[(i, j)] * m[(i, j)];
        }
    }
    s.sqrt()
}

/// Writes `m` row-major as little-endian 64-bit floats.
pub fn write_dense_le<W: Write>(m: MatRef<'_, f64>, mut w: W) -> Result<()> {
    let mut buf = Vec::with_capacity(m.nrows() * m.ncols() * 8);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            buf.extend_from_slice(&m[(i, j)].to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

//! Dense solves with a conditioning guard, and the sparse SPD solvers.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::CsrMatrix;
use sprs::{CsMat, FillInReduction};
use sprs_ldl::Ldl;

use crate::{Error, Result};

/// Local solves below this reciprocal condition number are rejected.
pub const MIN_RCOND: f64 = 1e-13;

/// `σ_min / σ_max`.
pub fn rcond(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let sv = m.singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0.0;
    }
    sv.min() / max
}

/// Solves `m x = rhs` after checking the conditioning of `m`.
pub fn guarded_solve(m: &DMatrix<f64>, rhs: &DMatrix<f64>, what: &'static str, element: usize) -> Result<DMatrix<f64>> {
    if m.is_empty() {
        return Ok(DMatrix::zeros(0, rhs.ncols()));
    }
    let rc = rcond(m);
    if !(rc >= MIN_RCOND) {
        return Err(Error::Conditioning {
            what,
            element,
            rcond: rc,
        });
    }
    m.clone().lu().solve(rhs).ok_or(Error::Conditioning {
        what,
        element,
        rcond: rc,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SolverKind {
    /// Conjugate gradients with diagonal (Jacobi) preconditioning.
    #[default]
    Cg,
    /// Sparse `LDLᵀ` factorisation after reverse Cuthill-McKee reordering.
    Direct,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// `‖b - A x‖ / ‖b‖` recomputed from the returned solution.
    pub relative_residual: f64,
}

pub const CG_TOLERANCE: f64 = 1e-13;

/// Preconditioned conjugate gradients for an SPD matrix.
pub fn conjugate_gradient(
    a: &CsrMatrix<f64>,
    b: &DVector<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<(DVector<f64>, SolveStats)> {
    let n = b.len();
    let bnorm = b.norm();
    let mut x = DVector::zeros(n);
    if bnorm == 0.0 {
        return Ok((
            x,
            SolveStats {
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }
    let mut diag = vec![1.0; n];
    for (i, row) in a.row_iter().enumerate() {
        for (&j, &v) in row.col_indices().iter().zip(row.values()) {
            if i == j && v > 0.0 {
                diag[i] = 1.0 / v;
            }
        }
    }
    let mut r = b.clone();
    let mut z = r.component_mul(&DVector::from_vec(diag.clone()));
    let mut p = z.clone();
    let mut rz = r.dot(&z);
    let mut history = Vec::new();
    let mut ap = DVector::zeros(n);
    for it in 1..=max_iter {
        spmv(a, &p, &mut ap);
        let alpha = rz / p.dot(&ap);
        x.axpy(alpha, &p, 1.0);
        r.axpy(-alpha, &ap, 1.0);
        let rel = r.norm() / bnorm;
        history.push(rel);
        if rel <= tol {
            let true_res = residual(a, &x, b) / bnorm;
            return Ok((
                x,
                SolveStats {
                    iterations: it,
                    relative_residual: true_res,
                },
            ));
        }
        for i in 0..n {
            z[i] = r[i] * diag[i];
        }
        let rz_new = r.dot(&z);
        p *= rz_new / rz;
        p += &z;
        rz = rz_new;
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: history.last().copied().unwrap_or(1.0),
        history,
    })
}

/// Sparse `LDLᵀ` solve of an SPD system; a non-positive pivot is reported
/// as a factorisation failure.
pub fn cholesky_solve(a: &CsrMatrix<f64>, b: &DVector<f64>) -> Result<(DVector<f64>, SolveStats)> {
    let n = a.nrows();
    let (offsets, indices, values) = a.csr_data();
    let mat = CsMat::try_new((n, n), offsets.to_vec(), indices.to_vec(), values.to_vec())
        .map_err(|(_, _, _, e)| Error::Factorisation(e.to_string()))?;
    let factor = Ldl::new()
        .fill_in_reduction(FillInReduction::ReverseCuthillMcKee)
        .numeric(mat.view())
        .map_err(|e| Error::Factorisation(e.to_string()))?;
    if let Some(i) = factor.d().iter().position(|d| !(*d > 0.0)) {
        return Err(Error::Factorisation(format!("non-positive pivot at {i}")));
    }
    let x = DVector::from_vec(factor.solve(b.as_slice().to_vec()));
    let bnorm = b.norm();
    let rel = if bnorm == 0.0 { 0.0 } else { residual(a, &x, b) / bnorm };
    Ok((
        x,
        SolveStats {
            iterations: 1,
            relative_residual: rel,
        },
    ))
}

pub fn spmv(a: &CsrMatrix<f64>, x: &DVector<f64>, out: &mut DVector<f64>) {
    for (i, row) in a.row_iter().enumerate() {
        out[i] = row.col_indices().iter().zip(row.values()).map(|(&j, v)| v * x[j]).sum();
    }
}

pub fn residual(a: &CsrMatrix<f64>, x: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let mut ax = DVector::zeros(b.len());
    spmv(a, x, &mut ax);
    (b - ax).norm()
}

//! PSD certification: hermitian eigendecomposition and Gram verdicts.
//!
//! Every positivity claim in the crate bottoms out here: assemble a hermitian
//! matrix, take its full eigendecomposition, and compare the smallest
//! eigenvalue against a relative tolerance.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{CMat, C64};

/// Outcome of a PSD check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Smallest eigenvalue is above `-tol * max(1, max_eig)`.
    #[serde(rename = "PSD")]
    Psd,
    /// A genuinely negative eigenvalue was found.
    #[serde(rename = "NOT_PSD")]
    NotPsd,
    /// The verdict is not meaningful because the underlying basis was flagged
    /// as numerically degenerate before the check ran. Never produced by
    /// [`GramReport::from_matrix`]; reserved for callers that pre-screen bases.
    #[serde(rename = "INDEFINITE_BASIS")]
    IndefiniteBasis,
}

/// Result of a PSD check on a hermitian matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramReport {
    pub size: usize,
    pub min_eig: f64,
    pub max_eig: f64,
    pub tol: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("matrix is not hermitian: relative asymmetry {residual:e} exceeds 1e-12")]
    NotHermitian { residual: f64 },
}

/// Relative deviation of `m` from its own conjugate transpose,
/// `‖M − M*‖ / max(1, ‖M‖)` in the Frobenius norm.
pub fn hermitian_residual(m: &CMat) -> f64 {
    let diff = m - m.adjoint();
    diff.norm() / m.norm().max(1.0)
}

/// Eigenvalues of a hermitian matrix, ascending. The input is hermitized as
/// `(M + M*)/2` first; callers are expected to have checked
/// [`hermitian_residual`] if asymmetry is an error for them.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut eigs: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(|a, b| a.total_cmp(b));
    eigs
}

/// Full hermitian eigendecomposition: `(eigenvalues ascending, eigenvectors)`,
/// columns of the returned matrix matching the eigenvalue order.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let h = (m + m.adjoint()).scale(0.5);
    let decomp = h.symmetric_eigen();
    let n = decomp.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| decomp.eigenvalues[i].total_cmp(&decomp.eigenvalues[j]));
    let eigs: Vec<f64> = order.iter().map(|&i| decomp.eigenvalues[i]).collect();
    let vecs = CMat::from_columns(
        &order
            .iter()
            .map(|&i| decomp.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (eigs, vecs)
}

impl GramReport {
    /// PSD verdict from extremal eigenvalues. The pass condition is
    /// `min_eig >= -tol * max(1, max_eig)`, which is scale-free for large
    /// Grams and absolute for small ones.
    pub fn from_extremes(size: usize, min_eig: f64, max_eig: f64, tol: f64) -> Self {
        let verdict = if min_eig >= -tol * max_eig.max(1.0) {
            Verdict::Psd
        } else {
            Verdict::NotPsd
        };
        GramReport { size, min_eig, max_eig, tol, verdict }
    }

    /// Full eigendecomposition of a hermitian matrix followed by the verdict.
    /// Errors if the matrix is not hermitian to 1e-12 relative.
    pub fn from_matrix(m: &CMat, tol: f64) -> Result<Self, ReportError> {
        let residual = hermitian_residual(m);
        if residual > 1e-12 {
            return Err(ReportError::NotHermitian { residual });
        }
        let eigs = hermitian_eigenvalues(m);
        let min_eig = *eigs.first().expect("nonempty matrix");
        let max_eig = *eigs.last().expect("nonempty matrix");
        Ok(Self::from_extremes(m.nrows(), min_eig, max_eig, tol))
    }

    /// Like [`from_matrix`](Self::from_matrix) but also hands back the
    /// ascending eigenvalue list (for dumps and defect counts).
    pub fn from_matrix_with_eigs(m: &CMat, tol: f64) -> Result<(Self, Vec<f64>), ReportError> {
        let residual = hermitian_residual(m);
        if residual > 1e-12 {
            return Err(ReportError::NotHermitian { residual });
        }
        let eigs = hermitian_eigenvalues(m);
        let min_eig = *eigs.first().expect("nonempty matrix");
        let max_eig = *eigs.last().expect("nonempty matrix");
        let report = Self::from_extremes(m.nrows(), min_eig, max_eig, tol);
        Ok((report, eigs))
    }

    pub fn is_psd(&self) -> bool {
        self.verdict == Verdict::Psd
    }
}

/// Operator (spectral) norm via SVD.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Operator norm of a real matrix.
pub fn op_norm_real(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Numerical rank: number of singular values above `rel_tol` times the largest.
pub fn rank_rel(m: &CMat, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Singular values, descending.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Lift a real matrix into the complex matrix type.
pub fn complexify(m: &DMatrix<f64>) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

//! Finite-dimensional reflection-positive Hilbert spaces.
//!
//! A space is a triple `(ℂ^d, θ, E₊)` with `θ` a unitary involution and `E₊`
//! a subspace given by a basis. Reflection positivity is the statement that
//! the twisted Gram `G[i][j] = ⟨b_i, θ b_j⟩` is PSD; quantization passes to
//! the quotient by its null space, and operators on `E₊` that preserve the
//! null space descend to the quotient.

use thiserror::Error;

use crate::report::{self, GramReport};
use crate::{CMat, CVec, C64};

#[derive(Debug, Error)]
pub enum RphsError {
    #[error("theta is not a unitary involution: residual {residual:e}")]
    NonInvolutiveTheta { residual: f64 },
    #[error("plus_basis is rank deficient: sigma_min/sigma_max = {ratio:e}")]
    RankDeficientBasis { ratio: f64 },
    #[error("input columns do not lie in the required theta-eigenspace: residual {residual:e}")]
    EigenspaceMismatch { residual: f64 },
    #[error("twisted Gram is not PSD at tolerance {tol:e} (min_eig {min_eig:e})")]
    NotRp { min_eig: f64, tol: f64 },
    #[error("operator does not preserve the null space: |q(S n)| = {residual:e}")]
    NullspaceNotPreserved { residual: f64 },
    #[error("e0 basis is not theta-fixed inside E_plus: residual {residual:e}")]
    E0NotFixed { residual: f64 },
}

/// A reflection-positive Hilbert space candidate: ambient dimension, unitary
/// involution, and a full-column-rank basis of the positive-candidate
/// subspace `E₊`.
#[derive(Debug, Clone)]
pub struct RpSpace {
    pub dim: usize,
    pub theta: CMat,
    pub plus_basis: CMat,
}

/// The twisted Gram `G[i][j] = ⟨b_i, θ b_j⟩` of the `E₊` basis.
#[derive(Debug, Clone)]
pub struct TwistedGram {
    pub matrix: CMat,
}

/// Quotient data for OS quantization.
///
/// `qmap` sends `E₊`-coordinates to coordinates on the quotient space in
/// which the inner product is the standard one: `⟨q x, q y⟩ = x* G y` up to
/// the discarded eigenvalues. Rows are eigenvectors of the twisted Gram
/// scaled by the square root of their eigenvalue, so `qmap G⁺ qmap* = 1`.
#[derive(Debug, Clone)]
pub struct OsQuotient {
    pub rank: usize,
    pub qmap: CMat,
    pub null_basis: CMat,
    pub tol: f64,
}

/// Result of building `E₊` as the graph `{u + Cu}` of a map from the
/// `+1`-eigenspace of theta into the `-1`-eigenspace.
#[derive(Debug, Clone)]
pub struct GraphSubspace {
    pub plus_basis: CMat,
    /// Operator norm of `C` as a map between the eigenspaces.
    pub c_norm: f64,
    /// The graph is theta-positive iff `C` is a contraction.
    pub theta_positive: bool,
}

/// Markov-condition diagnostics: the projector identity `P₊P₀P₋ = P₊P₋` and
/// the quotient criterion (q maps `E₀` onto the whole quotient) are computed
/// independently and must agree.
#[derive(Debug, Clone)]
pub struct MarkovReport {
    pub is_markov: bool,
    pub projector_residual: f64,
    pub quotient_defect: usize,
}

impl RpSpace {
    pub fn new(theta: CMat, plus_basis: CMat) -> Result<Self, RphsError> {
        let d = theta.nrows();
        assert_eq!(theta.ncols(), d, "theta must be square");
        assert_eq!(plus_basis.nrows(), d, "plus_basis row count must match theta");
        let id = CMat::identity(d, d);
        let unitary_res = (&theta.adjoint() * &theta - &id).norm();
        let invol_res = (&theta * &theta - &id).norm();
        let residual = unitary_res.max(invol_res);
        if residual > 1e-12 * (d as f64).sqrt().max(1.0) {
            return Err(RphsError::NonInvolutiveTheta { residual });
        }
        let sv = report::singular_values(&plus_basis);
        let ratio = sv.last().copied().unwrap_or(0.0) / sv.first().copied().unwrap_or(1.0);
        if ratio <= 1e-10 {
            return Err(RphsError::RankDeficientBasis { ratio });
        }
        Ok(RpSpace { dim: d, theta, plus_basis })
    }

    /// Number of basis vectors of `E₊`.
    pub fn k(&self) -> usize {
        self.plus_basis.ncols()
    }

    /// The twisted Gram of the `E₊` basis, hermitized against round-off.
    pub fn twisted_gram(&self) -> TwistedGram {
        let raw = self.plus_basis.adjoint() * &self.theta * &self.plus_basis;
        let matrix = (&raw + raw.adjoint()).scale(0.5);
        TwistedGram { matrix }
    }
}

/// PSD verdict on the twisted Gram: the numerical form of "⟨η, θη⟩ ≥ 0 on E₊".
pub fn check_reflection_positive(space: &RpSpace, tol: f64) -> GramReport {
    let gram = space.twisted_gram();
    GramReport::from_matrix(&gram.matrix, tol).expect("twisted Gram is hermitized")
}

/// Builds the graph subspace `{u + Cu : u ∈ span(f_basis)}`.
///
/// `f_basis` columns must lie in the `+1`-eigenspace of `theta` and `c_cols`
/// (the images `C u_j` of the basis columns) in the `-1`-eigenspace. The
/// returned verdict says whether the graph is theta-positive, which holds iff
/// `‖C‖ ≤ 1`.
pub fn graph_subspace(theta: &CMat, f_basis: &CMat, c_cols: &CMat) -> Result<GraphSubspace, RphsError> {
    assert_eq!(f_basis.ncols(), c_cols.ncols(), "C images must match basis columns");
    let scale = f_basis.norm().max(1.0);
    let plus_res = (theta * f_basis - f_basis).norm() / scale;
    let minus_res = (theta * c_cols + c_cols).norm() / c_cols.norm().max(1.0);
    let residual = plus_res.max(minus_res);
    if residual > 1e-10 {
        return Err(RphsError::EigenspaceMismatch { residual });
    }
    // Operator norm of C with respect to the subspace inner products: the
    // largest generalized singular value of (c_cols, f_basis), computed via
    // the pencil Gc x = s² Gf x.
    let gf = f_basis.adjoint() * f_basis;
    let gc = c_cols.adjoint() * c_cols;
    let (gf_eigs, gf_vecs) = report::hermitian_eigen(&gf);
    if gf_eigs[0] <= 1e-20 * gf_eigs.last().unwrap().max(1.0) {
        return Err(RphsError::RankDeficientBasis { ratio: gf_eigs[0] });
    }
    let inv_sqrt = CMat::from_fn(gf_eigs.len(), gf_eigs.len(), |i, j| {
        if i == j {
            C64::new(1.0 / gf_eigs[i].sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let w = &gf_vecs * inv_sqrt * gf_vecs.adjoint();
    let pencil = &w * gc * &w;
    let top = report::hermitian_eigenvalues(&pencil).last().copied().unwrap_or(0.0);
    let c_norm = top.max(0.0).sqrt();
    Ok(GraphSubspace {
        plus_basis: f_basis + c_cols,
        c_norm,
        theta_positive: c_norm <= 1.0 + 1e-10,
    })
}

/// OS quantization: eigendecompose the twisted Gram, discard eigenvalues at
/// or below `tol` times the largest, and return the quotient map.
pub fn os_quotient(space: &RpSpace, tol: f64) -> Result<OsQuotient, RphsError> {
    let gram = space.twisted_gram();
    let (eigs, vecs) = report::hermitian_eigen(&gram.matrix);
    let k = eigs.len();
    let max_eig = eigs.last().copied().unwrap_or(0.0);
    if eigs[0] < -tol * max_eig.max(1.0) {
        return Err(RphsError::NotRp { min_eig: eigs[0], tol });
    }
    // When the twisted Gram is degenerate (e.g. the whole basis is
    // twisted-null) its eigenvalues are rounding noise, so the cutoff is
    // floored at the scale of the basis rather than the largest eigenvalue.
    let scale = space.plus_basis.norm_squared().max(1.0);
    let cutoff = tol * max_eig.max(0.0).max(scale);
    let kept: Vec<usize> = (0..k).filter(|&i| eigs[i] > cutoff).collect();
    let dropped: Vec<usize> = (0..k).filter(|&i| eigs[i] <= cutoff).collect();
    let rank = kept.len();
    let mut qmap = CMat::zeros(rank, k);
    for (row, &i) in kept.iter().enumerate() {
        let scale = C64::new(eigs[i].max(0.0).sqrt(), 0.0);
        for col in 0..k {
            qmap[(row, col)] = scale * vecs[(col, i)].conj();
        }
    }
    let null_basis = if dropped.is_empty() {
        CMat::zeros(k, 0)
    } else {
        CMat::from_columns(&dropped.iter().map(|&i| vecs.column(i).into_owned()).collect::<Vec<_>>())
    };
    Ok(OsQuotient { rank, qmap, null_basis, tol })
}

impl OsQuotient {
    /// Image of an `E₊`-coordinate vector on the quotient.
    pub fn apply(&self, x: &CVec) -> CVec {
        &self.qmap * x
    }

    /// Right inverse of `qmap` (isometric section of the quotient).
    fn section(&self) -> CMat {
        // qmap qmap* = diag(kept eigenvalues), so the pseudoinverse is
        // qmap* scaled by the inverse of that diagonal.
        let d = &self.qmap * self.qmap.adjoint();
        let mut section = self.qmap.adjoint();
        for j in 0..self.rank {
            let inv = C64::new(1.0, 0.0) / d[(j, j)];
            for i in 0..section.nrows() {
                section[(i, j)] *= inv;
            }
        }
        section
    }
}

/// OS transform of an operator `S` on `E₊`-coordinates: the unique `Ŝ` with
/// `Ŝ ∘ q = q ∘ S`, defined when `S` preserves the null space.
pub fn os_transform(
    _space: &RpSpace,
    quotient: &OsQuotient,
    s: &CMat,
) -> Result<CMat, RphsError> {
    let scale = report::op_norm(s).max(1.0);
    for j in 0..quotient.null_basis.ncols() {
        let n = quotient.null_basis.column(j).into_owned();
        let image = &quotient.qmap * (s * n);
        let residual = image.norm();
        if residual > 10.0 * quotient.tol.sqrt() * scale {
            return Err(RphsError::NullspaceNotPreserved { residual });
        }
    }
    Ok(&quotient.qmap * s * quotient.section())
}

/// Thin orthonormal basis of the column span (QR).
fn orthonormal_columns(m: &CMat) -> CMat {
    if m.ncols() == 0 {
        return m.clone();
    }
    let qr = m.clone().qr();
    qr.q()
}

/// Markov-condition check for a candidate `E₀ ⊂ E₊ ∩ Fix(θ)`.
///
/// Computes the projector identity `P₊P₀P₋ = P₊P₋` (with `E₋ = θE₊`) and,
/// independently, whether `q` maps `E₀` onto the whole quotient. The two
/// criteria are equivalent and the report carries both.
pub fn markov_check(space: &RpSpace, e0_basis: &CMat, tol: f64) -> Result<MarkovReport, RphsError> {
    let d = space.dim;
    assert_eq!(e0_basis.nrows(), d);
    // e0 must be theta-fixed and inside E_plus.
    if e0_basis.ncols() > 0 {
        let fix_res = (&space.theta * e0_basis - e0_basis).norm() / e0_basis.norm().max(1.0);
        if fix_res > 1e-8 {
            return Err(RphsError::E0NotFixed { residual: fix_res });
        }
    }
    let svd = space.plus_basis.clone().svd(true, true);
    let coords = svd
        .solve(&e0_basis.clone(), 1e-12)
        .expect("least-squares solve");
    let membership = (&space.plus_basis * &coords - e0_basis).norm() / e0_basis.norm().max(1.0);
    if membership > 1e-8 {
        return Err(RphsError::E0NotFixed { residual: membership });
    }

    let p_plus = {
        let q = orthonormal_columns(&space.plus_basis);
        &q * q.adjoint()
    };
    let p_minus = &space.theta * &p_plus * &space.theta;
    let p_zero = if e0_basis.ncols() == 0 {
        CMat::zeros(d, d)
    } else {
        let q = orthonormal_columns(e0_basis);
        &q * q.adjoint()
    };
    let lhs = &p_plus * &p_zero * &p_minus;
    let rhs = &p_plus * &p_minus;
    let projector_residual = report::op_norm(&(lhs - rhs));

    let quotient = os_quotient(space, tol)?;
    let image = &quotient.qmap * &coords;
    let image_rank = report::rank_rel(&image, 1e-6);
    let quotient_defect = quotient.rank - image_rank;

    Ok(MarkovReport {
        is_markov: projector_residual <= 1e3 * tol && quotient_defect == 0,
        projector_residual,
        quotient_defect,
    })
}

/// Random instances used by property tests and the acceptance battery.
pub mod random {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    /// Standard complex Gaussian matrix.
    pub fn gaussian_cmat<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
        CMat::from_fn(rows, cols, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        })
    }

    /// Haar-ish random unitary via QR of a complex Gaussian matrix.
    pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> CMat {
        let g = gaussian_cmat(rng, dim, dim);
        let qr = g.qr();
        qr.q()
    }

    /// Random unitary involution with `p` eigenvalues `+1` and `dim - p`
    /// eigenvalues `-1`, conjugated by a random unitary.
    pub fn random_involution<R: Rng>(rng: &mut R, dim: usize, p: usize) -> CMat {
        let u = random_unitary(rng, dim);
        let d = CMat::from_fn(dim, dim, |i, j| {
            if i == j {
                C64::new(if i < p { 1.0 } else { -1.0 }, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        &u * d * u.adjoint()
    }

    /// Random matrix with operator norm exactly `norm`.
    pub fn random_with_norm<R: Rng>(rng: &mut R, rows: usize, cols: usize, norm: f64) -> CMat {
        let g = gaussian_cmat(rng, rows, cols);
        let top = report::op_norm(&g);
        g.scale(norm / top)
    }
}

//! Twisted-periodic positive definite functions on the line, their atomic
//! measures, finite-dimensional modular pairs with their standard real
//! subspaces, and the reflection-positive extension of the interpolating
//! matrix function to the doubled circle.

use crate::report::{
    complexify, hermitian_eigen, hermitian_eigenvalues, hermitian_residual, op_norm_real,
    rank_rel, GramReport, ReportError,
};
use crate::{C64, CMat, CVec, RMat};
use rustfft::FftPlanner;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KmsError {
    #[error("evaluation point {z} lies outside the closed strip 0 ≤ Im z ≤ β")]
    OutsideStrip { z: C64 },
    #[error("atom location {loc} is negative")]
    NegativeLocation { loc: f64 },
    #[error("atom weight is not PSD (min eigenvalue {min_eig:e})")]
    WeightNotPsd { min_eig: f64 },
    #[error("matrix is not skew-symmetric (residual {residual:e})")]
    NotSkew { residual: f64 },
    #[error("operator norm {norm} is not strictly below 1")]
    NotStrictContraction { norm: f64 },
    #[error("modular relation JΔJ = Δ⁻¹ violated (residual {residual:e})")]
    ModularRelationViolated { residual: f64 },
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Report(#[from] ReportError),
}

/// Atomic measure `μ = μ₊ + refl(e^{β·}μ₊)` assembled from its positive part:
/// an atom of `μ₊` at `λ ≥ 0` with weight `W` contributes an atom at `λ` with
/// weight `W` and one at `-λ` with weight `e^{-βλ} conj(W)`.
#[derive(Debug, Clone)]
pub struct KmsMeasure {
    beta: f64,
    plus_atoms: Vec<(f64, CMat)>,
}

impl KmsMeasure {
    pub fn new(beta: f64, plus_atoms: Vec<(f64, CMat)>) -> Result<Self, KmsError> {
        if !(beta > 0.0) {
            return Err(KmsError::BadParams(format!("beta = {beta} must be positive")));
        }
        if plus_atoms.is_empty() {
            return Err(KmsError::BadParams("empty atom list".into()));
        }
        let dim = plus_atoms[0].1.nrows();
        for (loc, w) in &plus_atoms {
            if *loc < 0.0 {
                return Err(KmsError::NegativeLocation { loc: *loc });
            }
            if w.nrows() != dim || w.ncols() != dim {
                return Err(KmsError::BadParams("mixed weight dimensions".into()));
            }
            if hermitian_residual(w) > 1e-10 {
                return Err(KmsError::BadParams("weight not hermitian".into()));
            }
            // The reflection symmetry of the assembled measure pins the atom
            // at 0 to its own conjugate, so its weight must be real.
            if *loc == 0.0 && w.iter().map(|e| e.im.abs()).fold(0.0f64, f64::max) > 1e-12 {
                return Err(KmsError::BadParams(
                    "weight of the atom at 0 must be real-symmetric".into(),
                ));
            }
            let min_eig = hermitian_eigenvalues(w)[0];
            if min_eig < -1e-12 {
                return Err(KmsError::WeightNotPsd { min_eig });
            }
        }
        Ok(Self { beta, plus_atoms })
    }

    pub fn scalar(beta: f64, plus_atoms: &[(f64, f64)]) -> Result<Self, KmsError> {
        let atoms = plus_atoms
            .iter()
            .map(|&(loc, w)| (loc, CMat::from_element(1, 1, C64::new(w, 0.0))))
            .collect();
        Self::new(beta, atoms)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.plus_atoms[0].1.nrows()
    }

    /// All atoms of the assembled measure as `(location, weight)`.
    pub fn full_atoms(&self) -> Vec<(f64, CMat)> {
        let mut out = Vec::new();
        for (loc, w) in &self.plus_atoms {
            out.push((*loc, w.clone()));
            if *loc > 0.0 {
                let damped = w.map(|e| e.conj()) * C64::new((-self.beta * loc).exp(), 0.0);
                out.push((-loc, damped));
            }
        }
        out
    }

    /// Max deviation from the twisted reflection symmetry of the assembled
    /// atoms: the weight at `-λ` must equal `e^{-βλ}` times the conjugated
    /// weight at `λ`. Zero by construction; exposed as a self-check.
    pub fn symmetry_residual(&self) -> f64 {
        let atoms = self.full_atoms();
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for (loc, w) in atoms.iter().filter(|(l, _)| *l > 0.0) {
            let at_minus = atoms
                .iter()
                .filter(|(l, _)| *l == -loc)
                .fold(CMat::zeros(d, d), |acc, (_, v)| acc + v);
            let expect = w.map(|e| e.conj()) * C64::new((-self.beta * loc).exp(), 0.0);
            worst = worst.max((at_minus - expect).norm());
        }
        worst
    }
}

/// `ψ(z) = Σ_atoms e^{izλ} W` for `z` in the closed strip `0 ≤ Im z ≤ β`.
pub fn kms_function(mu: &KmsMeasure, z: C64) -> Result<CMat, KmsError> {
    if z.im < -1e-12 || z.im > mu.beta + 1e-12 {
        return Err(KmsError::OutsideStrip { z });
    }
    let d = mu.dim();
    let mut out = CMat::zeros(d, d);
    for (loc, w) in mu.full_atoms() {
        out += w * (C64::new(0.0, 1.0) * z * loc).exp();
    }
    Ok(out)
}

/// Max norm of `ψ(iβ + t) - conj ψ(t)` over the sampled real times.
pub fn kms_residual(mu: &KmsMeasure, times: &[f64]) -> Result<f64, KmsError> {
    let mut worst: f64 = 0.0;
    for &t in times {
        let shifted = kms_function(mu, C64::new(t, mu.beta))?;
        let base = kms_function(mu, C64::new(t, 0.0))?.map(|e| e.conj());
        worst = worst.max((shifted - base).norm());
    }
    Ok(worst)
}

/// Real skew-symmetric strict contraction with its polar data `C = I·|C|`.
#[derive(Debug, Clone)]
pub struct SkewContraction {
    c: RMat,
    complex_structure: RMat,
    abs: RMat,
    norm: f64,
}

impl SkewContraction {
    pub fn new(c: RMat) -> Result<Self, KmsError> {
        let residual = (&c + c.transpose()).norm();
        if residual > 1e-12 * c.norm().max(1.0) {
            return Err(KmsError::NotSkew { residual });
        }
        let norm = op_norm_real(&c);
        if norm >= 1.0 {
            return Err(KmsError::NotStrictContraction { norm });
        }
        // |C| = (CᵀC)^{1/2} by symmetric eigendecomposition; I = C·|C|⁺ is an
        // orthogonal complex structure on the support of C.
        let gram = c.transpose() * &c;
        let eig = gram.symmetric_eigen();
        let sqrt_vals: Vec<f64> = eig.eigenvalues.iter().map(|&v| v.max(0.0).sqrt()).collect();
        let d = c.nrows();
        let mut abs = RMat::zeros(d, d);
        let mut pinv = RMat::zeros(d, d);
        let top = sqrt_vals.iter().cloned().fold(0.0f64, f64::max);
        for (k, &s) in sqrt_vals.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            abs += (v * v.transpose()) * s;
            if s > 1e-12 * top.max(1.0) {
                pinv += (v * v.transpose()) / s;
            }
        }
        let complex_structure = &c * pinv;
        Ok(Self { c, complex_structure, abs, norm })
    }

    /// Uniform contraction `μ·R` with `R` the block rotation by π/2 on `2m`
    /// coordinates, so `|C| = μ·1`.
    pub fn uniform(mu: f64, half_dim: usize) -> Result<Self, KmsError> {
        let d = 2 * half_dim;
        let mut c = RMat::zeros(d, d);
        for k in 0..half_dim {
            c[(2 * k, 2 * k + 1)] = -mu;
            c[(2 * k + 1, 2 * k)] = mu;
        }
        Self::new(c)
    }

    pub fn matrix(&self) -> &RMat {
        &self.c
    }

    pub fn complex_structure(&self) -> &RMat {
        &self.complex_structure
    }

    pub fn abs(&self) -> &RMat {
        &self.abs
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn dim(&self) -> usize {
        self.c.nrows()
    }

    /// `‖C - I·|C|‖`: consistency of the stored polar factors.
    pub fn polar_residual(&self) -> f64 {
        (&self.c - &self.complex_structure * &self.abs).norm()
    }
}

/// `φ̃(t) = (1 + iC)^{1 - t/β} (1 - iC)^{t/β}` for `t ∈ [0, β]`, evaluated by
/// the hermitian eigendecomposition of `iC`: on the eigenvalue `μ` of `iC`
/// the value is the scalar `(1+μ)^{1-t/β} (1-μ)^{t/β}`.
pub fn phi_from_contraction(cm: &SkewContraction, beta: f64, t: f64) -> Result<CMat, KmsError> {
    if !(beta > 0.0) {
        return Err(KmsError::BadParams(format!("beta = {beta} must be positive")));
    }
    let ic = complexify(cm.matrix()) * C64::new(0.0, 1.0);
    let (eigs, vecs) = hermitian_eigen(&ic);
    let s = t / beta;
    let d = cm.dim();
    let mut diag = CMat::zeros(d, d);
    for (k, &mu) in eigs.iter().enumerate() {
        let val = (1.0 + mu).powf(1.0 - s) * (1.0 - mu).powf(s);
        diag[(k, k)] = C64::new(val, 0.0);
    }
    Ok(&vecs * diag * vecs.adjoint())
}

/// Global extension of `φ̃`: even in `t` and twisted-periodic,
/// `φ̃(t + β) = conj φ̃(t)`. Equivalently: fold `t` into `[0, β]` by even
/// `2β`-periodic reflection and evaluate the interpolation formula there.
pub fn phi_global(cm: &SkewContraction, beta: f64, t: f64) -> Result<CMat, KmsError> {
    let mut s = t.rem_euclid(2.0 * beta);
    if s > beta {
        s = 2.0 * beta - s;
    }
    phi_from_contraction(cm, beta, s)
}

/// Even and odd parts of the extension in the reflection-positivity
/// construction: `u⁺ = Re φ̃` and `u⁻ = -I·Im φ̃`, so that
/// `φ̃ = u⁺ + iI u⁻` on the support of `C`.
pub fn even_odd_parts(cm: &SkewContraction, beta: f64, t: f64) -> Result<(RMat, RMat), KmsError> {
    let phi = phi_global(cm, beta, t)?;
    let u_plus = phi.map(|e| e.re);
    let im = phi.map(|e| e.im);
    let u_minus = -(cm.complex_structure() * im);
    Ok((u_plus, u_minus))
}

/// PSD verdicts of the two block kernels of the doubled-circle extension.
#[derive(Debug, Clone)]
pub struct RpExtensionReport {
    pub group_pd: GramReport,
    pub reflected_pd: GramReport,
}

/// Builds the extension `f` with component values `f(t, e) = u⁺ + u⁻` and
/// `f(t, τ) = φ̃(t)`, and checks two kernels: the group kernel over the
/// doubled grid `{(t_i, ε)}`, `ε ∈ {0, 1}` (arguments `t_j - t_i`, the
/// `(ε_i, ε_j)` component selecting `f(·, e)` when the flips cancel and
/// `f(·, τ)` otherwise), and the reflected kernel `φ̃(t_i + t_j)` over the
/// plain grid.
pub fn rp_extension_check(
    cm: &SkewContraction,
    beta: f64,
    grid: &[f64],
    tol: f64,
) -> Result<RpExtensionReport, KmsError> {
    extension_check_inner(cm, beta, grid, tol, false)
}

/// Same kernels with the sign of the odd part flipped — a deliberately broken
/// variant used as a negative control. The flip replaces `φ̃` by its
/// componentwise conjugate, which leaves the spectrum of the reflected
/// sum-kernel unchanged; the breakage shows up in the group kernel, whose
/// diagonal component `u⁺ - u⁻` grows exponentially on the circle and has
/// negative Fourier coefficients.
pub fn rp_extension_negative_control(
    cm: &SkewContraction,
    beta: f64,
    grid: &[f64],
    tol: f64,
) -> Result<RpExtensionReport, KmsError> {
    extension_check_inner(cm, beta, grid, tol, true)
}

fn extension_check_inner(
    cm: &SkewContraction,
    beta: f64,
    grid: &[f64],
    tol: f64,
    flip_odd: bool,
) -> Result<RpExtensionReport, KmsError> {
    for &t in grid {
        if !(0.0..=beta / 2.0).contains(&t) {
            return Err(KmsError::BadParams(format!(
                "grid point {t} outside [0, β/2] = [0, {}]",
                beta / 2.0
            )));
        }
    }
    let d = cm.dim();
    let n = grid.len();
    let sign = if flip_odd { -1.0 } else { 1.0 };

    let f_parts = |t: f64| -> Result<(CMat, CMat), KmsError> {
        let (u_plus, u_minus) = even_odd_parts(cm, beta, t)?;
        let f_e = complexify(&(&u_plus + &u_minus * sign));
        let iu = complexify(&(cm.complex_structure() * &u_minus)) * C64::new(0.0, sign);
        let f_tau = complexify(&u_plus) + iu;
        Ok((f_e, f_tau))
    };

    let mut group = CMat::zeros(2 * n * d, 2 * n * d);
    let mut reflected = CMat::zeros(n * d, n * d);
    for (i, &ti) in grid.iter().enumerate() {
        for (j, &tj) in grid.iter().enumerate() {
            let (f_e, f_tau) = f_parts(tj - ti)?;
            for (ei, ej, block) in [
                (0usize, 0usize, &f_e),
                (1, 1, &f_e),
                (0, 1, &f_tau),
                (1, 0, &f_tau),
            ] {
                let row = (ei * n + i) * d;
                let col = (ej * n + j) * d;
                group.view_mut((row, col), (d, d)).copy_from(block);
            }
            let (_, f_tau_sum) = f_parts(ti + tj)?;
            reflected.view_mut((i * d, j * d), (d, d)).copy_from(&f_tau_sum);
        }
    }
    Ok(RpExtensionReport {
        group_pd: GramReport::from_matrix(&group, tol)?,
        reflected_pd: GramReport::from_matrix(&reflected, tol)?,
    })
}

/// Closed forms and a sampling cross-check for the circle Fourier
/// coefficients of the twisted-periodic even/odd scalar modes.
#[derive(Debug, Clone)]
pub struct MatsubaraReport {
    /// Prefactor of the even coefficients.
    pub c_plus: f64,
    /// Prefactor of the odd coefficients.
    pub c_minus: f64,
    /// `c_n` for `n = 0..=n_max`: even indices from the even mode, odd from
    /// the odd mode; symmetric in `n`.
    pub coefficients: Vec<f64>,
    /// Max relative deviation of the sampled discrete Fourier coefficients
    /// from the closed forms over `|n| ≤ n_max`.
    pub fft_residual: f64,
    pub samples: usize,
}

/// Even/odd boundary modes on `[0, β]` with rate `λ`, extended to period `2β`
/// by `u^±(t + β) = ±u^±(t)`.
pub fn boundary_mode(lambda: f64, beta: f64, t: f64, odd: bool) -> f64 {
    let mut s = t.rem_euclid(2.0 * beta);
    let mut sign = 1.0;
    if s > beta {
        s -= beta;
        if odd {
            sign = -1.0;
        }
    }
    let denom = 1.0 + (-beta * lambda).exp();
    let core = (-s * lambda).exp() + if odd { -1.0 } else { 1.0 } * (-(beta - s) * lambda).exp();
    sign * core / denom
}

/// Computes the Matsubara coefficient closed forms
/// `c_{2n} = c⁺/(λ² + (2nπ/β)²)`, `c_{2n+1} = c⁻/(λ² + ((2n+1)π/β)²)` with
/// `c⁺ = tanh(βλ/2)·2λ/β`, `c⁻ = 2λ/β`, and cross-checks them against an FFT
/// of `u^±` sampled on `2^log2_samples` points of `[0, 2β]`.
///
/// The modes have corner singularities, so their coefficients decay only like
/// `1/n²` and the FFT value of `c_n` carries an aliasing error of relative
/// size `≈ (n/N)²`; pick `log2_samples` accordingly for the accuracy needed.
pub fn matsubara(
    lambda: f64,
    beta: f64,
    n_max: usize,
    log2_samples: u32,
) -> Result<MatsubaraReport, KmsError> {
    if !(lambda > 0.0 && beta > 0.0) {
        return Err(KmsError::BadParams("lambda and beta must be positive".into()));
    }
    let samples = 1usize << log2_samples;
    if n_max >= samples / 2 {
        return Err(KmsError::BadParams("n_max too large for the sample count".into()));
    }
    let c_plus = (beta * lambda / 2.0).tanh() * 2.0 * lambda / beta;
    let c_minus = 2.0 * lambda / beta;
    let pi = std::f64::consts::PI;
    let coefficients: Vec<f64> = (0..=n_max)
        .map(|n| {
            let omega = n as f64 * pi / beta;
            let pref = if n % 2 == 0 { c_plus } else { c_minus };
            pref / (lambda * lambda + omega * omega)
        })
        .collect();

    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(samples);
    let mut residual: f64 = 0.0;
    for odd in [false, true] {
        let mut buf: Vec<rustfft::num_complex::Complex<f64>> = (0..samples)
            .map(|k| {
                let t = 2.0 * beta * k as f64 / samples as f64;
                rustfft::num_complex::Complex::new(boundary_mode(lambda, beta, t, odd), 0.0)
            })
            .collect();
        fft.process(&mut buf);
        for n in (if odd { 1 } else { 0 }..=n_max).step_by(2) {
            let sampled = buf[n].re / samples as f64;
            let closed = coefficients[n];
            residual = residual.max((sampled - closed).abs() / closed.abs());
            // Symmetry c_n = c_{-n}.
            let neg = buf[samples - n.max(1)].re / samples as f64;
            if n > 0 {
                residual = residual.max((neg - closed).abs() / closed.abs());
            }
        }
    }
    Ok(MatsubaraReport {
        c_plus,
        c_minus,
        coefficients,
        fft_residual: residual,
        samples,
    })
}

/// Finite-dimensional modular pair: `Δ` has eigenvalue pairs `(δ, 1/δ)` on
/// doubled coordinates plus a trivial block, and the conjugation `J` is the
/// pair swap composed with componentwise complex conjugation, so that
/// `JΔJ = Δ⁻¹` holds exactly.
#[derive(Debug, Clone)]
pub struct StandardSubspaceModel {
    pairs: Vec<f64>,
    fixed: usize,
}

impl StandardSubspaceModel {
    pub fn new(pairs: Vec<f64>, fixed: usize) -> Result<Self, KmsError> {
        if pairs.iter().any(|&d| !(d > 0.0)) {
            return Err(KmsError::BadParams("modular eigenvalues must be positive".into()));
        }
        if pairs.is_empty() && fixed == 0 {
            return Err(KmsError::BadParams("empty model".into()));
        }
        Ok(Self { pairs, fixed })
    }

    /// Validates raw modular data: a diagonal and a pairing permutation must
    /// satisfy `δ_{π(i)} = 1/δ_i`.
    pub fn from_parts(diag: &[f64], pairing: &[usize]) -> Result<Self, KmsError> {
        if diag.len() != pairing.len() {
            return Err(KmsError::BadParams("diagonal/permutation length mismatch".into()));
        }
        let mut residual: f64 = 0.0;
        for (i, &pi) in pairing.iter().enumerate() {
            if pi >= diag.len() || pairing[pi] != i {
                return Err(KmsError::BadParams("pairing is not an involution".into()));
            }
            residual = residual.max((diag[pi] * diag[i] - 1.0).abs());
        }
        if residual > 1e-12 {
            return Err(KmsError::ModularRelationViolated { residual });
        }
        let mut pairs = Vec::new();
        let mut fixed = 0usize;
        let mut seen = vec![false; diag.len()];
        for (i, &pi) in pairing.iter().enumerate() {
            if seen[i] {
                continue;
            }
            if pi == i {
                fixed += 1;
            } else {
                pairs.push(diag[i].max(diag[pi]));
                seen[pi] = true;
            }
            seen[i] = true;
        }
        Self::new(pairs, fixed)
    }

    pub fn dim(&self) -> usize {
        2 * self.pairs.len() + self.fixed
    }

    /// `Δ^s` as a complex diagonal matrix.
    pub fn delta_power(&self, s: f64) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for (k, &delta) in self.pairs.iter().enumerate() {
            m[(2 * k, 2 * k)] = C64::new(delta.powf(s), 0.0);
            m[(2 * k + 1, 2 * k + 1)] = C64::new(delta.powf(-s), 0.0);
        }
        for k in 2 * self.pairs.len()..d {
            m[(k, k)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Applies the antilinear conjugation `J`: swap within each pair, then
    /// conjugate componentwise.
    pub fn apply_j(&self, v: &CVec) -> CVec {
        let d = self.dim();
        let mut out = CVec::zeros(d);
        for k in 0..self.pairs.len() {
            out[2 * k] = v[2 * k + 1].conj();
            out[2 * k + 1] = v[2 * k].conj();
        }
        for k in 2 * self.pairs.len()..d {
            out[k] = v[k].conj();
        }
        out
    }

    /// Residual of `JΔJ = Δ⁻¹` checked on the standard basis.
    pub fn modular_relation_residual(&self) -> f64 {
        let d = self.dim();
        let delta = self.delta_power(1.0);
        let delta_inv = self.delta_power(-1.0);
        let mut worst: f64 = 0.0;
        for k in 0..d {
            let mut e = CVec::zeros(d);
            e[k] = C64::new(1.0, 0.0);
            let lhs = self.apply_j(&(&delta * self.apply_j(&e)));
            let rhs = &delta_inv * &e;
            worst = worst.max((lhs - rhs).norm());
        }
        worst
    }

    /// Real-orthonormal basis of the standard subspace `V`, the fixed points
    /// of the antilinear involution `JΔ^{1/2}`: per pair the real vector
    /// `(1, δ^{1/2})` and the imaginary vector `i(1, -δ^{1/2})` (normalized),
    /// plus the real standard basis of the trivial block.
    pub fn v_basis(&self) -> Vec<CVec> {
        let d = self.dim();
        let mut basis = Vec::with_capacity(d);
        for (k, &delta) in self.pairs.iter().enumerate() {
            let root = delta.sqrt();
            let norm = (1.0 + delta).sqrt();
            let mut plus = CVec::zeros(d);
            plus[2 * k] = C64::new(1.0 / norm, 0.0);
            plus[2 * k + 1] = C64::new(root / norm, 0.0);
            let mut minus = CVec::zeros(d);
            minus[2 * k] = C64::new(0.0, 1.0 / norm);
            minus[2 * k + 1] = C64::new(0.0, -root / norm);
            basis.push(plus);
            basis.push(minus);
        }
        for k in 2 * self.pairs.len()..d {
            let mut e = CVec::zeros(d);
            e[k] = C64::new(1.0, 0.0);
            basis.push(e);
        }
        basis
    }
}

/// Outcome of [`standard_subspace_roundtrip`].
#[derive(Debug, Clone)]
pub struct SubspaceRoundtrip {
    pub contraction: SkewContraction,
    /// Max deviation of the basis from fixing `JΔ^{1/2}` and from real
    /// orthonormality.
    pub basis_residual: f64,
    /// Real rank of `[V | iV]`; equals `2·dim` exactly when `V ∩ iV = {0}`
    /// and `V + iV` is everything.
    pub v_iv_rank: usize,
}

/// Extracts the skew contraction of the standard subspace: on a
/// real-orthonormal basis `{e_k}` of `V`, `C_{kl} = Im⟨e_k, e_l⟩`.
pub fn standard_subspace_roundtrip(
    model: &StandardSubspaceModel,
) -> Result<SubspaceRoundtrip, KmsError> {
    let residual = model.modular_relation_residual();
    if residual > 1e-12 {
        return Err(KmsError::ModularRelationViolated { residual });
    }
    let basis = model.v_basis();
    let k = basis.len();
    let root_delta = model.delta_power(0.5);

    let mut basis_residual: f64 = 0.0;
    for (a, ea) in basis.iter().enumerate() {
        let fixed = self_fix_residual(model, &root_delta, ea);
        basis_residual = basis_residual.max(fixed);
        for (b, eb) in basis.iter().enumerate() {
            let re = ea.dotc(eb).re;
            let expect = if a == b { 1.0 } else { 0.0 };
            basis_residual = basis_residual.max((re - expect).abs());
        }
    }

    let mut c = RMat::zeros(k, k);
    for (a, ea) in basis.iter().enumerate() {
        for (b, eb) in basis.iter().enumerate() {
            c[(a, b)] = ea.dotc(eb).im;
        }
    }
    let contraction = SkewContraction::new(c)?;

    // V ∩ iV = {0}: the 2d real columns of [V | iV] must be independent.
    let d = model.dim();
    let mut cols = CMat::zeros(d, 2 * k);
    for (a, ea) in basis.iter().enumerate() {
        cols.column_mut(a).copy_from(ea);
        cols.column_mut(k + a).copy_from(&(ea * C64::new(0.0, 1.0)));
    }
    let mut real_cols = RMat::zeros(2 * d, 2 * k);
    for j in 0..2 * k {
        for i in 0..d {
            real_cols[(i, j)] = cols[(i, j)].re;
            real_cols[(d + i, j)] = cols[(i, j)].im;
        }
    }
    let v_iv_rank = rank_rel(&complexify(&real_cols), 1e-10);

    Ok(SubspaceRoundtrip {
        contraction,
        basis_residual,
        v_iv_rank,
    })
}

fn self_fix_residual(model: &StandardSubspaceModel, root_delta: &CMat, v: &CVec) -> f64 {
    let image = model.apply_j(&(root_delta * v));
    (image - v).norm()
}

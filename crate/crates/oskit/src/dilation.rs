//! Hermitian contraction semigroups in diagonal form, the matrix-valued
//! completely monotone functions they generate, and two independent readings
//! of the minimal-dilation pairing: a residue/closed form and a line-integral
//! quadrature with a certified tail correction.

use crate::quad;
use crate::report::{hermitian_eigenvalues, hermitian_residual};
use crate::{C64, CMat, CVec};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DilationError {
    #[error("atom location {loc} is negative but the support is restricted to [0, ∞)")]
    NegativeLocation { loc: f64 },
    #[error("atom weight is not PSD (min eigenvalue {min_eig:e})")]
    WeightNotPsd { min_eig: f64 },
    #[error("atom weight is not hermitian (residual {residual:e})")]
    WeightNotHermitian { residual: f64 },
    #[error("atom weights have mixed dimensions")]
    MixedDimensions,
    #[error("empty atom list")]
    Empty,
    #[error("generator eigenvalue {h} is negative")]
    NegativeEigenvalue { h: f64 },
    #[error("coefficient vector length {got} does not match spectral dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("evaluation point has nonpositive real part: {z}")]
    NonpositiveRealPart { z: C64 },
}

/// Where the atom locations of a [`SpectralMeasure`] are allowed to live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportTag {
    Nonneg,
    Real,
}

/// Finite positive matrix-valued measure `Q = Σ_j δ_{λ_j} · W_j`.
#[derive(Debug, Clone)]
pub struct SpectralMeasure {
    atoms: Vec<(f64, CMat)>,
    support: SupportTag,
}

const WEIGHT_PSD_TOL: f64 = 1e-12;

impl SpectralMeasure {
    pub fn new(atoms: Vec<(f64, CMat)>, support: SupportTag) -> Result<Self, DilationError> {
        if atoms.is_empty() {
            return Err(DilationError::Empty);
        }
        let dim = atoms[0].1.nrows();
        for (loc, w) in &atoms {
            if support == SupportTag::Nonneg && *loc < 0.0 {
                return Err(DilationError::NegativeLocation { loc: *loc });
            }
            if w.nrows() != dim || w.ncols() != dim {
                return Err(DilationError::MixedDimensions);
            }
            let residual = hermitian_residual(w);
            if residual > 1e-10 {
                return Err(DilationError::WeightNotHermitian { residual });
            }
            let min_eig = hermitian_eigenvalues(w)[0];
            if min_eig < -WEIGHT_PSD_TOL {
                return Err(DilationError::WeightNotPsd { min_eig });
            }
        }
        Ok(Self { atoms, support })
    }

    /// Scalar shorthand: atoms `(λ_j, w_j)` with `w_j ≥ 0` become 1×1 weights.
    pub fn scalar(atoms: &[(f64, f64)], support: SupportTag) -> Result<Self, DilationError> {
        let atoms = atoms
            .iter()
            .map(|&(loc, w)| (loc, CMat::from_element(1, 1, C64::new(w, 0.0))))
            .collect();
        Self::new(atoms, support)
    }

    pub fn atoms(&self) -> &[(f64, CMat)] {
        &self.atoms
    }

    pub fn support(&self) -> SupportTag {
        self.support
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].1.nrows()
    }
}

/// Matrix value `φ(t) = Σ_j e^{-λ_j |t|} W_j` of the completely monotone
/// function generated by a positive spectral measure on `[0, ∞)`.
pub fn rp_function(q: &SpectralMeasure, t: f64) -> Result<CMat, DilationError> {
    // A REAL-tagged measure may still be evaluated if all its atoms happen to
    // be nonnegative; a genuinely negative location makes e^{-λ|t|} blow up.
    if let Some(&(loc, _)) = q.atoms.iter().find(|(loc, _)| *loc < 0.0) {
        return Err(DilationError::NegativeLocation { loc });
    }
    let d = q.dim();
    let mut out = CMat::zeros(d, d);
    for (loc, w) in &q.atoms {
        out += w * C64::new((-loc * t.abs()).exp(), 0.0);
    }
    Ok(out)
}

/// Diagonal model of a positive selfadjoint generator: the contraction
/// semigroup is `e^{-tH}` with `H = diag(h_i)`.
#[derive(Debug, Clone)]
pub struct HermitianSemigroup {
    eigs: Vec<f64>,
}

impl HermitianSemigroup {
    pub fn new(eigs: Vec<f64>) -> Result<Self, DilationError> {
        if eigs.is_empty() {
            return Err(DilationError::Empty);
        }
        if let Some(&h) = eigs.iter().find(|&&h| h < 0.0) {
            return Err(DilationError::NegativeEigenvalue { h });
        }
        Ok(Self { eigs })
    }

    pub fn eigs(&self) -> &[f64] {
        &self.eigs
    }

    pub fn dim(&self) -> usize {
        self.eigs.len()
    }

    /// Semigroup value `⟨ξ, e^{-tH} η⟩` in the diagonal model.
    pub fn pair(&self, xi: &CVec, eta: &CVec, t: f64) -> Result<C64, DilationError> {
        self.check_dims(xi, eta)?;
        let mut sum = C64::new(0.0, 0.0);
        for (i, &h) in self.eigs.iter().enumerate() {
            sum += xi[i].conj() * eta[i] * (-t.abs() * h).exp();
        }
        Ok(sum)
    }

    fn check_dims(&self, xi: &CVec, eta: &CVec) -> Result<(), DilationError> {
        for v in [xi, eta] {
            if v.len() != self.eigs.len() {
                return Err(DilationError::DimensionMismatch {
                    expected: self.eigs.len(),
                    got: v.len(),
                });
            }
        }
        Ok(())
    }
}

/// Result of [`dilation_pairing`]: the semigroup value and its independent
/// momentum-space reading.
#[derive(Debug, Clone)]
pub struct PairingValue {
    /// `Σ_i conj(ξ_i) η_i e^{-|t| h_i}` over all components.
    pub closed_form: C64,
    /// Line-integral value, restricted to components with `h_i > 0`.
    pub quadrature: C64,
    /// Closed form restricted to the same `h_i > 0` components, for a
    /// like-for-like discrepancy.
    pub closed_form_positive_part: C64,
    /// `|quadrature - closed_form_positive_part| / max(1, |closed_form_positive_part|)`.
    pub rel_discrepancy: f64,
    /// True when some `h_i = 0` component was excluded from the quadrature.
    pub zero_modes_skipped: bool,
}

/// Truncation point of the momentum integral; the remainder beyond it is
/// recovered exactly by rotating the contour into the decaying half-plane.
const MOMENTUM_CUTOFF: f64 = 1e3;

/// Evaluates `⟨ξ, e^{-|t|H} η⟩` two ways: the scalar closed form per
/// eigenvalue, and the integral `(1/π) ∫ e^{itp} Σ_i conj(ξ_i) η_i
/// h_i/(h_i² + p²) dp`, split as a panel rule on `|p| ≤ P` plus the two tails
/// evaluated after rotating the contour to `p = ±P + is`, where the factor
/// `e^{-|t|s}` makes the integrand non-oscillatory.
pub fn dilation_pairing(
    semigroup: &HermitianSemigroup,
    xi: &CVec,
    eta: &CVec,
    t: f64,
) -> Result<PairingValue, DilationError> {
    semigroup.check_dims(xi, eta)?;
    let closed_form = semigroup.pair(xi, eta, t)?;
    let t = t.abs();
    let p_max = MOMENTUM_CUTOFF;

    let mut quadrature = C64::new(0.0, 0.0);
    let mut closed_pos = C64::new(0.0, 0.0);
    let mut skipped = false;
    for (i, &h) in semigroup.eigs.iter().enumerate() {
        let coeff = xi[i].conj() * eta[i];
        if h == 0.0 {
            skipped = true;
            continue;
        }
        closed_pos += coeff * (-t * h).exp();

        // Central part. Panels must resolve both the Lorentzian peak of
        // width h at p = 0 and the oscillation of wavelength 2π/t.
        let width = (0.5 * h.min(1.0)).min(1.0 / (1.0 + t));
        let panels = ((2.0 * p_max / width).ceil() as usize).clamp(16, 100_000);
        let central = quad::integrate_c(
            |p| C64::new(0.0, t * p).exp() * (h / (h * h + p * p)),
            -p_max,
            p_max,
            panels,
            12,
        );

        // Tails: ∫_P^∞ + ∫_{-∞}^{-P} = 2 Re( i e^{itP} ∫_0^∞ e^{-ts} f(P+is) ds ).
        let tail_half = quad::integrate_half_line_c(
            |s| {
                let p = C64::new(p_max, s);
                C64::new(-t * s, 0.0).exp() * C64::new(h, 0.0) / (p * p + h * h)
            },
            128,
            32,
        );
        let rotated = C64::new(0.0, 1.0) * C64::new(0.0, t * p_max).exp() * tail_half;
        let tails = C64::new(2.0 * rotated.re, 0.0);

        quadrature += coeff * (central + tails) / std::f64::consts::PI;
    }
    let rel_discrepancy = (quadrature - closed_pos).norm() / closed_pos.norm().max(1.0);
    Ok(PairingValue {
        closed_form,
        quadrature,
        closed_form_positive_part: closed_pos,
        rel_discrepancy,
        zero_modes_skipped: skipped,
    })
}

/// Result of [`hardy_twisted_inner`].
#[derive(Debug, Clone)]
pub struct HardyInner {
    /// `4π Σ_i conj(ξ_i) η_i h_i / ((h_i + z)(h_i + w̄))`.
    pub residue_value: C64,
    /// Direct line integral of the twisted Hardy-space pairing.
    pub quadrature_value: C64,
    pub rel_discrepancy: f64,
}

/// Twisted inner product of two reproducing elements of the half-plane Hardy
/// space, where the twist is the inner symbol `(h - ip)/(h + ip)` per
/// eigenvalue. Evaluated both by residues (all poles in one half-plane) and
/// by direct quadrature of
/// `∫ Σ_i conj(ξ_i) η_i ((h_i - ip)/(h_i + ip)) / ((z - ip)(w̄ - ip)) dp`.
pub fn hardy_twisted_inner(
    semigroup: &HermitianSemigroup,
    z: C64,
    w: C64,
    xi: &CVec,
    eta: &CVec,
) -> Result<HardyInner, DilationError> {
    semigroup.check_dims(xi, eta)?;
    for point in [z, w] {
        if point.re <= 0.0 {
            return Err(DilationError::NonpositiveRealPart { z: point });
        }
    }
    if let Some(&h) = semigroup.eigs.iter().find(|&&h| h <= 0.0) {
        return Err(DilationError::NegativeEigenvalue { h });
    }

    let four_pi = 4.0 * std::f64::consts::PI;
    let mut residue_value = C64::new(0.0, 0.0);
    for (i, &h) in semigroup.eigs.iter().enumerate() {
        residue_value +=
            xi[i].conj() * eta[i] * C64::new(four_pi * h, 0.0) / ((h + z) * (h + w.conj()));
    }

    let wbar = w.conj();
    let quadrature_value = quad::integrate_real_line_c(
        |p| {
            let ip = C64::new(0.0, p);
            let mut sum = C64::new(0.0, 0.0);
            for (i, &h) in semigroup.eigs.iter().enumerate() {
                sum += xi[i].conj() * eta[i] * ((h - ip) / (h + ip));
            }
            sum / ((z - ip) * (wbar - ip))
        },
        64,
        32,
    );
    let rel_discrepancy =
        (quadrature_value - residue_value).norm() / residue_value.norm().max(1.0);
    Ok(HardyInner {
        residue_value,
        quadrature_value,
        rel_discrepancy,
    })
}

/// Scalar spectral model of the time-translation generator: the absolutely
/// continuous density of the associated measure on the line, the weight of the
/// fixed-point atom, and Cesàro averages of the generated function.
#[derive(Debug, Clone)]
pub struct SpectralProjection {
    /// Atoms `(λ_j, w_j)` with scalar weights (matrix weights enter via trace).
    atoms: Vec<(f64, f64)>,
}

impl SpectralProjection {
    /// Density `x ↦ (1/π) Σ_{λ_j > 0} w_j λ_j / (λ_j² + x²)`; the atom at 0
    /// stays a point mass and is excluded here.
    pub fn nu_density(&self, x: f64) -> f64 {
        let mut sum = 0.0;
        for &(loc, w) in &self.atoms {
            if loc > 0.0 {
                sum += w * loc / (loc * loc + x * x);
            }
        }
        sum / std::f64::consts::PI
    }

    /// `lim_{T→∞} (1/T) ∫_0^T φ(t) dt`, in closed form the weight at 0.
    pub fn ergodic_limit(&self) -> f64 {
        self.atoms
            .iter()
            .filter(|(loc, _)| *loc == 0.0)
            .map(|(_, w)| w)
            .sum()
    }

    /// `φ(t) = Σ_j w_j e^{-λ_j |t|}`.
    pub fn phi(&self, t: f64) -> f64 {
        self.atoms
            .iter()
            .map(|&(loc, w)| w * (-loc * t.abs()).exp())
            .sum()
    }

    /// Exact finite-horizon Cesàro average `(1/T) ∫_0^T φ(t) dt`.
    pub fn cesaro_average(&self, horizon: f64) -> f64 {
        let mut sum = 0.0;
        for &(loc, w) in &self.atoms {
            if loc == 0.0 {
                sum += w;
            } else {
                sum += w * (1.0 - (-loc * horizon).exp()) / (loc * horizon);
            }
        }
        sum
    }
}

/// Builds the spectral model from a positive measure on `[0, ∞)`. Matrix
/// weights contribute through their (real, nonnegative) trace.
pub fn spectral_projection_model(
    rho: &SpectralMeasure,
) -> Result<SpectralProjection, DilationError> {
    if let Some(&(loc, _)) = rho.atoms.iter().find(|(loc, _)| *loc < 0.0) {
        return Err(DilationError::NegativeLocation { loc });
    }
    let atoms = rho
        .atoms
        .iter()
        .map(|(loc, w)| (*loc, w.trace().re))
        .collect();
    Ok(SpectralProjection { atoms })
}

//! Hypergeometric special functions, conformal sphere/ball geometry, and the
//! sphere kernel family with its exact positivity window.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::quad;
use crate::{RMat, C64};

#[derive(Debug, Error)]
pub enum SphereError {
    #[error("hypergeometric c parameter is a nonpositive integer")]
    BadC,
    #[error("hypergeometric series did not converge within {cap} terms at x = {x}")]
    NonConvergent { cap: usize, x: f64 },
    #[error("conformal factor J(g, x) vanishes at this point")]
    SingularPoint,
    #[error("matrix is not in O(1, n+1)^: residual {residual:e}")]
    NotConformal { residual: f64 },
    #[error("stereographic inverse undefined at the antipode -e0")]
    Antipode,
    #[error("kernel singular at coincident points")]
    CoincidentPoints,
    #[error("point lies outside the open unit ball")]
    OutOfBall,
    #[error("hypergeometric argument {arg} lies on the cut [1, inf)")]
    ArgumentOnCut { arg: f64 },
    #[error("constant integral diverges for lambda <= 0")]
    Nonintegrable,
    #[error("input is not a unit vector (norm deviation {residual:e})")]
    NotUnit { residual: f64 },
}

// ---------------------------------------------------------------------------
// Gamma function (Lanczos, g = 7, 9 coefficients)
// ---------------------------------------------------------------------------

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for complex argument (Lanczos approximation with the
/// reflection formula for Re z < 1/2); relative accuracy better than 1e-13
/// on the real interval (0, 30).
pub fn gamma_c(z: C64) -> C64 {
    let pi = std::f64::consts::PI;
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let s = (C64::new(pi, 0.0) * z).sin();
        return C64::new(pi, 0.0) / (s * gamma_c(C64::new(1.0, 0.0) - z));
    }
    let z = z - C64::new(1.0, 0.0);
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += C64::new(c, 0.0) / (z + C64::new(i as f64, 0.0));
    }
    let t = z + C64::new(LANCZOS_G + 0.5, 0.0);
    let sqrt_two_pi = (2.0 * pi).sqrt();
    C64::new(sqrt_two_pi, 0.0) * t.powc(z + C64::new(0.5, 0.0)) * (-t).exp() * x
}

/// Real-argument gamma.
pub fn gamma(x: f64) -> f64 {
    gamma_c(C64::new(x, 0.0)).re
}

/// Residual of the Legendre duplication formula
/// `√π Γ(2z) = 2^{2z-1} Γ(z) Γ(z + 1/2)`, relative.
pub fn duplication_residual(z: f64) -> f64 {
    let lhs = std::f64::consts::PI.sqrt() * gamma(2.0 * z);
    let rhs = 2f64.powf(2.0 * z - 1.0) * gamma(z) * gamma(z + 0.5);
    (lhs - rhs).abs() / lhs.abs().max(1.0)
}

// ---------------------------------------------------------------------------
// Gauss hypergeometric function
// ---------------------------------------------------------------------------

/// Parameters of the Gauss hypergeometric series `₂F₁(a, b; c; ·)`.
#[derive(Debug, Clone, Copy)]
pub struct HypParams {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

const HYP_CAP: usize = 10_000;

fn is_nonpositive_integer(z: C64) -> bool {
    z.im.abs() < 1e-12 && z.re <= 1e-12 && (z.re - z.re.round()).abs() < 1e-12
}

fn is_near_integer(z: C64, slack: f64) -> bool {
    z.im.abs() < slack && (z.re - z.re.round()).abs() < slack
}

/// Plain power series, valid for |x| < 1.
fn hyp_series(p: HypParams, x: f64) -> Result<C64, SphereError> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..HYP_CAP {
        let kf = k as f64;
        let ratio = (p.a + C64::new(kf, 0.0)) * (p.b + C64::new(kf, 0.0))
            / ((p.c + C64::new(kf, 0.0)) * C64::new(kf + 1.0, 0.0));
        term *= ratio * C64::new(x, 0.0);
        sum += term;
        if term.norm() < 1e-16 * (1.0 + sum.norm()) {
            return Ok(sum);
        }
    }
    Err(SphereError::NonConvergent { cap: HYP_CAP, x })
}

/// Gauss hypergeometric function for real argument `x < 1`.
///
/// Strategy: plain series for |x| ≤ 1/2; Pfaff transformation `x ↦ x/(x-1)`
/// for x < -1/2; the connection formula at 1 for 1/2 < x < 1 when `c - a - b`
/// is not close to an integer, otherwise the (slower but convergent) plain
/// series. Terminating (polynomial) cases go straight to the series.
pub fn hyp2f1(p: HypParams, x: f64) -> Result<C64, SphereError> {
    if is_nonpositive_integer(p.c) {
        return Err(SphereError::BadC);
    }
    if x >= 1.0 {
        return Err(SphereError::ArgumentOnCut { arg: x });
    }
    // Polynomial cases terminate; no transformation needed.
    if is_nonpositive_integer(p.a) || is_nonpositive_integer(p.b) {
        return hyp_series(p, x);
    }
    if x.abs() <= 0.5 {
        return hyp_series(p, x);
    }
    if x < -0.5 {
        // Pfaff: F(a,b;c;x) = (1-x)^{-a} F(a, c-b; c; x/(x-1)).
        let y = x / (x - 1.0);
        let prefac = (C64::new(-p.a.re, -p.a.im) * C64::new((1.0 - x).ln(), 0.0)).exp();
        let q = HypParams { a: p.a, b: p.c - p.b, c: p.c };
        return Ok(prefac * hyp2f1(q, y)?);
    }
    // 1/2 < x < 1.
    let cab = p.c - p.a - p.b;
    if is_near_integer(cab, 0.05)
        || is_nonpositive_integer(p.c - p.a)
        || is_nonpositive_integer(p.c - p.b)
    {
        // Degenerate connection coefficients; the plain series still
        // converges for x < 1 (guarded by the term cap).
        return hyp_series(p, x);
    }
    let y = 1.0 - x;
    let t1 = gamma_c(p.c) * gamma_c(cab) / (gamma_c(p.c - p.a) * gamma_c(p.c - p.b))
        * hyp_series(HypParams { a: p.a, b: p.b, c: p.a + p.b - p.c + C64::new(1.0, 0.0) }, y)?;
    let t2 = gamma_c(p.c) * gamma_c(-cab) / (gamma_c(p.a) * gamma_c(p.b))
        * (cab * C64::new(y.ln(), 0.0)).exp()
        * hyp_series(
            HypParams { a: p.c - p.a, b: p.c - p.b, c: cab + C64::new(1.0, 0.0) },
            y,
        )?;
    Ok(t1 + t2)
}

/// Independent second evaluation path via the Euler transformation
/// `F(a,b;c;x) = (1-x)^{c-a-b} F(c-a, c-b; c; x)`; used as a cross-check
/// oracle. Returns `(primary, alternate)`.
pub fn hyp2f1_dual(p: HypParams, x: f64) -> Result<(C64, C64), SphereError> {
    let primary = hyp2f1(p, x)?;
    let cab = p.c - p.a - p.b;
    let q = HypParams { a: p.c - p.a, b: p.c - p.b, c: p.c };
    let prefac = (cab * C64::new((1.0 - x).ln(), 0.0)).exp();
    let alternate = prefac * hyp2f1(q, x)?;
    Ok((primary, alternate))
}

// ---------------------------------------------------------------------------
// Conformal geometry of the sphere
// ---------------------------------------------------------------------------

/// An element of the orthochronous Lorentz group O(1, n+1)^, acting
/// conformally on the unit sphere Sⁿ ⊂ ℝ^{n+1}.
#[derive(Debug, Clone)]
pub struct ConformalElement {
    pub g: RMat,
}

impl ConformalElement {
    /// Validates `gᵀ η g = η` for `η = diag(1, -1, …, -1)` and time
    /// orientation `g₀₀ ≥ 1`.
    pub fn new(g: RMat) -> Result<Self, SphereError> {
        let m = g.nrows();
        assert_eq!(g.ncols(), m, "conformal element must be square");
        let eta = RMat::from_fn(m, m, |i, j| {
            if i == j {
                if i == 0 { 1.0 } else { -1.0 }
            } else {
                0.0
            }
        });
        let residual = (g.transpose() * &eta * &g - &eta).norm();
        if residual > 1e-10 {
            return Err(SphereError::NotConformal { residual });
        }
        if g[(0, 0)] < 1.0 - 1e-10 {
            return Err(SphereError::NotConformal { residual: 1.0 - g[(0, 0)] });
        }
        Ok(ConformalElement { g })
    }

    /// Sphere dimension n (the matrix is (n+2)×(n+2)).
    pub fn n(&self) -> usize {
        self.g.nrows() - 2
    }

    /// The boost along the distinguished axis with rapidity `t`.
    pub fn boost(n: usize, t: f64) -> Self {
        let m = n + 2;
        let mut g = RMat::identity(m, m);
        g[(0, 0)] = t.cosh();
        g[(0, 1)] = t.sinh();
        g[(1, 0)] = t.sinh();
        g[(1, 1)] = t.cosh();
        ConformalElement { g }
    }

    /// Embeds a rotation of ℝ^{n+1} (an orthogonal (n+1)×(n+1) block) as the
    /// stabiliser of the time direction.
    pub fn rotation(r: &RMat) -> Self {
        let m = r.nrows() + 1;
        let mut g = RMat::identity(m, m);
        for i in 0..r.nrows() {
            for j in 0..r.ncols() {
                g[(1 + i, 1 + j)] = r[(i, j)];
            }
        }
        ConformalElement { g }
    }

    /// Group product.
    pub fn compose(&self, other: &Self) -> Self {
        ConformalElement { g: &self.g * &other.g }
    }
}

/// Conformal action on a unit vector: returns `(g.x, J(g, x))` with
/// `J(g, x) = a + ⟨b, x⟩` from the block decomposition of `g` and
/// `g.x = J⁻¹ (c + d x)`.
pub fn conformal_action(g: &ConformalElement, x: &[f64]) -> Result<(Vec<f64>, f64), SphereError> {
    let n1 = x.len(); // n + 1
    assert_eq!(g.g.nrows(), n1 + 1, "dimension mismatch");
    let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(SphereError::NotUnit { residual: (norm - 1.0).abs() });
    }
    let mut j = g.g[(0, 0)];
    for (k, xv) in x.iter().enumerate() {
        j += g.g[(0, 1 + k)] * xv;
    }
    if j.abs() < 1e-12 {
        return Err(SphereError::SingularPoint);
    }
    let mut out = vec![0.0; n1];
    for (i, o) in out.iter_mut().enumerate() {
        let mut v = g.g[(1 + i, 0)];
        for (k, xv) in x.iter().enumerate() {
            v += g.g[(1 + i, 1 + k)] * xv;
        }
        *o = v / j;
    }
    Ok((out, j))
}

// ---------------------------------------------------------------------------
// Stereographic chart
// ---------------------------------------------------------------------------

/// Stereographic parametrization of the sphere by ℝⁿ:
/// `x ↦ ((1-‖x‖²)/(1+‖x‖²), 2x/(1+‖x‖²))`.
pub fn stereographic(x: &[f64]) -> Vec<f64> {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let denom = 1.0 + r2;
    let mut out = Vec::with_capacity(x.len() + 1);
    out.push((1.0 - r2) / denom);
    out.extend(x.iter().map(|v| 2.0 * v / denom));
    out
}

/// Inverse chart `(y₀, ȳ) ↦ ȳ/(1 + y₀)`; undefined at the antipode `-e₀`.
pub fn stereographic_inverse(y: &[f64]) -> Result<Vec<f64>, SphereError> {
    let y0 = y[0];
    if (y0 + 1.0).abs() < 1e-14 {
        return Err(SphereError::Antipode);
    }
    Ok(y[1..].iter().map(|v| v / (1.0 + y0)).collect())
}

/// The inversion `σ(x) = x/‖x‖²`, the chart conjugate of the reflection
/// flipping the distinguished sphere coordinate.
pub fn sigma_inversion(x: &[f64]) -> Vec<f64> {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    x.iter().map(|v| v / r2).collect()
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

/// Which printed form of the ball kernel to use; the two differ in the
/// coefficient of `⟨x, y⟩` and only the factor-2 form arises from
/// `‖x‖²‖σ(x) - y‖²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum RVariant {
    #[default]
    #[serde(rename = "factor2")]
    Factor2,
    #[serde(rename = "factor1")]
    Factor1,
}

/// Sphere kernel `Q_λ(u, v) = (1 - ⟨u, v⟩)^{λ - n/2}` on unit vectors.
pub fn q_lambda(lambda: f64, n: usize, u: &[f64], v: &[f64]) -> Result<f64, SphereError> {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let base = 1.0 - dot;
    let expo = lambda - n as f64 / 2.0;
    if base < 1e-14 {
        if expo < 0.0 {
            return Err(SphereError::CoincidentPoints);
        }
        return Ok(if expo == 0.0 { 1.0 } else { 0.0 });
    }
    Ok(base.powf(expo))
}

/// Ball kernel `R_λ(x, y) = (1 - 2⟨x,y⟩ + ‖x‖²‖y‖²)^{λ - n/2}` (factor-2
/// variant) or with a single `⟨x, y⟩` (factor-1 variant), on the open unit
/// ball of ℝⁿ.
pub fn r_lambda(
    lambda: f64,
    n: usize,
    variant: RVariant,
    x: &[f64],
    y: &[f64],
) -> Result<f64, SphereError> {
    let nx: f64 = x.iter().map(|v| v * v).sum();
    let ny: f64 = y.iter().map(|v| v * v).sum();
    if nx >= 1.0 || ny >= 1.0 {
        return Err(SphereError::OutOfBall);
    }
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let factor = match variant {
        RVariant::Factor2 => 2.0,
        RVariant::Factor1 => 1.0,
    };
    let base = 1.0 - factor * dot + nx * ny;
    let expo = lambda - n as f64 / 2.0;
    if base < 1e-14 {
        return Err(SphereError::CoincidentPoints);
    }
    Ok(base.powf(expo))
}

/// Spectral parameter from the mass: `λ = √(((n-1)/2)² - m²)`, real below the
/// threshold mass and purely imaginary above it.
pub fn lambda_from_mass(m: f64, n: usize) -> C64 {
    let half = (n as f64 - 1.0) / 2.0;
    let disc = half * half - m * m;
    if disc >= 0.0 {
        C64::new(disc.sqrt(), 0.0)
    } else {
        C64::new(0.0, (-disc).sqrt())
    }
}

/// Mass-deformed sphere kernel on the closed half-sphere:
/// `Ψ_m(x, y) = ₂F₁((n-1)/2 + λ, (n-1)/2 - λ; n/2; (1 - [x, σ_V(y)])/2)`
/// with `[x, σ_V(y)] = x₀y₀ - Σ_{j≥1} x_j y_j` for real points, `λ` from
/// [`lambda_from_mass`] and normalization fixed to 1. Hermitian and real on
/// real points because the parameters come in a conjugate pair.
pub fn psi_kernel(m: f64, n: usize, x: &[f64], y: &[f64]) -> Result<C64, SphereError> {
    assert_eq!(x.len(), n + 1);
    assert_eq!(y.len(), n + 1);
    for p in [x, y] {
        let norm: f64 = p.iter().map(|v| v * v).sum::<f64>();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SphereError::NotUnit { residual: (norm - 1.0).abs() });
        }
    }
    let mut pairing = x[0] * y[0];
    for j in 1..=n {
        pairing -= x[j] * y[j];
    }
    let arg = (1.0 - pairing) / 2.0;
    if arg >= 1.0 - 1e-12 {
        return Err(SphereError::ArgumentOnCut { arg });
    }
    let lambda = lambda_from_mass(m, n);
    let half = C64::new((n as f64 - 1.0) / 2.0, 0.0);
    let p = HypParams {
        a: half + lambda,
        b: half - lambda,
        c: C64::new(n as f64 / 2.0, 0.0),
    };
    hyp2f1(p, arg)
}

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

/// The closed-form constants of the spherical kernel normalization together
/// with an independent quadrature cross-check.
#[derive(Debug, Clone)]
pub struct SphereConstants {
    /// `c_n = Γ((n+1)/2) / (√π Γ(n/2))`.
    pub c_n: f64,
    /// `d_{λ,n} = 2^{λ+n/2-1} Γ((n+1)/2) Γ(λ) / (√π Γ(λ + n/2))`.
    pub d_lambda_n: f64,
    /// `c_n ∫₋₁¹ (1-r)^{λ-n/2} (1-r²)^{n/2-1} dr` by quadrature.
    pub quadrature: f64,
    /// Relative deviation of the quadrature from the closed form.
    pub rel_err: f64,
}

/// Integral of `(1-r)^{e1} (1+r)^{e2} h(r)` over `[lo, hi] ⊆ [-1, 1]` with
/// power substitutions absorbing the endpoint singularities (`e1, e2 > -1`).
fn beta_type_integral(e1: f64, e2: f64) -> f64 {
    // Split at 0; substitute 1 - r = u^{1/(1+e1)} on [0, 1] and
    // 1 + r = u^{1/(1+e2)} on [-1, 0].
    let q1 = 1.0 / (1.0 + e1);
    let upper = quad::integrate(
        |u| {
            let one_minus_r = u.powf(q1);
            let r = 1.0 - one_minus_r;
            q1 * u.powf(q1 * (e1 + 1.0) - 1.0) * (1.0 + r).powf(e2)
        },
        0.0,
        1.0,
        64,
        32,
    );
    let q2 = 1.0 / (1.0 + e2);
    let lower = quad::integrate(
        |u| {
            let one_plus_r = u.powf(q2);
            let r = one_plus_r - 1.0;
            q2 * u.powf(q2 * (e2 + 1.0) - 1.0) * (1.0 - r).powf(e1)
        },
        0.0,
        1.0,
        64,
        32,
    );
    upper + lower
}

/// Closed-form constants with the 1-d quadrature cross-check of the
/// invariant-integral formula.
pub fn sphere_constants(lambda: f64, n: usize) -> Result<SphereConstants, SphereError> {
    if lambda <= 0.0 {
        return Err(SphereError::Nonintegrable);
    }
    let nf = n as f64;
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let c_n = gamma((nf + 1.0) / 2.0) / (sqrt_pi * gamma(nf / 2.0));
    let d_lambda_n =
        2f64.powf(lambda + nf / 2.0 - 1.0) * gamma((nf + 1.0) / 2.0) * gamma(lambda)
            / (sqrt_pi * gamma(lambda + nf / 2.0));
    // (1-r)^{λ-n/2} (1-r²)^{n/2-1} = (1-r)^{λ-1} (1+r)^{n/2-1}.
    let quadrature = c_n * beta_type_integral(lambda - 1.0, nf / 2.0 - 1.0);
    let rel_err = (quadrature - d_lambda_n).abs() / d_lambda_n.abs();
    Ok(SphereConstants { c_n, d_lambda_n, quadrature, rel_err })
}

/// Residual of the Beta identity
/// `∫₋₁¹ (1-r)^{z-1} (1-r²)^{w-1} dr = 2^{2w+z-2} B(w, w+z-1)`, relative.
pub fn beta_identity_residual(z: f64, w: f64) -> f64 {
    let lhs = beta_type_integral(z - 1.0 + (w - 1.0), w - 1.0);
    // (1-r)^{z-1}(1-r²)^{w-1} = (1-r)^{z+w-2} (1+r)^{w-1}.
    let beta = gamma(w) * gamma(w + z - 1.0) / gamma(2.0 * w + z - 1.0);
    let rhs = 2f64.powf(2.0 * w + z - 2.0) * beta;
    (lhs - rhs).abs() / rhs.abs().max(1.0)
}

// ---------------------------------------------------------------------------
// Deterministic samplers
// ---------------------------------------------------------------------------

/// Deterministic well-separated point sets for Gram assembly.
pub mod sampling {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use rand_distr::StandardNormal;

    fn angle(u: &[f64], v: &[f64]) -> f64 {
        let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
        dot.clamp(-1.0, 1.0).acos()
    }

    /// Seeded points on the open half-sphere `x₀ > margin` of Sⁿ ⊂ ℝ^{n+1},
    /// thinned to a minimum pairwise angle.
    pub fn half_sphere_points(n: usize, count: usize, seed: u64, min_angle: f64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut points: Vec<Vec<f64>> = Vec::new();
        let mut attempts = 0usize;
        while points.len() < count && attempts < 100_000 {
            attempts += 1;
            let mut p: Vec<f64> = (0..=n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let norm: f64 = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            for v in &mut p {
                *v /= norm;
            }
            if p[0] < 0.15 {
                continue;
            }
            if points.iter().all(|q| angle(q, &p) > min_angle) {
                points.push(p);
            }
        }
        assert_eq!(points.len(), count, "could not place {count} separated half-sphere points");
        points
    }

    /// Seeded well-separated points in the ball of radius `max_radius` in ℝⁿ.
    pub fn ball_points(
        n: usize,
        count: usize,
        seed: u64,
        max_radius: f64,
        min_dist: f64,
    ) -> Vec<Vec<f64>> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut points: Vec<Vec<f64>> = Vec::new();
        let mut attempts = 0usize;
        while points.len() < count && attempts < 100_000 {
            attempts += 1;
            let p: Vec<f64> = (0..n).map(|_| rng.random_range(-max_radius..max_radius)).collect();
            let norm: f64 = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > max_radius {
                continue;
            }
            let far = points.iter().all(|q: &Vec<f64>| {
                let d2: f64 = q.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum();
                d2.sqrt() > min_dist
            });
            if far {
                points.push(p);
            }
        }
        assert_eq!(points.len(), count, "could not place {count} separated ball points");
        points
    }

    /// Seeded random rotation of ℝᵐ (orthogonal with determinant +1).
    pub fn random_rotation(m: usize, rng: &mut ChaCha12Rng) -> nalgebra::DMatrix<f64> {
        let g = nalgebra::DMatrix::from_fn(m, m, |_, _| rng.sample::<f64, _>(StandardNormal));
        let qr = g.qr();
        let mut q = qr.q();
        // Fix determinant sign so the block is a rotation.
        if q.determinant() < 0.0 {
            for i in 0..m {
                q[(i, 0)] = -q[(i, 0)];
            }
        }
        q
    }
}

pub use sampling::{ball_points, half_sphere_points};

/// Convenience: hermitian Gram of the Ψ kernel on half-sphere points.
pub fn psi_gram(m: f64, n: usize, points: &[Vec<f64>]) -> Result<DMatrix<C64>, SphereError> {
    let k = points.len();
    let mut gram = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = psi_kernel(m, n, &points[i], &points[j])?;
        }
    }
    Ok(gram)
}

//! Positive-definite kernel engine: the closed-form kernel catalog with its
//! reflection geometries, Gram assembly, reflected Grams, and interval
//! positivity checks.

use thiserror::Error;

use crate::report::{GramReport, ReportError};
use crate::sphere::{self, RVariant};
use crate::{quad, CMat, C64};

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("point outside the kernel domain: {0}")]
    DomainViolation(String),
    #[error("coincident points {i} and {j} for a kernel singular on the diagonal")]
    CoincidentPoints { i: usize, j: usize },
    #[error("gram matrix not hermitian")]
    NotHermitian(#[from] ReportError),
    #[error("spectral measure has a negative weight {w}")]
    MeasureNotPositive { w: f64 },
    #[error("invalid kernel parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Sphere(#[from] sphere::SphereError),
}

/// A reflection geometry `(X, X₊, τ)`: the ambient space, the involution, and
/// the positive region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReflectionGeometry {
    /// `ℝ` with `τx = -x`, `X₊ = (0, ∞)`.
    Line,
    /// `(-a, a)` with `τx = -x`, `X₊ = (0, a)`.
    Interval { a: f64 },
    /// Circle of circumference `β` with `τx = -x (mod β)`, `X₊ = (0, β/2)`.
    Circle { beta: f64 },
    /// `ℝᵈ` with `τ(x₀, x̄) = (-x₀, x̄)`, `X₊ = {x₀ > 0}`.
    HalfSpace { d: usize },
    /// Sphere `Sⁿ ⊂ ℝ^{n+1}` (or the unit ball chart) with `τ` flipping the
    /// distinguished coordinate; `X₊` the open half with positive first
    /// coordinate.
    HalfBall { n: usize },
}

impl ReflectionGeometry {
    /// Applies the involution `τ`.
    pub fn tau(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ReflectionGeometry::Line | ReflectionGeometry::Interval { .. } => {
                vec![-x[0]]
            }
            ReflectionGeometry::Circle { beta } => {
                vec![(-x[0]).rem_euclid(*beta)]
            }
            ReflectionGeometry::HalfSpace { .. } | ReflectionGeometry::HalfBall { .. } => {
                let mut y = x.to_vec();
                y[0] = -y[0];
                y
            }
        }
    }

    /// Whether the point lies in the open positive region `X₊`.
    pub fn in_plus(&self, x: &[f64]) -> bool {
        match self {
            ReflectionGeometry::Line => x[0] > 0.0,
            ReflectionGeometry::Interval { a } => x[0] > 0.0 && x[0] < *a,
            ReflectionGeometry::Circle { beta } => x[0] > 0.0 && x[0] < beta / 2.0,
            ReflectionGeometry::HalfSpace { .. } | ReflectionGeometry::HalfBall { .. } => {
                x[0] > 0.0
            }
        }
    }
}

/// The closed-form kernel catalog.
#[derive(Debug, Clone)]
pub enum KernelSpec {
    /// `K(x, y) = e^{-λ|x - y|}` on ℝ.
    ExpLine { lambda: f64 },
    /// The β-periodic Green kernel `K(x, y) = φ_λ((x - y) mod β)` with
    /// `φ_λ(u) = e^{-λu} + e^{-λ(β - u)}` for `0 ≤ u ≤ β`.
    PeriodicGreen { lambda: f64, beta: f64 },
    /// `K(x, y) = ‖x - y‖^{-a}` on ℝᵈ, `0 ≤ a < d`.
    PowerLaw { a: f64, d: usize },
    /// `Q_λ(u, v) = (1 - ⟨u, v⟩)^{λ - n/2}` on Sⁿ ⊂ ℝ^{n+1}.
    SphereQ { lambda: f64, n: usize },
    /// `R_λ` on the open unit ball of ℝⁿ (two printed variants).
    SphereR { lambda: f64, n: usize, variant: RVariant },
    /// The mass-deformed hypergeometric sphere kernel on the half-sphere.
    HypPsi { m: f64, n: usize },
    /// Exact sample table; "points" are row/column indices.
    Custom { samples: CMat },
}

impl KernelSpec {
    fn validate(&self) -> Result<(), KernelError> {
        match self {
            KernelSpec::ExpLine { lambda } if *lambda < 0.0 => {
                Err(KernelError::BadParams(format!("lambda = {lambda} < 0")))
            }
            KernelSpec::PeriodicGreen { beta, .. } if *beta <= 0.0 => {
                Err(KernelError::BadParams(format!("beta = {beta} <= 0")))
            }
            KernelSpec::PowerLaw { a, d } if *a < 0.0 || *a >= *d as f64 => Err(
                KernelError::BadParams(format!("power-law exponent a = {a} outside [0, d = {d})")),
            ),
            KernelSpec::SphereQ { n, .. } | KernelSpec::SphereR { n, .. } if *n < 1 => {
                Err(KernelError::BadParams("sphere dimension must be >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Kernel evaluation at a pair of points. `idx` is only used to report
    /// which pair was coincident.
    fn eval(&self, x: &[f64], y: &[f64], idx: (usize, usize)) -> Result<C64, KernelError> {
        let re = |v: f64| C64::new(v, 0.0);
        match self {
            KernelSpec::ExpLine { lambda } => Ok(re((-lambda * (x[0] - y[0]).abs()).exp())),
            KernelSpec::PeriodicGreen { lambda, beta } => {
                let u = (x[0] - y[0]).rem_euclid(*beta);
                Ok(re((-lambda * u).exp() + (-lambda * (beta - u)).exp()))
            }
            KernelSpec::PowerLaw { a, d } => {
                if x.len() != *d || y.len() != *d {
                    return Err(KernelError::DomainViolation(format!(
                        "expected points of dimension {d}"
                    )));
                }
                let dist: f64 =
                    x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
                if dist < 1e-12 {
                    if *a == 0.0 {
                        return Ok(re(1.0));
                    }
                    return Err(KernelError::CoincidentPoints { i: idx.0, j: idx.1 });
                }
                Ok(re(dist.powf(-a)))
            }
            KernelSpec::SphereQ { lambda, n } => {
                let v = sphere::q_lambda(*lambda, *n, x, y).map_err(|e| match e {
                    sphere::SphereError::CoincidentPoints => {
                        KernelError::CoincidentPoints { i: idx.0, j: idx.1 }
                    }
                    other => KernelError::Sphere(other),
                })?;
                Ok(re(v))
            }
            KernelSpec::SphereR { lambda, n, variant } => {
                Ok(re(sphere::r_lambda(*lambda, *n, *variant, x, y)?))
            }
            KernelSpec::HypPsi { m, n } => Ok(sphere::psi_kernel(*m, *n, x, y)?),
            KernelSpec::Custom { samples } => Ok(samples[(idx.0, idx.1)]),
        }
    }
}

/// Gram matrix `G[i][j] = K(x_i, x_j)`.
pub fn gram(kernel: &KernelSpec, points: &[Vec<f64>]) -> Result<CMat, KernelError> {
    kernel.validate()?;
    let k = points.len();
    let mut g = CMat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = kernel.eval(&points[i], &points[j], (i, j))?;
        }
    }
    Ok(g)
}

/// Reflected Gram `G[i][j] = K(x_i, τ x_j)` for points in `X₊`.
pub fn reflected_gram(
    kernel: &KernelSpec,
    geometry: &ReflectionGeometry,
    points: &[Vec<f64>],
) -> Result<CMat, KernelError> {
    kernel.validate()?;
    for (i, p) in points.iter().enumerate() {
        if !geometry.in_plus(p) {
            return Err(KernelError::DomainViolation(format!(
                "point {i} is not in the positive region"
            )));
        }
    }
    let k = points.len();
    let mut g = CMat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let ty = geometry.tau(&points[j]);
            g[(i, j)] = kernel.eval(&points[i], &ty, (i, j))?;
        }
    }
    Ok(g)
}

/// PSD verdict via full hermitian eigendecomposition.
pub fn psd_verdict(matrix: &CMat, tol: f64) -> Result<GramReport, KernelError> {
    Ok(GramReport::from_matrix(matrix, tol)?)
}

/// Closed-form vs quadrature Fourier coefficients of the periodic Green
/// kernel: `c_n = 2βλ(1 - e^{-βλ}) / ((λβ)² + (2πn)²)` against the composite
/// Gauss–Legendre evaluation of `(1/β)∫₀^β φ_λ(x) e^{-2πinx/β} dx`.
#[derive(Debug, Clone)]
pub struct PeriodicFourier {
    /// `c_n` for `n = 0..=n_max` (the coefficients are even in `n`).
    pub closed_form: Vec<f64>,
    pub quadrature: Vec<f64>,
    pub max_rel_err: f64,
    /// Number of quadrature nodes used (recorded for reproducibility).
    pub quad_nodes: usize,
}

pub fn periodic_fourier_coefficients(
    lambda: f64,
    beta: f64,
    n_max: usize,
) -> Result<PeriodicFourier, KernelError> {
    if lambda <= 0.0 || beta <= 0.0 {
        return Err(KernelError::BadParams("need lambda > 0 and beta > 0".into()));
    }
    let phi = |x: f64| (-lambda * x).exp() + (-lambda * (beta - x)).exp();
    let two_pi = 2.0 * std::f64::consts::PI;
    let (panels, order) = (64, 64);
    let mut closed_form = Vec::with_capacity(n_max + 1);
    let mut quadrature = Vec::with_capacity(n_max + 1);
    let mut max_rel_err = 0.0f64;
    for n in 0..=n_max {
        let cf = 2.0 * beta * lambda * (1.0 - (-beta * lambda).exp())
            / ((lambda * beta).powi(2) + (two_pi * n as f64).powi(2));
        let omega = two_pi * n as f64 / beta;
        let q = quad::integrate_c(
            |x| C64::new(phi(x), 0.0) * C64::new(0.0, -omega * x).exp(),
            0.0,
            beta,
            panels,
            order,
        ) / C64::new(beta, 0.0);
        closed_form.push(cf);
        quadrature.push(q.re);
        max_rel_err = max_rel_err.max((q.re - cf).abs() / cf.abs());
    }
    Ok(PeriodicFourier { closed_form, quadrature, max_rel_err, quad_nodes: panels * order })
}

/// Chebyshev-distributed interior nodes of `(lo, hi)`.
pub fn chebyshev_nodes(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| {
            let c = (std::f64::consts::PI * (i as f64 + 0.5) / count as f64).cos();
            0.5 * (lo + hi) - 0.5 * (hi - lo) * c
        })
        .collect()
}

/// Interval reflection-positivity check for a Laplace transform
/// `φ(t) = Σ_j w_j e^{-λ_j |t|}` of a finite signed-location measure.
#[derive(Debug, Clone)]
pub struct IntervalRpReport {
    /// PSD verdict of `(φ((t_i - t_j)/2))` on a grid of `(-a, a)`.
    pub group_kernel: GramReport,
    /// PSD verdict of `(φ((t_i + t_j)/2))` on a grid of `(0, a)`.
    pub semigroup_kernel: GramReport,
    /// Left-sided derivative of the Laplace transform at `a`:
    /// `-Σ_j λ_j w_j e^{-λ_j a}`.
    pub widder_slope: f64,
    /// Whether the sufficient condition `widder_slope ≤ 0` correctly
    /// predicted PSD-ness of both kernels (a nonnegative slope predicts
    /// nothing, so it is always consistent).
    pub widder_consistent: bool,
}

pub fn interval_rp_check(
    measure: &[(f64, f64)],
    a: f64,
    grid_size: usize,
    tol: f64,
) -> Result<IntervalRpReport, KernelError> {
    for &(_, w) in measure {
        if w < 0.0 {
            return Err(KernelError::MeasureNotPositive { w });
        }
    }
    let phi = |t: f64| -> f64 {
        measure.iter().map(|&(l, w)| w * (-l * t.abs()).exp()).sum()
    };
    let group_nodes = chebyshev_nodes(-a, a, grid_size);
    let semi_nodes = chebyshev_nodes(0.0, a, grid_size);
    let k = grid_size;
    let mut group = CMat::zeros(k, k);
    let mut semi = CMat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            group[(i, j)] = C64::new(phi((group_nodes[i] - group_nodes[j]) / 2.0), 0.0);
            semi[(i, j)] = C64::new(phi((semi_nodes[i] + semi_nodes[j]) / 2.0), 0.0);
        }
    }
    let group_kernel = GramReport::from_matrix(&group, tol)?;
    let semigroup_kernel = GramReport::from_matrix(&semi, tol)?;
    let widder_slope: f64 = measure.iter().map(|&(l, w)| -l * w * (-l * a).exp()).sum();
    let widder_consistent =
        widder_slope > 0.0 || (group_kernel.is_psd() && semigroup_kernel.is_psd());
    Ok(IntervalRpReport { group_kernel, semigroup_kernel, widder_slope, widder_consistent })
}

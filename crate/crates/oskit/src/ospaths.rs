//! Stochastic side of the positivity toolkit: reversible Markov chains and
//! their positive-semigroup axioms, Gaussian processes with Markov
//! covariances, the heat and oscillator semigroups on a grid, and
//! Monte-Carlo cross-checks.

use crate::report::{op_norm_real, GramReport};
use crate::{RMat, RVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OspathsError {
    #[error("row {row} of the transition matrix sums to {sum}, not 1")]
    NotStochastic { row: usize, sum: f64 },
    #[error("negative transition entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },
    #[error("stationarity residual ‖πP − π‖ = {residual:e} exceeds 1e-12")]
    NotStationary { residual: f64 },
    #[error("chain is not reversible: detailed-balance residual {residual:e}")]
    NotReversible { residual: f64 },
    #[error("present block is numerically singular")]
    SingularPresent,
    #[error("grid spacing {dx} too coarse for time {t}: alias estimate {estimate:e}")]
    GridTooCoarse { dx: f64, t: f64, estimate: f64 },
    #[error("covariance matrix is not PSD (min eigenvalue {min_eig:e})")]
    CovarianceNotPsd { min_eig: f64 },
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Report(#[from] crate::report::ReportError),
}

/// Stochastic matrix with a verified stationary distribution.
#[derive(Debug, Clone)]
pub struct MarkovMatrix {
    p: RMat,
    stationary: RVec,
    detailed_balance: bool,
}

const STOCHASTIC_TOL: f64 = 1e-12;

impl MarkovMatrix {
    pub fn new(p: RMat, stationary: RVec) -> Result<Self, OspathsError> {
        let k = p.nrows();
        if p.ncols() != k || stationary.len() != k || k == 0 {
            return Err(OspathsError::BadParams("shape mismatch".into()));
        }
        for row in 0..k {
            let mut sum = 0.0;
            for col in 0..k {
                if p[(row, col)] < 0.0 {
                    return Err(OspathsError::NegativeEntry { row, col });
                }
                sum += p[(row, col)];
            }
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(OspathsError::NotStochastic { row, sum });
            }
        }
        if stationary.iter().any(|&x| x < 0.0)
            || (stationary.iter().sum::<f64>() - 1.0).abs() > STOCHASTIC_TOL
        {
            return Err(OspathsError::BadParams(
                "stationary vector is not a probability distribution".into(),
            ));
        }
        let residual = (p.transpose() * &stationary - &stationary).norm();
        if residual > STOCHASTIC_TOL {
            return Err(OspathsError::NotStationary { residual });
        }
        let db = Self::detailed_balance_residual(&p, &stationary);
        Ok(Self { p, stationary, detailed_balance: db <= STOCHASTIC_TOL })
    }

    fn detailed_balance_residual(p: &RMat, pi: &RVec) -> f64 {
        let k = p.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                worst = worst.max((pi[i] * p[(i, j)] - pi[j] * p[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn transition(&self) -> &RMat {
        &self.p
    }

    pub fn stationary(&self) -> &RVec {
        &self.stationary
    }

    pub fn is_reversible(&self) -> bool {
        self.detailed_balance
    }

    pub fn dim(&self) -> usize {
        self.p.nrows()
    }
}

/// Covariance families for the Gaussian process model: the exponential
/// (Ornstein–Uhlenbeck) kernel and the squared-exponential non-Markov
/// control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CovarianceTag {
    Ou(f64),
    Sqexp(f64),
}

/// Stationary centered Gaussian process restricted to a finite time grid.
#[derive(Debug, Clone)]
pub struct GaussianSpec {
    pub covariance: CovarianceTag,
    pub times: Vec<f64>,
    pub seed: u64,
}

impl GaussianSpec {
    pub fn new(covariance: CovarianceTag, times: &[f64], seed: u64) -> Result<Self, OspathsError> {
        if times.is_empty() {
            return Err(OspathsError::BadParams("empty time grid".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(OspathsError::BadParams("times must be strictly increasing".into()));
        }
        let lambda = match covariance {
            CovarianceTag::Ou(l) | CovarianceTag::Sqexp(l) => l,
        };
        if lambda < 0.0 {
            return Err(OspathsError::BadParams("rate must be nonnegative".into()));
        }
        let spec = Self { covariance, times: times.to_vec(), seed };
        let min_eig = spec
            .covariance_matrix()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min_eig < -1e-10 {
            return Err(OspathsError::CovarianceNotPsd { min_eig });
        }
        Ok(spec)
    }

    pub fn covariance_matrix(&self) -> RMat {
        match self.covariance {
            CovarianceTag::Ou(l) => ou_covariance(l, &self.times),
            CovarianceTag::Sqexp(l) => sqexp_covariance(l, &self.times),
        }
    }
}

/// Covariance `e^{-λ|t_i - t_j|}` of the stationary unit-variance
/// Ornstein–Uhlenbeck process.
pub fn ou_covariance(lambda: f64, times: &[f64]) -> RMat {
    RMat::from_fn(times.len(), times.len(), |i, j| (-lambda * (times[i] - times[j]).abs()).exp())
}

/// Squared-exponential covariance `e^{-λ(t_i - t_j)²}` — smooth, PSD, and
/// deliberately non-Markov.
pub fn sqexp_covariance(lambda: f64, times: &[f64]) -> RMat {
    RMat::from_fn(times.len(), times.len(), |i, j| {
        (-lambda * (times[i] - times[j]).powi(2)).exp()
    })
}

/// Outcome of [`markov_property_check`].
#[derive(Debug, Clone)]
pub struct MarkovCheck {
    pub cross_residual: f64,
    pub is_markov_numerically: bool,
}

const MARKOV_TOL: f64 = 1e-10;

/// Conditional-independence form of the Markov property for a centered
/// Gaussian vector: with the grid split into past `0..split`, present
/// `split`, and future `split+1..`, the conditional cross-covariance of past
/// and future given the present is `Σ_PF − Σ_P0 Σ_00⁻¹ Σ_0F`; the process is
/// Markov at this split iff it vanishes.
pub fn markov_property_check(cov: &RMat, split: usize) -> Result<MarkovCheck, OspathsError> {
    let n = cov.nrows();
    if cov.ncols() != n || split >= n {
        return Err(OspathsError::BadParams("split index out of range".into()));
    }
    let present = cov[(split, split)];
    if present.abs() < 1e-14 {
        return Err(OspathsError::SingularPresent);
    }
    let past: Vec<usize> = (0..split).collect();
    let future: Vec<usize> = (split + 1..n).collect();
    let mut worst = RMat::zeros(past.len(), future.len());
    for (a, &i) in past.iter().enumerate() {
        for (b, &j) in future.iter().enumerate() {
            worst[(a, b)] = cov[(i, j)] - cov[(i, split)] * cov[(split, j)] / present;
        }
    }
    let cross_residual = if worst.is_empty() { 0.0 } else { op_norm_real(&worst) };
    Ok(MarkovCheck { cross_residual, is_markov_numerically: cross_residual <= MARKOV_TOL })
}

/// Sample paths with their empirical second moments.
#[derive(Debug, Clone)]
pub struct GaussianSamples {
    /// Row `p` holds path `p` across the time grid.
    pub paths: RMat,
    pub empirical_covariance: RMat,
    /// Entrywise standard error of the empirical covariance, estimated from
    /// the sample variance of the products.
    pub standard_error: RMat,
}

/// Draws `n_paths` independent paths of the process. The covariance square
/// root is taken through the symmetric eigendecomposition (tolerant of
/// near-singular grids); the generator is counter-based with one stream per
/// path, so the output is reproducible and path `p` does not depend on how
/// many other paths were drawn.
pub fn sample_gaussian(spec: &GaussianSpec, n_paths: usize) -> Result<GaussianSamples, OspathsError> {
    let cov = spec.covariance_matrix();
    let k = cov.nrows();
    let eig = cov.clone().symmetric_eigen();
    if let Some(&min) = eig
        .eigenvalues
        .iter()
        .min_by(|a, b| a.total_cmp(b))
        .filter(|&&m| m < -1e-10)
    {
        return Err(OspathsError::CovarianceNotPsd { min_eig: min });
    }
    let mut root = eig.eigenvectors.clone();
    for c in 0..k {
        let scale = eig.eigenvalues[c].max(0.0).sqrt();
        for r in 0..k {
            root[(r, c)] *= scale;
        }
    }
    let mut paths = RMat::zeros(n_paths, k);
    for p in 0..n_paths {
        let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
        rng.set_stream(p as u64);
        let z = RVec::from_fn(k, |_, _| rng.sample::<f64, _>(StandardNormal));
        let x = &root * z;
        for j in 0..k {
            paths[(p, j)] = x[j];
        }
    }
    let n = n_paths as f64;
    let mut empirical = RMat::zeros(k, k);
    let mut second = RMat::zeros(k, k);
    for p in 0..n_paths {
        for i in 0..k {
            for j in 0..k {
                let prod = paths[(p, i)] * paths[(p, j)];
                empirical[(i, j)] += prod / n;
                second[(i, j)] += prod * prod / n;
            }
        }
    }
    let standard_error = RMat::from_fn(k, k, |i, j| {
        ((second[(i, j)] - empirical[(i, j)].powi(2)).max(0.0) / n).sqrt()
    });
    Ok(GaussianSamples { paths, empirical_covariance: empirical, standard_error })
}

/// Real-valued function sampled on a uniform grid, extended by zero outside.
#[derive(Debug, Clone)]
pub struct GridFn {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl GridFn {
    pub fn from_fn<F: Fn(f64) -> f64>(x0: f64, dx: f64, n: usize, f: F) -> Self {
        Self { x0, dx, values: (0..n).map(|i| f(x0 + i as f64 * dx)).collect() }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Max-norm difference against another function on the same grid,
    /// restricted to points with `|x| ≤ window`.
    pub fn max_diff_within(&self, other: &GridFn, window: f64) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .enumerate()
            .filter(|(i, _)| self.x(*i).abs() <= window)
            .map(|(_, (a, b))| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Rejects spacings for which the Riemann sum of a variance-`var` Gaussian
/// aliases above `1e-12`; by Poisson summation the alias error of the
/// periodized density is `≈ 2 e^{-2π²·var/dx²}`.
fn check_grid_resolution(dx: f64, t: f64, var: f64) -> Result<(), OspathsError> {
    let estimate = 2.0 * (-2.0 * std::f64::consts::PI.powi(2) * var / (dx * dx)).exp();
    if estimate > 1e-12 {
        return Err(OspathsError::GridTooCoarse { dx, t, estimate });
    }
    Ok(())
}

/// Heat semigroup `(P_t f)(x) = (f ∗ γ_t)(x)` with the centered Gaussian
/// density of variance `t`, by direct quadrature over the grid. Away from the
/// boundary layer (where zero-padding truncates the kernel mass) this is
/// positivity preserving, fixes constants, and satisfies the semigroup law.
pub fn heat_semigroup(f: &GridFn, t: f64) -> Result<GridFn, OspathsError> {
    if !(t > 0.0) {
        return Err(OspathsError::BadParams("time must be positive".into()));
    }
    check_grid_resolution(f.dx, t, t)?;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * t).sqrt();
    let n = f.len();
    let mut out = vec![0.0; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let xi = f.x(i);
        let mut acc = 0.0;
        for (j, &fj) in f.values.iter().enumerate() {
            let d = xi - f.x(j);
            acc += fj * (-d * d / (2.0 * t)).exp();
        }
        *slot = acc * norm * f.dx;
    }
    Ok(GridFn { x0: f.x0, dx: f.dx, values: out })
}

/// Monte-Carlo estimate of `(P_t f)(x) = E[f(x + √t Z)]`.
#[derive(Debug, Clone)]
pub struct FeynmanKac {
    pub mc_estimate: f64,
    pub std_error: f64,
}

impl FeynmanKac {
    pub fn z_score(&self, analytic: f64) -> f64 {
        (self.mc_estimate - analytic) / self.std_error.max(f64::MIN_POSITIVE)
    }
}

pub fn feynman_kac_mc<F: Fn(f64) -> f64>(
    f: F,
    t: f64,
    x: f64,
    n_samples: usize,
    seed: u64,
) -> Result<FeynmanKac, OspathsError> {
    if !(t > 0.0) || n_samples == 0 {
        return Err(OspathsError::BadParams("need t > 0 and at least one sample".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let sqrt_t = t.sqrt();
    let mut mean = 0.0;
    let mut sq = 0.0;
    for _ in 0..n_samples {
        let z: f64 = rng.sample(StandardNormal);
        let v = f(x + sqrt_t * z);
        mean += v;
        sq += v * v;
    }
    let n = n_samples as f64;
    mean /= n;
    let var = (sq / n - mean * mean).max(0.0);
    Ok(FeynmanKac { mc_estimate: mean, std_error: (var / n).sqrt() })
}

/// One step of the oscillator semigroup `e^{-tH}` with
/// `H = -∂² + x²/4 - 1/2`, whose ground state is `Ω(x) = e^{-x²/4}` at
/// energy zero. Conjugating by `Ω` turns `-H` into the drift-diffusion
/// generator `∂² - x∂`, whose transition law from `x` over time `t` is normal
/// with mean `x e^{-t}` and variance `1 - e^{-2t}`; the step is that
/// transition quadrature sandwiched between division and multiplication by
/// `Ω`.
pub fn mehler_step(f: &GridFn, t: f64) -> Result<GridFn, OspathsError> {
    if !(t > 0.0) {
        return Err(OspathsError::BadParams("time must be positive".into()));
    }
    let decay = (-t).exp();
    let var = 1.0 - decay * decay;
    check_grid_resolution(f.dx, t, var)?;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * var).sqrt();
    let omega = |x: f64| (-x * x / 4.0).exp();
    let n = f.len();
    let mut out = vec![0.0; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let mean = f.x(i) * decay;
        let mut acc = 0.0;
        for (j, &fj) in f.values.iter().enumerate() {
            let y = f.x(j);
            let d = y - mean;
            acc += fj / omega(y) * (-d * d / (2.0 * var)).exp();
        }
        *slot = omega(f.x(i)) * acc * norm * f.dx;
    }
    Ok(GridFn { x0: f.x0, dx: f.dx, values: out })
}

/// Outcome of [`pss_axiom_check`].
#[derive(Debug, Clone)]
pub struct PssReport {
    pub min_monomial_value: f64,
    pub self_adjoint_residual: f64,
    pub trials: usize,
    pub pass: bool,
}

const PSS_TOL: f64 = 1e-12;

/// Randomized check of the positive-semigroup-structure axioms for a
/// reversible chain: monomial expectations
/// `π·(A₁ P^{s₁} A₂ ⋯ P^{s_{n-1}} A_n)·1` with nonnegative diagonal `A_i`
/// must be nonnegative, and `P^n` must be self-adjoint in `L²(π)`.
pub fn pss_axiom_check(
    chain: &MarkovMatrix,
    powers: &[u32],
    n_trials: usize,
    seed: u64,
) -> Result<PssReport, OspathsError> {
    if !chain.is_reversible() {
        let residual =
            MarkovMatrix::detailed_balance_residual(chain.transition(), chain.stationary());
        return Err(OspathsError::NotReversible { residual });
    }
    if powers.is_empty() || powers.contains(&0) {
        return Err(OspathsError::BadParams("powers must be positive".into()));
    }
    let k = chain.dim();
    let p = chain.transition();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut min_value = f64::INFINITY;
    let mut sa_residual: f64 = 0.0;
    for _ in 0..n_trials {
        let factors = rng.random_range(2..=4usize);
        // state = (A_n 1), then fold A_i P^{s_i} from the right.
        let mut state = RVec::from_fn(k, |i, _| {
            let _ = i;
            rng.random_range(0.0..1.0)
        });
        for _ in 0..factors - 1 {
            let s = powers[rng.random_range(0..powers.len())];
            for _ in 0..s {
                state = p * state;
            }
            for i in 0..k {
                state[i] *= rng.random_range(0.0..1.0f64);
            }
        }
        let value: f64 = (0..k).map(|i| chain.stationary()[i] * state[i]).sum();
        min_value = min_value.min(value);

        // Self-adjointness in L²(π): ⟨P^n f, h⟩_π = ⟨f, P^n h⟩_π.
        let f = RVec::from_fn(k, |_, _| rng.random_range(-1.0..1.0));
        let h = RVec::from_fn(k, |_, _| rng.random_range(-1.0..1.0));
        let n = powers[rng.random_range(0..powers.len())];
        let mut pf = f.clone();
        let mut ph = h.clone();
        for _ in 0..n {
            pf = p * pf;
            ph = p * ph;
        }
        let left: f64 = (0..k).map(|i| chain.stationary()[i] * pf[i] * h[i]).sum();
        let right: f64 = (0..k).map(|i| chain.stationary()[i] * f[i] * ph[i]).sum();
        sa_residual = sa_residual.max((left - right).abs());
    }
    Ok(PssReport {
        min_monomial_value: min_value,
        self_adjoint_residual: sa_residual,
        trials: n_trials,
        pass: min_value >= -PSS_TOL && sa_residual <= PSS_TOL,
    })
}

/// Reflected Gram of the exponential kernel over positive times: entries
/// `e^{-λ(t_i + t_j)}`, the covariance pairing `⟨θξ_i, ξ_j⟩` of the
/// stationary process against its time reflection. Rank one, hence PSD.
pub fn ou_reflected_gram(lambda: f64, times: &[f64], tol: f64) -> Result<GramReport, OspathsError> {
    if times.iter().any(|&t| t < 0.0) {
        return Err(OspathsError::BadParams("reflection pairing needs times ≥ 0".into()));
    }
    let n = times.len();
    let g = RMat::from_fn(n, n, |i, j| (-lambda * (times[i] + times[j])).exp());
    Ok(GramReport::from_matrix(&crate::report::complexify(&g), tol)?)
}

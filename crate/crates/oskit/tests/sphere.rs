use num_complex::Complex64;
use oskit::kernel::{gram, psd_verdict, KernelSpec};
use oskit::report::hermitian_residual;
use oskit::sphere::*;
use oskit::{CMat, RMat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// -- gamma ------------------------------------------------------------------

#[test]
fn gamma_known_values() {
    assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    assert!((gamma(5.0) - 24.0).abs() < 1e-12);
    assert!((gamma(1.0) - 1.0).abs() < 1e-14);
    // Γ(20) = 19!
    let fact19 = (1..=19u64).product::<u64>() as f64;
    assert!((gamma(20.0) - fact19).abs() / fact19 < 1e-13);
}

#[test]
fn gamma_relative_accuracy_on_window() {
    // Against the recurrence Γ(x+1) = x Γ(x), which is exact.
    for i in 0..200 {
        let x = 0.1 + 29.0 * (i as f64) / 200.0;
        let lhs = gamma(x + 1.0);
        let rhs = x * gamma(x);
        assert!((lhs - rhs).abs() / rhs.abs() < 1e-13, "x = {x}");
    }
}

#[test]
fn duplication_identity() {
    for z in [0.7, 1.3, 2.5] {
        assert!(duplication_residual(z) <= 1e-12, "z = {z}: {:e}", duplication_residual(z));
    }
}

#[test]
fn complex_gamma_conjugate_symmetry() {
    let z = c(1.3, 0.8);
    let g1 = gamma_c(z);
    let g2 = gamma_c(z.conj());
    assert!((g1 - g2.conj()).norm() < 1e-12 * g1.norm());
}

// -- hypergeometric ---------------------------------------------------------

fn params(a: f64, b: f64, cc: f64) -> HypParams {
    HypParams { a: c(a, 0.0), b: c(b, 0.0), c: c(cc, 0.0) }
}

#[test]
fn hyp_at_zero_is_one() {
    let v = hyp2f1(params(0.7, -1.2, 0.9), 0.0).unwrap();
    assert!((v - c(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn hyp_log_identity() {
    // ₂F₁(1, 1; 2; x) = -ln(1-x)/x.
    for x in [-4.5, -0.7, 0.3, 0.6, 0.9] {
        let v = hyp2f1(params(1.0, 1.0, 2.0), x).unwrap();
        let expect = -(1.0 - x).ln() / x;
        assert!((v.re - expect).abs() < 1e-12 * expect.abs().max(1.0), "x = {x}");
        assert!(v.im.abs() < 1e-13);
    }
}

#[test]
fn hyp_binomial_identity() {
    // ₂F₁(a, b; b; x) = (1-x)^{-a}.
    for x in [-3.0, 0.45, 0.85] {
        let v = hyp2f1(params(0.8, 2.5, 2.5), x).unwrap();
        let expect = (1.0 - x).powf(-0.8);
        assert!((v.re - expect).abs() < 1e-11 * expect.abs(), "x = {x}");
    }
}

#[test]
fn hyp_bad_c_rejected() {
    assert!(matches!(hyp2f1(params(1.0, 1.0, -2.0), 0.3), Err(SphereError::BadC)));
}

#[test]
fn hyp_cut_rejected() {
    assert!(matches!(
        hyp2f1(params(1.0, 1.0, 2.5), 1.0),
        Err(SphereError::ArgumentOnCut { .. })
    ));
}

#[test]
fn hyp_pfaff_image_agrees_with_series() {
    // Evaluate at x = 0.4 directly and through the Pfaff transformation.
    let p = params(0.9, 1.7, 2.3);
    let x = 0.4;
    let direct = hyp2f1(p, x).unwrap();
    let y = x / (x - 1.0);
    let pfaff = c(1.0 - x, 0.0).powc(-p.a)
        * hyp2f1(HypParams { a: p.a, b: p.c - p.b, c: p.c }, y).unwrap();
    assert!((direct - pfaff).norm() < 1e-12);
}

#[test]
fn hyp_dual_paths_agree_across_range() {
    // The spherical parameter families (real and conjugate-imaginary pairs).
    let families = [
        params(1.4, -0.4, 1.0),
        params(0.75 + 0.5, 0.75 - 0.5, 1.5),
        HypParams { a: c(0.5, 1.2), b: c(0.5, -1.2), c: c(1.0, 0.0) },
        params(2.1, 0.3, 2.0),
    ];
    for p in families {
        for i in 0..120 {
            let x = -5.0 + 5.95 * (i as f64) / 119.0;
            let (primary, alternate) = hyp2f1_dual(p, x).unwrap();
            let scale = primary.norm().max(1.0);
            assert!(
                (primary - alternate).norm() <= 1e-10 * scale,
                "x = {x}, primary {primary}, alternate {alternate}"
            );
        }
    }
}

#[test]
fn hyp_positive_on_unit_interval_for_sphere_params() {
    for n in [2usize, 3, 4] {
        let lam = 0.4;
        let half = (n as f64 - 1.0) / 2.0;
        let p = params(half + lam, half - lam, n as f64 / 2.0);
        for i in 0..50 {
            let x = 0.98 * (i as f64) / 49.0;
            let v = hyp2f1(p, x).unwrap();
            assert!(v.re > 0.0, "n = {n}, x = {x}");
        }
    }
}

// -- conformal action -------------------------------------------------------

fn random_unit(rng: &mut ChaCha12Rng, dim: usize) -> Vec<f64> {
    use rand_distr::StandardNormal;
    let mut v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= n;
    }
    v
}

#[test]
fn identity_acts_trivially() {
    let g = ConformalElement::new(RMat::identity(5, 5)).unwrap();
    let x = vec![0.6, 0.8, 0.0, 0.0];
    let (gx, j) = conformal_action(&g, &x).unwrap();
    assert!((j - 1.0).abs() < 1e-15);
    for (a, b) in gx.iter().zip(&x) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn rotations_have_unit_cocycle() {
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    for _ in 0..20 {
        let r = sampling::random_rotation(4, &mut rng);
        let g = ConformalElement::new(ConformalElement::rotation(&r).g).unwrap();
        let x = random_unit(&mut rng, 4);
        let (gx, j) = conformal_action(&g, &x).unwrap();
        assert!((j - 1.0).abs() < 1e-12);
        let norm: f64 = gx.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}

#[test]
fn cocycle_identity_on_random_products() {
    let mut rng = ChaCha12Rng::seed_from_u64(17);
    for _ in 0..100 {
        let n = 3usize;
        let r1 = sampling::random_rotation(n + 1, &mut rng);
        let r2 = sampling::random_rotation(n + 1, &mut rng);
        let t1: f64 = rng.random_range(-1.5..1.5);
        let t2: f64 = rng.random_range(-1.5..1.5);
        let g1 = ConformalElement::rotation(&r1).compose(&ConformalElement::boost(n, t1));
        let g2 = ConformalElement::boost(n, t2).compose(&ConformalElement::rotation(&r2));
        let g1 = ConformalElement::new(g1.g).unwrap();
        let g2 = ConformalElement::new(g2.g).unwrap();
        let g12 = ConformalElement::new(g1.compose(&g2).g).unwrap();
        let x = random_unit(&mut rng, n + 1);
        let (g2x, j2) = conformal_action(&g2, &x).unwrap();
        let (_, j1) = conformal_action(&g1, &g2x).unwrap();
        let (g12x, j12) = conformal_action(&g12, &x).unwrap();
        assert!((j12 - j1 * j2).abs() <= 1e-10 * j12.abs().max(1.0));
        let norm: f64 = g12x.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-10);
    }
}

#[test]
fn kernel_covariance_under_conformal_action() {
    // Q_λ(u, v) = J(g,u)^{λ-n/2} Q_λ(g.u, g.v) J(g,v)^{λ-n/2}
    // (the J_{-λ} cocycle written multiplicatively for real λ).
    let mut rng = ChaCha12Rng::seed_from_u64(23);
    let n = 3usize;
    let lam = 0.8;
    let expo = lam - n as f64 / 2.0;
    for _ in 0..100 {
        let r = sampling::random_rotation(n + 1, &mut rng);
        let t: f64 = rng.random_range(-1.0..1.0);
        let g = ConformalElement::new(
            ConformalElement::rotation(&r).compose(&ConformalElement::boost(n, t)).g,
        )
        .unwrap();
        let u = random_unit(&mut rng, n + 1);
        let v = random_unit(&mut rng, n + 1);
        let (gu, ju) = conformal_action(&g, &u).unwrap();
        let (gv, jv) = conformal_action(&g, &v).unwrap();
        if ju <= 0.0 || jv <= 0.0 {
            continue;
        }
        let lhs = q_lambda(lam, n, &u, &v).unwrap();
        let rhs = ju.powf(expo) * q_lambda(lam, n, &gu, &gv).unwrap() * jv.powf(expo);
        assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0), "lhs {lhs} rhs {rhs}");
    }
}

// -- stereographic ----------------------------------------------------------

#[test]
fn stereographic_origin_and_equator() {
    let e0 = stereographic(&[0.0, 0.0, 0.0]);
    assert!((e0[0] - 1.0).abs() < 1e-15);
    let eq = stereographic(&[1.0, 0.0, 0.0]);
    assert!(eq[0].abs() < 1e-15);
}

#[test]
fn stereographic_roundtrip_and_sigma() {
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    for _ in 0..100 {
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
        if x.iter().map(|v| v * v).sum::<f64>() < 1e-4 {
            continue;
        }
        let y = stereographic(&x);
        let norm: f64 = y.iter().map(|v| v * v).sum::<f64>();
        assert!((norm - 1.0).abs() < 1e-12);
        let back = stereographic_inverse(&y).unwrap();
        for (a, b) in back.iter().zip(&x) {
            assert!((a - b).abs() < 1e-12);
        }
        // σ = s⁻¹ ∘ r₀ ∘ s equals inversion in the unit sphere.
        let mut ry = y.clone();
        ry[0] = -ry[0];
        let sigma_via_chart = stereographic_inverse(&ry).unwrap();
        let sigma_direct = sigma_inversion(&x);
        for (a, b) in sigma_via_chart.iter().zip(&sigma_direct) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn antipode_rejected() {
    assert!(matches!(
        stereographic_inverse(&[-1.0, 0.0, 0.0]),
        Err(SphereError::Antipode)
    ));
}

// -- ball kernel window -----------------------------------------------------

#[test]
fn r_lambda_at_origin() {
    assert!((r_lambda(0.7, 3, RVariant::Factor2, &[0.0; 3], &[0.0; 3]).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn r_lambda_out_of_ball_rejected() {
    assert!(matches!(
        r_lambda(0.7, 2, RVariant::Factor2, &[1.2, 0.0], &[0.0, 0.0]),
        Err(SphereError::OutOfBall)
    ));
}

fn r_gram(n: usize, lambda: f64, variant: RVariant, seed: u64) -> CMat {
    let pts = ball_points(n, 40, seed, 0.9, 0.12);
    gram(&KernelSpec::SphereR { lambda, n, variant }, &pts).unwrap()
}

#[test]
fn r_lambda_window_positive_cases() {
    for (n, lambda) in [(3usize, 0.9), (2, 0.95), (4, 0.6)] {
        let g = r_gram(n, lambda, RVariant::Factor2, 42);
        let rep = psd_verdict(&g, 1e-8).unwrap();
        assert!(rep.is_psd(), "(n, λ) = ({n}, {lambda}): min_eig {:e}", rep.min_eig);
    }
}

#[test]
fn r_lambda_window_negative_cases() {
    for (n, lambda) in [(3usize, 1.3), (4, 1.4)] {
        let g = r_gram(n, lambda, RVariant::Factor2, 42);
        let rep = psd_verdict(&g, 1e-8).unwrap();
        assert!(!rep.is_psd(), "(n, λ) = ({n}, {lambda}) unexpectedly PSD");
    }
}

#[test]
fn r_lambda_window_sampled_family() {
    // Non-positivity just above the window needs a dense sample near the
    // boundary to show up; the same configuration stays PSD inside it.
    for n in [2usize, 3, 4] {
        let pts = ball_points(n, 80, 42, 0.97, 0.08);
        let edge = 1.0f64.min(n as f64 / 2.0);
        for lambda in [0.2, 0.6, edge] {
            let g = gram(&KernelSpec::SphereR { lambda, n, variant: RVariant::Factor2 }, &pts)
                .unwrap();
            let rep = psd_verdict(&g, 1e-8).unwrap();
            assert!(rep.is_psd(), "(n, λ) = ({n}, {lambda}): min_eig {:e}", rep.min_eig);
        }
        let above = edge + 0.3;
        let g = gram(&KernelSpec::SphereR { lambda: above, n, variant: RVariant::Factor2 }, &pts)
            .unwrap();
        let rep = psd_verdict(&g, 1e-8).unwrap();
        assert!(!rep.is_psd(), "(n, λ) = ({n}, {above}) should fail above the window");
    }
}

// -- psi kernel -------------------------------------------------------------

#[test]
fn psi_at_pole_is_one() {
    let mut e0 = vec![0.0; 3];
    e0[0] = 1.0;
    let v = psi_kernel(0.5, 2, &e0, &e0).unwrap();
    assert!((v - c(1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn psi_lambda_case_split() {
    // Below threshold: real λ; above: imaginary λ; values real either way.
    assert!(lambda_from_mass(0.3, 2).im == 0.0);
    assert!(lambda_from_mass(2.0, 2).re == 0.0);
    let pts = half_sphere_points(2, 6, 5, 0.25);
    for m in [0.3, 2.0] {
        for x in &pts {
            for y in &pts {
                let v = psi_kernel(m, 2, x, y).unwrap();
                assert!(v.im.abs() < 1e-12, "m = {m}");
            }
        }
    }
}

#[test]
fn psi_gram_hermitian_and_psd() {
    for (n, m) in [(2usize, 0.5), (2, 2.0), (3, 1.0)] {
        let pts = half_sphere_points(n, 30, 11, 0.18);
        let g = psi_gram(m, n, &pts).unwrap();
        assert!(hermitian_residual(&g) <= 1e-12);
        let rep = psd_verdict(&g, 1e-7).unwrap();
        assert!(rep.is_psd(), "(n, m) = ({n}, {m}): min_eig {:e}", rep.min_eig);
    }
}

// -- constants --------------------------------------------------------------

#[test]
fn constants_quadrature_matches_closed_form() {
    for n in [2usize, 3] {
        for lambda in [0.3, 0.7] {
            let sc = sphere_constants(lambda, n).unwrap();
            assert!(sc.rel_err <= 1e-8, "(n, λ) = ({n}, {lambda}): {:e}", sc.rel_err);
        }
    }
}

#[test]
fn constants_unit_mass_at_half_dimension() {
    for n in [2usize, 3, 4] {
        let sc = sphere_constants(n as f64 / 2.0, n).unwrap();
        assert!((sc.d_lambda_n - 1.0).abs() < 1e-12, "n = {n}: {}", sc.d_lambda_n);
        assert!((sc.quadrature - 1.0).abs() < 1e-8);
    }
}

#[test]
fn constants_reject_nonpositive_lambda() {
    assert!(matches!(sphere_constants(0.0, 3), Err(SphereError::Nonintegrable)));
}

#[test]
fn beta_identity_holds() {
    for (z, w) in [(0.8, 1.0), (1.5, 1.5), (0.4, 2.0)] {
        let res = beta_identity_residual(z, w);
        assert!(res <= 1e-9, "(z, w) = ({z}, {w}): {res:e}");
    }
}

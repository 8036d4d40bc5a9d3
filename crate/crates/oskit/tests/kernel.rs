use num_complex::Complex64;
use oskit::kernel::*;
use oskit::report::{rank_rel, singular_values};
use oskit::Verdict;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn pts1(xs: &[f64]) -> Vec<Vec<f64>> {
    xs.iter().map(|&x| vec![x]).collect()
}

#[test]
fn exp_line_single_point() {
    let g = gram(&KernelSpec::ExpLine { lambda: 2.0 }, &pts1(&[0.0])).unwrap();
    assert_eq!(g.nrows(), 1);
    assert!((g[(0, 0)].re - 1.0).abs() < 1e-15);
}

#[test]
fn exp_line_two_points() {
    let t = 1.7;
    let g = gram(&KernelSpec::ExpLine { lambda: 1.0 }, &pts1(&[0.0, t])).unwrap();
    assert!((g[(0, 1)].re - (-t).exp()).abs() < 1e-15);
    assert!((g[(1, 0)].re - (-t).exp()).abs() < 1e-15);
}

#[test]
fn exp_line_gram_is_psd_on_uniform_grid() {
    // Bochner side: e^{-λ|x|} is the Fourier transform of the Cauchy density.
    for lambda in [0.1, 1.0, 10.0] {
        let xs: Vec<f64> = (0..64).map(|i| -10.0 + 20.0 * i as f64 / 63.0).collect();
        let g = gram(&KernelSpec::ExpLine { lambda }, &pts1(&xs)).unwrap();
        let rep = psd_verdict(&g, 1e-10).unwrap();
        assert!(rep.is_psd(), "λ = {lambda}: min_eig {:e}", rep.min_eig);
        assert!(rep.min_eig >= -1e-10 * rep.max_eig.max(1.0));
    }
}

#[test]
fn exp_line_reflected_is_rank_one_product() {
    let lambda = 0.8;
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let xs: Vec<f64> = (0..32).map(|_| rng.random_range(0.01..10.0)).collect();
    let g = reflected_gram(&KernelSpec::ExpLine { lambda }, &ReflectionGeometry::Line, &pts1(&xs))
        .unwrap();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            let expect = (-lambda * x).exp() * (-lambda * y).exp();
            assert!((g[(i, j)].re - expect).abs() < 1e-14);
        }
    }
    assert_eq!(rank_rel(&g, 1e-10), 1);
    let sv = singular_values(&g);
    assert!(sv[1] <= 1e-10 * sv[0]);
    let rep = psd_verdict(&g, 1e-10).unwrap();
    assert!(rep.is_psd());
}

#[test]
fn periodic_green_is_periodic() {
    let (lambda, beta) = (0.7, 3.0);
    let k = KernelSpec::PeriodicGreen { lambda, beta };
    let g = gram(&k, &pts1(&[0.4, 0.4 + beta, 1.9])).unwrap();
    assert!((g[(0, 2)] - g[(1, 2)]).norm() < 1e-14);
}

#[test]
fn periodic_green_reflected_two_summand_form() {
    let (lambda, beta) = (1.1, 2.0);
    let k = KernelSpec::PeriodicGreen { lambda, beta };
    let geo = ReflectionGeometry::Circle { beta };
    let xs = [0.2, 0.5, 0.9];
    let g = reflected_gram(&k, &geo, &pts1(&xs)).unwrap();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            let expect = (-lambda * (x + y)).exp()
                + (-lambda * beta).exp() * (lambda * (x + y)).exp();
            assert!((g[(i, j)].re - expect).abs() < 1e-13, "x={x} y={y}");
        }
    }
    let rep = psd_verdict(&g, 1e-8).unwrap();
    assert!(rep.is_psd());
}

#[test]
fn reflected_gram_rejects_points_outside_plus_region() {
    let k = KernelSpec::ExpLine { lambda: 1.0 };
    let err = reflected_gram(&k, &ReflectionGeometry::Line, &pts1(&[1.0, -2.0])).unwrap_err();
    assert!(matches!(err, KernelError::DomainViolation(_)));
}

#[test]
fn geometry_involutions_square_to_identity() {
    let geos = [
        ReflectionGeometry::Line,
        ReflectionGeometry::Interval { a: 2.0 },
        ReflectionGeometry::Circle { beta: 3.0 },
    ];
    for geo in geos {
        for x in [0.3, 0.9, 1.4] {
            let twice = geo.tau(&geo.tau(&[x]));
            let back = match geo {
                ReflectionGeometry::Circle { beta } => twice[0].rem_euclid(beta),
                _ => twice[0],
            };
            assert!((back - x).abs() < 1e-14, "{geo:?} at {x}");
            assert!(!geo.in_plus(&geo.tau(&[x])) || !geo.in_plus(&[x]));
        }
    }
    let hs = ReflectionGeometry::HalfSpace { d: 3 };
    let p = [0.5, 1.0, -2.0];
    assert_eq!(hs.tau(&hs.tau(&p)), p.to_vec());
}

#[test]
fn psd_verdict_examples() {
    let id = oskit::CMat::identity(3, 3);
    let rep = psd_verdict(&id, 1e-9).unwrap();
    assert_eq!(rep.verdict, Verdict::Psd);
    assert!((rep.min_eig - 1.0).abs() < 1e-14);

    let m = oskit::CMat::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
        ],
    );
    let rep = psd_verdict(&m, 1e-9).unwrap();
    assert_eq!(rep.verdict, Verdict::NotPsd);
    assert!((rep.min_eig + 1.0).abs() < 1e-13);
    assert!((rep.max_eig - 3.0).abs() < 1e-13);
}

#[test]
fn psd_verdict_rejects_asymmetric_input() {
    let m = oskit::CMat::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.1, 0.0),
            Complex64::new(1.0, 0.0),
        ],
    );
    assert!(matches!(psd_verdict(&m, 1e-9), Err(KernelError::NotHermitian(_))));
}

#[test]
fn power_law_rejects_coincident_points() {
    let k = KernelSpec::PowerLaw { a: 1.0, d: 3 };
    let p = vec![vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]];
    assert!(matches!(gram(&k, &p), Err(KernelError::CoincidentPoints { .. })));
}

#[test]
fn power_law_rejects_exponent_outside_window() {
    let k = KernelSpec::PowerLaw { a: 3.5, d: 3 };
    assert!(matches!(gram(&k, &[vec![1.0, 0.0, 0.0]]), Err(KernelError::BadParams(_))));
}

#[test]
fn periodic_fourier_closed_vs_quadrature() {
    for lambda in [0.5, 1.0, 4.0] {
        for beta in [0.5, 1.0, 4.0] {
            let pf = periodic_fourier_coefficients(lambda, beta, 64).unwrap();
            assert!(
                pf.max_rel_err <= 1e-8,
                "(λ, β) = ({lambda}, {beta}): {:e}",
                pf.max_rel_err
            );
            assert!(pf.closed_form.iter().all(|&c| c >= 0.0));
        }
    }
}

#[test]
fn periodic_fourier_reconstructs_kernel() {
    // φ(x) = Σ_n c_n e^{2πinx/β}: partial sums converge to the kernel.
    let (lambda, beta) = (1.0, 2.0);
    let pf = periodic_fourier_coefficients(lambda, beta, 4000).unwrap();
    let x = 0.7;
    let mut sum = pf.closed_form[0];
    for n in 1..=4000usize {
        sum += 2.0 * pf.closed_form[n] * (2.0 * std::f64::consts::PI * n as f64 * x / beta).cos();
    }
    let phi = (-lambda * x).exp() + (-lambda * (beta - x)).exp();
    assert!((sum - phi).abs() < 1e-4, "sum {sum} phi {phi}");
}

#[test]
fn interval_check_single_positive_atom() {
    let rep = interval_rp_check(&[(1.5, 1.0)], 2.0, 24, 1e-8).unwrap();
    assert!(rep.group_kernel.is_psd());
    assert!(rep.semigroup_kernel.is_psd());
    assert!(rep.widder_slope <= 0.0);
    assert!(rep.widder_consistent);
}

#[test]
fn interval_check_periodic_atom_pair() {
    // μ = δ_λ + e^{-βλ} δ_{-λ} on the interval a = β/2.
    let (lambda, beta) = (1.0f64, 3.0f64);
    let measure = [(lambda, 1.0), (-lambda, (-beta * lambda).exp())];
    let rep = interval_rp_check(&measure, beta / 2.0, 24, 1e-8).unwrap();
    assert!(rep.widder_slope <= 1e-12, "slope {:e}", rep.widder_slope);
    assert!(rep.group_kernel.is_psd(), "min_eig {:e}", rep.group_kernel.min_eig);
    assert!(rep.semigroup_kernel.is_psd());
    assert!(rep.widder_consistent);
}

#[test]
fn interval_check_growing_exponential_fails() {
    // φ(t) = e^{|t|} is not positive definite on (-2, 2).
    let rep = interval_rp_check(&[(-1.0, 1.0)], 2.0, 24, 1e-8).unwrap();
    assert_eq!(rep.group_kernel.verdict, Verdict::NotPsd);
    assert!(rep.group_kernel.min_eig < -1e-6);
    assert!(rep.widder_slope > 0.0);
    assert!(rep.widder_consistent);
}

#[test]
fn interval_check_rejects_negative_weights() {
    assert!(matches!(
        interval_rp_check(&[(1.0, -0.5)], 1.0, 8, 1e-8),
        Err(KernelError::MeasureNotPositive { .. })
    ));
}

#[test]
fn custom_kernel_uses_sample_table() {
    let samples = oskit::CMat::identity(3, 3);
    let idx: Vec<Vec<f64>> = (0..3).map(|i| vec![i as f64]).collect();
    let g = gram(&KernelSpec::Custom { samples: samples.clone() }, &idx).unwrap();
    assert_eq!(g, samples);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Reflected exponential Grams are PSD for any positive points and rate.
    #[test]
    fn reflected_exp_gram_psd(
        lambda in 0.0f64..8.0,
        seed in 0u64..1_000,
    ) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let xs: Vec<f64> = (0..12).map(|_| rng.random_range(0.01..10.0)).collect();
        let g = reflected_gram(
            &KernelSpec::ExpLine { lambda },
            &ReflectionGeometry::Line,
            &pts1(&xs),
        ).unwrap();
        let rep = psd_verdict(&g, 1e-8).unwrap();
        prop_assert!(rep.is_psd());
    }

    /// Reflected periodic-Green Grams are PSD on (0, β/2) for any λ, β > 0.
    #[test]
    fn reflected_periodic_gram_psd(
        lambda in 0.05f64..5.0,
        beta in 0.2f64..6.0,
        seed in 0u64..1_000,
    ) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let xs: Vec<f64> = (0..10).map(|_| rng.random_range(1e-3..beta / 2.0 - 1e-3)).collect();
        let g = reflected_gram(
            &KernelSpec::PeriodicGreen { lambda, beta },
            &ReflectionGeometry::Circle { beta },
            &pts1(&xs),
        ).unwrap();
        let rep = psd_verdict(&g, 1e-8).unwrap();
        prop_assert!(rep.is_psd());
    }

    /// Whenever the boundary slope condition holds, both interval kernels
    /// are PSD (sufficiency instances).
    #[test]
    fn widder_sufficiency(
        l1 in 0.1f64..3.0,
        l2 in -1.0f64..3.0,
        w2 in 0.0f64..1.0,
        a in 0.3f64..2.5,
    ) {
        let measure = [(l1, 1.0), (l2, w2)];
        let rep = interval_rp_check(&measure, a, 16, 1e-8).unwrap();
        if rep.widder_slope <= 0.0 {
            prop_assert!(rep.widder_consistent);
            prop_assert!(rep.group_kernel.is_psd() && rep.semigroup_kernel.is_psd());
        }
    }
}

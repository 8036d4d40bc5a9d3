use num_complex::Complex64;
use oskit::kernel::psd_verdict;
use oskit::kms::*;
use oskit::report::complexify;
use oskit::{C64, CMat, CVec, RMat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn random_psd(rng: &mut ChaCha12Rng, d: usize) -> CMat {
    let a = CMat::from_fn(d, d, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    &a * a.adjoint()
}

#[test]
fn single_atom_strip_values() {
    let (lambda, beta) = (1.4, 2.0);
    let mu = KmsMeasure::scalar(beta, &[(lambda, 1.0)]).unwrap();
    for t in [0.0, 0.5, 1.3, beta] {
        let psi = kms_function(&mu, Complex64::new(0.0, t)).unwrap()[(0, 0)];
        let expect = (-t * lambda).exp() + (-(beta - t) * lambda).exp();
        assert!((psi.re - expect).abs() < 1e-14, "t = {t}");
        assert!(psi.im.abs() < 1e-15);
    }
}

#[test]
fn midpoint_value_is_real() {
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let beta = 1.7;
    let atoms = vec![(0.4, random_psd(&mut rng, 2)), (2.2, random_psd(&mut rng, 2))];
    let mu = KmsMeasure::new(beta, atoms).unwrap();
    let psi = kms_function(&mu, Complex64::new(0.0, beta / 2.0)).unwrap();
    assert!(psi.iter().map(|e| e.im.abs()).fold(0.0f64, f64::max) < 1e-13);
}

#[test]
fn kms_identity_on_atoms() {
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let beta = 0.9;
    let real_psd = {
        let a = RMat::from_fn(2, 2, |_, _| rng.random_range(-1.0..1.0));
        complexify(&(&a * a.transpose()))
    };
    let atoms = vec![
        (0.0, real_psd),
        (1.3, random_psd(&mut rng, 2)),
        (3.1, random_psd(&mut rng, 2)),
    ];
    let mu = KmsMeasure::new(beta, atoms).unwrap();
    let times: Vec<f64> = (0..20).map(|_| rng.random_range(-4.0..4.0)).collect();
    assert!(kms_residual(&mu, &times).unwrap() <= 1e-12);
    assert!(mu.symmetry_residual() <= 1e-15);
}

#[test]
fn strip_boundary_enforced() {
    let mu = KmsMeasure::scalar(1.0, &[(1.0, 1.0)]).unwrap();
    assert!(matches!(
        kms_function(&mu, Complex64::new(0.0, -0.1)),
        Err(KmsError::OutsideStrip { .. })
    ));
    assert!(matches!(
        kms_function(&mu, Complex64::new(0.0, 1.1)),
        Err(KmsError::OutsideStrip { .. })
    ));
    assert!(matches!(
        KmsMeasure::scalar(1.0, &[(-0.5, 1.0)]),
        Err(KmsError::NegativeLocation { .. })
    ));
    assert!(matches!(
        KmsMeasure::scalar(1.0, &[(0.5, -1.0)]),
        Err(KmsError::WeightNotPsd { .. })
    ));
}

#[test]
fn restriction_to_line_is_positive_definite() {
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    let beta = 1.2;
    let atoms = vec![(0.7, random_psd(&mut rng, 2)), (1.9, random_psd(&mut rng, 2))];
    let mu = KmsMeasure::new(beta, atoms).unwrap();
    let times: Vec<f64> = (0..7).map(|_| rng.random_range(-3.0..3.0)).collect();
    let mut g = CMat::zeros(14, 14);
    for (i, &ti) in times.iter().enumerate() {
        for (j, &tj) in times.iter().enumerate() {
            let block = kms_function(&mu, Complex64::new(ti - tj, 0.0)).unwrap();
            g.view_mut((2 * i, 2 * j), (2, 2)).copy_from(&block);
        }
    }
    let rep = psd_verdict(&g, 1e-9).unwrap();
    assert!(rep.is_psd(), "min_eig {:e}", rep.min_eig);
}

#[test]
fn zero_contraction_gives_identity_interpolation() {
    let cm = SkewContraction::new(RMat::zeros(3, 3)).unwrap();
    for t in [0.0, 0.3, 1.0] {
        let phi = phi_from_contraction(&cm, 1.0, t).unwrap();
        assert!((phi - CMat::identity(3, 3)).norm() < 1e-13);
    }
}

#[test]
fn interpolation_endpoints() {
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    let cm = random_skew(&mut rng, 4, 0.8);
    let beta = 1.6;
    let ic = complexify(cm.matrix()) * C64::new(0.0, 1.0);
    let start = phi_from_contraction(&cm, beta, 0.0).unwrap();
    let end = phi_from_contraction(&cm, beta, beta).unwrap();
    assert!((&start - (CMat::identity(4, 4) + &ic)).norm() < 1e-12);
    assert!((&end - (CMat::identity(4, 4) - &ic)).norm() < 1e-12);
    assert!((end - start.map(|e| e.conj())).norm() < 1e-12);
}

#[test]
fn uniform_contraction_matches_scalar_closed_form() {
    let (mu, beta) = (0.6, 1.0);
    let cm = SkewContraction::uniform(mu, 1).unwrap();
    for t in [0.2, 0.5, 0.9] {
        let phi = phi_from_contraction(&cm, beta, t).unwrap();
        let gp = (1.0 + mu).powf(1.0 - t / beta) * (1.0 - mu).powf(t / beta);
        let gm = (1.0 - mu).powf(1.0 - t / beta) * (1.0 + mu).powf(t / beta);
        let a = 0.5 * (gp + gm);
        let b = 0.5 * (gp - gm);
        // φ̃ = a·1 + b·(iC/μ) on the two-dimensional rotation block.
        let expect = CMat::identity(2, 2) * C64::new(a, 0.0)
            + complexify(cm.matrix()) * C64::new(0.0, b / mu);
        assert!((phi - expect).norm() < 1e-13, "t = {t}");
    }
}

#[test]
fn twisted_periodicity_and_evenness() {
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let cm = random_skew(&mut rng, 4, 0.7);
    let beta = 0.8;
    for _ in 0..20 {
        let t = rng.random_range(-3.0..3.0);
        let a = phi_global(&cm, beta, t + beta).unwrap();
        let b = phi_global(&cm, beta, t).unwrap().map(|e| e.conj());
        assert!((a - b).norm() < 1e-12);
        let even = phi_global(&cm, beta, -t).unwrap();
        let base = phi_global(&cm, beta, t).unwrap();
        assert!((even - base).norm() < 1e-12);
    }
}

#[test]
fn contraction_validation() {
    let mut not_skew = RMat::zeros(2, 2);
    not_skew[(0, 1)] = 0.3;
    assert!(matches!(SkewContraction::new(not_skew), Err(KmsError::NotSkew { .. })));
    assert!(matches!(
        SkewContraction::uniform(1.0, 1),
        Err(KmsError::NotStrictContraction { .. })
    ));
}

#[test]
fn polar_factorization_consistency() {
    let mut rng = ChaCha12Rng::seed_from_u64(13);
    let cm = random_skew(&mut rng, 6, 0.9);
    assert!(cm.polar_residual() < 1e-12);
    // On full support the complex structure squares to -1.
    let ii = cm.complex_structure() * cm.complex_structure();
    assert!((ii + RMat::identity(6, 6)).norm() < 1e-10);
    // |C| is the PSD factor with the same norm.
    assert!((oskit::report::op_norm_real(cm.abs()) - cm.norm()).abs() < 1e-12);
}

#[test]
fn extension_kernels_psd_for_zero_contraction() {
    let cm = SkewContraction::new(RMat::zeros(2, 2)).unwrap();
    let grid: Vec<f64> = (0..8).map(|k| 0.5 * k as f64 / 7.0).collect();
    let rep = rp_extension_check(&cm, 1.0, &grid, 1e-8).unwrap();
    assert!(rep.group_pd.is_psd());
    assert!(rep.reflected_pd.is_psd());
}

#[test]
fn extension_kernels_psd_for_uniform_contraction() {
    let cm = SkewContraction::uniform(0.5, 1).unwrap();
    let beta = 1.0;
    let grid: Vec<f64> = (0..16).map(|k| 0.5 * k as f64 / 15.0).collect();
    let rep = rp_extension_check(&cm, beta, &grid, 1e-8).unwrap();
    assert!(rep.group_pd.is_psd(), "group min_eig {:e}", rep.group_pd.min_eig);
    assert!(
        rep.reflected_pd.is_psd(),
        "reflected min_eig {:e}",
        rep.reflected_pd.min_eig
    );
}

#[test]
fn extension_kernels_psd_for_generic_contraction() {
    let mut rng = ChaCha12Rng::seed_from_u64(21);
    let cm = random_skew(&mut rng, 4, 0.85);
    let grid: Vec<f64> = (0..10).map(|k| 0.35 * k as f64 / 9.0).collect();
    let rep = rp_extension_check(&cm, 0.7, &grid, 1e-8).unwrap();
    assert!(rep.group_pd.is_psd(), "group min_eig {:e}", rep.group_pd.min_eig);
    assert!(
        rep.reflected_pd.is_psd(),
        "reflected min_eig {:e}",
        rep.reflected_pd.min_eig
    );
}

#[test]
fn sign_flipped_odd_part_breaks_positivity() {
    let cm = SkewContraction::uniform(0.5, 1).unwrap();
    let grid: Vec<f64> = (0..16).map(|k| 0.5 * k as f64 / 15.0).collect();
    let rep = rp_extension_negative_control(&cm, 1.0, &grid, 1e-8).unwrap();
    assert!(
        !rep.group_pd.is_psd(),
        "flipped group kernel unexpectedly PSD (min_eig {:e})",
        rep.group_pd.min_eig
    );
    // The flip conjugates the reflected sum-kernel entrywise, which cannot
    // change its spectrum: that kernel stays PSD by construction.
    assert!(rep.reflected_pd.is_psd());
}

#[test]
fn extension_rejects_out_of_range_grid() {
    let cm = SkewContraction::uniform(0.3, 1).unwrap();
    assert!(matches!(
        rp_extension_check(&cm, 1.0, &[0.7], 1e-8),
        Err(KmsError::BadParams(_))
    ));
}

#[test]
fn matsubara_closed_forms() {
    let (lambda, beta) = (1.3, 0.8);
    let rep = matsubara(lambda, beta, 8, 12).unwrap();
    assert!((rep.c_minus - 2.0 * lambda / beta).abs() < 1e-15);
    assert!((rep.c_plus - (beta * lambda / 2.0).tanh() * 2.0 * lambda / beta).abs() < 1e-15);
    let pi = std::f64::consts::PI;
    for n in 0..=8usize {
        let omega = n as f64 * pi / beta;
        let pref = if n % 2 == 0 { rep.c_plus } else { rep.c_minus };
        assert!((rep.coefficients[n] - pref / (lambda * lambda + omega * omega)).abs() < 1e-15);
    }
}

#[test]
fn matsubara_fft_check_converges() {
    // With 2^20 samples the aliasing floor sits well below 1e-6 out to n=32.
    let rep = matsubara(1.0, 2.0, 32, 20).unwrap();
    assert!(rep.fft_residual <= 1e-6, "residual {:e}", rep.fft_residual);
    // The 2^12 default sampling resolves the same coefficients only to the
    // ~ (n/N)² aliasing floor.
    let coarse = matsubara(1.0, 2.0, 32, 12).unwrap();
    assert!(coarse.fft_residual <= 1e-3);
}

#[test]
fn matsubara_against_direct_quadrature() {
    // c_n = (1/2β) ∫_0^{2β} u(t) e^{-iπnt/β} dt, integrating the two smooth
    // halves separately.
    let (lambda, beta) = (0.9, 1.4);
    let rep = matsubara(lambda, beta, 6, 12).unwrap();
    let pi = std::f64::consts::PI;
    for n in 0..=6usize {
        let odd = n % 2 == 1;
        let omega = n as f64 * pi / beta;
        let f = |t: f64| {
            C64::new(0.0, -omega * t).exp()
                * C64::new(boundary_mode(lambda, beta, t, odd), 0.0)
        };
        let integral = oskit::quad::integrate_c(f, 0.0, beta, 16, 24)
            + oskit::quad::integrate_c(f, beta, 2.0 * beta, 16, 24);
        let quad = integral.re / (2.0 * beta);
        assert!(
            (quad - rep.coefficients[n]).abs() <= 1e-10 * rep.coefficients[n].abs(),
            "n = {n}: quad {quad} closed {}",
            rep.coefficients[n]
        );
    }
}

#[test]
fn interpolation_modes_match_boundary_modes() {
    // For |C| = μ·1 the even/odd parts of φ̃ are the rate log((1+μ)/(1-μ))/β
    // boundary modes.
    let (mu, beta) = (0.4, 1.3);
    let cm = SkewContraction::uniform(mu, 1).unwrap();
    let rate = ((1.0 + mu) / (1.0 - mu)).ln() / beta;
    // With e^{-β·rate} = (1-μ)/(1+μ) the boundary-mode normalization
    // 1/(1 + e^{-β·rate}) = (1+μ)/2 makes the parts of φ̃ the boundary modes
    // exactly.
    let scale = 1.0;
    for t in [0.0, 0.1, 0.5, 0.9, 1.25, 1.3, 1.9, -0.4] {
        let (u_plus, u_minus) = even_odd_parts(&cm, beta, t).unwrap();
        let expect_even = scale * boundary_mode(rate, beta, t, false);
        assert!(
            (u_plus[(0, 0)] - expect_even).abs() < 1e-12,
            "even part at t = {t}: {} vs {expect_even}",
            u_plus[(0, 0)]
        );
        // The odd part lives on the rotation generator; compare its scalar
        // coefficient against the odd boundary mode up to evenness of the
        // global extension (the extension of φ̃ is even in t, the odd
        // boundary mode is not, so compare through the folded time).
        let mut s = t.rem_euclid(2.0 * beta);
        if s > beta {
            s = 2.0 * beta - s;
        }
        let expect_odd = scale * boundary_mode(rate, beta, s, true);
        assert!(
            (u_minus[(0, 0)] - expect_odd).abs() < 1e-12,
            "odd part at t = {t}: {} vs {expect_odd}",
            u_minus[(0, 0)]
        );
    }
}

#[test]
fn trivial_modular_pair_has_zero_contraction() {
    let model = StandardSubspaceModel::new(vec![], 3).unwrap();
    let rt = standard_subspace_roundtrip(&model).unwrap();
    assert_eq!(rt.contraction.matrix().norm(), 0.0);
    assert!(rt.basis_residual < 1e-14);
    assert_eq!(rt.v_iv_rank, 6);
}

#[test]
fn two_dim_modular_pair_closed_form_norm() {
    for delta in [1.5, 4.0, 10.0] {
        let model = StandardSubspaceModel::new(vec![delta], 0).unwrap();
        let rt = standard_subspace_roundtrip(&model).unwrap();
        let expect = (delta - 1.0) / (delta + 1.0);
        assert!(
            (rt.contraction.norm() - expect).abs() < 1e-12,
            "δ = {delta}: got {}",
            rt.contraction.norm()
        );
        assert_eq!(rt.v_iv_rank, 4);
    }
}

#[test]
fn mixed_model_roundtrip() {
    let model = StandardSubspaceModel::new(vec![2.0, 5.0], 1).unwrap();
    assert!(model.modular_relation_residual() < 1e-15);
    let rt = standard_subspace_roundtrip(&model).unwrap();
    assert!(rt.basis_residual < 1e-12);
    assert!(rt.contraction.norm() < 1.0);
    assert_eq!(rt.v_iv_rank, 2 * model.dim());
}

#[test]
fn from_parts_validates_modular_relation() {
    assert!(StandardSubspaceModel::from_parts(&[2.0, 0.5, 1.0], &[1, 0, 2]).is_ok());
    assert!(matches!(
        StandardSubspaceModel::from_parts(&[2.0, 0.4, 1.0], &[1, 0, 2]),
        Err(KmsError::ModularRelationViolated { .. })
    ));
    assert!(matches!(
        StandardSubspaceModel::from_parts(&[2.0, 0.5], &[1, 1]),
        Err(KmsError::BadParams(_))
    ));
}

#[test]
fn modular_flow_pairing_matches_interpolation() {
    // ⟨Δ^{t/2β}ξ, Δ^{t/2β}η⟩ on the modular pair equals the interpolation
    // pairing xᵀ φ̃(t) y in V-coordinates.
    let model = StandardSubspaceModel::new(vec![3.0, 1.7], 1).unwrap();
    let rt = standard_subspace_roundtrip(&model).unwrap();
    let beta = 1.0;
    let basis = model.v_basis();
    let mut rng = ChaCha12Rng::seed_from_u64(17);
    for _ in 0..10 {
        let t = rng.random_range(0.0..beta);
        let phi = phi_from_contraction(&rt.contraction, beta, t).unwrap();
        let x: Vec<f64> = (0..basis.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..basis.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let xi: CVec = basis
            .iter()
            .zip(&x)
            .map(|(e, &c)| e * C64::new(c, 0.0))
            .fold(CVec::zeros(model.dim()), |acc, v| acc + v);
        let eta: CVec = basis
            .iter()
            .zip(&y)
            .map(|(e, &c)| e * C64::new(c, 0.0))
            .fold(CVec::zeros(model.dim()), |acc, v| acc + v);
        let flow = model.delta_power(t / (2.0 * beta));
        let lhs = (&flow * &xi).dotc(&(&flow * &eta));
        let xc = CVec::from_iterator(x.len(), x.iter().map(|&c| C64::new(c, 0.0)));
        let yc = CVec::from_iterator(y.len(), y.iter().map(|&c| C64::new(c, 0.0)));
        let rhs = xc.dotc(&(&phi * &yc));
        assert!((lhs - rhs).norm() < 1e-10, "t = {t}: lhs {lhs} rhs {rhs}");
    }
}

fn random_skew(rng: &mut ChaCha12Rng, d: usize, target_norm: f64) -> SkewContraction {
    let a = RMat::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    let skew = &a - a.transpose();
    let norm = oskit::report::op_norm_real(&skew);
    SkewContraction::new(skew * (target_norm / norm)).unwrap()
}

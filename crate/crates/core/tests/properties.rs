use aqg_core::lemmas::{random_band_limited_field, FieldEnsembleSpec};
use aqg_core::norms::{gevrey_sobolev_norm, gevrey_weighted_norm, lp_norm, sobolev_norm};
use aqg_core::spectral::{apply_semigroup, dissipation_symbol, riesz_velocity};
use aqg_core::{Complex64, DissipParams, GridSpec, SpectralContext, SpectralField};
use proptest::prelude::*;

fn field(n: usize, seed: u64, kmax: usize, slope: f64) -> SpectralField {
    let grid = GridSpec::square(n).unwrap();
    let spec = FieldEnsembleSpec {
        seed,
        count: 1,
        kmax,
        spectrum_slope: slope,
    };
    random_band_limited_field(grid, &spec, 0)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn exponent() -> impl Strategy<Value = f64> {
    0.05f64..0.95
}

fn assert_symmetric(f: &SpectralField) {
    assert!(
        f.is_hermitian(1e-14 * f.max_abs_coeff().max(1.0)),
        "defect {}",
        f.hermitian_defect()
    );
    assert!(f.mean().norm() <= 1e-14 * f.max_abs_coeff().max(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operations_keep_hermitian_symmetry_and_zero_mean(
        seed in any::<u64>(), kmax in 1usize..6, slope in 0.5f64..3.0,
        alpha in exponent(), beta in exponent(), t in 0.0f64..2.0,
    ) {
        let ctx = SpectralContext::new(GridSpec::square(16).unwrap());
        let p = DissipParams::unit(alpha, beta, 1.0).unwrap();
        let f = field(16, seed, kmax, slope);
        assert_symmetric(&f);
        let (u1, u2) = riesz_velocity(&f).unwrap();
        assert_symmetric(&u1);
        assert_symmetric(&u2);
        assert_symmetric(&apply_semigroup(&f, t, &p).unwrap());
        assert_symmetric(&ctx.nonlinear_term(&f).unwrap());
        assert_symmetric(&f.dealiased());
    }

    #[test]
    fn riesz_velocity_is_an_l2_isometry(seed in any::<u64>(), kmax in 1usize..6, slope in 0.0f64..3.0) {
        let f = field(16, seed, kmax, slope);
        let (u1, u2) = riesz_velocity(&f).unwrap();
        prop_assert!(rel(u1.energy() + u2.energy(), f.energy()) < 1e-14);
    }

    #[test]
    fn semigroup_contracts_and_composes(
        seed in any::<u64>(), alpha in exponent(), beta in exponent(),
        t1 in 0.0f64..1.5, t2 in 0.0f64..1.5, sigma in -1.0f64..3.0,
    ) {
        let p = DissipParams::new(alpha, beta, 0.7, 1.3, 1.0).unwrap();
        let f = field(16, seed, 5, 1.5);
        let a = apply_semigroup(&f, t1, &p).unwrap();
        prop_assert!(sobolev_norm(&a, sigma, false) <= sobolev_norm(&f, sigma, false));
        let ab = apply_semigroup(&a, t2, &p).unwrap();
        let direct = apply_semigroup(&f, t1 + t2, &p).unwrap();
        prop_assert!(sobolev_norm(&(&ab - &direct), 0.0, false) <= 1e-14 * sobolev_norm(&f, 0.0, false));
    }

    #[test]
    fn nonlinearity_vanishes_on_lines_through_the_origin(
        a in -3i64..=3, b in -3i64..=3, amps in proptest::collection::vec(-1.0f64..1.0, 2..5),
        phases in proptest::collection::vec(0.0f64..6.3, 4),
    ) {
        prop_assume!(a != 0 || b != 0);
        // all modes stay inside the dealiased band
        let ctx = SpectralContext::new(GridSpec::square(64).unwrap());
        let modes: Vec<((i64, i64), Complex64)> = amps
            .iter()
            .zip(&phases)
            .enumerate()
            .map(|(m, (&r, &ph))| {
                let m = m as i64 + 1;
                ((m * a, m * b), Complex64::from_polar(r, ph))
            })
            .collect();
        let f = SpectralField::from_modes(ctx.grid(), &modes);
        let n = ctx.nonlinear_term(&f).unwrap();
        prop_assert!(n.max_abs_coeff() <= 1e-12, "{}", n.max_abs_coeff());
    }

    #[test]
    fn multiplier_equivalence_for_equal_exponents(alpha in exponent(), k1 in -200i64..=200, k2 in -200i64..=200) {
        prop_assume!(k1 != 0 || k2 != 0);
        let p = DissipParams::unit(alpha, alpha, 1.0).unwrap();
        let r2 = (k1 * k1 + k2 * k2) as f64;
        let q = dissipation_symbol((k1, k2), &p) / r2.powf(alpha);
        prop_assert!(q >= 1.0 - 1e-12);
        prop_assert!(q <= 2f64.powf(1.0 - alpha) * (1.0 + 1e-12));
    }

    #[test]
    fn sobolev_norm_is_monotone_in_s(seed in any::<u64>(), s1 in -2.0f64..3.0, ds in 0.0f64..2.0) {
        let f = field(16, seed, 5, 1.0);
        prop_assert!(sobolev_norm(&f, s1, false) <= sobolev_norm(&f, s1 + ds, false) * (1.0 + 1e-15));
    }

    #[test]
    fn interpolation_holds_and_is_sharp_on_single_modes(
        seed in any::<u64>(), s1 in -1.0f64..2.0, ds in 0.01f64..2.0, t in 0.0f64..1.0,
        k1 in -5i64..=5, k2 in -5i64..=5,
    ) {
        let s2 = s1 + ds;
        let s = t * s1 + (1.0 - t) * s2;
        let f = field(16, seed, 5, 1.0);
        for hom in [false, true] {
            let lhs = sobolev_norm(&f, s, hom);
            let rhs = sobolev_norm(&f, s1, hom).powf(t) * sobolev_norm(&f, s2, hom).powf(1.0 - t);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }
        prop_assume!(k1 != 0 || k2 != 0);
        let single = SpectralField::cosine(f.grid(), k1, k2, 0.3);
        for hom in [false, true] {
            let lhs = sobolev_norm(&single, s, hom);
            let rhs = sobolev_norm(&single, s1, hom).powf(t) * sobolev_norm(&single, s2, hom).powf(1.0 - t);
            prop_assert!(rel(lhs, rhs) < 1e-12);
        }
    }

    #[test]
    fn l2_quadrature_matches_parseval(seed in any::<u64>(), kmax in 1usize..10, slope in 0.0f64..3.0) {
        let ctx = SpectralContext::new(GridSpec::square(32).unwrap());
        let f = field(32, seed, kmax, slope);
        let l2 = lp_norm(&ctx, &f, 2.0).unwrap();
        prop_assert!(rel(l2, sobolev_norm(&f, 0.0, false)) < 1e-12);
    }

    #[test]
    fn weighted_norm_is_gevrey_sobolev_on_axis_modes(
        alpha in 0.3f64..0.95, t in 0.0f64..1.0, s in -1.0f64..2.0, m in 1i64..10, axis in 0usize..2,
    ) {
        let p = DissipParams::unit(alpha, alpha, s).unwrap();
        let g = GridSpec::square(32).unwrap();
        let (k1, k2) = if axis == 0 { (m, 0) } else { (0, m) };
        let f = SpectralField::sine(g, k1, k2, 1.0);
        let w = gevrey_weighted_norm(&f, t, s, &p).unwrap().value;
        let gs = gevrey_sobolev_norm(&f, t, 1.0 / alpha, s);
        prop_assert!(rel(w, gs) < 1e-12);
    }
}

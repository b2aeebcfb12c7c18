//! Randomized invariants, checked against independent dense oracles where one exists.

mod common;

use approx::assert_relative_eq;
use common::{c, char_poly_by_expansion, dense_eigenvalues, symmetric_eigenvalues};
use hermite_biehler::hb::{classical_combine, classical_split, hb_verify};
use hermite_biehler::hodograph::{phase, phase_increment};
use hermite_biehler::jacobi::{reconstruct, spectral_weights};
use hermite_biehler::perturb::{build, hausdorff, inverse_additive, inverse_multiplicative, spectrum};
use hermite_biehler::{JacobiMatrix, PerturbationSpec, RealPoly, ZeroSet};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn jacobi(max_n: usize) -> impl Strategy<Value = JacobiMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(-2.0..2.0f64, n),
            prop::collection::vec(0.3..2.0f64, n - 1),
        )
            .prop_map(|(b, a)| JacobiMatrix::new(b, a).unwrap())
    })
}

fn zero_sets(max_n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(
        (-3.0..3.0f64, 0.1..3.0f64, any::<bool>()).prop_map(|(re, im, up)| c(re, if up { im } else { -im })),
        1..=max_n,
    )
}

fn spec() -> impl Strategy<Value = PerturbationSpec> {
    prop_oneof![
        (0.05..2.0f64).prop_map(|l| PerturbationSpec::Additive { l }),
        (-2.0..-0.05f64).prop_map(|l| PerturbationSpec::Additive { l }),
        (0.05..3.0f64).prop_map(|k| PerturbationSpec::Multiplicative { k }),
        (0.05..2.0f64, 0.05..2.0f64).prop_map(|(l, m)| PerturbationSpec::Rank2 { l, m }),
    ]
}

fn scale(zs: &[Complex64]) -> f64 {
    1.0 + zs.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn weights_are_first_eigenvector_components(j in jacobi(7)) {
        prop_assume!(j.n() >= 2);
        let lams = j.eigenvalues().unwrap();
        let mus = j.truncate(1).unwrap().eigenvalues().unwrap();
        let w = spectral_weights(&lams, &mus).unwrap();
        prop_assert!(w.iter().all(|&x| x > 0.0));
        assert_relative_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-10);

        let d = j.to_dense();
        let m = DMatrix::from_fn(j.n(), j.n(), |r, s| d[r][s]);
        let eig = m.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> =
            (0..j.n()).map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2))).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (wk, (_, u2)) in w.iter().zip(&pairs) {
            assert_relative_eq!(*wk, *u2, epsilon = 1e-8);
        }
    }

    #[test]
    fn char_polys_vanish_on_truncation_spectra(j in jacobi(7)) {
        let polys = j.char_polys();
        for (k, p) in polys.iter().take(j.n()).enumerate() {
            let t = j.truncate(k).unwrap();
            prop_assert!(p.is_monic());
            prop_assert_eq!(p.degree(), t.n());
            let oracle = symmetric_eigenvalues(&t.to_dense());
            let roots = p.real_roots().unwrap();
            for (r, e) in roots.iter().zip(&oracle) {
                prop_assert!((r - e).abs() < 1e-9 * (1.0 + e.abs()), "{r} vs {e}");
            }
        }
    }

    #[test]
    fn reconstruct_round_trip(j in jacobi(8)) {
        prop_assume!(j.n() >= 2);
        let lams = j.eigenvalues().unwrap();
        let mus = j.truncate(1).unwrap().eigenvalues().unwrap();
        let back = reconstruct(&lams, &mus).unwrap();
        prop_assert!(back.max_abs_diff(&j) < 1e-7, "diff {}", back.max_abs_diff(&j));
    }

    #[test]
    fn perturbed_spectrum_matches_dense_eigenvalues(j in jacobi(8), s in spec()) {
        prop_assume!(j.n() >= 2 || !matches!(s, PerturbationSpec::Rank2 { .. }));
        let zs = spectrum(&j, s).unwrap();
        let m = build(&j, s).unwrap();
        let oracle = dense_eigenvalues(&m.entries);
        prop_assert_eq!(zs.len(), j.n());
        prop_assert!(hausdorff(zs.zeros(), &oracle) <= 1e-8 * scale(&oracle));
    }

    #[test]
    fn perturbed_char_poly_matches_expansion(j in jacobi(6), s in spec()) {
        prop_assume!(j.n() >= 2 || !matches!(s, PerturbationSpec::Rank2 { .. }));
        let p = hermite_biehler::perturb::perturbed_char_poly(&j, s).unwrap();
        let m = build(&j, s).unwrap();
        let oracle = char_poly_by_expansion(&m.entries);
        for (x, y) in p.coeffs().iter().zip(&oracle) {
            prop_assert!((x - y).norm() <= 1e-10 * (1.0 + y.norm()), "{x} vs {y}");
        }
    }

    #[test]
    fn additive_zeros_follow_the_sign_of_l(j in jacobi(6), l in 0.05..2.0f64, up in any::<bool>()) {
        let l = if up { l } else { -l };
        let zs = spectrum(&j, PerturbationSpec::Additive { l }).unwrap();
        let n = j.n();
        if up {
            prop_assert_eq!(zs.n_plus(), n);
        } else {
            prop_assert_eq!(zs.n_minus(), n);
        }
    }

    #[test]
    fn translation_shifts_the_spectrum(j in jacobi(6), l in 0.05..2.0f64, shift in -3.0..3.0f64) {
        let moved = JacobiMatrix::new(j.b().iter().map(|b| b + shift).collect(), j.a().to_vec()).unwrap();
        let s = PerturbationSpec::Additive { l };
        let base: Vec<Complex64> = spectrum(&j, s).unwrap().zeros().iter().map(|z| z + shift).collect();
        let zs = spectrum(&moved, s).unwrap();
        prop_assert!(hausdorff(zs.zeros(), &base) <= 1e-9 * scale(&base));
    }

    #[test]
    fn additive_inverse_round_trip(j in jacobi(6), l in 0.05..2.0f64) {
        let zs = spectrum(&j, PerturbationSpec::Additive { l }).unwrap();
        let sol = inverse_additive(&zs).unwrap();
        prop_assert!((sol.l - l).abs() < 1e-7 * (1.0 + l));
        prop_assert!(sol.jacobi.max_abs_diff(&j) < 1e-6, "diff {}", sol.jacobi.max_abs_diff(&j));
    }

    #[test]
    fn multiplicative_inverse_round_trip(j in jacobi(5), k in 0.05..3.0f64) {
        let zs = spectrum(&j, PerturbationSpec::Multiplicative { k }).unwrap();
        let sol = inverse_multiplicative(&zs, Some(k)).unwrap();
        prop_assert!(sol.jacobi.max_abs_diff(&j) < 1e-6, "diff {}", sol.jacobi.max_abs_diff(&j));
    }

    #[test]
    fn classical_combine_split_round_trip(j in jacobi(7), l in 0.05..3.0f64) {
        prop_assume!(j.n() >= 2);
        let polys = j.char_polys();
        let (p, q) = (&polys[0], &polys[1]);
        let h = classical_combine(p, q, l).unwrap();
        let split = classical_split(&h).unwrap();
        prop_assert!((split.l - l).abs() < 1e-12 * (1.0 + l));
        let q2: RealPoly = split.q.unwrap();
        for (x, y) in split.p.coeffs().iter().zip(p.coeffs()) {
            prop_assert!((x - y).abs() < 1e-12 * (1.0 + y.abs()));
        }
        for (x, y) in q2.coeffs().iter().zip(q.coeffs()) {
            prop_assert!((x - y).abs() < 1e-12 * (1.0 + y.abs()));
        }
        let diag = hb_verify(p, q, l).unwrap();
        prop_assert!(diag.holds && diag.roots_in_upper && diag.consistent);
    }

    #[test]
    fn phase_increment_counts_half_planes(zs in zero_sets(8)) {
        let zs = ZeroSet::new(zs);
        let inc = phase_increment(&zs).unwrap();
        let expected = std::f64::consts::PI * (zs.n_plus() as f64 - zs.n_minus() as f64);
        prop_assert!((inc.numeric - expected).abs() < 1e-6);
    }

    #[test]
    fn phase_increases_for_upper_zeros(zs in zero_sets(6)) {
        let zs = ZeroSet::new(zs.into_iter().map(|z| c(z.re, z.im.abs())).collect());
        let ts: Vec<f64> = (0..400).map(|i| -20.0 + 0.1 * i as f64).collect();
        let phis: Vec<f64> = ts.iter().map(|&t| phase(&zs, t).unwrap()).collect();
        prop_assert!(phis.windows(2).all(|w| w[1] > w[0]));
    }
}

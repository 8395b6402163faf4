use proptest::prelude::*;

use riesz::algebra_core::{DiagonalElement, Lane, TailRule};
use riesz::calculus::{spectral_idempotent, Method};
use riesz::gdr::{auto_window, characterize, drazin_window_inverse, is_gdr_inverse, SpectralWindow};
use riesz::generate::Generator;
use riesz::spectra::{self, SpectralSet};
use riesz::{AlgebraElement, Config, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 32, ..ProptestConfig::default() }
}

fn element(seed: u64) -> AlgebraElement {
    Generator::new(seed).sample().element
}

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| c(a, b))
}

fn ratio() -> impl Strategy<Value = C64> {
    (0.05..0.9f64, 0.0..6.3f64).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn geometric_tail(ratio: C64) -> impl Strategy<Value = TailRule> {
    (complex(2.0), complex(1.0)).prop_map(move |(base, alpha)| TailRule::geometric(base, alpha, ratio).unwrap())
}

fn tail_pair() -> impl Strategy<Value = (TailRule, TailRule)> {
    ratio().prop_flat_map(|r| (geometric_tail(r), geometric_tail(r)))
}

fn lane() -> impl Strategy<Value = Lane> {
    (prop::collection::vec(complex(2.0), 0..4), ratio().prop_flat_map(geometric_tail)).prop_map(|(p, t)| Lane::new(p, t))
}

fn diagonal() -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec(lane(), 1..3).prop_map(|l| DiagonalElement::new(l).unwrap().into())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn multiplication_is_associative(seed in any::<u64>()) {
        let a = element(seed);
        // Tails only combine over a shared base, so stay in the algebra generated by `a`.
        let b = a.shift(c(0.5, -0.25));
        let x = a.pow(2).unwrap().scale(c(0.0, 1.0));
        let lhs = a.mul(&b).unwrap().mul(&x).unwrap();
        let rhs = a.mul(&b.mul(&x).unwrap()).unwrap();
        let scale = 1.0 + a.norm() * b.norm() * x.norm();
        prop_assert!(lhs.dist(&rhs).unwrap() <= 1e-12 * scale);
    }

    #[test]
    fn norm_is_submultiplicative_and_adjoint_invariant(seed in any::<u64>()) {
        let a = element(seed);
        let b = a.adjoint();
        let sq = a.mul(&a).unwrap();
        prop_assert!(sq.norm() <= a.norm() * a.norm() * (1.0 + 1e-12) + 1e-15);
        prop_assert!((b.norm() - a.norm()).abs() <= 1e-12 * (1.0 + a.norm()));
        prop_assert!(b.adjoint().dist(&a).unwrap() == 0.0);
    }

    #[test]
    fn spectral_radius_is_bounded_by_the_norm(seed in any::<u64>()) {
        let a = element(seed);
        prop_assert!(a.spectral_radius() <= a.norm() * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn far_shifts_invert(seed in any::<u64>()) {
        let cfg = Config::default();
        let a = element(seed);
        let lambda = c(a.norm() + 1.0, 0.0);
        let x = a.shifted_neg(lambda);
        let inv = x.invert(&cfg).unwrap();
        let unit = a.unit();
        prop_assert!(x.mul(&inv).unwrap().dist(&unit).unwrap() <= 1e-10);
        prop_assert!(inv.mul(&x).unwrap().dist(&unit).unwrap() <= 1e-10);
    }

    #[test]
    fn tail_arithmetic_is_pointwise((a, b) in tail_pair(), n in 0u64..200) {
        let sum = a.add(&b).unwrap();
        let prod = a.mul(&b).unwrap();
        let (x, y) = (a.value(n), b.value(n));
        prop_assert!((sum.value(n) - (x + y)).norm() <= 1e-12 * (1.0 + x.norm() + y.norm()));
        prop_assert!((prod.value(n) - x * y).norm() <= 1e-12 * (1.0 + x.norm() * y.norm()));
        prop_assert!((a.conj().value(n) - x.conj()).norm() == 0.0);
    }

    #[test]
    fn diagonal_products_are_lanewise(a in diagonal(), n in 0u64..50) {
        let sq = a.mul(&a).unwrap();
        let (da, ds) = (a.as_diagonal().unwrap(), sq.as_diagonal().unwrap());
        for lane in 0..da.lane_count() {
            let v = da.value(lane, n);
            prop_assert!((ds.value(lane, n) - v * v).norm() <= 1e-12 * (1.0 + v.norm_sqr()));
        }
    }

    #[test]
    fn spectra_are_nested(seed in any::<u64>()) {
        let cfg = Config::default();
        let a = element(seed);
        let sigma = spectra::spectrum(&a, &cfg);
        let sigma_e = spectra::essential_spectrum(&a, &cfg);
        let sigma_b = spectra::browder_spectrum(&a, &cfg);
        let sigma_dr = spectra::gdr_spectrum(&a, &cfg);
        let tol = 1e-6;
        prop_assert!(sigma_e.excess(&sigma_b) <= tol);
        prop_assert!(sigma_b.excess(&sigma) <= tol);
        prop_assert!(sigma_dr.excess(&sigma_b) <= tol);
    }

    #[test]
    fn adjoint_conjugates_the_spectrum(seed in any::<u64>()) {
        let cfg = Config::default();
        let a = Generator::new(seed).gdr_diagonal();
        let lhs = spectra::spectrum(&a.adjoint(), &cfg);
        let rhs = spectra::spectrum(&a, &cfg).conj();
        prop_assert!(lhs.hausdorff(&rhs) <= 1e-9);
    }

    #[test]
    fn shifting_moves_point_spectrum(seed in any::<u64>(), mu in complex(1.0)) {
        let cfg = Config::default();
        let a = Generator::new(seed).gdr_block();
        let shifted: Vec<C64> = spectra::spectrum(&a, &cfg).point_values().into_iter().map(|z| z + mu).collect();
        let expect = SpectralSet::from_points(&shifted, cfg.cluster_radius);
        let got = spectra::spectrum(&a.shift(mu), &cfg);
        prop_assert!(got.hausdorff(&expect) <= 1e-6);
    }

    #[test]
    fn planted_idempotent_is_a_commuting_projection(seed in any::<u64>()) {
        let cfg = Config::default();
        let g = Generator::new(seed).planted_gap();
        let p = spectral_idempotent(&g.element, &g.target, Method::Exact, &cfg).unwrap();
        let scale = 1.0 + p.norm() * p.norm();
        prop_assert!(p.idempotent_residual().unwrap() <= 1e-9 * scale);
        prop_assert!(p.commutator(&g.element).unwrap() <= 1e-9 * scale * (1.0 + g.element.norm()));
    }

    #[test]
    fn whole_spectrum_gives_the_unit(seed in any::<u64>()) {
        let cfg = Config::default();
        let a = Generator::new(seed).gdr_block();
        let sigma = spectra::spectrum(&a, &cfg);
        let p = spectral_idempotent(&a, &sigma, Method::Exact, &cfg).unwrap();
        prop_assert!(p.dist(&a.unit()).unwrap() <= 1e-9);
    }

    #[test]
    fn characterization_is_consistent(seed in any::<u64>()) {
        let cfg = Config::default();
        let s = Generator::new(seed).sample();
        let rep = characterize(&s.element, &cfg).unwrap();
        prop_assert!(rep.consistent());
        if s.expected_gdr() {
            prop_assert!(rep.gdr());
        }
    }

    #[test]
    fn window_inverse_certifies_itself(seed in any::<u64>()) {
        let cfg = Config::default();
        let a = Generator::new(seed).gdr_diagonal();
        let w = auto_window(&a, &cfg).unwrap();
        let cert = drazin_window_inverse(&a, &w, None, &cfg).unwrap();
        prop_assert!(cert.valid);
        let again = is_gdr_inverse(&a, &cert.inverse, &cfg).unwrap();
        prop_assert!(again.valid);
        prop_assert_eq!(cert.window_n, Some(w.n));
    }

    #[test]
    fn windows_shrink_with_index(seed in any::<u64>()) {
        let cfg = Config::default();
        let a = Generator::new(seed).gdr_diagonal();
        let w0 = SpectralWindow::at(&a, 0, &cfg).unwrap();
        let w1 = SpectralWindow::at(&a, 1, &cfg);
        prop_assume!(w1.is_ok());
        let w1 = w1.unwrap();
        prop_assert!(w1.r_n <= w0.r_n + 1e-12);
        prop_assert!(w0.sigma_n.excess(&spectra::spectrum(&a, &cfg)) <= 1e-9);
    }
}

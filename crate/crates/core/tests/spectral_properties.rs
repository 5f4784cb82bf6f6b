mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steklov_core::bounds::half_product;
use steklov_core::families::{
    d_family, exhaustive_minimizer_search, h_family, h_family_sigma1, path_graph,
};
use steklov_core::steklov::energy;
use steklov_core::{
    combinatorial_laplacian_spectrum, dtn_matrix, dtn_matrix_by_extension, eigen_symmetric,
    harmonic_extension, prop1_min_closed, rayleigh_quotient, spread_candidates, steklov_spectrum,
    thm1_bound, thm2_bound, weighted_bound, GraphWithBoundary, Normalization,
};

use common::{any_graph, graph, max_abs_diff};

/// Random boundary function with `Σ m_i w_i = 0` and `Σ m_i w_i² = 1`.
fn test_function(g: &GraphWithBoundary, norm: Normalization, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let m = norm.boundary_weights(g);
    let w: Vec<f64> = (0..g.b()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mean = w.iter().zip(&m).map(|(x, mi)| x * mi).sum::<f64>() / m.iter().sum::<f64>();
    let centered: Vec<f64> = w.iter().map(|x| x - mean).collect();
    let norm2: f64 = centered.iter().zip(&m).map(|(x, mi)| mi * x * x).sum();
    centered.iter().map(|x| x / norm2.sqrt()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn dtn_assemblies_agree_and_are_structured(g in any_graph()) {
        let schur = dtn_matrix(&g).unwrap();
        let ext = dtn_matrix_by_extension(&g).unwrap();
        let b = g.b();
        for i in 0..b {
            prop_assert!((ext[i].iter().sum::<f64>()).abs() <= 1e-8);
            for j in 0..b {
                prop_assert!((schur.get(i, j) - ext[i][j]).abs() <= 1e-8);
                prop_assert!((ext[i][j] - ext[j][i]).abs() <= 1e-10);
            }
        }
        prop_assert!(eigen_symmetric(&schur).unwrap().values[0] >= -1e-8);
    }

    #[test]
    fn thm2_holds_in_unit_mode(g in graph(false)) {
        let s = steklov_spectrum(&g, Normalization::Unit).unwrap();
        let bound = thm2_bound(g.b(), g.boundary_diameter().unwrap()).unwrap();
        prop_assert!(s.sigmas[1] >= bound - 1e-8);
    }

    #[test]
    fn weighted_bound_holds_in_measure_mode(g in graph(true)) {
        let s = steklov_spectrum(&g, Normalization::Measure).unwrap();
        prop_assert!(s.sigmas[1] >= weighted_bound(&g).unwrap() - 1e-8);
    }

    #[test]
    fn steklov_dominates_laplacian(g in any_graph()) {
        let sigmas = steklov_spectrum(&g, Normalization::Unit).unwrap().sigmas;
        let lambdas = combinatorial_laplacian_spectrum(&g).unwrap();
        for k in 0..g.b() {
            prop_assert!(sigmas[k] >= lambdas[k] - 1e-8);
        }
    }

    #[test]
    fn eigenfunction_spread_at_least_closed_form(g in graph(false)) {
        let s = steklov_spectrum(&g, Normalization::Unit).unwrap();
        let v = &s.boundary_eigvecs[1];
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let norm = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>().sqrt();
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!((hi - lo) / norm >= prop1_min_closed(g.b()).unwrap() - 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn variational_bound_in_both_modes(g in any_graph(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for norm in [Normalization::Unit, Normalization::Measure] {
            let sigma1 = steklov_spectrum(&g, norm).unwrap().sigmas[1];
            for _ in 0..5 {
                let w = test_function(&g, norm, &mut rng);
                let ext = harmonic_extension(&g, &w).unwrap();
                prop_assert!(rayleigh_quotient(&g, &ext, norm).unwrap() >= sigma1 - 1e-8);
                let mut rough = ext.clone();
                for i in g.interior() {
                    rough[i] = rng.random_range(-2.0..2.0);
                }
                prop_assert!(rayleigh_quotient(&g, &rough, norm).unwrap() >= sigma1 - 1e-8);
            }
        }
    }

    #[test]
    fn extension_minimizes_energy_and_obeys_maximum_principle(g in any_graph(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi: Vec<f64> = (0..g.b()).map(|_| rng.random_range(-5.0..5.0)).collect();
        let ext = harmonic_extension(&g, &phi).unwrap();
        let base = energy(&g, &ext);
        for _ in 0..5 {
            let mut v = ext.clone();
            for i in g.interior() {
                v[i] += rng.random_range(-1.0..1.0);
            }
            prop_assert!(energy(&g, &v) >= base - 1e-10);
        }
        let hi = phi.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = phi.iter().cloned().fold(f64::INFINITY, f64::min);
        for i in g.interior() {
            prop_assert!(ext[i] <= hi + 1e-10 && ext[i] >= lo - 1e-10);
        }
        for (k, &i) in g.boundary().iter().enumerate() {
            prop_assert_eq!(ext[i], phi[k]);
        }
    }

    #[test]
    fn eigenvectors_satisfy_the_steklov_equation(g in any_graph()) {
        for norm in [Normalization::Unit, Normalization::Measure] {
            let s = steklov_spectrum(&g, norm).unwrap();
            let m = norm.boundary_weights(&g);
            let lambda = dtn_matrix(&g).unwrap();
            for (sigma, v) in s.sigmas.iter().zip(&s.boundary_eigvecs) {
                let lv = lambda.mul_vec(v);
                let rhs: Vec<f64> = v.iter().zip(&m).map(|(x, mi)| sigma * mi * x).collect();
                prop_assert!(max_abs_diff(&lv, &rhs) <= 1e-8 * (1.0 + lambda.norm_inf()));
            }
        }
    }
}

#[test]
fn thm2_dominates_thm1_on_grid() {
    for b in 2..=64 {
        for d in 1..=256 {
            assert!(
                thm2_bound(b, d).unwrap() >= thm1_bound(b, d).unwrap(),
                "b={b}, d={d}"
            );
        }
    }
}

#[test]
fn spread_candidates_minimum_at_half() {
    for b in 2..=30 {
        let closed = prop1_min_closed(b).unwrap();
        let c = spread_candidates(b).unwrap();
        let min = c.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
        assert!((min - closed).abs() <= 1e-12);
        for k in [b / 2, b.div_ceil(2)] {
            assert!((c[k - 1].value - closed).abs() <= 1e-12, "b={b}, k={k}");
        }
    }
}

#[test]
fn h_family_matches_closed_form() {
    for b in 2..=10 {
        for d in 3..=40 {
            let g = h_family(b, d).unwrap();
            assert!(g.validate().is_ok());
            let s = steklov_spectrum(&g, Normalization::Unit).unwrap().sigmas[1];
            assert!(
                (s - h_family_sigma1(b, d).unwrap()).abs() <= 1e-9,
                "b={b}, d={d}"
            );
        }
    }
}

#[test]
fn h_family_eigenfunction_for_even_b() {
    for b in (2..=10).step_by(2) {
        for d in 3..=40 {
            let g = h_family(b, d).unwrap();
            let s = steklov_spectrum(&g, Normalization::Unit).unwrap();
            let v = &s.boundary_eigvecs[1];
            let level = 1.0 / (b as f64).sqrt();
            for (i, x) in v.iter().enumerate() {
                let sign = if i < b / 2 { 1.0 } else { -1.0 };
                assert!((x.abs() - level).abs() <= 1e-8, "b={b}, d={d}");
                assert!((x * sign / v[0].signum() - level).abs() <= 1e-8);
            }
            let bf = b as f64;
            let dd = (d - 2) as f64;
            let hub = bf.sqrt() * dd / (bf * dd + 4.0);
            let ext = &s.extensions[1];
            assert!((ext[b].abs() - hub).abs() <= 1e-8, "b={b}, d={d}");
            assert!((ext[b + d - 2].abs() - hub).abs() <= 1e-8, "b={b}, d={d}");
        }
    }
}

#[test]
fn scaled_h_family_sigma1_decreases_to_limit() {
    for b in 2..=10 {
        let limit = b as f64 / half_product(b) as f64;
        let mut last = f64::INFINITY;
        for d in 3..=200 {
            let scaled = d as f64 * h_family_sigma1(b, d).unwrap();
            assert!(scaled <= last + 1e-12, "b={b}, d={d}");
            assert!(scaled >= limit - 1e-12);
            last = scaled;
        }
    }
}

#[test]
fn scaled_h_family_gap_at_400() {
    let d = 400;
    for b in 2..=10 {
        let p = half_product(b) as f64;
        let bf = b as f64;
        let limit = bf / p;
        let g = h_family(b, d).unwrap();
        let scaled = d as f64 * steklov_spectrum(&g, Normalization::Unit).unwrap().sigmas[1];
        let gap = (scaled - limit).abs();
        let exact = bf * (2.0 * p - bf).abs() / (p * (p * (d - 2) as f64 + bf));
        assert!((gap - exact).abs() <= 1e-9, "b={b}");
        if b <= 4 {
            assert!(gap <= limit * bf / (p * 398.0), "b={b}");
        }
    }
}

#[test]
fn generators_validate() {
    for n in 2..=30 {
        assert!(path_graph(n).unwrap().validate().is_ok());
    }
    for n in 0..=30 {
        assert!(d_family(n).unwrap().validate().is_ok());
    }
    for b in 2..=12 {
        for d in 3..=15 {
            assert!(h_family(b, d).unwrap().validate().is_ok());
        }
    }
}

#[test]
fn exhaustive_search_floor_for_two_boundary_vertices() {
    for (d, max_vertices) in [(2, 6), (3, 6), (4, 6), (5, 7)] {
        let r = exhaustive_minimizer_search(2, d, max_vertices).unwrap();
        let min = r.min_sigma1.unwrap();
        assert!((min - 2.0 / d as f64).abs() <= 1e-9, "d={d}");
        assert_eq!(r.reference_is_minimizer, Some(true));
    }
}

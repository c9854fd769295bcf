use proptest::prelude::*;

use qspeed::classical::{gen_fisher, ParametricDist};
use qspeed::json::MatrixJson;
use qspeed::matcore::{schatten_norm, DensityMatrix, HermitianOperator};
use qspeed::numeric::stream_rng;
use qspeed::oracle::{random_density, random_hermitian, random_povm, random_pure};
use qspeed::quantum::{
    bures_distance, fidelity, induced_dist, qfi, schatten_distance, schatten_speed, trace_distance, trace_speed,
    ParametricFamily,
};
use qspeed::{Density, Family};

fn pair(seed: u64, dim: usize) -> (Density, Density) {
    let mut r = stream_rng(seed, 0);
    (random_density(dim, &mut r), random_density(dim, &mut r))
}

fn family(seed: u64, dim: usize) -> Family {
    let mut r = stream_rng(seed, 1);
    ParametricFamily::unitary(random_hermitian(dim, &mut r), random_density(dim, &mut r)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distances_are_bounded_and_symmetric(seed in any::<u64>(), dim in 2usize..6) {
        let (a, b) = pair(seed, dim);
        for d in [trace_distance(&a, &b).unwrap(), bures_distance(&a, &b).unwrap()] {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&d));
        }
        prop_assert!((trace_distance(&a, &b).unwrap() - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((fidelity(&a, &b).unwrap() - fidelity(&b, &a).unwrap()).abs() < 1e-9);
        prop_assert!(trace_distance(&a, &a).unwrap() < 1e-12);
    }

    #[test]
    fn trace_distance_triangle(seed in any::<u64>(), dim in 2usize..5) {
        let mut r = stream_rng(seed, 2);
        let s: Vec<Density> = (0..3).map(|_| random_density(dim, &mut r)).collect();
        let d = |i: usize, j: usize| trace_distance(&s[i], &s[j]).unwrap();
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12);
    }

    #[test]
    fn fuchs_van_de_graaf(seed in any::<u64>(), dim in 2usize..6) {
        // 1 - F <= D1 <= sqrt(1 - F^2) with F the root fidelity
        let (a, b) = pair(seed, dim);
        let f = fidelity(&a, &b).unwrap();
        let d1 = trace_distance(&a, &b).unwrap();
        prop_assert!(1.0 - f <= d1 + 1e-9);
        prop_assert!(d1 <= (1.0 - f * f).max(0.0).sqrt() + 1e-9);
    }

    #[test]
    fn schatten_norm_of_difference_decreases_with_order(seed in any::<u64>(), dim in 2usize..5) {
        // the distance carries a factor 2^{-1/α}; the bare norm is the monotone quantity
        let (a, b) = pair(seed, dim);
        let v: Vec<f64> = [1.0, 1.5, 2.0, 4.0]
            .iter()
            .map(|&o: &f64| schatten_distance(&a, &b, o).unwrap() * 2f64.powf(1.0 / o))
            .collect();
        prop_assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn speed_hierarchy(seed in any::<u64>(), dim in 2usize..6) {
        let fam = family(seed, dim);
        let f1 = trace_speed(&fam, 0.3).unwrap();
        let f2 = qfi(&fam, 0.3).unwrap();
        prop_assert!(f1 <= f2.sqrt() + 1e-9);
        let s2 = schatten_speed(&fam, 0.3, 2.0).unwrap().fisher;
        prop_assert!(s2 <= f1 + 1e-12);
    }

    #[test]
    fn classical_speed_below_quantum(seed in any::<u64>(), dim in 2usize..5) {
        let fam = family(seed, dim);
        let mut r = stream_rng(seed, 3);
        let d = qspeed::quantum::induced_parametric(&fam, 0.0, &random_povm(dim, &mut r)).unwrap();
        prop_assert!(gen_fisher(&d, 1.0).unwrap() <= trace_speed(&fam, 0.0).unwrap() + 1e-9);
        prop_assert!(gen_fisher(&d, 2.0).unwrap() <= qfi(&fam, 0.0).unwrap() + 1e-9);
    }

    #[test]
    fn classical_fisher_monotone_in_order(
        w in prop::collection::vec(0.01f64..1.0, 2..8),
        s in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        let total: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / total).collect();
        let mean = s[..p.len()].iter().sum::<f64>() / p.len() as f64;
        let dp: Vec<f64> = s[..p.len()].iter().map(|x| x - mean).collect();
        let d = ParametricDist::from_vecs(p, dp).unwrap();
        let r1 = gen_fisher(&d, 1.0).unwrap();
        let r15 = gen_fisher(&d, 1.5).unwrap().powf(1.0 / 1.5);
        let r2 = gen_fisher(&d, 2.0).unwrap().sqrt();
        prop_assert!(r1 <= r15 + 1e-12 && r15 <= r2 + 1e-12);
    }

    #[test]
    fn induced_distribution_normalised(seed in any::<u64>(), dim in 2usize..6) {
        let mut r = stream_rng(seed, 4);
        let rho = random_density::<f64>(dim, &mut r);
        let p = induced_dist(&rho, &random_povm(dim, &mut r)).unwrap();
        prop_assert!((p.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.weights().iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn matrix_json_round_trip(seed in any::<u64>(), dim in 1usize..5) {
        let mut r = stream_rng(seed, 5);
        let h = random_hermitian::<f64>(dim, &mut r);
        let back = MatrixJson::from_matrix(h.matrix()).to_matrix::<f64>().unwrap();
        prop_assert_eq!(&back, h.matrix());
    }

    #[test]
    fn single_precision_tracks_double(seed in any::<u64>(), dim in 2usize..4) {
        let mut r = stream_rng(seed, 6);
        let rho = random_density::<f64>(dim, &mut r);
        let h = random_hermitian::<f64>(dim, &mut r);
        let wide = ParametricFamily::unitary(h.clone(), rho.clone()).unwrap();
        let narrow = ParametricFamily::unitary(
            HermitianOperator::from_hermitian_part(&h.matrix().cast::<f32>()),
            DensityMatrix::new(rho.matrix().cast::<f32>()).unwrap(),
        )
        .unwrap();
        let a = trace_speed(&wide, 0.0).unwrap();
        let b = trace_speed(&narrow, 0.0f32).unwrap() as f64;
        prop_assert!((a - b).abs() <= 1e-4 * a.max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn pure_state_norms(seed in any::<u64>(), dim in 2usize..6) {
        let mut r = stream_rng(seed, 7);
        let psi = random_pure::<f64>(dim, &mut r);
        let rho = psi.density();
        // a rank-one projector has every Schatten norm equal to one
        for o in [1.0, 2.0, 3.0, f64::INFINITY] {
            prop_assert!((schatten_norm(rho.matrix(), o).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

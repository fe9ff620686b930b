use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;
use qmetric_core::engine::SolverConfig;
use qmetric_core::lipnorm::LipNorm;
use qmetric_core::matrix::random::{random_hermitian_in, random_state_in};
use qmetric_core::matrix::{operator_norm, random_hermitian, top_singular, AlgebraSpec, Hermitian};
use qmetric_core::metrics::{mk_distance, LipSpace};
use qmetric_core::{ComplexMatrix, DensityState, LipNormSpec};

fn m2_space(seed: u64, lambda: f64) -> LipSpace {
    let base = LipNorm::dirac_amplified(random_hermitian(seed, 4, 1.0).unwrap(), 2).unwrap();
    let l: LipNormSpec = if lambda == 1.0 { base } else { LipNorm::scaled(lambda, base).unwrap() };
    LipSpace::new(AlgebraSpec::full(2).unwrap(), l).unwrap()
}

fn states(space: &LipSpace, seed: u64, k: u64) -> Vec<DensityState> {
    (0..k).map(|i| random_state_in(&space.algebra, seed.wrapping_add(i)).unwrap()).collect()
}

fn complex_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let re = random_hermitian::<f64>(seed, rows.max(cols), 1.0).unwrap();
    let im = random_hermitian::<f64>(seed ^ 0x5bd1, rows.max(cols), 1.0).unwrap();
    // Hermitian parts are only a source of entries; the result is generic.
    ComplexMatrix::from_fn(rows, cols, |i, j| {
        Complex::new(re.as_matrix()[(i, j)].re + (i as f64), im.as_matrix()[(j, i)].im - (j as f64) * 0.3)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mk_is_a_metric_on_states(lip in 0u64..1000, st in 0u64..1000) {
        let space = m2_space(lip, 1.0);
        let cfg = SolverConfig::with_seed(lip ^ st);
        let s = states(&space, st, 3);
        let d = |a: usize, b: usize| mk_distance(&space, &s[a], &s[b], &cfg).unwrap().value;
        let slack = 3.0 * cfg.tol;
        prop_assert!(d(0, 0).abs() <= slack);
        prop_assert_eq!(d(0, 1), d(1, 0));
        prop_assert!(d(0, 1) >= 0.0);
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + slack);
    }

    #[test]
    fn scaling_the_lipnorm_scales_mk_inversely(lip in 0u64..1000, st in 0u64..1000, lambda in 0.25f64..4.0) {
        let (base, scaled) = (m2_space(lip, 1.0), m2_space(lip, lambda));
        let cfg = SolverConfig::with_seed(st);
        let s = states(&base, st, 2);
        let a = mk_distance(&base, &s[0], &s[1], &cfg).unwrap().value;
        let b = mk_distance(&scaled, &s[0], &s[1], &cfg).unwrap().value;
        prop_assert!((a - lambda * b).abs() <= 1e-5 * a.max(1e-3), "{} vs {}·{}", a, lambda, b);
    }

    #[test]
    fn scaled_lipnorm_is_homogeneous(seed in 0u64..1000, lambda in 0.1f64..10.0, t in -5.0f64..5.0) {
        let space = m2_space(seed, 1.0);
        let a = random_hermitian_in::<f64>(&space.algebra, seed + 1, 1.0).unwrap();
        let l = &space.lipnorm;
        let scaled = LipNorm::scaled(lambda, l.clone()).unwrap();
        let la = l.eval(&a).unwrap();
        prop_assert!((scaled.eval(&a).unwrap() - lambda * la).abs() <= 1e-12 * lambda * la.max(1.0));
        prop_assert!((l.eval(&a.scale(t)).unwrap() - t.abs() * la).abs() <= 1e-12 * la.max(1.0) * t.abs().max(1.0));
        // Scalars lie in the kernel.
        prop_assert!(l.eval(&a.shift(t)).unwrap() - la <= 1e-12 * la.max(1.0));
    }

    #[test]
    fn top_singular_agrees_with_the_real_svd(rows in 1usize..6, cols in 1usize..6, seed in 0u64..10_000) {
        let m = complex_matrix(rows, cols, seed);
        let (s, u, v) = top_singular(&m);
        // [[Re, -Im], [Im, Re]] has the same singular values, each doubled.
        let real = DMatrix::from_fn(2 * rows, 2 * cols, |i, j| {
            let z = m[(i % rows, j % cols)];
            match (i < rows, j < cols) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let top = real.singular_values().max();
        prop_assert!((s - top).abs() <= 1e-10 * top.max(1.0));
        prop_assert!((&m * &v - u.scale(s)).norm() <= 1e-10 * top.max(1.0));
        prop_assert!((operator_norm(&m).unwrap() - s).abs() <= 1e-10 * top.max(1.0));
    }

    #[test]
    fn single_precision_lipnorm_tracks_double(seed in 0u64..1000) {
        let d = random_hermitian::<f64>(seed, 4, 1.0).unwrap();
        let a = random_hermitian::<f64>(seed + 7, 2, 1.0).unwrap();
        let l64 = LipNorm::dirac_amplified(d.clone(), 2).unwrap();
        let l32 = LipNorm::dirac_amplified(Hermitian::<f32>::from_f64(&d), 2).unwrap();
        let v64 = l64.eval(&a).unwrap();
        let v32 = f64::from(l32.eval(&Hermitian::<f32>::from_f64(&a)).unwrap());
        prop_assert!((v64 - v32).abs() <= 1e-5 * v64.max(1.0), "{} vs {}", v64, v32);
    }
}

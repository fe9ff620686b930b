use proptest::prelude::*;

use super::*;
use crate::matrix::random::{random_hermitian, random_hermitian_in, random_unitary};
use crate::matrix::{AlgebraSpec, HermitianBasis, Unitary};

fn flip() -> Hermitian<f64> {
    Hermitian::from_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
}

fn all_variants(n: usize, seed: u64) -> Vec<LipNorm<f64>> {
    let d = random_hermitian(seed, n, 1.0).unwrap();
    let w = random_hermitian(seed + 1, n, 0.3).unwrap();
    let h = random_hermitian::<f64>(seed + 2, n, 0.2)
        .unwrap()
        .shift(1.0);
    let x1 = central(random_hermitian(seed + 3, n, 1.0).unwrap());
    let x2 = central(random_hermitian(seed + 4, n, 1.0).unwrap());
    vec![
        LipNorm::dirac(d.clone()),
        LipNorm::dirac_amplified(amplify_herm(&d, 2), 2).unwrap(),
        LipNorm::perturbed(d.clone(), w).unwrap(),
        LipNorm::conformal(d.clone(), h).unwrap(),
        LipNorm::curved(vec![x1, x2], vec![vec![1.0, 0.3], vec![-0.2, 0.8]]).unwrap(),
        LipNorm::scaled(2.5, LipNorm::dirac(d)).unwrap(),
    ]
}

fn amplify_herm(d: &Hermitian<f64>, m: usize) -> Hermitian<f64> {
    Hermitian::new(crate::matrix::amplify(d.as_matrix(), m)).unwrap()
}

fn central(x: Hermitian<f64>) -> Hermitian<f64> {
    let t = x.trace() / x.dim() as f64;
    x.shift(-t)
}

#[test]
fn unit_is_in_the_kernel() {
    for l in all_variants(3, 10) {
        assert!(l.eval(&Hermitian::identity(3)).unwrap() < 1e-12, "{l:?}");
    }
}

#[test]
fn two_point_commutator() {
    let l = LipNorm::dirac(flip());
    for (x, y) in [(1.0, -1.0), (0.3, 2.0), (-4.0, -4.0)] {
        let v = l.eval(&Hermitian::diagonal(&[x, y])).unwrap();
        assert!((v - (x - y).abs()).abs() < 1e-12);
    }
}

#[test]
fn scaled_and_zero_perturbation() {
    let d = random_hermitian::<f64>(5, 3, 1.0).unwrap();
    let a = random_hermitian::<f64>(6, 3, 1.0).unwrap();
    let base = LipNorm::dirac(d.clone());
    let s = LipNorm::scaled(2.0, base.clone()).unwrap();
    assert!((s.eval(&a).unwrap() - 2.0 * base.eval(&a).unwrap()).abs() < 1e-12);
    let p = LipNorm::perturbed(d, Hermitian::zeros(3)).unwrap();
    assert_eq!(p.eval(&a).unwrap(), base.eval(&a).unwrap());
}

#[test]
fn validation_errors() {
    let d = flip();
    assert!(matches!(
        LipNorm::conformal(d.clone(), Hermitian::diagonal(&[1.0, 0.0])),
        Err(Error::Singular(_))
    ));
    assert!(matches!(
        LipNorm::dirac(d.clone()).eval(&Hermitian::identity(3)),
        Err(Error::Shape { .. })
    ));
    assert!(LipNorm::perturbed(d.clone(), Hermitian::zeros(3)).is_err());
    assert!(LipNorm::scaled(0.0, LipNorm::dirac(d.clone())).is_err());
    assert!(LipNorm::dirac_amplified(d, 3).is_err());
    let x = Hermitian::diagonal(&[1.0, 1.0]);
    assert!(LipNorm::curved(vec![x], vec![vec![1.0]]).is_err());
    let y = Hermitian::diagonal(&[1.0, -1.0]);
    assert!(matches!(
        LipNorm::curved(vec![y], vec![vec![0.0]]),
        Err(Error::Singular(_))
    ));
}

#[test]
fn json_is_tagged_by_variant() {
    let l = LipNorm::scaled(2.0, LipNorm::dirac(flip())).unwrap();
    let v = serde_json::to_value(&l).unwrap();
    assert_eq!(v["variant"], "Scaled");
    assert_eq!(v["inner"]["variant"], "DiracCommutator");
    assert_eq!(v["inner"]["d"]["dim"], 2);
    let back: LipNorm<f64> = serde_json::from_value(v).unwrap();
    assert_eq!(back, l);
    let short = r#"{"variant":"DiracCommutator","d":{"dim":1,"re":[[0.0]],"im":[[0.0]]}}"#;
    let parsed: LipNorm<f64> = serde_json::from_str(short).unwrap();
    assert_eq!(parsed, LipNorm::dirac(Hermitian::zeros(1)));
}

#[test]
fn kernel_check_two_point() {
    let algebra = AlgebraSpec::two_point();
    let basis = HermitianBasis::for_algebra(&algebra).unwrap();
    let k = kernel_check(&LipNorm::dirac(flip()), &basis).unwrap();
    assert!(k.passed);
    // On the unit sphere the only traceless direction is diag(1,-1)/√2, with L = √2.
    assert!((k.min_upper - 2f64.sqrt()).abs() < 1e-12);
    assert!(k.min_lower > 0.0 && k.min_lower <= k.min_upper + 1e-12);

    let k0 = kernel_check(&LipNorm::dirac(Hermitian::zeros(2)), &basis).unwrap();
    assert!(!k0.passed);
    let w = k0.witness.unwrap();
    assert!(w.trace().abs() < 1e-12 && (w.frobenius_norm() - 1.0).abs() < 1e-12);
}

#[test]
fn kernel_check_generic_dirac() {
    let algebra = AlgebraSpec::new(vec![1, 1, 1]).unwrap();
    let basis = HermitianBasis::for_algebra(&algebra).unwrap();
    let d = random_hermitian::<f64>(77, 3, 1.0).unwrap();
    assert!(kernel_check(&LipNorm::dirac(d), &basis).unwrap().passed);
    // Diagonal D commutes with the whole diagonal algebra.
    let diag = Hermitian::diagonal(&[1.0, 2.0, 4.0]);
    assert!(!kernel_check(&LipNorm::dirac(diag), &basis).unwrap().passed);
}

#[test]
fn kernel_check_needs_search() {
    // Full M_2 with D = diag(1,-1): the commutant is the diagonal, so
    // diag(1,-1)/√2 is a kernel direction the multistart must find.
    let basis = HermitianBasis::full(2).unwrap();
    let k = kernel_check(&LipNorm::dirac(Hermitian::diagonal(&[1.0, -1.0])), &basis).unwrap();
    assert!(!k.passed);
    let w: Hermitian<f64> = k.witness.unwrap();
    assert!((w.as_matrix()[(0, 0)].re.abs() - 0.5f64.sqrt()).abs() < 1e-9);
    // Amplified random D on M_3.
    let d = random_hermitian::<f64>(3, 6, 1.0).unwrap();
    let l = LipNorm::dirac_amplified(d, 2).unwrap();
    assert!(
        kernel_check(&l, &HermitianBasis::full(3).unwrap())
            .unwrap()
            .passed
    );
}

#[test]
fn kernel_check_curved_one_generator() {
    let basis = HermitianBasis::for_algebra(&AlgebraSpec::two_point()).unwrap();
    let l = LipNorm::curved(vec![flip()], vec![vec![1.5]]).unwrap();
    assert!(kernel_check(&l, &basis).unwrap().passed);
    let diag = LipNorm::curved(vec![Hermitian::diagonal(&[1.0, -1.0])], vec![vec![1.5]]).unwrap();
    assert!(!kernel_check(&diag, &basis).unwrap().passed);
}

#[test]
fn leibniz_examples() {
    let f = AdmissibleF::Leibniz;
    let one = Hermitian::<f64>::identity(3);
    let l = LipNorm::dirac(random_hermitian(1, 3, 1.0).unwrap());
    assert_eq!(quasi_leibniz_defect(&l, &f, &one, &one).unwrap(), 0.0);
    for s in 0..200 {
        let a = random_hermitian(1000 + s, 3, 1.0).unwrap();
        let b = random_hermitian(2000 + s, 3, 1.0).unwrap();
        assert!(quasi_leibniz_defect(&l, &f, &a, &b).unwrap() <= 1e-9);
    }
}

#[test]
fn conformal_is_scaled_leibniz() {
    let d = random_hermitian::<f64>(40, 3, 1.0).unwrap();
    let h = random_hermitian::<f64>(41, 3, 0.3).unwrap().shift(1.2);
    let l = LipNorm::conformal(d, h.clone()).unwrap();
    let h2 = h.as_matrix() * h.as_matrix();
    let m = operator_norm(&h2).unwrap() * operator_norm(&h2.try_inverse().unwrap()).unwrap();
    let f = AdmissibleF::ScaledLeibniz(m);
    for s in 0..200 {
        let a = random_hermitian(3000 + s, 3, 1.0).unwrap();
        let b = random_hermitian(4000 + s, 3, 1.0).unwrap();
        assert!(quasi_leibniz_defect(&l, &f, &a, &b).unwrap() <= 1e-9);
    }
}

#[test]
fn domain_norm_examples() {
    let l = LipNorm::dirac(flip());
    assert!((domain_norm(&l, &Hermitian::identity(2)).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(domain_norm(&l, &Hermitian::zeros(2)).unwrap(), 0.0);
    assert!((domain_norm(&l, &Hermitian::diagonal(&[1.0, -1.0])).unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn conformal_with_unit_factor_is_dirac() {
    let d = random_hermitian::<f64>(8, 4, 1.0).unwrap();
    let c = LipNorm::conformal(d.clone(), Hermitian::identity(4)).unwrap();
    let base = LipNorm::dirac(d);
    for s in 0..10 {
        let a = random_hermitian(s, 4, 1.0).unwrap();
        assert_eq!(c.eval(&a).unwrap(), base.eval(&a).unwrap());
    }
}

#[test]
fn curved_single_generator_is_commutator() {
    let x = central(random_hermitian::<f64>(90, 3, 1.0).unwrap());
    let l = LipNorm::curved(vec![x.clone()], vec![vec![1.0]]).unwrap();
    for s in 0..10 {
        let a = random_hermitian::<f64>(s, 3, 1.0).unwrap();
        let direct =
            operator_norm(&(x.as_matrix() * a.as_matrix() - a.as_matrix() * x.as_matrix()))
                .unwrap();
        assert!((l.eval(&a).unwrap() - direct).abs() < 1e-12);
    }
}

#[test]
fn single_precision_matches() {
    let d = random_hermitian::<f64>(8, 3, 1.0).unwrap();
    let a = random_hermitian::<f64>(9, 3, 1.0).unwrap();
    let l64 = LipNorm::dirac(d.clone());
    let l32 = LipNorm::<f32>::dirac(Hermitian::from_f64(&d));
    let v32 = l32.eval(&Hermitian::from_f64(&a)).unwrap() as f64;
    assert!((v32 - l64.eval(&a).unwrap()).abs() < 1e-4);
}

#[test]
fn block_algebra_elements() {
    let algebra = AlgebraSpec::new(vec![2, 1]).unwrap();
    let l = LipNorm::dirac(random_hermitian(3, 3, 1.0).unwrap());
    let a = random_hermitian_in::<f64>(&algebra, 4, 1.0).unwrap();
    assert!(l.eval(&a).unwrap() > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn seminorm_axioms(seed in 0u64..10_000, t in -5.0f64..5.0) {
        for l in all_variants(3, seed) {
            let a = random_hermitian(seed ^ 0xa, 3, 1.0).unwrap();
            let b = random_hermitian(seed ^ 0xb, 3, 1.0).unwrap();
            let la = l.eval(&a).unwrap();
            let lb = l.eval(&b).unwrap();
            prop_assert!((l.eval(&a.scale(t)).unwrap() - t.abs() * la).abs() <= 1e-9 * (1.0 + la));
            prop_assert!(l.eval(&(&a + &b)).unwrap() <= la + lb + 1e-9);
        }
    }

    #[test]
    fn unitary_covariance(seed in 0u64..10_000) {
        let d = random_hermitian::<f64>(seed, 3, 1.0).unwrap();
        let a = random_hermitian::<f64>(seed + 1, 3, 1.0).unwrap();
        let u: Unitary<f64> = random_unitary(seed + 2, 3).unwrap();
        let moved = LipNorm::dirac(u.apply(&d).unwrap()).eval(&u.apply(&a).unwrap()).unwrap();
        prop_assert!((moved - LipNorm::dirac(d).eval(&a).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn perturbation_is_lipschitz(seed in 0u64..10_000) {
        let d = random_hermitian::<f64>(seed, 3, 1.0).unwrap();
        let w1 = random_hermitian::<f64>(seed + 1, 3, 0.5).unwrap();
        let w2 = random_hermitian::<f64>(seed + 2, 3, 0.5).unwrap();
        let a = random_hermitian::<f64>(seed + 3, 3, 1.0).unwrap();
        let l1 = LipNorm::perturbed(d.clone(), w1.clone()).unwrap().eval(&a).unwrap();
        let l2 = LipNorm::perturbed(d, w2.clone()).unwrap().eval(&a).unwrap();
        let bound = 2.0 * (&w1 - &w2).operator_norm() * a.operator_norm();
        prop_assert!((l1 - l2).abs() <= bound + 1e-9);
    }
}

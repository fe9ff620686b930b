use std::cmp::Ordering;

use super::report::{provenance, MetricReport, ReportKind};
use super::LipSpace;
use crate::engine::{
    max_convex_over_ball, max_linear_over_ball, PencilFunctional, SolverConfig, SpreadFunctional,
};
use crate::error::{Error, Result};
use crate::matrix::{Density, Hermitian, HermitianBasis, Unitary};

/// Monge-Kantorovich distance `sup{|ρ(a) − σ(a)| : L(a) ≤ 1}`.
///
/// The pair is put in a canonical order first, so the result is exactly
/// symmetric.
pub fn mk_distance(
    space: &LipSpace,
    rho: &Density<f64>,
    sigma: &Density<f64>,
    cfg: &SolverConfig,
) -> Result<MetricReport> {
    space.require_lipnorm()?;
    let n = space.dim();
    for s in [rho, sigma] {
        if s.dim() != n {
            return Err(Error::shape(n, s.dim()));
        }
    }
    let (first, second) = match compare_states(rho.rho(), sigma.rho()) {
        Ordering::Greater => (sigma, rho),
        _ => (rho, sigma),
    };
    let c = space.algebra.project(&(first.rho() - second.rho()))?;
    let r = max_linear_over_ball(&c, &space.ball(), cfg)?;
    let kind = if r.converged() {
        ReportKind::ExactWithinTol
    } else {
        ReportKind::LowerEstimate
    };
    Ok(
        MetricReport::new(r.value, kind, provenance("mk_distance", cfg))
            .with_interval(r.value, r.certificate)
            .with_flags(r.flags),
    )
}

fn compare_states(a: &Hermitian<f64>, b: &Hermitian<f64>) -> Ordering {
    for (x, y) in a.as_matrix().iter().zip(b.as_matrix().iter()) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Diameter of the state space: the largest spectral spread on the unit ball.
///
/// Lower estimate; `hi` is twice a bound on `‖a‖` over the sliced ball.
pub fn mk_diameter(space: &LipSpace, cfg: &SolverConfig) -> Result<MetricReport> {
    space.require_lipnorm()?;
    let ball = space.sliced_ball(None);
    let r = max_convex_over_ball(&SpreadFunctional, &ball, cfg)?;
    let hi = 2.0 * ball.compile()?.norm_bound();
    Ok(MetricReport::new(
        r.value,
        ReportKind::LowerEstimate,
        provenance("mk_diameter", cfg),
    )
    .with_interval(r.value, hi)
    .with_flags(r.flags))
}

/// `sup{‖α(a) − a‖ : L(a) ≤ 1}` for `α = Ad_U`.
pub fn mk_length(
    alpha: &Unitary<f64>,
    space: &LipSpace,
    cfg: &SolverConfig,
) -> Result<MetricReport> {
    space.require_lipnorm()?;
    check_automorphism(alpha, space)?;
    let u = alpha.clone();
    let map = PencilFunctional::new(move |a: &Hermitian<f64>| {
        Ok(u.apply(a)?.into_matrix() - a.as_matrix())
    });
    let r = max_convex_over_ball(&map, &space.sliced_ball(None), cfg)?;
    Ok(MetricReport::new(
        r.value,
        ReportKind::LowerEstimate,
        provenance("mk_length", cfg),
    )
    .with_flags(r.flags))
}

/// Errors unless `Ad_U` maps the algebra onto itself.
pub(crate) fn check_automorphism(u: &Unitary<f64>, space: &LipSpace) -> Result<()> {
    if u.dim() != space.dim() {
        return Err(Error::shape(space.dim(), u.dim()));
    }
    let basis = HermitianBasis::for_algebra(&space.algebra)?;
    for e in basis.elements() {
        if !space.algebra.contains(&u.apply(e)?, 1e-9) {
            return Err(Error::Contract(
                "the unitary does not preserve the algebra".into(),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lipnorm::LipNorm;
    use crate::matrix::random::{random_hermitian, random_state, random_unitary};
    use crate::matrix::AlgebraSpec;

    fn flip() -> Hermitian<f64> {
        Hermitian::from_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    fn two_point() -> LipSpace {
        LipSpace::new(AlgebraSpec::two_point(), LipNorm::dirac(flip())).unwrap()
    }

    #[test]
    fn two_point_values() {
        let cfg = SolverConfig::default();
        let s = two_point();
        let e0 = Density::basis(2, 0).unwrap();
        let e1 = Density::basis(2, 1).unwrap();
        let d = mk_distance(&s, &e0, &e1, &cfg).unwrap();
        assert!((d.value - 1.0).abs() < 1e-9);
        assert_eq!(d.kind, ReportKind::ExactWithinTol);
        assert_eq!(mk_distance(&s, &e0, &e0, &cfg).unwrap().value, 0.0);
        let diam = mk_diameter(&s, &cfg).unwrap();
        assert!((diam.value - 1.0).abs() < 1e-9);
        assert!(diam.hi.unwrap() >= diam.value);
        let swap = Unitary::new(flip().into_matrix()).unwrap();
        assert!((mk_length(&swap, &s, &cfg).unwrap().value - 1.0).abs() < 1e-9);
        assert_eq!(
            mk_length(&Unitary::identity(2), &s, &cfg).unwrap().value,
            0.0
        );
    }

    #[test]
    fn scaling_divides() {
        let cfg = SolverConfig::default();
        let base = two_point();
        let scaled = LipSpace::new(
            AlgebraSpec::two_point(),
            LipNorm::scaled(4.0, base.lipnorm.clone()).unwrap(),
        )
        .unwrap();
        let e0 = Density::basis(2, 0).unwrap();
        let e1 = Density::basis(2, 1).unwrap();
        let a = mk_distance(&base, &e0, &e1, &cfg).unwrap().value;
        let b = mk_distance(&scaled, &e0, &e1, &cfg).unwrap().value;
        assert!((b - a / 4.0).abs() <= 1e-6 * b);
    }

    #[test]
    fn symmetric_and_bounded_by_diameter() {
        let cfg = SolverConfig::with_seed(2);
        let space = LipSpace::new(
            AlgebraSpec::full(2).unwrap(),
            LipNorm::dirac_amplified(random_hermitian(1, 4, 1.0).unwrap(), 2).unwrap(),
        )
        .unwrap();
        let diam = mk_diameter(&space, &cfg).unwrap().value;
        for s in 0..5 {
            let r = random_state(10 + s, 2).unwrap();
            let t = random_state(20 + s, 2).unwrap();
            let a = mk_distance(&space, &r, &t, &cfg).unwrap();
            let b = mk_distance(&space, &t, &r, &cfg).unwrap();
            assert_eq!(a.value, b.value);
            assert!(a.value <= diam + 2.0 * cfg.tol);
        }
    }

    #[test]
    fn not_a_lipnorm_and_bad_automorphisms() {
        let cfg = SolverConfig::default();
        let dead = LipSpace::new(
            AlgebraSpec::two_point(),
            LipNorm::dirac(Hermitian::zeros(2)),
        )
        .unwrap();
        let e0 = Density::basis(2, 0).unwrap();
        assert!(matches!(
            mk_distance(&dead, &e0, &e0, &cfg),
            Err(Error::NotALipNorm(_))
        ));
        let rotation = random_unitary(3, 2).unwrap();
        assert!(matches!(
            mk_length(&rotation, &two_point(), &cfg),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn length_inverse_symmetry() {
        let cfg = SolverConfig::with_seed(5);
        let space = LipSpace::new(
            AlgebraSpec::full(2).unwrap(),
            LipNorm::dirac_amplified(random_hermitian(7, 4, 1.0).unwrap(), 2).unwrap(),
        )
        .unwrap();
        let u = random_unitary(8, 2).unwrap();
        let a = mk_length(&u, &space, &cfg).unwrap().value;
        let b = mk_length(&u.inverse(), &space, &cfg).unwrap().value;
        assert!((a - b).abs() <= 2.0 * cfg.tol * a.max(1.0), "{a} vs {b}");
    }
}

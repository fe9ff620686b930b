use super::ball::{BallSpec, CompiledBall, SolverConfig};
use super::ellipsoid::{Cut, Ellipsoid};
use super::NONCONVERGED;
use crate::error::{Error, Result};
use crate::matrix::Hermitian;

/// Outcome of [`max_linear_over_ball`].
#[derive(Clone, Debug)]
pub struct LinearResult {
    pub value: f64,
    pub argmax: Hermitian<f64>,
    /// Dual bound: `value ≤ optimum ≤ certificate`.
    pub certificate: f64,
    pub coords: Vec<f64>,
    pub iterations: usize,
    pub flags: Vec<String>,
}

impl LinearResult {
    pub fn converged(&self) -> bool {
        self.flags.is_empty()
    }
}

/// `max Re Tr(c a)` over the ball.
///
/// Unsliced balls contain the central line, so `c` must be traceless.
pub fn max_linear_over_ball(
    c: &Hermitian<f64>,
    ball: &BallSpec,
    cfg: &SolverConfig,
) -> Result<LinearResult> {
    cfg.validate()?;
    let compiled = ball.compile()?;
    if c.dim() != compiled.algebra_dim() {
        return Err(Error::shape(compiled.algebra_dim(), c.dim()));
    }
    let c = ball.algebra.project(c)?;
    if !compiled.is_sliced() {
        let scale = c.operator_norm().max(1.0);
        if c.trace().abs() > 1e-10 * scale {
            return Err(Error::Unbounded(format!(
                "functional has trace {} and the unsliced ball contains the central line",
                c.trace()
            )));
        }
    }
    let g = compiled.linear_coords(&c);
    Ok(max_linear_coords(&compiled, &g, cfg))
}

/// `max g·y` over a compiled ball, by a deep-cut ellipsoid method.
///
/// Every center yields the feasible point `r·y/L(y)`, giving the lower bound;
/// the current ellipsoid contains all maximizers, so `g·c + √(gᵀPg)` bounds
/// the optimum from above.
pub fn max_linear_coords(ball: &CompiledBall, g: &[f64], cfg: &SolverConfig) -> LinearResult {
    let d = ball.dim();
    let r = ball.radius();
    let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    if d == 0 || gnorm == 0.0 {
        return LinearResult {
            value: 0.0,
            argmax: ball.point(&vec![0.0; d]),
            certificate: 0.0,
            coords: vec![0.0; d],
            iterations: 0,
            flags: Vec::new(),
        };
    }

    let mut e = Ellipsoid::ball(d, ball.outer_radius());
    let mut lb = 0.0;
    let mut best = vec![0.0; d];
    let mut ub = gnorm * ball.outer_radius();
    let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        iterations += 1;
        let c = e.center().to_vec();
        let (fc, s) = ball.lip_subgradient(&c);
        let gc: f64 = g.iter().zip(&c).map(|(a, b)| a * b).sum();
        if fc > 0.0 && gc > 0.0 {
            let val = r * gc / fc;
            if val > lb {
                lb = val;
                best = c.iter().map(|v| v * r / fc).collect();
            }
        }
        ub = ub.min(gc + e.width(g));
        if ub - lb <= cfg.tol * lb.abs().max(1.0) {
            converged = true;
            break;
        }
        let cut = if fc > r {
            e.cut(&s, r)
        } else {
            e.cut(&neg_g, -lb)
        };
        if let Cut::Empty = cut {
            // The remaining region cannot beat the incumbent.
            ub = ub.min(lb);
            converged = true;
            break;
        }
    }
    let flags = if converged {
        Vec::new()
    } else {
        vec![NONCONVERGED.to_string()]
    };
    LinearResult {
        value: lb,
        argmax: ball.point(&best),
        certificate: ub.max(lb),
        coords: best,
        iterations,
        flags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lipnorm::LipNorm;
    use crate::matrix::random::{random_hermitian, random_state};
    use crate::matrix::{AlgebraSpec, Density};

    fn two_point_ball() -> BallSpec {
        let d = Hermitian::from_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        BallSpec::new(AlgebraSpec::two_point(), LipNorm::dirac(d))
    }

    #[test]
    fn zero_functional() {
        let r = max_linear_over_ball(
            &Hermitian::zeros(2),
            &two_point_ball(),
            &SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.argmax, Hermitian::zeros(2));
    }

    #[test]
    fn two_point_pure_states() {
        let c = Hermitian::diagonal(&[1.0, -1.0]);
        let cfg = SolverConfig::default();
        let r = max_linear_over_ball(&c, &two_point_ball(), &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12 && r.converged());
        let doubled = max_linear_over_ball(&c, &two_point_ball().with_radius(2.0), &cfg).unwrap();
        assert!((doubled.value - 2.0 * r.value).abs() < 1e-12);
    }

    #[test]
    fn trace_part_is_unbounded() {
        let r = max_linear_over_ball(
            &Hermitian::diagonal(&[1.0, 0.0]),
            &two_point_ball(),
            &SolverConfig::default(),
        );
        assert!(matches!(r, Err(Error::Unbounded(_))));
        let sliced = two_point_ball().with_slice(Density::basis(2, 0).unwrap());
        let r = max_linear_over_ball(
            &Hermitian::diagonal(&[1.0, 0.0]),
            &sliced,
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn sandwich_and_symmetry_on_m3() {
        let algebra = AlgebraSpec::full(3).unwrap();
        let l = LipNorm::dirac_amplified(random_hermitian(11, 6, 1.0).unwrap(), 2).unwrap();
        let ball = BallSpec::new(algebra, l.clone());
        let cfg = SolverConfig::with_seed(1);
        for s in 0..3 {
            let rho = random_state::<f64>(20 + s, 3).unwrap();
            let sigma = random_state::<f64>(40 + s, 3).unwrap();
            let c = rho.rho() - sigma.rho();
            let r = max_linear_over_ball(&c, &ball, &cfg).unwrap();
            assert!(r.converged(), "{} iterations", r.iterations);
            assert!(r.value <= r.certificate);
            assert!(r.certificate - r.value <= cfg.tol * r.value.max(1.0) + 1e-15);
            assert!(l.eval(&r.argmax).unwrap() <= 1.0 + 1e-9);
            assert!((c.inner(&r.argmax) - r.value).abs() < 1e-9);
            let m = max_linear_over_ball(&(-&c), &ball, &cfg).unwrap();
            assert!((m.value - r.value).abs() <= 2.0 * cfg.tol * r.value.max(1.0));
        }
    }
}

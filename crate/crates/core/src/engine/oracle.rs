use super::ball::BallSpec;
use super::convex::ConvexFunctional;
use crate::error::{Error, Result};
use crate::matrix::{spectral_spread, Hermitian};

/// Problem classes the grid oracle can solve.
pub enum OracleProblem<'a> {
    /// `max Re Tr(c a)`.
    MaxLinear(Hermitian<f64>),
    /// `min ‖a − b‖`, or `min spread(a − b)/2` when unsliced.
    MinDistance(Hermitian<f64>),
    MaxConvex(&'a dyn ConvexFunctional),
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub value: f64,
    /// Guaranteed `|value − optimum|` given the Lipschitz constant below.
    pub error_bound: f64,
    pub lipschitz: f64,
    pub outer_radius: f64,
    pub inner_radius: f64,
    pub evaluations: usize,
}

const MAX_DIM: usize = 3;

/// Exhaustive grid search over the ball's subspace coordinates, for `d ≤ 3`.
///
/// Works in an orthonormal basis of the subspace and evaluates the Lip-norm
/// directly. By homogeneity the boundary along a unit direction `u` sits at
/// `r/L(u)`; a dense direction sample gives the circumscribed radius `R`
/// (padded by 5%) and inscribed radius `R_in` (shrunk by 5%). With coarse
/// spacing `h`, a feasible grid point lies within `h√d/2` of the optimizer
/// pulled toward the origin by that distance, which bounds the error by
/// `Lip·(h√d/2)·(1 + R/R_in)`. One refinement pass follows around the best
/// coarse point.
pub fn brute_force_oracle(
    problem: &OracleProblem<'_>,
    ball: &BallSpec,
    resolution: usize,
) -> Result<OracleResult> {
    if resolution < 51 {
        return Err(Error::invalid(format!(
            "oracle resolution must be at least 51, got {resolution}"
        )));
    }
    let basis = ball.subspace_basis()?;
    let d = basis.len();
    if d > MAX_DIM {
        return Err(Error::UnsupportedDimension(format!(
            "oracle handles at most {MAX_DIM} coordinates, ball has {d}"
        )));
    }
    let n = ball.algebra.total_dim();
    let sliced = ball.slice.is_some();
    let lip = |x: &[f64]| -> Result<f64> { ball.lipnorm.eval(&element(&basis, x, n)?) };

    let linear: Vec<f64> = match problem {
        OracleProblem::MaxLinear(c) => {
            if c.dim() != n {
                return Err(Error::shape(n, c.dim()));
            }
            if !sliced && c.trace().abs() > 1e-10 * c.operator_norm().max(1.0) {
                return Err(Error::Unbounded(
                    "functional has a trace part on an unsliced ball".into(),
                ));
            }
            basis.iter().map(|e| c.inner(e)).collect()
        }
        OracleProblem::MinDistance(a) if a.dim() != n => return Err(Error::shape(n, a.dim())),
        _ => Vec::new(),
    };
    // Score to maximize.
    let score = |x: &[f64]| -> Result<f64> {
        Ok(match problem {
            OracleProblem::MaxLinear(_) => linear.iter().zip(x).map(|(a, b)| a * b).sum(),
            OracleProblem::MinDistance(a) => {
                let diff = a - &element(&basis, x, n)?;
                if sliced {
                    -diff.operator_norm()
                } else {
                    -0.5 * spectral_spread(&diff)
                }
            }
            OracleProblem::MaxConvex(g) => g.value(&element(&basis, x, n)?)?,
        })
    };

    let r = ball.radius;
    if d == 0 {
        let v = score(&[])?;
        let value = if matches!(problem, OracleProblem::MinDistance(_)) {
            -v
        } else {
            v
        };
        return Ok(OracleResult {
            value,
            error_bound: 0.0,
            lipschitz: 0.0,
            outer_radius: 0.0,
            inner_radius: 0.0,
            evaluations: 1,
        });
    }

    let dirs = directions(d);
    let mut rho_max = 0.0f64;
    let mut rho_min = f64::INFINITY;
    let mut g_lip = 0.0f64;
    let g0 = score(&vec![0.0; d])?;
    for u in &dirs {
        let l = lip(u)?;
        if l <= 0.0 {
            return Err(Error::NotALipNorm(
                "the seminorm vanishes on a direction of the ball's subspace".into(),
            ));
        }
        rho_max = rho_max.max(r / l);
        rho_min = rho_min.min(r / l);
        if let OracleProblem::MaxConvex(_) = problem {
            g_lip = g_lip.max((score(u)? - g0).abs());
        }
    }
    let outer = 1.05 * rho_max;
    let inner = 0.95 * rho_min;
    let lipschitz = match problem {
        OracleProblem::MaxLinear(_) => linear.iter().map(|v| v * v).sum::<f64>().sqrt(),
        OracleProblem::MinDistance(_) => 1.0,
        OracleProblem::MaxConvex(_) => g_lip,
    };

    let mut search = Search {
        best: f64::NEG_INFINITY,
        argbest: vec![0.0; d],
        evaluations: 0,
    };
    let feasible = |x: &[f64]| -> Result<bool> { Ok(lip(x)? <= r * (1.0 + 1e-12)) };
    let visit = |x: &[f64], s: &mut Search| -> Result<()> {
        if x.iter().map(|v| v * v).sum::<f64>() > outer * outer {
            return Ok(());
        }
        s.evaluations += 1;
        let v = score(x)?;
        if v > s.best && feasible(x)? {
            s.best = v;
            s.argbest = x.to_vec();
        }
        Ok(())
    };

    // The origin is always feasible.
    visit(&vec![0.0; d], &mut search)?;
    let zeros = vec![0.0; d];
    grid(&zeros, outer, 11, &mut |x| visit(x, &mut search))?;
    grid(&zeros, outer, resolution, &mut |x| visit(x, &mut search))?;
    let h = 2.0 * outer / (resolution - 1) as f64;
    let center = search.argbest.clone();
    grid(&center, h, resolution, &mut |x| visit(x, &mut search))?;

    let value = if matches!(problem, OracleProblem::MinDistance(_)) {
        -search.best
    } else {
        search.best
    };
    let error_bound = lipschitz * (h * (d as f64).sqrt() / 2.0) * (1.0 + outer / inner);
    Ok(OracleResult {
        value,
        error_bound,
        lipschitz,
        outer_radius: outer,
        inner_radius: inner,
        evaluations: search.evaluations,
    })
}

struct Search {
    best: f64,
    argbest: Vec<f64>,
    evaluations: usize,
}

fn element(basis: &[Hermitian<f64>], x: &[f64], n: usize) -> Result<Hermitian<f64>> {
    if basis.is_empty() {
        return Ok(Hermitian::zeros(n));
    }
    Hermitian::linear_combination(x, basis)
}

/// Visits the `res^d` points of `center + [−half, half]^d`.
fn grid(
    center: &[f64],
    half: f64,
    res: usize,
    f: &mut dyn FnMut(&[f64]) -> Result<()>,
) -> Result<()> {
    let d = center.len();
    let step = 2.0 * half / (res - 1) as f64;
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    loop {
        for k in 0..d {
            x[k] = center[k] - half + step * idx[k] as f64;
        }
        f(&x)?;
        let mut k = 0;
        loop {
            if k == d {
                return Ok(());
            }
            idx[k] += 1;
            if idx[k] < res {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Unit directions: `±1` in one dimension, an angle fan in two, a Fibonacci
/// sphere plus the coordinate axes in three.
fn directions(d: usize) -> Vec<Vec<f64>> {
    match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..1440)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / 1440.0;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            let m = 6000;
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            let mut out: Vec<Vec<f64>> = (0..m)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / m as f64;
                    let s = (1.0 - z * z).sqrt();
                    let t = golden * k as f64;
                    vec![s * t.cos(), s * t.sin(), z]
                })
                .collect();
            for k in 0..3 {
                for sign in [1.0, -1.0] {
                    let mut e = vec![0.0; 3];
                    e[k] = sign;
                    out.push(e);
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{OperatorNormFunctional, SolverConfig};
    use crate::lipnorm::LipNorm;
    use crate::matrix::{AlgebraSpec, Density};

    fn two_point() -> BallSpec {
        let d = Hermitian::from_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        BallSpec::new(AlgebraSpec::two_point(), LipNorm::dirac(d))
    }

    #[test]
    fn two_point_mk() {
        let r = brute_force_oracle(
            &OracleProblem::MaxLinear(Hermitian::diagonal(&[1.0, -1.0])),
            &two_point(),
            201,
        )
        .unwrap();
        assert!((r.value - 1.0).abs() <= 2.0 / 201.0);
        assert!((r.value - 1.0).abs() <= r.error_bound);
        let z = brute_force_oracle(
            &OracleProblem::MaxLinear(Hermitian::zeros(2)),
            &two_point(),
            51,
        )
        .unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn scaled_ball() {
        let c = Hermitian::diagonal(&[1.0, -1.0]);
        let base =
            brute_force_oracle(&OracleProblem::MaxLinear(c.clone()), &two_point(), 101).unwrap();
        let scaled = BallSpec::new(
            AlgebraSpec::two_point(),
            LipNorm::scaled(3.0, two_point().lipnorm).unwrap(),
        );
        let s = brute_force_oracle(&OracleProblem::MaxLinear(c), &scaled, 101).unwrap();
        assert!((s.value - base.value / 3.0).abs() <= s.error_bound + base.error_bound / 3.0);
    }

    #[test]
    fn sliced_problems() {
        let ball = two_point().with_slice(Density::basis(2, 0).unwrap());
        let d = brute_force_oracle(
            &OracleProblem::MinDistance(Hermitian::diagonal(&[0.5, 3.0])),
            &ball,
            201,
        )
        .unwrap();
        assert!((d.value - 2.0).abs() <= d.error_bound);
        let c = brute_force_oracle(
            &OracleProblem::MaxConvex(&OperatorNormFunctional),
            &ball,
            201,
        )
        .unwrap();
        assert!((c.value - 1.0).abs() <= c.error_bound);
    }

    #[test]
    fn rejects_large_dimensions_and_coarse_grids() {
        let ball = BallSpec::new(
            AlgebraSpec::full(3).unwrap(),
            LipNorm::dirac(Hermitian::identity(3)),
        );
        let p = OracleProblem::MaxLinear(Hermitian::zeros(3));
        assert!(matches!(
            brute_force_oracle(&p, &ball, 51),
            Err(Error::UnsupportedDimension(_))
        ));
        assert!(brute_force_oracle(&p, &two_point(), 21).is_err());
        let _ = SolverConfig::default();
    }
}

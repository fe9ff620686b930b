use super::report::{provenance, MetricReport, ReportKind};
use super::LipSpace;
use crate::engine::{
    max_linear_coords, min_pencil_over_ball, BallSpec, CompiledBall, NormMode, Pencil, SolverConfig,
};
use crate::error::{Error, Result};
use crate::matrix::random::{derive_seed, gaussian_vec, rng_from_seed};
use crate::matrix::{CMatrix, Density, Hermitian};

const MESH_PROBES: usize = 2048;

/// Hausdorff distance in operator norm between the unit balls of two
/// Lip-norms on the same algebra, both sliced at `phi` (maximally mixed by
/// default).
///
/// Each directed distance is the largest projection distance from extreme
/// points found along `cfg.directions` seeded directions; both directions use
/// the same net, so the value is exactly symmetric. Lower estimate, with
/// `hi = value + mesh·(R₁ + R₂)` where `mesh` is the net's covering radius on
/// the unit sphere and `Rᵢ` bound the ball norms.
pub fn hauslip(
    a: &LipSpace,
    b: &LipSpace,
    phi: Option<&Density<f64>>,
    cfg: &SolverConfig,
) -> Result<MetricReport> {
    if a.algebra != b.algebra {
        return Err(Error::invalid(
            "hauslip needs both Lip-norms on the same algebra",
        ));
    }
    a.require_lipnorm()?;
    b.require_lipnorm()?;
    let pa = PivotedBall::new(a.sliced_ball(phi), None, None)?;
    let pb = PivotedBall::new(b.sliced_ball(phi), None, None)?;
    let report = hausdorff(&pa, &pb, cfg, "hauslip")?;
    Ok(report)
}

/// [`hauslip`] with an explicit slice state.
pub fn hauslip_with_slice(
    a: &LipSpace,
    b: &LipSpace,
    phi: &Density<f64>,
    cfg: &SolverConfig,
) -> Result<MetricReport> {
    hauslip(a, b, Some(phi), cfg)
}

/// `{left · π(a) · right : a in ball}` inside an ambient matrix algebra.
pub(crate) struct PivotedBall {
    pub ball: CompiledBall,
    ortho: Vec<Hermitian<f64>>,
    /// Images of the whitened basis.
    dirs: Vec<CMatrix<f64>>,
    /// Bound on the operator norm of every element of the set.
    pub radius: f64,
}

impl PivotedBall {
    /// `embed` maps the algebra into the ambient one; `pivot` is `(left, right)`.
    pub fn new(
        spec: BallSpec,
        embed: Option<&dyn Fn(&Hermitian<f64>) -> Result<CMatrix<f64>>>,
        pivot: Option<(&CMatrix<f64>, &CMatrix<f64>)>,
    ) -> Result<Self> {
        let ball = spec.compile()?;
        let ortho = spec.subspace_basis()?;
        let map = |e: &Hermitian<f64>| -> Result<CMatrix<f64>> {
            let x = match embed {
                Some(f) => f(e)?,
                None => e.as_matrix().clone(),
            };
            Ok(match pivot {
                Some((l, r)) => l * x * r,
                None => x,
            })
        };
        let dirs = ball.basis().iter().map(map).collect::<Result<Vec<_>>>()?;
        let scale = match pivot {
            Some((l, r)) => crate::matrix::operator_norm(l)? * crate::matrix::operator_norm(r)?,
            None => 1.0,
        };
        let radius = ball.norm_bound() * scale;
        Ok(Self {
            ball,
            ortho,
            dirs,
            radius,
        })
    }

    fn dim(&self) -> usize {
        self.ortho.len()
    }

    fn image(&self, y: &[f64]) -> CMatrix<f64> {
        let mut m = CMatrix::zeros(self.dirs[0].nrows(), self.dirs[0].ncols());
        for (d, c) in self.dirs.iter().zip(y) {
            m += d * crate::matrix::cplx(*c, 0.0);
        }
        m
    }
}

/// Symmetric Hausdorff estimate between two pivoted balls.
pub(crate) fn hausdorff(
    a: &PivotedBall,
    b: &PivotedBall,
    cfg: &SolverConfig,
    op: &str,
) -> Result<MetricReport> {
    cfg.validate()?;
    let (dab, fab) = directed(a, b, cfg);
    let (dba, fba) = directed(b, a, cfg);
    let value = dab.max(dba);
    let mesh = direction_mesh(a.dim(), cfg).max(direction_mesh(b.dim(), cfg));
    let mut report = MetricReport::new(value, ReportKind::LowerEstimate, provenance(op, cfg))
        .with_interval(value, value + mesh * (a.radius + b.radius))
        .with_flags(fab.into_iter().chain(fba));
    report.flag(format!("mesh={mesh:.6}"));
    Ok(report)
}

/// `max` over sampled extreme points `p` of `from` of `min_{q ∈ to} ‖p − q‖`.
fn directed(from: &PivotedBall, to: &PivotedBall, cfg: &SolverConfig) -> (f64, Vec<String>) {
    let d = from.dim();
    let neg: Vec<CMatrix<f64>> = to.dirs.iter().map(|m| -m).collect();
    let mut best = 0.0f64;
    let mut flags = Vec::new();
    for u in net(d, cfg) {
        let c = Hermitian::linear_combination(&u, &from.ortho).expect("net matches basis");
        let g = from.ball.linear_coords(&c);
        let ext = max_linear_coords(&from.ball, &g, cfg);
        flags.extend(ext.flags.iter().cloned());
        let offset = from.image(&ext.coords);
        let dist = if neg.is_empty() {
            crate::matrix::operator_norm(&offset).unwrap_or(f64::NAN)
        } else {
            let pencil = Pencil::new(offset, neg.clone(), NormMode::Operator);
            let r = min_pencil_over_ball(&to.ball, &pencil, cfg);
            flags.extend(r.flags);
            r.value
        };
        best = best.max(dist);
    }
    flags.dedup();
    (best, flags)
}

/// The seeded direction net: `±1` in one dimension.
pub(crate) fn net(d: usize, cfg: &SolverConfig) -> Vec<Vec<f64>> {
    match d {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        _ => (0..cfg.directions)
            .map(|k| {
                let mut rng = rng_from_seed(derive_seed(cfg.seed, "direction-net", k as u64));
                unit(gaussian_vec(&mut rng, d))
            })
            .collect(),
    }
}

fn unit(mut v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= n);
    v
}

/// Largest chordal distance from a probe on the unit sphere to the net,
/// over seeded probes.
pub fn direction_mesh(d: usize, cfg: &SolverConfig) -> f64 {
    if d <= 1 {
        return 0.0;
    }
    let points = net(d, cfg);
    let mut rng = rng_from_seed(derive_seed(cfg.seed, "mesh-probe", d as u64));
    (0..MESH_PROBES)
        .map(|_| {
            let t = unit(gaussian_vec(&mut rng, d));
            points
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(&t)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lipnorm::LipNorm;
    use crate::matrix::random::random_hermitian;
    use crate::matrix::AlgebraSpec;

    fn two_point(lambda: f64) -> LipSpace {
        let d = Hermitian::from_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let l = LipNorm::dirac(d);
        let l = if lambda == 1.0 {
            l
        } else {
            LipNorm::scaled(lambda, l).unwrap()
        };
        LipSpace::new(AlgebraSpec::two_point(), l).unwrap()
    }

    #[test]
    fn scaled_two_point_closed_form() {
        let cfg = SolverConfig::default();
        let first = Density::basis(2, 0).unwrap();
        for lambda in [0.5, 2.0, 5.0] {
            let r = hauslip(&two_point(1.0), &two_point(lambda), Some(&first), &cfg).unwrap();
            assert!(
                (r.value - (1.0 - 1.0 / lambda).abs()).abs() < 1e-5,
                "{lambda}: {}",
                r.value
            );
        }
        // The maximally mixed slice halves the segments.
        let r = hauslip(&two_point(1.0), &two_point(2.0), None, &cfg).unwrap();
        assert!((r.value - 0.25).abs() < 1e-5);
    }

    #[test]
    fn identical_is_zero_and_symmetric() {
        let cfg = SolverConfig {
            directions: 24,
            ..SolverConfig::with_seed(3)
        };
        let alg = AlgebraSpec::full(2).unwrap();
        let a = LipSpace::new(
            alg.clone(),
            LipNorm::dirac_amplified(random_hermitian(1, 4, 1.0).unwrap(), 2).unwrap(),
        )
        .unwrap();
        let b = LipSpace::new(
            alg,
            LipNorm::dirac_amplified(random_hermitian(2, 4, 1.0).unwrap(), 2).unwrap(),
        )
        .unwrap();
        assert!(hauslip(&a, &a, None, &cfg).unwrap().value < 1e-6);
        let ab = hauslip(&a, &b, None, &cfg).unwrap();
        let ba = hauslip(&b, &a, None, &cfg).unwrap();
        assert_eq!(ab.value, ba.value);
        assert!(ab.value > 0.0 && ab.hi.unwrap() > ab.value);
    }

    #[test]
    fn mesh_shrinks_with_net_size() {
        let small = direction_mesh(
            3,
            &SolverConfig {
                directions: 16,
                ..SolverConfig::default()
            },
        );
        let large = direction_mesh(
            3,
            &SolverConfig {
                directions: 256,
                ..SolverConfig::default()
            },
        );
        assert!(large < small && large > 0.0);
        assert_eq!(direction_mesh(1, &SolverConfig::default()), 0.0);
    }
}

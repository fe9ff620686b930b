use super::ball::{BallSpec, CompiledBall, SolverConfig};
use super::ellipsoid::{Cut, Ellipsoid};
use super::pencil::{NormMode, Pencil};
use super::NONCONVERGED;
use crate::error::{Error, Result};
use crate::matrix::Hermitian;

/// Outcome of a minimization over a ball.
#[derive(Clone, Debug)]
pub struct DistanceResult {
    pub value: f64,
    /// Certified lower bound: `lower ≤ optimum ≤ value`.
    pub lower: f64,
    pub coords: Vec<f64>,
    pub iterations: usize,
    pub flags: Vec<String>,
}

impl DistanceResult {
    pub fn converged(&self) -> bool {
        self.flags.is_empty()
    }
}

/// `min ‖a − b‖` over `b` in the ball, with the minimizing `b`.
///
/// For an unsliced ball `b` ranges over the ball plus the central line, so the
/// objective is `spread(a − b)/2` and the returned projection carries the
/// optimal central shift.
pub fn min_distance_to_ball(
    a: &Hermitian<f64>,
    ball: &BallSpec,
    cfg: &SolverConfig,
) -> Result<(DistanceResult, Hermitian<f64>)> {
    cfg.validate()?;
    let compiled = ball.compile()?;
    let n = compiled.algebra_dim();
    if a.dim() != n {
        return Err(Error::shape(n, a.dim()));
    }
    let a = ball.algebra.project(a)?;
    let inside_slice = match &ball.slice {
        Some(phi) => phi.eval(&a)?.abs() <= 1e-12 * a.operator_norm().max(1.0),
        None => true,
    };
    if inside_slice && ball.lipnorm.eval(&a)? <= ball.radius {
        let coords = compiled.coords(&a)?;
        let result = DistanceResult {
            value: 0.0,
            lower: 0.0,
            coords,
            iterations: 0,
            flags: Vec::new(),
        };
        return Ok((result, a));
    }

    let dirs = compiled.basis().iter().map(|e| -e.as_matrix()).collect();
    let pencil = if compiled.is_sliced() {
        Pencil::new(a.as_matrix().clone(), dirs, NormMode::Operator)
    } else {
        Pencil::new(a.as_matrix().clone(), dirs, NormMode::Spread).scaled(0.5)
    };
    let result = min_pencil_over_ball(&compiled, &pencil, cfg);
    let mut proj = compiled.point(&result.coords);
    if !compiled.is_sliced() {
        let (lo, hi) = (&a - &proj).min_max_eigenvalues();
        proj = proj.shift(0.5 * (lo + hi));
    }
    Ok((result, proj))
}

/// `min pencil(y)` over a compiled ball, by a deep-cut ellipsoid method.
///
/// Subgradient cuts at any center `c` give `min ≥ p(c) − √(qᵀPq)`; radial
/// projection of every center into the ball gives feasible upper bounds.
pub fn min_pencil_over_ball(
    ball: &CompiledBall,
    pencil: &Pencil,
    cfg: &SolverConfig,
) -> DistanceResult {
    let d = ball.dim();
    let zero = vec![0.0; d];
    let mut ub = pencil.value(&zero);
    let mut best = zero;
    if d == 0 {
        return DistanceResult {
            value: ub,
            lower: ub,
            coords: best,
            iterations: 0,
            flags: Vec::new(),
        };
    }
    let r = ball.radius();
    let mut e = Ellipsoid::ball(d, ball.outer_radius());
    let mut lb = 0.0f64;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        iterations += 1;
        let c = e.center().to_vec();
        let (fc, s) = ball.lip_subgradient(&c);
        let (hc, q) = pencil.value_grad(&c);
        let feasible = fc <= r;
        let candidate = if feasible {
            hc
        } else {
            pencil.value(&c.iter().map(|v| v * r / fc).collect::<Vec<_>>())
        };
        if candidate < ub {
            ub = candidate;
            best = if feasible {
                c.clone()
            } else {
                c.iter().map(|v| v * r / fc).collect()
            };
        }
        lb = lb.max(hc - e.width(&q));
        if ub - lb <= cfg.tol * ub.max(1.0) {
            converged = true;
            break;
        }
        let cut = if !feasible {
            e.cut(&s, r)
        } else {
            let qc: f64 = q.iter().zip(&c).map(|(a, b)| a * b).sum();
            if q.iter().all(|v| *v == 0.0) {
                lb = lb.max(hc);
                converged = true;
                break;
            }
            e.cut(&q, qc + (ub - hc))
        };
        if let Cut::Empty = cut {
            // No point of the ellipsoid improves on the incumbent.
            lb = ub;
            converged = true;
            break;
        }
    }
    let flags = if converged {
        Vec::new()
    } else {
        vec![NONCONVERGED.to_string()]
    };
    DistanceResult {
        value: ub,
        lower: lb.min(ub),
        coords: best,
        iterations,
        flags,
    }
}

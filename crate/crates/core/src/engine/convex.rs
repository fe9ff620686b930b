use std::cmp::Ordering;

use super::ball::{BallSpec, CompiledBall, SolverConfig};
use super::linear::max_linear_coords;
use super::pencil::{NormMode, Pencil};
use crate::error::{Error, Result};
use crate::matrix::random::{derive_seed, gaussian_vec, rng_from_seed};
use crate::matrix::{CMatrix, Hermitian};

/// Coordinate representation of a convex functional on a ball's subspace.
pub enum CoordinateForm<'a> {
    /// `y ↦ g·y`.
    Linear(Vec<f64>),
    Pencil(Pencil),
    /// Evaluated on the algebra element; gradients by central differences.
    Generic(Box<dyn Fn(&Hermitian<f64>) -> f64 + 'a>),
}

impl CoordinateForm<'_> {
    pub fn value(&self, ball: &CompiledBall, y: &[f64]) -> f64 {
        match self {
            CoordinateForm::Linear(g) => g.iter().zip(y).map(|(a, b)| a * b).sum(),
            CoordinateForm::Pencil(p) => p.value(y),
            CoordinateForm::Generic(f) => f(&ball.point(y)),
        }
    }

    pub fn value_grad(&self, ball: &CompiledBall, y: &[f64]) -> (f64, Vec<f64>) {
        match self {
            CoordinateForm::Linear(g) => (self.value(ball, y), g.clone()),
            CoordinateForm::Pencil(p) => p.value_grad(y),
            CoordinateForm::Generic(_) => {
                let v = self.value(ball, y);
                let h = 1e-6 * y.iter().map(|t| t * t).sum::<f64>().sqrt().max(1.0);
                let mut z = y.to_vec();
                let g = (0..y.len())
                    .map(|i| {
                        z[i] = y[i] + h;
                        let up = self.value(ball, &z);
                        z[i] = y[i] - h;
                        let down = self.value(ball, &z);
                        z[i] = y[i];
                        (up - down) / (2.0 * h)
                    })
                    .collect();
                (v, g)
            }
        }
    }
}

/// A convex function on self-adjoint matrices.
pub trait ConvexFunctional: Sync {
    fn value(&self, a: &Hermitian<f64>) -> Result<f64>;

    /// The functional restricted to `span(basis)`, in the basis coordinates.
    fn coordinate_form(&self, basis: &[Hermitian<f64>]) -> Result<CoordinateForm<'_>>;
}

/// `a ↦ Re Tr(c a)`.
pub struct LinearFunctional(pub Hermitian<f64>);

impl ConvexFunctional for LinearFunctional {
    fn value(&self, a: &Hermitian<f64>) -> Result<f64> {
        self.0.check_dim(a)?;
        Ok(self.0.inner(a))
    }

    fn coordinate_form(&self, basis: &[Hermitian<f64>]) -> Result<CoordinateForm<'_>> {
        Ok(CoordinateForm::Linear(
            basis.iter().map(|e| self.0.inner(e)).collect(),
        ))
    }
}

/// `a ↦ ‖a‖`.
pub struct OperatorNormFunctional;

impl ConvexFunctional for OperatorNormFunctional {
    fn value(&self, a: &Hermitian<f64>) -> Result<f64> {
        Ok(a.operator_norm())
    }

    fn coordinate_form(&self, basis: &[Hermitian<f64>]) -> Result<CoordinateForm<'_>> {
        Ok(CoordinateForm::Pencil(matrix_pencil(
            basis.iter().map(|e| e.as_matrix().clone()).collect(),
            NormMode::Operator,
        )))
    }
}

/// `a ↦ λ_max(a) − λ_min(a)`.
pub struct SpreadFunctional;

impl ConvexFunctional for SpreadFunctional {
    fn value(&self, a: &Hermitian<f64>) -> Result<f64> {
        Ok(crate::matrix::spectral_spread(a))
    }

    fn coordinate_form(&self, basis: &[Hermitian<f64>]) -> Result<CoordinateForm<'_>> {
        Ok(CoordinateForm::Pencil(matrix_pencil(
            basis.iter().map(|e| e.as_matrix().clone()).collect(),
            NormMode::Spread,
        )))
    }
}

type LinearMap = dyn Fn(&Hermitian<f64>) -> Result<CMatrix<f64>> + Send + Sync;

/// `a ↦ ‖Φ(a)‖` for a real-linear map `Φ` into matrices.
pub struct PencilFunctional {
    map: Box<LinearMap>,
}

impl PencilFunctional {
    pub fn new(
        map: impl Fn(&Hermitian<f64>) -> Result<CMatrix<f64>> + Send + Sync + 'static,
    ) -> Self {
        Self { map: Box::new(map) }
    }
}

impl ConvexFunctional for PencilFunctional {
    fn value(&self, a: &Hermitian<f64>) -> Result<f64> {
        crate::matrix::operator_norm(&(self.map)(a)?)
    }

    fn coordinate_form(&self, basis: &[Hermitian<f64>]) -> Result<CoordinateForm<'_>> {
        let dirs = basis
            .iter()
            .map(|e| (self.map)(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(CoordinateForm::Pencil(matrix_pencil(
            dirs,
            NormMode::Operator,
        )))
    }
}

/// Any convex function given as a closure.
pub struct ClosureFunctional {
    f: Box<dyn Fn(&Hermitian<f64>) -> f64 + Send + Sync>,
}

impl ClosureFunctional {
    pub fn new(f: impl Fn(&Hermitian<f64>) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Box::new(f) }
    }
}

impl ConvexFunctional for ClosureFunctional {
    fn value(&self, a: &Hermitian<f64>) -> Result<f64> {
        Ok((self.f)(a))
    }

    fn coordinate_form(&self, _basis: &[Hermitian<f64>]) -> Result<CoordinateForm<'_>> {
        Ok(CoordinateForm::Generic(Box::new(|a| (self.f)(a))))
    }
}

fn matrix_pencil(dirs: Vec<CMatrix<f64>>, mode: NormMode) -> Pencil {
    let (r, c) = dirs.first().map_or((1, 1), |m| (m.nrows(), m.ncols()));
    Pencil::new(CMatrix::zeros(r, c), dirs, mode)
}

/// Outcome of [`max_convex_over_ball`]; `value` is a lower estimate.
#[derive(Clone, Debug)]
pub struct ConvexResult {
    pub value: f64,
    pub argmax: Hermitian<f64>,
    pub coords: Vec<f64>,
    pub flags: Vec<String>,
}

/// Lower estimate of `sup g` over a sliced ball.
///
/// Runs `cfg.restarts` boundary-retracted gradient ascents from seeded random
/// directions, then polishes the best with conditional-gradient steps. Ties
/// go to the lexicographically smallest coordinates.
pub fn max_convex_over_ball(
    g: &dyn ConvexFunctional,
    ball: &BallSpec,
    cfg: &SolverConfig,
) -> Result<ConvexResult> {
    cfg.validate()?;
    if ball.slice.is_none() {
        return Err(Error::invalid(
            "max_convex_over_ball needs a sliced (compact) ball",
        ));
    }
    let compiled = ball.compile()?;
    let form = g.coordinate_form(compiled.basis())?;
    Ok(max_convex_coords(&compiled, &form, cfg))
}

const ASCENT_STEPS: usize = 300;
const POLISH_STEPS: usize = 3;

/// [`max_convex_over_ball`] on a compiled ball.
pub fn max_convex_coords(
    ball: &CompiledBall,
    form: &CoordinateForm<'_>,
    cfg: &SolverConfig,
) -> ConvexResult {
    let d = ball.dim();
    if d == 0 {
        let z = Vec::new();
        return ConvexResult {
            value: form.value(ball, &z),
            argmax: ball.point(&z),
            coords: z,
            flags: Vec::new(),
        };
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for k in 0..cfg.restarts {
        let mut rng = rng_from_seed(derive_seed(cfg.seed, "convex-start", k as u64));
        let dir = gaussian_vec(&mut rng, d);
        let Some(start) = ball.to_boundary(&dir) else {
            continue;
        };
        let candidate = ascend(ball, form, start, cfg);
        best = Some(pick(best, candidate));
    }
    let (mut value, mut y) = best.expect("at least one restart");

    for _ in 0..POLISH_STEPS {
        let (_, grad) = form.value_grad(ball, &y);
        if grad.iter().all(|v| *v == 0.0) {
            break;
        }
        let lmo = max_linear_coords(ball, &grad, cfg);
        let v = form.value(ball, &lmo.coords);
        if v > value * (1.0 + 1e-15) + f64::MIN_POSITIVE {
            let polished = ascend(ball, form, lmo.coords, cfg);
            let next = pick(Some((value, y.clone())), polished);
            if next.0 <= value {
                break;
            }
            (value, y) = next;
        } else {
            break;
        }
    }
    ConvexResult {
        value,
        argmax: ball.point(&y),
        coords: y,
        flags: Vec::new(),
    }
}

fn pick(best: Option<(f64, Vec<f64>)>, candidate: (f64, Vec<f64>)) -> (f64, Vec<f64>) {
    match best {
        None => candidate,
        Some(b) => match candidate.0.partial_cmp(&b.0) {
            Some(Ordering::Greater) => candidate,
            Some(Ordering::Equal) if lex_less(&candidate.1, &b.1) => candidate,
            _ => b,
        },
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Less) => return true,
            Some(Ordering::Greater) => return false,
            _ => {}
        }
    }
    false
}

/// Gradient ascent on the boundary with backtracking step control.
fn ascend(
    ball: &CompiledBall,
    form: &CoordinateForm<'_>,
    start: Vec<f64>,
    cfg: &SolverConfig,
) -> (f64, Vec<f64>) {
    let mut y = start;
    let mut v = form.value(ball, &y);
    let scale = y
        .iter()
        .map(|t| t * t)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let mut step = 0.5 * scale;
    for _ in 0..ASCENT_STEPS.min(cfg.max_iter) {
        let (_, grad) = form.value_grad(ball, &y);
        let gn = grad.iter().map(|t| t * t).sum::<f64>().sqrt();
        if gn == 0.0 || !gn.is_finite() {
            break;
        }
        let trial: Vec<f64> = y
            .iter()
            .zip(&grad)
            .map(|(a, b)| a + step * b / gn)
            .collect();
        let Some(z) = ball.to_boundary(&trial) else {
            step *= 0.5;
            continue;
        };
        let vz = form.value(ball, &z);
        if vz > v {
            y = z;
            v = vz;
            step *= 1.5;
        } else {
            step *= 0.5;
            if step < 1e-3 * cfg.tol * scale {
                break;
            }
        }
    }
    (v, y)
}

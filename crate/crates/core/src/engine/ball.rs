use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    cplx, operator_norm, top_singular, AlgebraSpec, CMatrix, Density, Hermitian, HermitianBasis,
};
use crate::LipNormSpec;

/// Tolerances, caps and the seed shared by every optimizer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "defaults::tol")]
    pub tol: f64,
    #[serde(default = "defaults::max_iter")]
    pub max_iter: usize,
    #[serde(default = "defaults::restarts")]
    pub restarts: usize,
    pub seed: u64,
    #[serde(default = "defaults::oracle_resolution")]
    pub oracle_resolution: usize,
    /// Size of the random direction net used to sample extreme points.
    #[serde(default = "defaults::directions")]
    pub directions: usize,
}

mod defaults {
    pub fn tol() -> f64 {
        1e-6
    }
    pub fn max_iter() -> usize {
        10_000
    }
    pub fn restarts() -> usize {
        32
    }
    pub fn oracle_resolution() -> usize {
        201
    }
    pub fn directions() -> usize {
        128
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            tol: defaults::tol(),
            max_iter: defaults::max_iter(),
            restarts: defaults::restarts(),
            seed,
            oracle_resolution: defaults::oracle_resolution(),
            directions: defaults::directions(),
        }
    }

    /// Every violated constraint, in field order.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.tol.is_finite() && self.tol > 0.0) {
            out.push(format!("solver.tol must be positive, got {}", self.tol));
        }
        if self.max_iter == 0 {
            out.push("solver.max_iter must be at least 1".into());
        }
        if self.restarts == 0 {
            out.push("solver.restarts must be at least 1".into());
        }
        if self.oracle_resolution < 51 {
            out.push(format!(
                "solver.oracle_resolution must be at least 51, got {}",
                self.oracle_resolution
            ));
        }
        if self.directions < 2 {
            out.push("solver.directions must be at least 2".into());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.problems().first() {
            Some(p) => Err(Error::invalid(p.clone())),
            None => Ok(()),
        }
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

fn one() -> f64 {
    1.0
}

/// `{a ∈ sa(𝔄) : L(a) ≤ radius}`, intersected with `ker φ` when `slice` is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub algebra: AlgebraSpec,
    pub lipnorm: LipNormSpec,
    #[serde(default = "one")]
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice: Option<Density<f64>>,
}

impl BallSpec {
    pub fn new(algebra: AlgebraSpec, lipnorm: LipNormSpec) -> Self {
        Self {
            algebra,
            lipnorm,
            radius: 1.0,
            slice: None,
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn with_slice(mut self, phi: Density<f64>) -> Self {
        self.slice = Some(phi);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.lipnorm.validate()?;
        let n = self.algebra.total_dim();
        if self.lipnorm.algebra_dim() != n {
            return Err(Error::shape(n, self.lipnorm.algebra_dim()));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::invalid(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        if let Some(phi) = &self.slice {
            if phi.dim() != n {
                return Err(Error::shape(n, phi.dim()));
            }
        }
        Ok(())
    }

    /// Orthonormal basis of the ball's linear subspace.
    pub fn subspace_basis(&self) -> Result<Vec<Hermitian<f64>>> {
        self.validate()?;
        let basis = HermitianBasis::for_algebra(&self.algebra)?;
        match &self.slice {
            Some(phi) => {
                let phi = Density::new(self.algebra.project(phi.rho())?)?;
                basis.slice(&phi)
            }
            None => Ok(basis.traceless().to_vec()),
        }
    }

    pub fn compile(&self) -> Result<CompiledBall> {
        CompiledBall::new(self)
    }
}

/// A ball in whitened coordinates.
#[derive(Clone, Debug)]
pub struct CompiledBall {
    n: usize,
    rep: usize,
    radius: f64,
    sliced: bool,
    /// Whitened basis `Eᵢ` of the subspace.
    basis: Vec<Hermitian<f64>>,
    /// `Sᵢ = image(Eᵢ)`.
    images: Vec<CMatrix<f64>>,
    /// Orthonormal subspace basis and the inverse whitening map `y = W⁻¹ x`.
    ortho: Vec<Hermitian<f64>>,
    unwhiten: DMatrix<f64>,
    norm_bound: f64,
}

impl CompiledBall {
    fn new(spec: &BallSpec) -> Result<Self> {
        let ortho = spec.subspace_basis()?;
        let l = &spec.lipnorm;
        let d = ortho.len();
        let raw: Vec<CMatrix<f64>> = ortho.iter().map(|e| l.image(e)).collect::<Result<_>>()?;
        let gram = DMatrix::from_fn(d, d, |i, j| {
            raw[i]
                .iter()
                .zip(raw[j].iter())
                .map(|(x, y)| x.re * y.re + x.im * y.im)
                .sum::<f64>()
        });
        let eig = gram.symmetric_eigen();
        let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(*v));
        let low = eig.eigenvalues.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        if d > 0 && !(low > 1e-24 * top.max(1e-300)) {
            return Err(Error::NotALipNorm("the seminorm vanishes on a direction of the ball's subspace, so the ball is unbounded".into()));
        }
        let mut whiten = DMatrix::zeros(d, d);
        let mut unwhiten = DMatrix::zeros(d, d);
        for k in 0..d {
            let s = eig.eigenvalues[k].sqrt();
            for i in 0..d {
                whiten[(i, k)] = eig.eigenvectors[(i, k)] / s;
                unwhiten[(k, i)] = eig.eigenvectors[(i, k)] * s;
            }
        }
        let basis: Vec<Hermitian<f64>> = (0..d)
            .map(|k| Hermitian::linear_combination(whiten.column(k).as_slice(), &ortho))
            .collect::<Result<_>>()?;
        let images = (0..d)
            .map(|k| {
                let mut m = CMatrix::zeros(
                    raw.first().map_or(0, |r| r.nrows()),
                    raw.first().map_or(0, |r| r.ncols()),
                );
                for (i, r) in raw.iter().enumerate() {
                    m += r * cplx(whiten[(i, k)], 0.0);
                }
                m
            })
            .collect();
        Ok(Self {
            n: spec.algebra.total_dim(),
            rep: l.rep_dim(),
            radius: spec.radius,
            sliced: spec.slice.is_some(),
            basis,
            images,
            ortho,
            unwhiten,
            norm_bound: if d == 0 {
                0.0
            } else {
                spec.radius * (l.rep_dim() as f64 / low).sqrt()
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    pub fn rep_dim(&self) -> usize {
        self.rep
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn is_sliced(&self) -> bool {
        self.sliced
    }

    /// Bound on `‖a‖_F`, hence on `‖a‖`, over the ball.
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    /// Whitened basis `Eᵢ`.
    pub fn basis(&self) -> &[Hermitian<f64>] {
        &self.basis
    }

    /// Radius of a Euclidean ball in `y` that contains the Lip-ball.
    pub fn outer_radius(&self) -> f64 {
        self.radius * (self.rep as f64).sqrt()
    }

    pub fn image(&self, y: &[f64]) -> CMatrix<f64> {
        combine(&self.images, y)
    }

    /// `L` at coordinates `y`.
    pub fn lip(&self, y: &[f64]) -> f64 {
        if self.images.is_empty() {
            return 0.0;
        }
        let m = self.image(y);
        operator_norm(&m).unwrap_or(f64::NAN)
    }

    /// `L(y)` and a subgradient `s` with `s·z ≤ L(z)` for all `z`.
    pub fn lip_subgradient(&self, y: &[f64]) -> (f64, Vec<f64>) {
        if self.images.is_empty() {
            return (0.0, Vec::new());
        }
        let (s, u, v) = top_singular(&self.image(y));
        let g = self
            .images
            .iter()
            .map(|t| (u.adjoint() * t * &v)[(0, 0)].re)
            .collect();
        (s, g)
    }

    /// Element of the algebra at coordinates `y`.
    pub fn point(&self, y: &[f64]) -> Hermitian<f64> {
        if self.basis.is_empty() {
            return Hermitian::zeros(self.n);
        }
        Hermitian::linear_combination(y, &self.basis).expect("coordinate length matches basis")
    }

    /// Coordinates of the component of `a` in the ball's subspace.
    pub fn coords(&self, a: &Hermitian<f64>) -> Result<Vec<f64>> {
        if a.dim() != self.n {
            return Err(Error::shape(self.n, a.dim()));
        }
        let x = nalgebra::DVector::from_iterator(
            self.ortho.len(),
            self.ortho.iter().map(|e| e.inner(a)),
        );
        Ok((&self.unwhiten * x).iter().copied().collect())
    }

    /// Coordinate gradient of `a ↦ Re Tr(c a)`.
    pub fn linear_coords(&self, c: &Hermitian<f64>) -> Vec<f64> {
        self.basis.iter().map(|e| c.inner(e)).collect()
    }

    /// Radial projection onto the boundary; `None` at the origin.
    pub fn to_boundary(&self, y: &[f64]) -> Option<Vec<f64>> {
        let f = self.lip(y);
        (f > 0.0).then(|| y.iter().map(|v| v * self.radius / f).collect())
    }

    /// Scales `y` into the ball if it lies outside.
    pub fn into_ball(&self, y: &[f64]) -> Vec<f64> {
        let f = self.lip(y);
        if f <= self.radius {
            y.to_vec()
        } else {
            y.iter().map(|v| v * self.radius / f).collect()
        }
    }
}

pub(crate) fn combine(mats: &[CMatrix<f64>], y: &[f64]) -> CMatrix<f64> {
    let mut m = CMatrix::zeros(mats[0].nrows(), mats[0].ncols());
    for (t, c) in mats.iter().zip(y) {
        if *c != 0.0 {
            m += t * cplx(*c, 0.0);
        }
    }
    m
}

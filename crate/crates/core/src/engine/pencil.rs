use super::ball::combine;
use crate::matrix::{operator_norm, top_singular, CMatrix, Hermitian};

/// Which convex function of the pencil matrix is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMode {
    /// Largest singular value.
    Operator,
    /// `λ_max − λ_min`; the pencil must be Hermitian.
    Spread,
}

/// `y ↦ scale · mode(M₀ + Σ yᵢ Mᵢ)`, a convex function of `y`.
#[derive(Clone, Debug)]
pub struct Pencil {
    pub offset: CMatrix<f64>,
    pub dirs: Vec<CMatrix<f64>>,
    pub mode: NormMode,
    pub scale: f64,
}

impl Pencil {
    pub fn new(offset: CMatrix<f64>, dirs: Vec<CMatrix<f64>>, mode: NormMode) -> Self {
        Self {
            offset,
            dirs,
            mode,
            scale: 1.0,
        }
    }

    pub fn scaled(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn matrix(&self, y: &[f64]) -> CMatrix<f64> {
        if self.dirs.is_empty() {
            return self.offset.clone();
        }
        &self.offset + combine(&self.dirs, y)
    }

    pub fn value(&self, y: &[f64]) -> f64 {
        let m = self.matrix(y);
        let v = match self.mode {
            NormMode::Operator => operator_norm(&m).unwrap_or(f64::NAN),
            NormMode::Spread => {
                let (lo, hi) = Hermitian::new(m)
                    .expect("pencil is Hermitian")
                    .min_max_eigenvalues();
                (hi - lo).max(0.0)
            }
        };
        self.scale * v
    }

    /// Value and a subgradient.
    pub fn value_grad(&self, y: &[f64]) -> (f64, Vec<f64>) {
        let m = self.matrix(y);
        match self.mode {
            NormMode::Operator => {
                let (s, u, v) = top_singular(&m);
                let g = self
                    .dirs
                    .iter()
                    .map(|t| self.scale * (u.adjoint() * t * &v)[(0, 0)].re)
                    .collect();
                (self.scale * s, g)
            }
            NormMode::Spread => {
                let h = Hermitian::new(m).expect("pencil is Hermitian");
                let (vals, vecs) = h.eigh();
                let lo = vecs.column(0).clone_owned();
                let hi = vecs.column(vals.len() - 1).clone_owned();
                let g = self
                    .dirs
                    .iter()
                    .map(|t| {
                        self.scale
                            * ((hi.adjoint() * t * &hi)[(0, 0)].re
                                - (lo.adjoint() * t * &lo)[(0, 0)].re)
                    })
                    .collect();
                (self.scale * (vals[vals.len() - 1] - vals[0]).max(0.0), g)
            }
        }
    }
}

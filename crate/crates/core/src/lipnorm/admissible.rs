use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::matrix::random::rng_from_seed;

/// Monotone `F : [0,∞)⁴ → [0,∞)` with `F(x,y,lₓ,l_y) ≥ x l_y + y lₓ`.
#[derive(Clone)]
pub enum AdmissibleF {
    /// `x l_y + y lₓ`.
    Leibniz,
    /// `M (x l_y + y lₓ)`.
    ScaledLeibniz(f64),
    Custom(Arc<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for AdmissibleF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibleF::Leibniz => write!(f, "Leibniz"),
            AdmissibleF::ScaledLeibniz(m) => write!(f, "ScaledLeibniz({m})"),
            AdmissibleF::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl AdmissibleF {
    pub fn eval(&self, x: f64, y: f64, lx: f64, ly: f64) -> f64 {
        match self {
            AdmissibleF::Leibniz => x * ly + y * lx,
            AdmissibleF::ScaledLeibniz(m) => m * (x * ly + y * lx),
            AdmissibleF::Custom(f) => f(x, y, lx, ly),
        }
    }

    /// Samples nonnegative quadruples and checks the Leibniz lower bound and
    /// coordinatewise monotonicity. Returns the first offending quadruple.
    pub fn check(&self, samples: usize, seed: u64) -> Result<(), [f64; 4]> {
        let mut rng = rng_from_seed(seed);
        for _ in 0..samples {
            let q: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..10.0));
            let v = self.eval(q[0], q[1], q[2], q[3]);
            if v < q[0] * q[3] + q[1] * q[2] - 1e-12 * (1.0 + v.abs()) {
                return Err(q);
            }
            for k in 0..4 {
                let mut up = q;
                up[k] += rng.random_range(0.0..1.0);
                if self.eval(up[0], up[1], up[2], up[3]) < v - 1e-12 * (1.0 + v.abs()) {
                    return Err(q);
                }
            }
        }
        Ok(())
    }
}

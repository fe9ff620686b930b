use nalgebra::{DMatrix, DVector};

/// `{y : (y − c)ᵀ P⁻¹ (y − c) ≤ 1}`, shrunk by half-space cuts.
///
/// In one dimension the update is exact interval bisection.
#[derive(Clone, Debug)]
pub(crate) struct Ellipsoid {
    pub c: DVector<f64>,
    pub p: DMatrix<f64>,
}

pub(crate) enum Cut {
    Kept,
    /// The half-space misses the ellipsoid.
    Empty,
}

impl Ellipsoid {
    pub fn ball(d: usize, radius: f64) -> Self {
        Self {
            c: DVector::zeros(d),
            p: DMatrix::identity(d, d) * (radius * radius),
        }
    }

    pub fn center(&self) -> &[f64] {
        self.c.as_slice()
    }

    /// `max_{y ∈ E} a·y − a·c`.
    pub fn width(&self, a: &[f64]) -> f64 {
        let a = DVector::from_column_slice(a);
        (a.dot(&(&self.p * &a))).max(0.0).sqrt()
    }

    /// Keeps `{a·y ≤ b}`.
    pub fn cut(&mut self, a: &[f64], b: f64) -> Cut {
        let d = self.c.len();
        let av = DVector::from_column_slice(a);
        let pa = &self.p * &av;
        let w = av.dot(&pa).max(0.0).sqrt();
        if w == 0.0 || !w.is_finite() {
            return Cut::Empty;
        }
        let alpha = (av.dot(&self.c) - b) / w;
        if alpha >= 1.0 {
            return Cut::Empty;
        }
        if alpha <= -1.0 {
            return Cut::Kept;
        }
        if d == 1 {
            let lo = self.c[0] - self.p[(0, 0)].sqrt();
            let hi = self.c[0] + self.p[(0, 0)].sqrt();
            let t = b / a[0];
            let (lo, hi) = if a[0] > 0.0 {
                (lo, hi.min(t))
            } else {
                (lo.max(t), hi)
            };
            self.c[0] = 0.5 * (lo + hi);
            self.p[(0, 0)] = (0.5 * (hi - lo)).powi(2);
            return Cut::Kept;
        }
        // Shallow cuts with α < −1/d do not shrink the volume.
        let alpha = alpha.max(-1.0 / d as f64);
        let df = d as f64;
        let tau = (1.0 + df * alpha) / (df + 1.0);
        let sigma = 2.0 * (1.0 + df * alpha) / ((df + 1.0) * (1.0 + alpha));
        let delta = df * df * (1.0 - alpha * alpha) / (df * df - 1.0);
        let b_dir = &pa / w;
        self.c -= &b_dir * tau;
        self.p = (&self.p - &b_dir * b_dir.transpose() * sigma) * delta;
        // Keep P symmetric against drift.
        for i in 0..d {
            for j in 0..i {
                let s = 0.5 * (self.p[(i, j)] + self.p[(j, i)]);
                self.p[(i, j)] = s;
                self.p[(j, i)] = s;
            }
        }
        Cut::Kept
    }
}

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::hausdorff::{hausdorff, PivotedBall};
use super::mk::mk_diameter;
use super::report::{provenance, MetricReport, ReportKind};
use super::LipSpace;
use crate::engine::{max_convex_coords, CoordinateForm, SolverConfig};
use crate::error::{Error, Result};
use crate::matrix::exchange::serde_matrix;
use crate::matrix::{amplify, CMatrix, Density, Hermitian, Unitary};

fn one() -> usize {
    1
}

/// Unital embedding `a ↦ U (a ⊗ I_k) U*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    #[serde(default = "one")]
    pub multiplicity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<Unitary<f64>>,
}

impl Embedding {
    pub fn identity() -> Self {
        Self {
            multiplicity: 1,
            unitary: None,
        }
    }

    pub fn target_dim(&self, source_dim: usize) -> usize {
        source_dim * self.multiplicity
    }

    pub fn apply(&self, a: &Hermitian<f64>) -> Result<CMatrix<f64>> {
        let x = amplify(a.as_matrix(), self.multiplicity);
        match &self.unitary {
            Some(u) => u.apply_matrix(&x),
            None => Ok(x),
        }
    }

    fn check(&self, source_dim: usize, ambient: usize, side: &str) -> Result<()> {
        if self.multiplicity == 0 || self.target_dim(source_dim) != ambient {
            return Err(Error::Contract(format!(
                "embedding {side} sends dimension {source_dim} with multiplicity {} into {}, which is not unital in dimension {ambient}",
                self.multiplicity,
                self.target_dim(source_dim)
            )));
        }
        if let Some(u) = &self.unitary {
            if u.dim() != ambient {
                return Err(Error::shape(ambient, u.dim()));
            }
        }
        Ok(())
    }
}

/// A bridge `(M_N, ω, π_A, π_B)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BridgeSpec {
    pub ambient_dim: usize,
    #[serde(with = "serde_matrix")]
    pub omega: CMatrix<f64>,
    pub embed_a: Embedding,
    pub embed_b: Embedding,
}

impl BridgeSpec {
    /// `(𝔄, 1, id, id)`.
    pub fn identity(n: usize) -> Self {
        Self {
            ambient_dim: n,
            omega: CMatrix::identity(n, n),
            embed_a: Embedding::identity(),
            embed_b: Embedding::identity(),
        }
    }

    /// Checks the embeddings against both spaces and that the pivot is a
    /// Hermitian matrix with a nonzero fixed subspace.
    pub fn validate(&self, a: &LipSpace, b: &LipSpace) -> Result<()> {
        let n = self.ambient_dim;
        if self.omega.nrows() != n || self.omega.ncols() != n {
            return Err(Error::shape(n, self.omega.nrows()));
        }
        self.embed_a.check(a.dim(), n, "A")?;
        self.embed_b.check(b.dim(), n, "B")?;
        if self.level_space()?.ncols() == 0 {
            return Err(Error::InvalidBridge(
                "the 1-level set of the pivot is empty".into(),
            ));
        }
        Ok(())
    }

    /// Orthonormal basis of `ker(ω − 1)`.
    pub fn level_space(&self) -> Result<CMatrix<f64>> {
        let skew = (&self.omega - self.omega.adjoint()).norm();
        if skew > 1e-10 * self.omega.norm().max(1.0) {
            return Err(Error::InvalidBridge(
                "only Hermitian pivots are supported".into(),
            ));
        }
        let (vals, vecs) = Hermitian::new(self.omega.clone())?.eigh();
        let cols: Vec<usize> = (0..vals.len())
            .filter(|&k| (vals[k] - 1.0).abs() <= 1e-9)
            .collect();
        Ok(CMatrix::from_fn(vals.len(), cols.len(), |i, j| {
            vecs[(i, cols[j])]
        }))
    }
}

/// Hausdorff distance between `{π_A(a)ω}` and `{ωπ_B(b)}` over the unit
/// balls, each sliced at its state (maximally mixed by default).
pub fn bridge_reach(
    bridge: &BridgeSpec,
    a: &LipSpace,
    b: &LipSpace,
    phi_a: Option<&Density<f64>>,
    phi_b: Option<&Density<f64>>,
    cfg: &SolverConfig,
) -> Result<MetricReport> {
    bridge.validate(a, b)?;
    a.require_lipnorm()?;
    b.require_lipnorm()?;
    let id = CMatrix::identity(bridge.ambient_dim, bridge.ambient_dim);
    let ea = |x: &Hermitian<f64>| bridge.embed_a.apply(x);
    let eb = |x: &Hermitian<f64>| bridge.embed_b.apply(x);
    let pa = PivotedBall::new(a.sliced_ball(phi_a), Some(&ea), Some((&id, &bridge.omega)))?;
    let pb = PivotedBall::new(b.sliced_ball(phi_b), Some(&eb), Some((&bridge.omega, &id)))?;
    hausdorff(&pa, &pb, cfg, "bridge_reach")
}

/// Larger of the two Hausdorff distances, in each side's MK metric, between
/// its state space and the pullback of the pivot's 1-level set.
///
/// With `V` an isometry onto `K = ker(ω − 1)`, minimax over the compact
/// sliced ball gives the exact form `sup_a λ_max(a) − λ_max(V* π(a) V)`,
/// positively homogeneous and estimated from below by boundary ascent.
pub fn bridge_height(
    bridge: &BridgeSpec,
    a: &LipSpace,
    b: &LipSpace,
    cfg: &SolverConfig,
) -> Result<MetricReport> {
    bridge.validate(a, b)?;
    a.require_lipnorm()?;
    b.require_lipnorm()?;
    let v = bridge.level_space()?;
    let mut value = 0.0f64;
    if v.ncols() < bridge.ambient_dim {
        for (space, embed) in [(a, &bridge.embed_a), (b, &bridge.embed_b)] {
            let ball = space.sliced_ball(None).compile()?;
            let gap = |x: &Hermitian<f64>| -> f64 {
                let top = x.min_max_eigenvalues().1;
                let compressed = v.adjoint() * embed.apply(x).expect("validated embedding") * &v;
                let level = Hermitian::new(compressed)
                    .expect("compression is Hermitian")
                    .min_max_eigenvalues()
                    .1;
                top - level
            };
            let form = CoordinateForm::Generic(Box::new(gap));
            value = value.max(max_convex_coords(&ball, &form, cfg).value);
        }
    }
    Ok(MetricReport::new(
        value,
        ReportKind::LowerEstimate,
        provenance("bridge_height", cfg),
    ))
}

/// `max(reach, height)`.
pub fn bridge_length(
    bridge: &BridgeSpec,
    a: &LipSpace,
    b: &LipSpace,
    phi_a: Option<&Density<f64>>,
    phi_b: Option<&Density<f64>>,
    cfg: &SolverConfig,
) -> Result<MetricReport> {
    let reach = bridge_reach(bridge, a, b, phi_a, phi_b, cfg)?;
    let height = bridge_height(bridge, a, b, cfg)?;
    let mut r = MetricReport::new(
        reach.value.max(height.value),
        ReportKind::ExactWithinTol,
        provenance("bridge_length", cfg),
    );
    r.absorb([&reach, &height]);
    if let Some(hi) = reach.hi {
        let v = r.value;
        r = r.with_interval(v, hi.max(height.value));
    }
    Ok(r)
}

/// Smallest bridge length among `bridges`: an upper bound on the propinquity.
///
/// Flags `exceeds-diameter-bound` when it is larger than both diameter
/// estimates, which the propinquity never is.
pub fn propinquity_upper_bound(
    bridges: &[BridgeSpec],
    a: &LipSpace,
    b: &LipSpace,
    phi_a: Option<&Density<f64>>,
    phi_b: Option<&Density<f64>>,
    cfg: &SolverConfig,
) -> Result<MetricReport> {
    if bridges.is_empty() {
        return Err(Error::invalid("at least one bridge is required"));
    }
    let mut best: Option<MetricReport> = None;
    for bridge in bridges {
        let l = bridge_length(bridge, a, b, phi_a, phi_b, cfg)?;
        if best.as_ref().is_none_or(|b| l.value < b.value) {
            best = Some(l);
        }
    }
    let best = best.expect("nonempty");
    let mut r = MetricReport::new(
        best.value,
        ReportKind::UpperBound,
        provenance("propinquity_upper_bound", cfg),
    )
    .with_flags(best.flags.iter().cloned());
    let diam = mk_diameter(a, cfg)?.value.max(mk_diameter(b, cfg)?.value);
    if r.value > diam * (1.0 + 1e-9) {
        r.flag("exceeds-diameter-bound");
    }
    Ok(r)
}

/// `|1 − exp(LipD)|·(1/2 + max(diam_A, diam_B))`.
pub fn lipd_propinquity_bound(lipd: f64, diam_a: f64, diam_b: f64) -> f64 {
    (1.0 - lipd.exp()).abs() * (0.5 + diam_a.max(diam_b))
}

/// The propinquity bound between curved Lip-norms with coefficient matrices
/// `H` and `H'` (`m × m`):
///
/// `m·max{‖1 − H'H⁻¹‖, ‖1 − HH'⁻¹‖}·[1 + ½·max{(1 + m‖1 − H⁻¹‖)⁻¹, (1 + m‖1 − H'⁻¹‖)⁻¹}·diam]`.
pub fn curved_propinquity_bound(h: &[Vec<f64>], h_prime: &[Vec<f64>], diam: f64) -> Result<f64> {
    let m = h.len();
    let to_matrix = |rows: &[Vec<f64>]| -> Result<DMatrix<f64>> {
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(Error::invalid(format!(
                "coefficient matrices must both be {m}x{m}"
            )));
        }
        Ok(DMatrix::from_fn(m, m, |i, j| rows[i][j]))
    };
    let hm = to_matrix(h)?;
    let hp = to_matrix(h_prime)?;
    let inv = |x: &DMatrix<f64>| {
        x.clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("coefficient matrix".into()))
    };
    let (hi, hpi) = (inv(&hm)?, inv(&hp)?);
    let id = DMatrix::<f64>::identity(m, m);
    let norm = |x: DMatrix<f64>| x.svd(false, false).singular_values.max();
    let mf = m as f64;
    let lead = mf * norm(&id - &hp * &hi).max(norm(&id - &hm * &hpi));
    let damp = (1.0 / (1.0 + mf * norm(&id - &hi))).max(1.0 / (1.0 + mf * norm(&id - &hpi)));
    Ok(lead * (1.0 + 0.5 * damp * diam))
}

//! Metric quantities between states, Lip-norms and automorphisms.

mod bridge;
mod hausdorff;
mod lipschitz;
mod mk;
mod report;

pub use bridge::{
    bridge_height, bridge_length, bridge_reach, curved_propinquity_bound, lipd_propinquity_bound,
    propinquity_upper_bound, BridgeSpec, Embedding,
};
pub use hausdorff::{direction_mesh, hauslip, hauslip_with_slice};
pub use lipschitz::{
    best_equivalence_constant, dilation, lipschitz_distance, lipschitz_distance_with_candidates,
    Morphism, LIPD_TOLERANCE,
};
pub use mk::{mk_diameter, mk_distance, mk_length};
pub use report::{provenance, MetricReport, ReportKind};

use serde::{Deserialize, Serialize};

use crate::engine::BallSpec;
use crate::error::{Error, Result};
use crate::lipnorm::kernel_check;
use crate::matrix::{AlgebraSpec, Density, HermitianBasis};
use crate::LipNormSpec;

/// An algebra with a Lip-norm on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipSpace {
    pub algebra: AlgebraSpec,
    pub lipnorm: LipNormSpec,
}

impl LipSpace {
    pub fn new(algebra: AlgebraSpec, lipnorm: LipNormSpec) -> Result<Self> {
        let space = Self { algebra, lipnorm };
        space.ball().validate()?;
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.algebra.total_dim()
    }

    /// The unit ball, unsliced.
    pub fn ball(&self) -> BallSpec {
        BallSpec::new(self.algebra.clone(), self.lipnorm.clone())
    }

    /// The unit ball sliced at `phi`, or at the maximally mixed state.
    pub fn sliced_ball(&self, phi: Option<&Density<f64>>) -> BallSpec {
        let phi = phi
            .cloned()
            .unwrap_or_else(|| Density::maximally_mixed(self.dim()));
        self.ball().with_slice(phi)
    }

    /// Errors unless the seminorm vanishes exactly on the scalars.
    pub fn require_lipnorm(&self) -> Result<()> {
        let basis = HermitianBasis::for_algebra(&self.algebra)?;
        let check = kernel_check(&self.lipnorm, &basis)?;
        if check.passed {
            Ok(())
        } else {
            Err(Error::NotALipNorm(format!(
                "kernel is larger than the scalars (L(1) = {:.3e}, min on traceless unit sphere ≤ {:.3e})",
                check.lip_of_unit, check.min_upper
            )))
        }
    }
}

//! Optimization over Lip-balls `{a : L(a) ≤ r, φ(a) = 0}`.
//!
//! All work happens in whitened coordinates `y` of the ball's subspace (the
//! traceless part when unsliced, `ker φ` when sliced): with `Sᵢ` the images of
//! the whitened basis, `‖Σ yᵢ Sᵢ‖_F = ‖y‖`, hence `‖y‖/√N ≤ L(a) ≤ ‖y‖` where
//! `N` is the representation dimension.

mod ball;
mod convex;
mod distance;
mod ellipsoid;
mod linear;
mod oracle;
mod pencil;

pub use ball::{BallSpec, CompiledBall, SolverConfig};
pub use convex::{
    max_convex_coords, max_convex_over_ball, ClosureFunctional, ConvexFunctional, ConvexResult,
    CoordinateForm, LinearFunctional, OperatorNormFunctional, PencilFunctional, SpreadFunctional,
};
pub use distance::{min_distance_to_ball, min_pencil_over_ball, DistanceResult};
pub use linear::{max_linear_coords, max_linear_over_ball, LinearResult};
pub use oracle::{brute_force_oracle, OracleProblem, OracleResult};
pub use pencil::{NormMode, Pencil};

/// Flag attached to results whose stopping test did not certify the tolerance.
pub const NONCONVERGED: &str = "nonconverged";

//! Scenario configuration: parsing and total validation.
//!
//! Parsing happens field by field so that one malformed entry does not hide
//! the others; [`ScenarioConfig::from_json`] returns every problem it finds.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use qmetric_core::engine::SolverConfig;
use qmetric_core::lipnorm::LipNorm;
use qmetric_core::matrix::{AlgebraSpec, Density, Hermitian, MatrixJson, Unitary};
use qmetric_core::metrics::{BridgeSpec, Embedding, LipSpace};
use qmetric_core::LipNormSpec;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// The only accepted value of the `schema` field.
pub const SCHEMA_VERSION: u32 = 1;

/// Largest family the covering experiment accepts; pairwise cost is quadratic.
pub const MAX_COVERING_SAMPLES: usize = 64;

const TOP_LEVEL: [&str; 8] = [
    "schema",
    "name",
    "algebra",
    "lipnorms",
    "solver",
    "slice",
    "experiment",
    "output",
];

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioConfig {
    pub schema: u32,
    pub name: String,
    pub algebra: AlgebraSpec,
    pub lipnorms: BTreeMap<String, LipNormSpec>,
    pub solver: SolverConfig,
    /// State at which unit balls are sliced.
    pub slice: StateRef,
    pub experiment: Experiment,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// A state given by name, by basis vector, or explicitly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateRef {
    /// Only `"maximally-mixed"`.
    Named(String),
    Pure {
        pure: usize,
    },
    Matrix(MatrixJson),
}

impl Default for StateRef {
    fn default() -> Self {
        StateRef::Named("maximally-mixed".into())
    }
}

impl StateRef {
    pub fn resolve(&self, algebra: &AlgebraSpec) -> Result<Density<f64>, String> {
        let n = algebra.total_dim();
        match self {
            StateRef::Named(s) if s == "maximally-mixed" => Ok(Density::maximally_mixed(n)),
            StateRef::Named(s) => Err(format!(
                "unknown state \"{s}\" (expected \"maximally-mixed\")"
            )),
            StateRef::Pure { pure } => Density::basis(n, *pure).map_err(|e| e.to_string()),
            StateRef::Matrix(m) => {
                let json = serde_json::to_value(m).map_err(|e| e.to_string())?;
                let state: Density<f64> =
                    serde_json::from_value(json).map_err(|e| e.to_string())?;
                if state.dim() != n {
                    return Err(format!(
                        "state has dimension {}, algebra has {n}",
                        state.dim()
                    ));
                }
                Ok(state)
            }
        }
    }
}

impl fmt::Display for StateRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateRef::Named(s) => write!(f, "{s}"),
            StateRef::Pure { pure } => write!(f, "pure:{pure}"),
            StateRef::Matrix(_) => write!(f, "matrix"),
        }
    }
}

/// Either explicit values or `steps` evenly spaced points from `start` to `stop`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, steps: usize },
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::Values(v) => v.clone(),
            Grid::Range { start, stop, steps } => match steps {
                0 => Vec::new(),
                1 => vec![*start],
                _ => (0..*steps)
                    .map(|k| start + (stop - start) * k as f64 / (*steps - 1) as f64)
                    .collect(),
            },
        }
    }
}

/// A unital map used by the dilation experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    /// Only `"identity"`.
    Named(String),
    Inner {
        unitary: Unitary<f64>,
    },
    Embedding {
        embedding: Embedding,
    },
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Named(s) => write!(f, "{s}"),
            MapSpec::Inner { .. } => write!(f, "inner"),
            MapSpec::Embedding { embedding } => write!(f, "embedding:x{}", embedding.multiplicity),
        }
    }
}

/// A parametrized family of Lip-norms for the covering experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    /// `Scaled(λ, base)` with `λ` uniform in `[lambda[0], lambda[1]]`.
    Scaled { base: String, lambda: [f64; 2] },
    /// `D + ω` with `ω` a random Hermitian on the representation space, `‖ω‖ ≤ radius`.
    Perturbed { base: String, radius: f64 },
}

/// ε-net estimate for `{α : L∘α ≤ bound·L}` in the mkℓ metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismNet {
    pub lipnorm: String,
    pub samples: Vec<usize>,
    pub eps: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    Mk {
        lipnorm: String,
        #[serde(default)]
        pairs: Vec<(StateRef, StateRef)>,
        #[serde(default)]
        random_pairs: usize,
    },
    Hauslip {
        pairs: Vec<(String, String)>,
    },
    Bridge {
        pairs: Vec<(String, String)>,
        /// Identity bridge when empty.
        #[serde(default)]
        bridges: Vec<BridgeSpec>,
    },
    Dilation {
        pairs: Vec<(String, String)>,
        /// Identity map when empty.
        #[serde(default)]
        maps: Vec<MapSpec>,
    },
    Lipd {
        pairs: Vec<(String, String)>,
        #[serde(default)]
        candidates: Vec<Unitary<f64>>,
    },
    Mklength {
        lipnorm: String,
        #[serde(default)]
        unitaries: Vec<Unitary<f64>>,
        #[serde(default)]
        random: usize,
    },
    PerturbationContinuity {
        base: String,
        direction: Hermitian<f64>,
        t: Grid,
    },
    ConformalFamily {
        base: String,
        hs: Vec<Hermitian<f64>>,
        #[serde(default = "defaults::samples")]
        samples: usize,
    },
    CurvedFamily {
        generators: Vec<Hermitian<f64>>,
        hs: Vec<Vec<Vec<f64>>>,
    },
    Covering {
        family: Family,
        sample_counts: Vec<usize>,
        eps: f64,
        #[serde(default = "defaults::subsample")]
        equivalence_subsample: usize,
    },
    AxiomSuite {
        /// Every table entry when empty.
        #[serde(default)]
        lipnorms: Vec<String>,
        #[serde(default)]
        automorphisms: Vec<Unitary<f64>>,
        #[serde(default = "defaults::random_lipnorms")]
        random_lipnorms: usize,
        #[serde(default = "defaults::triples")]
        state_triples: usize,
        #[serde(default = "defaults::triples")]
        unitary_pairs: usize,
        #[serde(default)]
        net: Option<AutomorphismNet>,
    },
}

mod defaults {
    pub fn samples() -> usize {
        1000
    }
    pub fn subsample() -> usize {
        4
    }
    pub fn random_lipnorms() -> usize {
        3
    }
    pub fn triples() -> usize {
        10
    }
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Mk { .. } => "mk",
            Experiment::Hauslip { .. } => "hauslip",
            Experiment::Bridge { .. } => "bridge",
            Experiment::Dilation { .. } => "dilation",
            Experiment::Lipd { .. } => "lipd",
            Experiment::Mklength { .. } => "mklength",
            Experiment::PerturbationContinuity { .. } => "perturbation-continuity",
            Experiment::ConformalFamily { .. } => "conformal-family",
            Experiment::CurvedFamily { .. } => "curved-family",
            Experiment::Covering { .. } => "covering",
            Experiment::AxiomSuite { .. } => "axiom-suite",
        }
    }
}

/// Every problem found in a configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationErrors(pub Vec<String>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

fn field<T: DeserializeOwned>(
    obj: &Map<String, Value>,
    key: &str,
    errors: &mut Vec<String>,
) -> Option<T> {
    match obj.get(key) {
        None => {
            errors.push(format!("{key}: missing"));
            None
        }
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| errors.push(format!("{key}: {e}")))
            .ok(),
    }
}

impl ScenarioConfig {
    /// Parses and validates, collecting every error.
    pub fn from_json(text: &str) -> Result<Self, ValidationErrors> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| ValidationErrors(vec![format!("not valid JSON: {e}")]))?;
        let Value::Object(obj) = value else {
            return Err(ValidationErrors(vec![
                "a scenario must be a JSON object".into()
            ]));
        };
        let mut errors = Vec::new();
        for key in obj.keys() {
            if !TOP_LEVEL.contains(&key.as_str()) {
                errors.push(format!("{key}: unknown field"));
            }
        }
        let schema: Option<u32> = field(&obj, "schema", &mut errors);
        let name: Option<String> = field(&obj, "name", &mut errors);
        let algebra: Option<AlgebraSpec> = field(&obj, "algebra", &mut errors);
        let lipnorms: Option<BTreeMap<String, LipNormSpec>> = field(&obj, "lipnorms", &mut errors);
        let solver: Option<SolverConfig> = field(&obj, "solver", &mut errors);
        let experiment: Option<Experiment> = field(&obj, "experiment", &mut errors);
        let slice: Option<StateRef> = match obj.get("slice") {
            None => Some(StateRef::default()),
            Some(_) => field(&obj, "slice", &mut errors),
        };
        let output: Option<Option<PathBuf>> = match obj.get("output") {
            None => Some(None),
            Some(_) => field(&obj, "output", &mut errors),
        };
        let (
            Some(schema),
            Some(name),
            Some(algebra),
            Some(lipnorms),
            Some(solver),
            Some(experiment),
            Some(slice),
            Some(output),
        ) = (
            schema, name, algebra, lipnorms, solver, experiment, slice, output,
        )
        else {
            return Err(ValidationErrors(errors));
        };
        let config = ScenarioConfig {
            schema,
            name,
            algebra,
            lipnorms,
            solver,
            slice,
            experiment,
            output,
        };
        errors.extend(config.problems());
        if errors.is_empty() {
            Ok(config)
        } else {
            Err(ValidationErrors(errors))
        }
    }

    pub fn validate(&self) -> Result<(), ValidationErrors> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ValidationErrors(problems))
        }
    }

    /// Semantic checks on an already parsed configuration.
    pub fn problems(&self) -> Vec<String> {
        let mut p = Vec::new();
        if self.schema != SCHEMA_VERSION {
            p.push(format!(
                "schema: expected {SCHEMA_VERSION}, found {}",
                self.schema
            ));
        }
        if self.name.trim().is_empty() {
            p.push("name: must not be empty".into());
        }
        p.extend(
            self.solver
                .problems()
                .into_iter()
                .map(|e| format!("solver: {e}")),
        );
        if self.lipnorms.is_empty() {
            p.push("lipnorms: the table is empty".into());
        }
        for (name, l) in &self.lipnorms {
            if let Err(e) = LipSpace::new(self.algebra.clone(), l.clone()) {
                p.push(format!("lipnorms.{name}: {e}"));
            }
        }
        if let Err(e) = self.slice.resolve(&self.algebra) {
            p.push(format!("slice: {e}"));
        }
        self.experiment_problems(&mut p);
        p
    }

    fn experiment_problems(&self, p: &mut Vec<String>) {
        let n = self.algebra.total_dim();
        let known = |p: &mut Vec<String>, what: &str, name: &str| {
            if !self.lipnorms.contains_key(name) {
                p.push(format!("experiment.{what}: unknown lipnorm \"{name}\""));
            }
        };
        let pairs = |p: &mut Vec<String>, pairs: &[(String, String)]| {
            if pairs.is_empty() {
                p.push("experiment.pairs: must not be empty".into());
            }
            for (a, b) in pairs {
                known(p, "pairs", a);
                known(p, "pairs", b);
            }
        };
        let dirac = |p: &mut Vec<String>, what: &str, name: &str| match self.lipnorms.get(name) {
            None => known(p, what, name),
            Some(LipNorm::DiracCommutator { .. }) => {}
            Some(_) => p.push(format!(
                "experiment.{what}: \"{name}\" must be a DiracCommutator Lip-norm"
            )),
        };
        let in_algebra = |p: &mut Vec<String>, what: String, h: &Hermitian<f64>| {
            if h.dim() != n {
                p.push(format!(
                    "{what}: dimension {} does not match the algebra ({n})",
                    h.dim()
                ));
            } else if !self.algebra.contains(h, 1e-9) {
                p.push(format!("{what}: not in the algebra"));
            }
        };
        match &self.experiment {
            Experiment::Mk {
                lipnorm,
                pairs: states,
                random_pairs,
            } => {
                known(p, "lipnorm", lipnorm);
                if states.is_empty() && *random_pairs == 0 {
                    p.push("experiment: needs state pairs or random_pairs > 0".into());
                }
                for (k, (a, b)) in states.iter().enumerate() {
                    for s in [a, b] {
                        if let Err(e) = s.resolve(&self.algebra) {
                            p.push(format!("experiment.pairs[{k}]: {e}"));
                        }
                    }
                }
            }
            Experiment::Hauslip { pairs: ps } | Experiment::Lipd { pairs: ps, .. } => {
                pairs(p, ps);
                if let Experiment::Lipd { candidates, .. } = &self.experiment {
                    if !self.algebra.is_single_block() {
                        p.push(
                            "experiment: lipd is only supported on single-block algebras".into(),
                        );
                    }
                    for (k, u) in candidates.iter().enumerate() {
                        if u.dim() != n {
                            p.push(format!(
                                "experiment.candidates[{k}]: dimension {} does not match {n}",
                                u.dim()
                            ));
                        }
                    }
                }
            }
            Experiment::Bridge { pairs: ps, bridges } => {
                pairs(p, ps);
                for (k, b) in bridges.iter().enumerate() {
                    if b.embed_a.target_dim(n) != b.ambient_dim
                        || b.embed_b.target_dim(n) != b.ambient_dim
                    {
                        p.push(format!(
                            "experiment.bridges[{k}]: embeddings do not land in dimension {}",
                            b.ambient_dim
                        ));
                    } else if let Err(e) = b.level_space() {
                        p.push(format!("experiment.bridges[{k}]: {e}"));
                    }
                }
            }
            Experiment::Dilation { pairs: ps, maps } => {
                pairs(p, ps);
                for (k, m) in maps.iter().enumerate() {
                    match m {
                        MapSpec::Named(s) if s != "identity" => {
                            p.push(format!("experiment.maps[{k}]: unknown map \"{s}\" (expected \"identity\")"))
                        }
                        MapSpec::Inner { unitary } if unitary.dim() != n => {
                            p.push(format!("experiment.maps[{k}]: dimension {} does not match {n}", unitary.dim()))
                        }
                        MapSpec::Embedding { embedding } if embedding.target_dim(n) != n => {
                            p.push(format!("experiment.maps[{k}]: embedding is not unital into the same algebra"))
                        }
                        _ => {}
                    }
                }
            }
            Experiment::Mklength {
                lipnorm,
                unitaries,
                random,
            } => {
                known(p, "lipnorm", lipnorm);
                if unitaries.is_empty() && *random == 0 {
                    p.push("experiment: needs unitaries or random > 0".into());
                }
                for (k, u) in unitaries.iter().enumerate() {
                    if u.dim() != n {
                        p.push(format!(
                            "experiment.unitaries[{k}]: dimension {} does not match {n}",
                            u.dim()
                        ));
                    }
                }
            }
            Experiment::PerturbationContinuity { base, direction, t } => {
                dirac(p, "base", base);
                // ω perturbs D, so it lives on the representation space.
                if let Some(LipNorm::DiracCommutator { d, .. }) = self.lipnorms.get(base) {
                    if direction.dim() != d.dim() {
                        p.push(format!(
                            "experiment.direction: must be {0}x{0} like the base D",
                            d.dim()
                        ));
                    }
                }
                let pts = t.points();
                if pts.is_empty() {
                    p.push("experiment.t: the grid is empty".into());
                }
                if pts.iter().any(|x| !x.is_finite()) {
                    p.push("experiment.t: grid points must be finite".into());
                }
            }
            Experiment::ConformalFamily { base, hs, samples } => {
                dirac(p, "base", base);
                if hs.is_empty() {
                    p.push("experiment.hs: must not be empty".into());
                }
                if *samples == 0 {
                    p.push("experiment.samples: must be positive".into());
                }
                for (k, h) in hs.iter().enumerate() {
                    in_algebra(p, format!("experiment.hs[{k}]"), h);
                    let smallest = h
                        .eigenvalues()
                        .iter()
                        .map(|x| x.abs())
                        .fold(f64::INFINITY, f64::min);
                    if h.dim() == n && smallest <= 1e-12 * h.operator_norm() {
                        p.push(format!("experiment.hs[{k}]: singular"));
                    }
                }
            }
            Experiment::CurvedFamily { generators, hs } => {
                if generators.is_empty() {
                    p.push("experiment.generators: must not be empty".into());
                }
                if hs.len() < 2 {
                    p.push("experiment.hs: needs at least two coefficient matrices".into());
                }
                for (k, x) in generators.iter().enumerate() {
                    in_algebra(p, format!("experiment.generators[{k}]"), x);
                }
                for (k, h) in hs.iter().enumerate() {
                    if let Err(e) = LipNorm::curved(generators.clone(), h.clone()) {
                        p.push(format!("experiment.hs[{k}]: {e}"));
                    }
                }
            }
            Experiment::Covering {
                family,
                sample_counts,
                eps,
                equivalence_subsample: _,
            } => {
                match family {
                    Family::Scaled { base, lambda } => {
                        known(p, "family.base", base);
                        if !(lambda[0] > 0.0 && lambda[0] <= lambda[1] && lambda[1].is_finite()) {
                            p.push("experiment.family.lambda: need 0 < lo ≤ hi < ∞".into());
                        }
                    }
                    Family::Perturbed { base, radius } => {
                        dirac(p, "family.base", base);
                        if !(*radius >= 0.0 && radius.is_finite()) {
                            p.push(
                                "experiment.family.radius: must be finite and nonnegative".into(),
                            );
                        }
                    }
                }
                if sample_counts.is_empty() {
                    p.push("experiment.sample_counts: must not be empty".into());
                }
                if sample_counts.windows(2).any(|w| w[0] > w[1]) {
                    p.push("experiment.sample_counts: must be nondecreasing".into());
                }
                for &c in sample_counts {
                    if c == 0 || c > MAX_COVERING_SAMPLES {
                        p.push(format!(
                            "experiment.sample_counts: {c} is outside 1..={MAX_COVERING_SAMPLES}"
                        ));
                    }
                }
                if !(*eps > 0.0 && eps.is_finite()) {
                    p.push("experiment.eps: must be positive".into());
                }
            }
            Experiment::AxiomSuite {
                lipnorms,
                automorphisms,
                net,
                ..
            } => {
                for l in lipnorms {
                    known(p, "lipnorms", l);
                }
                for (k, u) in automorphisms.iter().enumerate() {
                    if u.dim() != n {
                        p.push(format!(
                            "experiment.automorphisms[{k}]: dimension {} does not match {n}",
                            u.dim()
                        ));
                    }
                }
                if let Some(net) = net {
                    known(p, "net.lipnorm", &net.lipnorm);
                    if net.samples.is_empty() || net.samples.windows(2).any(|w| w[0] > w[1]) {
                        p.push("experiment.net.samples: must be nonempty and nondecreasing".into());
                    }
                    if net
                        .samples
                        .iter()
                        .any(|&c| c == 0 || c > MAX_COVERING_SAMPLES)
                    {
                        p.push(format!(
                            "experiment.net.samples: counts must lie in 1..={MAX_COVERING_SAMPLES}"
                        ));
                    }
                    if !(net.eps > 0.0 && net.bound >= 1.0) {
                        p.push("experiment.net: need eps > 0 and bound ≥ 1".into());
                    }
                }
            }
        }
    }

    pub fn space(&self, name: &str) -> qmetric_core::Result<LipSpace> {
        let l = self.lipnorms.get(name).ok_or_else(|| {
            qmetric_core::Error::InvalidInput(format!("unknown lipnorm \"{name}\""))
        })?;
        LipSpace::new(self.algebra.clone(), l.clone())
    }

    pub fn slice_state(&self) -> Density<f64> {
        self.slice.resolve(&self.algebra).expect("validated slice")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_POINT: &str = r#"{
        "schema": 1,
        "name": "two-point",
        "algebra": {"blocks": [1, 1]},
        "lipnorms": {"base": {"variant": "DiracCommutator", "d": {"dim": 2, "re": [[0, 1], [1, 0]]}}},
        "solver": {"seed": 7},
        "experiment": {"type": "mk", "lipnorm": "base", "pairs": [[{"pure": 0}, {"pure": 1}]]}
    }"#;

    #[test]
    fn parses_the_minimal_scenario() {
        let c = ScenarioConfig::from_json(TWO_POINT).unwrap();
        assert_eq!(c.slice, StateRef::default());
        assert_eq!(c.experiment.kind(), "mk");
        assert_eq!(c.solver.seed, 7);
    }

    #[test]
    fn errors_are_collected_not_short_circuited() {
        let mut v: Value = serde_json::from_str(TWO_POINT).unwrap();
        v["lipnorms"] = serde_json::json!({});
        v["solver"] = serde_json::json!({"seed": 1, "oracle_resolution": 3});
        v["experiment"]["lipnorm"] = "missing".into();
        v["extra"] = 1.into();
        let errs = ScenarioConfig::from_json(&v.to_string()).unwrap_err().0;
        assert!(
            errs.iter().any(|e| e.contains("table is empty")),
            "{errs:?}"
        );
        assert!(errs.iter().any(|e| e.starts_with("solver:")), "{errs:?}");
        assert!(
            errs.iter().any(|e| e.contains("unknown lipnorm")),
            "{errs:?}"
        );
        assert!(errs.iter().any(|e| e.starts_with("extra")), "{errs:?}");
    }

    #[test]
    fn missing_seed_is_rejected() {
        let mut v: Value = serde_json::from_str(TWO_POINT).unwrap();
        v["solver"] = serde_json::json!({});
        let errs = ScenarioConfig::from_json(&v.to_string()).unwrap_err().0;
        assert!(
            errs.iter()
                .any(|e| e.starts_with("solver:") && e.contains("seed")),
            "{errs:?}"
        );
    }

    #[test]
    fn covering_cost_guard() {
        let mut v: Value = serde_json::from_str(TWO_POINT).unwrap();
        v["experiment"] = serde_json::json!({
            "type": "covering",
            "family": {"kind": "scaled", "base": "base", "lambda": [1.0, 2.0]},
            "sample_counts": [8, 65],
            "eps": 0.1
        });
        let errs = ScenarioConfig::from_json(&v.to_string()).unwrap_err().0;
        assert!(errs.iter().any(|e| e.contains("65")), "{errs:?}");
    }

    #[test]
    fn grids_and_states() {
        assert_eq!(
            Grid::Range {
                start: 0.0,
                stop: 1.0,
                steps: 3
            }
            .points(),
            vec![0.0, 0.5, 1.0]
        );
        let two = AlgebraSpec::two_point();
        assert!(StateRef::Named("mixed".into()).resolve(&two).is_err());
        assert!(StateRef::Pure { pure: 2 }.resolve(&two).is_err());
        let rho = StateRef::Pure { pure: 1 }.resolve(&two).unwrap();
        assert_eq!(rho.rho().as_matrix()[(1, 1)].re, 1.0);
    }

    #[test]
    fn singular_conformal_factor_is_rejected() {
        let mut v: Value = serde_json::from_str(TWO_POINT).unwrap();
        v["experiment"] = serde_json::json!({
            "type": "conformal-family",
            "base": "base",
            "hs": [{"dim": 2, "re": [[1, 0], [0, 0]]}]
        });
        let errs = ScenarioConfig::from_json(&v.to_string()).unwrap_err().0;
        assert!(errs.iter().any(|e| e.contains("singular")), "{errs:?}");
    }
}

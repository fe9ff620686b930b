//! The experiment runners. Each returns an [`Outcome`] whose rows follow the
//! configuration order regardless of how many workers computed them.

mod axioms;
mod covering;
mod families;
mod pairwise;

use qmetric_core::engine::NONCONVERGED;
use qmetric_core::metrics::{MetricReport, ReportKind};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::config::{Experiment, ScenarioConfig};

/// One CSV row plus the reports that produced it.
#[derive(Clone, Debug, Default)]
pub struct Row {
    pub cells: Vec<String>,
    /// Weakest kind among contributing reports; `None` for purely
    /// deterministic rows.
    pub kind: Option<ReportKind>,
    pub flags: Vec<String>,
    pub reports: Vec<(String, MetricReport)>,
}

impl Row {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cell(mut self, v: impl ToString) -> Self {
        self.cells.push(v.to_string());
        self
    }

    pub fn num(self, x: f64) -> Self {
        self.cell(x)
    }

    pub fn opt(self, x: Option<f64>) -> Self {
        match x {
            Some(x) => self.num(x),
            None => self.cell(""),
        }
    }

    /// Records `r` as a contributor without adding a cell.
    pub fn report(mut self, label: &str, r: &MetricReport) -> Self {
        self.kind = Some(self.kind.map_or(r.kind, |k| k.weakest(r.kind)));
        for f in &r.flags {
            self = self.flag(f.clone());
        }
        self.reports.push((label.to_string(), r.clone()));
        self
    }

    /// Adds `r.value` as a cell and records `r`.
    pub fn value(self, label: &str, r: &MetricReport) -> Self {
        self.num(r.value).report(label, r)
    }

    pub fn flag(mut self, f: impl Into<String>) -> Self {
        let f = f.into();
        if !self.flags.contains(&f) {
            self.flags.push(f);
        }
        self
    }

    pub fn is_tainted(&self) -> bool {
        self.flags
            .iter()
            .any(|f| f == NONCONVERGED || f.starts_with("tainted"))
    }

    /// A row whose computation failed: blank cells and a tainting flag.
    pub fn failed(prefix: Vec<String>, width: usize, err: impl std::fmt::Display) -> Self {
        let mut cells = prefix;
        cells.resize(width, String::new());
        Row {
            cells,
            kind: None,
            flags: vec![format!("tainted-error: {err}")],
            reports: Vec::new(),
        }
    }
}

/// What an experiment produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
    /// Experiment-level diagnostics echoed into the manifest.
    pub summary: Map<String, Value>,
    /// Asserted properties that did not hold.
    pub failures: Vec<String>,
}

impl Outcome {
    fn new(columns: &[&'static str], rows: Vec<Row>) -> Self {
        Self {
            columns: columns.to_vec(),
            rows,
            summary: Map::new(),
            failures: Vec::new(),
        }
    }

    fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.summary.insert(key.to_string(), value.into());
        self
    }
}

/// Runs `f` on every item, in parallel, keeping item order; errors become
/// tainted rows labelled by `prefix`.
fn rows<T: Sync>(
    items: &[T],
    width: usize,
    prefix: impl Fn(&T) -> Vec<String> + Sync,
    f: impl Fn(&T) -> qmetric_core::Result<Row> + Sync,
) -> Vec<Row> {
    items
        .par_iter()
        .map(|item| f(item).unwrap_or_else(|e| Row::failed(prefix(item), width, e)))
        .collect()
}

/// Runs the configured experiment on the current rayon pool.
pub fn run(config: &ScenarioConfig) -> Outcome {
    match &config.experiment {
        Experiment::Mk {
            lipnorm,
            pairs,
            random_pairs,
        } => pairwise::mk(config, lipnorm, pairs, *random_pairs),
        Experiment::Hauslip { pairs } => pairwise::hauslip(config, pairs),
        Experiment::Bridge { pairs, bridges } => pairwise::bridge(config, pairs, bridges),
        Experiment::Dilation { pairs, maps } => pairwise::dilation(config, pairs, maps),
        Experiment::Lipd { pairs, candidates } => pairwise::lipd(config, pairs, candidates),
        Experiment::Mklength {
            lipnorm,
            unitaries,
            random,
        } => pairwise::mklength(config, lipnorm, unitaries, *random),
        Experiment::PerturbationContinuity { base, direction, t } => {
            families::perturbation(config, base, direction, &t.points())
        }
        Experiment::ConformalFamily { base, hs, samples } => {
            families::conformal(config, base, hs, *samples)
        }
        Experiment::CurvedFamily { generators, hs } => families::curved(config, generators, hs),
        Experiment::Covering {
            family,
            sample_counts,
            eps,
            equivalence_subsample,
        } => covering::covering(config, family, sample_counts, *eps, *equivalence_subsample),
        Experiment::AxiomSuite {
            lipnorms,
            automorphisms,
            random_lipnorms,
            state_triples,
            unitary_pairs,
            net,
        } => axioms::suite(
            config,
            &axioms::SuiteParams {
                lipnorms,
                automorphisms,
                random_lipnorms: *random_lipnorms,
                state_triples: *state_triples,
                unitary_pairs: *unitary_pairs,
                net: net.as_ref(),
            },
        ),
    }
}

/// Greedy ε-net in sample order: a point joins the net unless `covered(net, i)`
/// says some member is within reach. Returns net sizes after each prefix
/// length in `counts`.
///
/// Prefixes are nested and swept in order, so sizes never decrease.
pub fn greedy_net_sizes(
    total: usize,
    counts: &[usize],
    mut covered: impl FnMut(&[usize], usize) -> qmetric_core::Result<bool>,
) -> qmetric_core::Result<Vec<usize>> {
    let mut net: Vec<usize> = Vec::new();
    let mut sizes = Vec::with_capacity(counts.len());
    let mut next = 0;
    for &count in counts {
        while next < count.min(total) {
            if net.is_empty() || !covered(&net, next)? {
                net.push(next);
            }
            next += 1;
        }
        sizes.push(net.len());
    }
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(
        pts: &[f64],
        eps: f64,
    ) -> impl FnMut(&[usize], usize) -> qmetric_core::Result<bool> + '_ {
        move |net, i| Ok(net.iter().any(|&m| (pts[m] - pts[i]).abs() <= eps))
    }

    #[test]
    fn greedy_net_on_a_line() {
        let pts = [0.0, 0.05, 0.5, 0.95, 0.3, 1.0, 0.7];
        assert_eq!(
            greedy_net_sizes(pts.len(), &[1, 3, 7], line(&pts, 0.2)).unwrap(),
            vec![1, 2, 3]
        );
        assert_eq!(
            greedy_net_sizes(1, &[1, 8], |_, _| Ok(true)).unwrap(),
            vec![1, 1]
        );
    }

    #[test]
    fn doubling_eps_shrinks_this_net() {
        let pts: Vec<f64> = (0..40).map(|k| ((k * 37) % 41) as f64 / 41.0).collect();
        let small = greedy_net_sizes(pts.len(), &[40], line(&pts, 0.05)).unwrap()[0];
        let large = greedy_net_sizes(pts.len(), &[40], line(&pts, 0.1)).unwrap()[0];
        assert!(large <= small);
    }

    #[test]
    fn rows_merge_kinds_and_flags() {
        let a = MetricReport::new(1.0, ReportKind::ExactWithinTol, "x".into());
        let mut b = MetricReport::new(2.0, ReportKind::LowerEstimate, "y".into());
        b.flag(NONCONVERGED);
        let row = Row::new().value("a", &a).value("b", &b);
        assert_eq!(row.cells, vec!["1", "2"]);
        assert_eq!(row.kind, Some(ReportKind::LowerEstimate));
        assert!(row.is_tainted());
        let failed = Row::failed(vec!["p".into()], 3, "boom");
        assert_eq!(failed.cells, vec!["p", "", ""]);
        assert!(failed.is_tainted());
    }
}

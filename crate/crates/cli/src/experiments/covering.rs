use std::collections::HashMap;

use qmetric_core::lipnorm::LipNorm;
use qmetric_core::matrix::random::{derive_seed, random_hermitian, rng_from_seed};
use qmetric_core::metrics::{best_equivalence_constant, hauslip, LipSpace, MetricReport};
use qmetric_core::Result;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{greedy_net_sizes, Outcome, Row};
use crate::config::{Family, ScenarioConfig};

fn member(c: &ScenarioConfig, family: &Family, i: usize) -> Result<LipSpace> {
    let seed = derive_seed(c.solver.seed, "covering-member", i as u64);
    let u: f64 = rng_from_seed(seed).random();
    let l = match family {
        Family::Scaled { base, lambda } => LipNorm::scaled(
            lambda[0] + (lambda[1] - lambda[0]) * u,
            c.lipnorms[base].clone(),
        )?,
        Family::Perturbed { base, radius } => {
            let LipNorm::DiracCommutator { d, amplification } = &c.lipnorms[base] else {
                unreachable!("validated as a DiracCommutator")
            };
            let w = random_hermitian(derive_seed(seed, "direction", 0), d.dim(), 1.0)?;
            let norm = w.operator_norm();
            let omega = if norm > 0.0 {
                w.scale(radius * u / norm)
            } else {
                w
            };
            LipNorm::Perturbed {
                d: d.clone(),
                omega,
                amplification: *amplification,
            }
        }
    };
    LipSpace::new(c.algebra.clone(), l)
}

pub fn covering(
    c: &ScenarioConfig,
    family: &Family,
    counts: &[usize],
    eps: f64,
    subsample: usize,
) -> Outcome {
    const COLS: [&str; 3] = ["samples", "net_size", "evaluations"];
    let total = counts.iter().copied().max().unwrap_or(0);
    let phi = c.slice_state();
    let swept = (0..total)
        .map(|i| member(c, family, i))
        .collect::<Result<Vec<LipSpace>>>()
        .and_then(|members| sweep(c, &members, counts, eps, &phi));
    let (rows, sizes) = match swept {
        Ok(found) => found,
        Err(e) => {
            let rows = counts
                .iter()
                .map(|n| Row::failed(vec![n.to_string()], COLS.len(), &e))
                .collect();
            return Outcome::new(&COLS, rows);
        }
    };

    let base = match family {
        Family::Scaled { base, .. } | Family::Perturbed { base, .. } => base,
    };
    // Hypothesis check: L ≤ C'·L_ω on a subsample.
    let equivalence: Result<Vec<MetricReport>> = (0..subsample.min(total))
        .into_par_iter()
        .map(|i| best_equivalence_constant(&member(c, family, i)?, &c.space(base)?, &c.solver))
        .collect();
    let nondecreasing = sizes.windows(2).all(|w| w[0] <= w[1]);
    let saturated = sizes.len() >= 2 && sizes[sizes.len() - 1] == sizes[sizes.len() - 2];
    let mut outcome = Outcome::new(&COLS, rows)
        .with("net_sizes", sizes.clone())
        .with("nondecreasing", nondecreasing)
        .with("saturated", saturated);
    match equivalence {
        Ok(v) => {
            let max = v.iter().map(|r| r.value).fold(0.0f64, f64::max);
            outcome = outcome.with(
                "equivalence_max",
                json!({"value": max, "subsample": v.len()}),
            );
        }
        Err(e) => outcome.failures.push(format!("equivalence constant: {e}")),
    }
    if !nondecreasing {
        outcome
            .failures
            .push("net size decreased as the sample grew".into());
    }
    outcome
}

/// Greedy nets over nested prefixes of `members`, one row per count.
fn sweep(
    c: &ScenarioConfig,
    members: &[LipSpace],
    counts: &[usize],
    eps: f64,
    phi: &qmetric_core::DensityState,
) -> Result<(Vec<Row>, Vec<usize>)> {
    let mut cache: HashMap<(usize, usize), MetricReport> = HashMap::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    let sizes = greedy_net_sizes(members.len(), counts, |net, i| {
        // Every net member is compared, so evaluation counts do not depend on scheduling.
        let found: Vec<MetricReport> = net
            .par_iter()
            .map(|&m| hauslip(&members[m], &members[i], Some(phi), &c.solver))
            .collect::<Result<_>>()?;
        let mut hit = false;
        for (&m, r) in net.iter().zip(found) {
            hit |= r.value <= eps;
            order.push((m, i));
            cache.insert((m, i), r);
        }
        Ok(hit)
    })?;

    // Kind and flags accumulate; each report is listed once, in the row
    // whose prefix first needed it.
    let mut acc = Row::new();
    let mut rows = Vec::with_capacity(counts.len());
    let mut done = 0;
    for (&n, &size) in counts.iter().zip(&sizes) {
        let mut fresh = Vec::new();
        while done < order.len() && order[done].1 < n {
            let (m, i) = order[done];
            acc = acc.report(&format!("hauslip[{m},{i}]"), &cache[&(m, i)]);
            fresh.extend(acc.reports.pop());
            done += 1;
        }
        rows.push(Row {
            cells: vec![n.to_string(), size.to_string(), done.to_string()],
            kind: acc.kind,
            flags: acc.flags.clone(),
            reports: fresh,
        });
    }
    Ok((rows, sizes))
}

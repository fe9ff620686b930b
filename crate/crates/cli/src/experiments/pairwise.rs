use qmetric_core::matrix::random::{derive_seed, random_state_in, random_unitary_in};
use qmetric_core::matrix::{Density, Unitary};
use qmetric_core::metrics::{
    bridge_height, bridge_reach, dilation as dilation_of, lipd_propinquity_bound,
    lipschitz_distance_with_candidates, mk_diameter, mk_distance, mk_length,
    propinquity_upper_bound, BridgeSpec, MetricReport, Morphism, ReportKind,
};
use qmetric_core::Result;

use super::{rows, Outcome, Row};
use crate::config::{MapSpec, ScenarioConfig, StateRef};

fn pair_prefix(p: &(String, String)) -> Vec<String> {
    vec![p.0.clone(), p.1.clone()]
}

pub fn mk(
    c: &ScenarioConfig,
    lipnorm: &str,
    pairs: &[(StateRef, StateRef)],
    random_pairs: usize,
) -> Outcome {
    const COLS: [&str; 6] = ["pair", "rho", "sigma", "value", "lo", "hi"];
    let seed = c.solver.seed;
    let mut jobs: Vec<(String, String, Result<(Density<f64>, Density<f64>)>)> = pairs
        .iter()
        .map(|(a, b)| {
            let resolved = (|| Ok((a.resolve(&c.algebra)?, b.resolve(&c.algebra)?)))()
                .map_err(qmetric_core::Error::InvalidInput);
            (a.to_string(), b.to_string(), resolved)
        })
        .collect();
    for k in 0..random_pairs as u64 {
        let states = (|| {
            Ok((
                random_state_in(&c.algebra, derive_seed(seed, "mk-pair", 2 * k))?,
                random_state_in(&c.algebra, derive_seed(seed, "mk-pair", 2 * k + 1))?,
            ))
        })();
        jobs.push((
            format!("random:{}", 2 * k),
            format!("random:{}", 2 * k + 1),
            states,
        ));
    }
    let indexed: Vec<(
        usize,
        &(String, String, Result<(Density<f64>, Density<f64>)>),
    )> = jobs.iter().enumerate().collect();
    let space = c.space(lipnorm);
    let out = rows(
        &indexed,
        COLS.len(),
        |(k, (a, b, _))| vec![k.to_string(), a.clone(), b.clone()],
        |(k, (a, b, states))| {
            let space = space.as_ref().map_err(clone_err)?;
            let (rho, sigma) = states.as_ref().map_err(clone_err)?;
            let r = mk_distance(space, rho, sigma, &c.solver)?;
            Ok(Row::new()
                .cell(k)
                .cell(a)
                .cell(b)
                .value("mk_distance", &r)
                .opt(r.lo)
                .opt(r.hi))
        },
    );
    Outcome::new(&COLS, out)
}

/// Errors are not `Clone`; shared setup failures are re-wrapped per row.
fn clone_err(e: &qmetric_core::Error) -> qmetric_core::Error {
    qmetric_core::Error::InvalidInput(e.to_string())
}

pub fn hauslip(c: &ScenarioConfig, pairs: &[(String, String)]) -> Outcome {
    const COLS: [&str; 5] = ["a", "b", "value", "lo", "hi"];
    let phi = c.slice_state();
    let out = rows(pairs, COLS.len(), pair_prefix, |(a, b)| {
        let r = qmetric_core::metrics::hauslip(&c.space(a)?, &c.space(b)?, Some(&phi), &c.solver)?;
        Ok(Row::new()
            .cell(a)
            .cell(b)
            .value("hauslip", &r)
            .opt(r.lo)
            .opt(r.hi))
    });
    Outcome::new(&COLS, out)
}

pub fn bridge(c: &ScenarioConfig, pairs: &[(String, String)], bridges: &[BridgeSpec]) -> Outcome {
    const COLS: [&str; 6] = ["a", "b", "bridge", "reach", "height", "length"];
    let bridges = if bridges.is_empty() {
        vec![BridgeSpec::identity(c.algebra.total_dim())]
    } else {
        bridges.to_vec()
    };
    let phi = c.slice_state();
    let mut jobs: Vec<(&(String, String), Option<usize>)> = Vec::new();
    for p in pairs {
        jobs.extend((0..bridges.len()).map(|k| (p, Some(k))));
        jobs.push((p, None));
    }
    let label = |k: &Option<usize>| k.map_or("min".to_string(), |k| k.to_string());
    let out = rows(
        &jobs,
        COLS.len(),
        |(p, k)| vec![p.0.clone(), p.1.clone(), label(k)],
        |((a, b), k)| {
            let (sa, sb) = (c.space(a)?, c.space(b)?);
            let row = Row::new().cell(a).cell(b).cell(label(k));
            match k {
                Some(k) => {
                    let reach =
                        bridge_reach(&bridges[*k], &sa, &sb, Some(&phi), Some(&phi), &c.solver)?;
                    let height = bridge_height(&bridges[*k], &sa, &sb, &c.solver)?;
                    Ok(row
                        .value("reach", &reach)
                        .value("height", &height)
                        .num(reach.value.max(height.value)))
                }
                None => {
                    let best = propinquity_upper_bound(
                        &bridges,
                        &sa,
                        &sb,
                        Some(&phi),
                        Some(&phi),
                        &c.solver,
                    )?;
                    Ok(row
                        .cell("")
                        .cell("")
                        .value("propinquity_upper_bound", &best))
                }
            }
        },
    );
    Outcome::new(&COLS, out)
}

fn morphism(m: &MapSpec, n: usize) -> Morphism {
    match m {
        MapSpec::Named(_) => Morphism::Inner(Unitary::identity(n)),
        MapSpec::Inner { unitary } => Morphism::Inner(unitary.clone()),
        MapSpec::Embedding { embedding } => Morphism::Embedding(embedding.clone()),
    }
}

pub fn dilation(c: &ScenarioConfig, pairs: &[(String, String)], maps: &[MapSpec]) -> Outcome {
    const COLS: [&str; 4] = ["a", "b", "map", "value"];
    let maps = if maps.is_empty() {
        vec![MapSpec::Named("identity".into())]
    } else {
        maps.to_vec()
    };
    let jobs: Vec<(&(String, String), &MapSpec)> = pairs
        .iter()
        .flat_map(|p| maps.iter().map(move |m| (p, m)))
        .collect();
    let out = rows(
        &jobs,
        COLS.len(),
        |(p, m)| vec![p.0.clone(), p.1.clone(), m.to_string()],
        |((a, b), m)| {
            let r = dilation_of(
                &morphism(m, c.algebra.total_dim()),
                &c.space(a)?,
                &c.space(b)?,
                &c.solver,
            )?;
            Ok(Row::new().cell(a).cell(b).cell(m).value("dilation", &r))
        },
    );
    Outcome::new(&COLS, out)
}

pub fn lipd(
    c: &ScenarioConfig,
    pairs: &[(String, String)],
    candidates: &[Unitary<f64>],
) -> Outcome {
    const COLS: [&str; 6] = ["a", "b", "value", "diam_a", "diam_b", "propinquity_bound"];
    let out = rows(pairs, COLS.len(), pair_prefix, |(a, b)| {
        let (sa, sb) = (c.space(a)?, c.space(b)?);
        let (d, _) = lipschitz_distance_with_candidates(&sa, &sb, candidates, &c.solver)?;
        let (da, db) = (mk_diameter(&sa, &c.solver)?, mk_diameter(&sb, &c.solver)?);
        // Diameters enter from below, so the bound is only as strong as they are.
        let bound = MetricReport::new(
            lipd_propinquity_bound(d.value, da.value, db.value),
            ReportKind::UpperBound.weakest(da.kind).weakest(db.kind),
            d.provenance.clone(),
        );
        Ok(Row::new()
            .cell(a)
            .cell(b)
            .value("lipschitz_distance", &d)
            .value("diam_a", &da)
            .value("diam_b", &db)
            .value("propinquity_bound", &bound))
    });
    Outcome::new(&COLS, out)
}

pub fn mklength(
    c: &ScenarioConfig,
    lipnorm: &str,
    unitaries: &[Unitary<f64>],
    random: usize,
) -> Outcome {
    const COLS: [&str; 3] = ["index", "source", "value"];
    let mut jobs: Vec<(String, Result<Unitary<f64>>)> = unitaries
        .iter()
        .map(|u| ("config".into(), Ok(u.clone())))
        .collect();
    for k in 0..random as u64 {
        jobs.push((
            format!("random:{k}"),
            random_unitary_in(&c.algebra, derive_seed(c.solver.seed, "mklength", k)),
        ));
    }
    let indexed: Vec<(usize, &(String, Result<Unitary<f64>>))> = jobs.iter().enumerate().collect();
    let out = rows(
        &indexed,
        COLS.len(),
        |(k, (src, _))| vec![k.to_string(), src.clone()],
        |(k, (src, u))| {
            let u = u.as_ref().map_err(clone_err)?;
            let r = mk_length(u, &c.space(lipnorm)?, &c.solver)?;
            Ok(Row::new().cell(k).cell(src).value("mk_length", &r))
        },
    );
    Outcome::new(&COLS, out)
}

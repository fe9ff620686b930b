use std::collections::BTreeMap;

use qmetric_core::lipnorm::{kernel_check, LipNorm};
use qmetric_core::matrix::random::{
    derive_seed, random_hermitian, random_state_in, random_unitary_in,
};
use qmetric_core::matrix::{HermitianBasis, Unitary};
use qmetric_core::metrics::{
    best_equivalence_constant, dilation, lipschitz_distance, mk_diameter, mk_distance, mk_length,
    LipSpace, MetricReport, Morphism, LIPD_TOLERANCE,
};
use qmetric_core::Result;
use rayon::prelude::*;
use serde_json::json;

use super::{greedy_net_sizes, rows, Outcome, Row};
use crate::config::{AutomorphismNet, ScenarioConfig};

pub struct SuiteParams<'a> {
    pub lipnorms: &'a [String],
    pub automorphisms: &'a [Unitary<f64>],
    pub random_lipnorms: usize,
    pub state_triples: usize,
    pub unitary_pairs: usize,
    pub net: Option<&'a AutomorphismNet>,
}

const COLS: [&str; 5] = ["property", "instance", "value", "margin", "passed"];

/// A property row: passes iff `margin ≥ 0`.
fn check(property: &str, instance: &str, value: f64, margin: f64) -> Row {
    Row::new()
        .cell(property)
        .cell(instance)
        .num(value)
        .num(margin)
        .cell(margin >= 0.0)
}

fn prefix(property: &str, instance: &str) -> Vec<String> {
    vec![property.to_string(), instance.to_string()]
}

pub fn suite(c: &ScenarioConfig, p: &SuiteParams<'_>) -> Outcome {
    let tol = c.solver.tol;
    let seed = c.solver.seed;
    let n = c.algebra.total_dim();

    let mut instances: Vec<(String, Result<LipSpace>)> = Vec::new();
    let names: Vec<String> = if p.lipnorms.is_empty() {
        c.lipnorms.keys().cloned().collect()
    } else {
        p.lipnorms.to_vec()
    };
    for name in names {
        let space = c.space(&name);
        instances.push((name, space));
    }
    for k in 0..p.random_lipnorms as u64 {
        // Amplified so that D itself is not in the commutant of the algebra.
        let space = random_hermitian(derive_seed(seed, "axiom-lipnorm", k), 2 * n, 1.0)
            .and_then(|d| LipNorm::dirac_amplified(d, 2))
            .and_then(|l| LipSpace::new(c.algebra.clone(), l));
        instances.push((format!("random:{k}"), space));
    }

    let mut out = Vec::new();
    let mut valid: Vec<(String, LipSpace)> = Vec::new();
    for (name, space) in instances {
        let row = space.and_then(|s| {
            let basis = HermitianBasis::for_algebra(&c.algebra)?;
            let k = kernel_check(&s.lipnorm, &basis)?;
            if k.passed {
                valid.push((name.clone(), s));
            }
            Ok(Row::new()
                .cell("kernel")
                .cell(&name)
                .num(k.min_upper)
                .cell("")
                .cell(k.passed))
        });
        out.push(row.unwrap_or_else(|e| Row::failed(prefix("kernel", &name), COLS.len(), e)));
    }

    out.extend(mk_rows(c, &valid, p.state_triples));
    out.extend(chain_rows(c, &valid));
    let mut summary = serde_json::Map::new();
    if c.algebra.is_single_block() {
        out.extend(lipd_rows(c, &valid));
    } else {
        summary.insert("lipd".into(), "skipped: multi-block algebra".into());
    }
    out.extend(length_rows(c, &valid, p.automorphisms, p.unitary_pairs));
    if let Some(net) = p.net {
        let (net_rows, sizes) = automorphism_net(c, net);
        out.extend(net_rows);
        let saturated = sizes.len() >= 2 && sizes[sizes.len() - 1] == sizes[sizes.len() - 2];
        summary.insert(
            "automorphism_net".into(),
            json!({"sizes": sizes, "saturated": saturated}),
        );
    }

    let failures: Vec<String> = out
        .iter()
        .filter(|r| r.cells.get(4).is_some_and(|v| v == "false"))
        .map(|r| format!("{} failed on {}", r.cells[0], r.cells[1]))
        .collect();
    let mut outcome = Outcome::new(&COLS, out).with("tolerance", tol);
    outcome.summary.extend(summary);
    outcome.failures = failures;
    outcome
}

fn mk_rows(c: &ScenarioConfig, valid: &[(String, LipSpace)], triples: usize) -> Vec<Row> {
    let tol = c.solver.tol;
    let seed = c.solver.seed;
    let jobs: Vec<(usize, Option<usize>)> = (0..valid.len())
        .flat_map(|i| (0..triples).map(move |t| (i, Some(t))).chain([(i, None)]))
        .collect();
    let label = |&(i, t): &(usize, Option<usize>)| match t {
        Some(t) => format!("{}/{t}", valid[i].0),
        None => valid[i].0.clone(),
    };
    let groups = rows(
        &jobs,
        COLS.len(),
        |j| prefix("mk", &label(j)),
        |j| {
            let space = &valid[j.0].1;
            let Some(t) = j.1 else {
                // Random pairs never exceed the diameter, which never exceeds its bound.
                let diam = mk_diameter(space, &c.solver)?;
                let mut worst = 0.0f64;
                for t in 0..triples as u64 {
                    let rho = random_state_in(&c.algebra, derive_seed(seed, "axiom-state", 3 * t))?;
                    let sigma =
                        random_state_in(&c.algebra, derive_seed(seed, "axiom-state", 3 * t + 1))?;
                    worst = worst.max(mk_distance(space, &rho, &sigma, &c.solver)?.value);
                }
                let slack = 3.0 * tol * diam.value.max(1.0);
                let margin =
                    (diam.value + slack - worst).min(diam.hi.unwrap_or(f64::INFINITY) - diam.value);
                return Ok(check("mk-diameter", &label(j), diam.value, margin)
                    .report("mk_diameter", &diam));
            };
            let t = t as u64;
            let states = [0, 1, 2]
                .map(|k| random_state_in(&c.algebra, derive_seed(seed, "axiom-state", 3 * t + k)));
            let [rho, sigma, tau] = states;
            let (rho, sigma, tau) = (rho?, sigma?, tau?);
            let d = |a, b| mk_distance(space, a, b, &c.solver);
            let (d12, d21, d23, d13, d11) = (
                d(&rho, &sigma)?,
                d(&sigma, &rho)?,
                d(&sigma, &tau)?,
                d(&rho, &tau)?,
                d(&rho, &rho)?,
            );
            let excess = d13.value - d12.value - d23.value;
            let asym = (d12.value - d21.value).abs();
            // Three rows folded into one job; split below.
            Ok(Row::new()
                .cell(d11.value)
                .cell(asym)
                .cell(excess)
                .report("d(rho,rho)", &d11)
                .report("d(rho,sigma)", &d12)
                .report("d(sigma,rho)", &d21)
                .report("d(sigma,tau)", &d23)
                .report("d(rho,tau)", &d13))
        },
    );
    let mut out = Vec::new();
    for (j, g) in jobs.iter().zip(groups) {
        if j.1.is_none() || g.reports.is_empty() {
            out.push(g);
            continue;
        }
        let v: Vec<f64> = g
            .cells
            .iter()
            .map(|x| x.parse().unwrap_or(f64::NAN))
            .collect();
        let name = label(j);
        let tag = |r: Row, labels: &[&str]| {
            g.reports
                .iter()
                .filter(|(l, _)| labels.contains(&l.as_str()))
                .fold(r, |r, (l, rep)| r.report(l, rep))
        };
        out.push(tag(
            check("mk-identity", &name, v[0], tol - v[0]),
            &["d(rho,rho)"],
        ));
        out.push(tag(
            check("mk-symmetry", &name, v[1], 3.0 * tol - v[1]),
            &["d(rho,sigma)", "d(sigma,rho)"],
        ));
        out.push(tag(
            check("mk-triangle", &name, v[2], 3.0 * tol - v[2]),
            &["d(rho,sigma)", "d(sigma,tau)", "d(rho,tau)"],
        ));
    }
    out
}

fn chain_rows(c: &ScenarioConfig, valid: &[(String, LipSpace)]) -> Vec<Row> {
    let tol = c.solver.tol;
    let pairs: Vec<(usize, usize)> = (0..valid.len())
        .flat_map(|i| (i + 1..valid.len()).map(move |j| (i, j)))
        .collect();
    let label = |&(i, j): &(usize, usize)| format!("{}|{}", valid[i].0, valid[j].0);
    rows(
        &pairs,
        COLS.len(),
        |p| prefix("dilation-chain", &label(p)),
        |&(i, j)| {
            let c12 = best_equivalence_constant(&valid[i].1, &valid[j].1, &c.solver)?;
            let c21 = best_equivalence_constant(&valid[j].1, &valid[i].1, &c.solver)?;
            let product = c12.value * c21.value;
            Ok(check(
                "dilation-chain",
                &label(&(i, j)),
                product,
                product - (1.0 - 4.0 * tol),
            )
            .report("c12", &c12)
            .report("c21", &c21))
        },
    )
}

fn lipd_rows(c: &ScenarioConfig, valid: &[(String, LipSpace)]) -> Vec<Row> {
    let m = valid.len();
    let ordered: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let found: Vec<Result<MetricReport>> = ordered
        .par_iter()
        .map(|&(i, j)| lipschitz_distance(&valid[i].1, &valid[j].1, &c.solver).map(|r| r.0))
        .collect();
    let dist: BTreeMap<(usize, usize), &Result<MetricReport>> =
        ordered.iter().copied().zip(found.iter()).collect();
    let get = |i: usize, j: usize| -> Result<&MetricReport> {
        dist[&(i, j)]
            .as_ref()
            .map_err(|e| qmetric_core::Error::InvalidInput(e.to_string()))
    };
    let slack = |v: f64| 3.0 * LIPD_TOLERANCE * v.abs().max(1.0);
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let name = format!("{}|{}", valid[i].0, valid[j].0);
            let row = (|| {
                let (a, b) = (get(i, j)?, get(j, i)?);
                let gap = (a.value - b.value).abs();
                Ok(check(
                    "lipd-symmetry",
                    &name,
                    gap,
                    slack(a.value.max(b.value)) - gap,
                )
                .report("ab", a)
                .report("ba", b))
            })();
            out.push(row.unwrap_or_else(|e: qmetric_core::Error| {
                Row::failed(prefix("lipd-symmetry", &name), COLS.len(), e)
            }));
        }
    }
    for i in 0..m {
        for j in 0..m {
            for k in i + 1..m {
                if j == i || j == k {
                    continue;
                }
                let name = format!("{}|{}|{}", valid[i].0, valid[j].0, valid[k].0);
                let row = (|| {
                    let (ik, ij, jk) = (get(i, k)?, get(i, j)?, get(j, k)?);
                    let excess = ik.value - ij.value - jk.value;
                    Ok(
                        check("lipd-triangle", &name, excess, slack(ik.value) - excess)
                            .report("ac", ik)
                            .report("ab", ij)
                            .report("bc", jk),
                    )
                })();
                out.push(row.unwrap_or_else(|e: qmetric_core::Error| {
                    Row::failed(prefix("lipd-triangle", &name), COLS.len(), e)
                }));
            }
        }
    }
    out
}

fn length_rows(
    c: &ScenarioConfig,
    valid: &[(String, LipSpace)],
    supplied: &[Unitary<f64>],
    pairs: usize,
) -> Vec<Row> {
    let tol = c.solver.tol;
    let mut unitaries: Vec<Result<Unitary<f64>>> = supplied.iter().cloned().map(Ok).collect();
    for k in 0..2 * pairs as u64 {
        unitaries.push(random_unitary_in(
            &c.algebra,
            derive_seed(c.solver.seed, "axiom-unitary", k),
        ));
    }
    let count = unitaries.len();
    let jobs: Vec<(usize, usize)> = (0..valid.len())
        .flat_map(|i| (0..count).map(move |k| (i, k)))
        .collect();
    let label = |&(i, k): &(usize, usize)| format!("{}/{k}", valid[i].0);
    let groups = rows(
        &jobs,
        COLS.len(),
        |j| prefix("mkl", &label(j)),
        |&(i, k)| {
            let space = &valid[i].1;
            let err = |e: &qmetric_core::Error| qmetric_core::Error::InvalidInput(e.to_string());
            let u = unitaries[k].as_ref().map_err(err)?;
            // Consecutive pairs, wrapping around, so every unitary appears twice.
            let v = unitaries[(k + 1) % count].as_ref().map_err(err)?;
            let len = |w: &Unitary<f64>| mk_length(w, space, &c.solver);
            let (lu, lv, linv, luv) = (len(u)?, len(v)?, len(&u.inverse())?, len(&u.compose(v)?)?);
            let excess = luv.value - lu.value - lv.value;
            let asym = (lu.value - linv.value).abs();
            let scale = lu.value.max(lv.value).max(1.0);
            Ok(Row::new()
                .cell(asym)
                .cell(excess)
                .cell(scale)
                .report("l(U)", &lu)
                .report("l(V)", &lv)
                .report("l(U^-1)", &linv)
                .report("l(UV)", &luv))
        },
    );
    let mut out = Vec::new();
    for (i, (name, space)) in valid.iter().enumerate() {
        let row = mk_length(&Unitary::identity(c.algebra.total_dim()), space, &c.solver)
            .map(|r| check("mkl-identity", name, r.value, tol - r.value).report("l(1)", &r));
        out.push(row.unwrap_or_else(|e| Row::failed(prefix("mkl-identity", name), COLS.len(), e)));
        for (j, g) in jobs.iter().zip(&groups).filter(|(j, _)| j.0 == i) {
            if g.reports.is_empty() {
                out.push(g.clone());
                continue;
            }
            let v: Vec<f64> = g
                .cells
                .iter()
                .map(|x| x.parse().unwrap_or(f64::NAN))
                .collect();
            let name = label(j);
            let pick = |r: Row, labels: &[&str]| {
                g.reports
                    .iter()
                    .filter(|(l, _)| labels.contains(&l.as_str()))
                    .fold(r, |r, (l, rep)| r.report(l, rep))
            };
            let slack = 3.0 * tol * v[2];
            out.push(pick(
                check("mkl-inverse", &name, v[0], slack - v[0]),
                &["l(U)", "l(U^-1)"],
            ));
            out.push(pick(
                check("mkl-subadditive", &name, v[1], slack - v[1]),
                &["l(U)", "l(V)", "l(UV)"],
            ));
        }
    }
    out
}

/// Greedy nets in the metric `ℓ(α⁻¹β)` over sampled automorphisms whose
/// dilation is at most `net.bound`.
fn automorphism_net(c: &ScenarioConfig, net: &AutomorphismNet) -> (Vec<Row>, Vec<usize>) {
    let total = net.samples.iter().copied().max().unwrap_or(0);
    let attempt = || -> Result<(Vec<usize>, Vec<usize>)> {
        let space = c.space(&net.lipnorm)?;
        let drawn: Vec<Unitary<f64>> = (0..total as u64)
            .map(|k| random_unitary_in(&c.algebra, derive_seed(c.solver.seed, "aut-net", k)))
            .collect::<Result<_>>()?;
        let dil: Vec<f64> = drawn
            .par_iter()
            .map(|u| {
                dilation(&Morphism::Inner(u.clone()), &space, &space, &c.solver).map(|r| r.value)
            })
            .collect::<Result<_>>()?;
        let kept: Vec<usize> = (0..total).filter(|&k| dil[k] <= net.bound).collect();
        // Prefix of the draw → prefix of the kept list.
        let counts: Vec<usize> = net
            .samples
            .iter()
            .map(|&s| kept.iter().filter(|&&k| k < s).count())
            .collect();
        let sizes = greedy_net_sizes(kept.len(), &counts, |members, i| {
            let near: Vec<bool> = members
                .par_iter()
                .map(|&m| {
                    let rel = drawn[kept[m]].inverse().compose(&drawn[kept[i]])?;
                    Ok(mk_length(&rel, &space, &c.solver)?.value <= net.eps)
                })
                .collect::<Result<_>>()?;
            Ok(near.into_iter().any(|x| x))
        })?;
        Ok((counts, sizes))
    };
    match attempt() {
        Ok((counts, sizes)) => {
            let mut rows = Vec::new();
            for (k, (&s, &size)) in net.samples.iter().zip(&sizes).enumerate() {
                let grows = k == 0 || sizes[k - 1] <= size;
                let name = format!("samples={s},kept={}", counts[k]);
                rows.push(
                    Row::new()
                        .cell("aut-net")
                        .cell(name)
                        .num(size as f64)
                        .cell("")
                        .cell(grows),
                );
            }
            (rows, sizes)
        }
        Err(e) => (
            vec![Row::failed(prefix("aut-net", &net.lipnorm), COLS.len(), e)],
            Vec::new(),
        ),
    }
}

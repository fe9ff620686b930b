use qmetric_core::lipnorm::{quasi_leibniz_defect, AdmissibleF, LipNorm};
use qmetric_core::matrix::random::{derive_seed, random_hermitian_in};
use qmetric_core::matrix::{amplify, operator_norm, CMatrix, Hermitian};
use qmetric_core::metrics::{
    bridge_length, curved_propinquity_bound, hauslip, mk_diameter, BridgeSpec, LipSpace,
};
use qmetric_core::{Error, LipNormSpec, Result};
use serde_json::json;

use super::{rows, Outcome, Row};
use crate::config::ScenarioConfig;

/// Largest quasi-Leibniz defect still counted as satisfied.
pub const DEFECT_TOLERANCE: f64 = 1e-9;

fn dirac_parts(c: &ScenarioConfig, base: &str) -> (Hermitian<f64>, usize) {
    match &c.lipnorms[base] {
        LipNorm::DiracCommutator { d, amplification } => (d.clone(), *amplification),
        _ => unreachable!("validated as a DiracCommutator"),
    }
}

fn space(c: &ScenarioConfig, l: LipNormSpec) -> Result<LipSpace> {
    LipSpace::new(c.algebra.clone(), l)
}

pub fn perturbation(
    c: &ScenarioConfig,
    base: &str,
    direction: &Hermitian<f64>,
    ts: &[f64],
) -> Outcome {
    const COLS: [&str; 7] = [
        "reference",
        "t",
        "t_next",
        "omega_gap",
        "hauslip",
        "hauslip_hi",
        "bridge_length",
    ];
    let (d, amplification) = dirac_parts(c, base);
    let at = |t: f64| -> Result<LipSpace> {
        if t == 0.0 {
            return c.space(base);
        }
        space(
            c,
            LipNorm::Perturbed {
                d: d.clone(),
                omega: direction.scale(t),
                amplification,
            },
        )
    };
    let scale = direction.operator_norm();
    let phi = c.slice_state();
    let bridge = BridgeSpec::identity(c.algebra.total_dim());
    // Unordered pairs in canonical order, so a reversed grid gives the same rows.
    let mut jobs: Vec<(&str, f64, f64)> = ts.iter().map(|&t| ("base", 0.0, t)).collect();
    jobs.extend(
        ts.windows(2)
            .map(|w| ("consecutive", w[0].min(w[1]), w[0].max(w[1]))),
    );
    let out = rows(
        &jobs,
        COLS.len(),
        |(r, s, t)| {
            vec![
                r.to_string(),
                s.to_string(),
                t.to_string(),
                ((t - s) * scale).abs().to_string(),
            ]
        },
        |&(reference, s, t)| {
            let (ls, lt) = (at(s)?, at(t)?);
            let h = hauslip(&ls, &lt, Some(&phi), &c.solver)?;
            let b = bridge_length(&bridge, &ls, &lt, Some(&phi), Some(&phi), &c.solver)?;
            Ok(Row::new()
                .cell(reference)
                .num(s)
                .num(t)
                .num((t - s).abs() * scale)
                .value("hauslip", &h)
                .opt(h.hi)
                .value("bridge_length", &b))
        },
    );

    let parsed = |r: &Row, k: usize| r.cells[k].parse::<f64>().ok();
    let mut slope = 0.0f64;
    for r in out.iter().filter(|r| r.cells[0] == "consecutive") {
        if let (Some(gap), Some(h)) = (parsed(r, 3), parsed(r, 4)) {
            if gap > 0.0 {
                slope = slope.max(h / gap);
            }
        }
    }
    let mut along: Vec<(f64, f64, f64)> = out
        .iter()
        .filter(|r| r.cells[0] == "base")
        .filter_map(|r| Some((parsed(r, 3)?, parsed(r, 4)?, parsed(r, 5)?)))
        .collect();
    along.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Slack: each estimate may sit below its true value by up to its width.
    let monotone = along
        .windows(2)
        .all(|w| w[0].1 <= w[1].1 + (w[0].2 - w[0].1) + 3.0 * c.solver.tol);
    let mut outcome = Outcome::new(&COLS, out)
        .with("fitted_slope", slope)
        .with("monotone", monotone);
    if !monotone {
        outcome
            .failures
            .push("hauslip from the base is not monotone in the perturbation size".into());
    }
    outcome
}

/// `h⁻¹` for an invertible Hermitian `h`.
fn inverse(h: &Hermitian<f64>) -> Result<CMatrix<f64>> {
    h.as_matrix()
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("conformal factor".into()))
}

pub fn conformal(c: &ScenarioConfig, base: &str, hs: &[Hermitian<f64>], samples: usize) -> Outcome {
    const COLS: [&str; 7] = [
        "index",
        "m_const",
        "defect_max",
        "violations",
        "hauslip_base",
        "hauslip_prev",
        "lip_hinv_h",
    ];
    let (d, amplification) = dirac_parts(c, base);
    let seed = c.solver.seed;
    let phi = c.slice_state();
    let family = |h: &Hermitian<f64>| {
        space(
            c,
            LipNorm::Conformal {
                d: d.clone(),
                h: h.clone(),
                amplification,
            },
        )
    };
    let indices: Vec<usize> = (0..hs.len()).collect();
    let out = rows(
        &indices,
        COLS.len(),
        |k| vec![k.to_string()],
        |&k| {
            let h = &hs[k];
            let lh = family(h)?;
            let spectrum = h.eigenvalues();
            let (small, large) = spectrum.iter().fold((f64::INFINITY, 0.0f64), |(s, l), x| {
                (s.min(x.abs()), l.max(x.abs()))
            });
            let m = (large / small).powi(2);
            let f = AdmissibleF::ScaledLeibniz(m);
            let mut worst = f64::NEG_INFINITY;
            let mut violations = 0usize;
            for j in 0..samples as u64 {
                let a = random_hermitian_in(&c.algebra, derive_seed(seed, "conformal-a", j), 1.0)?;
                let b = random_hermitian_in(&c.algebra, derive_seed(seed, "conformal-b", j), 1.0)?;
                let defect = quasi_leibniz_defect(&lh.lipnorm, &f, &a, &b)?;
                worst = worst.max(defect);
                if defect > DEFECT_TOLERANCE {
                    violations += 1;
                }
            }
            let to_base = hauslip(&c.space(base)?, &lh, Some(&phi), &c.solver)?;
            let mut row = Row::new()
                .cell(k)
                .num(m)
                .num(worst)
                .cell(violations)
                .value("hauslip_base", &to_base);
            if k == 0 {
                row = row.cell("").cell("");
            } else {
                let prev = &hs[k - 1];
                let step = hauslip(&family(prev)?, &lh, Some(&phi), &c.solver)?;
                // ‖[D, π(h_prev⁻¹ h)]‖ on the ambient representation.
                let x = amplify(&(inverse(prev)? * h.as_matrix()), amplification);
                let lip = operator_norm(&(d.as_matrix() * &x - &x * d.as_matrix()))?;
                row = row.value("hauslip_prev", &step).num(lip);
            }
            Ok(row)
        },
    );
    let violations: usize = out
        .iter()
        .filter_map(|r| r.cells[3].parse::<usize>().ok())
        .sum();
    let mut outcome = Outcome::new(&COLS, out)
        .with("samples", samples)
        .with("violations", violations);
    if violations > 0 {
        outcome.failures.push(format!(
            "{violations} quasi-Leibniz violations above {DEFECT_TOLERANCE:e}"
        ));
    }
    outcome
}

fn identity(m: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn curved(c: &ScenarioConfig, generators: &[Hermitian<f64>], hs: &[Vec<Vec<f64>>]) -> Outcome {
    const COLS: [&str; 5] = [
        "index",
        "bound",
        "bridge_length",
        "propinquity_upper",
        "diam",
    ];
    let phi = c.slice_state();
    let bridge = BridgeSpec::identity(c.algebra.total_dim());
    let family = |h: &[Vec<f64>]| space(c, LipNorm::curved(generators.to_vec(), h.to_vec())?);
    let diam = family(&identity(generators.len())).and_then(|base| mk_diameter(&base, &c.solver));
    let indices: Vec<usize> = (0..hs.len().saturating_sub(1)).collect();
    let out = rows(
        &indices,
        COLS.len(),
        |k| vec![k.to_string()],
        |&k| {
            let diam = diam
                .as_ref()
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            let bound = curved_propinquity_bound(&hs[k], &hs[k + 1], diam.value)?;
            let len = bridge_length(
                &bridge,
                &family(&hs[k])?,
                &family(&hs[k + 1])?,
                Some(&phi),
                Some(&phi),
                &c.solver,
            )?;
            Ok(Row::new()
                .cell(k)
                .num(bound)
                .value("bridge_length", &len)
                .num(bound.min(len.value))
                .value("diam", diam))
        },
    );
    let column = |k: usize| -> Vec<f64> {
        out.iter()
            .filter_map(|r| r.cells[k].parse::<f64>().ok())
            .collect()
    };
    let (bounds, lengths) = (column(1), column(2));
    let shrinks = |v: &[f64]| v.len() < 2 || v[v.len() - 1] <= v[0];
    let converging = shrinks(&bounds) && shrinks(&lengths);
    let mut outcome = Outcome::new(&COLS, out).with("converging", converging);
    if let Ok(d) = &diam {
        outcome = outcome.with(
            "diameter",
            json!({"value": d.value, "kind": d.kind.as_str()}),
        );
    }
    if !converging {
        outcome
            .failures
            .push("bound or bridge length grows along the coefficient grid".into());
    }
    outcome
}

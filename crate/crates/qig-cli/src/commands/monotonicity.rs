//! `qig monotonicity`: sweep seeded states, tangents, and channels, and
//! check that information contracts while generalized variance expands.
//! The channel kinds rotate through Stinespring dilations, depolarizing
//! mixtures, partial traces, unitaries, and an identity control whose
//! margin should sit at zero.

use qig_core::channel::{probe_fisher_monotonicity, probe_variance_monotonicity, Channel};
use qig_core::monotone::MonotoneFunction;
use qig_core::state::{case_seed, random_density, random_hermitian, random_tangent, random_unitary, seeded_rng};
use qig_core::tol;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::MonotonicityConfig;
use crate::output::Outcome;

use super::{fail, obj};

pub fn run(cfg: &MonotonicityConfig) -> Result<Outcome, String> {
    if cfg.cases == 0 {
        return Err("`cases` must be at least 1".into());
    }
    if !(cfg.floor > 0.0 && cfg.floor < 0.5) {
        return Err(format!("`floor` must lie in (0, 0.5), got {}", cfg.floor));
    }
    let catalog = MonotoneFunction::catalog();

    let rows: Vec<Map<String, Value>> = (0..cfg.cases)
        .into_par_iter()
        .map(|i| one_case(cfg, &catalog, i))
        .collect::<Result<_, String>>()?;

    let mut min_info = f64::INFINITY;
    let mut min_var = f64::INFINITY;
    let mut violations = 0usize;
    let mut refloored = 0usize;
    let mut identity_worst = 0.0f64;
    for row in &rows {
        let info = row["information_margin"].as_f64().expect("margin is numeric");
        let var = row["variance_margin"].as_f64().expect("margin is numeric");
        min_info = min_info.min(info);
        min_var = min_var.min(var);
        if info < -tol::MONOTONICITY_MARGIN || var < -tol::MONOTONICITY_MARGIN {
            violations += 1;
        }
        if row["refloored"].as_bool() == Some(true) {
            refloored += 1;
        }
        if row["channel"].as_str() == Some("identity") {
            identity_worst = identity_worst.max(info.abs()).max(var.abs());
        }
    }

    let summary = obj(json!({
        "cases": cfg.cases,
        "min_information_margin": min_info,
        "min_variance_margin": min_var,
        "violations": violations,
        "refloored": refloored,
        "identity_worst_margin": identity_worst,
        "tolerance": tol::MONOTONICITY_MARGIN,
    }));
    Ok(Outcome { rows, summary, verdict_failures: violations })
}

fn one_case(
    cfg: &MonotonicityConfig,
    catalog: &[MonotoneFunction],
    i: usize,
) -> Result<Map<String, Value>, String> {
    let mut rng = seeded_rng(case_seed(cfg.seed, i as u64));
    let n = 2 + i % 3;
    let (label, ch) = match i % 5 {
        0 => ("stinespring", Channel::random(case_seed(cfg.seed.wrapping_add(1), i as u64), n, n, 2).map_err(fail)?),
        1 => {
            let eps = 0.05 + 0.9 * (i % 19) as f64 / 19.0;
            ("mixing", Channel::mixing(n, eps).map_err(fail)?)
        }
        2 => {
            let drop = 2 + (i / 5) % 2;
            ("partial_trace", Channel::partial_trace(2, drop).map_err(fail)?)
        }
        3 => {
            let u = random_unitary(n, &mut rng).map_err(fail)?;
            ("unitary", Channel::unitary(u).map_err(fail)?)
        }
        _ => ("identity", Channel::identity(n)),
    };
    let f = catalog[i % catalog.len()];

    let d = random_density(ch.in_dim(), cfg.floor, &mut rng).map_err(fail)?;
    let a = random_tangent(ch.in_dim(), &mut rng);
    let observable = random_hermitian(ch.out_dim(), &mut rng);

    let fisher = probe_fisher_monotonicity(&d, &a, f, &ch).map_err(fail)?;
    let variance = probe_variance_monotonicity(&d, &observable, f, &ch).map_err(fail)?;

    Ok(obj(json!({
        "case": i,
        "channel": label,
        "f": f.to_string(),
        "in_dim": ch.in_dim(),
        "out_dim": ch.out_dim(),
        "information_margin": fisher.margin,
        "variance_margin": variance.margin,
        "refloored": fisher.refloored || variance.refloored,
        "tolerance": tol::MONOTONICITY_MARGIN,
    })))
}

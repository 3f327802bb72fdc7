//! `qig fisher`: evaluate information and generalized variance for a
//! family of catalog functions, either at explicit state/tangent
//! matrices or over seeded random cases. When the family contains both
//! extreme functions, the sandwich ordering of every other value between
//! them is checked as a verdict.

use qig_core::state::HermitianMatrix;
use qig_core::metric::MetricContext;
use qig_core::monotone::MonotoneFunction;
use qig_core::state::{case_seed, random_density, random_tangent, seeded_rng, DensityMatrix, TangentVector};
use serde_json::json;

use crate::config::FisherConfig;
use crate::output::Outcome;

use super::{fail, obj};

const ORDERING_TOL: f64 = 1e-9;

pub fn run(cfg: &FisherConfig) -> Result<Outcome, String> {
    let functions: Vec<MonotoneFunction> = cfg
        .f_specs
        .iter()
        .map(|s| MonotoneFunction::parse(s).map_err(fail))
        .collect::<Result<_, _>>()?;
    if functions.is_empty() {
        return Err("at least one function spec is required".into());
    }

    let cases = build_cases(cfg)?;
    let min_slot = functions.iter().position(|f| matches!(f, MonotoneFunction::Min));
    let max_slot = functions.iter().position(|f| matches!(f, MonotoneFunction::Max));
    let ordering_checked = min_slot.is_some() && max_slot.is_some();

    let mut rows = Vec::new();
    let mut ordering_violations = 0usize;
    for (case, (d, a)) in cases.iter().enumerate() {
        let observable = HermitianMatrix::new(a.matrix().clone()).map_err(fail)?;
        let mut values = Vec::with_capacity(functions.len());
        for &f in &functions {
            let ctx = MetricContext::new(d.clone(), f).map_err(fail)?;
            let info = ctx.fisher_info(a, a).map_err(fail)?;
            let var = ctx.variance(&observable, &observable).map_err(fail)?;
            values.push(info);
            rows.push(obj(json!({
                "case": case,
                "f": f.to_string(),
                "fisher_info": info,
                "variance": var,
            })));
        }
        if let (Some(lo), Some(hi)) = (min_slot, max_slot) {
            let (v_lo, v_hi) = (values[lo], values[hi]);
            for &v in &values {
                let below = v < v_lo - ORDERING_TOL * (1.0 + v_lo.abs());
                let above = v > v_hi + ORDERING_TOL * (1.0 + v_hi.abs());
                if below || above {
                    ordering_violations += 1;
                }
            }
        }
    }

    let summary = obj(json!({
        "cases": cases.len(),
        "functions": functions.len(),
        "ordering_checked": ordering_checked,
        "ordering_violations": ordering_violations,
        "ordering_tolerance": ORDERING_TOL,
    }));
    Ok(Outcome { rows, summary, verdict_failures: ordering_violations })
}

fn build_cases(cfg: &FisherConfig) -> Result<Vec<(DensityMatrix, TangentVector)>, String> {
    match (&cfg.state, &cfg.tangent) {
        (Some(s), Some(t)) => {
            let d = s.to_density()?;
            let a = t.to_tangent()?;
            if a.matrix().rows() != d.dim() {
                return Err(format!(
                    "state is {0}x{0} but tangent is {1}x{1}",
                    d.dim(),
                    a.matrix().rows()
                ));
            }
            Ok(vec![(d, a)])
        }
        (None, None) => {
            let mut cases = Vec::with_capacity(cfg.cases);
            for i in 0..cfg.cases {
                let mut rng = seeded_rng(case_seed(cfg.seed, i as u64));
                let d = random_density(cfg.dim, 0.05, &mut rng).map_err(fail)?;
                let a = random_tangent(cfg.dim, &mut rng);
                cases.push((d, a));
            }
            Ok(cases)
        }
        _ => Err("explicit mode needs both `state` and `tangent` (or neither)".into()),
    }
}

//! `qig crbound`: sweep seeded statistical models and check the matrix
//! variance bound for a calibrated estimator bank, with the block-matrix
//! positivity oracle run alongside as an independent route. One-parameter
//! models additionally get the scalar slack.

use qig_core::estimation::{
    block_matrix_oracle, fisher_matrix, matrix_cr_check, random_model, scalar_cr_check,
    EstimatorBank,
};
use qig_core::matrix::RealMatrix;
use qig_core::monotone::MonotoneFunction;
use qig_core::state::case_seed;
use qig_core::tol;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::CrboundConfig;
use crate::output::Outcome;

use super::{fail, obj};

pub fn run(cfg: &CrboundConfig) -> Result<Outcome, String> {
    let f = MonotoneFunction::parse(&cfg.f_spec).map_err(fail)?;
    if cfg.models == 0 {
        return Err("`models` must be at least 1".into());
    }
    if cfg.param_dim == 0 || cfg.param_dim > cfg.dim * cfg.dim - 1 {
        return Err(format!(
            "`param_dim` must lie in 1..={} for dimension {}",
            cfg.dim * cfg.dim - 1,
            cfg.dim
        ));
    }
    let noisy = match cfg.bank.as_str() {
        "saturating" => false,
        "noisy" => true,
        other => return Err(format!("unknown bank `{other}` (expected saturating or noisy)")),
    };

    let computed: Vec<Map<String, Value>> = (0..cfg.models)
        .into_par_iter()
        .map(|i| one_model(cfg, f, noisy, i))
        .collect::<Result<_, String>>()?;

    let mut violations = 0usize;
    let mut worst_gap = f64::INFINITY;
    let mut worst_block = f64::INFINITY;
    for row in &computed {
        let gap = row["gap_min"].as_f64().expect("gap_min is numeric");
        let block = row["block_min"].as_f64().expect("block_min is numeric");
        let psd = row["block_psd"].as_bool().expect("block_psd is boolean");
        worst_gap = worst_gap.min(gap);
        worst_block = worst_block.min(block);
        if gap < -tol::CR_SLACK || !psd {
            violations += 1;
        }
    }

    let summary = obj(json!({
        "models": cfg.models,
        "bank": cfg.bank,
        "f": f.to_string(),
        "worst_gap_min": worst_gap,
        "worst_block_min": worst_block,
        "violations": violations,
        "tolerance": tol::CR_SLACK,
    }));
    Ok(Outcome { rows: computed, summary, verdict_failures: violations })
}

fn one_model(
    cfg: &CrboundConfig,
    f: MonotoneFunction,
    noisy: bool,
    i: usize,
) -> Result<Map<String, Value>, String> {
    let analytic = i % 2 == 0;
    let model =
        random_model(case_seed(cfg.seed, i as u64), cfg.dim, cfg.param_dim, analytic).map_err(fail)?;
    let bank = if noisy {
        EstimatorBank::saturating_with_noise(
            &model,
            f,
            case_seed(cfg.seed.wrapping_add(1), i as u64),
            cfg.noise_amplitude,
        )
        .map_err(fail)?
    } else {
        EstimatorBank::saturating(&model, f).map_err(fail)?
    };

    let report = matrix_cr_check(&model, &bank, f).map_err(fail)?;
    let block = block_matrix_oracle(&model, &bank, f).map_err(fail)?;
    let information = fisher_matrix(&model, f).map_err(fail)?;
    let spectrum = report.covariance.sub(&report.bound).symmetric_eigenvalues().map_err(fail)?;

    let mut row = Map::new();
    row.insert("model".into(), json!(i));
    row.insert("analytic_tangents".into(), json!(analytic));
    flatten(&mut row, "cov", &report.covariance);
    flatten(&mut row, "fisher", &information);
    flatten(&mut row, "bound", &report.bound);
    for (k, eig) in spectrum.iter().enumerate() {
        row.insert(format!("gap_eig_{k}"), json!(eig));
    }
    row.insert("gap_min".into(), json!(report.gap_min_eigenvalue));
    row.insert("block_min".into(), json!(block.min_eigenvalue));
    row.insert("block_psd".into(), json!(block.psd));
    if cfg.param_dim == 1 {
        let scalar = scalar_cr_check(&model, &bank.observables()[0], f).map_err(fail)?;
        row.insert("slack".into(), json!(scalar.slack));
    }
    row.insert("tolerance".into(), json!(tol::CR_SLACK));
    Ok(row)
}

/// Writes an m x m matrix as `{prefix}_i_j` columns; the upper triangle
/// suffices since both covariance and bound are symmetric.
fn flatten(row: &mut Map<String, Value>, prefix: &str, m: &RealMatrix) {
    for i in 0..m.rows() {
        for j in i..m.cols() {
            row.insert(format!("{prefix}_{i}_{j}"), json!(m[(i, j)]));
        }
    }
}

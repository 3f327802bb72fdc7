//! One module per subcommand. Each exposes
//! `run(&Config) -> Result<Outcome, String>`: rows plus summary on
//! success, an operational error message otherwise. Verdict failures
//! (a property that did not hold) are counted in the outcome, not
//! returned as errors, so the evidence still reaches the output file.

pub mod crbound;
pub mod curvature;
pub mod divergence;
pub mod fisher;
pub mod monotonicity;

use serde_json::{Map, Value};

/// Unwraps a `json!({...})` literal into the map the output layer wants.
/// Key order in the literal is preserved in the rendered document.
pub(crate) fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        other => panic!("row literals must be JSON objects, got {other}"),
    }
}

pub(crate) fn fail(e: impl core::fmt::Display) -> String {
    e.to_string()
}

/// `count` points spanning [lo, hi] uniformly in log scale.
pub(crate) fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (llo, lhi) = (lo.log10(), hi.log10());
    (0..count)
        .map(|k| 10f64.powf(llo + (lhi - llo) * k as f64 / (count - 1) as f64))
        .collect()
}

/// `count` points spanning [lo, hi] uniformly.
pub(crate) fn lin_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect()
}

//! Configuration plumbing: typed per-command configs assembled from
//! defaults, an optional JSON file, and inline `--set` overrides, merged
//! in that order. The merged value is what the output echoes, so a run is
//! reproducible from its own output file.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use qig_core::matrix::ComplexMatrix;
use qig_core::state::{DensityMatrix, HermitianMatrix, TangentVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A complex matrix in transport form: row-major `[re, im]` pairs with an
/// explicit dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn to_complex(&self) -> Result<ComplexMatrix, String> {
        if self.entries.len() != self.dim * self.dim {
            return Err(format!(
                "matrix with dim {} needs {} entries, got {}",
                self.dim,
                self.dim * self.dim,
                self.entries.len()
            ));
        }
        Ok(ComplexMatrix::from_fn(self.dim, self.dim, |i, j| {
            let [re, im] = self.entries[i * self.dim + j];
            Complex64::new(re, im)
        }))
    }

    pub fn to_density(&self) -> Result<DensityMatrix, String> {
        DensityMatrix::new_default_floor(self.to_complex()?).map_err(|e| e.to_string())
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix, String> {
        HermitianMatrix::new(self.to_complex()?).map_err(|e| e.to_string())
    }

    pub fn to_tangent(&self) -> Result<TangentVector, String> {
        TangentVector::from_hermitian_centered(&self.to_complex()?).map_err(|e| e.to_string())
    }
}

/// Recursive merge: objects merge key by key, everything else replaces.
fn deep_merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(base_map), Value::Object(patch_map)) => {
            for (key, patch_value) in patch_map {
                match base_map.get_mut(&key) {
                    Some(slot) => deep_merge(slot, patch_value),
                    None => {
                        base_map.insert(key, patch_value);
                    }
                }
            }
        }
        (slot, patch_value) => *slot = patch_value,
    }
}

/// Builds the effective config for a run: defaults, then the config file,
/// then each `--set` patch, then the `--seed` flag. Unknown keys anywhere
/// are an error, caught when the merged value is deserialized.
pub fn resolve<T>(
    file: Option<&Path>,
    sets: &[String],
    seed_override: Option<u64>,
) -> Result<(T, Value), String>
where
    T: Default + Serialize + DeserializeOwned,
{
    let mut merged = serde_json::to_value(T::default())
        .map_err(|e| format!("internal default serialization failed: {e}"))?;
    if let Some(path) = file {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let patch: Value = serde_json::from_str(&text)
            .map_err(|e| format!("config {} is not valid JSON: {e}", path.display()))?;
        deep_merge(&mut merged, patch);
    }
    for set in sets {
        let patch: Value =
            serde_json::from_str(set).map_err(|e| format!("--set {set:?} is not valid JSON: {e}"))?;
        deep_merge(&mut merged, patch);
    }
    if let Some(seed) = seed_override {
        deep_merge(&mut merged, serde_json::json!({ "seed": seed }));
    }
    let typed: T =
        serde_json::from_value(merged.clone()).map_err(|e| format!("invalid config: {e}"))?;
    Ok((typed, merged))
}

pub fn default_function_specs() -> Vec<String> {
    ["min", "max", "beta:0.5", "beta:0.3", "beta:-0.3", "km"]
        .into_iter()
        .map(str::to_owned)
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FisherConfig {
    /// Function selection strings, each `min | max | beta:<b> | km`.
    pub f_specs: Vec<String>,
    /// Matrix dimension for seeded cases.
    pub dim: usize,
    /// Number of seeded (state, tangent) cases when none are given inline.
    pub cases: usize,
    pub seed: u64,
    /// Explicit state; must be paired with `tangent`.
    pub state: Option<MatrixJson>,
    /// Explicit tangent direction (any Hermitian matrix; the trace part is
    /// projected out).
    pub tangent: Option<MatrixJson>,
}

impl Default for FisherConfig {
    fn default() -> Self {
        Self {
            f_specs: default_function_specs(),
            dim: 2,
            cases: 5,
            seed: 7,
            state: None,
            tangent: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CrboundConfig {
    pub f_spec: String,
    pub dim: usize,
    pub param_dim: usize,
    /// Number of seeded models swept.
    pub models: usize,
    /// `saturating` for the bound-achieving bank, `noisy` for a perturbed
    /// one that keeps the gap strictly inside the cone.
    pub bank: String,
    /// Perturbation size for the noisy bank.
    pub noise_amplitude: f64,
    pub seed: u64,
}

impl Default for CrboundConfig {
    fn default() -> Self {
        Self {
            f_spec: "min".into(),
            dim: 3,
            param_dim: 2,
            models: 20,
            bank: "saturating".into(),
            noise_amplitude: 0.1,
            seed: 11,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MonotonicityConfig {
    /// Number of (state, tangent, channel, function) cases.
    pub cases: usize,
    /// Positivity floor for the seeded upstream states.
    pub floor: f64,
    pub seed: u64,
}

impl Default for MonotonicityConfig {
    fn default() -> Self {
        Self { cases: 1000, floor: 0.02, seed: 17 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CurvatureConfig {
    /// `scan` walks a thermal curve; `points` samples seeded states.
    pub mode: String,
    pub f_spec: String,
    /// Hamiltonian for scan mode; the default is the diagonal (1, -1) qubit.
    pub hamiltonian: Option<MatrixJson>,
    pub beta_max: f64,
    pub beta_points: usize,
    /// Requested stencil step; shrunk per point near the boundary.
    pub fd_step: f64,
    /// Number of seeded states in points mode.
    pub points: usize,
    /// Matrix dimension in points mode (2 through 4).
    pub dim: usize,
    /// Eigenvalue floor of the seeded states in points mode.
    pub floor: f64,
    pub seed: u64,
}

impl Default for CurvatureConfig {
    fn default() -> Self {
        Self {
            mode: "scan".into(),
            f_spec: "km".into(),
            hamiltonian: None,
            beta_max: 3.0,
            beta_points: 31,
            fd_step: 1e-2,
            points: 20,
            dim: 2,
            floor: 0.1,
            seed: 23,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DivergenceConfig {
    pub alphas: Vec<f64>,
    /// Matrix dimension for seeded pairs.
    pub dim: usize,
    /// Number of seeded (D1, D2) pairs when none are given inline.
    pub pairs: usize,
    /// Points on the log grid where the kernel bridge is compared with the
    /// function it should recover.
    pub bridge_points: usize,
    pub d1: Option<MatrixJson>,
    pub d2: Option<MatrixJson>,
    pub seed: u64,
}

impl Default for DivergenceConfig {
    fn default() -> Self {
        Self {
            alphas: vec![-0.6, -0.2, 0.0, 0.4, 0.8],
            dim: 3,
            pairs: 10,
            bridge_points: 25,
            d1: None,
            d2: None,
            seed: 29,
        }
    }
}

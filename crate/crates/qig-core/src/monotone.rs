//! The catalog of operator monotone functions that parametrize monotone
//! metrics, plus their two-variable mean multipliers.
//!
//! Every member satisfies f(1) = 1 and the symmetry f(t) = t f(1/t), and
//! sits inside the envelope 2t/(1+t) <= f(t) <= (1+t)/2. The catalog is
//! closed: these are the only functions the library evaluates, which is what
//! lets the rest of the crate treat "for every f" as a finite loop.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // float intrinsics under no_std
use num_traits::Float as _;

use crate::matrix::hermitian_eigen;
use crate::state::{from_spectrum, random_hermitian, seeded_rng};
use crate::{tol, Error, Result};

/// Below this distance from t = 1 the closed forms with removable
/// singularities switch to a second-order series. Cancellation in
/// (t - 1) / log t style expressions starts eating digits well before the
/// series error (of order seam^3) becomes visible.
const SERIES_SEAM: f64 = 1e-6;

/// A named operator monotone function normalized to f(1) = 1.
///
/// `Min` is the largest function (smallest metric), `Max` the smallest
/// function (largest metric), `Beta(b)` the interpolating family for
/// b in (-1, 0) or (0, 1), and `KuboMori` its limit at b -> 0 or 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MonotoneFunction {
    /// f(t) = (1 + t) / 2. The symmetric-derivative (SLD) metric.
    Min,
    /// f(t) = 2t / (1 + t). The largest monotone metric.
    Max,
    /// f(t) = b(1-b)(t-1)^2 / ((t^b - 1)(t^{1-b} - 1)), symmetric under
    /// b <-> 1-b.
    Beta(f64),
    /// f(t) = (t - 1) / log t, the b -> 0 limit of the beta family.
    KuboMori,
}

impl MonotoneFunction {
    /// Validated constructor for the beta family. The boundary values 0 and
    /// 1 are the Kubo-Mori limit and are routed there; anything else outside
    /// (-1, 1) is rejected.
    pub fn beta(b: f64) -> Result<Self> {
        if b == 0.0 || b == 1.0 {
            return Ok(Self::KuboMori);
        }
        if !(b > -1.0 && b < 1.0) || !b.is_finite() {
            return Err(Error::ParameterOutOfRange { name: "beta", value: b });
        }
        Ok(Self::Beta(b))
    }

    /// Parses the selection grammar: `min` | `max` | `beta:<float>` | `km`.
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        match s {
            "min" => Ok(Self::Min),
            "max" => Ok(Self::Max),
            "km" => Ok(Self::KuboMori),
            _ => match s.strip_prefix("beta:") {
                Some(rest) => {
                    let b: f64 = rest
                        .trim()
                        .parse()
                        .map_err(|_| Error::UnknownFunctionSpec { spec: s.to_string() })?;
                    Self::beta(b)
                }
                None => Err(Error::UnknownFunctionSpec { spec: s.to_string() }),
            },
        }
    }

    /// The members exercised by sweeps and acceptance runs: the two
    /// extremes, three beta values (one of them negative), and Kubo-Mori.
    pub fn catalog() -> Vec<Self> {
        vec![
            Self::Min,
            Self::Max,
            Self::Beta(0.5),
            Self::Beta(0.3),
            Self::Beta(-0.3),
            Self::KuboMori,
        ]
    }

    /// Evaluates f(t) for t > 0.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonPositiveArgument { t });
        }
        match *self {
            Self::Min => Ok(0.5 * (1.0 + t)),
            Self::Max => Ok(2.0 * t / (1.0 + t)),
            Self::KuboMori => {
                let s = t - 1.0;
                if s.abs() < SERIES_SEAM {
                    Ok(1.0 + 0.5 * s - s * s / 12.0)
                } else {
                    Ok(s / t.ln())
                }
            }
            Self::Beta(b) => {
                if b == 0.0 || b == 1.0 || !(b > -1.0 && b < 1.0) {
                    return Err(Error::ParameterOutOfRange { name: "beta", value: b });
                }
                let s = t - 1.0;
                if s.abs() < SERIES_SEAM {
                    Ok(1.0 + 0.5 * s + ((b - b * b - 1.0) / 12.0) * s * s)
                } else {
                    // t^b - 1 via exp_m1 keeps precision when b log t is small.
                    let lt = t.ln();
                    let p = (b * lt).exp_m1();
                    let q = ((1.0 - b) * lt).exp_m1();
                    Ok(b * (1.0 - b) * s * s / (p * q))
                }
            }
        }
    }

    /// The limit f(0+). Finite for the whole catalog; 1/2 only for `Min`.
    pub fn f_at_zero(&self) -> f64 {
        match *self {
            Self::Min => 0.5,
            Self::Max => 0.0,
            Self::KuboMori => 0.0,
            Self::Beta(b) => {
                if b > 0.0 && b < 1.0 {
                    b * (1.0 - b)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn multiplier(&self) -> MeanMultiplier {
        MeanMultiplier { source: *self }
    }
}

impl core::fmt::Display for MonotoneFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match *self {
            Self::Min => write!(f, "min"),
            Self::Max => write!(f, "max"),
            Self::KuboMori => write!(f, "km"),
            Self::Beta(b) => write!(f, "beta:{b}"),
        }
    }
}

/// The two-variable mean m(x, y) = y f(x/y) induced by a catalog function.
///
/// Evaluation is canonicalized as m = hi * f(lo/hi), which makes the
/// symmetry m(x, y) = m(y, x) exact in floating point, not just up to
/// rounding of two different expressions.
#[derive(Clone, Copy, Debug)]
pub struct MeanMultiplier {
    source: MonotoneFunction,
}

impl MeanMultiplier {
    pub fn new(source: MonotoneFunction) -> Self {
        Self { source }
    }

    pub fn source(&self) -> MonotoneFunction {
        self.source
    }

    pub fn evaluate(&self, x: f64, y: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::NonPositiveArgument { t: x });
        }
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::NonPositiveArgument { t: y });
        }
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        Ok(hi * self.source.eval(lo / hi)?)
    }
}

/// Outcome of a randomized operator-monotonicity check.
#[derive(Clone, Copy, Debug)]
pub struct MatrixMonotoneReport {
    pub trials: usize,
    pub violations: usize,
    /// Most negative eigenvalue of f(B) - f(A) seen across all trials.
    pub worst_margin: f64,
}

/// Sanity-checks operator monotonicity numerically: draws `trials` seeded
/// pairs 0 < A <= B of the given dimension and verifies the smallest
/// eigenvalue of f(B) - f(A) stays above the negative tolerance. This is a
/// necessary-condition probe, not a proof.
pub fn check_matrix_monotone(
    f: MonotoneFunction,
    seed: u64,
    trials: usize,
    dim: usize,
) -> Result<MatrixMonotoneReport> {
    if !(2..=4).contains(&dim) {
        return Err(Error::UnsupportedDimension { dim, min: 2, max: 4 });
    }
    if trials == 0 {
        return Err(Error::Empty { what: "trials" });
    }
    let mut rng = seeded_rng(seed);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        // A = G^2 + 0.05 is positive definite; B = A + H^2 dominates it.
        let g = random_hermitian(dim, &mut rng);
        let a = {
            let gg = g.matrix().mul(g.matrix());
            let mut m = gg.clone();
            for i in 0..dim {
                m[(i, i)] += 0.05;
            }
            m
        };
        let h = random_hermitian(dim, &mut rng);
        let b = a.add(&h.matrix().mul(h.matrix()));

        let fa = apply_scalar(&a, f)?;
        let fb = apply_scalar(&b, f)?;
        let (gap_eigs, _) = hermitian_eigen(&fb.sub(&fa))?;
        let margin = gap_eigs[0];
        worst = worst.min(margin);
        if margin < -tol::MATRIX_MONOTONE {
            violations += 1;
        }
    }
    Ok(MatrixMonotoneReport { trials, violations, worst_margin: worst })
}

fn apply_scalar(
    m: &crate::matrix::ComplexMatrix,
    f: MonotoneFunction,
) -> Result<crate::matrix::ComplexMatrix> {
    let (vals, vecs) = hermitian_eigen(m)?;
    let mut mapped = Vec::with_capacity(vals.len());
    for v in vals {
        mapped.push(f.eval(v)?);
    }
    Ok(from_spectrum(&mapped, &vecs))
}

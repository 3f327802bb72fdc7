//! Adaptive composite Simpson quadrature, generic over scalar and matrix
//! integrands.
//!
//! The integral representations of the Kubo-Mori quantities are kept around
//! as oracles against the spectral fast paths, so the quadrature must reach
//! well past the 1e-8 comparison tolerance on smooth integrands. Composite
//! Simpson with panel doubling and the classic (S_2n - S_n)/15 error gauge
//! does that with no tuning knobs beyond the panel budget.

use crate::matrix::ComplexMatrix;
use crate::{Error, Result};

/// Values Simpson sums can accumulate: closed under scaling and scaled
/// addition, with a norm for the convergence test.
pub trait QuadratureSample: Clone {
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, other: &Self, w: f64);
    fn scale_by(&mut self, w: f64);
    fn distance(&self, other: &Self) -> f64;
    fn magnitude(&self) -> f64;
}

impl QuadratureSample for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        *self += other * w;
    }
    fn scale_by(&mut self, w: f64) {
        *self *= w;
    }
    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadratureSample for ComplexMatrix {
    fn zero_like(&self) -> Self {
        ComplexMatrix::zeros(self.rows(), self.cols())
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        let scaled = other.scale(w);
        *self = self.add(&scaled);
    }
    fn scale_by(&mut self, w: f64) {
        *self = self.scale(w);
    }
    fn distance(&self, other: &Self) -> f64 {
        self.sub(other).frobenius_norm()
    }
    fn magnitude(&self) -> f64 {
        self.frobenius_norm()
    }
}

/// Budget and tolerances for the doubling loop.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    /// Simpson panels in the first pass; one panel spans two subintervals,
    /// so 100 panels means 201 nodes.
    pub initial_panels: usize,
    /// How many times the panel count may double before giving up.
    pub max_doublings: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { initial_panels: 100, max_doublings: 8, abs_tol: 1e-13, rel_tol: 1e-9 }
    }
}

/// A converged quadrature value with its error gauge.
#[derive(Clone, Debug)]
pub struct QuadratureOutcome<T> {
    pub value: T,
    /// |S(2n) - S(n)| / 15 at the accepted refinement.
    pub error_estimate: f64,
    /// Panel count of the accepted pass.
    pub panels: usize,
}

fn composite_pass<T, F>(f: &mut F, a: f64, b: f64, panels: usize) -> Result<T>
where
    T: QuadratureSample,
    F: FnMut(f64) -> Result<T>,
{
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let mut acc = f(a)?;
    acc.add_scaled(&f(b)?, 1.0);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        // Endpoint-anchored node keeps x exactly at b when k = n.
        let x = a + k as f64 * h;
        acc.add_scaled(&f(x)?, w);
    }
    acc.scale_by(h / 3.0);
    Ok(acc)
}

/// Integrates `f` over [a, b], doubling the panel count until the Simpson
/// error gauge drops under `abs_tol + rel_tol * |value|`.
pub fn adaptive_simpson<T, F>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureOutcome<T>>
where
    T: QuadratureSample,
    F: FnMut(f64) -> Result<T>,
{
    if !(b > a) {
        return Err(Error::GridNotAscending);
    }
    let mut panels = spec.initial_panels.max(1);
    let mut coarse = composite_pass(&mut f, a, b, panels)?;
    let mut estimate = f64::INFINITY;
    for _ in 0..spec.max_doublings {
        panels *= 2;
        let fine = composite_pass(&mut f, a, b, panels)?;
        estimate = fine.distance(&coarse) / 15.0;
        if estimate <= spec.abs_tol + spec.rel_tol * fine.magnitude() {
            return Ok(QuadratureOutcome { value: fine, error_estimate: estimate, panels });
        }
        coarse = fine;
    }
    Err(Error::QuadratureDidNotConverge { estimate })
}

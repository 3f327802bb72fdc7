//! The metric engine: the superoperator J and its inverse in spectral form,
//! the monotone Fisher information and generalized variance they induce, the
//! symmetric logarithmic derivative, quadrature oracles for the Kubo-Mori
//! integral representations, and the qubit radial/tangential split.
//!
//! Everything routes through one fact: in the eigenbasis of the state D,
//! J acts entrywise as multiplication by the mean m(lambda_i, lambda_j),
//! and its inverse as division. The integral forms are kept only as
//! cross-check oracles for that fast path.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // float intrinsics under no_std
use num_traits::Float as _;

use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::monotone::MonotoneFunction;
use crate::quadrature::{adaptive_simpson, QuadratureOutcome, QuadratureSpec};
use crate::state::{from_spectrum, DensityMatrix, HermitianMatrix, TangentVector};
use crate::{Error, Result};

/// A density matrix paired with a catalog function, with the multiplier
/// table m(lambda_i, lambda_j) precomputed. Immutable after construction and
/// safe to share across threads.
#[derive(Clone, Debug)]
pub struct MetricContext {
    state: DensityMatrix,
    function: MonotoneFunction,
    multipliers: RealMatrix,
}

impl MetricContext {
    pub fn new(state: DensityMatrix, function: MonotoneFunction) -> Result<Self> {
        let n = state.dim();
        let mean = function.multiplier();
        let mut multipliers = RealMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let m = mean.evaluate(state.eigenvalues()[i], state.eigenvalues()[j])?;
                if !(m > 0.0) {
                    return Err(Error::NonPositiveArgument { t: m });
                }
                multipliers[(i, j)] = m;
            }
        }
        Ok(Self { state, function, multipliers })
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn function(&self) -> MonotoneFunction {
        self.function
    }

    pub fn multiplier_table(&self) -> &RealMatrix {
        &self.multipliers
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    fn check_dim(&self, a: &ComplexMatrix) -> Result<()> {
        if a.rows() != self.dim() || a.cols() != self.dim() {
            return Err(Error::DimensionMismatch { left: a.rows(), right: self.dim() });
        }
        Ok(())
    }

    fn scale_in_eigenbasis(&self, a: &ComplexMatrix, invert: bool) -> Result<ComplexMatrix> {
        self.check_dim(a)?;
        let n = self.dim();
        let mut bar = self.state.to_eigenbasis(a);
        for i in 0..n {
            for j in 0..n {
                let m = self.multipliers[(i, j)];
                bar[(i, j)] = if invert { bar[(i, j)] / m } else { bar[(i, j)] * m };
            }
        }
        Ok(self.state.from_eigenbasis(&bar))
    }

    /// Applies J: entrywise multiplication by the mean in the eigenbasis.
    /// Maps Hermitian to Hermitian; with the smallest-metric function this
    /// is (DA + AD) / 2, and J(I) = D for every catalog member.
    pub fn apply_j(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.scale_in_eigenbasis(a, false)
    }

    /// Applies the inverse of J: entrywise division by the mean. With the
    /// largest-metric function this is (D^-1 A + A D^-1) / 2.
    pub fn apply_j_inv(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.scale_in_eigenbasis(a, true)
    }

    fn eigenbasis_pairing(&self, a: &ComplexMatrix, b: &ComplexMatrix, invert: bool) -> Result<f64> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let n = self.dim();
        let abar = self.state.to_eigenbasis(a);
        let bbar = self.state.to_eigenbasis(b);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let m = self.multipliers[(i, j)];
                let w = if invert { 1.0 / m } else { m };
                acc += abar[(i, j)].conj() * bbar[(i, j)] * w;
            }
        }
        // Real for Hermitian arguments; the imaginary residue is rounding.
        Ok(acc.re)
    }

    /// The metric pairing Tr A J^-1(B) for Hermitian A, B. Prefer
    /// `fisher_info` when the arguments are known tangents.
    pub fn pairing(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
        self.eigenbasis_pairing(a, b, true)
    }

    /// Monotone Fisher information of a pair of tangent directions:
    /// symmetric, bilinear, and positive definite on nonzero tangents.
    pub fn fisher_info(&self, a: &TangentVector, b: &TangentVector) -> Result<f64> {
        self.eigenbasis_pairing(a.matrix(), b.matrix(), true)
    }

    /// Generalized variance Tr A J(B) of a pair of observables. For the
    /// smallest-metric function this is the symmetrized second moment
    /// Tr D (AB + BA) / 2; it is not mean-centered.
    pub fn variance(&self, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
        self.eigenbasis_pairing(a.matrix(), b.matrix(), false)
    }
}

/// Symmetric logarithmic derivative: the Hermitian solution L of
/// D L + L D = 2 A, computed entrywise as L_ij = 2 A_ij / (lambda_i +
/// lambda_j) in the eigenbasis. Coincides with J^-1 under the
/// smallest-metric function.
pub fn sld(d: &DensityMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.dim() != d.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: d.dim() });
    }
    let n = d.dim();
    let mut bar = d.to_eigenbasis(a.matrix());
    for i in 0..n {
        for j in 0..n {
            let denom = d.eigenvalues()[i] + d.eigenvalues()[j];
            bar[(i, j)] = bar[(i, j)] * (2.0 / denom);
        }
    }
    HermitianMatrix::new(d.from_eigenbasis(&bar))
}

/// Quadrature of the resolvent integral
/// `int_0^inf Tr A (D + t)^-1 B (D + t)^-1 dt`,
/// the integral form of the Kubo-Mori metric. The resolvents are computed by
/// LU solves, deliberately not sharing the spectral route they are checking.
///
/// The half-line is compactified by t = c s / (1 - s) with c the geometric
/// mean of the extreme eigenvalues, which centers the resolvent transition
/// in the middle of [0, 1] where the panels are.
pub fn km_metric_integral(
    d: &DensityMatrix,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    spec: &QuadratureSpec,
) -> Result<QuadratureOutcome<f64>> {
    if a.dim() != d.dim() || b.dim() != d.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: d.dim() });
    }
    let n = d.dim();
    let lo = d.eigenvalues()[0];
    let hi = d.eigenvalues()[n - 1];
    let c = (lo * hi).sqrt();
    let tail = a.matrix().mul(b.matrix()).trace().re / c;
    adaptive_simpson(
        |s: f64| -> Result<f64> {
            if s >= 1.0 {
                return Ok(tail);
            }
            let t = c * s / (1.0 - s);
            let mut shifted = d.matrix().clone();
            for i in 0..n {
                shifted[(i, i)] += t;
            }
            let resolvent = shifted.inverse()?;
            let val = a.matrix().mul(&resolvent).mul(b.matrix()).mul(&resolvent).trace().re;
            let jac = c / ((1.0 - s) * (1.0 - s));
            Ok(val * jac)
        },
        0.0,
        1.0,
        spec,
    )
}

/// Quadrature of `int_0^1 Tr A D^t B D^{1-t} dt`, the integral form of the
/// Kubo-Mori generalized variance. Powers of D are spectral, but each node
/// evaluates the full matrix product rather than the entrywise shortcut the
/// fast path uses.
pub fn km_variance_integral(
    d: &DensityMatrix,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    spec: &QuadratureSpec,
) -> Result<QuadratureOutcome<f64>> {
    if a.dim() != d.dim() || b.dim() != d.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: d.dim() });
    }
    adaptive_simpson(
        |t: f64| -> Result<f64> {
            let dt = d.power(t);
            let d1t = d.power(1.0 - t);
            Ok(a.matrix().mul(&dt).mul(b.matrix()).mul(&d1t).trace().re)
        },
        0.0,
        1.0,
        spec,
    )
}

/// Quadrature of `2 int_0^inf e^{-tD} A e^{-tD} dt`, the exponential
/// integral form of the symmetric logarithmic derivative.
///
/// Substituting t = -ln(1 - s) / c with c = lambda_min / 2 turns the
/// exponential tail into the factor (1 - s)^{(lambda_i + lambda_j)/c - 1},
/// which vanishes at least cubically at s = 1, fast enough for Simpson's
/// fourth-order rate to survive.
pub fn sld_exponential_integral(
    d: &DensityMatrix,
    a: &HermitianMatrix,
    spec: &QuadratureSpec,
) -> Result<QuadratureOutcome<ComplexMatrix>> {
    if a.dim() != d.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: d.dim() });
    }
    let n = d.dim();
    let c = 0.5 * d.eigenvalues()[0];
    adaptive_simpson(
        |s: f64| -> Result<ComplexMatrix> {
            if s >= 1.0 {
                return Ok(ComplexMatrix::zeros(n, n));
            }
            let log1ms = (1.0 - s).ln();
            let weights: Vec<f64> =
                d.eigenvalues().iter().map(|&lam| (lam / c * log1ms).exp()).collect();
            let decay = from_spectrum(&weights, d.eigenvectors());
            let jac = 2.0 / (c * (1.0 - s));
            Ok(decay.mul(a.matrix()).mul(&decay).scale(jac))
        },
        0.0,
        1.0,
        spec,
    )
}

/// Radial and tangential metric components of a qubit Bloch state at radius
/// r, in the chart where tangents carry the half-Pauli normalization.
#[derive(Clone, Copy, Debug)]
pub struct BlochSplit {
    /// 1 / (1 - r^2); independent of the catalog function.
    pub radial: f64,
    /// (1 / (1 + r)) * 1 / f((1 - r) / (1 + r)).
    pub tangential: f64,
}

/// Closed-form radial/tangential split of a catalog metric on the Bloch
/// ball. Cross-validated elsewhere against direct Fisher information at
/// D = (I + r sigma_3)/2 with tangents sigma_3/2 and sigma_1/2.
pub fn bloch_split(f: MonotoneFunction, r: f64) -> Result<BlochSplit> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::DomainViolation { radius: r });
    }
    let t = (1.0 - r) / (1.0 + r);
    let radial = 1.0 / (1.0 - r * r);
    let tangential = 1.0 / ((1.0 + r) * f.eval(t)?);
    Ok(BlochSplit { radial, tangential })
}

/// One row of the pure-state-boundary probe.
#[derive(Clone, Copy, Debug)]
pub struct RadialLimitRow {
    pub r: f64,
    pub tangential: f64,
}

/// Behavior of the tangential component as the Bloch radius approaches 1.
/// The limit exists exactly when f(0) > 0; then it equals 1 / (2 f(0)).
#[derive(Clone, Debug)]
pub struct RadialLimitReport {
    pub function: MonotoneFunction,
    pub f_at_zero: f64,
    pub rows: Vec<RadialLimitRow>,
    pub converges: bool,
    pub limit: Option<f64>,
}

/// Evaluates the tangential component at r = 1 - 10^-k for k = 1..8 and
/// classifies convergence by f(0).
pub fn radial_limit_probe(f: MonotoneFunction) -> Result<RadialLimitReport> {
    let f_at_zero = f.f_at_zero();
    let mut rows = Vec::with_capacity(8);
    for k in 1..=8 {
        let r = 1.0 - 10f64.powi(-k);
        let split = bloch_split(f, r)?;
        rows.push(RadialLimitRow { r, tangential: split.tangential });
    }
    let converges = f_at_zero > 0.0;
    let limit = if converges { Some(1.0 / (2.0 * f_at_zero)) } else { None };
    Ok(RadialLimitReport { function: f, f_at_zero, rows, converges, limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{random_density, random_tangent, random_unitary, seeded_rng};
    use crate::tol;

    fn pauli(k: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2, 2);
        match k {
            1 => {
                m[(0, 1)] = Complex64::new(1.0, 0.0);
                m[(1, 0)] = Complex64::new(1.0, 0.0);
            }
            2 => {
                m[(0, 1)] = Complex64::new(0.0, -1.0);
                m[(1, 0)] = Complex64::new(0.0, 1.0);
            }
            3 => {
                m[(0, 0)] = Complex64::new(1.0, 0.0);
                m[(1, 1)] = Complex64::new(-1.0, 0.0);
            }
            _ => unreachable!(),
        }
        m
    }

    fn diag_state(entries: &[f64]) -> DensityMatrix {
        let n = entries.len();
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(entries[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        DensityMatrix::new(m, 1e-12).unwrap()
    }

    #[test]
    fn apply_j_min_is_anticommutator_half() {
        let mut rng = seeded_rng(21);
        for _ in 0..20 {
            let d = random_density(4, 1e-6, &mut rng).unwrap();
            let a = random_tangent(4, &mut rng);
            let ctx = MetricContext::new(d.clone(), MonotoneFunction::Min).unwrap();
            let got = ctx.apply_j(a.matrix()).unwrap();
            let want = d.matrix().mul(a.matrix()).add(&a.matrix().mul(d.matrix())).scale(0.5);
            assert!(got.sub(&want).max_abs() < 1e-12);
        }
    }

    #[test]
    fn apply_j_inv_max_is_inverse_anticommutator_half() {
        let mut rng = seeded_rng(22);
        for _ in 0..20 {
            let d = random_density(3, 1e-4, &mut rng).unwrap();
            let a = random_tangent(3, &mut rng);
            let ctx = MetricContext::new(d.clone(), MonotoneFunction::Max).unwrap();
            let got = ctx.apply_j_inv(a.matrix()).unwrap();
            let dinv = d.matrix().inverse().unwrap();
            let want = dinv.mul(a.matrix()).add(&a.matrix().mul(&dinv)).scale(0.5);
            assert!(got.sub(&want).max_abs() < 1e-9 * (1.0 + want.max_abs()));
        }
    }

    #[test]
    fn maximally_mixed_state_scales_uniformly() {
        let mut rng = seeded_rng(23);
        let n = 3;
        let d = diag_state(&[1.0 / 3.0; 3]);
        let a = random_tangent(n, &mut rng);
        for f in MonotoneFunction::catalog() {
            let ctx = MetricContext::new(d.clone(), f).unwrap();
            let got = ctx.apply_j(a.matrix()).unwrap();
            let want = a.matrix().scale(1.0 / 3.0);
            assert!(got.sub(&want).max_abs() < 1e-13, "{f}");
        }
    }

    #[test]
    fn km_offdiagonal_scaling_is_logarithmic_mean() {
        let d = diag_state(&[0.75, 0.25]);
        let ctx = MetricContext::new(d, MonotoneFunction::KuboMori).unwrap();
        let got = ctx.apply_j(&pauli(1)).unwrap();
        let m = 0.5 / 3.0f64.ln();
        assert!((got[(0, 1)].re - m).abs() < 1e-14);
        assert!((got[(1, 0)].re - m).abs() < 1e-14);
        assert!(got[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn j_round_trip_is_identity() {
        let mut rng = seeded_rng(24);
        for case in 0..100 {
            let n = 2 + case % 5;
            let d = random_density(n, 1e-8, &mut rng).unwrap();
            let a = random_tangent(n, &mut rng);
            let f = MonotoneFunction::catalog()[case % 6];
            let ctx = MetricContext::new(d, f).unwrap();
            let round = ctx.apply_j(&ctx.apply_j_inv(a.matrix()).unwrap()).unwrap();
            assert!(
                round.sub(a.matrix()).max_abs() < tol::ROUND_TRIP * (1.0 + a.matrix().max_abs()),
                "case {case} {f}"
            );
        }
    }

    #[test]
    fn j_of_identity_is_the_state() {
        let mut rng = seeded_rng(25);
        let d = random_density(4, 1e-6, &mut rng).unwrap();
        for f in MonotoneFunction::catalog() {
            let ctx = MetricContext::new(d.clone(), f).unwrap();
            let got = ctx.apply_j(&ComplexMatrix::identity(4)).unwrap();
            assert!(got.sub(d.matrix()).max_abs() < 1e-12, "{f}");
        }
    }

    #[test]
    fn fisher_info_on_maximally_mixed_qubit() {
        let d = diag_state(&[0.5, 0.5]);
        let a = TangentVector::new(pauli(1).scale(0.5)).unwrap();
        for f in MonotoneFunction::catalog() {
            let ctx = MetricContext::new(d.clone(), f).unwrap();
            let v = ctx.fisher_info(&a, &a).unwrap();
            assert!((v - 1.0).abs() < 1e-13, "{f}: {v}");
        }
    }

    #[test]
    fn fisher_info_commuting_closed_form() {
        // D = diag(p, 1-p), A = diag(a, -a): value a^2/p + a^2/(1-p).
        let p = 0.7;
        let a_val = 0.3;
        let d = diag_state(&[p, 1.0 - p]);
        let mut am = ComplexMatrix::zeros(2, 2);
        am[(0, 0)] = Complex64::new(a_val, 0.0);
        am[(1, 1)] = Complex64::new(-a_val, 0.0);
        let a = TangentVector::new(am).unwrap();
        let want = a_val * a_val / p + a_val * a_val / (1.0 - p);
        for f in MonotoneFunction::catalog() {
            let ctx = MetricContext::new(d.clone(), f).unwrap();
            let v = ctx.fisher_info(&a, &a).unwrap();
            assert!((v - want).abs() < tol::COMMUTING_COLLAPSE_REL * want, "{f}");
        }
    }

    #[test]
    fn variance_min_is_symmetrized_second_moment() {
        let mut rng = seeded_rng(26);
        for _ in 0..20 {
            let d = random_density(3, 1e-6, &mut rng).unwrap();
            let a = crate::state::random_hermitian(3, &mut rng);
            let b = crate::state::random_hermitian(3, &mut rng);
            let ctx = MetricContext::new(d.clone(), MonotoneFunction::Min).unwrap();
            let got = ctx.variance(&a, &b).unwrap();
            let anticomm = a.matrix().mul(b.matrix()).add(&b.matrix().mul(a.matrix()));
            let want = 0.5 * d.matrix().mul(&anticomm).trace().re;
            assert!((got - want).abs() < 1e-12 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn variance_commuting_is_second_moment() {
        let d = diag_state(&[0.6, 0.3, 0.1]);
        let am = ComplexMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                Complex64::new([1.0, -2.0, 0.5][i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let a = HermitianMatrix::new(am.clone()).unwrap();
        let want = d.matrix().mul(&am).mul(&am).trace().re;
        for f in MonotoneFunction::catalog() {
            let ctx = MetricContext::new(d.clone(), f).unwrap();
            let got = ctx.variance(&a, &a).unwrap();
            assert!((got - want).abs() < 1e-12 * want, "{f}");
        }
    }

    #[test]
    fn metric_and_variance_duality() {
        let mut rng = seeded_rng(27);
        for case in 0..30 {
            let n = 2 + case % 4;
            let d = random_density(n, 1e-8, &mut rng).unwrap();
            let a = random_tangent(n, &mut rng);
            let f = MonotoneFunction::catalog()[case % 6];
            let ctx = MetricContext::new(d, f).unwrap();
            let ja = ctx.apply_j(a.matrix()).unwrap();
            let lhs = ctx.pairing(&ja, &ja).unwrap();
            let a_herm = HermitianMatrix::new(a.matrix().clone()).unwrap();
            let rhs = ctx.variance(&a_herm, &a_herm).unwrap();
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()), "case {case}");
        }
    }

    #[test]
    fn metric_ordering_and_variance_ordering() {
        let mut rng = seeded_rng(28);
        for case in 0..50 {
            let n = 2 + case % 4;
            let d = random_density(n, 1e-8, &mut rng).unwrap();
            let a = random_tangent(n, &mut rng);
            let a_herm = HermitianMatrix::new(a.matrix().clone()).unwrap();
            let min_ctx = MetricContext::new(d.clone(), MonotoneFunction::Min).unwrap();
            let max_ctx = MetricContext::new(d.clone(), MonotoneFunction::Max).unwrap();
            let f_min = min_ctx.fisher_info(&a, &a).unwrap();
            let f_max = max_ctx.fisher_info(&a, &a).unwrap();
            let v_min = min_ctx.variance(&a_herm, &a_herm).unwrap();
            let v_max = max_ctx.variance(&a_herm, &a_herm).unwrap();
            for f in MonotoneFunction::catalog() {
                let ctx = MetricContext::new(d.clone(), f).unwrap();
                let fi = ctx.fisher_info(&a, &a).unwrap();
                assert!(fi >= f_min - tol::MONOTONICITY_MARGIN * fi.abs(), "case {case} {f}");
                assert!(fi <= f_max + tol::MONOTONICITY_MARGIN * fi.abs(), "case {case} {f}");
                let vi = ctx.variance(&a_herm, &a_herm).unwrap();
                assert!(vi <= v_min + tol::MONOTONICITY_MARGIN * vi.abs(), "case {case} {f}");
                assert!(vi >= v_max - tol::MONOTONICITY_MARGIN * vi.abs(), "case {case} {f}");
            }
        }
    }

    #[test]
    fn unitary_covariance() {
        let mut rng = seeded_rng(29);
        for case in 0..40 {
            let n = 2 + case % 4;
            let d = random_density(n, 1e-8, &mut rng).unwrap();
            let a = random_tangent(n, &mut rng);
            let u = random_unitary(n, &mut rng).unwrap();
            let f = MonotoneFunction::catalog()[case % 6];
            let base = MetricContext::new(d.clone(), f)
                .unwrap()
                .fisher_info(&a, &a)
                .unwrap();
            let du = DensityMatrix::new(
                u.mul(d.matrix()).mul(&u.adjoint()),
                d.floor() * 0.5,
            )
            .unwrap();
            let au = TangentVector::new(u.mul(a.matrix()).mul(&u.adjoint())).unwrap();
            let rotated = MetricContext::new(du, f).unwrap().fisher_info(&au, &au).unwrap();
            assert!(
                (base - rotated).abs() < tol::UNITARY_COVARIANCE * (1.0 + base.abs()),
                "case {case} {f}: {base} vs {rotated}"
            );
        }
    }

    #[test]
    fn fisher_info_positivity_floor() {
        let mut rng = seeded_rng(30);
        for case in 0..30 {
            let n = 2 + case % 4;
            let d = random_density(n, 1e-8, &mut rng).unwrap();
            let a = random_tangent(n, &mut rng);
            let f = MonotoneFunction::catalog()[case % 6];
            let ctx = MetricContext::new(d, f).unwrap();
            let v = ctx.fisher_info(&a, &a).unwrap();
            let max_m = ctx.multiplier_table().max_abs();
            let floor = a.matrix().frobenius_norm().powi(2) / max_m;
            assert!(v >= floor * (1.0 - 1e-10), "case {case} {f}: {v} < {floor}");
        }
    }

    #[test]
    fn sld_frozen_qubit_case() {
        let d = diag_state(&[0.75, 0.25]);
        let a = HermitianMatrix::new(pauli(1)).unwrap();
        let l = sld(&d, &a).unwrap();
        // Off-diagonal: 2 * 1 / (0.75 + 0.25) = 2.
        assert!((l.matrix()[(0, 1)].re - 2.0).abs() < 1e-13);
        assert!(l.matrix()[(0, 0)].norm() < 1e-13);
        // Tr(A L) = Tr(D L^2).
        let lhs = a.matrix().mul(l.matrix()).trace().re;
        let rhs = d.matrix().mul(l.matrix()).mul(l.matrix()).trace().re;
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn sld_matches_min_inverse_and_moment_identity() {
        let mut rng = seeded_rng(31);
        for _ in 0..25 {
            let d = random_density(4, 1e-6, &mut rng).unwrap();
            let a = crate::state::random_hermitian(4, &mut rng);
            let l = sld(&d, &a).unwrap();
            let ctx = MetricContext::new(d.clone(), MonotoneFunction::Min).unwrap();
            let via_j = ctx.apply_j_inv(a.matrix()).unwrap();
            let gap = l.matrix().sub(&via_j).max_abs();
            assert!(gap < 1e-11 * (1.0 + l.matrix().max_abs()), "gap {gap}");
            let lhs = a.matrix().mul(l.matrix()).trace().re;
            let rhs = d.matrix().mul(l.matrix()).mul(l.matrix()).trace().re;
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn km_metric_integral_frozen_value() {
        // D = diag(3/4, 1/4), A = B = sigma_1: spectral value 2 / m where m
        // is the logarithmic mean, so 4 ln 3.
        let d = diag_state(&[0.75, 0.25]);
        let a = HermitianMatrix::new(pauli(1)).unwrap();
        let out = km_metric_integral(&d, &a, &a, &QuadratureSpec::default()).unwrap();
        let want = 4.0 * 3.0f64.ln();
        assert!(
            (out.value - want).abs() < tol::INTEGRAL_ORACLE_REL * want,
            "{} vs {want}",
            out.value
        );
    }

    #[test]
    fn km_integrals_match_spectral_fast_paths() {
        let mut rng = seeded_rng(32);
        let spec = QuadratureSpec::default();
        for case in 0..10 {
            let n = 2 + case % 3;
            let d = random_density(n, 0.02, &mut rng).unwrap();
            let a = crate::state::random_hermitian(n, &mut rng);
            let b = crate::state::random_hermitian(n, &mut rng);
            let ctx = MetricContext::new(d.clone(), MonotoneFunction::KuboMori).unwrap();

            let metric_fast = ctx.pairing(a.matrix(), b.matrix()).unwrap();
            let metric_slow = km_metric_integral(&d, &a, &b, &spec).unwrap().value;
            assert!(
                (metric_fast - metric_slow).abs()
                    < tol::INTEGRAL_ORACLE_REL * (1.0 + metric_fast.abs()),
                "case {case} metric {metric_fast} vs {metric_slow}"
            );

            let var_fast = ctx.variance(&a, &b).unwrap();
            let var_slow = km_variance_integral(&d, &a, &b, &spec).unwrap().value;
            assert!(
                (var_fast - var_slow).abs() < tol::INTEGRAL_ORACLE_REL * (1.0 + var_fast.abs()),
                "case {case} variance {var_fast} vs {var_slow}"
            );

            let l_fast = sld(&d, &a).unwrap();
            let l_slow = sld_exponential_integral(&d, &a, &spec).unwrap().value;
            let rel = l_slow.sub(l_fast.matrix()).frobenius_norm()
                / (1.0 + l_fast.matrix().frobenius_norm());
            assert!(rel < tol::INTEGRAL_ORACLE_REL, "case {case} sld rel {rel}");
        }
    }

    #[test]
    fn bloch_split_closed_forms() {
        // Smallest metric: tangential identically 1.
        for &r in &[0.1, 0.5, 0.9, 0.999] {
            let s = bloch_split(MonotoneFunction::Min, r).unwrap();
            assert!((s.tangential - 1.0).abs() < 1e-14, "r={r}");
            assert!((s.radial - 1.0 / (1.0 - r * r)).abs() < 1e-12);
        }
        // Kubo-Mori at r = 1/2: tangential is ln 3.
        let s = bloch_split(MonotoneFunction::KuboMori, 0.5).unwrap();
        assert!((s.tangential - 3.0f64.ln()).abs() < 1e-14);
        // Euclidean at the center.
        let s = bloch_split(MonotoneFunction::Max, 1e-9).unwrap();
        assert!((s.radial - 1.0).abs() < 1e-8);
        assert!((s.tangential - 1.0).abs() < 1e-8);
        assert!(matches!(
            bloch_split(MonotoneFunction::Min, 1.5),
            Err(Error::DomainViolation { .. })
        ));
    }

    #[test]
    fn bloch_split_matches_direct_fisher_info() {
        for f in MonotoneFunction::catalog() {
            for &r in &[0.1, 0.3, 0.5, 0.7, 0.9] {
                let split = bloch_split(f, r).unwrap();
                let d = diag_state(&[(1.0 + r) / 2.0, (1.0 - r) / 2.0]);
                let ctx = MetricContext::new(d, f).unwrap();
                let a_rad = TangentVector::new(pauli(3).scale(0.5)).unwrap();
                let a_tan = TangentVector::new(pauli(1).scale(0.5)).unwrap();
                let radial = ctx.fisher_info(&a_rad, &a_rad).unwrap();
                let tangential = ctx.fisher_info(&a_tan, &a_tan).unwrap();
                assert!(
                    (radial - split.radial).abs() < tol::BLOCH_SPLIT * (1.0 + split.radial),
                    "{f} r={r} radial"
                );
                assert!(
                    (tangential - split.tangential).abs()
                        < tol::BLOCH_SPLIT * (1.0 + split.tangential),
                    "{f} r={r} tangential"
                );
            }
        }
    }

    #[test]
    fn radial_probe_classifies_catalog() {
        let min_report = radial_limit_probe(MonotoneFunction::Min).unwrap();
        assert!(min_report.converges);
        assert!((min_report.limit.unwrap() - 1.0).abs() < 1e-14);
        let last = min_report.rows.last().unwrap();
        assert!((last.tangential - 1.0).abs() < 1e-7);

        for f in [MonotoneFunction::Max, MonotoneFunction::KuboMori] {
            let report = radial_limit_probe(f).unwrap();
            assert!(!report.converges, "{f}");
            assert!(report.limit.is_none());
            // Tangential grows without bound as r -> 1: strictly increasing
            // row to row. The rate differs (linear for the largest metric,
            // only logarithmic for Kubo-Mori), so the growth-factor check is
            // modest.
            for w in report.rows.windows(2) {
                assert!(w[1].tangential > w[0].tangential, "{f}");
            }
            let first = report.rows.first().unwrap().tangential;
            let last = report.rows.last().unwrap().tangential;
            assert!(last > 4.0 * first, "{f}");
        }

        let beta_report = radial_limit_probe(MonotoneFunction::Beta(0.5)).unwrap();
        assert!(beta_report.converges);
        assert!((beta_report.limit.unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut rng = seeded_rng(33);
        let d = random_density(3, 1e-6, &mut rng).unwrap();
        let ctx = MetricContext::new(d, MonotoneFunction::Min).unwrap();
        let wrong = ComplexMatrix::identity(2);
        assert!(matches!(
            ctx.apply_j(&wrong),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

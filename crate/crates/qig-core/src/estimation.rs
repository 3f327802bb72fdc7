//! Parametric state families, logarithmic derivatives, and Cramer-Rao
//! machinery: scalar and matrix information bounds, the estimator that
//! saturates them, and the block-matrix positivity oracle that proves the
//! matrix bound.
//!
//! A [`StatisticalModel`] is a smooth map from parameters to density
//! matrices. Tangents at the origin are either supplied analytically or
//! recovered by central finite differences; both routes feed the same
//! downstream code.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // float intrinsics under no_std
use num_traits::Float as _;

use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::metric::MetricContext;
use crate::monotone::MonotoneFunction;
use crate::state::{
    gell_mann, gibbs_state, random_density, random_tangent, seeded_rng, DensityMatrix,
    HermitianMatrix, TangentVector,
};
use crate::{tol, Error, Result};

/// Default central-difference step for model derivatives. Truncation error
/// scales as h^2 and roundoff as eps/h; 1e-5 balances them at double
/// precision.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// A Fisher matrix whose smallest eigenvalue falls below this times the
/// largest is reported as rank deficient instead of being inverted.
const RANK_GUARD: f64 = 1e-10;

type StateFn = Box<dyn Fn(&[f64]) -> Result<DensityMatrix> + Send + Sync>;

/// A smooth family of density matrices over an m-dimensional parameter,
/// anchored at the origin.
pub struct StatisticalModel {
    param_dim: usize,
    dim: usize,
    base: DensityMatrix,
    state_fn: StateFn,
    analytic_tangents: Option<Vec<TangentVector>>,
    fd_step: f64,
    richardson: bool,
}

impl core::fmt::Debug for StatisticalModel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("StatisticalModel")
            .field("param_dim", &self.param_dim)
            .field("dim", &self.dim)
            .field("analytic", &self.analytic_tangents.is_some())
            .field("fd_step", &self.fd_step)
            .field("richardson", &self.richardson)
            .finish()
    }
}

impl StatisticalModel {
    /// Wraps a closure mapping parameters to states. The closure is probed
    /// at the origin immediately; the family must be strictly positive
    /// there.
    pub fn from_closure<F>(param_dim: usize, state_fn: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<DensityMatrix> + Send + Sync + 'static,
    {
        if param_dim == 0 {
            return Err(Error::Empty { what: "parameters" });
        }
        let base = state_fn(&vec![0.0; param_dim])?;
        let dim = base.dim();
        Ok(Self {
            param_dim,
            dim,
            base,
            state_fn: Box::new(state_fn),
            analytic_tangents: None,
            fd_step: DEFAULT_FD_STEP,
            richardson: false,
        })
    }

    /// Installs exact derivative directions at the origin, bypassing finite
    /// differences.
    pub fn with_analytic_tangents(mut self, tangents: Vec<TangentVector>) -> Result<Self> {
        if tangents.len() != self.param_dim {
            return Err(Error::WrongParameterCount {
                expected: self.param_dim,
                got: tangents.len(),
            });
        }
        for t in &tangents {
            if t.matrix().rows() != self.dim {
                return Err(Error::DimensionMismatch { left: t.matrix().rows(), right: self.dim });
            }
        }
        self.analytic_tangents = Some(tangents);
        Ok(self)
    }

    pub fn with_fd_step(mut self, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::ParameterOutOfRange { name: "fd_step", value: h });
        }
        self.fd_step = h;
        Ok(self)
    }

    /// Enables one level of Richardson refinement of the finite-difference
    /// tangents: (4 S(h/2) - S(h)) / 3 cancels the leading h^2 term.
    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }

    pub fn param_dim(&self) -> usize {
        self.param_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn base_state(&self) -> &DensityMatrix {
        &self.base
    }

    pub fn state_at(&self, theta: &[f64]) -> Result<DensityMatrix> {
        if theta.len() != self.param_dim {
            return Err(Error::WrongParameterCount { expected: self.param_dim, got: theta.len() });
        }
        (self.state_fn)(theta)
    }

    fn central_difference(&self, axis: usize, h: f64) -> Result<ComplexMatrix> {
        let mut theta = vec![0.0; self.param_dim];
        theta[axis] = h;
        let plus = self.state_at(&theta)?;
        theta[axis] = -h;
        let minus = self.state_at(&theta)?;
        Ok(plus.matrix().sub(minus.matrix()).scale(0.5 / h))
    }

    /// Derivative directions at the origin: the analytic ones when
    /// installed, finite differences otherwise. Finite-difference tangents
    /// are checked for trace drift (a non-trace-preserving family is a
    /// modeling error) and then projected exactly traceless.
    pub fn tangents_at_zero(&self) -> Result<Vec<TangentVector>> {
        if let Some(tangents) = &self.analytic_tangents {
            return Ok(tangents.clone());
        }
        let mut out = Vec::with_capacity(self.param_dim);
        for axis in 0..self.param_dim {
            let raw = if self.richardson {
                let coarse = self.central_difference(axis, self.fd_step)?;
                let fine = self.central_difference(axis, 0.5 * self.fd_step)?;
                fine.scale(4.0 / 3.0).sub(&coarse.scale(1.0 / 3.0))
            } else {
                self.central_difference(axis, self.fd_step)?
            };
            let drift = raw.trace().norm();
            if drift > tol::FAMILY_TRACE_DRIFT {
                return Err(Error::NotTraceless { trace: drift });
            }
            out.push(TangentVector::from_hermitian_centered(&raw)?);
        }
        Ok(out)
    }
}

/// The logarithmic derivatives L_i = J^{-1}(dD_i) at the origin under the
/// chosen function. Pairing L_i against any observable B through the
/// generalized covariance reproduces the derivative of Tr D_theta B.
pub fn log_derivatives(
    model: &StatisticalModel,
    f: MonotoneFunction,
) -> Result<Vec<HermitianMatrix>> {
    let ctx = MetricContext::new(model.base_state().clone(), f)?;
    let mut out = Vec::with_capacity(model.param_dim());
    for t in model.tangents_at_zero()? {
        out.push(HermitianMatrix::new(ctx.apply_j_inv(t.matrix())?)?);
    }
    Ok(out)
}

/// The information matrix G_ij = Tr dD_i J^{-1}(dD_j). Symmetric positive
/// definite for independent tangents; a rank-deficient family is reported
/// rather than silently pseudo-inverted.
pub fn fisher_matrix(model: &StatisticalModel, f: MonotoneFunction) -> Result<RealMatrix> {
    let ctx = MetricContext::new(model.base_state().clone(), f)?;
    let tangents = model.tangents_at_zero()?;
    let m = tangents.len();
    let mut g = RealMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = ctx.fisher_info(&tangents[i], &tangents[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    let eigs = g.symmetric_eigenvalues()?;
    let top = eigs.last().copied().unwrap_or(0.0);
    if eigs[0] <= RANK_GUARD * top.max(1.0) {
        return Err(Error::RankDeficient { min_eigenvalue: eigs[0] });
    }
    Ok(g)
}

/// A family of observables acting as a locally unbiased estimator of the
/// model parameters: each is centered at the base state and calibrated
/// against the tangent directions.
#[derive(Clone, Debug)]
pub struct EstimatorBank {
    observables: Vec<HermitianMatrix>,
}

impl EstimatorBank {
    /// Validates centering (Tr D0 A_i = 0) and calibration
    /// (d/dtheta_i Tr D A_j = delta_ij) against the model.
    pub fn new(observables: Vec<HermitianMatrix>, model: &StatisticalModel) -> Result<Self> {
        if observables.len() != model.param_dim() {
            return Err(Error::WrongParameterCount {
                expected: model.param_dim(),
                got: observables.len(),
            });
        }
        let d0 = model.base_state();
        let tangents = model.tangents_at_zero()?;
        for a in &observables {
            let defect = d0.expectation(a.matrix()).abs();
            if defect > tol::CENTERING {
                return Err(Error::NotCentered { defect });
            }
        }
        let mut worst = 0.0f64;
        for (i, t) in tangents.iter().enumerate() {
            for (j, a) in observables.iter().enumerate() {
                let pairing = t.matrix().mul(a.matrix()).trace().re;
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((pairing - want).abs());
            }
        }
        if worst > tol::CALIBRATION {
            return Err(Error::CalibrationFailed { defect: worst });
        }
        Ok(Self { observables })
    }

    /// The bank that saturates the matrix bound: A_i = sum_j (G^{-1})_ij L_j,
    /// centered. Its covariance equals the inverse information matrix.
    pub fn saturating(model: &StatisticalModel, f: MonotoneFunction) -> Result<Self> {
        let g_inv = fisher_matrix(model, f)?.inverse()?;
        let ls = log_derivatives(model, f)?;
        let d0 = model.base_state();
        let m = ls.len();
        let mut observables = Vec::with_capacity(m);
        for i in 0..m {
            let mut acc = ComplexMatrix::zeros(model.dim(), model.dim());
            for (j, l) in ls.iter().enumerate() {
                acc = acc.add(&l.matrix().scale(g_inv[(i, j)]));
            }
            let mean = d0.expectation(&acc);
            let centered = acc.sub(&ComplexMatrix::identity(model.dim()).scale(mean));
            observables.push(HermitianMatrix::new(centered)?);
        }
        Self::new(observables, model)
    }

    /// A saturating bank perturbed by seeded Hermitian noise that has been
    /// projected back onto the unbiasedness constraints, so the result is
    /// still a valid (merely suboptimal) estimator.
    pub fn saturating_with_noise(
        model: &StatisticalModel,
        f: MonotoneFunction,
        seed: u64,
        amplitude: f64,
    ) -> Result<Self> {
        if !(amplitude >= 0.0) || !amplitude.is_finite() {
            return Err(Error::ParameterOutOfRange { name: "amplitude", value: amplitude });
        }
        let base = Self::saturating(model, f)?;
        let mut rng = seeded_rng(seed);
        let tangents = model.tangents_at_zero()?;
        let mut observables = Vec::with_capacity(base.observables.len());
        for a in &base.observables {
            let noise = random_tangent(model.dim(), &mut rng);
            let clean = project_out_bias(model, &tangents, noise.matrix())?;
            observables.push(HermitianMatrix::new(
                a.matrix().add(&clean.scale(amplitude)),
            )?);
        }
        Self::new(observables, model)
    }

    pub fn observables(&self) -> &[HermitianMatrix] {
        &self.observables
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }
}

/// Removes from `noise` the components that would disturb centering or
/// calibration: subtracts the combination of the identity and the model
/// tangents solving the (m+1)-dimensional moment system.
fn project_out_bias(
    model: &StatisticalModel,
    tangents: &[TangentVector],
    noise: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let d0 = model.base_state();
    let m = tangents.len();
    let n = model.dim();
    // Correction directions: identity, then each tangent.
    let mut dirs: Vec<ComplexMatrix> = Vec::with_capacity(m + 1);
    dirs.push(ComplexMatrix::identity(n));
    for t in tangents {
        dirs.push(t.matrix().clone());
    }
    // Moment functionals: Tr(D0 X), then Tr(dD_i X).
    let moment = |x: &ComplexMatrix, row: usize| -> f64 {
        if row == 0 {
            d0.expectation(x)
        } else {
            tangents[row - 1].matrix().mul(x).trace().re
        }
    };
    let system = RealMatrix::from_fn(m + 1, m + 1, |r, c| moment(&dirs[c], r));
    let rhs = RealMatrix::from_fn(m + 1, 1, |r, _| moment(noise, r));
    let coeffs = system.solve(&rhs)?;
    let mut out = noise.clone();
    for (c, dir) in dirs.iter().enumerate() {
        out = out.sub(&dir.scale(coeffs[(c, 0)]));
    }
    Ok(out)
}

/// Outcome of the scalar information bound check.
#[derive(Clone, Copy, Debug)]
pub struct ScalarCrReport {
    /// Generalized variance of the estimator at the base state.
    pub variance: f64,
    /// Reciprocal of the scalar information.
    pub bound: f64,
    /// variance - bound; nonnegative up to tolerance, zero for the optimal
    /// estimator.
    pub slack: f64,
}

/// Checks the scalar variance bound for a one-parameter model: the
/// generalized variance of any locally unbiased estimator dominates the
/// reciprocal information.
pub fn scalar_cr_check(
    model: &StatisticalModel,
    a: &HermitianMatrix,
    f: MonotoneFunction,
) -> Result<ScalarCrReport> {
    if model.param_dim() != 1 {
        return Err(Error::WrongParameterCount { expected: 1, got: model.param_dim() });
    }
    let d0 = model.base_state();
    let tangent = &model.tangents_at_zero()?[0];
    let centering = d0.expectation(a.matrix()).abs();
    if centering > tol::UNBIASEDNESS {
        return Err(Error::NotCentered { defect: centering });
    }
    let calib = tangent.matrix().mul(a.matrix()).trace().re;
    if (calib - 1.0).abs() > tol::UNBIASEDNESS {
        return Err(Error::UnbiasednessViolated { defect: (calib - 1.0).abs() });
    }
    let ctx = MetricContext::new(d0.clone(), f)?;
    let variance = ctx.variance(a, a)?;
    let info = ctx.fisher_info(tangent, tangent)?;
    let bound = 1.0 / info;
    Ok(ScalarCrReport { variance, bound, slack: variance - bound })
}

/// The unique locally unbiased estimator achieving the scalar bound:
/// a rescaled logarithmic derivative, shifted to satisfy centering.
pub fn optimal_estimator(model: &StatisticalModel, f: MonotoneFunction) -> Result<HermitianMatrix> {
    if model.param_dim() != 1 {
        return Err(Error::WrongParameterCount { expected: 1, got: model.param_dim() });
    }
    let d0 = model.base_state();
    let tangent = &model.tangents_at_zero()?[0];
    if tangent.matrix().max_abs() < 1e-14 {
        return Err(Error::RankDeficient { min_eigenvalue: 0.0 });
    }
    let ctx = MetricContext::new(d0.clone(), f)?;
    let l = ctx.apply_j_inv(tangent.matrix())?;
    // Calibration fixes the scale, centering fixes the identity shift.
    let info = tangent.matrix().mul(&l).trace().re;
    if !(info > 0.0) {
        return Err(Error::RankDeficient { min_eigenvalue: info });
    }
    let scaled = l.scale(1.0 / info);
    let mean = d0.expectation(&scaled);
    let a = scaled.sub(&ComplexMatrix::identity(model.dim()).scale(mean));
    HermitianMatrix::new(a)
}

/// Outcome of the matrix information bound check.
#[derive(Clone, Debug)]
pub struct MatrixCrReport {
    /// Generalized covariance matrix of the bank.
    pub covariance: RealMatrix,
    /// Inverse information matrix.
    pub bound: RealMatrix,
    /// Smallest eigenvalue of covariance - bound; the contract is that it
    /// stays above -1e-9.
    pub gap_min_eigenvalue: f64,
}

/// Checks the matrix bound: the covariance of a calibrated bank dominates
/// the inverse information matrix in the positive semidefinite order.
pub fn matrix_cr_check(
    model: &StatisticalModel,
    bank: &EstimatorBank,
    f: MonotoneFunction,
) -> Result<MatrixCrReport> {
    let m = model.param_dim();
    if bank.len() != m {
        return Err(Error::WrongParameterCount { expected: m, got: bank.len() });
    }
    let ctx = MetricContext::new(model.base_state().clone(), f)?;
    let mut covariance = RealMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = ctx.variance(&bank.observables()[i], &bank.observables()[j])?;
            covariance[(i, j)] = v;
            covariance[(j, i)] = v;
        }
    }
    let bound = fisher_matrix(model, f)?.inverse()?;
    let gap = covariance.sub(&bound);
    let gap_min_eigenvalue = gap.min_symmetric_eigenvalue()?;
    Ok(MatrixCrReport { covariance, bound, gap_min_eigenvalue })
}

/// The block-matrix positivity oracle behind the matrix bound.
#[derive(Clone, Debug)]
pub struct BlockMatrixReport {
    /// The assembled 2m x 2m block matrix [[Cov, X], [X^T, G]] with X the
    /// computed estimator/derivative pairings (identity for a calibrated
    /// bank).
    pub matrix: RealMatrix,
    pub min_eigenvalue: f64,
    /// Whether the matrix is positive semidefinite up to tolerance. This
    /// implies the covariance dominates the inverse information matrix.
    pub psd: bool,
}

/// Assembles the 2m x 2m matrix pairing the bank against the logarithmic
/// derivatives. Its positivity is the one-line proof of the matrix bound,
/// so the oracle provides an independent route to the same conclusion.
pub fn block_matrix_oracle(
    model: &StatisticalModel,
    bank: &EstimatorBank,
    f: MonotoneFunction,
) -> Result<BlockMatrixReport> {
    let m = model.param_dim();
    if bank.len() != m {
        return Err(Error::WrongParameterCount { expected: m, got: bank.len() });
    }
    let ctx = MetricContext::new(model.base_state().clone(), f)?;
    let ls = log_derivatives(model, f)?;
    let obs = bank.observables();
    let mut big = RealMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            big[(i, j)] = ctx.variance(&obs[i], &obs[j])?;
            big[(m + i, m + j)] = ctx.variance(&ls[i], &ls[j])?;
            let cross = ctx.variance(&obs[i], &ls[j])?;
            big[(i, m + j)] = cross;
            big[(m + j, i)] = cross;
        }
    }
    // Symmetrize the pure rounding asymmetry before the eigenvalue check.
    let sym = RealMatrix::from_fn(2 * m, 2 * m, |r, c| 0.5 * (big[(r, c)] + big[(c, r)]));
    let min_eigenvalue = sym.min_symmetric_eigenvalue()?;
    Ok(BlockMatrixReport { matrix: sym, min_eigenvalue, psd: min_eigenvalue >= -tol::CR_SLACK })
}

/// One-parameter qubit family moving radially along the z axis:
/// D_theta = (I + (r + theta) sigma_z) / 2, with the exact tangent.
pub fn bloch_radial(r: f64) -> Result<StatisticalModel> {
    if r.abs() >= 1.0 {
        return Err(Error::DomainViolation { radius: r.abs() });
    }
    let model = StatisticalModel::from_closure(1, move |theta: &[f64]| {
        let z = r + theta[0];
        if z.abs() >= 1.0 {
            return Err(Error::DomainViolation { radius: z.abs() });
        }
        let mat = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i != j {
                Complex64::new(0.0, 0.0)
            } else if i == 0 {
                Complex64::new(0.5 * (1.0 + z), 0.0)
            } else {
                Complex64::new(0.5 * (1.0 - z), 0.0)
            }
        });
        DensityMatrix::new(mat, 1e-12)
    })?;
    let half_sigma_z = ComplexMatrix::from_fn(2, 2, |i, j| {
        if i == j {
            Complex64::new(if i == 0 { 0.5 } else { -0.5 }, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    model.with_analytic_tangents(vec![TangentVector::new(half_sigma_z)?])
}

/// Three-parameter qubit family over the full Bloch ball around the given
/// center, with exact Pauli tangents.
pub fn bloch_full(center: [f64; 3]) -> Result<StatisticalModel> {
    let norm0 = (center[0] * center[0] + center[1] * center[1] + center[2] * center[2]).sqrt();
    if norm0 >= 1.0 {
        return Err(Error::DomainViolation { radius: norm0 });
    }
    let model = StatisticalModel::from_closure(3, move |theta: &[f64]| {
        let v = [center[0] + theta[0], center[1] + theta[1], center[2] + theta[2]];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm >= 1.0 {
            return Err(Error::DomainViolation { radius: norm });
        }
        let mat = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Complex64::new(0.5 * (1.0 + v[2]), 0.0),
            (1, 1) => Complex64::new(0.5 * (1.0 - v[2]), 0.0),
            (0, 1) => Complex64::new(0.5 * v[0], -0.5 * v[1]),
            _ => Complex64::new(0.5 * v[0], 0.5 * v[1]),
        });
        DensityMatrix::new(mat, 1e-12)
    })?;
    let basis = gell_mann(2)?;
    let tangents = basis
        .elements()
        .iter()
        .map(|e| TangentVector::new(e.clone()))
        .collect::<Result<Vec<_>>>()?;
    // gell_mann(2) yields sigma_x/2, sigma_y/2, sigma_z/2 in that order,
    // exactly the derivative directions of the Bloch parametrization.
    model.with_analytic_tangents(tangents)
}

/// One-parameter thermal family beta -> exp(-beta H) / trace, anchored at
/// beta0, with finite-difference tangents.
pub fn gibbs_model(h: HermitianMatrix, beta0: f64) -> Result<StatisticalModel> {
    if !beta0.is_finite() {
        return Err(Error::ParameterOutOfRange { name: "beta0", value: beta0 });
    }
    StatisticalModel::from_closure(1, move |theta: &[f64]| gibbs_state(&h, beta0 + theta[0]))
}

/// Coordinate map from parameters to coefficient vectors over the
/// orthogonal traceless basis.
#[derive(Clone, Debug)]
pub enum ThetaMap {
    /// c = base + linear * theta, rows indexed by basis element.
    Affine { base: Vec<f64>, linear: Vec<Vec<f64>> },
    /// c_k = base_k + sum of weighted monomials in theta.
    Polynomial { base: Vec<f64>, terms: Vec<PolyTerm> },
}

/// One monomial contribution weight * prod theta_i^powers_i added to the
/// coefficient at `coeff_index`.
#[derive(Clone, Debug)]
pub struct PolyTerm {
    pub coeff_index: usize,
    pub weight: f64,
    pub powers: Vec<u32>,
}

impl ThetaMap {
    fn coeff_count(&self) -> usize {
        match self {
            ThetaMap::Affine { base, .. } | ThetaMap::Polynomial { base, .. } => base.len(),
        }
    }

    fn evaluate(&self, theta: &[f64]) -> Result<Vec<f64>> {
        match self {
            ThetaMap::Affine { base, linear } => {
                let mut c = base.clone();
                for (k, row) in linear.iter().enumerate() {
                    if row.len() != theta.len() {
                        return Err(Error::WrongParameterCount {
                            expected: theta.len(),
                            got: row.len(),
                        });
                    }
                    for (i, w) in row.iter().enumerate() {
                        c[k] += w * theta[i];
                    }
                }
                Ok(c)
            }
            ThetaMap::Polynomial { base, terms } => {
                let mut c = base.clone();
                for term in terms {
                    if term.powers.len() != theta.len() {
                        return Err(Error::WrongParameterCount {
                            expected: theta.len(),
                            got: term.powers.len(),
                        });
                    }
                    if term.coeff_index >= c.len() {
                        return Err(Error::WrongParameterCount {
                            expected: c.len(),
                            got: term.coeff_index,
                        });
                    }
                    let mut mono = term.weight;
                    for (i, &p) in term.powers.iter().enumerate() {
                        for _ in 0..p {
                            mono *= theta[i];
                        }
                    }
                    c[term.coeff_index] += mono;
                }
                Ok(c)
            }
        }
    }
}

/// A model given by coefficients over the orthogonal traceless basis:
/// D_theta = I/n + sum_k c_k(theta) E_k, with finite-difference tangents.
pub fn coefficient_model(
    dim: usize,
    param_dim: usize,
    map: ThetaMap,
    floor: f64,
) -> Result<StatisticalModel> {
    let basis = gell_mann(dim)?;
    if map.coeff_count() != basis.len() {
        return Err(Error::WrongParameterCount { expected: basis.len(), got: map.coeff_count() });
    }
    StatisticalModel::from_closure(param_dim, move |theta: &[f64]| {
        let coeffs = map.evaluate(theta)?;
        let mut mat = ComplexMatrix::identity(dim).scale(1.0 / dim as f64);
        for (k, &c) in coeffs.iter().enumerate() {
            mat = mat.add(&basis.element(k).scale(c));
        }
        DensityMatrix::new(mat, floor)
    })
}

/// Seeded linear family D_theta = D0 + sum theta_i T_i with unit-norm
/// random tangent directions, for bound sweeps. Analytic mode installs the
/// exact tangents; otherwise they are recovered by finite differences.
pub fn random_model(
    seed: u64,
    dim: usize,
    param_dim: usize,
    analytic: bool,
) -> Result<StatisticalModel> {
    let mut rng = seeded_rng(seed);
    let base = random_density(dim, 1e-3, &mut rng)?;
    let mut tangents = Vec::with_capacity(param_dim);
    for _ in 0..param_dim {
        let t = random_tangent(dim, &mut rng);
        let norm = t.matrix().frobenius_norm();
        tangents.push(TangentVector::new(t.matrix().scale(1.0 / norm))?);
    }
    let base_mat = base.matrix().clone();
    let dirs: Vec<ComplexMatrix> = tangents.iter().map(|t| t.matrix().clone()).collect();
    let model = StatisticalModel::from_closure(param_dim, move |theta: &[f64]| {
        let mut mat = base_mat.clone();
        for (i, dir) in dirs.iter().enumerate() {
            mat = mat.add(&dir.scale(theta[i]));
        }
        // Only probed in a tiny neighborhood of the origin, so the base
        // floor minus the perturbation keeps a comfortable margin.
        DensityMatrix::new(mat, 1e-6)
    })?;
    if analytic {
        model.with_analytic_tangents(tangents)
    } else {
        Ok(model)
    }
}

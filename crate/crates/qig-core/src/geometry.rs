//! Riemannian machinery over the chart of invertible states: the metric
//! tensor field induced by a monotone function, scalar curvature by finite
//! differences of the metric, curvature scans along thermal curves, a
//! coarse-graining curvature probe, and the exponential-parametrization
//! duality check.
//!
//! Everything here works in the affine chart D(x) = I/n + sum x_k E_k over
//! the orthogonal traceless basis. Curvature needs second derivatives of
//! the metric, so stencil steps are much larger than the model-derivative
//! steps used elsewhere, and every report carries an explicit error gauge:
//! the difference between two step sizes is data, not something to hide.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // float intrinsics under no_std
use num_traits::Float as _;

use crate::channel::Channel;
use crate::matrix::{hermitian_eigen, ComplexMatrix, RealMatrix};
use crate::metric::MetricContext;
use crate::monotone::MonotoneFunction;
use crate::state::{gell_mann, gibbs_state, DensityMatrix, HermitianMatrix, TangentVector};
use crate::{tol, Error, Result};

/// Default coordinate step for curvature stencils.
pub const DEFAULT_CURVATURE_STEP: f64 = 1e-2;

/// Steps below this produce second differences dominated by roundoff, so
/// scan points whose safe step falls under it are skipped, not computed.
pub const MIN_CURVATURE_STEP: f64 = 1e-5;

/// Largest matrix dimension accepted for curvature. The 4-level chart has
/// 15 coordinates and costs about a thousand metric evaluations per
/// report; it exists for the coarse-graining probe, where a partial trace
/// needs a composite upstream system.
const MAX_CURVATURE_DIM: usize = 4;

/// Affine coordinates on the invertible states of a fixed dimension.
#[derive(Clone, Debug)]
pub struct Chart {
    n: usize,
    tangents: Vec<TangentVector>,
    /// Largest operator norm among the basis elements, used to convert
    /// coordinate radii into spectral perturbation bounds.
    max_op_norm: f64,
}

impl Chart {
    pub fn new(n: usize) -> Result<Self> {
        let basis = gell_mann(n)?;
        let mut tangents = Vec::with_capacity(basis.len());
        let mut max_op_norm = 0.0f64;
        for e in basis.elements() {
            let (eigs, _) = hermitian_eigen(e)?;
            for w in &eigs {
                max_op_norm = max_op_norm.max(w.abs());
            }
            tangents.push(TangentVector::new(e.clone())?);
        }
        Ok(Self { n, tangents, max_op_norm })
    }

    /// Matrix dimension n.
    pub fn matrix_dim(&self) -> usize {
        self.n
    }

    /// Coordinate dimension n^2 - 1.
    pub fn coord_dim(&self) -> usize {
        self.tangents.len()
    }

    pub fn basis_tangents(&self) -> &[TangentVector] {
        &self.tangents
    }

    /// D(x) = I/n + sum x_k E_k; fails when x leaves the positivity domain.
    pub fn to_state(&self, x: &[f64]) -> Result<DensityMatrix> {
        if x.len() != self.coord_dim() {
            return Err(Error::WrongParameterCount { expected: self.coord_dim(), got: x.len() });
        }
        let mut mat = ComplexMatrix::identity(self.n).scale(1.0 / self.n as f64);
        for (k, &c) in x.iter().enumerate() {
            if c != 0.0 {
                mat = mat.add(&self.tangents[k].matrix().scale(c));
            }
        }
        DensityMatrix::new(mat, tol::PD_FLOOR)
    }

    /// The coordinates of a state: x_k = 2 Re Tr(D E_k), inverting the
    /// affine map exactly.
    pub fn coords(&self, d: &DensityMatrix) -> Result<Vec<f64>> {
        if d.dim() != self.n {
            return Err(Error::DimensionMismatch { left: d.dim(), right: self.n });
        }
        Ok(self
            .tangents
            .iter()
            .map(|e| 2.0 * d.matrix().mul(e.matrix()).trace().re)
            .collect())
    }

    /// Shrinks the requested stencil step so the farthest stencil corner
    /// (displacement 2h along a basis direction) keeps 20% of the spectral
    /// margin in reserve.
    pub fn safe_step(&self, x: &[f64], requested: f64) -> Result<f64> {
        if !(requested > 0.0) || !requested.is_finite() {
            return Err(Error::ParameterOutOfRange { name: "h", value: requested });
        }
        let state = self.to_state(x)?;
        Ok(self.step_within_margin(state.eigenvalues()[0], requested))
    }

    /// Step sizing from a known smallest eigenvalue; zero when the state
    /// already sits at or below the positivity floor.
    fn step_within_margin(&self, lambda_min: f64, requested: f64) -> f64 {
        let margin = lambda_min - tol::PD_FLOOR;
        if margin <= 0.0 {
            return 0.0;
        }
        requested.min(0.4 * margin / self.max_op_norm)
    }
}

fn metric_unchecked(chart: &Chart, f: MonotoneFunction, x: &[f64]) -> Result<RealMatrix> {
    let ctx = MetricContext::new(chart.to_state(x)?, f)?;
    let d = chart.coord_dim();
    let mut g = RealMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let v = ctx.fisher_info(&chart.tangents[i], &chart.tangents[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// The metric tensor g_ij(x) over the chart basis, validated symmetric
/// positive definite.
pub fn metric_tensor(chart: &Chart, f: MonotoneFunction, x: &[f64]) -> Result<RealMatrix> {
    let g = metric_unchecked(chart, f, x)?;
    let min_eig = g.min_symmetric_eigenvalue()?;
    if min_eig <= 0.0 {
        return Err(Error::RankDeficient { min_eigenvalue: min_eig });
    }
    Ok(g)
}

/// Scalar curvature at one stencil step: Christoffel symbols of the first
/// kind from central differences of g, the covariant curvature tensor
/// from mixed second differences plus the Christoffel square, contracted
/// twice with the inverse metric.
fn scalar_at_step(chart: &Chart, f: MonotoneFunction, x: &[f64], h: f64) -> Result<f64> {
    let d = chart.coord_dim();
    let g0 = metric_unchecked(chart, f, x)?;
    let ginv = g0.inverse()?;

    let shifted = |offsets: &[(usize, f64)]| -> Result<RealMatrix> {
        let mut y = x.to_vec();
        for &(axis, delta) in offsets {
            y[axis] += delta;
        }
        metric_unchecked(chart, f, &y)
    };

    // First derivatives dg[k] = (g(x + h e_k) - g(x - h e_k)) / 2h.
    let mut dg = Vec::with_capacity(d);
    for k in 0..d {
        let plus = shifted(&[(k, h)])?;
        let minus = shifted(&[(k, -h)])?;
        dg.push(plus.sub(&minus).scale(0.5 / h));
    }

    // Second derivatives: pure ones on a +-2h stencil (matching the 2h
    // spacing of the mixed four-point stencil), mixed ones on corners.
    let mut hess: Vec<Vec<RealMatrix>> = vec![vec![RealMatrix::zeros(0, 0); d]; d];
    for k in 0..d {
        for l in k..d {
            let second = if k == l {
                let plus = shifted(&[(k, 2.0 * h)])?;
                let minus = shifted(&[(k, -2.0 * h)])?;
                plus.add(&minus).sub(&g0.scale(2.0)).scale(0.25 / (h * h))
            } else {
                let pp = shifted(&[(k, h), (l, h)])?;
                let pm = shifted(&[(k, h), (l, -h)])?;
                let mp = shifted(&[(k, -h), (l, h)])?;
                let mm = shifted(&[(k, -h), (l, -h)])?;
                pp.sub(&pm).sub(&mp).add(&mm).scale(0.25 / (h * h))
            };
            hess[l][k] = second.clone();
            hess[k][l] = second;
        }
    }

    // Christoffel symbols, first kind: Gamma_{n,kl} = (d_k g_ln + d_l g_kn
    // - d_n g_kl) / 2, and their contraction with the inverse metric.
    let mut gamma1 = Vec::with_capacity(d);
    for n in 0..d {
        gamma1.push(RealMatrix::from_fn(d, d, |k, l| {
            0.5 * (dg[k][(l, n)] + dg[l][(k, n)] - dg[n][(k, l)])
        }));
    }
    let mut gamma2 = Vec::with_capacity(d);
    for p in 0..d {
        gamma2.push(RealMatrix::from_fn(d, d, |k, l| {
            (0..d).map(|n| ginv[(p, n)] * gamma1[n][(k, l)]).sum()
        }));
    }

    // Scal = g^{il} g^{km} R_{iklm} with the covariant curvature
    //   R_{iklm} = (dd_kl g_im + dd_im g_kl - dd_km g_il - dd_il g_km) / 2
    //            + sum_p (G2[p]_kl G1[p]_im - G2[p]_km G1[p]_il),
    // oriented so spheres come out positive.
    let mut scal = 0.0;
    for i in 0..d {
        for k in 0..d {
            for l in 0..d {
                let gil = ginv[(i, l)];
                if gil == 0.0 {
                    continue;
                }
                for m in 0..d {
                    let second = 0.5
                        * (hess[k][l][(i, m)] + hess[i][m][(k, l)]
                            - hess[k][m][(i, l)]
                            - hess[i][l][(k, m)]);
                    let mut quad = 0.0;
                    for p in 0..d {
                        quad += gamma2[p][(k, l)] * gamma1[p][(i, m)]
                            - gamma2[p][(k, m)] * gamma1[p][(i, l)];
                    }
                    scal += gil * ginv[(k, m)] * (second + quad);
                }
            }
        }
    }
    Ok(scal)
}

/// Scalar curvature with an explicit accuracy account.
#[derive(Clone, Debug)]
pub struct CurvatureReport {
    pub point: Vec<f64>,
    /// The value computed at `fd_step`.
    pub scalar_curvature: f64,
    pub fd_step: f64,
    /// Extrapolation over the two step sizes {h, h/2}, canceling the
    /// leading h^2 truncation term.
    pub richardson_estimate: f64,
    /// |Scal(h) - Scal(h/2)|; reported, never hidden.
    pub error_gauge: f64,
}

/// Scalar curvature of the metric induced by `f` at chart point `x`,
/// evaluated at steps h and h/2 with Richardson extrapolation and an
/// error gauge. Limited to matrix dimensions 2 through 4.
pub fn scalar_curvature(
    chart: &Chart,
    f: MonotoneFunction,
    x: &[f64],
    h: f64,
) -> Result<CurvatureReport> {
    if chart.matrix_dim() < 2 || chart.matrix_dim() > MAX_CURVATURE_DIM {
        return Err(Error::UnsupportedDimension {
            dim: chart.matrix_dim(),
            min: 2,
            max: MAX_CURVATURE_DIM,
        });
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::ParameterOutOfRange { name: "h", value: h });
    }
    let coarse = scalar_at_step(chart, f, x, h)?;
    let fine = scalar_at_step(chart, f, x, 0.5 * h)?;
    Ok(CurvatureReport {
        point: x.to_vec(),
        scalar_curvature: coarse,
        fd_step: h,
        richardson_estimate: (4.0 * fine - coarse) / 3.0,
        error_gauge: (coarse - fine).abs(),
    })
}

/// One computed point of a thermal-curve scan.
#[derive(Clone, Debug)]
pub struct GibbsScanPoint {
    pub beta: f64,
    pub report: CurvatureReport,
}

/// A grid point whose safe stencil step collapsed below the roundoff
/// floor, left out of the scan rather than computed badly.
#[derive(Clone, Copy, Debug)]
pub struct GibbsScanSkip {
    pub beta: f64,
    pub safe_step: f64,
}

/// A monotonicity breach between adjacent computed points: the curvature
/// rose by more than both error gauges combined.
#[derive(Clone, Copy, Debug)]
pub struct GibbsScanViolation {
    pub beta_left: f64,
    pub beta_right: f64,
    pub scal_left: f64,
    pub scal_right: f64,
    /// Sum of the two error gauges, the rise tolerated as stencil noise.
    pub allowance: f64,
    /// How far beyond the allowance the rise went.
    pub excess: f64,
}

/// Full record of a curvature scan along a Gibbs curve.
#[derive(Clone, Debug)]
pub struct GibbsScanReport {
    pub points: Vec<GibbsScanPoint>,
    pub skipped: Vec<GibbsScanSkip>,
    pub violations: Vec<GibbsScanViolation>,
}

impl GibbsScanReport {
    /// Whether the sequence decreased within per-point error gauges. This
    /// is evidence about a conjecture, not a theorem check: a violation
    /// here is a finding to report, not an artifact defect.
    pub fn monotone_decreasing(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Scans the scalar curvature along beta -> exp(-beta H)/Tr exp(-beta H)
/// and reports whether it decreases within the stencil error gauges.
/// Points too close to the boundary for a trustworthy stencil are skipped
/// with notice, and rises inside the noise allowance are not violations:
/// finite-difference noise must never masquerade as a counterexample.
pub fn gibbs_scan(
    h0: &HermitianMatrix,
    f: MonotoneFunction,
    beta_grid: &[f64],
    h: f64,
) -> Result<GibbsScanReport> {
    if beta_grid.is_empty() {
        return Err(Error::Empty { what: "beta grid" });
    }
    if beta_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::GridNotAscending);
    }
    let chart = Chart::new(h0.dim())?;
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for &beta in beta_grid {
        let state = gibbs_state(h0, beta)?;
        let step = chart.step_within_margin(state.eigenvalues()[0], h);
        if step < MIN_CURVATURE_STEP {
            skipped.push(GibbsScanSkip { beta, safe_step: step });
            continue;
        }
        let x = chart.coords(&state)?;
        let report = scalar_curvature(&chart, f, &x, step)?;
        points.push(GibbsScanPoint { beta, report });
    }
    let mut violations = Vec::new();
    for pair in points.windows(2) {
        let (left, right) = (&pair[0], &pair[1]);
        let rise = right.report.richardson_estimate - left.report.richardson_estimate;
        let allowance = left.report.error_gauge + right.report.error_gauge;
        if rise > allowance {
            violations.push(GibbsScanViolation {
                beta_left: left.beta,
                beta_right: right.beta,
                scal_left: left.report.richardson_estimate,
                scal_right: right.report.richardson_estimate,
                allowance,
                excess: rise - allowance,
            });
        }
    }
    Ok(GibbsScanReport { points, skipped, violations })
}

/// Curvature on both sides of a coarse graining. The two values live on
/// manifolds of different dimensions when the channel changes the system
/// size; no cross-dimensional normalization is applied, the raw pair is
/// reported as is.
#[derive(Clone, Debug)]
pub struct CurvatureComparison {
    pub upstream: CurvatureReport,
    pub downstream: CurvatureReport,
    /// Status of the conjectured inequality (downstream at least as large
    /// as upstream) after discounting both error gauges.
    pub conjecture_holds: bool,
}

/// Evaluates the scalar curvature at a state and at its image under a
/// channel. Both footpoints must sit far enough inside their charts for a
/// trustworthy stencil; boundary proximity is an error here, not a skip.
pub fn coarse_graining_curvature_probe(
    d: &DensityMatrix,
    f: MonotoneFunction,
    ch: &Channel,
    h: f64,
) -> Result<CurvatureComparison> {
    if ch.in_dim() != d.dim() {
        return Err(Error::DimensionMismatch { left: ch.in_dim(), right: d.dim() });
    }
    let out_state = DensityMatrix::new(ch.apply(d.matrix())?, tol::PD_FLOOR)?;
    let chart_in = Chart::new(d.dim())?;
    let chart_out = Chart::new(out_state.dim())?;
    let x_in = chart_in.coords(d)?;
    let x_out = chart_out.coords(&out_state)?;
    let step_in = chart_in.safe_step(&x_in, h)?;
    let step_out = chart_out.safe_step(&x_out, h)?;
    if step_in < MIN_CURVATURE_STEP {
        return Err(Error::StencilOutsideDomain { step: step_in });
    }
    if step_out < MIN_CURVATURE_STEP {
        return Err(Error::StencilOutsideDomain { step: step_out });
    }
    let upstream = scalar_curvature(&chart_in, f, &x_in, step_in)?;
    let downstream = scalar_curvature(&chart_out, f, &x_out, step_out)?;
    let slack = upstream.error_gauge + downstream.error_gauge;
    let conjecture_holds =
        downstream.richardson_estimate >= upstream.richardson_estimate - slack;
    Ok(CurvatureComparison { upstream, downstream, conjecture_holds })
}

/// log Tr exp(M) for Hermitian M, shifted by the top eigenvalue so the
/// exponentials never overflow.
fn log_trace_exp(m: &ComplexMatrix) -> Result<f64> {
    let (eigs, _) = hermitian_eigen(m)?;
    let top = *eigs.last().expect("eigenvalue list is nonempty");
    let sum: f64 = eigs.iter().map(|w| (w - top).exp()).sum();
    Ok(top + sum.ln())
}

/// Both routes of the exponential-parametrization duality.
#[derive(Clone, Copy, Debug)]
pub struct DualityReport {
    /// Mixed second difference of (t, u) -> log Tr exp(H0 + t Bi + u Bj).
    pub hessian: f64,
    /// The logarithmic-mean covariance of the centered observables at the
    /// state exp(H0)/Tr exp(H0).
    pub km_variance: f64,
}

/// In the exponential parametrization the free-energy Hessian and the
/// logarithmic-mean covariance trade places; this evaluates both sides
/// independently, the first by finite differences of log Tr exp, the
/// second through the metric engine.
pub fn km_exponential_duality_check(
    h0: &HermitianMatrix,
    bi: &HermitianMatrix,
    bj: &HermitianMatrix,
    h: f64,
) -> Result<DualityReport> {
    if bi.dim() != h0.dim() || bj.dim() != h0.dim() {
        return Err(Error::DimensionMismatch { left: bi.dim().max(bj.dim()), right: h0.dim() });
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::ParameterOutOfRange { name: "h", value: h });
    }
    let psi = |t: f64, u: f64| -> Result<f64> {
        log_trace_exp(
            &h0.matrix()
                .add(&bi.matrix().scale(t))
                .add(&bj.matrix().scale(u)),
        )
    };
    let hessian = (psi(h, h)? - psi(h, -h)? - psi(-h, h)? + psi(-h, -h)?) / (4.0 * h * h);

    // gibbs_state(H, beta) normalizes exp(-beta H); beta = -1 gives exp(H0).
    let state = gibbs_state(h0, -1.0)?;
    let center = |b: &HermitianMatrix| -> Result<HermitianMatrix> {
        let mean = state.expectation(b.matrix());
        HermitianMatrix::new(
            b.matrix().sub(&ComplexMatrix::identity(state.dim()).scale(mean)),
        )
    };
    let ctx = MetricContext::new(state.clone(), MonotoneFunction::KuboMori)?;
    let km_variance = ctx.variance(&center(bi)?, &center(bj)?)?;
    Ok(DualityReport { hessian, km_variance })
}

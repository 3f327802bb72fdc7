//! Contrast functionals between pairs of states: the quasi-entropy family,
//! its alpha-parametrized closed form, finite-difference recovery of the
//! metric from a divergence, the bridge identity mapping contrast kernels
//! back to monotone functions, and the skew-information identity.

use alloc::boxed::Box;

use num_complex::Complex64;
#[allow(unused_imports)] // float intrinsics under no_std
use num_traits::Float as _;

use crate::matrix::ComplexMatrix;
use crate::metric::MetricContext;
use crate::monotone::MonotoneFunction;
use crate::state::{DensityMatrix, HermitianMatrix, TangentVector};
use crate::{tol, Error, Result};

/// Default step for the mixed-difference Hessian of a divergence; the h^2
/// truncation crosses the roundoff floor near 1e-5 relative error here.
pub const DEFAULT_HESSIAN_STEP: f64 = 1e-4;

/// Near t = 1 the bridge quotient loses significant digits to
/// cancellation: the denominator shrinks as (t-1)^2 while its rounding
/// floor stays at |F'(1)| eps, so the relative error grows like
/// eps / (t-1). A series branch takes over inside this window, where its
/// own truncation is below 1e-12.
const BRIDGE_SEAM: f64 = 1e-4;

enum KernelFamily {
    Alpha(f64),
    Custom(Box<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A contrast kernel F: R+ -> R with F(1) = 0, defining a divergence
/// through its action on the relative modular operator. The alpha family
/// is built in; custom kernels are accepted but their operator convexity
/// is taken on trust.
pub struct ContrastKernel {
    family: KernelFamily,
}

impl core::fmt::Debug for ContrastKernel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match &self.family {
            KernelFamily::Alpha(a) => write!(f, "ContrastKernel::alpha({a})"),
            KernelFamily::Custom(_) => write!(f, "ContrastKernel::custom"),
        }
    }
}

impl ContrastKernel {
    /// F(t) = 4/(1-a^2) (1 - t^((1+a)/2)) for a in (-1, 1).
    pub fn alpha(a: f64) -> Result<Self> {
        if !a.is_finite() || a.abs() >= 1.0 {
            return Err(Error::ParameterOutOfRange { name: "alpha", value: a });
        }
        Ok(Self { family: KernelFamily::Alpha(a) })
    }

    /// Wraps an arbitrary kernel. The contrast normalization F(1) = 0 is
    /// enforced; convexity is not verifiable here, so downstream results
    /// carry the `unverified_convexity` flag.
    pub fn custom<F>(f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let at_one = f(1.0);
        if at_one.abs() > 1e-12 {
            return Err(Error::KernelNotNormalized { value: at_one });
        }
        Ok(Self { family: KernelFamily::Custom(Box::new(f)) })
    }

    /// Whether the kernel's operator convexity had to be taken on trust.
    pub fn unverified_convexity(&self) -> bool {
        matches!(self.family, KernelFamily::Custom(_))
    }

    /// For the alpha family, the monotone-function parameter it bridges to.
    pub fn bridged_beta(&self) -> Option<f64> {
        match self.family {
            KernelFamily::Alpha(a) => Some(0.5 * (1.0 - a)),
            KernelFamily::Custom(_) => None,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonPositiveArgument { t });
        }
        match &self.family {
            KernelFamily::Alpha(a) => {
                let p = 0.5 * (1.0 + a);
                let c = 4.0 / (1.0 - a * a);
                // 1 - t^p through exp_m1 keeps full precision near t = 1,
                // which the bridge quotient depends on.
                Ok(-c * (p * t.ln()).exp_m1())
            }
            KernelFamily::Custom(f) => Ok(f(t)),
        }
    }

    /// F(t) + t F(1/t), the denominator of the bridge quotient. For the
    /// alpha family both terms come from a single log, sidestepping the
    /// reciprocal rounding that would otherwise dominate near t = 1.
    fn bridge_denominator(&self, t: f64) -> Result<f64> {
        match &self.family {
            KernelFamily::Alpha(a) => {
                let p = 0.5 * (1.0 + a);
                let c = 4.0 / (1.0 - a * a);
                let lt = t.ln();
                Ok(-c * ((p * lt).exp_m1() + t * (-p * lt).exp_m1()))
            }
            KernelFamily::Custom(_) => Ok(self.eval(t)? + t * self.eval(1.0 / t)?),
        }
    }

    /// F''(1), the curvature that normalizes the bridge at t = 1. Exact
    /// for the alpha family; a Richardson-refined central difference for
    /// custom kernels.
    fn curvature_at_one(&self) -> Result<f64> {
        match &self.family {
            KernelFamily::Alpha(_) => Ok(1.0),
            KernelFamily::Custom(_) => {
                let second = |d: f64| -> Result<f64> {
                    Ok((self.eval(1.0 + d)? + self.eval(1.0 - d)?) / (d * d))
                };
                let coarse = second(1e-3)?;
                let fine = second(5e-4)?;
                Ok((4.0 * fine - coarse) / 3.0)
            }
        }
    }
}

/// The divergence S_F(D1, D2): the kernel applied to the relative modular
/// operator, evaluated as a double spectral sum over both eigensystems
/// rather than by materializing the n^2-dimensional operator.
pub fn quasi_entropy(d1: &DensityMatrix, d2: &DensityMatrix, kernel: &ContrastKernel) -> Result<f64> {
    if d1.dim() != d2.dim() {
        return Err(Error::DimensionMismatch { left: d1.dim(), right: d2.dim() });
    }
    let lam = d1.eigenvalues();
    let mu = d2.eigenvalues();
    // Overlap[i][j] = <u_i | v_j> between the two eigenbases.
    let overlap = d2.eigenvectors().adjoint().mul(d1.eigenvectors());
    let mut total = 0.0;
    for i in 0..mu.len() {
        for j in 0..lam.len() {
            let weight = overlap[(i, j)].norm_sqr();
            if weight == 0.0 {
                continue;
            }
            total += kernel.eval(mu[i] / lam[j])? * lam[j] * weight;
        }
    }
    Ok(total)
}

/// The alpha-divergence in closed form:
/// 4/(1-a^2) Tr (I - D2^s D1^{-s}) D1 with s = (1+a)/2. The operator
/// product is not Hermitian before the trace; the trace itself must come
/// out real, and that realness is asserted rather than forced.
pub fn alpha_entropy(d1: &DensityMatrix, d2: &DensityMatrix, a: f64) -> Result<f64> {
    if d1.dim() != d2.dim() {
        return Err(Error::DimensionMismatch { left: d1.dim(), right: d2.dim() });
    }
    if !a.is_finite() || a.abs() >= 1.0 {
        return Err(Error::ParameterOutOfRange { name: "alpha", value: a });
    }
    let s = 0.5 * (1.0 + a);
    let inner = ComplexMatrix::identity(d1.dim()).sub(&d2.power(s).mul(&d1.power(-s)));
    let tr = inner.mul(d1.matrix()).trace();
    if tr.im.abs() > tol::REALNESS {
        return Err(Error::NotReal { imag: tr.im });
    }
    Ok(4.0 / (1.0 - a * a) * tr.re)
}

/// Recovers the metric from the divergence: the mixed second derivative of
/// S_alpha(D + tA, D + uB) at the origin, by a four-point central stencil.
/// The divergence is a decreasing function of alignment, so the raw mixed
/// difference carries a minus sign relative to the metric; the returned
/// value is oriented to match `fisher_info` under the bridged function.
///
/// When a stencil corner loses positivity the step is halved, up to five
/// times, before giving up.
pub fn hessian_recovery(
    d: &DensityMatrix,
    a_dir: &TangentVector,
    b_dir: &TangentVector,
    alpha: f64,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::ParameterOutOfRange { name: "h", value: h });
    }
    let n = d.dim();
    if a_dir.matrix().rows() != n || b_dir.matrix().rows() != n {
        return Err(Error::DimensionMismatch { left: a_dir.matrix().rows(), right: n });
    }
    let corner = |t: f64, u: f64, step: f64| -> Result<f64> {
        let d1 = DensityMatrix::new(
            d.matrix().add(&a_dir.matrix().scale(t * step)),
            tol::PD_FLOOR,
        )?;
        let d2 = DensityMatrix::new(
            d.matrix().add(&b_dir.matrix().scale(u * step)),
            tol::PD_FLOOR,
        )?;
        alpha_entropy(&d1, &d2, alpha)
    };
    let mut step = h;
    for _ in 0..=5 {
        let outcome = (|| -> Result<f64> {
            let pp = corner(1.0, 1.0, step)?;
            let pm = corner(1.0, -1.0, step)?;
            let mp = corner(-1.0, 1.0, step)?;
            let mm = corner(-1.0, -1.0, step)?;
            Ok(-(pp - pm - mp + mm) / (4.0 * step * step))
        })();
        match outcome {
            Ok(v) => return Ok(v),
            Err(Error::BelowFloor { .. }) => step *= 0.5,
            Err(e) => return Err(e),
        }
    }
    Err(Error::StencilOutsideDomain { step })
}

/// The bridge from contrast kernels to monotone functions:
/// f(t) = (t-1)^2 / (F(t) + t F(1/t)). For the alpha family this lands
/// exactly on the beta function with beta = (1-alpha)/2, constants
/// included. Inside the cancellation window around t = 1 a series branch
/// takes over: the exact beta series for the alpha family, the curvature
/// normalization for custom kernels.
pub fn ruskai_bridge(kernel: &ContrastKernel, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::NonPositiveArgument { t });
    }
    let s = t - 1.0;
    if s.abs() < BRIDGE_SEAM {
        return match kernel.bridged_beta() {
            Some(b) => {
                let quad = (b - b * b - 1.0) / 12.0;
                Ok(1.0 + 0.5 * s + quad * s * s)
            }
            None => Ok((1.0 + 0.5 * s) / kernel.curvature_at_one()?),
        };
    }
    let g = kernel.bridge_denominator(t)?;
    Ok(s * s / g)
}

/// Both sides of the skew-information identity.
#[derive(Clone, Copy, Debug)]
pub struct WydReport {
    /// Fisher information under the beta function at the tangent i[D, B].
    pub metric_side: f64,
    /// Tr([D^beta, B][B, D^(1-beta)]) / (beta (1 - beta)).
    pub commutator_side: f64,
}

/// Evaluates the metric along the commutator direction i[D, B] and the
/// closed commutator expression it equals. The constant here is
/// 1/(beta(1-beta)) with the [B, D^(1-beta)] ordering: the commuting-basis
/// expansion fixes both, and a factor -2 discrepancy in other printed
/// forms of the identity resolves against the metric side.
pub fn wyd_skew_check(d: &DensityMatrix, b: &HermitianMatrix, beta: f64) -> Result<WydReport> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::ParameterOutOfRange { name: "beta", value: beta });
    }
    if b.dim() != d.dim() {
        return Err(Error::DimensionMismatch { left: b.dim(), right: d.dim() });
    }
    let commutator = d.matrix().mul(b.matrix()).sub(&b.matrix().mul(d.matrix()));
    let tangent = TangentVector::from_hermitian_centered(
        &commutator.scale_complex(Complex64::new(0.0, 1.0)),
    )?;
    let ctx = MetricContext::new(d.clone(), MonotoneFunction::beta(beta)?)?;
    let metric_side = ctx.fisher_info(&tangent, &tangent)?;

    let d_b = d.power(beta);
    let d_cb = d.power(1.0 - beta);
    let left = d_b.mul(b.matrix()).sub(&b.matrix().mul(&d_b));
    let right = b.matrix().mul(&d_cb).sub(&d_cb.mul(b.matrix()));
    let tr = left.mul(&right).trace();
    if tr.im.abs() > tol::REALNESS {
        return Err(Error::NotReal { imag: tr.im });
    }
    let commutator_side = tr.re / (beta * (1.0 - beta));
    Ok(WydReport { metric_side, commutator_side })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Channel;
    use crate::state::{case_seed, random_density, random_hermitian, random_tangent, seeded_rng};

    const ALPHAS: [f64; 5] = [-0.6, -0.2, 0.0, 0.4, 0.8];

    fn diag(vals: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_fn(vals.len(), vals.len(), |i, j| {
            if i == j {
                Complex64::new(vals[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn contrast_vanishes_on_the_diagonal() {
        let mut rng = seeded_rng(61);
        let d = random_density(3, 1e-3, &mut rng).unwrap();
        for a in ALPHAS {
            let kernel = ContrastKernel::alpha(a).unwrap();
            assert!(quasi_entropy(&d, &d, &kernel).unwrap().abs() < 1e-12);
            assert!(alpha_entropy(&d, &d, a).unwrap().abs() < 1e-11);
        }
    }

    #[test]
    fn commuting_pair_collapses_to_classical_divergence() {
        let p = [0.5, 0.3, 0.2];
        let q = [0.25, 0.45, 0.3];
        let d1 = DensityMatrix::new(diag(&p), 1e-6).unwrap();
        let d2 = DensityMatrix::new(diag(&q), 1e-6).unwrap();
        let kernel = ContrastKernel::alpha(0.4).unwrap();
        let got = quasi_entropy(&d1, &d2, &kernel).unwrap();
        let want: f64 =
            (0..3).map(|j| p[j] * kernel.eval(q[j] / p[j]).unwrap()).sum();
        assert!((got - want).abs() < 1e-13, "{got} vs {want}");
    }

    #[test]
    fn hellinger_form_at_alpha_zero() {
        let p = [0.7, 0.3];
        let q = [0.4, 0.6];
        let d1 = DensityMatrix::new(diag(&p), 1e-6).unwrap();
        let d2 = DensityMatrix::new(diag(&q), 1e-6).unwrap();
        let got = alpha_entropy(&d1, &d2, 0.0).unwrap();
        let want = 4.0 * (1.0 - (0..2).map(|i| (p[i] * q[i]).sqrt()).sum::<f64>());
        assert!((got - want).abs() < 1e-13, "{got} vs {want}");
    }

    #[test]
    fn spectral_and_closed_forms_agree() {
        for case in 0..50u64 {
            let mut rng = seeded_rng(case_seed(6200, case));
            let n = 2 + (case % 3) as usize;
            let d1 = random_density(n, 1e-3, &mut rng).unwrap();
            let d2 = random_density(n, 1e-3, &mut rng).unwrap();
            let a = ALPHAS[(case % 5) as usize];
            let kernel = ContrastKernel::alpha(a).unwrap();
            let spectral = quasi_entropy(&d1, &d2, &kernel).unwrap();
            let closed = alpha_entropy(&d1, &d2, a).unwrap();
            assert!(
                (spectral - closed).abs() < tol::QUASI_VS_CLOSED * (1.0 + spectral.abs()),
                "case {case} alpha {a}: {spectral} vs {closed}"
            );
        }
    }

    #[test]
    fn contrast_is_positive_and_separating() {
        for case in 0..40u64 {
            let mut rng = seeded_rng(case_seed(6300, case));
            let n = 2 + (case % 3) as usize;
            let d1 = random_density(n, 1e-3, &mut rng).unwrap();
            let d2 = random_density(n, 1e-3, &mut rng).unwrap();
            let kernel = ContrastKernel::alpha(ALPHAS[(case % 5) as usize]).unwrap();
            let value = quasi_entropy(&d1, &d2, &kernel).unwrap();
            assert!(value >= 0.0, "case {case}: {value}");
            if value < 1e-12 {
                let dist = d1.matrix().sub(d2.matrix()).frobenius_norm();
                assert!(dist < 1e-6, "case {case}: tiny divergence but distance {dist}");
            }
        }
    }

    #[test]
    fn divergence_contracts_under_channels() {
        for case in 0..60u64 {
            let mut rng = seeded_rng(case_seed(6400, case));
            let n = 2 + (case % 3) as usize;
            let m = 2 + (case % 2) as usize;
            let d1 = random_density(n, 1e-4, &mut rng).unwrap();
            let d2 = random_density(n, 1e-4, &mut rng).unwrap();
            let a = ALPHAS[(case % 5) as usize];
            let kernel = ContrastKernel::alpha(a).unwrap();
            let mut ch = Channel::random(case_seed(6500, case), n, m, 2).unwrap();
            let mut out1 = DensityMatrix::new(ch.apply(d1.matrix()).unwrap(), tol::PD_FLOOR);
            let mut out2 = DensityMatrix::new(ch.apply(d2.matrix()).unwrap(), tol::PD_FLOOR);
            if out1.is_err() || out2.is_err() {
                ch = Channel::mixing(m, tol::CHANNEL_REFLOOR).unwrap().compose(&ch).unwrap();
                out1 = DensityMatrix::new(ch.apply(d1.matrix()).unwrap(), tol::PD_FLOOR);
                out2 = DensityMatrix::new(ch.apply(d2.matrix()).unwrap(), tol::PD_FLOOR);
            }
            let upstream = quasi_entropy(&d1, &d2, &kernel).unwrap();
            let downstream = quasi_entropy(&out1.unwrap(), &out2.unwrap(), &kernel).unwrap();
            assert!(
                downstream <= upstream + tol::DATA_PROCESSING * (1.0 + upstream),
                "case {case} alpha {a}: {downstream} > {upstream}"
            );
        }
    }

    #[test]
    fn hessian_recovers_the_metric() {
        let mut rng = seeded_rng(63);
        let d = random_density(3, 5e-2, &mut rng).unwrap();
        let a_dir = random_tangent(3, &mut rng);
        for alpha in ALPHAS {
            let beta = 0.5 * (1.0 - alpha);
            let ctx = MetricContext::new(d.clone(), MonotoneFunction::beta(beta).unwrap()).unwrap();
            let exact = ctx.fisher_info(&a_dir, &a_dir).unwrap();
            let got = hessian_recovery(&d, &a_dir, &a_dir, alpha, DEFAULT_HESSIAN_STEP).unwrap();
            let rel = (got - exact).abs() / exact.abs();
            assert!(rel < tol::HESSIAN_REL, "alpha {alpha}: rel error {rel}");
        }
    }

    #[test]
    fn hessian_truncation_shrinks_quadratically() {
        let mut rng = seeded_rng(64);
        let d = random_density(2, 0.1, &mut rng).unwrap();
        let a_dir = random_tangent(2, &mut rng);
        let b_dir = random_tangent(2, &mut rng);
        let alpha = 0.4;
        let beta = 0.5 * (1.0 - alpha);
        let ctx = MetricContext::new(d.clone(), MonotoneFunction::beta(beta).unwrap()).unwrap();
        let exact = ctx.fisher_info(&a_dir, &b_dir).unwrap();
        let err = |h: f64| -> f64 {
            (hessian_recovery(&d, &a_dir, &b_dir, alpha, h).unwrap() - exact).abs()
        };
        let e1 = err(1e-3);
        let e2 = err(5e-4);
        let e3 = err(2.5e-4);
        for ratio in [e1 / e2, e2 / e3] {
            assert!((3.5..=4.5).contains(&ratio), "ratios {} {}", e1 / e2, e2 / e3);
        }
    }

    #[test]
    fn hessian_is_bilinear_and_symmetric() {
        let mut rng = seeded_rng(65);
        let d = random_density(3, 5e-2, &mut rng).unwrap();
        let a_dir = random_tangent(3, &mut rng);
        let b_dir = random_tangent(3, &mut rng);
        let zero = TangentVector::new(ComplexMatrix::zeros(3, 3)).unwrap();
        let against_zero = hessian_recovery(&d, &a_dir, &zero, 0.2, 1e-4).unwrap();
        assert!(against_zero.abs() < 1e-8, "{against_zero}");
        // The two orderings differ only in their h^2 truncation constants,
        // so the comparison is relative to the common value.
        let ab = hessian_recovery(&d, &a_dir, &b_dir, 0.2, 1e-4).unwrap();
        let ba = hessian_recovery(&d, &b_dir, &a_dir, 0.2, 1e-4).unwrap();
        assert!((ab - ba).abs() < 1e-8 * (1.0 + ab.abs()), "{ab} vs {ba}");
    }

    #[test]
    fn hessian_shrinks_step_near_the_boundary_or_reports() {
        // Smallest eigenvalue 4e-4, tangent norm order 1, h = 1e-2: the
        // first few stencils lose positivity, then halving rescues it.
        let d = DensityMatrix::new(diag(&[0.9996, 4e-4]), 1e-10).unwrap();
        let b = TangentVector::new(diag(&[1.0, -1.0])).unwrap();
        let rescued = hessian_recovery(&d, &b, &b, 0.0, 1e-2);
        assert!(rescued.is_ok());
        // Spectrum floor 1e-7 cannot survive even the fully shrunk step.
        let tight = DensityMatrix::new(diag(&[0.9999999, 1e-7]), 1e-10).unwrap();
        assert!(matches!(
            hessian_recovery(&tight, &b, &b, 0.0, 1e-2),
            Err(Error::StencilOutsideDomain { .. })
        ));
    }

    #[test]
    fn bridge_reproduces_the_beta_function_on_a_grid() {
        for a in ALPHAS {
            let kernel = ContrastKernel::alpha(a).unwrap();
            let beta = 0.5 * (1.0 - a);
            let f = MonotoneFunction::beta(beta).unwrap();
            for k in 0..100 {
                let t = 10f64.powf(-2.0 + 4.0 * k as f64 / 99.0);
                let via_bridge = ruskai_bridge(&kernel, t).unwrap();
                let direct = f.eval(t).unwrap();
                assert!(
                    (via_bridge - direct).abs() < tol::BRIDGE * (1.0 + direct),
                    "alpha {a}, t {t}: {via_bridge} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn bridge_normalizes_at_one() {
        for a in ALPHAS {
            let kernel = ContrastKernel::alpha(a).unwrap();
            let beta = 0.5 * (1.0 - a);
            let f = MonotoneFunction::beta(beta).unwrap();
            assert_eq!(ruskai_bridge(&kernel, 1.0).unwrap(), 1.0);
            // Both branches track the target function at matching points
            // straddling the seam.
            for t in [1.0 - 2e-4, 1.0 - 0.5e-4, 1.0 + 0.5e-4, 1.0 + 2e-4] {
                let via_bridge = ruskai_bridge(&kernel, t).unwrap();
                let direct = f.eval(t).unwrap();
                assert!((via_bridge - direct).abs() < 1e-10, "alpha {a}, t {t}");
            }
        }
    }

    #[test]
    fn bridge_frozen_value_at_four() {
        // F(t) = 4(1 - sqrt t): F(4) = -4, F(1/4) = 2, so the quotient is
        // 9 / (-4 + 8) = 9/4.
        let kernel = ContrastKernel::alpha(0.0).unwrap();
        let got = ruskai_bridge(&kernel, 4.0).unwrap();
        assert!((got - 2.25).abs() < 1e-14, "{got}");
    }

    #[test]
    fn custom_kernel_matches_its_alpha_twin_and_is_flagged() {
        let kernel = ContrastKernel::custom(|t: f64| 4.0 * (1.0 - t.sqrt())).unwrap();
        assert!(kernel.unverified_convexity());
        assert!(kernel.bridged_beta().is_none());
        let twin = ContrastKernel::alpha(0.0).unwrap();
        assert!(!twin.unverified_convexity());
        let mut rng = seeded_rng(66);
        let d1 = random_density(3, 1e-3, &mut rng).unwrap();
        let d2 = random_density(3, 1e-3, &mut rng).unwrap();
        let via_custom = quasi_entropy(&d1, &d2, &kernel).unwrap();
        let via_alpha = quasi_entropy(&d1, &d2, &twin).unwrap();
        assert!((via_custom - via_alpha).abs() < 1e-12);
        // Custom seam branch estimates the curvature numerically.
        let at_one = ruskai_bridge(&kernel, 1.0).unwrap();
        assert!((at_one - 1.0).abs() < 1e-7, "{at_one}");
    }

    #[test]
    fn unnormalized_kernel_is_rejected() {
        assert!(matches!(
            ContrastKernel::custom(|t: f64| 1.0 - t.sqrt() + 0.5),
            Err(Error::KernelNotNormalized { .. })
        ));
        assert!(ContrastKernel::alpha(1.0).is_err());
        assert!(ContrastKernel::alpha(-1.0).is_err());
    }

    #[test]
    fn skew_identity_holds_for_seeded_qubits() {
        let mut rng = seeded_rng(67);
        for case in 0..20 {
            let d = random_density(2, 1e-3, &mut rng).unwrap();
            let b = random_hermitian(2, &mut rng);
            let report = wyd_skew_check(&d, &b, 0.5).unwrap();
            assert!(
                (report.metric_side - report.commutator_side).abs()
                    < 1e-10 * (1.0 + report.metric_side.abs()),
                "case {case}: {} vs {}",
                report.metric_side,
                report.commutator_side
            );
        }
    }

    #[test]
    fn skew_identity_across_dimensions_and_betas() {
        for case in 0..30u64 {
            let mut rng = seeded_rng(case_seed(6800, case));
            let n = 2 + (case % 3) as usize;
            let d = random_density(n, 1e-3, &mut rng).unwrap();
            let b = random_hermitian(n, &mut rng);
            let beta = [0.2, 0.35, 0.5, 0.65, 0.8][(case % 5) as usize];
            let report = wyd_skew_check(&d, &b, beta).unwrap();
            assert!(
                (report.metric_side - report.commutator_side).abs()
                    < tol::SKEW_INFORMATION * (1.0 + report.metric_side.abs()),
                "case {case} beta {beta}"
            );
            let mirrored = wyd_skew_check(&d, &b, 1.0 - beta).unwrap();
            assert!(
                (report.metric_side - mirrored.metric_side).abs()
                    < 1e-9 * (1.0 + report.metric_side.abs()),
                "case {case}: beta mirror"
            );
            assert!(
                (report.commutator_side - mirrored.commutator_side).abs()
                    < 1e-9 * (1.0 + report.commutator_side.abs()),
                "case {case}: beta mirror, commutator route"
            );
        }
    }

    #[test]
    fn commuting_observable_gives_zero_skew() {
        let d = DensityMatrix::new(diag(&[0.6, 0.3, 0.1]), 1e-6).unwrap();
        let b = HermitianMatrix::new(diag(&[2.0, -1.0, 0.5])).unwrap();
        let report = wyd_skew_check(&d, &b, 0.3).unwrap();
        assert!(report.metric_side.abs() < 1e-14);
        assert!(report.commutator_side.abs() < 1e-14);
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let mut rng = seeded_rng(69);
        let d2 = random_density(2, 1e-3, &mut rng).unwrap();
        let d3 = random_density(3, 1e-3, &mut rng).unwrap();
        let kernel = ContrastKernel::alpha(0.0).unwrap();
        assert!(quasi_entropy(&d2, &d3, &kernel).is_err());
        assert!(alpha_entropy(&d2, &d3, 0.0).is_err());
        let b = random_hermitian(3, &mut rng);
        assert!(wyd_skew_check(&d2, &b, 0.5).is_err());
    }
}

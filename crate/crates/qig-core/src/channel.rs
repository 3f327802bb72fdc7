//! Completely positive trace-preserving maps (coarse grainings) in Kraus
//! form, and the monotonicity probes that check the data-processing
//! inequalities for Fisher information and generalized variance.
//!
//! A probe never weakens the inequality it checks: when a channel output
//! lands below the positivity floor, the probe composes the channel with a
//! tiny depolarizing map and reruns. The composite is itself a coarse
//! graining, so the contract still applies exactly; the outcome records that
//! the adjustment happened.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // float intrinsics under no_std
use num_traits::Float as _;

use crate::matrix::{hermitian_eigen, ComplexMatrix};
use crate::metric::MetricContext;
use crate::monotone::MonotoneFunction;
use crate::state::{random_unitary, seeded_rng, DensityMatrix, HermitianMatrix, TangentVector};
use crate::{tol, Error, Result};

/// A completely positive trace-preserving map between matrix algebras,
/// stored as its Kraus operators (each out_dim x in_dim).
#[derive(Clone, Debug)]
pub struct Channel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl Channel {
    /// Validates shape consistency and trace preservation
    /// (sum of K^dag K = identity within tolerance).
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::Empty { what: "kraus operators" })?;
        let out_dim = first.rows();
        let in_dim = first.cols();
        for k in &kraus {
            if k.rows() != out_dim || k.cols() != in_dim {
                return Err(Error::DimensionMismatch { left: k.rows(), right: out_dim });
            }
        }
        let mut sum = ComplexMatrix::zeros(in_dim, in_dim);
        for k in &kraus {
            sum = sum.add(&k.adjoint().mul(k));
        }
        let defect = sum.sub(&ComplexMatrix::identity(in_dim)).max_abs();
        if defect > tol::UNITARITY {
            return Err(Error::NotTracePreserving { defect });
        }
        Ok(Self { in_dim, out_dim, kraus })
    }

    pub fn identity(n: usize) -> Self {
        Self { in_dim: n, out_dim: n, kraus: vec![ComplexMatrix::identity(n)] }
    }

    /// Conjugation by a unitary: a single Kraus operator.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::NotSquare { rows: u.rows(), cols: u.cols() });
        }
        let n = u.rows();
        let defect = u.adjoint().mul(&u).sub(&ComplexMatrix::identity(n)).max_abs();
        if defect > tol::UNITARITY {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Self { in_dim: n, out_dim: n, kraus: vec![u] })
    }

    /// The depolarizing mix X -> (1 - eps) X + eps Tr(X) I/n, realized by
    /// the Kraus set { sqrt(1-eps) I } plus { sqrt(eps/n) |i><j| } over all
    /// matrix units. At eps = 1 this is the full contraction to I/n.
    pub fn mixing(n: usize, eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::ParameterOutOfRange { name: "eps", value: eps });
        }
        if n == 0 {
            return Err(Error::Empty { what: "dimension" });
        }
        let mut kraus = Vec::with_capacity(n * n + 1);
        if eps < 1.0 {
            kraus.push(ComplexMatrix::identity(n).scale((1.0 - eps).sqrt()));
        }
        if eps > 0.0 {
            let w = (eps / n as f64).sqrt();
            for i in 0..n {
                for j in 0..n {
                    let mut k = ComplexMatrix::zeros(n, n);
                    k[(i, j)] = Complex64::new(w, 0.0);
                    kraus.push(k);
                }
            }
        }
        Self::new(kraus)
    }

    /// Traces out the second tensor factor: maps operators on
    /// C^keep (x) C^drop to operators on C^keep.
    pub fn partial_trace(keep_dim: usize, drop_dim: usize) -> Result<Self> {
        if keep_dim == 0 || drop_dim == 0 {
            return Err(Error::Empty { what: "tensor factor" });
        }
        let in_dim = keep_dim * drop_dim;
        let mut kraus = Vec::with_capacity(drop_dim);
        for k in 0..drop_dim {
            // (I (x) <k|): row a picks column a * drop_dim + k.
            let mut m = ComplexMatrix::zeros(keep_dim, in_dim);
            for a in 0..keep_dim {
                m[(a, a * drop_dim + k)] = Complex64::new(1.0, 0.0);
            }
            kraus.push(m);
        }
        Self::new(kraus)
    }

    /// Seeded random channel from a Haar-distributed Stinespring isometry
    /// V: C^in -> C^out (x) C^env; the Kraus operators are its environment
    /// slices. env_dim = 1 degenerates to a random unitary conjugation.
    pub fn random(seed: u64, in_dim: usize, out_dim: usize, env_dim: usize) -> Result<Self> {
        if env_dim == 0 || in_dim == 0 || out_dim == 0 {
            return Err(Error::Empty { what: "dimension" });
        }
        let total = out_dim * env_dim;
        if total < in_dim {
            return Err(Error::InfeasibleIsometry { in_dim, out_dim, env_dim });
        }
        let mut rng = seeded_rng(seed);
        let u = random_unitary(total, &mut rng)?;
        let mut kraus = Vec::with_capacity(env_dim);
        for k in 0..env_dim {
            let m = ComplexMatrix::from_fn(out_dim, in_dim, |a, j| u[(a * env_dim + k, j)]);
            kraus.push(m);
        }
        Self::new(kraus)
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    fn check_in(&self, x: &ComplexMatrix) -> Result<()> {
        if x.rows() != self.in_dim || x.cols() != self.in_dim {
            return Err(Error::DimensionMismatch { left: x.rows(), right: self.in_dim });
        }
        Ok(())
    }

    /// Applies the channel: sum of K X K^dag.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_in(x)?;
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out = out.add(&k.mul(x).mul(&k.adjoint()));
        }
        Ok(out)
    }

    /// Applies the Hilbert-Schmidt adjoint: sum of K^dag Y K. Unital by
    /// trace preservation of the channel itself.
    pub fn adjoint_apply(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        if y.rows() != self.out_dim || y.cols() != self.out_dim {
            return Err(Error::DimensionMismatch { left: y.rows(), right: self.out_dim });
        }
        let mut out = ComplexMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            out = out.add(&k.adjoint().mul(y).mul(k));
        }
        Ok(out)
    }

    /// The composite self after `inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Channel) -> Result<Channel> {
        if inner.out_dim != self.in_dim {
            return Err(Error::DimensionMismatch { left: inner.out_dim, right: self.in_dim });
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * inner.kraus.len());
        for a in &self.kraus {
            for b in &inner.kraus {
                kraus.push(a.mul(b));
            }
        }
        Channel::new(kraus)
    }
}

/// Outcome of a single monotonicity probe.
#[derive(Clone, Copy, Debug)]
pub struct MonotonicityProbe {
    /// Value on the input side of the inequality.
    pub upstream: f64,
    /// Value on the output side.
    pub downstream: f64,
    /// The inequality slack, oriented so the contract is margin >= 0 up to
    /// numerical tolerance.
    pub margin: f64,
    /// Whether the channel had to be composed with a depolarizing refloor
    /// before its output was a faithful state.
    pub refloored: bool,
}

/// Pushes `d` through the channel and, if the output spectrum dips below
/// the library floor, retries with the depolarizing refloor composed on.
/// Returns the effective channel, the output state, and the refloor flag.
fn effective_channel_output(
    d: &DensityMatrix,
    ch: &Channel,
) -> Result<(Channel, DensityMatrix, bool)> {
    let raw = ch.apply(d.matrix())?;
    match DensityMatrix::new(raw, tol::PD_FLOOR) {
        Ok(out) => Ok((ch.clone(), out, false)),
        Err(Error::BelowFloor { .. }) => {
            let refloored = Channel::mixing(ch.out_dim(), tol::CHANNEL_REFLOOR)?.compose(ch)?;
            let out = DensityMatrix::new(refloored.apply(d.matrix())?, tol::PD_FLOOR)?;
            Ok((refloored, out, true))
        }
        Err(e) => Err(e),
    }
}

/// Checks that Fisher information contracts under the channel:
/// upstream F_D(A) >= downstream F_{ch(D)}(ch(A)).
pub fn probe_fisher_monotonicity(
    d: &DensityMatrix,
    a: &TangentVector,
    f: MonotoneFunction,
    ch: &Channel,
) -> Result<MonotonicityProbe> {
    if ch.in_dim() != d.dim() {
        return Err(Error::DimensionMismatch { left: ch.in_dim(), right: d.dim() });
    }
    let upstream = MetricContext::new(d.clone(), f)?.fisher_info(a, a)?;
    let (eff, out_state, refloored) = effective_channel_output(d, ch)?;
    let out_tangent = TangentVector::from_hermitian_centered(&eff.apply(a.matrix())?)?;
    let downstream = MetricContext::new(out_state, f)?.fisher_info(&out_tangent, &out_tangent)?;
    Ok(MonotonicityProbe { upstream, downstream, margin: upstream - downstream, refloored })
}

/// Checks that generalized variance expands under the adjoint:
/// downstream phi_{ch(D)}[A, A] >= upstream phi_D[ch*(A), ch*(A)],
/// for an observable A on the output system.
pub fn probe_variance_monotonicity(
    d: &DensityMatrix,
    a: &HermitianMatrix,
    f: MonotoneFunction,
    ch: &Channel,
) -> Result<MonotonicityProbe> {
    if ch.in_dim() != d.dim() {
        return Err(Error::DimensionMismatch { left: ch.in_dim(), right: d.dim() });
    }
    if a.dim() != ch.out_dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: ch.out_dim() });
    }
    let (eff, out_state, refloored) = effective_channel_output(d, ch)?;
    let pulled = HermitianMatrix::new(eff.adjoint_apply(a.matrix())?)?;
    let upstream = MetricContext::new(d.clone(), f)?.variance(&pulled, &pulled)?;
    let downstream = MetricContext::new(out_state, f)?.variance(a, a)?;
    Ok(MonotonicityProbe { upstream, downstream, margin: downstream - upstream, refloored })
}

/// Matrix-unit representation of a superoperator taking n x n inputs to
/// m x m outputs: entry (a, b) is Tr(B_a^dag S(B_b)) over matrix units.
fn vectorize<S>(in_dim: usize, out_dim: usize, mut op: S) -> Result<ComplexMatrix>
where
    S: FnMut(&ComplexMatrix) -> Result<ComplexMatrix>,
{
    let mut rep = ComplexMatrix::zeros(out_dim * out_dim, in_dim * in_dim);
    for bj in 0..in_dim {
        for bk in 0..in_dim {
            let mut unit = ComplexMatrix::zeros(in_dim, in_dim);
            unit[(bj, bk)] = Complex64::new(1.0, 0.0);
            let image = op(&unit)?;
            for ai in 0..out_dim {
                for ak in 0..out_dim {
                    // Tr(|ai><ak|^dag X) = X[ai, ak].
                    rep[(ai * out_dim + ak, bj * in_dim + bk)] = image[(ai, ak)];
                }
            }
        }
    }
    Ok(rep)
}

/// Transcribes the operator form of metric monotonicity,
/// J_{ch(D)} - ch J_D ch^*, as an n^2-dimensional Hermitian form and
/// returns its smallest eigenvalue (the contract is >= -1e-8). Limited to
/// small dimensions; the matrices grow as the fourth power.
pub fn superoperator_monotonicity_gap(
    d: &DensityMatrix,
    f: MonotoneFunction,
    ch: &Channel,
) -> Result<f64> {
    if ch.in_dim() != d.dim() {
        return Err(Error::DimensionMismatch { left: ch.in_dim(), right: d.dim() });
    }
    if d.dim() > 3 || ch.out_dim() > 3 {
        return Err(Error::UnsupportedDimension {
            dim: d.dim().max(ch.out_dim()),
            min: 2,
            max: 3,
        });
    }
    let (eff, out_state, _) = effective_channel_output(d, ch)?;
    let in_ctx = MetricContext::new(d.clone(), f)?;
    let out_ctx = MetricContext::new(out_state, f)?;
    let n = d.dim();
    let m = eff.out_dim();
    let j_in = vectorize(n, n, |x| in_ctx.apply_j(x))?;
    let j_out = vectorize(m, m, |x| out_ctx.apply_j(x))?;
    let ch_rep = vectorize(n, m, |x| eff.apply(x))?;
    let pushed = ch_rep.mul(&j_in).mul(&ch_rep.adjoint());
    let gap = j_out.sub(&pushed);
    let (eigs, _) = hermitian_eigen(&gap)?;
    Ok(eigs[0])
}

//! Numeric tolerances used by constructors, contracts, and the acceptance
//! suite.
//!
//! Every threshold in the crate is defined here once, with its rationale, so
//! test code never carries ad-hoc magic numbers. Two families appear:
//!
//! * structural tolerances (Hermiticity, traces, unitarity) sized a few
//!   decades above f64 rounding so exact identities stay exact through
//!   a handful of O(n^3) operations;
//! * method tolerances (quadrature, finite differences) sized by the
//!   truncation error of the scheme, not by machine precision.

/// Hermiticity defect allowed by [`crate::state::HermitianMatrix`]:
/// max |a_ij - conj(a_ji)|. Inputs are expected to be exactly Hermitian up to
/// serialization rounding; 1e-12 leaves four decades over f64 epsilon.
pub const HERMITICITY: f64 = 1e-12;

/// Imaginary part allowed in the trace of a Hermitian matrix.
pub const REAL_TRACE: f64 = 1e-12;

/// |Tr D - 1| allowed by the density-matrix constructor.
pub const UNIT_TRACE: f64 = 1e-12;

/// |Tr A| allowed by the tangent-vector constructor.
pub const TRACELESS: f64 = 1e-12;

/// Default positivity floor: density matrices must have every eigenvalue at
/// or above this. The library works on faithful (strictly positive) states;
/// the floor keeps `1/lambda` and `log lambda` finite in every code path.
pub const PD_FLOOR: f64 = 1e-10;

/// Frobenius defect of U^dag U - I allowed for cached eigenvector matrices.
/// Jacobi rotations are each exactly unitary up to rounding; a few hundred of
/// them accumulate to ~1e-13 at dim 8, so 1e-10 is comfortable.
pub const UNITARITY: f64 = 1e-10;

/// Frobenius residual of U diag(lambda) U^dag against the input matrix.
pub const RECONSTRUCTION: f64 = 1e-10;

/// Orthonormality defect allowed in a traceless basis: |Tr E_i E_j - d_ij/2|.
pub const BASIS_GRAM: f64 = 1e-12;

/// f(1) = 1 and the symmetry |f(t) - t f(1/t)| on the test grid. Both are
/// algebraic identities of the catalog; 1e-12 absorbs `powf` rounding at the
/// grid extremes.
pub const FUNCTION_SYMMETRY: f64 = 1e-12;

/// Slack allowed when checking the envelope 2t/(1+t) <= f(t) <= (1+t)/2,
/// which the extreme functions meet with equality.
pub const ENVELOPE_SLACK: f64 = 1e-12;

/// Relative agreement required between `f_beta` as beta -> 0 and the
/// Kubo-Mori function (a limit taken numerically, so looser).
pub const BETA_LIMIT_REL: f64 = 1e-4;

/// Most negative eigenvalue tolerated when checking matrix monotonicity
/// 0 < A <= B implies f(A) <= f(B) on sampled pairs.
pub const MATRIX_MONOTONE: f64 = 1e-9;

/// Round-trip defect ||J^{-1}(J(A)) - A||_F allowed by the metric engine.
pub const ROUND_TRIP: f64 = 1e-10;

/// Absolute Frobenius tolerance for the closed-form collapses of the extreme
/// metrics (J for min, J^{-1} for max) against their multiplier route.
pub const SPECIAL_CASE_COLLAPSE: f64 = 1e-10;

/// Relative tolerance for the commuting-case collapse to Tr D^{-1} A^2.
pub const COMMUTING_COLLAPSE_REL: f64 = 1e-11;

/// Relative agreement between spectral-multiplier values and their integral
/// representations (Kubo-Mori resolvent/power integrals, SLD exponential
/// integral). Limited by quadrature truncation, not rounding.
pub const INTEGRAL_ORACLE_REL: f64 = 1e-8;

/// Unitary covariance of the metric: |gamma_{UDU*}(UAU*,UBU*) - gamma_D(A,B)|.
pub const UNITARY_COVARIANCE: f64 = 1e-10;

/// Most negative monotonicity margin tolerated in channel sweeps:
/// F_D(A) - F_{a(D)}(a(A)) >= -MONOTONICITY_MARGIN.
pub const MONOTONICITY_MARGIN: f64 = 1e-9;

/// Most negative eigenvalue tolerated for the superoperator gap
/// J_{a(D)} - a J_D a^dag on the doubled space (n^2 x n^2 Hermitian form).
pub const SUPEROPERATOR_GAP: f64 = 1e-8;

/// Mixing weight used to re-floor a channel output that fell below the
/// positivity floor: the channel is composed with a depolarizing channel of
/// this weight, which keeps the comparison a genuine coarse graining.
pub const CHANNEL_REFLOOR: f64 = 1e-9;

/// |Tr of a model tangent| allowed before the statistical family is
/// declared non-trace-preserving. Finite differences of unit-trace states
/// keep the drift near machine epsilon divided by the step.
pub const FAMILY_TRACE_DRIFT: f64 = 1e-10;

/// |Tr D A| allowed for a centered estimator.
pub const CENTERING: f64 = 1e-9;

/// Local unbiasedness defect |d/dt Tr D_t A - 1| beyond which a scalar
/// estimator is rejected (finite-difference tangents limit this to ~1e-7,
/// so 1e-6 is the contract).
pub const UNBIASEDNESS: f64 = 1e-6;

/// Calibration defect max |Tr(dD_i A_j) - delta_ij| allowed for a bank.
pub const CALIBRATION: f64 = 1e-7;

/// |slack| of the optimal scalar estimator, and the most negative slack or
/// gap eigenvalue tolerated in Cramer-Rao checks.
pub const CR_SLACK: f64 = 1e-9;

/// Absolute agreement between the spectral quasi-entropy sum and the
/// alpha-entropy closed form.
pub const QUASI_VS_CLOSED: f64 = 1e-10;

/// Imaginary part tolerated when evaluating the alpha-entropy closed form
/// exactly as written (the product inside the trace is not Hermitian).
pub const REALNESS: f64 = 1e-10;

/// Relative agreement of the contrast-Hessian finite difference with the
/// metric at step 1e-4 (truncation O(h^2) ~ 1e-8, plus cancellation noise).
pub const HESSIAN_REL: f64 = 1e-5;

/// Agreement between the kernel-to-function bridge and `f_beta`.
pub const BRIDGE: f64 = 1e-10;

/// Agreement between the two routes of the skew-information identity.
pub const SKEW_INFORMATION: f64 = 1e-9;

/// Slack allowed in the divergence data-processing inequality.
pub const DATA_PROCESSING: f64 = 1e-9;

/// Relative agreement between the log-partition Hessian and the Kubo-Mori
/// variance of centered observables at finite-difference step 1e-4.
pub const EXPONENTIAL_DUALITY_REL: f64 = 1e-5;

/// |Scal - 6| allowed for the qubit SLD-metric curvature gate (the manifold
/// is a round unit 3-sphere; Richardson-extrapolated stencils land ~1e-7).
pub const CURVATURE_GATE: f64 = 1e-3;

/// Scalar-curvature agreement between isometric presentations of a state.
pub const ISOMETRY_INVARIANCE: f64 = 1e-6;

/// Radial metric component against 1/(1-r^2), which no catalog function may
/// move (the radial direction commutes with the state).
pub const RADIAL_UNIVERSALITY: f64 = 1e-10;

/// Agreement of the Bloch radial/tangential split with direct metric values.
pub const BLOCH_SPLIT: f64 = 1e-10;

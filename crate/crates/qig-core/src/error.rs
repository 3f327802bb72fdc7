use thiserror::Error;

/// Errors produced by constructors and numeric routines.
///
/// Constructors never repair invalid input: a matrix that is not Hermitian
/// within tolerance, a state with a trace away from one, or an eigenvalue
/// below the positivity floor is rejected with the measured defect so the
/// caller can see how far off it was.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {dim} not supported here (allowed {min}..={max})")]
    UnsupportedDimension { dim: usize, min: usize, max: usize },

    #[error("dimension {dim} too small here (need at least {min})")]
    DimensionTooSmall { dim: usize, min: usize },

    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("trace has nonzero imaginary part: {defect:e}")]
    TraceNotReal { defect: f64 },

    #[error("trace is {trace}, expected 1 within tolerance")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not traceless: trace = {trace:e}")]
    NotTraceless { trace: f64 },

    #[error("eigenvalue {eigenvalue:e} below positivity floor {floor:e}")]
    BelowFloor { eigenvalue: f64, floor: f64 },

    #[error("eigenvector matrix not unitary: defect {defect:e}")]
    NotUnitary { defect: f64 },

    #[error("spectral reconstruction residual {residual:e} exceeds tolerance")]
    ReconstructionFailed { residual: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off:e})")]
    EigenDidNotConverge { sweeps: usize, off: f64 },

    #[error("matrix is singular or numerically rank deficient (pivot {pivot:e})")]
    Singular { pivot: f64 },

    #[error("positivity floor {floor} infeasible for dimension {dim} (must be < 1/dim)")]
    InfeasibleFloor { floor: f64, dim: usize },

    #[error("function argument must be positive and finite, got {t}")]
    NonPositiveArgument { t: f64 },

    #[error("parameter {name} = {value} outside its valid range")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("cannot parse function spec {spec:?} (expected min | max | beta:<b> | km)")]
    UnknownFunctionSpec { spec: alloc::string::String },

    #[error("Kraus operators do not sum to identity: defect {defect:e}")]
    NotTracePreserving { defect: f64 },

    #[error("channel needs out_dim * env_dim >= in_dim, got {out_dim}x{env_dim} < {in_dim}")]
    InfeasibleIsometry { in_dim: usize, out_dim: usize, env_dim: usize },

    #[error("quadrature did not reach tolerance: error estimate {estimate:e}")]
    QuadratureDidNotConverge { estimate: f64 },

    #[error("estimator not centered: |Tr D A| = {defect:e}")]
    NotCentered { defect: f64 },

    #[error("local unbiasedness violated: defect {defect:e}")]
    UnbiasednessViolated { defect: f64 },

    #[error("estimator calibration failed: max |Tr(dD_i A_j) - delta_ij| = {defect:e}")]
    CalibrationFailed { defect: f64 },

    #[error("Fisher matrix is rank deficient: min eigenvalue {min_eigenvalue:e}")]
    RankDeficient { min_eigenvalue: f64 },

    #[error("contrast kernel must vanish at 1, got F(1) = {value:e}")]
    KernelNotNormalized { value: f64 },

    #[error("expression expected to be real has imaginary part {imag:e}")]
    NotReal { imag: f64 },

    #[error("finite-difference stencil left the positivity domain (step {step:e})")]
    StencilOutsideDomain { step: f64 },

    #[error("coordinate ball of radius {radius:e} around the point leaves the positivity domain")]
    DomainViolation { radius: f64 },

    #[error("grid must be strictly ascending")]
    GridNotAscending,

    #[error("model has {expected} parameters, got {got}")]
    WrongParameterCount { expected: usize, got: usize },

    #[error("empty input: {what}")]
    Empty { what: &'static str },
}

pub type Result<T> = core::result::Result<T, Error>;

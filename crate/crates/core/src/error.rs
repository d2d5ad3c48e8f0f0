use thiserror::Error;

/// Crate-wide error type. Analysis entry points refuse disconnected input;
/// solvers report non-convergence instead of returning garbage.
#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for graph with {len} vertices")]
    VertexOutOfRange { vertex: usize, len: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is empty")]
    EmptyGraph,
    #[error("subdivision factor must be at least 1")]
    ZeroSubdivision,
    #[error("vector length {got} does not match vertex count {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("zero denominator in Rayleigh quotient")]
    ZeroDenominator,
    #[error("supports overlap at vertex {0}")]
    OverlappingSupports(usize),
    #[error("dense solver refused: {size} vertices exceeds cap {cap}")]
    DenseCapExceeded { size: usize, cap: usize },
    #[error("eigensolver did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("nodes must be strictly increasing")]
    NodesNotIncreasing,
    #[error("piecewise description is empty or inconsistent")]
    BadPiecewise,
    #[error("diameter {diam} is below the certificate threshold (needs k >= 2)")]
    DiameterBelowThreshold { diam: usize },
    #[error("volume hypothesis violated: vol {vol} > {limit:.3}")]
    VolumeHypothesis { vol: usize, limit: f64 },
    #[error("interval ratio {ratio:.6} exceeds the certified bound {bound:.6} at root {root}")]
    IntervalRatioExceeded { ratio: f64, bound: f64, root: usize },
    #[error("n must be even and at least 4 for a 3-regular graph, got {0}")]
    BadRegularOrder(usize),
    #[error("vertex {vertex} has degree {degree}; this operation needs degrees in [2, 3]")]
    DegreeOutOfRange { vertex: usize, degree: usize },
    #[error("construction would have {vertices} vertices, over the cap {cap}")]
    GraphTooLarge { vertices: u128, cap: u128 },
    #[error("configuration-model sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),
    #[error("expander certification failed: lambda1 {lambda1:.6} < eps {eps:.6} after {attempts} attempts")]
    CertificationFailed { lambda1: f64, eps: f64, attempts: usize },
    #[error("goodify exceeded the round cap {0}")]
    GoodifyRoundCap(usize),
    #[error("density has jump {jump} at {t} after goodify; expected magnitude <= {good}")]
    BadJump { jump: i64, t: f64, good: i64 },
    #[error("width profile needs R >= 2, got {0}")]
    ProfileTooShort(usize),
    #[error("cycle lengths {a} and {b} violate the ratio cap 3")]
    AnnulusRatio { a: usize, b: usize },
    #[error("boundary cycle must be a triangle, got length {0}")]
    BoundaryNotTriangle(usize),
    #[error("triangulation failed validation: {0}")]
    InvalidTriangulation(String),
    #[error("density is not good: jump {jump} at {t} exceeds {good}")]
    DensityNotGood { jump: i64, t: f64, good: i64 },
    #[error("sigma invariant violated after smoothing: {0}")]
    SigmaInvariant(String),
    #[error("grid step must satisfy 0 < h <= 1/4, got {0}")]
    BadGridStep(f64),
    #[error("total-variation distance increased at step {0}; numerical fault")]
    TvIncrease(usize),
    #[error("worst_exact policy refused: {size} vertices exceeds cap {cap}")]
    WalkCapExceeded { size: usize, cap: usize },
    #[error("need at least {need} family members, got {got}")]
    TooFewMembers { need: usize, got: usize },
    #[error("mixing did not reach the threshold within {0} steps")]
    MixingStalled(usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

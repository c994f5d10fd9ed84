use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Error)]
pub enum CwtError {
    /// Scale parameters must be strictly positive and finite.
    #[error("invalid scale a = {0}; scales must be finite and > 0")]
    InvalidScale(f64),

    /// The wavelet components have a simple pole at xi = 0.
    #[error("component evaluation at xi = 0 (simple pole)")]
    SingularArgument,

    /// Closed forms are sign-discontinuous where omega*a + modulation = 0.
    #[error("harmonic closed form evaluated on the band threshold (omega*a + {modulation} = 0 at a = {a})")]
    OnThreshold { modulation: f64, a: f64 },

    /// Closed-form line data must stay within a single sign branch.
    #[error("segment crosses the sign threshold of the closed form near a = {a}")]
    BranchCrossing { a: f64 },

    /// The target is not determined by the supplied line data.
    #[error("target (a = {a}, b = {b}) lies outside the determinacy triangle")]
    OutOfDeterminacy { a: f64, b: f64 },

    /// The truncation window misses the sampled signal entirely.
    #[error("quadrature window [{lo}, {hi}] does not intersect the sample range")]
    InsufficientSupport { lo: f64, hi: f64 },

    /// The operation needs a sampled signal.
    #[error("{0}")]
    UnsupportedInput(&'static str),

    /// Paired line data must come from one and the same segment.
    #[error("line data sets were built over different segments")]
    InconsistentLineData,

    /// Field comparisons need identical axes.
    #[error("field axes differ: {0}")]
    ShapeMismatch(String),

    /// propagate_simplified needs slope k = 2n and an on-intercept target.
    #[error("simplified propagation inapplicable: {0}")]
    SimplificationInapplicable(String),

    /// Configuration or argument validation failure.
    #[error("invalid {what}: {why}")]
    InvalidInput { what: &'static str, why: String },

    /// A grid or line-data node failed; carries the node context.
    #[error("evaluation failed at node {index} (a = {a}, b = {b}): {source}")]
    AtNode {
        index: usize,
        a: f64,
        b: f64,
        #[source]
        source: Box<CwtError>,
    },

    /// Malformed row in a CSV input.
    #[error("{path}:{line}: {why}")]
    Format {
        path: String,
        line: usize,
        why: String,
    },

    /// Sampled-signal CSV rows must be uniformly spaced in t.
    #[error("{path}:{line}: non-uniform sample spacing (step {step}, expected {expected})")]
    NonUniformSpacing {
        path: String,
        line: usize,
        step: f64,
        expected: f64,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CwtError>;

impl CwtError {
    pub(crate) fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        CwtError::InvalidInput {
            what,
            why: why.into(),
        }
    }
}

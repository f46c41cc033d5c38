use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("generator index {index} out of range for {rank} generators")]
    UnknownGenerator { index: usize, rank: usize },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("ball would exceed the vertex cap of {cap} vertices")]
    VertexCapExceeded { cap: usize },

    #[error("radius {radius} exceeds the cap {cap} for generic presentations")]
    RadiusCapExceeded { radius: usize, cap: usize },

    #[error("vertex `{0}` is not in the ball")]
    NotInBall(String),

    #[error("empty subset: {0}")]
    EmptySubset(String),

    #[error("coset `{0}` does not meet the ball")]
    CosetOutsideBall(String),

    #[error("coset `{0}` has no elements deeper than the model depth")]
    NoDeepElements(String),

    #[error("closed set {index} is a singleton, which is not an element of C_c^0")]
    SingletonSet { index: usize },

    #[error("boundary model mismatch: depth {left} vs {right}")]
    ModelMismatch { left: usize, right: usize },

    #[error("invalid annulus: {0}")]
    InvalidAnnulus(String),

    #[error("map is not a bijection: {0}")]
    NotBijective(String),

    #[error("K = {k} too small at vertex `{vertex}`: {found} members meet N_K, need more than {needed}")]
    KTooSmall {
        k: u32,
        vertex: String,
        found: usize,
        needed: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("deformation parameter q = {0} must be real, positive and different from 1")]
    InvalidQ(f64),

    #[error("alpha = {0} lies in the non-unitary range [-1, 0]; use alpha > 0 (type I) or alpha < -1 (type II)")]
    NonUnitaryRange(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operator is not parity-homogeneous")]
    Parity,

    #[error("site index {site} out of range for a chain of length {len}")]
    Index { site: usize, len: usize },

    #[error("bond ({len}, 1) requested on an open chain of length {len}")]
    Boundary { len: usize },

    #[error("singular fusion: |[{label}]_q| = {value:e} is below the floor {floor:e}")]
    SingularFusion {
        label: &'static str,
        value: f64,
        floor: f64,
    },

    #[error("generator E^{0}_{1} is not modelled")]
    UnsupportedGenerator(usize, usize),

    #[error("labels alpha = {0} and beta = {1} belong to different unitarity classes")]
    MixedClass(f64, f64),

    #[error("chain length {len} outside the supported range {min}..={max}")]
    Size { len: usize, min: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

//! Numerics on the cone of positive semidefinite matrices with zeros at the
//! non-edges of a pattern graph: Gram factors, the perturbation-space
//! extremality test, splittings into extremal pieces, and the block-form
//! constructions for the `K_2` and `K_3` classes.

mod field;
mod gram;
mod k2;
mod k3;
mod matrix;
mod normalize;
mod perturb;
mod random;
mod subspace;
mod text;
mod tol;

pub use field::{Field, FieldTag};
pub use gram::{gram_factor, GramFactor};
pub use k2::{k2_split, K2Split, SignaturePair};
pub use k3::{k3_perturbation, k3_rank_one_perturbation, K3Perturbation};
pub use matrix::PatternMatrix;
pub use normalize::{normalize, BlockForm, CBlock};
pub use perturb::{
    analyze_factor, analyze_factor_at, coords_from_hermitian, decompose_extremal, hermitian_dim, hermitian_from_coords, is_extremal,
    perturbation_space, perturbation_space_at, split_factor, split_step, ExtremalityReport, ExtremalitySummary, PerturbationSpace, Summand,
};
pub use random::{random_extremal, random_psd, sequential_factor, ExtremalClass, RandomExtremal, MAX_ATTEMPTS};
pub use subspace::{
    intersect, random_unitary, subspace_split_2d, SplitCertificate, SplitExit, SplitResiduals, TwoDecompositionProblem,
};
pub use text::{parse_matrix, write_complex, write_real, AnyMatrix};
pub use tol::Tolerance;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not Hermitian at ({i}, {j}): residual {residual:.3e}")]
    NotHermitian { i: usize, j: usize, residual: f64 },
    #[error("entry ({i}, {j}) is {value:.3e} but ({i}, {j}) is not an edge of the pattern")]
    PatternViolation { i: usize, j: usize, value: f64 },
    #[error("matrix is indefinite: smallest eigenvalue {lambda_min:.3e} below {threshold:.3e}")]
    Indefinite { lambda_min: f64, threshold: f64 },
    #[error("the zero matrix has no extremality verdict")]
    ZeroMatrix,
    #[error("matrix is extremal; there is no splitting direction")]
    AlreadyExtremal,
    #[error("pattern does not match the decomposition: {0}")]
    PatternMismatch(String),
    #[error("C not unitary: |C*C - I| = {residual:.3e}")]
    NotUnitary { residual: f64 },
    #[error("dimension {0} is odd")]
    OddDimension(usize),
    #[error("invalid dimension: {0}")]
    Dimension(String),
    #[error("no certified extremal found after {attempts} attempts")]
    SearchFailed { attempts: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

//! Exact scalars and linear algebra.

pub mod linalg;
pub mod poly;
pub mod scalar;

use thiserror::Error;

pub use linalg::{
    dense_to_sparse, image_basis, kernel_basis, quotient_basis, rank, solve, sparse_axpy, sparse_kernel,
    sparse_quotient, sparse_rank, sparse_scale, sparse_solve, sparse_to_dense, ColumnSolver, Matrix, SparseAccumulator,
    SparseVec,
};
pub use poly::Poly;
pub use scalar::{Field, RatFunc, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("zero has no multiplicative order")]
    ZeroInput,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("field {0} has no indeterminate")]
    NoIndeterminate(Field),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("subspace is not contained in the ambient space")]
    NotASubspace,
}

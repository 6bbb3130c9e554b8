//! Products and brackets: the diagonal and cup product on the twisted
//! complex, the box map `φ`, twisted cups, circles and brackets on orbit
//! Hochschild cohomology, their combination on decomposed classes, the
//! homotopy circle product, and the classical Gerstenhaber operations.

mod classical;
mod cup;
mod decomposed;
mod homotopy;
mod orbit;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::grading::GradingError;
use crate::hochschild::HochschildError;
use crate::kernel::KernelError;

pub use classical::{classical_bracket, classical_circle, classical_cup, Shuffle};
pub use cup::{box_product, TwistedProduct};
pub use decomposed::{DecomposedBlock, DecomposedClass, PureTensor, TwistedStructure};
pub use orbit::{OrbitAlgebra, OrbitCochain, Side};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("complex mismatch: {0}")]
    ComplexMismatch(String),
    #[error("class is not in the image of the decomposition map")]
    NotInImage,
    #[error("the algebra has no unit among its basis vectors")]
    UnitNotBasis,
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

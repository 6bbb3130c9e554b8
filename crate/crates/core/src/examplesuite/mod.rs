//! Named constructions and end-to-end verifications: quantum complete
//! intersections (two factors and iterated), the 2-periodic resolution of
//! `Λ(m)`, and skew group algebras.

mod periodic;
mod product;
mod qci;
mod report;
mod skew;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{iterated_twisted_tensor, twisted_tensor_algebra, AlgebraError, GradedAlgebra, PairwiseTwists};
use crate::grading::{Bicharacter, GradingError};
use crate::hochschild::{Cochain, HochschildError};
use crate::kernel::{Field, KernelError, Scalar, SparseVec};
use crate::structure::StructureError;

pub use periodic::{case_table, periodic_hh, PeriodicHh, TableCase};
pub use product::{BlockDim, ProductCohomology};
pub use qci::{
    degeneracy_check, dimension_identity, generic_q_values, iterated_association_reports, multiplicative_relation, verify_qci2,
    verify_qci_iterated, Association, DegeneracyReport,
};
pub use report::{Check, NamedClass, QciReport, TableEntry};
pub use skew::{group_algebra_hh, verify_skew, SkewReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExampleError {
    #[error("exponent {0} is below 2")]
    BadExponent(usize),
    #[error("expected {expected} q-values, got {got}")]
    BadQValues { expected: usize, got: usize },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("unsupported field configuration: {0}")]
    UnsupportedFieldConfiguration(String),
    #[error("the group action is not diagonalizable over the field")]
    NotDiagonalizable,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// `Λ_q(m_1, …, m_k)`: exponents and the `q_{ij}` for `i < j` in
/// lexicographic order `(1,2), (1,3), …, (2,3), …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QciSpec {
    pub exponents: Vec<usize>,
    pub field: Field,
    pub q_values: Vec<Scalar>,
}

impl QciSpec {
    pub fn new(exponents: Vec<usize>, field: Field, q_values: Vec<Scalar>) -> Result<Self, ExampleError> {
        let spec = QciSpec { exponents, field, q_values };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ExampleError> {
        if let Some(&m) = self.exponents.iter().find(|&&m| m < 2) {
            return Err(ExampleError::BadExponent(m));
        }
        let k = self.exponents.len();
        let expected = k * k.saturating_sub(1) / 2;
        if self.q_values.len() != expected {
            return Err(ExampleError::BadQValues { expected, got: self.q_values.len() });
        }
        for q in &self.q_values {
            if q.field() != self.field {
                return Err(KernelError::FieldMismatch { left: q.field(), right: self.field }.into());
            }
            if q.is_zero() {
                return Err(KernelError::DivisionByZero.into());
            }
        }
        Ok(())
    }

    /// `q_{ij}` for `i < j`, zero-based.
    pub fn q(&self, i: usize, j: usize) -> &Scalar {
        let k = self.exponents.len();
        let offset: usize = (0..i).map(|r| k - 1 - r).sum();
        &self.q_values[offset + j - i - 1]
    }

    /// The factors `Λ(m_i)` in variables `x1, x2, …`.
    pub fn factors(&self) -> Result<Vec<Arc<GradedAlgebra>>, ExampleError> {
        self.exponents
            .iter()
            .enumerate()
            .map(|(i, &m)| Ok(Arc::new(truncated_polynomial_named(m, self.field, &variable(self.exponents.len(), i))?)))
            .collect()
    }

    /// The twist `t_{ij}(a, b) = q_{ij}^{ab}` for `i < j`.
    pub fn twist(&self, i: usize, j: usize) -> Result<Bicharacter, ExampleError> {
        Ok(Bicharacter::diagonal_power(1, self.q(i, j).clone())?)
    }
}

fn variable(k: usize, i: usize) -> String {
    match (k, i) {
        (2, 0) => "x".into(),
        (2, 1) => "y".into(),
        _ => format!("x{}", i + 1),
    }
}

fn truncated_polynomial_named(m: usize, field: Field, var: &str) -> Result<GradedAlgebra, ExampleError> {
    if m < 2 {
        return Err(ExampleError::BadExponent(m));
    }
    Ok(GradedAlgebra::truncated_polynomial(m, field, var)?)
}

/// `k[x]/(x^m)` with `deg x = 1`.
pub fn truncated_polynomial(m: usize, field: Field) -> Result<GradedAlgebra, ExampleError> {
    truncated_polynomial_named(m, field, "x")
}

/// `Λ_q(m_1, …, m_k)`, graded by `ℤ^k`.
pub fn qci(spec: &QciSpec) -> Result<GradedAlgebra, ExampleError> {
    spec.validate()?;
    let factors = spec.factors()?;
    if factors.len() == 1 {
        return Ok((*factors[0]).clone());
    }
    if factors.len() == 2 {
        return Ok(twisted_tensor_algebra(&factors[0], &factors[1], &spec.twist(0, 1)?)?);
    }
    let mut twists = PairwiseTwists::new();
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            twists.insert(i, j, spec.twist(i, j)?);
        }
    }
    Ok(iterated_twisted_tensor(&factors, &twists)?)
}

/// A 0-cochain with the single value `v`.
pub fn constant_cochain(v: SparseVec) -> Cochain {
    let mut c = Cochain::zero(0);
    if !v.is_empty() {
        c.values.insert(0, v);
    }
    c
}

/// The derivation `u ↦ ⟨w, deg u⟩ u` of a `ℤ^r`-graded algebra with a
/// homogeneous basis, as a 1-cochain.
pub fn euler_cochain(algebra: &GradedAlgebra, weights: &[i64]) -> Cochain {
    let field = algebra.field();
    let mut c = Cochain::zero(1);
    for u in 0..algebra.dim() {
        let w: i64 = algebra.degree(u).coords().iter().zip(weights).map(|(d, w)| d * w).sum();
        let s = field.from_i64(w);
        if !s.is_zero() {
            c.values.insert(u, vec![(u, s)]);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_polynomials_validate() {
        for m in 2..=6 {
            let a = truncated_polynomial(m, Field::Rationals).unwrap();
            a.validate().unwrap();
            assert_eq!(a.dim(), m);
        }
        let a = truncated_polynomial(4, Field::Rationals).unwrap();
        assert!(a.product(2, 3).is_empty());
        assert_eq!(truncated_polynomial(1, Field::Rationals).unwrap_err(), ExampleError::BadExponent(1));
    }

    #[test]
    fn qci_presentations() {
        let field = Field::RationalFunctions;
        let q = field.indeterminate().unwrap();
        let a = qci(&QciSpec::new(vec![2, 2], field, vec![q.clone()]).unwrap()).unwrap();
        assert_eq!(a.dim(), 4);
        // basis x^i y^j at index 2i + j
        let (x, y) = (2, 1);
        assert_eq!(a.product(y, x), &vec![(3, q)]);
        assert_eq!(a.product(x, y), &vec![(3, field.one())]);
        assert!(a.product(x, x).is_empty() && a.product(y, y).is_empty());

        let one = Field::Rationals.one();
        let c = qci(&QciSpec::new(vec![2, 3], Field::Rationals, vec![one]).unwrap()).unwrap();
        for i in 0..c.dim() {
            for j in 0..c.dim() {
                assert_eq!(c.product(i, j), c.product(j, i));
            }
        }

        let f5 = Field::prime(5).unwrap();
        let two = f5.from_i64(2);
        let spec = QciSpec::new(vec![2, 2, 2], f5, vec![two.clone(), two.clone(), two.clone()]).unwrap();
        let a = qci(&spec).unwrap();
        a.validate().unwrap();
        let gen = |i: usize| 1usize << (2 - i);
        for i in 0..3 {
            for j in i + 1..3 {
                let (xi, xj) = (gen(i), gen(j));
                assert_eq!(a.product(xj, xi), &vec![(xi + xj, two.clone())]);
                assert_eq!(a.product(xi, xj), &vec![(xi + xj, f5.one())]);
            }
        }
    }

    #[test]
    fn spec_validation() {
        let f = Field::Rationals;
        assert!(matches!(QciSpec::new(vec![2, 2], f, vec![]), Err(ExampleError::BadQValues { .. })));
        assert!(QciSpec::new(vec![2, 2], f, vec![f.zero()]).is_err());
        let s = QciSpec::new(vec![2, 2, 2], f, vec![f.from_i64(2), f.from_i64(3), f.from_i64(5)]).unwrap();
        assert_eq!(s.q(0, 2), &f.from_i64(3));
        assert_eq!(s.q(1, 2), &f.from_i64(5));
    }
}

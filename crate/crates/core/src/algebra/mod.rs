//! Finite-dimensional graded algebras, bimodules, automorphisms and the
//! twisted tensor product constructions built from them.

mod bimodule;
mod group;
pub(crate) mod twisted;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::grading::{GradingError, GradingGroup, GroupElement};
use crate::kernel::{Field, KernelError, Scalar, SparseAccumulator, SparseVec};

pub use bimodule::{character_automorphism, character_automorphism_left, AlgebraAutomorphism, GradedBimodule};
pub use group::{eigenspace_grading, group_algebra, skew_group_algebra, EigenspaceGrading, FiniteGroupAction};
pub use twisted::{iterated_twisted_tensor, twisted_tensor_algebra, twisted_tensor_bimodule, PairwiseTwists};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit fails on basis element {0}")]
    UnitFails(usize),
    #[error("product of basis elements {0} and {1} leaves their degree")]
    GradingViolation(usize, usize),
    #[error("unit is not homogeneous of degree zero")]
    UnitNotDegreeZero,
    #[error("bimodule axiom fails: {0}")]
    ModuleAxiom(String),
    #[error("action is not homogeneous: {0}")]
    ActionNotGraded(String),
    #[error("not an algebra automorphism: {0}")]
    NotAutomorphism(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("malformed data: {0}")]
    BadShape(String),
    #[error("group generator {generator} does not act diagonalizably over the field")]
    NotDiagonalizable { generator: usize },
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    field: Field,
    group: GradingGroup,
    names: Vec<String>,
    degrees: Vec<GroupElement>,
    unit: SparseVec,
    mult: Vec<SparseVec>,
}

impl GradedAlgebra {
    /// `mult[i * dim + j]` is the product `u_i u_j`. Fails unless every
    /// algebra axiom holds on the basis.
    pub fn new(
        field: Field,
        group: GradingGroup,
        names: Vec<String>,
        degrees: Vec<GroupElement>,
        unit: SparseVec,
        mult: Vec<SparseVec>,
    ) -> Result<Self, AlgebraError> {
        let a = Self::from_parts(field, group, names, degrees, unit, mult)?;
        a.validate()?;
        Ok(a)
    }

    /// Shape checks only; [`validate`](Self::validate) is left to the caller.
    pub fn from_parts(
        field: Field,
        group: GradingGroup,
        names: Vec<String>,
        degrees: Vec<GroupElement>,
        unit: SparseVec,
        mult: Vec<SparseVec>,
    ) -> Result<Self, AlgebraError> {
        let dim = degrees.len();
        if names.len() != dim || mult.len() != dim * dim {
            return Err(AlgebraError::BadShape(format!(
                "{} names, {} degrees, {} products",
                names.len(),
                dim,
                mult.len()
            )));
        }
        for d in &degrees {
            if !group.contains(d) {
                return Err(GradingError::GroupMismatch(format!("degree {d} not in {group}")).into());
            }
        }
        for v in mult.iter().chain(std::iter::once(&unit)) {
            for (k, x) in v {
                if *k >= dim {
                    return Err(AlgebraError::BadShape(format!("basis index {k} out of range")));
                }
                if x.field() != field {
                    return Err(KernelError::FieldMismatch { left: field, right: x.field() }.into());
                }
            }
        }
        Ok(GradedAlgebra { field, group, names, degrees, unit, mult })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> &GroupElement {
        &self.degrees[i]
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    /// Index of the unit when it is a basis vector.
    pub fn unit_index(&self) -> Option<usize> {
        match self.unit.as_slice() {
            [(k, c)] if c.is_one() => Some(*k),
            _ => None,
        }
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i * self.dim() + j]
    }

    pub fn structure_constants(&self) -> &[SparseVec] {
        &self.mult
    }

    pub fn multiply(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = SparseAccumulator::new();
        for (i, a) in x {
            for (j, b) in y {
                acc.add_scaled(&(a * b), self.product(*i, *j));
            }
        }
        acc.finish()
    }

    pub fn basis_vector(&self, i: usize) -> SparseVec {
        vec![(i, self.field.one())]
    }

    /// Basis indices grouped by degree.
    pub fn components(&self) -> BTreeMap<GroupElement, Vec<usize>> {
        let mut out: BTreeMap<GroupElement, Vec<usize>> = BTreeMap::new();
        for (i, d) in self.degrees.iter().enumerate() {
            out.entry(d.clone()).or_default().push(i);
        }
        out
    }

    /// Same basis size and identical multiplication and unit.
    pub fn same_structure(&self, other: &GradedAlgebra) -> bool {
        self.dim() == other.dim() && self.mult == other.mult && self.unit == other.unit
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        let dim = self.dim();
        let zero = self.group.zero();
        if self.unit.iter().any(|(k, _)| self.degrees[*k] != zero) {
            return Err(AlgebraError::UnitNotDegreeZero);
        }
        for i in 0..dim {
            for j in 0..dim {
                let d = self.group.add(&self.degrees[i], &self.degrees[j]);
                if self.product(i, j).iter().any(|(k, _)| self.degrees[*k] != d) {
                    return Err(AlgebraError::GradingViolation(i, j));
                }
            }
        }
        for i in 0..dim {
            let e = self.basis_vector(i);
            if self.multiply(&self.unit, &e) != e || self.multiply(&e, &self.unit) != e {
                return Err(AlgebraError::UnitFails(i));
            }
        }
        let bad = (0..dim).into_par_iter().find_map_first(|i| {
            for j in 0..dim {
                let ij = self.product(i, j);
                for k in 0..dim {
                    let left = self.multiply(ij, &self.basis_vector(k));
                    let right = self.multiply(&self.basis_vector(i), self.product(j, k));
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        match bad {
            Some((i, j, k)) => Err(AlgebraError::NotAssociative(i, j, k)),
            None => Ok(()),
        }
    }

    /// `k[x]/(x^m)` with `deg x = 1`, basis `1, x, ..., x^{m-1}` named with `var`.
    pub fn truncated_polynomial(m: usize, field: Field, var: &str) -> Result<Self, AlgebraError> {
        if m < 1 {
            return Err(AlgebraError::BadShape("truncation exponent must be positive".into()));
        }
        let group = GradingGroup::integers();
        let names = (0..m)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            })
            .collect();
        let degrees = (0..m).map(|i| group.element(&[i as i64]).expect("rank one")).collect();
        let mut mult = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                mult.push(if i + j < m { vec![(i + j, field.one())] } else { Vec::new() });
            }
        }
        Self::from_parts(field, group, names, degrees, vec![(0, field.one())], mult)
    }

    /// Rewrite in a new basis: column `j` of `basis` holds the old coordinates
    /// of the new `j`-th basis vector.
    pub fn change_basis(
        &self,
        basis: &[SparseVec],
        names: Vec<String>,
        group: GradingGroup,
        degrees: Vec<GroupElement>,
    ) -> Result<Self, AlgebraError> {
        let n = basis.len();
        if n != self.dim() {
            return Err(AlgebraError::BadShape(format!("{n} basis vectors for a {}-dimensional algebra", self.dim())));
        }
        let solver = crate::kernel::linalg::ColumnSolver::new(self.field, basis);
        let express = |v: &SparseVec| -> Result<SparseVec, AlgebraError> {
            solver.solve(v).ok_or_else(|| AlgebraError::BadShape("new basis does not span".into()))
        };
        if solver.rank() != n {
            return Err(AlgebraError::BadShape("new basis is linearly dependent".into()));
        }
        let mut mult = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                mult.push(express(&self.multiply(&basis[i], &basis[j]))?);
            }
        }
        let unit = express(&self.unit)?;
        Self::from_parts(self.field, group, names, degrees, unit, mult)
    }

    pub fn element_to_string(&self, v: &SparseVec) -> String {
        format_combination(v, &self.names)
    }
}

impl fmt::Display for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graded algebra over {} of dimension {} graded by {}", self.field, self.dim(), self.group)
    }
}

pub(crate) fn format_combination(v: &SparseVec, names: &[String]) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = v
        .iter()
        .map(|(k, c)| {
            if c.is_one() {
                names[*k].clone()
            } else {
                let s = c.to_string();
                if s.contains(['+', '-']) && !(s.starts_with('-') && !s[1..].contains(['+', '-'])) {
                    format!("({s})*{}", names[*k])
                } else {
                    format!("{s}*{}", names[*k])
                }
            }
        })
        .collect();
    terms.join(" + ")
}

/// `x ↦ c·x` convenience for building structure constants in tests and constructors.
pub(crate) fn scaled(v: &SparseVec, c: &Scalar) -> SparseVec {
    crate::kernel::sparse_scale(v, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_polynomial_is_an_algebra() {
        for m in 1..=6 {
            let a = GradedAlgebra::truncated_polynomial(m, Field::Rationals, "x").unwrap();
            assert_eq!(a.dim(), m);
            a.validate().unwrap();
        }
        let a = GradedAlgebra::truncated_polynomial(4, Field::Rationals, "x").unwrap();
        assert!(a.product(2, 3).is_empty());
        assert_eq!(a.product(1, 2), &vec![(3, Field::Rationals.one())]);
    }

    #[test]
    fn grading_violation_is_reported() {
        let f = Field::Rationals;
        let g = GradingGroup::integers();
        let degrees = vec![g.zero(), g.element(&[1]).unwrap()];
        let one = f.one();
        let mult = vec![vec![(0, one.clone())], vec![(1, one.clone())], vec![(1, one.clone())], vec![(0, one.clone())]];
        let err = GradedAlgebra::new(f, g, vec!["1".into(), "x".into()], degrees, vec![(0, one)], mult).unwrap_err();
        assert_eq!(err, AlgebraError::GradingViolation(1, 1));
    }

    #[test]
    fn non_associative_is_reported() {
        // ungraded 3-dimensional algebra with e1*e1 = e2, e2*e1 = e1, everything else from the unit
        let f = Field::Rationals;
        let g = GradingGroup::trivial();
        let one = f.one();
        let e = |k: usize| vec![(k, one.clone())];
        let mut mult = vec![Vec::new(); 9];
        for k in 0..3 {
            mult[k] = e(k);
            mult[k * 3] = e(k);
        }
        mult[4] = e(2);
        mult[7] = e(1);
        let names = vec!["1".into(), "a".into(), "b".into()];
        let err = GradedAlgebra::new(f, g.clone(), names, vec![g.zero(); 3], e(0), mult).unwrap_err();
        assert!(matches!(err, AlgebraError::NotAssociative(..)));
    }
}

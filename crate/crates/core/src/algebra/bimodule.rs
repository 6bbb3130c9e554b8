use std::sync::Arc;

use crate::grading::{Bicharacter, GradingError, GroupElement};
use crate::kernel::{rank, Matrix, SparseAccumulator, SparseVec};

use super::{AlgebraError, GradedAlgebra};

/// Graded automorphism given by its matrix: column `j` is the image of `u_j`.
#[derive(Clone, Debug)]
pub struct AlgebraAutomorphism {
    algebra: Arc<GradedAlgebra>,
    images: Vec<SparseVec>,
}

impl PartialEq for AlgebraAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images && self.algebra.same_structure(&other.algebra)
    }
}

impl AlgebraAutomorphism {
    pub fn new(algebra: Arc<GradedAlgebra>, matrix: &Matrix) -> Result<Self, AlgebraError> {
        let n = algebra.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(AlgebraError::BadShape(format!("{}x{} matrix on a {n}-dimensional algebra", matrix.rows(), matrix.cols())));
        }
        let rho = AlgebraAutomorphism { images: matrix.columns_sparse(), algebra };
        rho.validate()?;
        Ok(rho)
    }

    pub fn identity(algebra: Arc<GradedAlgebra>) -> Self {
        let images = (0..algebra.dim()).map(|i| algebra.basis_vector(i)).collect();
        AlgebraAutomorphism { algebra, images }
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        let a = &self.algebra;
        for (j, img) in self.images.iter().enumerate() {
            if img.iter().any(|(i, _)| a.degree(*i) != a.degree(j)) {
                return Err(AlgebraError::NotAutomorphism(format!("image of basis element {j} changes degree")));
            }
        }
        if self.apply(a.unit()) != *a.unit() {
            return Err(AlgebraError::NotAutomorphism("unit is not fixed".into()));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                if self.apply(a.product(i, j)) != a.multiply(&self.images[i], &self.images[j]) {
                    return Err(AlgebraError::NotAutomorphism(format!("not multiplicative on ({i}, {j})")));
                }
            }
        }
        if rank(&self.matrix()) != a.dim() {
            return Err(AlgebraError::NotAutomorphism("not invertible".into()));
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn image(&self, j: usize) -> &SparseVec {
        &self.images[j]
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_sparse_columns(self.algebra.field(), self.algebra.dim(), &self.images)
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = SparseAccumulator::new();
        for (j, c) in v {
            acc.add_scaled(c, &self.images[*j]);
        }
        acc.finish()
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &AlgebraAutomorphism) -> AlgebraAutomorphism {
        let images = other.images.iter().map(|v| self.apply(v)).collect();
        AlgebraAutomorphism { algebra: self.algebra.clone(), images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, v)| matches!(v.as_slice(), [(i, c)] if *i == j && c.is_one()))
    }
}

/// `b̂(r) = t(deg r, b) r` on an algebra graded by the left group of `t`.
pub fn character_automorphism(
    t: &Bicharacter,
    b: &GroupElement,
    r: &Arc<GradedAlgebra>,
) -> Result<AlgebraAutomorphism, AlgebraError> {
    if r.group() != t.left() {
        return Err(GradingError::GroupMismatch("algebra is not graded by the left group".into()).into());
    }
    let chi = t.dual_character(b)?;
    let images = (0..r.dim()).map(|i| Ok(vec![(i, chi.eval(r.degree(i))?)])).collect::<Result<_, GradingError>>()?;
    Ok(AlgebraAutomorphism { algebra: r.clone(), images })
}

/// `â(s) = t(a, deg s) s` on an algebra graded by the right group of `t`.
pub fn character_automorphism_left(
    t: &Bicharacter,
    a: &GroupElement,
    s: &Arc<GradedAlgebra>,
) -> Result<AlgebraAutomorphism, AlgebraError> {
    if s.group() != t.right() {
        return Err(GradingError::GroupMismatch("algebra is not graded by the right group".into()).into());
    }
    let chi = t.dual_character_left(a)?;
    let images = (0..s.dim()).map(|i| Ok(vec![(i, chi.eval(s.degree(i))?)])).collect::<Result<_, GradingError>>()?;
    Ok(AlgebraAutomorphism { algebra: s.clone(), images })
}

/// Graded bimodule over a pair of algebras sharing one grading group.
#[derive(Clone, Debug)]
pub struct GradedBimodule {
    left: Arc<GradedAlgebra>,
    right: Arc<GradedAlgebra>,
    names: Vec<String>,
    degrees: Vec<GroupElement>,
    /// `left_action[a * dim + m] = u_a · m`
    left_action: Vec<SparseVec>,
    /// `right_action[m * dim(right) + a] = m · u_a`
    right_action: Vec<SparseVec>,
}

impl GradedBimodule {
    pub fn new(
        left: Arc<GradedAlgebra>,
        right: Arc<GradedAlgebra>,
        names: Vec<String>,
        degrees: Vec<GroupElement>,
        left_action: Vec<SparseVec>,
        right_action: Vec<SparseVec>,
    ) -> Result<Self, AlgebraError> {
        let m = Self::from_parts(left, right, names, degrees, left_action, right_action)?;
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_parts(
        left: Arc<GradedAlgebra>,
        right: Arc<GradedAlgebra>,
        names: Vec<String>,
        degrees: Vec<GroupElement>,
        left_action: Vec<SparseVec>,
        right_action: Vec<SparseVec>,
    ) -> Result<Self, AlgebraError> {
        let dim = degrees.len();
        if left.group() != right.group() {
            return Err(AlgebraError::AlgebraMismatch("acting algebras are graded by different groups".into()));
        }
        if left.field() != right.field() {
            return Err(AlgebraError::AlgebraMismatch("acting algebras live over different fields".into()));
        }
        if names.len() != dim || left_action.len() != left.dim() * dim || right_action.len() != right.dim() * dim {
            return Err(AlgebraError::BadShape("bimodule action tables have the wrong size".into()));
        }
        Ok(GradedBimodule { left, right, names, degrees, left_action, right_action })
    }

    /// An algebra as a bimodule over itself.
    pub fn regular(r: &Arc<GradedAlgebra>) -> Self {
        let n = r.dim();
        let left_action = (0..n).flat_map(|a| (0..n).map(move |m| (a, m))).map(|(a, m)| r.product(a, m).clone()).collect();
        let right_action = (0..n).flat_map(|m| (0..n).map(move |a| (m, a))).map(|(m, a)| r.product(m, a).clone()).collect();
        GradedBimodule {
            left: r.clone(),
            right: r.clone(),
            names: r.names().to_vec(),
            degrees: r.degrees().to_vec(),
            left_action,
            right_action,
        }
    }

    pub fn left_algebra(&self) -> &Arc<GradedAlgebra> {
        &self.left
    }

    pub fn right_algebra(&self) -> &Arc<GradedAlgebra> {
        &self.right
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

    pub fn degree(&self, m: usize) -> &GroupElement {
        &self.degrees[m]
    }

    pub fn act_left(&self, a: usize, m: usize) -> &SparseVec {
        &self.left_action[a * self.dim() + m]
    }

    pub fn act_right(&self, m: usize, a: usize) -> &SparseVec {
        &self.right_action[m * self.right.dim() + a]
    }

    pub fn left_mul(&self, a: &SparseVec, m: &SparseVec) -> SparseVec {
        let mut acc = SparseAccumulator::new();
        for (i, x) in a {
            for (j, y) in m {
                acc.add_scaled(&(x * y), self.act_left(*i, *j));
            }
        }
        acc.finish()
    }

    pub fn right_mul(&self, m: &SparseVec, a: &SparseVec) -> SparseVec {
        let mut acc = SparseAccumulator::new();
        for (j, y) in m {
            for (i, x) in a {
                acc.add_scaled(&(x * y), self.act_right(*j, *i));
            }
        }
        acc.finish()
    }

    pub fn same_structure(&self, other: &GradedBimodule) -> bool {
        self.degrees == other.degrees && self.left_action == other.left_action && self.right_action == other.right_action
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        let (l, r) = (&self.left, &self.right);
        let g = l.group();
        let e = |k: usize| vec![(k, l.field().one())];
        for m in 0..self.dim() {
            for a in 0..l.dim() {
                let d = g.add(l.degree(a), &self.degrees[m]);
                if self.act_left(a, m).iter().any(|(k, _)| self.degrees[*k] != d) {
                    return Err(AlgebraError::ActionNotGraded(format!("left action of {a} on {m}")));
                }
            }
            for a in 0..r.dim() {
                let d = g.add(&self.degrees[m], r.degree(a));
                if self.act_right(m, a).iter().any(|(k, _)| self.degrees[*k] != d) {
                    return Err(AlgebraError::ActionNotGraded(format!("right action of {a} on {m}")));
                }
            }
            if self.left_mul(l.unit(), &e(m)) != e(m) || self.right_mul(&e(m), r.unit()) != e(m) {
                return Err(AlgebraError::ModuleAxiom(format!("unit does not act trivially on {m}")));
            }
            for a in 0..l.dim() {
                for b in 0..l.dim() {
                    let lhs = self.left_mul(l.product(a, b), &e(m));
                    if lhs != self.left_mul(&e(a), self.act_left(b, m)) {
                        return Err(AlgebraError::ModuleAxiom(format!("left action not associative at ({a}, {b}, {m})")));
                    }
                }
                for b in 0..r.dim() {
                    let lhs = self.right_mul(self.act_left(a, m), &e(b));
                    if lhs != self.left_mul(&e(a), self.act_right(m, b)) {
                        return Err(AlgebraError::ModuleAxiom(format!("actions do not commute at ({a}, {m}, {b})")));
                    }
                }
            }
            for a in 0..r.dim() {
                for b in 0..r.dim() {
                    let lhs = self.right_mul(&e(m), r.product(a, b));
                    if lhs != self.right_mul(self.act_right(m, a), &e(b)) {
                        return Err(AlgebraError::ModuleAxiom(format!("right action not associative at ({m}, {a}, {b})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `M_ρ`: same left action, `m · r := m ρ(r)`.
    pub fn twist_right(&self, rho: &AlgebraAutomorphism) -> Result<Self, AlgebraError> {
        if !rho.algebra().same_structure(&self.right) {
            return Err(AlgebraError::AlgebraMismatch("automorphism is not over the right-acting algebra".into()));
        }
        let rd = self.right.dim();
        let mut right_action = Vec::with_capacity(self.dim() * rd);
        for m in 0..self.dim() {
            for a in 0..rd {
                right_action.push(self.right_mul(&vec![(m, self.right.field().one())], rho.image(a)));
            }
        }
        Ok(GradedBimodule { right_action, ..self.clone() })
    }

    /// `ρM`: same right action, `r · m := ρ(r) m`.
    pub fn twist_left(&self, rho: &AlgebraAutomorphism) -> Result<Self, AlgebraError> {
        if !rho.algebra().same_structure(&self.left) {
            return Err(AlgebraError::AlgebraMismatch("automorphism is not over the left-acting algebra".into()));
        }
        let mut left_action = Vec::with_capacity(self.left.dim() * self.dim());
        for a in 0..self.left.dim() {
            for m in 0..self.dim() {
                left_action.push(self.left_mul(rho.image(a), &vec![(m, self.left.field().one())]));
            }
        }
        Ok(GradedBimodule { left_action, ..self.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::GradingGroup;
    use crate::kernel::Field;

    fn lambda2() -> Arc<GradedAlgebra> {
        Arc::new(GradedAlgebra::truncated_polynomial(2, Field::RationalFunctions, "x").unwrap())
    }

    fn power_t() -> Bicharacter {
        Bicharacter::diagonal_power(1, Field::RationalFunctions.indeterminate().unwrap()).unwrap()
    }

    #[test]
    fn character_automorphisms() {
        let r = lambda2();
        let t = power_t();
        let z = GradingGroup::integers();
        let q = Field::RationalFunctions.indeterminate().unwrap();
        assert!(character_automorphism(&t, &z.zero(), &r).unwrap().is_identity());
        let b1 = character_automorphism(&t, &z.element(&[1]).unwrap(), &r).unwrap();
        b1.validate().unwrap();
        assert_eq!(b1.image(1), &vec![(1, q.clone())]);
        assert_eq!(b1.image(0), &vec![(0, q.one_like())]);
        let b2 = character_automorphism(&t, &z.element(&[2]).unwrap(), &r).unwrap();
        let b3 = character_automorphism(&t, &z.element(&[3]).unwrap(), &r).unwrap();
        assert_eq!(b1.compose(&b2).matrix(), b3.matrix());
    }

    #[test]
    fn twisting_the_regular_bimodule() {
        let r = lambda2();
        let t = power_t();
        let z = GradingGroup::integers();
        let q = Field::RationalFunctions.indeterminate().unwrap();
        let reg = GradedBimodule::regular(&r);
        reg.validate().unwrap();
        let id = AlgebraAutomorphism::identity(r.clone());
        assert!(reg.twist_right(&id).unwrap().same_structure(&reg));

        let rho = character_automorphism(&t, &z.element(&[1]).unwrap(), &r).unwrap();
        let m = reg.twist_right(&rho).unwrap();
        m.validate().unwrap();
        assert!(m.act_right(1, 1).is_empty());
        assert_eq!(m.act_right(0, 1), &vec![(1, q.clone())]);
        assert_eq!(m.act_left(1, 0), &vec![(1, q.one_like())]);

        let twice = m.twist_right(&rho).unwrap();
        assert!(twice.same_structure(&reg.twist_right(&rho.compose(&rho)).unwrap()));
        let left = reg.twist_left(&rho).unwrap();
        left.validate().unwrap();
        assert_eq!(left.act_left(1, 0), &vec![(1, q)]);
    }
}

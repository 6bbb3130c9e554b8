use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::algebra::{AlgebraError, GradedAlgebra, GradedBimodule};
use crate::grading::{GradingGroup, GroupElement};
use crate::kernel::{Field, Matrix, SparseAccumulator, SparseVec};

use super::{decode, encode, group_by_degree, next_tuple_degrees, sign, CochainComplex, HochschildError, Term};

/// Degree tables of `R^{⊗n}` for growing `n`.
pub(crate) struct TupleDegrees {
    group: GradingGroup,
    basis: Vec<GroupElement>,
    levels: Mutex<Vec<Arc<Vec<GroupElement>>>>,
}

impl TupleDegrees {
    pub(crate) fn new(group: GradingGroup, basis: Vec<GroupElement>) -> Self {
        let zero = group.zero();
        TupleDegrees { group, basis, levels: Mutex::new(vec![Arc::new(vec![zero])]) }
    }

    pub(crate) fn level(&self, n: usize) -> Arc<Vec<GroupElement>> {
        let mut levels = self.levels.lock().expect("degree cache poisoned");
        while levels.len() <= n {
            let next = next_tuple_degrees(&self.group, levels.last().expect("level 0 present"), &self.basis);
            levels.push(Arc::new(next));
        }
        levels[n].clone()
    }
}

/// `C^*(R, M) = Hom(R^{⊗*}, M)`, the cochains of the unreduced bar resolution.
pub struct HochschildComplex {
    algebra: Arc<GradedAlgebra>,
    module: Arc<GradedBimodule>,
    truncation: usize,
    tuples: TupleDegrees,
    by_degree: Mutex<BTreeMap<usize, Arc<BTreeMap<GroupElement, Vec<usize>>>>>,
    left_ops: Vec<Arc<Vec<SparseVec>>>,
    right_ops: Vec<Arc<Vec<SparseVec>>>,
}

impl std::fmt::Debug for HochschildComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HochschildComplex")
            .field("algebra_dim", &self.algebra.dim())
            .field("module_dim", &self.module.dim())
            .field("truncation", &self.truncation)
            .finish()
    }
}

impl HochschildComplex {
    pub fn new(module: Arc<GradedBimodule>, truncation: usize) -> Result<Self, HochschildError> {
        let algebra = module.left_algebra().clone();
        if !algebra.same_structure(module.right_algebra()) {
            return Err(AlgebraError::AlgebraMismatch("coefficients must be a bimodule over a single algebra".into()).into());
        }
        let (d, dm) = (algebra.dim(), module.dim());
        let left_ops = (0..d).map(|a| Arc::new((0..dm).map(|m| module.act_left(a, m).clone()).collect())).collect();
        let right_ops = (0..d).map(|a| Arc::new((0..dm).map(|m| module.act_right(m, a).clone()).collect())).collect();
        let tuples = TupleDegrees::new(algebra.group().clone(), algebra.degrees().to_vec());
        Ok(HochschildComplex {
            algebra,
            module,
            truncation,
            tuples,
            by_degree: Mutex::new(BTreeMap::new()),
            left_ops,
            right_ops,
        })
    }

    /// Coefficients in the algebra itself.
    pub fn regular(algebra: &Arc<GradedAlgebra>, truncation: usize) -> Self {
        Self::new(Arc::new(GradedBimodule::regular(algebra)), truncation).expect("regular bimodule is compatible")
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn module(&self) -> &Arc<GradedBimodule> {
        &self.module
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        encode(tuple, self.algebra.dim())
    }

    pub fn decode(&self, x: usize, n: usize) -> Vec<usize> {
        decode(x, n, self.algebra.dim())
    }
}

impl CochainComplex for HochschildComplex {
    fn field(&self) -> Field {
        self.algebra.field()
    }

    fn internal_group(&self) -> &GradingGroup {
        self.algebra.group()
    }

    fn target_dim(&self) -> usize {
        self.module.dim()
    }

    fn target_degree(&self, j: usize) -> &GroupElement {
        self.module.degree(j)
    }

    fn source_dim(&self, n: usize) -> usize {
        self.algebra.dim().pow(n as u32)
    }

    fn sources_by_degree(&self, n: usize) -> Arc<BTreeMap<GroupElement, Vec<usize>>> {
        if let Some(hit) = self.by_degree.lock().expect("degree cache poisoned").get(&n) {
            return hit.clone();
        }
        let grouped = Arc::new(group_by_degree(&self.tuples.level(n)));
        self.by_degree.lock().expect("degree cache poisoned").insert(n, grouped.clone());
        grouped
    }

    fn source_degree(&self, n: usize, x: usize) -> GroupElement {
        self.tuples.level(n)[x].clone()
    }

    fn differential_terms(&self, n: usize, x: usize) -> Vec<Term> {
        let field = self.field();
        let d = self.algebra.dim();
        let r = decode(x, n + 1, d);
        let mut terms = Vec::new();
        terms.push(Term { coef: field.one(), source: encode(&r[1..], d), op: Some(self.left_ops[r[0]].clone()) });
        let mut buf = Vec::with_capacity(n);
        for i in 0..n {
            let e = field.from_i64(sign(i + 1));
            for (k, c) in self.algebra.product(r[i], r[i + 1]) {
                buf.clear();
                buf.extend_from_slice(&r[..i]);
                buf.push(*k);
                buf.extend_from_slice(&r[i + 2..]);
                terms.push(Term { coef: &e * c, source: encode(&buf, d), op: None });
            }
        }
        terms.push(Term {
            coef: field.from_i64(sign(n + 1)),
            source: encode(&r[..n], d),
            op: Some(self.right_ops[r[n]].clone()),
        });
        terms
    }

    fn truncation(&self) -> usize {
        self.truncation
    }
}

/// Matrix of `b_R: B_m R → B_{m-1} R`, `[r_1|…|r_m] ↦ Σ_i (-1)^i [r_1|…|r_i r_{i+1}|…|r_m]`.
pub fn bar_differential(r: &GradedAlgebra, m: usize) -> Matrix {
    assert!(m >= 1, "the bar differential starts at B_1");
    let d = r.dim();
    let field = r.field();
    let columns: Vec<SparseVec> = (0..d.pow(m as u32))
        .map(|x| {
            let t = decode(x, m, d);
            let mut acc = SparseAccumulator::new();
            let mut buf = Vec::with_capacity(m - 1);
            for i in 0..m - 1 {
                let e = field.from_i64(sign(i + 1));
                for (k, c) in r.product(t[i], t[i + 1]) {
                    buf.clear();
                    buf.extend_from_slice(&t[..i]);
                    buf.push(*k);
                    buf.extend_from_slice(&t[i + 2..]);
                    acc.add(encode(&buf, d), &e * c);
                }
            }
            acc.finish()
        })
        .collect();
    Matrix::from_sparse_columns(field, d.pow(m as u32 - 1), &columns)
}

#[cfg(test)]
mod tests {
    use super::super::{apply_differential, cohomology, cohomology_dim, Block, Cochain};
    use super::*;
    use crate::algebra::character_automorphism;
    use crate::grading::Bicharacter;
    use crate::kernel::Scalar;

    fn lambda(m: usize, field: Field) -> Arc<GradedAlgebra> {
        Arc::new(GradedAlgebra::truncated_polynomial(m, field, "x").unwrap())
    }

    fn z(k: i64) -> GroupElement {
        GradingGroup::integers().element(&[k]).unwrap()
    }

    #[test]
    fn bar_differential_squares_to_zero() {
        let r = lambda(3, Field::Rationals);
        assert!(bar_differential(&r, 1).is_zero());
        for m in 2..=5 {
            let d1 = bar_differential(&r, m);
            let d0 = bar_differential(&r, m - 1);
            assert!(d0.mul(&d1).unwrap().is_zero());
        }
    }

    #[test]
    fn bar_differential_on_dual_numbers() {
        let r = lambda(2, Field::Rationals);
        let b = bar_differential(&r, 2);
        // [x|x] ↦ -[x²] = 0 and [1|x] ↦ -[x]
        assert!(b.column_sparse(3).is_empty());
        assert_eq!(b.column_sparse(1), vec![(1, Field::Rationals.from_i64(-1))]);
    }

    #[test]
    fn cochain_differential_squares_to_zero() {
        let r = lambda(3, Field::prime(7).unwrap());
        let c = HochschildComplex::regular(&r, 4);
        for n in 0..3 {
            for deg in -3..=3 {
                let a = Block::new(&c, n, &z(deg));
                let b = Block::new(&c, n + 1, &z(deg));
                let e = Block::new(&c, n + 2, &z(deg));
                for k in 0..a.len() {
                    let f = a.to_cochain(&vec![(k, c.field().one())]);
                    let df = apply_differential(&c, &f);
                    assert!(b.coordinates(&df).is_ok());
                    assert!(apply_differential(&c, &df).is_zero());
                    let _ = &e;
                }
            }
        }
    }

    #[test]
    fn low_cohomology_of_dual_numbers() {
        let r = lambda(2, Field::Rationals);
        let c = HochschildComplex::regular(&r, 3);
        let total = |n: usize| -> usize { (-4..=4).map(|d| cohomology_dim(&c, n, &z(d)).unwrap()).sum() };
        assert_eq!(total(0), 2);
        assert_eq!(total(1), 1);
    }

    #[test]
    fn centre_is_degree_zero_cohomology() {
        let r = lambda(4, Field::Rationals);
        let c = HochschildComplex::regular(&r, 2);
        for d in 0..4 {
            let h = cohomology(&c, 0, &z(d)).unwrap();
            assert_eq!(h.dim(), 1);
            let rep = h.representative(0);
            assert_eq!(rep.values.len(), 1);
            assert_eq!(rep.values[&0].len(), 1);
            assert_eq!(rep.values[&0][0].0, d as usize);
        }
    }

    #[test]
    fn twisted_coefficients_kill_the_centre() {
        let field = Field::RationalFunctions;
        let q = field.indeterminate().unwrap();
        let r = lambda(3, field);
        let t = Bicharacter::diagonal_power(1, q.clone()).unwrap();
        let b = z(1);
        let bhat = character_automorphism(&t, &b, &r).unwrap();
        let m = Arc::new(GradedBimodule::regular(&r).twist_right(&bhat).unwrap());
        let c = HochschildComplex::new(m, 2).unwrap();
        let dims: usize = (-3..=3).map(|d| cohomology_dim(&c, 0, &z(d)).unwrap()).sum();
        assert_eq!(dims, 1);

        // ∂(1) = x - q x = (1 - q) x up to the global sign of the coboundary.
        let mut one = Cochain::zero(0);
        one.add_at(0, &field.one(), &vec![(0, field.one())]);
        let d1 = apply_differential(&c, &one);
        let val = &d1.values[&1];
        assert_eq!(val.len(), 1);
        assert_eq!(val[0].0, 1);
        let expected: Scalar = &field.one() - &q;
        assert!(val[0].1 == expected || val[0].1 == -&expected);
    }

    #[test]
    fn truncation_is_enforced() {
        let r = lambda(2, Field::Rationals);
        let c = HochschildComplex::regular(&r, 1);
        assert!(matches!(cohomology(&c, 2, &z(0)), Err(HochschildError::TruncationExceeded { .. })));
    }
}

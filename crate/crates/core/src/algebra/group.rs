use std::collections::BTreeMap;
use std::sync::Arc;

use crate::grading::{Bicharacter, GradingError, GradingGroup, GroupElement};
use crate::kernel::{sparse_kernel, Field, Scalar, SparseAccumulator, SparseVec};

use super::twisted::tensor_sparse;
use super::{AlgebraAutomorphism, AlgebraError, GradedAlgebra};

fn element_name(g: &GradingGroup, x: &GroupElement) -> String {
    if *x == g.zero() {
        return "1".into();
    }
    match x.coords() {
        [1] => "g".into(),
        [k] => format!("g^{k}"),
        _ => format!("g{x}"),
    }
}

/// `kG`, basis indexed by the elements of `G` in lexicographic order, `deg u_g = g`.
pub fn group_algebra(g: &GradingGroup, field: Field) -> Result<GradedAlgebra, AlgebraError> {
    let elements = g.elements()?;
    let order = elements.len() as u64;
    let p = field.characteristic();
    if p != 0 && order % p == 0 {
        log::warn!("characteristic {p} divides |G| = {order}; the group algebra is not semisimple");
    }
    let names = elements.iter().map(|x| element_name(g, x)).collect();
    let mut mult = Vec::with_capacity(elements.len() * elements.len());
    for x in &elements {
        for y in &elements {
            mult.push(vec![(g.element_index(&g.add(x, y)), field.one())]);
        }
    }
    let unit = vec![(g.element_index(&g.zero()), field.one())];
    GradedAlgebra::from_parts(field, g.clone(), names, elements, unit, mult)
}

/// A finite abelian group acting on an algebra through commuting graded automorphisms,
/// one per cyclic generator.
#[derive(Clone, Debug)]
pub struct FiniteGroupAction {
    group: GradingGroup,
    algebra: Arc<GradedAlgebra>,
    generators: Vec<AlgebraAutomorphism>,
}

impl FiniteGroupAction {
    pub fn new(
        group: GradingGroup,
        algebra: Arc<GradedAlgebra>,
        generators: Vec<AlgebraAutomorphism>,
    ) -> Result<Self, AlgebraError> {
        if !group.is_finite() {
            return Err(GradingError::InfiniteGroup.into());
        }
        if generators.len() != group.rank() {
            return Err(AlgebraError::BadShape(format!("{} automorphisms for {} generators", generators.len(), group.rank())));
        }
        for (i, rho) in generators.iter().enumerate() {
            if !rho.algebra().same_structure(&algebra) {
                return Err(AlgebraError::AlgebraMismatch(format!("generator {i} acts on another algebra")));
            }
            let mut power = AlgebraAutomorphism::identity(algebra.clone());
            for _ in 0..group.orders()[i] {
                power = rho.compose(&power);
            }
            if !power.is_identity() {
                return Err(AlgebraError::NotAutomorphism(format!("generator {i} has order not dividing {}", group.orders()[i])));
            }
            for (j, other) in generators.iter().enumerate().skip(i + 1) {
                if rho.compose(other) != other.compose(rho) {
                    return Err(AlgebraError::NotAutomorphism(format!("generators {i} and {j} do not commute")));
                }
            }
        }
        Ok(FiniteGroupAction { group, algebra, generators })
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn generators(&self) -> &[AlgebraAutomorphism] {
        &self.generators
    }

    /// The automorphism by which `g` acts.
    pub fn act(&self, g: &GroupElement) -> AlgebraAutomorphism {
        let mut acc = AlgebraAutomorphism::identity(self.algebra.clone());
        for (rho, &k) in self.generators.iter().zip(g.coords()) {
            for _ in 0..k {
                acc = rho.compose(&acc);
            }
        }
        acc
    }
}

/// `R ⋊ G` on the original basis of `R`: `(u_i ⊗ g)(u_k ⊗ h) = u_i g(u_k) ⊗ gh`,
/// basis pair `(i, g)` at `i * |G| + index(g)`, graded by `deg R ⊕ G`.
pub fn skew_group_algebra(action: &FiniteGroupAction) -> Result<GradedAlgebra, AlgebraError> {
    let r = action.algebra();
    let g = action.group();
    let elements = g.elements()?;
    let ng = elements.len();
    let acts: Vec<AlgebraAutomorphism> = elements.iter().map(|x| action.act(x)).collect();
    let mut names = Vec::new();
    let mut degrees = Vec::new();
    for i in 0..r.dim() {
        for x in &elements {
            let gn = element_name(g, x);
            names.push(match (r.names()[i].as_str(), gn.as_str()) {
                (a, "1") => a.to_string(),
                ("1", b) => b.to_string(),
                (a, b) => format!("{a}*{b}"),
            });
            degrees.push(GradingGroup::join(r.degree(i), x));
        }
    }
    let mut mult = Vec::with_capacity(names.len() * names.len());
    for i in 0..r.dim() {
        for (xi, _) in elements.iter().enumerate() {
            for k in 0..r.dim() {
                let moved = r.multiply(&r.basis_vector(i), acts[xi].image(k));
                for y in &elements {
                    let gh = g.element_index(&g.add(&elements[xi], y));
                    mult.push(tensor_sparse(&moved, &vec![(gh, r.field().one())], ng));
                }
            }
        }
    }
    let unit = tensor_sparse(r.unit(), &vec![(g.element_index(&g.zero()), r.field().one())], ng);
    GradedAlgebra::from_parts(r.field(), r.group().direct_sum(g), names, degrees, unit, mult)
}

/// Result of regrading an algebra by the characters of an acting group.
#[derive(Clone, Debug)]
pub struct EigenspaceGrading {
    /// Graded by `Ĝ ⊕ (original group)`; `Ĝ` has the same cyclic orders as `G`.
    pub algebra: GradedAlgebra,
    /// `t(φ, g) = φ(g)` on `(Ĝ ⊕ original) × G`.
    pub bicharacter: Bicharacter,
    /// Column `j`: old coordinates of the new basis vector `j`.
    pub basis: Vec<SparseVec>,
    /// `roots[i]` is the primitive root of unity by which character generator `i` evaluates.
    pub roots: Vec<Scalar>,
}

pub(crate) fn primitive_root(field: Field, n: u64) -> Option<Scalar> {
    if n == 1 {
        return Some(field.one());
    }
    match field {
        Field::Prime(p) => {
            if (p - 1) % n != 0 {
                return None;
            }
            let has_order = |y: &Scalar| y.multiplicative_order(n).ok().flatten() == Some(n);
            // prefer the smallest root itself, which keeps small examples readable
            if let Some(y) = (2..p.min(1000)).map(|x| field.from_i64(x as i64)).find(|y| has_order(y)) {
                return Some(y);
            }
            (2..p).find_map(|x| {
                let y = field.from_i64(x as i64).pow(((p - 1) / n) as i64).ok()?;
                (y.multiplicative_order(n).ok()? == Some(n)).then_some(y)
            })
        }
        _ => (n == 2).then(|| field.from_i64(-1)),
    }
}

/// Simultaneous eigenvectors of `ρ_i - λ_i` on the span of `support`.
fn joint_eigenvectors(
    field: Field,
    generators: &[AlgebraAutomorphism],
    support: &[usize],
    eigenvalues: &[Scalar],
) -> Vec<SparseVec> {
    let mut rows: Vec<SparseVec> = Vec::new();
    for (rho, lambda) in generators.iter().zip(eigenvalues) {
        let mut by_row: BTreeMap<usize, SparseAccumulator> = BTreeMap::new();
        for (j, &col) in support.iter().enumerate() {
            for (k, c) in rho.image(col) {
                by_row.entry(*k).or_default().add(j, c.clone());
            }
            by_row.entry(col).or_default().add(j, -lambda);
        }
        rows.extend(by_row.into_values().map(SparseAccumulator::finish));
    }
    sparse_kernel(field, support.len(), rows)
        .into_iter()
        .map(|v| v.into_iter().map(|(j, c)| (support[j], c)).collect::<SparseVec>())
        .map(|mut v: SparseVec| {
            v.sort_by_key(|(k, _)| *k);
            v
        })
        .collect()
}

/// Re-base `R` on simultaneous eigenvectors of the action and grade it by
/// characters, together with the evaluation bicharacter.
pub fn eigenspace_grading(action: &FiniteGroupAction) -> Result<EigenspaceGrading, AlgebraError> {
    let r = action.algebra();
    let field = r.field();
    let g = action.group();
    let mut roots = Vec::with_capacity(g.rank());
    for (i, &n) in g.orders().iter().enumerate() {
        roots.push(primitive_root(field, n).ok_or(AlgebraError::NotDiagonalizable { generator: i })?);
    }
    let dual = g.clone();
    let characters = dual.elements()?;

    let mut found: Vec<(SparseVec, GroupElement)> = Vec::new();
    for (deg, support) in r.components() {
        let mut count = 0;
        for chi in &characters {
            let lambdas: Vec<Scalar> =
                roots.iter().zip(chi.coords()).map(|(w, &c)| w.pow(c).expect("roots are nonzero")).collect();
            for v in joint_eigenvectors(field, action.generators(), &support, &lambdas) {
                found.push((v, GradingGroup::join(chi, &deg)));
                count += 1;
            }
        }
        if count != support.len() {
            let generator = (0..g.rank())
                .find(|&i| {
                    let total: usize = (0..g.orders()[i] as i64)
                        .map(|k| {
                            let lambda = roots[i].pow(k).expect("nonzero");
                            joint_eigenvectors(field, &action.generators()[i..=i], &support, &[lambda]).len()
                        })
                        .sum();
                    total != support.len()
                })
                .unwrap_or(0);
            return Err(AlgebraError::NotDiagonalizable { generator });
        }
    }
    found.sort_by_key(|(v, _)| v.first().map(|(k, _)| *k));
    let names = found
        .iter()
        .enumerate()
        .map(|(j, (v, _))| match v.as_slice() {
            [(k, c)] if c.is_one() => r.names()[*k].clone(),
            _ => format!("e{j}"),
        })
        .collect();
    let (basis, degrees): (Vec<SparseVec>, Vec<GroupElement>) = found.into_iter().unzip();
    let group = dual.direct_sum(r.group());
    let algebra = r.change_basis(&basis, names, group.clone(), degrees)?;
    algebra.validate()?;
    let values = (0..group.rank())
        .map(|i| (0..g.rank()).map(|j| if i == j { roots[i].clone() } else { field.one() }).collect())
        .collect();
    let bicharacter = Bicharacter::new(group, g.clone(), field, values)?;
    Ok(EigenspaceGrading { algebra, bicharacter, basis, roots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::twisted_tensor_algebra;
    use crate::kernel::Matrix;

    fn f7() -> Field {
        Field::prime(7).unwrap()
    }

    fn cubic_action() -> FiniteGroupAction {
        let f = f7();
        let r = Arc::new(GradedAlgebra::truncated_polynomial(3, f, "x").unwrap());
        let m = Matrix::from_i64_rows(f, &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 4]]);
        let rho = AlgebraAutomorphism::new(r.clone(), &m).unwrap();
        FiniteGroupAction::new(GradingGroup::cyclic(3).unwrap(), r, vec![rho]).unwrap()
    }

    #[test]
    fn group_algebras() {
        let f = Field::Rationals;
        let trivial = group_algebra(&GradingGroup::trivial(), f).unwrap();
        assert_eq!(trivial.dim(), 1);
        trivial.validate().unwrap();
        let c2 = group_algebra(&GradingGroup::cyclic(2).unwrap(), f).unwrap();
        c2.validate().unwrap();
        assert_eq!(c2.product(1, 1), &vec![(0, f.one())]);
        group_algebra(&GradingGroup::cyclic(3).unwrap(), f7()).unwrap().validate().unwrap();
    }

    #[test]
    fn monomials_are_eigenvectors() {
        let e = eigenspace_grading(&cubic_action()).unwrap();
        assert_eq!(e.roots, vec![f7().from_i64(2)]);
        // x^i has character g ↦ 2^i, i.e. character coordinate i
        for i in 0..3 {
            assert_eq!(e.basis[i], vec![(i, f7().one())]);
            assert_eq!(e.algebra.degree(i).coords(), &[i as i64, i as i64]);
        }
    }

    #[test]
    fn trivial_group_keeps_the_grading() {
        let r = Arc::new(GradedAlgebra::truncated_polynomial(3, f7(), "x").unwrap());
        let action = FiniteGroupAction::new(GradingGroup::trivial(), r.clone(), vec![]).unwrap();
        let e = eigenspace_grading(&action).unwrap();
        assert!(e.algebra.same_structure(&r));
        assert_eq!(e.algebra.degrees(), r.degrees());
    }

    #[test]
    fn skew_product_is_a_twisted_tensor_product() {
        let action = cubic_action();
        let e = eigenspace_grading(&action).unwrap();
        let kg = group_algebra(action.group(), f7()).unwrap();
        let twisted = twisted_tensor_algebra(&e.algebra, &kg, &e.bicharacter).unwrap();
        twisted.validate().unwrap();
        let skew = skew_group_algebra(&action).unwrap();
        skew.validate().unwrap();
        let ng = kg.dim();
        let basis: Vec<SparseVec> = e
            .basis
            .iter()
            .flat_map(|v| (0..ng).map(move |h| tensor_sparse(v, &vec![(h, f7().one())], ng)))
            .collect();
        let rebased = skew.change_basis(&basis, twisted.names().to_vec(), twisted.group().clone(), twisted.degrees().to_vec()).unwrap();
        assert!(rebased.same_structure(&twisted));
    }

    #[test]
    fn non_diagonalizable_action_is_rejected() {
        // over Q there is no primitive cube root of unity
        let f = Field::Rationals;
        let r = Arc::new(GradedAlgebra::truncated_polynomial(2, f, "x").unwrap());
        let rho = AlgebraAutomorphism::identity(r.clone());
        let action = FiniteGroupAction::new(GradingGroup::cyclic(3).unwrap(), r, vec![rho]).unwrap();
        assert_eq!(eigenspace_grading(&action).unwrap_err(), AlgebraError::NotDiagonalizable { generator: 0 });
    }
}

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::grading::{Bicharacter, GradingError, GradingGroup, GroupElement};
use crate::kernel::{Scalar, SparseVec};

use super::{AlgebraError, GradedAlgebra, GradedBimodule};

/// `Σ a_i b_j e_{i * dim_b + j}`
pub(crate) fn tensor_sparse(a: &SparseVec, b: &SparseVec, dim_b: usize) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a {
        for (j, y) in b {
            out.push((i * dim_b + j, x * y));
        }
    }
    out
}

fn join_names(parts: &[&str]) -> String {
    let kept: Vec<&str> = parts.iter().copied().filter(|p| *p != "1").collect();
    if kept.is_empty() {
        "1".into()
    } else {
        kept.join("*")
    }
}

fn check_grading(t: &Bicharacter, r: &GradedAlgebra, s: &GradedAlgebra) -> Result<(), AlgebraError> {
    if r.group() != t.left() || s.group() != t.right() {
        return Err(GradingError::GroupMismatch("factor gradings do not match the bicharacter".into()).into());
    }
    if r.field() != t.field() || s.field() != t.field() {
        return Err(crate::kernel::KernelError::FieldMismatch { left: r.field(), right: s.field() }.into());
    }
    Ok(())
}

/// Per-degree-pair values of a bicharacter, for repeated lookups.
pub(crate) struct TwistTable {
    values: BTreeMap<(GroupElement, GroupElement), Scalar>,
}

impl TwistTable {
    pub(crate) fn new(t: &Bicharacter, lefts: &[GroupElement], rights: &[GroupElement]) -> Self {
        let mut values = BTreeMap::new();
        for a in lefts {
            for b in rights {
                values.entry((a.clone(), b.clone())).or_insert_with(|| t.eval_unchecked(a, b));
            }
        }
        TwistTable { values }
    }

    pub(crate) fn get(&self, a: &GroupElement, b: &GroupElement) -> &Scalar {
        &self.values[&(a.clone(), b.clone())]
    }
}

/// `R ⊗^t S` with `(r ⊗ s)(r' ⊗ s') = t(deg r', deg s) rr' ⊗ ss'`; basis pair
/// `(i, j)` sits at index `i * dim S + j`, graded by `A ⊕ B`.
pub fn twisted_tensor_algebra(r: &GradedAlgebra, s: &GradedAlgebra, t: &Bicharacter) -> Result<GradedAlgebra, AlgebraError> {
    check_grading(t, r, s)?;
    let (dr, ds) = (r.dim(), s.dim());
    let table = TwistTable::new(t, r.degrees(), s.degrees());
    let mut names = Vec::with_capacity(dr * ds);
    let mut degrees = Vec::with_capacity(dr * ds);
    for i in 0..dr {
        for j in 0..ds {
            names.push(join_names(&[&r.names()[i], &s.names()[j]]));
            degrees.push(GradingGroup::join(r.degree(i), s.degree(j)));
        }
    }
    let mut mult = Vec::with_capacity(dr * ds * dr * ds);
    for i in 0..dr {
        for j in 0..ds {
            for k in 0..dr {
                for l in 0..ds {
                    let c = table.get(r.degree(k), s.degree(j));
                    let v = tensor_sparse(r.product(i, k), s.product(j, l), ds);
                    mult.push(super::scaled(&v, c));
                }
            }
        }
    }
    let unit = tensor_sparse(r.unit(), s.unit(), ds);
    GradedAlgebra::from_parts(r.field(), r.group().direct_sum(s.group()), names, degrees, unit, mult)
}

/// `M ⊗^t N` over `R ⊗^t S`, with `(r⊗s)(m⊗n) = t(m, s) rm ⊗ sn` and
/// `(m⊗n)(r⊗s) = t(r, n) mr ⊗ ns`.
pub fn twisted_tensor_bimodule(
    m: &GradedBimodule,
    n: &GradedBimodule,
    t: &Bicharacter,
) -> Result<GradedBimodule, AlgebraError> {
    check_grading(t, m.left_algebra(), n.left_algebra())?;
    check_grading(t, m.right_algebra(), n.right_algebra())?;
    let left = Arc::new(twisted_tensor_algebra(m.left_algebra(), n.left_algebra(), t)?);
    let right = if m.right_algebra().same_structure(m.left_algebra()) && n.right_algebra().same_structure(n.left_algebra())
    {
        left.clone()
    } else {
        Arc::new(twisted_tensor_algebra(m.right_algebra(), n.right_algebra(), t)?)
    };
    let (dm, dn) = (m.dim(), n.dim());
    let (rl, sl) = (m.left_algebra(), n.left_algebra());
    let (rr, sr) = (m.right_algebra(), n.right_algebra());
    let mut lefts: Vec<GroupElement> = m.degrees().to_vec();
    lefts.extend(rr.degrees().iter().cloned());
    let mut rights: Vec<GroupElement> = n.degrees().to_vec();
    rights.extend(sl.degrees().iter().cloned());
    let table = TwistTable::new(t, &lefts, &rights);

    let mut names = Vec::with_capacity(dm * dn);
    let mut degrees = Vec::with_capacity(dm * dn);
    for i in 0..dm {
        for j in 0..dn {
            names.push(join_names(&[&m.names()[i], &n.names()[j]]));
            degrees.push(GradingGroup::join(m.degree(i), n.degree(j)));
        }
    }
    let mut left_action = Vec::with_capacity(rl.dim() * sl.dim() * dm * dn);
    for a in 0..rl.dim() {
        for b in 0..sl.dim() {
            for i in 0..dm {
                for j in 0..dn {
                    let c = table.get(m.degree(i), sl.degree(b));
                    let v = tensor_sparse(m.act_left(a, i), n.act_left(b, j), dn);
                    left_action.push(super::scaled(&v, c));
                }
            }
        }
    }
    let mut right_action = Vec::with_capacity(rr.dim() * sr.dim() * dm * dn);
    for i in 0..dm {
        for j in 0..dn {
            for a in 0..rr.dim() {
                for b in 0..sr.dim() {
                    let c = table.get(rr.degree(a), n.degree(j));
                    let v = tensor_sparse(m.act_right(i, a), n.act_right(j, b), dn);
                    right_action.push(super::scaled(&v, c));
                }
            }
        }
    }
    GradedBimodule::from_parts(left, right, names, degrees, left_action, right_action)
}

/// Bicharacters `t_{ij}` for `i < j`, with `t_{ij}` pairing the grading of
/// factor `i` (left) with that of factor `j` (right).
#[derive(Clone, Debug, Default)]
pub struct PairwiseTwists {
    twists: BTreeMap<(usize, usize), Bicharacter>,
}

impl PairwiseTwists {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, i: usize, j: usize, t: Bicharacter) {
        assert!(i < j, "pairwise twists are indexed by i < j");
        self.twists.insert((i, j), t);
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Bicharacter> {
        self.twists.get(&(i, j))
    }
}

/// `R_1 ⊗^t ... ⊗^t R_n` built in one step: the product of basis tuples
/// `x · y` carries `Π_{i<j} t_{ij}(deg y_i, deg x_j)`.
pub fn iterated_twisted_tensor(factors: &[Arc<GradedAlgebra>], twists: &PairwiseTwists) -> Result<GradedAlgebra, AlgebraError> {
    let n = factors.len();
    if n < 2 {
        return Err(AlgebraError::BadShape("need at least two factors".into()));
    }
    let field = factors[0].field();
    let mut tables = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let t = twists.get(i, j).ok_or_else(|| AlgebraError::BadShape(format!("missing twist ({i}, {j})")))?;
            check_grading(t, &factors[i], &factors[j])?;
            tables.insert((i, j), TwistTable::new(t, factors[i].degrees(), factors[j].degrees()));
        }
    }
    let dims: Vec<usize> = factors.iter().map(|f| f.dim()).collect();
    let total: usize = dims.iter().product();
    let decode = |mut x: usize| -> Vec<usize> {
        let mut out = vec![0; n];
        for k in (0..n).rev() {
            out[k] = x % dims[k];
            x /= dims[k];
        }
        out
    };
    let tuples: Vec<Vec<usize>> = (0..total).map(decode).collect();
    let group = factors.iter().skip(1).fold(factors[0].group().clone(), |g, f| g.direct_sum(f.group()));
    let names = tuples
        .iter()
        .map(|tu| join_names(&tu.iter().enumerate().map(|(k, &i)| factors[k].names()[i].as_str()).collect::<Vec<_>>()))
        .collect();
    let degrees = tuples
        .iter()
        .map(|tu| {
            tu.iter().enumerate().skip(1).fold(factors[0].degree(tu[0]).clone(), |acc, (k, &i)| {
                GradingGroup::join(&acc, factors[k].degree(i))
            })
        })
        .collect();
    let tensor_all = |vs: Vec<&SparseVec>| -> SparseVec {
        let mut acc: SparseVec = vec![(0, field.one())];
        for (k, v) in vs.into_iter().enumerate() {
            acc = tensor_sparse(&acc, v, dims[k]);
        }
        acc
    };
    let mut mult = Vec::with_capacity(total * total);
    for x in &tuples {
        for y in &tuples {
            let mut c = field.one();
            for ((i, j), table) in &tables {
                c = &c * table.get(factors[*i].degree(y[*i]), factors[*j].degree(x[*j]));
            }
            let v = tensor_all((0..n).map(|k| factors[k].product(x[k], y[k])).collect());
            mult.push(super::scaled(&v, &c));
        }
    }
    let unit = tensor_all(factors.iter().map(|f| f.unit()).collect());
    GradedAlgebra::from_parts(field, group, names, degrees, unit, mult)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{character_automorphism, GradedBimodule};
    use crate::kernel::Field;

    fn lam(m: usize, var: &str) -> Arc<GradedAlgebra> {
        Arc::new(GradedAlgebra::truncated_polynomial(m, Field::RationalFunctions, var).unwrap())
    }

    fn q() -> Scalar {
        Field::RationalFunctions.indeterminate().unwrap()
    }

    fn idx(a: &GradedAlgebra, name: &str) -> usize {
        a.names().iter().position(|n| n == name).unwrap()
    }

    #[test]
    fn quantum_plane_relation() {
        let t = Bicharacter::diagonal_power(1, q()).unwrap();
        let a = twisted_tensor_algebra(&lam(2, "x"), &lam(2, "y"), &t).unwrap();
        a.validate().unwrap();
        let (x, y, xy) = (idx(&a, "x"), idx(&a, "y"), idx(&a, "x*y"));
        assert_eq!(a.product(y, x), &vec![(xy, q())]);
        assert_eq!(a.product(x, y), &vec![(xy, q().one_like())]);
        assert_eq!(a.components().len(), 4);
    }

    #[test]
    fn trivial_and_sign_twists() {
        let f = Field::Rationals;
        let r = GradedAlgebra::truncated_polynomial(2, f, "x").unwrap();
        let s = GradedAlgebra::truncated_polynomial(2, f, "y").unwrap();
        let z = GradingGroup::integers();
        let plain = twisted_tensor_algebra(&r, &s, &Bicharacter::trivial(z.clone(), z.clone(), f)).unwrap();
        let (x, y, xy) = (idx(&plain, "x"), idx(&plain, "y"), idx(&plain, "x*y"));
        assert_eq!(plain.product(y, x), &vec![(xy, f.one())]);
        let sign = twisted_tensor_algebra(&r, &s, &Bicharacter::diagonal_power(1, f.from_i64(-1)).unwrap()).unwrap();
        sign.validate().unwrap();
        assert_eq!(sign.product(y, x), &vec![(xy, f.from_i64(-1))]);
    }

    #[test]
    fn regular_bimodule_is_recovered() {
        let t = Bicharacter::diagonal_power(1, q()).unwrap();
        let (r, s) = (lam(3, "x"), lam(2, "y"));
        let tr = Arc::new(twisted_tensor_algebra(&r, &s, &t).unwrap());
        let mn = twisted_tensor_bimodule(&GradedBimodule::regular(&r), &GradedBimodule::regular(&s), &t).unwrap();
        mn.validate().unwrap();
        assert!(mn.same_structure(&GradedBimodule::regular(&tr)));
    }

    #[test]
    fn twisted_coefficients_expand_by_hand() {
        // M = Λ(2)_{b̂} with b = 1, N = Λ(2); basis of M⊗N: 1, y, x, xy
        let t = Bicharacter::diagonal_power(1, q()).unwrap();
        let (r, s) = (lam(2, "x"), lam(2, "y"));
        let z = GradingGroup::integers();
        let rho = character_automorphism(&t, &z.element(&[1]).unwrap(), &r).unwrap();
        let m = GradedBimodule::regular(&r).twist_right(&rho).unwrap();
        let mn = twisted_tensor_bimodule(&m, &GradedBimodule::regular(&s), &t).unwrap();
        mn.validate().unwrap();
        let x_alg = 2; // x⊗1 in R⊗S
        // (1⊗1)(x⊗1) = t(x, 1) (1·_b x) ⊗ 1 = q x⊗1
        assert_eq!(mn.act_right(0, x_alg), &vec![(2, q())]);
        // (x⊗1)(x⊗1) = q x² = 0
        assert!(mn.act_right(2, x_alg).is_empty());
        // (1⊗y)(x⊗1) = t(x, deg y) q x⊗y = q² x⊗y
        assert_eq!(mn.act_right(1, x_alg), &vec![(3, q().pow(2).unwrap())]);
        // left action untouched by the twist: (1⊗y)·(x⊗1) = t(x, y) x⊗y
        assert_eq!(mn.act_left(1, 2), &vec![(3, q())]);
    }

    #[test]
    fn iterated_matches_nested() {
        let f = Field::prime(5).unwrap();
        let two = f.from_i64(2);
        let factors: Vec<_> =
            ["x1", "x2", "x3"].iter().map(|v| Arc::new(GradedAlgebra::truncated_polynomial(2, f, v).unwrap())).collect();
        let t = Bicharacter::diagonal_power(1, two.clone()).unwrap();
        let mut tw = PairwiseTwists::new();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            tw.insert(i, j, t.clone());
        }
        let direct = iterated_twisted_tensor(&factors, &tw).unwrap();
        direct.validate().unwrap();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (xi, xj) = (idx(&direct, factors[i].names()[1].as_str()), idx(&direct, factors[j].names()[1].as_str()));
            let prod = direct.product(xi, xj);
            assert_eq!(prod.len(), 1);
            assert_eq!(direct.product(xj, xi), &vec![(prod[0].0, two.clone())]);
        }
        // ((12)3): the outer twist pairs Z² with Z via q^{a_1 b + a_2 b}
        let inner = twisted_tensor_algebra(&factors[0], &factors[1], &t).unwrap();
        let outer_t = Bicharacter::new(
            GradingGroup::free(2),
            GradingGroup::free(1),
            f,
            vec![vec![two.clone()], vec![two.clone()]],
        )
        .unwrap();
        let nested = twisted_tensor_algebra(&inner, &factors[2], &outer_t).unwrap();
        assert!(nested.same_structure(&direct));

        let two_factor = iterated_twisted_tensor(&factors[..2], &tw).unwrap();
        assert!(two_factor.same_structure(&inner));
    }
}

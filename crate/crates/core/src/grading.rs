//! Finitely generated abelian grading groups and bicharacters on them.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{Field, KernelError, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("torsion orders must be at least 2, got {0}")]
    BadTorsionOrder(u64),
    #[error("bicharacter value at generator pair ({0}, {1}) is incompatible with torsion")]
    TorsionIncompatible(usize, usize),
    #[error("bicharacter value at generator pair ({0}, {1}) is zero")]
    ZeroValue(usize, usize),
    #[error("bicharacter value matrix has shape {got:?}, expected {expected:?}")]
    BadShape { got: (usize, usize), expected: (usize, usize) },
    #[error("group is infinite")]
    InfiniteGroup,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// `Z^r ⊕ Z/n_1 ⊕ ... ⊕ Z/n_k`, stored as one order per cyclic factor (0 for Z).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradingGroup {
    orders: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    coords: Vec<i64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl GradingGroup {
    pub fn new(free_rank: usize, torsion: &[u64]) -> Result<Self, GradingError> {
        if let Some(&bad) = torsion.iter().find(|&&n| n < 2) {
            return Err(GradingError::BadTorsionOrder(bad));
        }
        let mut orders = vec![0; free_rank];
        orders.extend_from_slice(torsion);
        Ok(GradingGroup { orders })
    }

    /// Cyclic factors in the given order; 0 stands for a copy of Z.
    pub fn from_orders(orders: Vec<u64>) -> Result<Self, GradingError> {
        if let Some(&bad) = orders.iter().find(|&&n| n == 1) {
            return Err(GradingError::BadTorsionOrder(bad));
        }
        Ok(GradingGroup { orders })
    }

    pub fn trivial() -> Self {
        GradingGroup { orders: Vec::new() }
    }

    pub fn integers() -> Self {
        GradingGroup { orders: vec![0] }
    }

    pub fn free(rank: usize) -> Self {
        GradingGroup { orders: vec![0; rank] }
    }

    pub fn cyclic(n: u64) -> Result<Self, GradingError> {
        Self::new(0, &[n])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of cyclic generators.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|&&n| n == 0).count()
    }

    pub fn torsion_orders(&self) -> Vec<u64> {
        self.orders.iter().copied().filter(|&n| n != 0).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.orders.iter().all(|&n| n != 0)
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.orders.iter().product())
    }

    pub fn direct_sum(&self, other: &GradingGroup) -> GradingGroup {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        GradingGroup { orders }
    }

    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, GradingError> {
        if coords.len() != self.orders.len() {
            return Err(GradingError::GroupMismatch(format!(
                "{} coordinates for a group of rank {}",
                coords.len(),
                self.rank()
            )));
        }
        Ok(self.reduce(coords.to_vec()))
    }

    fn reduce(&self, mut coords: Vec<i64>) -> GroupElement {
        for (c, &n) in coords.iter_mut().zip(&self.orders) {
            if n != 0 {
                *c = c.rem_euclid(n as i64);
            }
        }
        GroupElement { coords }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.rank()] }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1;
        self.reduce(coords)
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.coords.len() == self.rank()
            && x.coords.iter().zip(&self.orders).all(|(&c, &n)| n == 0 || (0..n as i64).contains(&c))
    }

    fn check(&self, x: &GroupElement) -> Result<(), GradingError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GradingError::GroupMismatch(format!("{x} is not an element of {self}")))
        }
    }

    pub fn try_add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, GradingError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add(x, y))
    }

    pub fn try_neg(&self, x: &GroupElement) -> Result<GroupElement, GradingError> {
        self.check(x)?;
        Ok(self.neg(x))
    }

    /// Unchecked sum, for callers that already know both operands belong here.
    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        debug_assert_eq!(x.coords.len(), self.rank());
        self.reduce(x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        self.reduce(x.coords.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.reduce(x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64, x: &GroupElement) -> GroupElement {
        self.reduce(x.coords.iter().map(|a| k * a).collect())
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a GroupElement>) -> GroupElement {
        xs.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Splits an element of `self ⊕ other` built by [`direct_sum`](Self::direct_sum).
    pub fn split(&self, x: &GroupElement) -> (GroupElement, GroupElement) {
        let (a, b) = x.coords.split_at(self.rank());
        (GroupElement { coords: a.to_vec() }, GroupElement { coords: b.to_vec() })
    }

    pub fn join(a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut coords = a.coords.clone();
        coords.extend_from_slice(&b.coords);
        GroupElement { coords }
    }

    /// All elements of a finite group, lexicographic in the coordinates.
    pub fn elements(&self) -> Result<Vec<GroupElement>, GradingError> {
        if !self.is_finite() {
            return Err(GradingError::InfiniteGroup);
        }
        let mut out = vec![Vec::new()];
        for &n in &self.orders {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (0..n as i64).map(move |c| {
                        let mut p = prefix.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        Ok(out.into_iter().map(|coords| GroupElement { coords }).collect())
    }

    /// Position of `x` in [`elements`](Self::elements).
    pub fn element_index(&self, x: &GroupElement) -> usize {
        x.coords.iter().zip(&self.orders).fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
    }
}

impl fmt::Display for GradingGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.orders.iter().map(|&n| if n == 0 { "Z".to_string() } else { format!("Z/{n}") }).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// `t: A × B → k^×`, bimultiplicative, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicharacter {
    left: GradingGroup,
    right: GradingGroup,
    field: Field,
    values: Vec<Vec<Scalar>>,
}

/// `a ↦ t(a, b)` for a fixed `b` (or the mirror image), as values on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    group: GradingGroup,
    field: Field,
    values: Vec<Scalar>,
}

impl Character {
    pub fn eval(&self, x: &GroupElement) -> Result<Scalar, GradingError> {
        self.group.check(x)?;
        let mut acc = self.field.one();
        for (v, &e) in self.values.iter().zip(&x.coords) {
            if e != 0 {
                acc = &acc * &v.pow(e)?;
            }
        }
        Ok(acc)
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }
}

impl Bicharacter {
    pub fn new(
        left: GradingGroup,
        right: GradingGroup,
        field: Field,
        values: Vec<Vec<Scalar>>,
    ) -> Result<Self, GradingError> {
        let got = (values.len(), values.first().map_or(right.rank(), |r| r.len()));
        if got != (left.rank(), right.rank()) || values.iter().any(|r| r.len() != right.rank()) {
            return Err(GradingError::BadShape { got, expected: (left.rank(), right.rank()) });
        }
        for row in &values {
            for v in row {
                if v.field() != field {
                    return Err(KernelError::FieldMismatch { left: field, right: v.field() }.into());
                }
            }
        }
        let t = Bicharacter { left, right, field, values };
        t.validate()?;
        Ok(t)
    }

    pub fn trivial(left: GradingGroup, right: GradingGroup, field: Field) -> Self {
        let values = vec![vec![field.one(); right.rank()]; left.rank()];
        Bicharacter { left, right, field, values }
    }

    /// `t(a, b) = q^{Σ a_i b_i}` on free groups of equal rank.
    pub fn diagonal_power(rank: usize, q: Scalar) -> Result<Self, GradingError> {
        let field = q.field();
        let values = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { q.clone() } else { field.one() }).collect())
            .collect();
        Self::new(GradingGroup::free(rank), GradingGroup::free(rank), field, values)
    }

    pub fn left(&self) -> &GradingGroup {
        &self.left
    }

    pub fn right(&self) -> &GradingGroup {
        &self.right
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn values(&self) -> &[Vec<Scalar>] {
        &self.values
    }

    pub fn validate(&self) -> Result<(), GradingError> {
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.is_zero() {
                    return Err(GradingError::ZeroValue(i, j));
                }
                for n in [self.left.orders[i], self.right.orders[j]] {
                    if n != 0 && !v.pow(n as i64)?.is_one() {
                        return Err(GradingError::TorsionIncompatible(i, j));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, a: &GroupElement, b: &GroupElement) -> Result<Scalar, GradingError> {
        self.left.check(a)?;
        self.right.check(b)?;
        Ok(self.eval_unchecked(a, b))
    }

    pub(crate) fn eval_unchecked(&self, a: &GroupElement, b: &GroupElement) -> Scalar {
        let mut acc = self.field.one();
        for (i, &ai) in a.coords.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coords.iter().enumerate() {
                if bj != 0 && !self.values[i][j].is_one() {
                    acc = &acc * &self.values[i][j].pow(ai * bj).expect("bicharacter values are nonzero");
                }
            }
        }
        acc
    }

    /// The character `a ↦ t(a, b)` of the left group.
    pub fn dual_character(&self, b: &GroupElement) -> Result<Character, GradingError> {
        self.right.check(b)?;
        let values = (0..self.left.rank()).map(|i| self.eval_unchecked(&self.left.generator(i), b)).collect();
        Ok(Character { group: self.left.clone(), field: self.field, values })
    }

    /// The character `b ↦ t(a, b)` of the right group.
    pub fn dual_character_left(&self, a: &GroupElement) -> Result<Character, GradingError> {
        self.left.check(a)?;
        let values = (0..self.right.rank()).map(|j| self.eval_unchecked(a, &self.right.generator(j))).collect();
        Ok(Character { group: self.right.clone(), field: self.field, values })
    }

    /// `t'(b, a) = t(a, b)`.
    pub fn transpose(&self) -> Bicharacter {
        let values =
            (0..self.right.rank()).map(|j| (0..self.left.rank()).map(|i| self.values[i][j].clone()).collect()).collect();
        Bicharacter { left: self.right.clone(), right: self.left.clone(), field: self.field, values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qq() -> Scalar {
        Field::RationalFunctions.indeterminate().unwrap()
    }

    #[test]
    fn group_arithmetic() {
        let z = GradingGroup::integers();
        assert_eq!(z.try_add(&z.element(&[2]).unwrap(), &z.element(&[3]).unwrap()).unwrap(), z.element(&[5]).unwrap());
        let c4 = GradingGroup::cyclic(4).unwrap();
        assert_eq!(c4.add(&c4.element(&[3]).unwrap(), &c4.element(&[2]).unwrap()), c4.element(&[1]).unwrap());
        assert_eq!(c4.neg(&c4.zero()), c4.zero());
        assert!(matches!(z.try_add(&z.zero(), &GradingGroup::free(2).zero()), Err(GradingError::GroupMismatch(_))));
    }

    #[test]
    fn power_bicharacter() {
        let t = Bicharacter::diagonal_power(1, qq()).unwrap();
        let z = GradingGroup::integers();
        let v = t.eval(&z.element(&[2]).unwrap(), &z.element(&[3]).unwrap()).unwrap();
        assert_eq!(v, qq().pow(6).unwrap());
        assert!(t.eval(&z.zero(), &z.element(&[7]).unwrap()).unwrap().is_one());

        let sign = Bicharacter::diagonal_power(1, Field::Rationals.from_i64(-1)).unwrap();
        let v = sign.eval(&z.element(&[3]).unwrap(), &z.element(&[5]).unwrap()).unwrap();
        assert_eq!(v, Field::Rationals.from_i64(-1));
    }

    #[test]
    fn dual_characters() {
        let t = Bicharacter::diagonal_power(1, qq()).unwrap();
        let z = GradingGroup::integers();
        let chi = t.dual_character(&z.element(&[1]).unwrap()).unwrap();
        assert_eq!(chi.eval(&z.element(&[4]).unwrap()).unwrap(), qq().pow(4).unwrap());
        assert!(t.dual_character(&z.zero()).unwrap().eval(&z.element(&[9]).unwrap()).unwrap().is_one());
    }

    #[test]
    fn torsion_validation() {
        let q = Field::Rationals;
        let c2 = GradingGroup::cyclic(2).unwrap();
        let z = GradingGroup::integers();
        assert!(Bicharacter::new(c2.clone(), z.clone(), q, vec![vec![q.from_i64(-1)]]).is_ok());
        assert_eq!(
            Bicharacter::new(c2, z, q, vec![vec![q.from_i64(2)]]),
            Err(GradingError::TorsionIncompatible(0, 0))
        );
        let f7 = Field::prime(7).unwrap();
        let c3 = GradingGroup::cyclic(3).unwrap();
        // 2^3 = 8 = 1 mod 7
        assert!(Bicharacter::new(c3.clone(), c3, f7, vec![vec![f7.from_i64(2)]]).is_ok());
    }

    fn f5_bichar() -> Bicharacter {
        let f = Field::prime(5).unwrap();
        let a = GradingGroup::new(1, &[4]).unwrap();
        let b = GradingGroup::new(2, &[]).unwrap();
        Bicharacter::new(a, b, f, vec![vec![f.from_i64(2), f.from_i64(3)], vec![f.from_i64(4), f.from_i64(2)]]).unwrap()
    }

    proptest! {
        #[test]
        fn bilinearity(a in prop::array::uniform2(-6i64..6), a2 in prop::array::uniform2(-6i64..6),
                       b in prop::array::uniform2(-6i64..6), b2 in prop::array::uniform2(-6i64..6)) {
            let t = f5_bichar();
            let (ga, gb) = (t.left().clone(), t.right().clone());
            let (a, a2) = (ga.element(&a).unwrap(), ga.element(&a2).unwrap());
            let (b, b2) = (gb.element(&b).unwrap(), gb.element(&b2).unwrap());
            let lhs = t.eval(&ga.add(&a, &a2), &b).unwrap();
            prop_assert_eq!(lhs, t.eval(&a, &b).unwrap() * t.eval(&a2, &b).unwrap());
            let lhs = t.eval(&a, &gb.add(&b, &b2)).unwrap();
            prop_assert_eq!(lhs, t.eval(&a, &b).unwrap() * t.eval(&a, &b2).unwrap());
            let chi = t.dual_character(&b).unwrap();
            prop_assert_eq!(chi.eval(&a).unwrap(), t.eval(&a, &b).unwrap());
            let prod = chi.eval(&a).unwrap() * t.dual_character(&b2).unwrap().eval(&a).unwrap();
            prop_assert_eq!(prod, t.dual_character(&gb.add(&b, &b2)).unwrap().eval(&a).unwrap());
        }
    }
}

use std::sync::Arc;

use crate::algebra::twisted::tensor_sparse;
use crate::algebra::{twisted_tensor_algebra, GradedAlgebra};
use crate::grading::{Bicharacter, GroupElement};
use crate::hochschild::{sign, Cochain, CochainComplex, TwistedComplex, TwistedSource};
use crate::kernel::Scalar;

use super::StructureError;

/// `(f ⊠ g)([r] ⊗ [s]) = (-1)^{mn} f[r] ⊗ g[s]` for cochains `f` on `R^{⊗m}` and `g` on `S^{⊗n}`.
pub fn box_product(c: &TwistedComplex, f: &Cochain, g: &Cochain) -> Cochain {
    let (m, n) = (f.degree, g.degree);
    let (dr, ds) = (c.left_algebra().dim(), c.right_algebra().dim());
    let dn = c.right_module().dim();
    let e = c.field().from_i64(sign(m * n));
    let mut out = Cochain::zero(m + n);
    for (x, u) in &f.values {
        let r = crate::hochschild::decode(*x, m, dr);
        for (y, v) in &g.values {
            let s = crate::hochschild::decode(*y, n, ds);
            let src = c.encode(&TwistedSource { r: r.clone(), s });
            out.add_at(src, &e, &tensor_sparse(u, v, dn));
        }
    }
    out
}

/// The twisted complex with coefficients in `T = R ⊗^t S`, together with `T`
/// itself for the cup product.
#[derive(Debug)]
pub struct TwistedProduct {
    complex: TwistedComplex,
    algebra: Arc<GradedAlgebra>,
}

impl TwistedProduct {
    pub fn new(r: &Arc<GradedAlgebra>, s: &Arc<GradedAlgebra>, t: &Bicharacter, truncation: usize) -> Result<Self, StructureError> {
        let complex = TwistedComplex::regular(r, s, t.clone(), truncation)?;
        let algebra = Arc::new(twisted_tensor_algebra(r, s, t)?);
        Ok(TwistedProduct { complex, algebra })
    }

    pub fn complex(&self) -> &TwistedComplex {
        &self.complex
    }

    /// The algebra `R ⊗^t S`, basis `(i, j)` at `i * dim S + j`.
    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn twist(&self) -> &Bicharacter {
        self.complex.twist()
    }

    /// Coefficient of the cut `([r_1..r_i] ⊗ [s_1..s_j]) ⊗ ([r_{i+1}..] ⊗ [s_{j+1}..])` in `Δ([r] ⊗ [s])`.
    pub fn cut_coefficient(&self, src: &TwistedSource, i: usize, j: usize) -> Scalar {
        let c = &self.complex;
        let e = c.field().from_i64(sign((src.r.len() - i) * j));
        &e * &c.t_inv(&c.r_degree(&src.r[i..]), &c.s_degree(&src.s[..j]))
    }

    /// `Δ([r] ⊗ [s])` as a list of weighted cuts, including the empty ones.
    pub fn diagonal(&self, src: &TwistedSource) -> Vec<(Scalar, TwistedSource, TwistedSource)> {
        let mut out = Vec::new();
        for i in 0..=src.r.len() {
            for j in 0..=src.s.len() {
                let left = TwistedSource { r: src.r[..i].to_vec(), s: src.s[..j].to_vec() };
                let right = TwistedSource { r: src.r[i..].to_vec(), s: src.s[j..].to_vec() };
                out.push((self.cut_coefficient(src, i, j), left, right));
            }
        }
        out
    }

    /// The unit 0-cochain `[] ↦ 1`.
    pub fn unit_cochain(&self) -> Cochain {
        let mut f = Cochain::zero(0);
        f.add_at(0, &self.complex.field().one(), self.algebra.unit());
        f
    }

    /// `F ⌣ G = μ(F ⊗ G)Δ` with the Koszul sign `(-1)^{|G||F|}` and the product of `T`.
    pub fn cup(&self, f: &Cochain, g: &Cochain) -> Cochain {
        let c = &self.complex;
        let k = f.degree + g.degree;
        let koszul = c.field().from_i64(sign(f.degree * g.degree));
        let mut out = Cochain::zero(k);
        for (x1, u) in &f.values {
            let s1 = c.decode(f.degree, *x1);
            for (x2, v) in &g.values {
                let s2 = c.decode(g.degree, *x2);
                let src = TwistedSource { r: [s1.r.clone(), s2.r.clone()].concat(), s: [s1.s.clone(), s2.s].concat() };
                let coef = &koszul * &self.cut_coefficient(&src, s1.r.len(), s1.s.len());
                out.add_at(c.encode(&src), &coef, &self.algebra.multiply(u, v));
            }
        }
        out
    }

    /// Closed form of `(f ⊠ g) ⌣ (f' ⊠ g')` with sign `(-1)^{mn'+nn'+m'n'+mm'+mn}` and
    /// twist `t(a',b) t(a',s) t(r',b)`, where `a'` is the internal degree of `f'` and `b` that of `g`.
    pub fn cup_of_boxes(
        &self,
        (f, g): (&Cochain, &Cochain),
        (f2, g2): (&Cochain, &Cochain),
        a2: &GroupElement,
        b: &GroupElement,
    ) -> Cochain {
        let c = &self.complex;
        let (r, s) = (c.left_algebra(), c.right_algebra());
        let t = c.twist();
        let (m, n, m2, n2) = (f.degree, g.degree, f2.degree, g2.degree);
        let e = c.field().from_i64(sign(m * n2 + n * n2 + m2 * n2 + m * m2 + m * n));
        let t_ab = t.eval_unchecked(a2, b);
        let mut out = Cochain::zero(m + n + m2 + n2);
        let dec = |x: usize, len: usize, d: usize| crate::hochschild::decode(x, len, d);
        for (x1, u1) in &f.values {
            for (x2, u2) in &f2.values {
                let rr = [dec(*x1, m, r.dim()), dec(*x2, m2, r.dim())].concat();
                let r_prime = c.r_degree(&rr[m..]);
                let left = r.multiply(u1, u2);
                if left.is_empty() {
                    continue;
                }
                for (y1, v1) in &g.values {
                    for (y2, v2) in &g2.values {
                        let ss = [dec(*y1, n, s.dim()), dec(*y2, n2, s.dim())].concat();
                        let s_deg = c.s_degree(&ss[..n]);
                        let coef = &(&e * &t_ab) * &(&t.eval_unchecked(a2, &s_deg) * &t.eval_unchecked(&r_prime, b));
                        let src = c.encode(&TwistedSource { r: rr.clone(), s: ss });
                        out.add_at(src, &coef, &tensor_sparse(&left, &s.multiply(v1, v2), s.dim()));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::GradingGroup;
    use crate::hochschild::{apply_differential, HochschildComplex};
    use crate::kernel::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use crate::kernel::SparseVec;
    use std::collections::BTreeMap;

    fn qci(m: usize, n: usize, field: Field, q: Scalar) -> TwistedProduct {
        let r = Arc::new(GradedAlgebra::truncated_polynomial(m, field, "x").unwrap());
        let s = Arc::new(GradedAlgebra::truncated_polynomial(n, field, "y").unwrap());
        TwistedProduct::new(&r, &s, &Bicharacter::diagonal_power(1, q).unwrap(), 5).unwrap()
    }

    fn random_homogeneous<C: CochainComplex>(c: &C, n: usize, deg: &GroupElement, rng: &mut ChaCha8Rng) -> Cochain {
        let block = crate::hochschild::Block::new(c, n, deg);
        let coords: SparseVec =
            (0..block.len()).filter_map(|k| { let v = rng.gen_range(-3i64..=3); (v != 0).then(|| (k, c.field().from_i64(v))) }).collect();
        block.to_cochain(&coords)
    }

    fn tuples_of(tp: &TwistedProduct, n: usize) -> Vec<TwistedSource> {
        (0..tp.complex().source_dim(n)).map(|x| tp.complex().decode(n, x)).collect()
    }

    #[test]
    fn diagonal_is_counital_and_coassociative() {
        let f = Field::prime(7).unwrap();
        let tp = qci(2, 2, f, f.from_i64(3));
        for n in 0..=4 {
            for src in tuples_of(&tp, n) {
                let d = tp.diagonal(&src);
                let counit: Vec<_> = d.iter().filter(|(_, l, _)| l.r.is_empty() && l.s.is_empty()).collect();
                assert_eq!(counit.len(), 1);
                assert!(counit[0].0.is_one() && counit[0].2 == src);
                let mut lhs: BTreeMap<(TwistedSource, TwistedSource, TwistedSource), Scalar> = BTreeMap::new();
                let mut rhs = lhs.clone();
                for (c, x12, x3) in &d {
                    for (c2, x1, x2) in tp.diagonal(x12) {
                        let e = lhs.entry((x1, x2, x3.clone())).or_insert(f.zero());
                        *e = &*e + &(c * &c2);
                    }
                }
                for (c, x1, x23) in &d {
                    for (c2, x2, x3) in tp.diagonal(x23) {
                        let e = rhs.entry((x1.clone(), x2, x3)).or_insert(f.zero());
                        *e = &*e + &(c * &c2);
                    }
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn closed_form_matches_direct_cup() {
        let f = Field::prime(101).unwrap();
        let tp = qci(2, 3, f, f.from_i64(5));
        let (r, s) = (tp.complex().left_algebra().clone(), tp.complex().right_algebra().clone());
        let hr = HochschildComplex::regular(&r, 3);
        let hs = HochschildComplex::regular(&s, 3);
        let z = |k: i64| GradingGroup::integers().element(&[k]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (m, n, m2, n2) in [(0, 0, 1, 1), (1, 0, 0, 1), (1, 1, 1, 1), (2, 0, 0, 2), (0, 2, 2, 0), (1, 2, 1, 0), (2, 1, 0, 2)] {
            for (a, b, a2, b2) in [(0, 0, 0, 0), (-1, 1, 1, -2), (1, -1, 0, 2)] {
                let fc = random_homogeneous(&hr, m, &z(a), &mut rng);
                let gc = random_homogeneous(&hs, n, &z(b), &mut rng);
                let f2 = random_homogeneous(&hr, m2, &z(a2), &mut rng);
                let g2 = random_homogeneous(&hs, n2, &z(b2), &mut rng);
                let direct = tp.cup(&box_product(tp.complex(), &fc, &gc), &box_product(tp.complex(), &f2, &g2));
                let closed = tp.cup_of_boxes((&fc, &gc), (&f2, &g2), &z(a2), &z(b));
                assert_eq!(direct, closed, "bidegrees {:?}", (m, n, m2, n2));
            }
        }
    }

    #[test]
    fn unit_cochain_is_a_two_sided_unit() {
        let f = Field::prime(11).unwrap();
        let tp = qci(2, 2, f, f.from_i64(2));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let deg = GradingGroup::join(&GradingGroup::integers().element(&[-1]).unwrap(), &GradingGroup::integers().zero());
        let g = random_homogeneous(tp.complex(), 2, &deg, &mut rng);
        assert_eq!(tp.cup(&tp.unit_cochain(), &g), g);
        assert_eq!(tp.cup(&g, &tp.unit_cochain()), g);
    }

    #[test]
    fn cup_is_a_derivation_for_the_differential() {
        let f = Field::prime(13).unwrap();
        let tp = qci(2, 2, f, f.from_i64(3));
        let c = tp.complex();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g2 = GradingGroup::integers();
        for (p, q) in [(0, 1), (1, 1), (1, 2), (2, 1)] {
            let d1 = GradingGroup::join(&g2.element(&[1]).unwrap(), &g2.element(&[-1]).unwrap());
            let d2 = GradingGroup::join(&g2.element(&[0]).unwrap(), &g2.element(&[-1]).unwrap());
            let x = random_homogeneous(c, p, &d1, &mut rng);
            let y = random_homogeneous(c, q, &d2, &mut rng);
            let lhs = apply_differential(c, &tp.cup(&x, &y));
            let mut rhs = tp.cup(&apply_differential(c, &x), &y);
            rhs.add_scaled(&f.from_i64(sign(p)), &tp.cup(&x, &apply_differential(c, &y)));
            assert_eq!(lhs, rhs, "degrees {p},{q}");
        }
    }
}

use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::grading::{Bicharacter, GradingGroup, GroupElement};
use crate::hochschild::{cohomology, sign, Cochain, CohomologySpace};
use crate::kernel::{ColumnSolver, Field, Scalar, SparseVec};

use super::{box_product, OrbitAlgebra, OrbitCochain, Side, StructureError, TwistedProduct};

/// `f ⊗ g` with `f ∈ C^m(R, R_b̂)^a` and `g ∈ C^n(S, _âS)^b`: the twist of
/// each factor is the internal degree of the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureTensor {
    pub f: OrbitCochain,
    pub g: OrbitCochain,
    pub a: GroupElement,
    pub b: GroupElement,
}

impl PureTensor {
    pub fn new(f: OrbitCochain, a: GroupElement, g: OrbitCochain, b: GroupElement) -> Result<Self, StructureError> {
        if f.twist != b || g.twist != a {
            return Err(StructureError::DegreeMismatch(format!(
                "factor twists ({}, {}) do not match internal degrees ({a}, {b})",
                f.twist, g.twist
            )));
        }
        Ok(PureTensor { f, g, a, b })
    }

    /// Bidegree `(m, n)`.
    pub fn bidegree(&self) -> (usize, usize) {
        (self.f.degree(), self.g.degree())
    }

    pub fn degree(&self) -> usize {
        self.f.degree() + self.g.degree()
    }
}

/// A linear combination of pure tensors of one total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposedClass {
    pub degree: usize,
    pub terms: Vec<(Scalar, PureTensor)>,
}

impl DecomposedClass {
    pub fn zero(degree: usize) -> Self {
        DecomposedClass { degree, terms: Vec::new() }
    }

    pub fn pure(c: Scalar, x: PureTensor) -> Self {
        DecomposedClass { degree: x.degree(), terms: vec![(c, x)] }
    }

    pub fn push(&mut self, c: Scalar, x: PureTensor) -> Result<(), StructureError> {
        if x.degree() != self.degree {
            return Err(StructureError::DegreeMismatch(format!("degree {} term in a degree {} class", x.degree(), self.degree)));
        }
        if !c.is_zero() {
            self.terms.push((c, x));
        }
        Ok(())
    }

    /// The common internal degree `(a, b)` of the terms; `None` if empty or mixed.
    pub fn bidegree(&self) -> Option<(GroupElement, GroupElement)> {
        let (_, first) = self.terms.first()?;
        self.terms
            .iter()
            .all(|(_, x)| x.a == first.a && x.b == first.b)
            .then(|| (first.a.clone(), first.b.clone()))
    }

    pub fn extend(&mut self, c: &Scalar, other: &DecomposedClass) -> Result<(), StructureError> {
        for (d, x) in &other.terms {
            self.push(c * d, x.clone())?;
        }
        Ok(())
    }
}

/// Orbit algebras of both factors and the twisted product complex, tied
/// together by `φ(f ⊗ g) = f ⊠ g`.
#[derive(Debug)]
pub struct TwistedStructure {
    r: OrbitAlgebra,
    s: OrbitAlgebra,
    product: TwistedProduct,
}

impl TwistedStructure {
    pub fn new(r: &Arc<GradedAlgebra>, s: &Arc<GradedAlgebra>, t: &Bicharacter, truncation: usize) -> Result<Self, StructureError> {
        Ok(TwistedStructure {
            r: OrbitAlgebra::new(r.clone(), t.clone(), Side::R, truncation)?,
            s: OrbitAlgebra::new(s.clone(), t.clone(), Side::S, truncation)?,
            product: TwistedProduct::new(r, s, t, truncation)?,
        })
    }

    pub fn r_side(&self) -> &OrbitAlgebra {
        &self.r
    }

    pub fn s_side(&self) -> &OrbitAlgebra {
        &self.s
    }

    pub fn product(&self) -> &TwistedProduct {
        &self.product
    }

    pub fn twist(&self) -> &Bicharacter {
        self.product.twist()
    }

    /// Internal degree `(a, b)` as an element of `A ⊕ B`.
    pub fn joint_degree(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GradingGroup::join(a, b)
    }

    pub fn phi_pure(&self, x: &PureTensor) -> Cochain {
        box_product(self.product.complex(), &x.f.cochain, &x.g.cochain)
    }

    pub fn phi(&self, x: &DecomposedClass) -> Cochain {
        Cochain::sum(x.degree, x.terms.iter().map(|(c, p)| (c.clone(), self.phi_pure(p))))
    }

    fn t_inv(&self, a: &GroupElement, b: &GroupElement) -> Scalar {
        self.twist().eval_unchecked(a, b).inv().expect("bicharacter values are nonzero")
    }

    /// `(f⊗g)⌣(f'⊗g') = (-1)^{m'n} t(a',b)^{-1} (f⌣_t f') ⊗ (g⌣_t g')`.
    pub fn cup_pure(&self, x: &PureTensor, y: &PureTensor) -> (Scalar, PureTensor) {
        let (_, n) = x.bidegree();
        let (m2, _) = y.bidegree();
        let c = &self.r.algebra().field().from_i64(sign(m2 * n)) * &self.t_inv(&y.a, &x.b);
        let a = self.r.algebra().group().add(&x.a, &y.a);
        let b = self.s.algebra().group().add(&x.b, &y.b);
        let f = self.r.cup(&x.f, &y.f);
        let g = self.s.cup(&x.g, &y.g);
        (c, PureTensor { f, g, a, b })
    }

    pub fn combined_cup(&self, x: &DecomposedClass, y: &DecomposedClass) -> DecomposedClass {
        let mut out = DecomposedClass::zero(x.degree + y.degree);
        for (c1, p) in &x.terms {
            for (c2, q) in &y.terms {
                let (c, z) = self.cup_pure(p, q);
                out.push(&(c1 * c2) * &c, z).expect("degrees add");
            }
        }
        out
    }

    /// `[f⊗g, f'⊗g'] = (-1)^{(m'-1)n} [f,f']_t ⊗ (g⌣_t g') + (-1)^{(n-1)m'} (f⌣_t f') ⊗ [g,g']_t`.
    pub fn bracket_pure(&self, x: &PureTensor, y: &PureTensor) -> Result<DecomposedClass, StructureError> {
        let (m, n) = x.bidegree();
        let (m2, n2) = y.bidegree();
        let field = self.r.algebra().field();
        let degree = (x.degree() + y.degree()).saturating_sub(1);
        let a = self.r.algebra().group().add(&x.a, &y.a);
        let b = self.s.algebra().group().add(&x.b, &y.b);
        let mut out = DecomposedClass::zero(degree);
        if x.degree() + y.degree() == 0 {
            return Ok(out);
        }
        if m + y.f.degree() >= 1 {
            let f = self.r.bracket(&x.f, &y.f)?;
            let g = self.s.cup(&x.g, &y.g);
            out.push(field.from_i64(sign((m2 + 1) * n)), PureTensor { f, g, a: a.clone(), b: b.clone() })?;
        }
        if x.g.degree() + n2 >= 1 {
            let f = self.r.cup(&x.f, &y.f);
            let g = self.s.bracket(&x.g, &y.g)?;
            out.push(field.from_i64(sign((n + 1) * m2)), PureTensor { f, g, a, b })?;
        }
        Ok(out)
    }

    pub fn combined_bracket(&self, x: &DecomposedClass, y: &DecomposedClass) -> Result<DecomposedClass, StructureError> {
        let mut out = DecomposedClass::zero((x.degree + y.degree).saturating_sub(1));
        for (c1, p) in &x.terms {
            for (c2, q) in &y.terms {
                out.extend(&(c1 * c2), &self.bracket_pure(p, q)?)?;
            }
        }
        Ok(out)
    }

    /// The degree-`n` block of internal degree `(a, b)` on both sides of `φ`.
    pub fn block(&self, n: usize, a: &GroupElement, b: &GroupElement) -> Result<DecomposedBlock, StructureError> {
        let target = cohomology(self.product.complex(), n, &self.joint_degree(a, b))?;
        let mut factors = Vec::with_capacity(n + 1);
        let mut basis = Vec::new();
        for i in 0..=n {
            let hr = self.r.cohomology(b, i, a)?;
            let hs = self.s.cohomology(a, n - i, b)?;
            for ri in 0..hr.dim() {
                for sj in 0..hs.dim() {
                    basis.push((i, ri, sj));
                }
            }
            factors.push((hr, hs));
        }
        let mut block = DecomposedBlock {
            n,
            a: a.clone(),
            b: b.clone(),
            target,
            factors,
            basis,
            images: Vec::new(),
            field: self.r.algebra().field(),
            solver: None,
        };
        let mut images = Vec::with_capacity(block.basis.len());
        for k in 0..block.basis.len() {
            let z = self.phi_pure(&block.basis_tensor(k));
            let coords = block.target.class_coordinates(&z)?;
            images.push(coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect::<SparseVec>());
        }
        block.solver = Some(ColumnSolver::new(self.r.algebra().field(), &images));
        block.images = images;
        Ok(block)
    }
}

/// `⊕_{i+j=n} HH^i(R, R_b̂)^a ⊗ HH^j(S, _âS)^b` next to `HH^n` of the twisted
/// complex in degree `(a, b)`, with the matrix of `φ` between them.
#[derive(Debug)]
pub struct DecomposedBlock {
    pub n: usize,
    pub a: GroupElement,
    pub b: GroupElement,
    pub target: CohomologySpace,
    /// `(HH^i(R, R_b̂)^a, HH^{n-i}(S, _âS)^b)` for `i = 0..=n`.
    pub factors: Vec<(CohomologySpace, CohomologySpace)>,
    /// Tensor basis `(i, r-index, s-index)`.
    pub basis: Vec<(usize, usize, usize)>,
    /// Target class coordinates of `φ` of each basis tensor.
    pub images: Vec<SparseVec>,
    field: Field,
    solver: Option<ColumnSolver>,
}

impl DecomposedBlock {
    /// Dimension of the tensor side.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_tensor(&self, k: usize) -> PureTensor {
        let (i, ri, sj) = self.basis[k];
        let (hr, hs) = &self.factors[i];
        PureTensor {
            f: OrbitCochain::new(self.b.clone(), hr.representative(ri)),
            g: OrbitCochain::new(self.a.clone(), hs.representative(sj)),
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }

    pub fn basis_class(&self, k: usize) -> DecomposedClass {
        DecomposedClass::pure(self.field.one(), self.basis_tensor(k))
    }

    fn solver(&self) -> &ColumnSolver {
        self.solver.as_ref().expect("solver is built with the block")
    }

    pub fn image_rank(&self) -> usize {
        self.solver().rank()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.image_rank() == self.target.dim() && self.dim() == self.target.dim()
    }

    /// Tensor coordinates of the class with the given target coordinates.
    pub fn phi_inverse(&self, class: &[Scalar]) -> Result<Vec<Scalar>, StructureError> {
        let v: SparseVec = class.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect();
        let x = self.solver().solve(&v).ok_or(StructureError::NotInImage)?;
        let mut out = vec![self.field.zero(); self.dim()];
        for (k, c) in x {
            out[k] = c;
        }
        Ok(out)
    }

    /// `φ^{-1}` of a cocycle of the twisted complex, as a combination of basis tensors.
    pub fn decompose(&self, z: &Cochain) -> Result<DecomposedClass, StructureError> {
        let coords = self.phi_inverse(&self.target.class_coordinates(z)?)?;
        let mut out = DecomposedClass::zero(self.n);
        for (k, c) in coords.into_iter().enumerate() {
            out.push(c, self.basis_tensor(k))?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::{apply_differential, cohomology_dim, Block, CochainComplex, HochschildComplex};
    use crate::kernel::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z(k: i64) -> GroupElement {
        GradingGroup::integers().element(&[k]).unwrap()
    }

    fn qci(m: usize, n: usize, field: Field, q: Scalar, trunc: usize) -> TwistedStructure {
        let r = Arc::new(GradedAlgebra::truncated_polynomial(m, field, "x").unwrap());
        let s = Arc::new(GradedAlgebra::truncated_polynomial(n, field, "y").unwrap());
        TwistedStructure::new(&r, &s, &Bicharacter::diagonal_power(1, q).unwrap(), trunc).unwrap()
    }

    fn random(o: &OrbitAlgebra, twist: i64, n: usize, deg: i64, rng: &mut ChaCha8Rng) -> OrbitCochain {
        let c = o.complex(&z(twist)).unwrap();
        let block = Block::new(c.as_ref(), n, &z(deg));
        let coords: SparseVec = (0..block.len())
            .filter_map(|k| {
                let v = rng.gen_range(-3i64..=3);
                (v != 0).then(|| (k, c.field().from_i64(v)))
            })
            .collect();
        OrbitCochain::new(z(twist), block.to_cochain(&coords))
    }

    #[test]
    fn phi_is_a_chain_map() {
        let field = Field::RationalFunctions;
        let ts = qci(2, 3, field, field.indeterminate().unwrap(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let (m, n) = (rng.gen_range(0..=2usize), rng.gen_range(0..=2usize));
            if m + n > 2 {
                continue;
            }
            let (a, b) = (rng.gen_range(-1..=2i64), rng.gen_range(-1..=2i64));
            let f = random(ts.r_side(), b, m, a, &mut rng);
            let g = random(ts.s_side(), a, n, b, &mut rng);
            let lhs = apply_differential(ts.product().complex(), &ts.phi_pure(&PureTensor::new(f.clone(), z(a), g.clone(), z(b)).unwrap()));
            let df = PureTensor::new(ts.r_side().differential(&f).unwrap(), z(a), g.clone(), z(b)).unwrap();
            let dg = PureTensor::new(f, z(a), ts.s_side().differential(&g).unwrap(), z(b)).unwrap();
            let mut rhs = ts.phi_pure(&df);
            rhs.add_scaled(&field.from_i64(sign(m)), &ts.phi_pure(&dg));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cup_of_pure_tensors_is_exact_at_chain_level() {
        let field = Field::prime(11).unwrap();
        let ts = qci(2, 2, field, field.from_i64(3), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let degs: Vec<usize> = (0..4).map(|_| rng.gen_range(0..=1)).collect();
            let (a, b, a2, b2) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1), rng.gen_range(-1..=1), rng.gen_range(-1..=1));
            let x = PureTensor::new(random(ts.r_side(), b, degs[0], a, &mut rng), z(a), random(ts.s_side(), a, degs[1], b, &mut rng), z(b)).unwrap();
            let y = PureTensor::new(random(ts.r_side(), b2, degs[2], a2, &mut rng), z(a2), random(ts.s_side(), a2, degs[3], b2, &mut rng), z(b2)).unwrap();
            let direct = ts.product().cup(&ts.phi_pure(&x), &ts.phi_pure(&y));
            let (c, p) = ts.cup_pure(&x, &y);
            assert_eq!(direct, ts.phi_pure(&p).scaled(&c));
        }
    }

    #[test]
    fn blocks_are_isomorphisms_matching_the_product_algebra() {
        for (field, q) in [(Field::prime(5).unwrap(), Field::prime(5).unwrap().from_i64(2)), (Field::RationalFunctions, Field::RationalFunctions.indeterminate().unwrap())] {
            let ts = qci(2, 2, field, q, 3);
            let t_alg = ts.product().algebra().clone();
            let bar = HochschildComplex::regular(&t_alg, 3);
            let g2 = t_alg.group().clone();
            for n in 0..=2 {
                for a in -2..=2 {
                    for b in -2..=2 {
                        let block = ts.block(n, &z(a), &z(b)).unwrap();
                        assert!(block.is_isomorphism(), "n={n} a={a} b={b}");
                        let own = cohomology_dim(&bar, n, &g2.element(&[a, b]).unwrap()).unwrap();
                        assert_eq!(own, block.dim());
                    }
                }
            }
        }
    }

    #[test]
    fn decompose_inverts_phi() {
        let field = Field::prime(7).unwrap();
        let ts = qci(2, 3, field, field.one(), 3);
        let blocks: Vec<_> = (-3..=3)
            .flat_map(|a| (-3..=3).map(move |b| (a, b)))
            .map(|(a, b)| ts.block(2, &z(a), &z(b)).unwrap())
            .filter(|b| b.dim() > 0)
            .collect();
        assert!(blocks.len() > 2);
        for (block, k) in blocks.iter().flat_map(|b| (0..b.dim()).map(move |k| (b, k))) {
            let z1 = ts.phi(&block.basis_class(k));
            let back = block.decompose(&z1).unwrap();
            assert_eq!(back.terms.len(), 1);
            assert_eq!(back.terms[0].1, block.basis_tensor(k));
        }
    }
}

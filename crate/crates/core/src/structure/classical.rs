use std::collections::HashMap;
use std::sync::Arc;

use crate::grading::GroupElement;
use crate::hochschild::{cohomology, decode, encode, sign, Cochain, CochainComplex, HochschildComplex, TwistedSource};
use crate::kernel::{ColumnSolver, Scalar, SparseAccumulator, SparseVec};

use super::{StructureError, TwistedProduct};

fn collect(degree: usize, acc: HashMap<usize, SparseAccumulator>) -> Cochain {
    let mut out = Cochain::zero(degree);
    for (x, a) in acc {
        let v = a.finish();
        if !v.is_empty() {
            out.values.insert(x, v);
        }
    }
    out
}

/// `(f ⌣ g)[a_1|…|a_{m+n}] = (-1)^{mn} f[a_1|…|a_m] g[a_{m+1}|…]` on `C^*(A, A)`.
pub fn classical_cup(c: &HochschildComplex, f: &Cochain, g: &Cochain) -> Cochain {
    let alg = c.algebra();
    let (m, n) = (f.degree, g.degree);
    let e = alg.field().from_i64(sign(m * n));
    let shift = alg.dim().pow(n as u32);
    let mut out = Cochain::zero(m + n);
    for (x, u) in &f.values {
        for (y, v) in &g.values {
            out.add_at(x * shift + y, &e, &alg.multiply(u, v));
        }
    }
    out
}

/// `f ∘ g = Σ_i (-1)^{i(n-1)} f[a_1|…|a_i|g[a_{i+1}|…|a_{i+n}]|…]` on `C^*(A, A)`.
pub fn classical_circle(c: &HochschildComplex, f: &Cochain, g: &Cochain) -> Cochain {
    let (m, n) = (f.degree, g.degree);
    if m == 0 {
        return Cochain::zero(n.saturating_sub(1));
    }
    let d = c.algebra().dim();
    let field = c.algebra().field();
    let mut acc: HashMap<usize, SparseAccumulator> = HashMap::new();
    for (y, w) in &f.values {
        let ys = decode(*y, m, d);
        for i in 0..m {
            let e = field.from_i64(sign(i * (n + 1)));
            for (z, v) in &g.values {
                let Some((_, vk)) = v.iter().find(|(k, _)| *k == ys[i]) else { continue };
                let zs = decode(*z, n, d);
                let x = encode(&[&ys[..i], &zs[..], &ys[i + 1..]].concat(), d);
                acc.entry(x).or_default().add_scaled(&(&e * vk), w);
            }
        }
    }
    collect(m + n - 1, acc)
}

/// The Gerstenhaber bracket `f∘g - (-1)^{(m-1)(n-1)} g∘f`.
pub fn classical_bracket(c: &HochschildComplex, f: &Cochain, g: &Cochain) -> Cochain {
    let (m, n) = (f.degree, g.degree);
    if m + n == 0 {
        return Cochain::zero(0);
    }
    let mut out = classical_circle(c, f, g);
    out.add_scaled(&c.algebra().field().from_i64(-sign((m + 1) * (n + 1))), &classical_circle(c, g, f));
    out
}

/// Pull-back along the twisted shuffle map `B(R) ⊗^t B(S) → B(R ⊗^t S)`,
/// which sends `[r_1|…|r_p] ⊗ [s_1|…|s_q]` to the signed sum over shuffles of
/// `r_i ⊗ 1` and `1 ⊗ s_j`, each `s_j` moved in front of an `r_i` costing
/// `-t(r_i, s_j)^{-1}`.
#[derive(Debug)]
pub struct Shuffle<'a> {
    product: &'a TwistedProduct,
    classical: Arc<HochschildComplex>,
    r_embed: Vec<usize>,
    s_embed: Vec<usize>,
}

impl<'a> Shuffle<'a> {
    pub fn new(product: &'a TwistedProduct, truncation: usize) -> Result<Self, StructureError> {
        let c = product.complex();
        let (ra, sa) = (c.left_algebra(), c.right_algebra());
        let (ur, us) = (ra.unit_index().ok_or(StructureError::UnitNotBasis)?, sa.unit_index().ok_or(StructureError::UnitNotBasis)?);
        let ds = sa.dim();
        Ok(Shuffle {
            product,
            classical: Arc::new(HochschildComplex::regular(product.algebra(), truncation)),
            r_embed: (0..ra.dim()).map(|i| i * ds + us).collect(),
            s_embed: (0..ds).map(|j| ur * ds + j).collect(),
        })
    }

    /// `C^*(T, T)` on the plain bar resolution of `T = R ⊗^t S`.
    pub fn classical(&self) -> &Arc<HochschildComplex> {
        &self.classical
    }

    /// Weighted shuffles of one source, as `(coefficient, T-tuple index)`.
    fn shuffles(&self, src: &TwistedSource) -> Vec<(Scalar, usize)> {
        let c = self.product.complex();
        let field = c.field();
        let (p, q) = (src.r.len(), src.s.len());
        let (ra, sa) = (c.left_algebra(), c.right_algebra());
        let dt = self.product.algebra().dim();
        let mut out = Vec::new();
        let mut tuple = Vec::with_capacity(p + q);
        // positions of the r's, increasing
        let mut pos: Vec<usize> = (0..p).collect();
        loop {
            tuple.clear();
            let mut coef = field.one();
            let (mut i, mut j) = (0, 0);
            for k in 0..p + q {
                if i < p && pos[i] == k {
                    for sj in &src.s[..j] {
                        coef = -&(&coef * &c.t_inv(ra.degree(src.r[i]), sa.degree(*sj)));
                    }
                    tuple.push(self.r_embed[src.r[i]]);
                    i += 1;
                } else {
                    tuple.push(self.s_embed[src.s[j]]);
                    j += 1;
                }
            }
            out.push((coef, encode(&tuple, dt)));
            // next combination
            let mut k = p;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if pos[k] < q + k {
                    pos[k] += 1;
                    for l in k + 1..p {
                        pos[l] = pos[l - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// `sh^* F`, a cochain of the twisted complex.
    pub fn pull_back(&self, f: &Cochain) -> Cochain {
        let c = self.product.complex();
        let n = f.degree;
        let mut out = Cochain::zero(n);
        for x in 0..c.source_dim(n) {
            let src = c.decode(n, x);
            let mut acc = SparseAccumulator::new();
            for (coef, y) in self.shuffles(&src) {
                if let Some(v) = f.get(y) {
                    acc.add_scaled(&coef, v);
                }
            }
            let v = acc.finish();
            if !v.is_empty() {
                out.values.insert(x, v);
            }
        }
        out
    }

    /// A cocycle of `C^*(T, T)` whose pull-back is cohomologous to the
    /// twisted cocycle `z` of internal degree `degree`.
    pub fn lift(&self, z: &Cochain, degree: &GroupElement) -> Result<Cochain, StructureError> {
        let n = z.degree;
        let classical = cohomology(self.classical.as_ref(), n, degree)?;
        let twisted = cohomology(self.product.complex(), n, degree)?;
        let field = self.product.complex().field();
        let images = (0..classical.dim())
            .map(|k| -> Result<SparseVec, StructureError> {
                let coords = twisted.class_coordinates(&self.pull_back(&classical.representative(k)))?;
                Ok(coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let target: SparseVec = twisted.class_coordinates(z)?.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let x = ColumnSolver::new(field, &images).solve(&target).ok_or(StructureError::NotInImage)?;
        Ok(Cochain::sum(n, x.into_iter().map(|(k, c)| (c, classical.representative(k)))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedAlgebra;
    use crate::grading::{Bicharacter, GradingGroup};
    use crate::hochschild::{apply_differential, Block};
    use crate::kernel::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn product(m: usize, n: usize, field: Field, q: Scalar) -> TwistedProduct {
        let r = Arc::new(GradedAlgebra::truncated_polynomial(m, field, "x").unwrap());
        let s = Arc::new(GradedAlgebra::truncated_polynomial(n, field, "y").unwrap());
        TwistedProduct::new(&r, &s, &Bicharacter::diagonal_power(1, q).unwrap(), 4).unwrap()
    }

    #[test]
    fn shuffle_pull_back_is_a_chain_map() {
        let field = Field::RationalFunctions;
        let tp = product(2, 3, field, field.indeterminate().unwrap());
        let sh = Shuffle::new(&tp, 4).unwrap();
        let c = sh.classical();
        let g2 = GradingGroup::integers().direct_sum(&GradingGroup::integers());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 0..=2 {
            for _ in 0..6 {
                let deg = g2.element(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)]).unwrap();
                let block = Block::new(c.as_ref(), n, &deg);
                let coords: SparseVec = (0..block.len())
                    .filter_map(|k| {
                        let v = rng.gen_range(-2i64..=2);
                        (v != 0).then(|| (k, field.from_i64(v)))
                    })
                    .collect();
                let f = block.to_cochain(&coords);
                let lhs = sh.pull_back(&apply_differential(c.as_ref(), &f));
                let rhs = apply_differential(tp.complex(), &sh.pull_back(&f));
                assert_eq!(lhs, rhs, "n={n}");
            }
        }
    }
}

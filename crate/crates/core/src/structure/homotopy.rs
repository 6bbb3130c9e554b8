use std::collections::HashMap;

use crate::algebra::twisted::tensor_sparse;
use crate::grading::GroupElement;
use crate::hochschild::{sign, Cochain, CochainComplex, TwistedSource};
use crate::kernel::{Scalar, SparseAccumulator, SparseVec};

use super::TwistedProduct;

impl TwistedProduct {
    fn t(&self, a: &GroupElement, b: &GroupElement) -> Scalar {
        self.complex().twist().eval_unchecked(a, b)
    }

    fn t_inverse(&self, a: &GroupElement, b: &GroupElement) -> Scalar {
        self.t(a, b).inv().expect("bicharacter values are nonzero")
    }

    /// `F ∘ F'` on the twisted complex, read off from the homotopy
    /// `Φ = (G ⊗ F^l + F^r ⊗ G)σ` between the two diagonals: `F'` is applied to
    /// the middle factor of `Δ^{(2)}` and the result is fed back into `F`
    /// either through the bar of `R` (with the `S` part acting on the left)
    /// or through the bar of `S` (with the `R` part acting on the right).
    pub fn homotopy_circle(&self, f: &Cochain, f2: &Cochain) -> Cochain {
        let (k, k2) = (f.degree, f2.degree);
        if k + k2 == 0 {
            return Cochain::zero(0);
        }
        let c = self.complex();
        let field = c.field();
        let (ra, sa) = (c.left_algebra(), c.right_algebra());
        let ds = sa.dim();
        let tp = self.algebra();
        let inner: Vec<(TwistedSource, &SparseVec)> = f2.values.iter().map(|(x, v)| (c.decode(k2, *x), v)).collect();
        let mut acc: HashMap<usize, SparseAccumulator> = HashMap::new();
        let mut push = |r: Vec<usize>, s: Vec<usize>, coef: Scalar, value: SparseVec| {
            let x = c.encode(&TwistedSource { r, s });
            acc.entry(x).or_default().add_scaled(&coef, &value);
        };
        for (x, w) in &f.values {
            let src = c.decode(k, *x);
            let (u, v) = (&src.r, &src.s);
            let u_deg = c.r_degree(u);
            let v_deg = c.s_degree(v);
            // The R-bar route: u[l] is the R part of F'(X2), X2's S tuple is
            // prepended to v and the S part of F'(X2) multiplies from the left.
            for (l, &rho) in u.iter().enumerate() {
                for (x2, val) in &inner {
                    for (idx, cval) in val.iter() {
                        if idx / ds != rho {
                            continue;
                        }
                        let vs = idx % ds;
                        let vs_deg = sa.degree(vs);
                        let out_r = [&u[..l], &x2.r[..], &u[l + 1..]].concat();
                        let out_s = [&x2.s[..], &v[..]].concat();
                        let (m, j, i) = (out_r.len(), l + x2.r.len(), x2.s.len());
                        let r_after = c.r_degree(&out_r[j..]);
                        let s_inner = c.s_degree(&x2.s);
                        let e = field.from_i64(sign(i * (m - j) + (k2 + 1) * l));
                        let coef = &(&(&e * &self.t_inverse(&r_after, &s_inner)) * &self.t(&r_after, vs_deg))
                            * &(&self.t_inverse(&u_deg, vs_deg) * cval);
                        let left = tensor_sparse(ra.unit(), &vec![(vs, field.one())], ds);
                        push(out_r, out_s, coef, tp.multiply(&left, w));
                    }
                }
            }
            // The S-bar route: v[p] is the S part of F'(X2), X2's R tuple is
            // appended to u and the R part of F'(X2) multiplies from the right.
            let l = u.len();
            for (p, &vs) in v.iter().enumerate() {
                let s_before = c.s_degree(&v[..p]);
                for (x2, val) in &inner {
                    for (idx, cval) in val.iter() {
                        if idx % ds != vs {
                            continue;
                        }
                        let rho = idx / ds;
                        let rho_deg = ra.degree(rho);
                        let out_r = [&u[..], &x2.r[..]].concat();
                        let out_s = [&v[..p], &x2.s[..], &v[p + 1..]].concat();
                        let m = out_r.len();
                        let e = field.from_i64(sign(p * (m - l) + k2 * (l + p) + l + p));
                        let coef = &(&(&e * &self.t_inverse(&c.r_degree(&x2.r), &s_before)) * &self.t(rho_deg, &s_before))
                            * &(&self.t_inverse(rho_deg, &v_deg) * cval);
                        let right = tensor_sparse(&vec![(rho, field.one())], sa.unit(), ds);
                        push(out_r, out_s, coef, tp.multiply(w, &right));
                    }
                }
            }
        }
        let mut out = Cochain::zero(k + k2 - 1);
        for (x, a) in acc {
            let v = a.finish();
            if !v.is_empty() {
                out.values.insert(x, v);
            }
        }
        out
    }

    /// `[F, F'] = F∘F' - (-1)^{(|F|-1)(|F'|-1)} F'∘F` with the homotopy circle.
    pub fn homotopy_bracket(&self, f: &Cochain, f2: &Cochain) -> Cochain {
        let e = self.complex().field().from_i64(-sign((f.degree + 1) * (f2.degree + 1)));
        let mut out = self.homotopy_circle(f, f2);
        out.add_scaled(&e, &self.homotopy_circle(f2, f));
        out
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::GradedAlgebra;
    use crate::grading::{Bicharacter, GradingGroup};
    use crate::hochschild::apply_differential;
    use crate::kernel::Field;
    use crate::structure::{classical_bracket, DecomposedBlock, Shuffle, TwistedStructure};

    fn z(k: i64) -> GroupElement {
        GradingGroup::integers().element(&[k]).unwrap()
    }

    fn structure(m: usize, n: usize, field: Field, q: Scalar, trunc: usize) -> TwistedStructure {
        let r = Arc::new(GradedAlgebra::truncated_polynomial(m, field, "x").unwrap());
        let s = Arc::new(GradedAlgebra::truncated_polynomial(n, field, "y").unwrap());
        TwistedStructure::new(&r, &s, &Bicharacter::diagonal_power(1, q).unwrap(), trunc).unwrap()
    }

    fn blocks(ts: &TwistedStructure, max: usize) -> Vec<DecomposedBlock> {
        let mut out = Vec::new();
        for n in 0..=max {
            for a in -3..=3 {
                for b in -3..=3 {
                    let block = ts.block(n, &z(a), &z(b)).unwrap();
                    if block.dim() > 0 {
                        out.push(block);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn three_brackets_agree_in_cohomology() {
        for (field, q) in [
            (Field::RationalFunctions, Field::RationalFunctions.indeterminate().unwrap()),
            (Field::Rationals, Field::Rationals.from_i64(1)),
            (Field::Rationals, Field::Rationals.from_i64(-1)),
            (Field::prime(5).unwrap(), Field::prime(5).unwrap().from_i64(2)),
        ] {
            check_brackets(&structure(2, 2, field, q, 3));
        }
    }

    fn check_brackets(ts: &TwistedStructure) {
        let bs = blocks(ts, 2);
        let classes: Vec<_> = bs.iter().flat_map(|b| (0..b.dim()).map(move |k| (b, k))).collect();
        for (b1, k1) in &classes {
            for (b2, k2) in &classes {
                if b1.n + b2.n > 3 || b1.n + b2.n == 0 {
                    continue;
                }
                let (x, y) = (b1.basis_class(*k1), b2.basis_class(*k2));
                let (fx, fy) = (ts.phi(&x), ts.phi(&y));
                let h = ts.product().homotopy_bracket(&fx, &fy);
                let comb = ts.phi(&ts.combined_bracket(&x, &y).unwrap());
                assert!(apply_differential(ts.product().complex(), &h).is_zero());
                let a = ts.r_side().algebra().group().add(&b1.a, &b2.a);
                let b = ts.s_side().algebra().group().add(&b1.b, &b2.b);
                let target = ts.block(b1.n + b2.n - 1, &a, &b).unwrap();
                let (ch, cc) = (target.target.class_coordinates(&h).unwrap(), target.target.class_coordinates(&comb).unwrap());
                let sh = Shuffle::new(ts.product(), 4).unwrap();
                let (lx, ly) = (sh.lift(&fx, &ts.joint_degree(&b1.a, &b1.b)).unwrap(), sh.lift(&fy, &ts.joint_degree(&b2.a, &b2.b)).unwrap());
                let cl = sh.pull_back(&classical_bracket(sh.classical(), &lx, &ly));
                let ccl = target.target.class_coordinates(&cl).unwrap();
                assert_eq!(ch, cc, "degrees {} and {}", b1.n, b2.n);
                assert_eq!(ch, ccl, "degrees {} and {}", b1.n, b2.n);
            }
        }
    }
}

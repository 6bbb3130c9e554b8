use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algebra::{character_automorphism, character_automorphism_left, GradedAlgebra, GradedBimodule};
use crate::grading::{Bicharacter, GradingError, GroupElement};
use crate::hochschild::{apply_differential, cohomology, decode, encode, internal_degree, sign, Cochain, CohomologySpace, HochschildComplex};
use crate::kernel::{Scalar, SparseAccumulator, SparseVec};

use super::StructureError;

/// Which tensor factor an orbit algebra describes: `R` twisted on the right by
/// `b̂`, or `S` twisted on the left by `â`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Side {
    R,
    S,
}

/// A cochain of `C^*(R, R_b̂)` (or `C^*(S, _âS)`) together with its twist degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCochain {
    pub twist: GroupElement,
    pub cochain: Cochain,
}

impl OrbitCochain {
    pub fn new(twist: GroupElement, cochain: Cochain) -> Self {
        OrbitCochain { twist, cochain }
    }

    pub fn degree(&self) -> usize {
        self.cochain.degree
    }
}

/// Orbit Hochschild cochains `⊕_b C^*(R, R_b̂)` of one factor, with the twisted
/// cup, circle and bracket.
pub struct OrbitAlgebra {
    algebra: Arc<GradedAlgebra>,
    t: Bicharacter,
    side: Side,
    truncation: usize,
    complexes: Mutex<HashMap<GroupElement, Arc<HochschildComplex>>>,
}

impl std::fmt::Debug for OrbitAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrbitAlgebra").field("side", &self.side).field("dim", &self.algebra.dim()).finish()
    }
}

impl OrbitAlgebra {
    pub fn new(algebra: Arc<GradedAlgebra>, t: Bicharacter, side: Side, truncation: usize) -> Result<Self, StructureError> {
        let own = match side {
            Side::R => t.left(),
            Side::S => t.right(),
        };
        if algebra.group() != own {
            return Err(GradingError::GroupMismatch("algebra grading does not match the bicharacter".into()).into());
        }
        Ok(OrbitAlgebra { algebra, t, side, truncation, complexes: Mutex::new(HashMap::new()) })
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn bicharacter(&self) -> &Bicharacter {
        &self.t
    }

    /// Scalar by which the twist acts on elements of degree `deg`:
    /// `t(deg, b)` on the `R` side, `t(a, deg)` on the `S` side.
    pub fn twist_scalar(&self, twist: &GroupElement, deg: &GroupElement) -> Scalar {
        match self.side {
            Side::R => self.t.eval_unchecked(deg, twist),
            Side::S => self.t.eval_unchecked(twist, deg),
        }
    }

    /// The twisting automorphism applied to an element of the algebra.
    pub fn apply_twist(&self, twist: &GroupElement, v: &SparseVec) -> SparseVec {
        v.iter().map(|(i, c)| (*i, c * &self.twist_scalar(twist, self.algebra.degree(*i)))).collect()
    }

    /// `C^*(R, R_b̂)` or `C^*(S, _âS)`.
    pub fn complex(&self, twist: &GroupElement) -> Result<Arc<HochschildComplex>, StructureError> {
        if let Some(c) = self.complexes.lock().expect("complex cache poisoned").get(twist) {
            return Ok(c.clone());
        }
        let regular = GradedBimodule::regular(&self.algebra);
        let module = match self.side {
            Side::R => regular.twist_right(&character_automorphism(&self.t, twist, &self.algebra)?)?,
            Side::S => regular.twist_left(&character_automorphism_left(&self.t, twist, &self.algebra)?)?,
        };
        let c = Arc::new(HochschildComplex::new(Arc::new(module), self.truncation)?);
        self.complexes.lock().expect("complex cache poisoned").insert(twist.clone(), c.clone());
        Ok(c)
    }

    /// `HH^n` of the twist-`twist` summand in internal degree `degree`.
    pub fn cohomology(&self, twist: &GroupElement, n: usize, degree: &GroupElement) -> Result<CohomologySpace, StructureError> {
        Ok(cohomology(self.complex(twist)?.as_ref(), n, degree)?)
    }

    pub fn differential(&self, f: &OrbitCochain) -> Result<OrbitCochain, StructureError> {
        let c = self.complex(&f.twist)?;
        Ok(OrbitCochain::new(f.twist.clone(), apply_differential(c.as_ref(), &f.cochain)))
    }

    /// The three-term coboundary `r_1 f[..] + f(b_R[..]) + (-1)^{m+1} f[..] r_{m+1}`
    /// without the `-(-1)^m` normalisation of [`OrbitAlgebra::differential`].
    pub fn plain_differential(&self, f: &OrbitCochain) -> Result<OrbitCochain, StructureError> {
        let mut d = self.differential(f)?;
        if f.degree() % 2 == 0 {
            d.cochain = d.cochain.scaled(&self.algebra.field().from_i64(-1));
        }
        Ok(d)
    }

    /// `(-1)^{m(m'+1)} f' ∘_t f`, `m` the inner and `m'` the outer degree. Together with
    /// [`OrbitAlgebra::plain_differential`] it bounds the failure of the twisted cup
    /// to commute:
    /// `∂(f'∘f) + ∂(f')∘f + (-1)^{m'} f'∘∂(f) = f⌣(b̂⁻¹f'b̂) - (-1)^{mm'} f'⌣f`.
    pub fn homotopy_circle(&self, outer: &OrbitCochain, inner: &OrbitCochain) -> OrbitCochain {
        let mut c = self.circle(outer, inner);
        if inner.degree() * (outer.degree() + 1) % 2 == 1 {
            c.cochain = c.cochain.scaled(&self.algebra.field().from_i64(-1));
        }
        c
    }

    pub fn internal_degree(&self, f: &OrbitCochain) -> Result<Option<GroupElement>, StructureError> {
        Ok(internal_degree(self.complex(&f.twist)?.as_ref(), &f.cochain))
    }

    fn group_sum(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let other = match self.side {
            Side::R => self.t.right(),
            Side::S => self.t.left(),
        };
        other.add(a, b)
    }

    /// `R` side: `(-1)^{mm'} f[r_1..r_m] b̂(f'[r_{m+1}..])`;
    /// `S` side: `(-1)^{nn'} â'(g[s_1..s_n]) g'[s_{n+1}..]`.
    pub fn cup(&self, f: &OrbitCochain, g: &OrbitCochain) -> OrbitCochain {
        let (m, n) = (f.degree(), g.degree());
        let d = self.algebra.dim();
        let e = self.algebra.field().from_i64(sign(m * n));
        let shift = d.pow(n as u32);
        let mut out = Cochain::zero(m + n);
        for (x, u) in &f.cochain.values {
            for (y, v) in &g.cochain.values {
                let value = match self.side {
                    Side::R => self.algebra.multiply(u, &self.apply_twist(&f.twist, v)),
                    Side::S => self.algebra.multiply(&self.apply_twist(&g.twist, u), v),
                };
                out.add_at(x * shift + y, &e, &value);
            }
        }
        OrbitCochain::new(self.group_sum(&f.twist, &g.twist), out)
    }

    /// `outer ∘_t inner`: the inner cochain is inserted at every position, with
    /// the inner twist applied to the arguments after it (`R` side) or before
    /// it (`S` side); the term at position `i` carries `(-1)^{i(m-1)}`, `m` the inner degree.
    pub fn circle(&self, outer: &OrbitCochain, inner: &OrbitCochain) -> OrbitCochain {
        let (mo, mi) = (outer.degree(), inner.degree());
        let twist = self.group_sum(&outer.twist, &inner.twist);
        if mo == 0 {
            return OrbitCochain::new(twist, Cochain::zero(mi.saturating_sub(1)));
        }
        let d = self.algebra.dim();
        let field = self.algebra.field();
        let mut acc: HashMap<usize, SparseAccumulator> = HashMap::new();
        for (y, w) in &outer.cochain.values {
            let ys = decode(*y, mo, d);
            for i in 0..mo {
                let (before, after) = (&ys[..i], &ys[i + 1..]);
                let moved = match self.side {
                    Side::R => after,
                    Side::S => before,
                };
                let mut coef = field.from_i64(sign(i * (mi + 1)));
                for &k in moved {
                    coef = &coef * &self.twist_scalar(&inner.twist, self.algebra.degree(k));
                }
                for (z, v) in &inner.cochain.values {
                    let Some((_, vk)) = v.iter().find(|(k, _)| *k == ys[i]) else { continue };
                    let zs = decode(*z, mi, d);
                    let x = encode(&[before, &zs[..], after].concat(), d);
                    acc.entry(x).or_default().add_scaled(&(&coef * vk), w);
                }
            }
        }
        let mut out = Cochain::zero(mo + mi - 1);
        for (x, a) in acc {
            let v = a.finish();
            if !v.is_empty() {
                out.values.insert(x, v);
            }
        }
        OrbitCochain::new(twist, out)
    }

    /// `ρ^{-1} f ρ` for the twisting automorphism `ρ` of degree `by`.
    pub fn conjugate(&self, f: &OrbitCochain, by: &GroupElement) -> OrbitCochain {
        let d = self.algebra.dim();
        let mut out = Cochain::zero(f.degree());
        for (x, v) in &f.cochain.values {
            let tuple = decode(*x, f.degree(), d);
            let mut c = self.algebra.field().one();
            for &k in &tuple {
                c = &c * &self.twist_scalar(by, self.algebra.degree(k));
            }
            let value: SparseVec = v
                .iter()
                .map(|(j, a)| (*j, a * &self.twist_scalar(by, self.algebra.degree(*j)).inv().expect("nonzero")))
                .collect();
            out.add_at(*x, &c, &value);
        }
        OrbitCochain::new(f.twist.clone(), out)
    }

    /// `R` side: `[f, f']_t = t^{-1}(a, b') f∘f' - (-1)^{(m-1)(m'-1)} f'∘f`;
    /// `S` side: `[g, g']_t = g∘g' - (-1)^{(n-1)(n'-1)} t^{-1}(a', b) g'∘g`.
    pub fn bracket(&self, f: &OrbitCochain, g: &OrbitCochain) -> Result<OrbitCochain, StructureError> {
        let (m, n) = (f.degree(), g.degree());
        let field = self.algebra.field();
        let e = field.from_i64(sign((m + 1) * (n + 1)));
        let fg = self.circle(f, g);
        let gf = self.circle(g, f);
        let out_degree = (m + n).saturating_sub(1);
        if m + n == 0 {
            return Ok(OrbitCochain::new(self.group_sum(&f.twist, &g.twist), Cochain::zero(0)));
        }
        let (c1, c2) = match self.side {
            Side::R => {
                let a = self.internal_degree(f)?;
                let c1 = match a {
                    Some(a) => self.t.eval_unchecked(&a, &g.twist).inv()?,
                    None if f.cochain.is_zero() => field.one(),
                    None => return Err(StructureError::DegreeMismatch("bracket needs homogeneous cochains".into())),
                };
                (c1, -&e)
            }
            Side::S => {
                let b = self.internal_degree(f)?;
                let c2 = match b {
                    Some(b) => self.t.eval_unchecked(&g.twist, &b).inv()?,
                    None if f.cochain.is_zero() => field.one(),
                    None => return Err(StructureError::DegreeMismatch("bracket needs homogeneous cochains".into())),
                };
                (field.one(), -&(&e * &c2))
            }
        };
        let mut out = Cochain::zero(out_degree);
        out.add_scaled(&c1, &fg.cochain);
        out.add_scaled(&c2, &gf.cochain);
        Ok(OrbitCochain::new(fg.twist, out))
    }
}

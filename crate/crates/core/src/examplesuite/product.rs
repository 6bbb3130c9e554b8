use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::GradedAlgebra;
use crate::grading::{Bicharacter, GradingGroup, GroupElement};
use crate::hochschild::{cohomology, cohomology_dim, Cochain, CochainComplex, CohomologySpace, HochschildComplex};
use crate::kernel::Scalar;
use crate::structure::{classical_bracket, DecomposedClass, OrbitAlgebra, Shuffle, Side, TwistedStructure};

use super::ExampleError;

/// Dimension of one `(degree, internal degree)` block; `internal` lists the
/// coordinates of `a` followed by those of `b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockDim {
    pub degree: usize,
    pub internal: Vec<i64>,
    pub dim: usize,
}

type SideKey = (GroupElement, usize, GroupElement);

/// Cohomology of `T = R ⊗^t S` up to a truncation degree, with caches for
/// both factor sides and for the twisted complex of `T`.
#[derive(Debug)]
pub struct ProductCohomology {
    ts: TwistedStructure,
    truncation: usize,
    r_dims: Mutex<HashMap<SideKey, usize>>,
    s_dims: Mutex<HashMap<SideKey, usize>>,
    targets: Mutex<HashMap<(usize, GroupElement), Arc<CohomologySpace>>>,
}

/// Degrees of nonzero cochain blocks of one factor at levels `0..=n`.
fn side_degrees(side: &OrbitAlgebra, n: usize) -> Result<Vec<BTreeSet<GroupElement>>, ExampleError> {
    let twists = match side.side() {
        Side::R => side.bicharacter().right(),
        Side::S => side.bicharacter().left(),
    };
    let c = side.complex(&twists.zero())?;
    let g = c.internal_group().clone();
    let targets: BTreeSet<GroupElement> = side.algebra().degrees().iter().cloned().collect();
    Ok((0..=n)
        .map(|k| {
            let mut out = BTreeSet::new();
            for d in c.sources_by_degree(k).keys() {
                for t in &targets {
                    out.insert(g.sub(t, d));
                }
            }
            out
        })
        .collect())
}

fn cached(cache: &Mutex<HashMap<SideKey, usize>>, side: &OrbitAlgebra, key: SideKey) -> Result<usize, ExampleError> {
    if let Some(&d) = cache.lock().expect("cache poisoned").get(&key) {
        return Ok(d);
    }
    let (twist, n, degree) = &key;
    let d = cohomology_dim(side.complex(twist)?.as_ref(), *n, degree)?;
    cache.lock().expect("cache poisoned").insert(key, d);
    Ok(d)
}

impl ProductCohomology {
    pub fn new(r: &Arc<GradedAlgebra>, s: &Arc<GradedAlgebra>, t: &Bicharacter, truncation: usize) -> Result<Self, ExampleError> {
        // one extra level so that products and brackets of computed classes land in range
        Ok(ProductCohomology {
            ts: TwistedStructure::new(r, s, t, truncation + 1)?,
            truncation,
            r_dims: Mutex::new(HashMap::new()),
            s_dims: Mutex::new(HashMap::new()),
            targets: Mutex::new(HashMap::new()),
        })
    }

    pub fn structure(&self) -> &TwistedStructure {
        &self.ts
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    fn groups(&self) -> (&GradingGroup, &GradingGroup) {
        (self.ts.r_side().algebra().group(), self.ts.s_side().algebra().group())
    }

    /// `dim HH^n(T)^{(a,b)}` as `Σ_i dim HH^i(R, R_b̂)^a · dim HH^{n-i}(S, _âS)^b`.
    pub fn decomposition_dim(&self, n: usize, a: &GroupElement, b: &GroupElement) -> Result<usize, ExampleError> {
        let mut total = 0;
        for i in 0..=n {
            let r = cached(&self.r_dims, self.ts.r_side(), (b.clone(), i, a.clone()))?;
            if r == 0 {
                continue;
            }
            total += r * cached(&self.s_dims, self.ts.s_side(), (a.clone(), n - i, b.clone()))?;
        }
        Ok(total)
    }

    /// Candidate internal degrees `(a, b)` of degree-`n` classes.
    fn candidates(&self, n: usize) -> Result<Vec<(GroupElement, GroupElement)>, ExampleError> {
        let rd = side_degrees(self.ts.r_side(), n)?;
        let sd = side_degrees(self.ts.s_side(), n)?;
        let ra: BTreeSet<&GroupElement> = rd.iter().flatten().collect();
        let sb: BTreeSet<&GroupElement> = sd.iter().flatten().collect();
        Ok(ra.iter().flat_map(|a| sb.iter().map(move |b| ((*a).clone(), (*b).clone()))).collect())
    }

    /// All nonzero blocks up to the truncation, from the decomposition.
    pub fn decomposition_table(&self) -> Result<Vec<BlockDim>, ExampleError> {
        let mut out = Vec::new();
        for n in 0..=self.truncation {
            let cands = self.candidates(n)?;
            let dims = cands
                .par_iter()
                .map(|(a, b)| self.decomposition_dim(n, a, b))
                .collect::<Result<Vec<_>, _>>()?;
            for ((a, b), dim) in cands.into_iter().zip(dims) {
                if dim > 0 {
                    out.push(BlockDim { degree: n, internal: GradingGroup::join(&a, &b).coords().to_vec(), dim });
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// All nonzero blocks up to the truncation, from the bar complex of `T` itself.
    pub fn product_table(&self) -> Result<Vec<BlockDim>, ExampleError> {
        let c = HochschildComplex::regular(self.ts.product().algebra(), self.truncation);
        let g = c.internal_group().clone();
        let targets: BTreeSet<&GroupElement> = (0..c.target_dim()).map(|j| c.target_degree(j)).collect();
        let mut out = Vec::new();
        for n in 0..=self.truncation {
            let degrees: BTreeSet<GroupElement> =
                c.sources_by_degree(n).keys().flat_map(|d| targets.iter().map(|t| g.sub(t, d)).collect::<Vec<_>>()).collect();
            let degrees: Vec<GroupElement> = degrees.into_iter().collect();
            let dims = degrees.par_iter().map(|d| cohomology_dim(&c, n, d)).collect::<Result<Vec<_>, _>>()?;
            for (d, dim) in degrees.into_iter().zip(dims) {
                if dim > 0 {
                    out.push(BlockDim { degree: n, internal: d.coords().to_vec(), dim });
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Total dimension per degree `0..=truncation`.
    pub fn dims(table: &[BlockDim], truncation: usize) -> Vec<usize> {
        let mut out = vec![0; truncation + 1];
        for b in table {
            out[b.degree] += b.dim;
        }
        out
    }

    /// `HH^n` of the twisted complex of `T` in internal degree `joint`.
    pub fn target(&self, n: usize, joint: &GroupElement) -> Result<Arc<CohomologySpace>, ExampleError> {
        let key = (n, joint.clone());
        if let Some(h) = self.targets.lock().expect("cache poisoned").get(&key) {
            return Ok(h.clone());
        }
        let h = Arc::new(cohomology(self.ts.product().complex(), n, joint)?);
        self.targets.lock().expect("cache poisoned").insert(key, h.clone());
        Ok(h)
    }

    pub fn joint(&self, x: &DecomposedClass) -> Result<GroupElement, ExampleError> {
        let (a, b) = x.bidegree().ok_or_else(|| ExampleError::VerificationFailed("class is not bihomogeneous".into()))?;
        Ok(self.ts.joint_degree(&a, &b))
    }

    fn sum_degree(&self, x: &DecomposedClass, y: &DecomposedClass) -> Result<GroupElement, ExampleError> {
        let (g, h) = self.groups();
        let (a1, b1) = x.bidegree().ok_or_else(|| ExampleError::VerificationFailed("class is not bihomogeneous".into()))?;
        let (a2, b2) = y.bidegree().ok_or_else(|| ExampleError::VerificationFailed("class is not bihomogeneous".into()))?;
        Ok(self.ts.joint_degree(&g.add(&a1, &a2), &h.add(&b1, &b2)))
    }

    /// Class coordinates of a cocycle of the twisted complex.
    pub fn coordinates(&self, z: &Cochain, joint: &GroupElement) -> Result<Vec<Scalar>, ExampleError> {
        Ok(self.target(z.degree, joint)?.class_coordinates(z)?)
    }

    pub fn class_coordinates(&self, x: &DecomposedClass) -> Result<Vec<Scalar>, ExampleError> {
        self.coordinates(&self.ts.phi(x), &self.joint(x)?)
    }

    /// `x ⌣ y` as `(chain-level cup of φ-images, φ of the combined cup)`, in
    /// target class coordinates.
    pub fn cup(&self, x: &DecomposedClass, y: &DecomposedClass) -> Result<(Vec<Scalar>, Vec<Scalar>), ExampleError> {
        let joint = self.sum_degree(x, y)?;
        let chain = self.ts.product().cup(&self.ts.phi(x), &self.ts.phi(y));
        let combined = self.ts.phi(&self.ts.combined_cup(x, y));
        Ok((self.coordinates(&chain, &joint)?, self.coordinates(&combined, &joint)?))
    }

    /// `[x, y]` as `(combined formula, Φ-circle, classical bar bracket)`, in
    /// target class coordinates.
    pub fn bracket(&self, x: &DecomposedClass, y: &DecomposedClass) -> Result<[Vec<Scalar>; 3], ExampleError> {
        let joint = self.sum_degree(x, y)?;
        let n = (x.degree + y.degree).checked_sub(1).ok_or_else(|| ExampleError::VerificationFailed("bracket of two degree-0 classes".into()))?;
        let combined = self.ts.phi(&self.ts.combined_bracket(x, y)?);
        let (fx, fy) = (self.ts.phi(x), self.ts.phi(y));
        let homotopy = self.ts.product().homotopy_bracket(&fx, &fy);
        let sh = Shuffle::new(self.ts.product(), self.truncation + 1)?;
        let (lx, ly) = (sh.lift(&fx, &self.joint(x)?)?, sh.lift(&fy, &self.joint(y)?)?);
        let classical = sh.pull_back(&classical_bracket(sh.classical(), &lx, &ly));
        let h = self.target(n, &joint)?;
        Ok([h.class_coordinates(&combined)?, h.class_coordinates(&homotopy)?, h.class_coordinates(&classical)?])
    }

    /// Blocks of the decomposition as a map for comparisons.
    pub fn table_map(table: &[BlockDim]) -> BTreeMap<(usize, Vec<i64>), usize> {
        table.iter().map(|b| ((b.degree, b.internal.clone()), b.dim)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Field;

    fn product(m: usize, n: usize, q: Scalar, d: usize) -> ProductCohomology {
        let field = q.field();
        let r = Arc::new(GradedAlgebra::truncated_polynomial(m, field, "x").unwrap());
        let s = Arc::new(GradedAlgebra::truncated_polynomial(n, field, "y").unwrap());
        ProductCohomology::new(&r, &s, &Bicharacter::diagonal_power(1, q).unwrap(), d).unwrap()
    }

    #[test]
    fn decomposition_matches_product_bar_complex() {
        let f5 = Field::prime(5).unwrap();
        let p = product(2, 2, f5.from_i64(2), 3);
        assert_eq!(p.decomposition_table().unwrap(), p.product_table().unwrap());
        let q = Field::RationalFunctions.indeterminate().unwrap();
        let p = product(2, 2, q, 3);
        let t = p.decomposition_table().unwrap();
        assert_eq!(ProductCohomology::dims(&t, 3), vec![2, 2, 1, 0]);
    }
}

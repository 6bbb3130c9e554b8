//! Bar complexes, Hochschild cochain complexes and their cohomology, all
//! split into blocks by internal degree.

mod complex;
mod twisted;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::grading::{GradingError, GradingGroup, GroupElement};
use crate::kernel::{
    sparse_kernel, sparse_quotient, sparse_rank, ColumnSolver, Field, KernelError, Matrix, Scalar, SparseAccumulator, SparseVec,
};

pub use complex::{bar_differential, HochschildComplex};
pub use twisted::{TwistedComplex, TwistedSource};


#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HochschildError {
    #[error("degree {requested} exceeds the truncation bound {bound}")]
    TruncationExceeded { requested: usize, bound: usize },
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("cochain does not live in the requested block: {0}")]
    WrongDegree(String),
    #[error("complex mismatch: {0}")]
    ComplexMismatch(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Sign put on the dual of the resolution differential for degree-`n`
/// cochains: `∂f = -(-1)^n f∘d`, the usual sign for a degree-`n` map out of a
/// complex. It is the convention under which the box product is a chain map
/// with the Koszul sign on the left factor.
pub(crate) fn coboundary_sign(n: usize) -> i64 {
    if n % 2 == 0 {
        -1
    } else {
        1
    }
}

/// `(-1)^k` as a small integer.
pub(crate) fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A cochain of a given degree: values on the source basis, each a vector in
/// the target module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub values: BTreeMap<usize, SparseVec>,
}

impl Cochain {
    pub fn zero(degree: usize) -> Self {
        Cochain { degree, values: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, x: usize) -> Option<&SparseVec> {
        self.values.get(&x)
    }

    /// Adds `c * v` at source `x`.
    pub fn add_at(&mut self, x: usize, c: &Scalar, v: &SparseVec) {
        if c.is_zero() || v.is_empty() {
            return;
        }
        let cur = self.values.remove(&x).unwrap_or_default();
        let sum = crate::kernel::sparse_axpy(&cur, c, v);
        if !sum.is_empty() {
            self.values.insert(x, sum);
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &Cochain) {
        assert_eq!(self.degree, other.degree, "adding cochains of different degrees");
        for (x, v) in &other.values {
            self.add_at(*x, c, v);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Cochain {
        let mut out = Cochain::zero(self.degree);
        out.add_scaled(c, self);
        out
    }

    pub fn sum(degree: usize, parts: impl IntoIterator<Item = (Scalar, Cochain)>) -> Cochain {
        let mut out = Cochain::zero(degree);
        for (c, f) in parts {
            out.add_scaled(&c, &f);
        }
        out
    }
}

/// One term of `(∂f)[x]`: `coef * op(f[source])`, where `op` is a linear map
/// on the target module given by the images of its basis vectors.
#[derive(Clone, Debug)]
pub struct Term {
    pub coef: Scalar,
    pub source: usize,
    pub op: Option<Arc<Vec<SparseVec>>>,
}

/// A cochain complex `Hom(X_*, Y)` whose differential is described term by term.
pub trait CochainComplex: Sync {
    fn field(&self) -> Field;
    /// Group of internal degrees.
    fn internal_group(&self) -> &GradingGroup;
    fn target_dim(&self) -> usize;
    fn target_degree(&self, j: usize) -> &GroupElement;
    fn source_dim(&self, n: usize) -> usize;
    /// Source basis at level `n`, grouped by degree.
    fn sources_by_degree(&self, n: usize) -> Arc<BTreeMap<GroupElement, Vec<usize>>>;
    /// Degree of the source basis element `x` at level `n`.
    fn source_degree(&self, n: usize, x: usize) -> GroupElement;
    /// Terms of the resolution differential at `x ∈ X_{n+1}` paired with a degree-`n` cochain,
    /// before the sign of [`coboundary_sign`].
    fn differential_terms(&self, n: usize, x: usize) -> Vec<Term>;
    /// Largest cohomological degree the caller may request.
    fn truncation(&self) -> usize;
}

/// The basis of one internal-degree block: pairs `(source, target)` sorted lexicographically.
#[derive(Clone, Debug)]
pub struct Block {
    pub n: usize,
    pub degree: GroupElement,
    pub pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl Block {
    pub fn new<C: CochainComplex + ?Sized>(c: &C, n: usize, degree: &GroupElement) -> Block {
        let g = c.internal_group();
        let by_deg = c.sources_by_degree(n);
        let mut pairs = Vec::new();
        for j in 0..c.target_dim() {
            let want = g.sub(c.target_degree(j), degree);
            if let Some(xs) = by_deg.get(&want) {
                pairs.extend(xs.iter().map(|&x| (x, j)));
            }
        }
        pairs.sort_unstable();
        let index = pairs.iter().enumerate().map(|(k, p)| (*p, k)).collect();
        Block { n, degree: degree.clone(), pairs, index }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn position(&self, x: usize, j: usize) -> Option<usize> {
        self.index.get(&(x, j)).copied()
    }

    pub fn to_cochain(&self, coords: &SparseVec) -> Cochain {
        let mut f = Cochain::zero(self.n);
        for (k, c) in coords {
            let (x, j) = self.pairs[*k];
            f.add_at(x, c, &vec![(j, c.one_like())]);
        }
        f
    }

    /// Coordinates of `f`; fails when `f` has a value outside the block.
    pub fn coordinates(&self, f: &Cochain) -> Result<SparseVec, HochschildError> {
        if f.degree != self.n {
            return Err(HochschildError::WrongDegree(format!("degree {} cochain in a degree {} block", f.degree, self.n)));
        }
        let mut acc = SparseAccumulator::new();
        for (x, v) in &f.values {
            for (j, c) in v {
                let k = self
                    .position(*x, *j)
                    .ok_or_else(|| HochschildError::WrongDegree(format!("value at source {x}, target {j}")))?;
                acc.add(k, c.clone());
            }
        }
        Ok(acc.finish())
    }

    fn distinct_sources(&self) -> Vec<usize> {
        let mut xs: Vec<usize> = self.pairs.iter().map(|p| p.0).collect();
        xs.dedup();
        xs
    }
}

fn op_image(op: &Option<Arc<Vec<SparseVec>>>, i: usize, field: Field) -> std::borrow::Cow<'_, SparseVec> {
    match op {
        Some(images) => std::borrow::Cow::Borrowed(&images[i]),
        None => std::borrow::Cow::Owned(vec![(i, field.one())]),
    }
}

/// Rows of `∂: block(n) → block(n+1)`, one per pair of `to`, columns indexed by `from`.
pub fn differential_rows<C: CochainComplex + ?Sized>(c: &C, from: &Block, to: &Block) -> Vec<SparseVec> {
    assert_eq!(from.n + 1, to.n);
    let field = c.field();
    let s = field.from_i64(coboundary_sign(from.n));
    let td = c.target_dim();
    let per_source: Vec<(usize, Vec<(usize, SparseVec)>)> = to
        .distinct_sources()
        .into_par_iter()
        .map(|x| {
            let mut rows: BTreeMap<usize, SparseAccumulator> = BTreeMap::new();
            for term in c.differential_terms(from.n, x) {
                let coef = &term.coef * &s;
                for i in 0..td {
                    let Some(col) = from.position(term.source, i) else { continue };
                    for (j, v) in op_image(&term.op, i, field).iter() {
                        if to.position(x, *j).is_some() {
                            rows.entry(*j).or_default().add(col, &coef * v);
                        }
                    }
                }
            }
            (x, rows.into_iter().map(|(j, a)| (j, a.finish())).collect())
        })
        .collect();
    let mut out = vec![Vec::new(); to.len()];
    for (x, rows) in per_source {
        for (j, row) in rows {
            out[to.position(x, j).expect("row inside block")] = row;
        }
    }
    out
}

/// Matrix of `∂` from the degree-`n` block of internal degree `degree` to the degree-`n+1` block.
pub fn differential_matrix<C: CochainComplex + ?Sized>(c: &C, n: usize, degree: &GroupElement) -> Matrix {
    let from = Block::new(c, n, degree);
    let to = Block::new(c, n + 1, degree);
    let rows = differential_rows(c, &from, &to);
    Matrix::from_sparse_columns(c.field(), to.len(), &transpose(&rows, from.len()))
}

/// `∂f` on every source of level `n+1`.
pub fn apply_differential<C: CochainComplex + ?Sized>(c: &C, f: &Cochain) -> Cochain {
    let field = c.field();
    let s = field.from_i64(coboundary_sign(f.degree));
    let values: Vec<(usize, SparseVec)> = (0..c.source_dim(f.degree + 1))
        .into_par_iter()
        .filter_map(|x| {
            let mut acc = SparseAccumulator::new();
            for term in c.differential_terms(f.degree, x) {
                let Some(v) = f.get(term.source) else { continue };
                let coef = &term.coef * &s;
                for (i, a) in v {
                    acc.add_scaled(&(&coef * a), &op_image(&term.op, *i, field));
                }
            }
            let v = acc.finish();
            (!v.is_empty()).then_some((x, v))
        })
        .collect();
    Cochain { degree: f.degree + 1, values: values.into_iter().collect() }
}

fn transpose(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut cols = vec![Vec::new(); ncols];
    for (i, row) in rows.iter().enumerate() {
        for (j, c) in row {
            cols[*j].push((i, c.clone()));
        }
    }
    cols
}

/// Cohomology of one `(n, internal degree)` block with explicit representatives.
#[derive(Debug)]
pub struct CohomologySpace {
    pub n: usize,
    pub degree: GroupElement,
    pub block: Block,
    /// Cocycles (block coordinates) whose classes form a basis.
    pub representatives: Vec<SparseVec>,
    /// Spanning set of the coboundaries (block coordinates).
    pub boundaries: Vec<SparseVec>,
    pub cocycle_dim: usize,
    field: Field,
    solver: OnceLock<ColumnSolver>,
}

impl CohomologySpace {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representative(&self, i: usize) -> Cochain {
        self.block.to_cochain(&self.representatives[i])
    }

    fn solver(&self) -> &ColumnSolver {
        self.solver.get_or_init(|| ColumnSolver::with_modulus(self.field, &self.boundaries, &self.representatives))
    }

    /// Coordinates of the class of the cocycle `z` in the representative basis.
    pub fn class_coordinates(&self, z: &Cochain) -> Result<Vec<Scalar>, HochschildError> {
        let v = self.block.coordinates(z)?;
        self.vector_coordinates(&v)
    }

    pub fn vector_coordinates(&self, v: &SparseVec) -> Result<Vec<Scalar>, HochschildError> {
        let x = self.solver().solve(v).ok_or(HochschildError::NotACocycle)?;
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, c) in x {
            out[i] = c;
        }
        Ok(out)
    }

    pub fn is_coboundary(&self, z: &Cochain) -> Result<bool, HochschildError> {
        Ok(self.class_coordinates(z)?.iter().all(Scalar::is_zero))
    }
}

/// `H^n` of the block of internal degree `degree`.
pub fn cohomology<C: CochainComplex + ?Sized>(
    c: &C,
    n: usize,
    degree: &GroupElement,
) -> Result<CohomologySpace, HochschildError> {
    if n > c.truncation() {
        return Err(HochschildError::TruncationExceeded { requested: n, bound: c.truncation() });
    }
    if !c.internal_group().contains(degree) {
        return Err(HochschildError::WrongDegree(format!("{degree} is not an internal degree")));
    }
    let block = Block::new(c, n, degree);
    let next = Block::new(c, n + 1, degree);
    let rows = differential_rows(c, &block, &next);
    let kernel = sparse_kernel(c.field(), block.len(), rows);
    let boundaries = if n == 0 {
        Vec::new()
    } else {
        let prev = Block::new(c, n - 1, degree);
        let rows = differential_rows(c, &prev, &block);
        transpose(&rows, prev.len()).into_iter().filter(|v| !v.is_empty()).collect()
    };
    let picked = sparse_quotient(c.field(), &boundaries, &kernel, false)?;
    let representatives = picked.into_iter().map(|i| kernel[i].clone()).collect();
    Ok(CohomologySpace {
        n,
        degree: degree.clone(),
        block,
        representatives,
        boundaries,
        cocycle_dim: kernel.len(),
        field: c.field(),
        solver: OnceLock::new(),
    })
}

/// `dim H^n` of one block, without representatives.
pub fn cohomology_dim<C: CochainComplex + ?Sized>(c: &C, n: usize, degree: &GroupElement) -> Result<usize, HochschildError> {
    if n > c.truncation() {
        return Err(HochschildError::TruncationExceeded { requested: n, bound: c.truncation() });
    }
    let block = Block::new(c, n, degree);
    if block.is_empty() {
        return Ok(0);
    }
    let next = Block::new(c, n + 1, degree);
    let rank_out = sparse_rank(c.field(), differential_rows(c, &block, &next));
    let rank_in = if n == 0 {
        0
    } else {
        let prev = Block::new(c, n - 1, degree);
        sparse_rank(c.field(), differential_rows(c, &prev, &block))
    };
    Ok(block.len() - rank_out - rank_in)
}

/// The internal degree of a nonzero homogeneous cochain; `None` for zero or inhomogeneous cochains.
pub fn internal_degree<C: CochainComplex + ?Sized>(c: &C, f: &Cochain) -> Option<GroupElement> {
    let g = c.internal_group();
    let mut found: Option<GroupElement> = None;
    for (x, v) in &f.values {
        let src = c.source_degree(f.degree, *x);
        for (j, _) in v {
            let d = g.sub(c.target_degree(*j), &src);
            match &found {
                None => found = Some(d),
                Some(e) if *e != d => return None,
                _ => {}
            }
        }
    }
    found
}

/// Internal degrees of all nonzero blocks in levels `0..=n_max + 1`.
pub fn relevant_internal_degrees<C: CochainComplex + ?Sized>(c: &C, n_max: usize) -> BTreeSet<GroupElement> {
    let g = c.internal_group();
    let targets: BTreeSet<&GroupElement> = (0..c.target_dim()).map(|j| c.target_degree(j)).collect();
    let mut out = BTreeSet::new();
    for n in 0..=n_max + 1 {
        for d in c.sources_by_degree(n).keys() {
            for t in &targets {
                out.insert(g.sub(t, d));
            }
        }
    }
    out
}

/// Degrees of all basis tuples at one bar level, built from the previous level.
pub(crate) fn next_tuple_degrees(group: &GradingGroup, prev: &[GroupElement], basis: &[GroupElement]) -> Vec<GroupElement> {
    let mut out = Vec::with_capacity(prev.len() * basis.len());
    for d in prev {
        for b in basis {
            out.push(group.add(d, b));
        }
    }
    out
}

pub(crate) fn group_by_degree(degrees: &[GroupElement]) -> BTreeMap<GroupElement, Vec<usize>> {
    let mut out: BTreeMap<GroupElement, Vec<usize>> = BTreeMap::new();
    for (i, d) in degrees.iter().enumerate() {
        out.entry(d.clone()).or_default().push(i);
    }
    out
}

pub(crate) fn encode(tuple: &[usize], dim: usize) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * dim + i)
}

pub(crate) fn decode(mut x: usize, len: usize, dim: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for k in (0..len).rev() {
        out[k] = x % dim;
        x /= dim;
    }
    out
}

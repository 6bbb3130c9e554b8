//! Exact linear algebra: kernels, images, ranks, solving and quotients.
//!
//! The public surface works with dense [`Matrix`] values. Internally every
//! routine reduces sparse vectors against a row echelon form whose rows have
//! leading coefficient one, which is what keeps the cohomology blocks cheap.

use std::collections::{BTreeMap, HashMap};

use super::scalar::{Field, Scalar};
use super::KernelError;

/// Sparse vector: strictly increasing indices, no explicit zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self, KernelError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(KernelError::ShapeMismatch(format!("ragged row of length {} (expected {c})", row.len())));
            }
            for x in row {
                if x.field() != field {
                    return Err(KernelError::FieldMismatch { left: field, right: x.field() });
                }
                entries.push(x);
            }
        }
        Ok(Matrix { field, rows: r, cols: c, entries })
    }

    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_rows(field, rows).expect("well-formed integer rows")
    }

    /// Matrix whose columns are the given sparse vectors of length `dim`.
    pub fn from_sparse_columns(field: Field, dim: usize, columns: &[SparseVec]) -> Self {
        let mut m = Self::zeros(field, dim, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col {
                m.set(*i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row_sparse(&self, i: usize) -> SparseVec {
        (0..self.cols)
            .filter_map(|j| {
                let x = self.get(i, j);
                (!x.is_zero()).then(|| (j, x.clone()))
            })
            .collect()
    }

    pub fn column_sparse(&self, j: usize) -> SparseVec {
        (0..self.rows)
            .filter_map(|i| {
                let x = self.get(i, j);
                (!x.is_zero()).then(|| (i, x.clone()))
            })
            .collect()
    }

    pub fn columns_sparse(&self) -> Vec<SparseVec> {
        (0..self.cols).map(|j| self.column_sparse(j)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, KernelError> {
        if self.cols != other.rows {
            return Err(KernelError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, KernelError> {
        if v.len() != self.cols {
            return Err(KernelError::ShapeMismatch(format!("{} columns vs vector of length {}", self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a * x;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }
}

pub fn sparse_to_dense(field: Field, dim: usize, v: &SparseVec) -> Vec<Scalar> {
    let mut out = vec![field.zero(); dim];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub fn dense_to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// `a + c * b` on sparse vectors.
pub fn sparse_axpy(a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let x = &a[i].1 + &(c * &b[j].1);
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_scale(v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// Accumulates `(index, value)` contributions into a canonical sparse vector.
#[derive(Default)]
pub struct SparseAccumulator {
    map: BTreeMap<usize, Scalar>,
}

impl SparseAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, i: usize, x: Scalar) {
        if x.is_zero() {
            return;
        }
        match self.map.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(x);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &x;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, v: &SparseVec) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v {
            self.add(*i, c * x);
        }
    }

    pub fn finish(self) -> SparseVec {
        self.map.into_iter().collect()
    }
}

/// Row echelon form with optional tag vectors tracking linear combinations.
#[derive(Debug)]
pub(crate) struct Echelon {
    field: Field,
    rows: Vec<SparseVec>,
    tags: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

pub(crate) struct Reduced {
    pub residual: SparseVec,
    /// Sum of `c * tag(row)` over the rows subtracted from the input.
    pub used: SparseVec,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon { field, rows: Vec::new(), tags: Vec::new(), pivot_row: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Fully reduce `v` against the stored rows.
    pub fn reduce(&self, v: &SparseVec, track: bool) -> Reduced {
        let mut acc: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        let mut used = SparseAccumulator::new();
        let mut cursor = 0usize;
        loop {
            let next = acc.range(cursor..).next().map(|(k, x)| (*k, x.clone()));
            let Some((k, c)) = next else { break };
            cursor = k + 1;
            let Some(&r) = self.pivot_row.get(&k) else { continue };
            acc.remove(&k);
            for (j, x) in self.rows[r].iter().skip(1) {
                let d = &c * x;
                match acc.entry(*j) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-d);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get() - &d;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
            if track {
                used.add_scaled(&c, &self.tags[r]);
            }
        }
        Reduced { residual: acc.into_iter().collect(), used: used.finish() }
    }

    /// Insert `v` (with its tag); returns true when the rank grew.
    pub fn insert(&mut self, v: &SparseVec, tag: SparseVec) -> bool {
        let track = !tag.is_empty() || !self.tags.iter().all(|t| t.is_empty());
        let red = self.reduce(v, track);
        if red.residual.is_empty() {
            return false;
        }
        let lead_inv = red.residual[0].1.inv().expect("nonzero leading entry");
        let row = sparse_scale(&red.residual, &lead_inv);
        // row = lead_inv * (v - Σ c_i row_i), so its tag is lead_inv * (tag - used)
        let neg = -self.field.one();
        let t = sparse_axpy(&tag, &neg, &red.used);
        let t = sparse_scale(&t, &lead_inv);
        self.pivot_row.insert(row[0].0, self.rows.len());
        self.rows.push(row);
        self.tags.push(t);
        true
    }

    /// Reduced row echelon rows keyed by pivot column, ascending.
    fn rref(&self) -> Vec<(usize, SparseVec)> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r][0].0));
        let mut done: HashMap<usize, SparseVec> = HashMap::new();
        let mut tmp = Echelon::new(self.field);
        for r in order {
            let row = &self.rows[r];
            let pivot = row[0].0;
            let tail: SparseVec = row[1..].to_vec();
            let red = tmp.reduce(&tail, false);
            let mut full = vec![(pivot, self.field.one())];
            full.extend(red.residual);
            tmp.pivot_row.insert(pivot, tmp.rows.len());
            tmp.rows.push(full.clone());
            tmp.tags.push(Vec::new());
            done.insert(pivot, full);
        }
        let mut out: Vec<(usize, SparseVec)> = done.into_iter().collect();
        out.sort_by_key(|(p, _)| *p);
        out
    }
}

fn echelon_of_rows(field: Field, rows: impl IntoIterator<Item = SparseVec>) -> Echelon {
    let mut e = Echelon::new(field);
    for r in rows {
        e.insert(&r, Vec::new());
    }
    e
}

/// Basis of the null space of the linear map whose rows are `rows`, over `ncols` unknowns.
pub fn sparse_kernel(field: Field, ncols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let e = echelon_of_rows(field, rows);
    let rref = e.rref();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for (p, _) in &rref {
            v[*p] = true;
        }
        v
    };
    // column -> [(pivot, coefficient)]
    let mut by_col: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
    for (p, row) in &rref {
        for (j, x) in row.iter().skip(1) {
            by_col.entry(*j).or_default().push((*p, x.clone()));
        }
    }
    (0..ncols)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut acc = SparseAccumulator::new();
            acc.add(free, field.one());
            if let Some(entries) = by_col.get(&free) {
                for (p, x) in entries {
                    acc.add(*p, -x);
                }
            }
            acc.finish()
        })
        .collect()
}

/// Rank by forward elimination only: a vector is reduced until its leading
/// entry is not a pivot, so stored rows keep unreduced tails.
pub fn sparse_rank(field: Field, vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut rows: HashMap<usize, SparseVec> = HashMap::new();
    for v in vectors {
        let mut acc: BTreeMap<usize, Scalar> = v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        while let Some((&k, c)) = acc.iter().next() {
            let Some(row) = rows.get(&k) else { break };
            let c = c.clone();
            acc.remove(&k);
            for (j, x) in row.iter().skip(1) {
                let d = &c * x;
                match acc.entry(*j) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-d);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get() - &d;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
        }
        if let Some((&k, lead)) = acc.iter().next() {
            let inv = lead.inv().expect("nonzero leading entry");
            let row: SparseVec = acc.iter().map(|(j, x)| (*j, if *j == k { field.one() } else { x * &inv })).collect();
            rows.insert(k, row);
        }
    }
    rows.len()
}

/// Columns of the returned matrix form a basis of the null space of `m`.
pub fn kernel_basis(m: &Matrix) -> Matrix {
    let rows = (0..m.rows()).map(|i| m.row_sparse(i));
    let ker = sparse_kernel(m.field(), m.cols(), rows);
    Matrix::from_sparse_columns(m.field(), m.cols(), &ker)
}

pub fn rank(m: &Matrix) -> usize {
    sparse_rank(m.field(), (0..m.rows()).map(|i| m.row_sparse(i)))
}

/// A subset of the columns of `m` forming a basis of its column space,
/// chosen greedily in column order.
pub fn image_basis(m: &Matrix) -> Matrix {
    let mut e = Echelon::new(m.field());
    let mut keep = Vec::new();
    for j in 0..m.cols() {
        let c = m.column_sparse(j);
        if e.insert(&c, Vec::new()) {
            keep.push(c);
        }
    }
    Matrix::from_sparse_columns(m.field(), m.rows(), &keep)
}

/// Some `x` with `m x = v`, or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, v: &[Scalar]) -> Result<Option<Vec<Scalar>>, KernelError> {
    if v.len() != m.rows() {
        return Err(KernelError::ShapeMismatch(format!("{} rows vs right-hand side of length {}", m.rows(), v.len())));
    }
    let columns = m.columns_sparse();
    Ok(sparse_solve(m.field(), &columns, &dense_to_sparse(v))
        .map(|x| sparse_to_dense(m.field(), m.cols(), &x)))
}

/// Coefficients `x` (sparse, indexed by column) with `Σ x_j columns[j] = v`.
pub fn sparse_solve(field: Field, columns: &[SparseVec], v: &SparseVec) -> Option<SparseVec> {
    ColumnSolver::new(field, columns).solve(v)
}

/// Repeated solves against fixed columns, optionally modulo a subspace:
/// `solve(v)` returns `x` with `v - Σ x_j columns[j] ∈ span(modulus)`.
#[derive(Debug)]
pub struct ColumnSolver {
    echelon: Echelon,
    modulus_rank: usize,
}

impl ColumnSolver {
    pub fn new(field: Field, columns: &[SparseVec]) -> Self {
        Self::with_modulus(field, &[], columns)
    }

    pub fn with_modulus(field: Field, modulus: &[SparseVec], columns: &[SparseVec]) -> Self {
        let mut echelon = Echelon::new(field);
        for m in modulus {
            echelon.insert(m, Vec::new());
        }
        let modulus_rank = echelon.rank();
        for (j, c) in columns.iter().enumerate() {
            echelon.insert(c, vec![(j, field.one())]);
        }
        ColumnSolver { echelon, modulus_rank }
    }

    /// Rank of the columns modulo the subspace.
    pub fn rank(&self) -> usize {
        self.echelon.rank() - self.modulus_rank
    }

    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let red = self.echelon.reduce(v, true);
        red.residual.is_empty().then_some(red.used)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.echelon.reduce(v, false).residual.is_empty()
    }
}

/// Columns of `inside` (or standard vectors of the ambient space) whose
/// classes form a basis of `inside / span(sub)`, greedy in column order.
pub fn quotient_basis(sub: &Matrix, ambient_dim: usize, inside: Option<&Matrix>) -> Result<Matrix, KernelError> {
    if sub.rows() != ambient_dim || inside.is_some_and(|m| m.rows() != ambient_dim) {
        return Err(KernelError::ShapeMismatch("quotient operands disagree on ambient dimension".into()));
    }
    let field = sub.field();
    let candidates: Vec<SparseVec> = match inside {
        Some(m) => m.columns_sparse(),
        None => (0..ambient_dim).map(|i| vec![(i, field.one())]).collect(),
    };
    let reps = sparse_quotient(field, &sub.columns_sparse(), &candidates, inside.is_some())?;
    Ok(Matrix::from_sparse_columns(field, ambient_dim, &reps.iter().map(|&j| candidates[j].clone()).collect::<Vec<_>>()))
}

/// Indices of `candidates` completing `sub` greedily; optionally checks `sub ⊆ span(candidates)`.
pub fn sparse_quotient(
    field: Field,
    sub: &[SparseVec],
    candidates: &[SparseVec],
    check_containment: bool,
) -> Result<Vec<usize>, KernelError> {
    if check_containment {
        let e = echelon_of_rows(field, candidates.iter().cloned());
        if sub.iter().any(|s| !e.reduce(s, false).residual.is_empty()) {
            return Err(KernelError::NotASubspace);
        }
    }
    let mut e = echelon_of_rows(field, sub.iter().cloned());
    let mut picked = Vec::new();
    for (j, c) in candidates.iter().enumerate() {
        if e.insert(c, Vec::new()) {
            picked.push(j);
        }
    }
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_identity_is_empty() {
        let f = Field::Rationals;
        assert_eq!(kernel_basis(&Matrix::identity(f, 3)).cols(), 0);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let f = Field::Rationals;
        let k = kernel_basis(&Matrix::zeros(f, 2, 3));
        assert_eq!(k.cols(), 3);
        assert_eq!(rank(&k), 3);
    }

    #[test]
    fn kernel_of_rank_one() {
        let f = Field::Rationals;
        let m = Matrix::from_i64_rows(f, &[&[1, 2], &[2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        // row reduction by hand: x + 2y = 0, free y = 1 gives (-2, 1)
        assert_eq!(k.column(0), vec![f.from_i64(-2), f.from_i64(1)]);
        assert!(m.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn rank_of_nilpotent_jordan_block() {
        // multiplication by x on k[x]/(x^4) in the basis 1, x, x^2, x^3
        let f = Field::Rationals;
        let m = Matrix::from_i64_rows(f, &[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(rank(&m), 3);
        assert_eq!(rank(&Matrix::identity(f, 5)), 5);
        assert_eq!(image_basis(&m).cols(), 3);
    }

    #[test]
    fn solve_underdetermined() {
        let f = Field::Rationals;
        let m = Matrix::from_i64_rows(f, &[&[1, 1]]);
        let x = solve(&m, &[f.from_i64(2)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![f.from_i64(2)]);
        let m2 = Matrix::from_i64_rows(f, &[&[1, 1], &[1, 1]]);
        assert_eq!(solve(&m2, &[f.from_i64(1), f.from_i64(2)]).unwrap(), None);
        assert!(matches!(solve(&m2, &[f.one()]), Err(KernelError::ShapeMismatch(_))));
    }

    #[test]
    fn quotients() {
        let f = Field::Rationals;
        let id = Matrix::identity(f, 2);
        let zero = Matrix::zeros(f, 2, 0);
        assert_eq!(quotient_basis(&zero, 2, Some(&id)).unwrap(), id);
        let sub = Matrix::from_i64_rows(f, &[&[1], &[1]]);
        let q = quotient_basis(&sub, 2, None).unwrap();
        assert_eq!(q.cols(), 1);
        assert_eq!(q.column(0), vec![f.one(), f.zero()]);
        assert_eq!(quotient_basis(&id, 2, Some(&id)).unwrap().cols(), 0);
        let line = Matrix::from_i64_rows(f, &[&[1], &[0]]);
        assert!(matches!(quotient_basis(&sub, 2, Some(&line)), Err(KernelError::NotASubspace)));
    }
}

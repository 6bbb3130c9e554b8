use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::GradedAlgebra;
use crate::grading::{Bicharacter, GradingGroup, GroupElement};
use crate::kernel::{sparse_rank, sparse_solve, Field, Scalar, SparseVec};
use crate::structure::{DecomposedClass, OrbitCochain, PureTensor};

use super::product::{BlockDim, ProductCohomology};
use super::report::{strings, Checks, NamedClass, QciReport, TableEntry};
use super::{constant_cochain, euler_cochain, qci, ExampleError, QciSpec};

/// Where an iterated product is split into `R ⊗^t S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Association {
    /// `(1 ⋯ k-1) k`
    Left,
    /// `1 (2 ⋯ k)`
    Right,
}

impl Association {
    fn split(self, k: usize) -> usize {
        match self {
            Association::Left => k - 1,
            Association::Right => 1,
        }
    }
}

fn sub_qci(spec: &QciSpec, range: std::ops::Range<usize>) -> Result<Arc<GradedAlgebra>, ExampleError> {
    if range.len() == 1 {
        return Ok(spec.factors()?.swap_remove(range.start));
    }
    let mut q_values = Vec::new();
    for i in range.clone() {
        for j in i + 1..range.end {
            q_values.push(spec.q(i, j).clone());
        }
    }
    let sub = QciSpec { exponents: spec.exponents[range.clone()].to_vec(), field: spec.field, q_values };
    let mut alg = qci(&sub)?;
    if spec.exponents.len() != 2 {
        // keep the variable names of the full product
        let names: Vec<String> = (0..alg.dim()).map(|u| rename(&alg.names()[u], range.start)).collect();
        alg = alg.change_basis(&(0..alg.dim()).map(|u| vec![(u, spec.field.one())]).collect::<Vec<_>>(), names, alg.group().clone(), alg.degrees().to_vec())?;
    }
    Ok(Arc::new(alg))
}

/// Shift variable indices `x1, x2, …` by `offset`.
fn rename(name: &str, offset: usize) -> String {
    let mut out = String::new();
    let mut chars = name.chars().peekable();
    while let Some(c) = chars.next() {
        out.push(c);
        if c == 'x' {
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            if let Ok(i) = digits.parse::<usize>() {
                out.push_str(&(i + offset).to_string());
            } else {
                out.push_str(&digits);
            }
        }
    }
    out
}

/// `Λ_q(m_1, …, m_k)` as `R ⊗^t S` split according to `assoc`.
fn split_product(spec: &QciSpec, assoc: Association, truncation: usize) -> Result<ProductCohomology, ExampleError> {
    spec.validate()?;
    let k = spec.exponents.len();
    if k < 2 {
        return Err(ExampleError::BadQValues { expected: 1, got: 0 });
    }
    let s = assoc.split(k);
    let r_alg = sub_qci(spec, 0..s)?;
    let s_alg = sub_qci(spec, s..k)?;
    let values = (0..s).map(|i| (s..k).map(|j| spec.q(i, j).clone()).collect()).collect();
    let t = Bicharacter::new(GradingGroup::free(s), GradingGroup::free(k - s), spec.field, values)?;
    ProductCohomology::new(&r_alg, &s_alg, &t, truncation)
}

/// The classes `1`, `U` and `V_i` of a quantum complete intersection split
/// as `R ⊗^t S`.
struct Generators {
    one: DecomposedClass,
    u: DecomposedClass,
    v: Vec<DecomposedClass>,
}

fn top(alg: &GradedAlgebra) -> usize {
    // the product of the top powers is the unique basis element of maximal total degree
    (0..alg.dim()).max_by_key(|&u| alg.degree(u).coords().iter().sum::<i64>()).expect("nonempty basis")
}

fn generators(pc: &ProductCohomology) -> Result<Generators, ExampleError> {
    let ts = pc.structure();
    let (r, s) = (ts.r_side().algebra(), ts.s_side().algebra());
    let field = r.field();
    let (g, h) = (r.group(), s.group());
    let pure = |fv: crate::hochschild::Cochain, a: GroupElement, gv: crate::hochschild::Cochain, b: GroupElement| {
        let x = PureTensor::new(OrbitCochain::new(b.clone(), fv), a.clone(), OrbitCochain::new(a, gv), b)?;
        Ok::<_, ExampleError>(DecomposedClass::pure(field.one(), x))
    };
    let unit_r = constant_cochain(r.unit().clone());
    let unit_s = constant_cochain(s.unit().clone());
    let one = pure(unit_r.clone(), g.zero(), unit_s.clone(), h.zero())?;
    let (tr, tsop) = (top(r), top(s));
    let u = pure(
        constant_cochain(vec![(tr, field.one())]),
        r.degree(tr).clone(),
        constant_cochain(vec![(tsop, field.one())]),
        s.degree(tsop).clone(),
    )?;
    let mut v = Vec::new();
    for i in 0..g.rank() {
        let w: Vec<i64> = (0..g.rank()).map(|j| i64::from(i == j)).collect();
        v.push(pure(euler_cochain(r, &w), g.zero(), unit_s.clone(), h.zero())?);
    }
    for i in 0..h.rank() {
        let w: Vec<i64> = (0..h.rank()).map(|j| i64::from(i == j)).collect();
        v.push(pure(unit_r.clone(), g.zero(), euler_cochain(s, &w), h.zero())?);
    }
    Ok(Generators { one, u, v })
}

/// A named class together with its block and coordinates.
struct Named {
    label: String,
    class: DecomposedClass,
    joint: GroupElement,
    coords: Vec<Scalar>,
}

impl Named {
    fn new(pc: &ProductCohomology, label: impl Into<String>, class: DecomposedClass) -> Result<Self, ExampleError> {
        let joint = pc.joint(&class)?;
        let coords = pc.class_coordinates(&class)?;
        Ok(Named { label: label.into(), class, joint, coords })
    }

    fn to_report(&self) -> NamedClass {
        NamedClass {
            label: self.label.clone(),
            degree: self.class.degree,
            internal: self.joint.coords().to_vec(),
            coordinates: strings(&self.coords),
        }
    }
}

fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `v` as a combination of the named classes of its block, `0`, or raw
/// coordinates when the named classes do not reach it.
fn express(v: &[Scalar], degree: usize, joint: &GroupElement, named: &[Named]) -> String {
    if is_zero(v) {
        return "0".into();
    }
    let block: Vec<&Named> = named.iter().filter(|x| x.class.degree == degree && &x.joint == joint).collect();
    let columns: Vec<SparseVec> = block.iter().map(|x| sparse(&x.coords)).collect();
    let Some(solution) = sparse_solve(v[0].field(), &columns, &sparse(v)) else {
        return format!("[{}]", strings(v).join(", "));
    };
    let mut out = String::new();
    for (i, c) in solution {
        let label = &block[i].label;
        let neg = &c.field().from_i64(-1) * &c;
        // print `p - 1` in a prime field as `-1`
        let negative = match (c.to_i64(), neg.to_i64()) {
            (Some(a), Some(b)) => a < 0 || (0..a).contains(&b),
            _ => false,
        };
        let (sep, c) = match (out.is_empty(), negative) {
            (true, false) => ("", c),
            (true, true) => ("-", neg),
            (false, false) => (" + ", c),
            (false, true) => (" - ", neg),
        };
        out.push_str(sep);
        if c.is_one() {
            out.push_str(label);
        } else {
            out.push_str(&format!("{c}·{label}"));
        }
    }
    out
}

fn sum_joint(x: &Named, y: &Named) -> GroupElement {
    GradingGroup::free(x.joint.coords().len()).add(&x.joint, &y.joint)
}

/// Table entries with their raw coordinates; expressions are filled in once
/// every named class is known.
#[derive(Default)]
struct Tables {
    cups: Vec<(TableEntry, GroupElement, Vec<Scalar>)>,
    brackets: Vec<(TableEntry, GroupElement, Vec<Scalar>)>,
}

impl Tables {
    fn entry(left: &Named, right: &Named, pipeline: &str, degree: usize, joint: &GroupElement, v: &[Scalar]) -> (TableEntry, GroupElement, Vec<Scalar>) {
        let entry = TableEntry {
            left: left.label.clone(),
            right: right.label.clone(),
            pipeline: pipeline.into(),
            degree,
            internal: joint.coords().to_vec(),
            coordinates: strings(v),
            expression: String::new(),
        };
        (entry, joint.clone(), v.to_vec())
    }

    fn finish(self, named: &[Named]) -> (Vec<TableEntry>, Vec<TableEntry>) {
        let fill = |rows: Vec<(TableEntry, GroupElement, Vec<Scalar>)>| {
            rows.into_iter()
                .map(|(mut e, joint, v)| {
                    e.expression = express(&v, e.degree, &joint, named);
                    e
                })
                .collect()
        };
        (fill(self.cups), fill(self.brackets))
    }

    /// Records `x ⌣ y` from both pipelines; returns the chain-level coordinates.
    fn cup(&mut self, pc: &ProductCohomology, checks: &mut Checks, x: &Named, y: &Named) -> Result<Vec<Scalar>, ExampleError> {
        let (chain, combined) = pc.cup(&x.class, &y.class)?;
        let (d, joint) = (x.class.degree + y.class.degree, sum_joint(x, y));
        self.cups.push(Self::entry(x, y, "chain", d, &joint, &chain));
        self.cups.push(Self::entry(x, y, "combined", d, &joint, &combined));
        checks.eq(format!("{}⌣{}: pipelines agree", x.label, y.label), strings(&combined), strings(&chain));
        Ok(chain)
    }

    /// Records `[x, y]` from the three pipelines; returns the combined coordinates.
    fn bracket(&mut self, pc: &ProductCohomology, checks: &mut Checks, x: &Named, y: &Named) -> Result<Vec<Scalar>, ExampleError> {
        let [combined, homotopy, classical] = pc.bracket(&x.class, &y.class)?;
        let (d, joint) = (x.class.degree + y.class.degree - 1, sum_joint(x, y));
        for (name, v) in [("combined", &combined), ("homotopy", &homotopy), ("classical", &classical)] {
            self.brackets.push(Self::entry(x, y, name, d, &joint, v));
        }
        let label = format!("[{}, {}]", x.label, y.label);
        checks.eq(format!("{label}: homotopy pipeline agrees"), strings(&homotopy), strings(&combined));
        checks.eq(format!("{label}: classical pipeline agrees"), strings(&classical), strings(&combined));
        Ok(combined)
    }
}

fn scaled(v: &[Scalar], c: i64) -> Vec<Scalar> {
    v.iter().map(|x| &x.field().from_i64(c) * x).collect()
}

fn sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Internal degrees of the nonzero blocks of each degree.
fn supports(blocks: &[BlockDim], truncation: usize) -> Vec<BTreeSet<Vec<i64>>> {
    let mut out = vec![BTreeSet::new(); truncation + 1];
    for b in blocks {
        out[b.degree].insert(b.internal.clone());
    }
    out
}

/// The full verification for `Λ_q(m_1, …, m_k)` split by `assoc`, without
/// turning failed checks into errors.
fn qci_report(spec: &QciSpec, assoc: Association, truncation: usize) -> Result<QciReport, ExampleError> {
    let k = spec.exponents.len();
    let pc = split_product(spec, assoc, truncation)?;
    let mut checks = Checks::default();

    let blocks = pc.decomposition_table()?;
    let dims = ProductCohomology::dims(&blocks, truncation);
    let expected: Vec<usize> = (0..=truncation).map(|i| if i == 0 { 2 } else if i <= k { binomial(k, i) } else { 0 }).collect();
    checks.eq("dimensions", dims.clone(), expected);

    let zero = vec![0i64; k];
    let top: Vec<i64> = spec.exponents.iter().map(|&m| m as i64 - 1).collect();
    let support = supports(&blocks, truncation);
    for (i, s) in support.iter().enumerate() {
        let expected: BTreeSet<Vec<i64>> = match i {
            0 => [zero.clone(), top.clone()].into(),
            i if i <= k => [zero.clone()].into(),
            _ => BTreeSet::new(),
        };
        checks.eq(format!("internal degrees in degree {i}"), s.clone(), expected);
    }

    let gens = generators(&pc)?;
    let v_labels: Vec<String> = if k == 2 { vec!["V".into(), "W".into()] } else { (1..=k).map(|i| format!("V{i}")).collect() };
    let one = Named::new(&pc, "1", gens.one)?;
    let u = Named::new(&pc, "U", gens.u)?;
    let vs: Vec<Named> = gens.v.into_iter().zip(&v_labels).map(|(c, l)| Named::new(&pc, l.clone(), c)).collect::<Result<_, _>>()?;
    for x in [&one, &u].into_iter().chain(&vs) {
        checks.push(format!("{} is nonzero", x.label), !is_zero(&x.coords), format!("coordinates {:?}", strings(&x.coords)));
    }
    let v_rank = sparse_rank(spec.field, vs.iter().map(|v| sparse(&v.coords)));
    checks.eq("V classes are independent", v_rank, k);

    let mut named: Vec<Named> = vec![one, u];
    named.extend(vs);
    let mut tables = Tables::default();
    let (u, vs) = (&named[1], &named[2..]);

    // cup products
    let uu = tables.cup(&pc, &mut checks, u, u)?;
    checks.push("U⌣U = 0", is_zero(&uu), format!("{:?}", strings(&uu)));
    for v in vs {
        for (x, y) in [(u, v), (v, u)] {
            let p = tables.cup(&pc, &mut checks, x, y)?;
            checks.push(format!("{}⌣{} = 0", x.label, y.label), is_zero(&p), format!("{:?}", strings(&p)));
        }
        let vv = tables.cup(&pc, &mut checks, v, v)?;
        checks.push(format!("{}⌣{} = 0", v.label, v.label), is_zero(&vv), format!("{:?}", strings(&vv)));
    }
    let mut pairs = Vec::new();
    let mut products = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let label = format!("{}⌣{}", vs[i].label, vs[j].label);
            products.push(Named::new(&pc, label, pc.structure().combined_cup(&vs[i].class, &vs[j].class))?);
            let p = tables.cup(&pc, &mut checks, &vs[i], &vs[j])?;
            let p2 = tables.cup(&pc, &mut checks, &vs[j], &vs[i])?;
            checks.eq(format!("{}⌣{} = -{}⌣{}", vs[j].label, vs[i].label, vs[i].label, vs[j].label), strings(&p2), strings(&scaled(&p, -1)));
            pairs.push(sparse(&p));
        }
    }
    if k >= 2 && truncation >= 2 {
        checks.eq("products V_i⌣V_j span HH²", sparse_rank(spec.field, pairs), dims[2]);
    }
    if k >= 3 && truncation >= k {
        // the top exterior product, built by repeated combined cups
        let mut top_class = named[2].class.clone();
        for v in &vs[1..] {
            top_class = pc.structure().combined_cup(&top_class, &v.class);
        }
        let top = Named::new(&pc, v_labels.join("⌣"), top_class)?;
        checks.push("top exterior product is nonzero", !is_zero(&top.coords), format!("{:?}", strings(&top.coords)));
        products.push(top);
    }

    // brackets
    for (i, v) in vs.iter().enumerate() {
        let got = tables.bracket(&pc, &mut checks, v, u)?;
        let m = spec.exponents[i] as i64;
        checks.eq(format!("[{}, U] = {}U", v.label, m - 1), strings(&got), strings(&scaled(&u.coords, m - 1)));
    }
    for i in 0..k {
        for j in i + 1..k {
            let got = tables.bracket(&pc, &mut checks, &vs[i], &vs[j])?;
            checks.push(format!("[{}, {}] = 0", vs[i].label, vs[j].label), is_zero(&got), format!("{:?}", strings(&got)));
        }
    }

    named.extend(products);
    let (cup_table, bracket_table) = tables.finish(&named);
    let passed = checks.all_passed();
    Ok(QciReport {
        exponents: spec.exponents.clone(),
        field: spec.field.to_string(),
        q_values: strings(&spec.q_values),
        truncation,
        dims,
        blocks,
        classes: named.iter().map(Named::to_report).collect(),
        cup_table,
        bracket_table,
        checks: checks.0,
        passed,
    })
}

/// `Λ_q(m, n)` up to degree `truncation`; a failed check comes back as
/// `VerificationFailed` unless `keep_failures` is set.
pub fn verify_qci2(m: usize, n: usize, q: &Scalar, truncation: usize, keep_failures: bool) -> Result<QciReport, ExampleError> {
    if truncation < 3 {
        return Err(ExampleError::VerificationFailed(format!("truncation {truncation} is below 3")));
    }
    let spec = QciSpec::new(vec![m, n], q.field(), vec![q.clone()])?;
    let report = qci_report(&spec, Association::Left, truncation)?;
    if keep_failures {
        Ok(report)
    } else {
        report.ensure()
    }
}

/// A nontrivial `e` with `Π q_l^{e_l} = 1` and `|e_l| ≤ bound`, if any.
pub fn multiplicative_relation(q_values: &[Scalar], bound: i64) -> Option<Vec<i64>> {
    let field = q_values.first()?.field();
    let powers: Vec<Vec<Scalar>> = q_values
        .iter()
        .map(|q| (-bound..=bound).map(|e| q.pow(e).expect("q-values are nonzero")).collect())
        .collect();
    let mut e = vec![-bound; q_values.len()];
    loop {
        if e.iter().any(|&x| x != 0) {
            let mut p = field.one();
            for (l, &x) in e.iter().enumerate() {
                p = &p * &powers[l][(x + bound) as usize];
            }
            if p.is_one() {
                return Some(e);
            }
        }
        let mut l = 0;
        loop {
            if l == e.len() {
                return None;
            }
            if e[l] < bound {
                e[l] += 1;
                break;
            }
            e[l] = -bound;
            l += 1;
        }
    }
}

/// `C(k, 2)` values for which no relation `Π q_l^{e_l} = 1` with
/// `|e_l| ≤ 2·truncation` exists, found among small integers (or linear
/// polynomials over `ℚ(q)`).
pub fn generic_q_values(field: Field, k: usize, truncation: usize) -> Result<Vec<Scalar>, ExampleError> {
    let count = k * k.saturating_sub(1) / 2;
    let bound = 2 * truncation as i64;
    if (2 * bound + 1).checked_pow(count as u32).map_or(true, |n| n > 50_000_000) {
        return Err(ExampleError::UnsupportedFieldConfiguration(format!("genericity enumeration for {count} q-values is too large")));
    }
    let candidate = |c: i64| -> Result<Scalar, ExampleError> {
        Ok(match field {
            Field::RationalFunctions => &field.indeterminate()? + &field.from_i64(c),
            _ => field.from_i64(c),
        })
    };
    let limit = match field {
        Field::Prime(p) => (p as i64 - 1).min(200),
        _ => 200,
    };
    let mut chosen: Vec<Scalar> = Vec::new();
    let start = if field == Field::RationalFunctions { 0 } else { 2 };
    for c in start..limit {
        let q = candidate(c)?;
        if q.is_zero() {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(q);
        if multiplicative_relation(&trial, bound).is_none() {
            chosen = trial;
            if chosen.len() == count {
                return Ok(chosen);
            }
        }
    }
    Err(ExampleError::UnsupportedFieldConfiguration(format!("no {count} generic q-values found in {field}")))
}

fn check_generic(spec: &QciSpec, truncation: usize) -> Result<(), ExampleError> {
    if let Some(e) = multiplicative_relation(&spec.q_values, 2 * truncation as i64) {
        return Err(ExampleError::UnsupportedFieldConfiguration(format!("q-values satisfy the relation with exponents {e:?}")));
    }
    Ok(())
}

/// `Λ_q(m_1, …, m_k)` for `k ≥ 3` through `(1 ⋯ k-1) k`; the q-values must
/// pass the genericity enumeration.
pub fn verify_qci_iterated(spec: &QciSpec, truncation: usize, keep_failures: bool) -> Result<QciReport, ExampleError> {
    let k = spec.exponents.len();
    if k < 3 {
        return Err(ExampleError::BadQValues { expected: 3, got: spec.q_values.len() });
    }
    if truncation < k {
        return Err(ExampleError::VerificationFailed(format!("truncation {truncation} is below {k}")));
    }
    spec.validate()?;
    check_generic(spec, truncation)?;
    let report = qci_report(spec, Association::Left, truncation)?;
    if keep_failures {
        Ok(report)
    } else {
        report.ensure()
    }
}

/// Reports for both associations of a three-factor product, with
/// basis-dependent coordinates removed.
pub fn iterated_association_reports(spec: &QciSpec, truncation: usize) -> Result<(QciReport, QciReport), ExampleError> {
    let left = qci_report(spec, Association::Left, truncation)?;
    let right = qci_report(spec, Association::Right, truncation)?;
    Ok((left.canonical(), right.canonical()))
}

/// Dimension tables of `Λ_q(m_1, …, m_k)` split by `assoc`: from the
/// decomposition and from the product algebra's own bar complex.
pub fn dimension_identity(spec: &QciSpec, assoc: Association, truncation: usize) -> Result<(Vec<BlockDim>, Vec<BlockDim>), ExampleError> {
    let pc = split_product(spec, assoc, truncation)?;
    Ok((pc.decomposition_table()?, pc.product_table()?))
}

/// Outcome of checking that cups vanish across twisted pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub truncation: usize,
    pub classes: usize,
    pub pairs: usize,
    /// Pairs with `t(a', b) t(a, b') ≠ 1`.
    pub twisted_pairs: usize,
    /// Pairs with `t(a', b) t(a, b') = 1` whose product is nonzero.
    pub nonzero_products: usize,
    /// Twisted pairs whose product is nonzero.
    pub violations: Vec<String>,
}

/// Every pair of basis classes of total degree at most `truncation` with
/// `t(a', b) t(a, b') ≠ 1` must cup to zero.
pub fn degeneracy_check(pc: &ProductCohomology) -> Result<DegeneracyReport, ExampleError> {
    let ts = pc.structure();
    let (g, h) = (ts.r_side().algebra().group().clone(), ts.s_side().algebra().group().clone());
    let t = ts.twist();
    let d = pc.truncation();
    let mut classes = Vec::new();
    for b in pc.decomposition_table()? {
        let (a, bb) = (g.element(&b.internal[..g.rank()])?, h.element(&b.internal[g.rank()..])?);
        let block = ts.block(b.degree, &a, &bb)?;
        for k in 0..block.dim() {
            classes.push((block.n, a.clone(), bb.clone(), ts.phi(&block.basis_class(k))));
        }
    }
    let mut report = DegeneracyReport { truncation: d, classes: classes.len(), pairs: 0, twisted_pairs: 0, nonzero_products: 0, violations: Vec::new() };
    let mut by_target: BTreeMap<(usize, GroupElement), Vec<(usize, usize)>> = BTreeMap::new();
    for (i, x) in classes.iter().enumerate() {
        for (j, y) in classes.iter().enumerate() {
            if x.0 + y.0 <= d {
                let joint = ts.joint_degree(&g.add(&x.1, &y.1), &h.add(&x.2, &y.2));
                by_target.entry((x.0 + y.0, joint)).or_default().push((i, j));
            }
        }
    }
    for ((n, joint), pairs) in by_target {
        let target = pc.target(n, &joint)?;
        for (i, j) in pairs {
            let (x, y) = (&classes[i], &classes[j]);
            report.pairs += 1;
            let weight = &t.eval(&y.1, &x.2)? * &t.eval(&x.1, &y.2)?;
            let product = ts.product().cup(&x.3, &y.3);
            let zero = target.is_coboundary(&product)?;
            if weight.is_one() {
                report.nonzero_products += usize::from(!zero);
            } else {
                report.twisted_pairs += 1;
                if !zero {
                    report.violations.push(format!("degrees ({}, {}) at ({}, {}) and ({}, {})", x.0, y.0, x.1, x.2, y.1, y.2));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renames_variables() {
        assert_eq!(rename("x1^2x2", 1), "x2^2x3");
        assert_eq!(rename("1", 2), "1");
    }

    #[test]
    fn qci2_small_cases_pass() {
        let q = Field::RationalFunctions.indeterminate().unwrap();
        let r = verify_qci2(2, 2, &q, 3, true).unwrap();
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        let vu: Vec<_> = r.bracket_table.iter().filter(|e| e.left == "V" && e.right == "U").map(|e| e.expression.as_str()).collect();
        assert_eq!(vu, ["U", "U", "U"]);
    }

    #[test]
    fn relations_are_found() {
        let f = Field::Rationals;
        let e = multiplicative_relation(&[f.from_i64(2), f.from_i64(4)], 2).unwrap();
        assert!(e == [2, -1] || e == [-2, 1]);
        assert_eq!(multiplicative_relation(&[f.from_i64(2), f.from_i64(3)], 4), None);
        let p = Field::prime(1_000_000_007).unwrap();
        let qs = generic_q_values(p, 3, 4).unwrap();
        assert_eq!(qs.len(), 3);
        assert!(multiplicative_relation(&qs, 8).is_none());
    }
}

use serde::Serialize;

use crate::kernel::{Field, Scalar};

/// `HH^*(Λ(m), Λ(m)_{b̂})` from the 2-periodic resolution, with `λ = q^b`.
///
/// Every term is a copy of `Λ(m)` generated in degree `d_{2j} = jm`,
/// `d_{2j+1} = jm + 1`; the maps alternate between multiplication by
/// `(1 - λ)x` and by `(Σ_{j<m} λ^j) x^{m-1}`. In internal degree `a` the
/// `i`-th term is spanned by the single monomial `x^{d_i + a}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicHh {
    pub m: usize,
    pub b: i64,
    pub lambda: Scalar,
    pub dims: Vec<usize>,
    /// Per cohomological degree, `(internal degree, k)` for each surviving class `x^k`.
    pub classes: Vec<Vec<(i64, usize)>>,
}

fn generator_degree(m: usize, i: usize) -> i64 {
    ((i / 2) * m + i % 2) as i64
}

/// Coefficient and exponent of the map out of the `i`-th term.
fn outgoing(m: usize, lambda: &Scalar, i: usize) -> (Scalar, usize) {
    let field = lambda.field();
    if i % 2 == 0 {
        (&field.one() - lambda, 1)
    } else {
        let mut sum = field.zero();
        let mut p = field.one();
        for _ in 0..m {
            sum = &sum + &p;
            p = &p * lambda;
        }
        (sum, m - 1)
    }
}

pub fn periodic_hh(m: usize, q: &Scalar, b: i64, i_max: usize) -> PeriodicHh {
    let lambda = q.pow(b).expect("q is nonzero");
    let mut classes = Vec::with_capacity(i_max + 1);
    for i in 0..=i_max {
        let d = generator_degree(m, i);
        let (c, e) = outgoing(m, &lambda, i);
        let incoming = (i > 0).then(|| outgoing(m, &lambda, i - 1));
        let mut found = Vec::new();
        for k in 0..m {
            let cocycle = c.is_zero() || k + e >= m;
            let boundary = match &incoming {
                Some((c0, e0)) => !c0.is_zero() && k >= *e0,
                None => false,
            };
            if cocycle && !boundary {
                found.push((k as i64 - d, k));
            }
        }
        classes.push(found);
    }
    PeriodicHh { m, b, lambda, dims: classes.iter().map(Vec::len).collect(), classes }
}

/// One row of the displayed case table for `HH^i(Λ(m), Λ(m)_{b̂})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCase {
    pub label: &'static str,
    /// Internal degrees of the predicted classes, one class each, ascending.
    pub internal_degrees: Vec<i64>,
}

/// The table's prediction, or `None` when `b ≠ 0` and `q^b` has finite
/// order (the table assumes otherwise).
pub fn case_table(m: usize, q: &Scalar, b: i64, i: usize) -> Option<TableCase> {
    let field = q.field();
    let lambda = q.pow(b).ok()?;
    let finite = matches!(field, Field::Prime(_)) || lambda.multiplicative_order(2).ok()?.is_some();
    if b != 0 && finite {
        return None;
    }
    // m·x^{m-1} vanishes exactly when m = 0 in the field
    let m_zero = field.from_i64(m as i64).is_zero();
    let shifted = |ks: std::ops::Range<usize>, shift: i64| ks.map(|k| k as i64 - shift).collect();
    let (label, internal_degrees) = match (i, b != 0) {
        (0, false) => ("Λ(m)", shifted(0..m, 0)),
        (0, true) => ("(x^{m-1})", shifted(m - 1..m, 0)),
        (_, true) => ("0", Vec::new()),
        (i, false) if i % 2 == 0 => {
            let top = if m_zero { m } else { m - 1 };
            ("(Λ(m)/(mx^{m-1}))[i/2·m]", shifted(0..top, (i / 2 * m) as i64))
        }
        (i, false) => {
            let bottom = if m_zero { 0 } else { 1 };
            ("Ann_{Λ(m)}(mx^{m-1})[(i-1)/2·m+1]", shifted(bottom..m, ((i - 1) / 2 * m + 1) as i64))
        }
    };
    Some(TableCase { label, internal_degrees })
}

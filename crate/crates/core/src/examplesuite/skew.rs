use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{eigenspace_grading, group_algebra, skew_group_algebra, AlgebraError, FiniteGroupAction, GradedAlgebra};
use crate::grading::{GradingGroup, GroupElement};
use crate::hochschild::{cohomology_dim, CochainComplex, HochschildComplex};
use crate::structure::OrbitAlgebra;

use super::product::ProductCohomology;
use super::report::{Check, Checks};
use super::ExampleError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewReport {
    pub field: String,
    pub group: String,
    pub truncation: usize,
    /// `dim HH^i(R ⋊ G)` from the bar complex of the skew group algebra.
    pub direct: Vec<usize>,
    /// The same from the decomposition of the eigenspace-graded `R ⊗^t kG`.
    pub decomposition: Vec<usize>,
    /// `Σ_g dim HH^i(R, R_ĝ)` restricted to trivial character degree.
    pub invariant_sum: Vec<usize>,
    /// `dim HH^i(kG, _φ kG)` for each character `φ`, in the order of `Ĝ`'s elements.
    pub group_algebra: Vec<Vec<usize>>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Total dimension of `HH^i(A, A)` for `i ≤ truncation`.
fn total_dims(alg: &Arc<GradedAlgebra>, truncation: usize) -> Result<Vec<usize>, ExampleError> {
    let c = HochschildComplex::regular(alg, truncation);
    let g = c.internal_group().clone();
    let targets: BTreeSet<&GroupElement> = (0..c.target_dim()).map(|j| c.target_degree(j)).collect();
    (0..=truncation)
        .map(|n| {
            let degrees: BTreeSet<GroupElement> =
                c.sources_by_degree(n).keys().flat_map(|d| targets.iter().map(|t| g.sub(t, d)).collect::<Vec<_>>()).collect();
            degrees.iter().map(|d| Ok(cohomology_dim(&c, n, d)?)).sum()
        })
        .collect()
}

/// Total dimension of `HH^n` of one orbit summand over all internal degrees.
fn orbit_total(side: &OrbitAlgebra, twist: &GroupElement, n: usize, filter: impl Fn(&GroupElement) -> bool) -> Result<usize, ExampleError> {
    let c = side.complex(twist)?;
    let g = c.internal_group().clone();
    let targets: BTreeSet<&GroupElement> = (0..c.target_dim()).map(|j| c.target_degree(j)).collect();
    let degrees: BTreeSet<GroupElement> =
        c.sources_by_degree(n).keys().flat_map(|d| targets.iter().map(|t| g.sub(t, d)).collect::<Vec<_>>()).collect();
    degrees.iter().filter(|d| filter(d)).map(|d| Ok(cohomology_dim(c.as_ref(), n, d)?)).sum()
}

/// `dim HH^j(kG, _φ kG)` for every character `φ` of a finite abelian `G`, `j ≤ truncation`.
pub fn group_algebra_hh(action: &FiniteGroupAction, truncation: usize) -> Result<Vec<Vec<usize>>, ExampleError> {
    let eg = eigenspace_grading(action).map_err(not_diagonalizable)?;
    let kg = Arc::new(group_algebra(action.group(), action.algebra().field())?);
    let side = OrbitAlgebra::new(kg, eg.bicharacter.clone(), crate::structure::Side::S, truncation)?;
    let (dual, rest) = (action.group().clone(), action.algebra().group().clone());
    dual.elements()?
        .iter()
        .map(|phi| {
            let twist = GradingGroup::join(phi, &rest.zero());
            (0..=truncation).map(|j| orbit_total(&side, &twist, j, |_| true)).collect()
        })
        .collect()
}

fn not_diagonalizable(e: AlgebraError) -> ExampleError {
    match e {
        AlgebraError::NotDiagonalizable { .. } => ExampleError::NotDiagonalizable,
        e => e.into(),
    }
}

/// `HH^*(R ⋊ G)` against the twisted-tensor decomposition of
/// `R ⊗^t kG` with `R` regraded by the characters of `G`.
pub fn verify_skew(action: &FiniteGroupAction, truncation: usize, keep_failures: bool) -> Result<SkewReport, ExampleError> {
    let r = action.algebra();
    let field = r.field();
    let order = action.group().order().unwrap_or(0);
    if field.characteristic() != 0 && order % field.characteristic() == 0 {
        return Err(ExampleError::UnsupportedFieldConfiguration(format!("|G| = {order} is not invertible in {field}")));
    }
    let eg = eigenspace_grading(action).map_err(not_diagonalizable)?;
    let regraded = Arc::new(eg.algebra.clone());
    let kg = Arc::new(group_algebra(action.group(), field)?);
    let skew = Arc::new(skew_group_algebra(action)?);

    let direct = total_dims(&skew, truncation)?;
    let pc = ProductCohomology::new(&regraded, &kg, &eg.bicharacter, truncation)?;
    let decomposition = ProductCohomology::dims(&pc.decomposition_table()?, truncation);

    // Σ_g over the trivial-character part of HH^i(R, R_ĝ)
    let dual_rank = action.group().rank();
    let side = pc.structure().r_side();
    let mut invariant_sum = vec![0; truncation + 1];
    for g in action.group().elements()? {
        for (i, total) in invariant_sum.iter_mut().enumerate() {
            *total += orbit_total(side, &g, i, |d| d.coords()[..dual_rank].iter().all(|&c| c == 0))?;
        }
    }
    let kg_dims = group_algebra_hh(action, truncation)?;

    let mut checks = Checks::default();
    checks.eq("decomposition matches R ⋊ G", decomposition.clone(), direct.clone());
    checks.eq("invariant sum matches R ⋊ G", invariant_sum.clone(), direct.clone());
    for (k, dims) in kg_dims.iter().enumerate() {
        let expected: Vec<usize> = (0..=truncation).map(|j| if j == 0 && k == 0 { order as usize } else { 0 }).collect();
        checks.eq(format!("HH(kG, φ{k} kG)"), dims.clone(), expected);
    }
    let passed = checks.all_passed();
    let report = SkewReport {
        field: field.to_string(),
        group: action.group().to_string(),
        truncation,
        direct,
        decomposition,
        invariant_sum,
        group_algebra: kg_dims,
        checks: checks.0,
        passed,
    };
    if !keep_failures {
        if let Some(c) = report.checks.iter().find(|c| !c.passed) {
            return Err(ExampleError::VerificationFailed(format!("{}: {}", c.name, c.detail)));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraAutomorphism;
    use crate::kernel::{Field, Matrix};

    fn scaling(m: usize, c: i64, field: Field) -> FiniteGroupAction {
        let r = Arc::new(GradedAlgebra::truncated_polynomial(m, field, "x").unwrap());
        let mut mat = Matrix::zeros(field, m, m);
        for i in 0..m {
            mat.set(i, i, field.from_i64(c).pow(i as i64).unwrap());
        }
        let rho = AlgebraAutomorphism::new(r.clone(), &mat).unwrap();
        FiniteGroupAction::new(GradingGroup::cyclic(3).unwrap(), r, vec![rho]).unwrap()
    }

    #[test]
    fn group_algebra_is_separable() {
        let f7 = Field::prime(7).unwrap();
        let dims = group_algebra_hh(&scaling(2, 2, f7), 3).unwrap();
        assert_eq!(dims, vec![vec![3, 0, 0, 0], vec![0; 4], vec![0; 4]]);
    }

    #[test]
    fn trivial_group_leaves_hh_unchanged() {
        let f7 = Field::prime(7).unwrap();
        let r = Arc::new(GradedAlgebra::truncated_polynomial(3, f7, "x").unwrap());
        let action = FiniteGroupAction::new(GradingGroup::trivial(), r.clone(), vec![]).unwrap();
        let report = verify_skew(&action, 2, false).unwrap();
        assert_eq!(report.direct, total_dims(&r, 2).unwrap());
    }

    #[test]
    fn skew_cubic() {
        let f7 = Field::prime(7).unwrap();
        let report = verify_skew(&scaling(3, 2, f7), 2, true).unwrap();
        assert!(report.passed, "{report:#?}");
    }
}

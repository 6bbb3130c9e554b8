//! Batch command-line surface: job files in, text or JSON reports out.

mod job;
mod report;

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{twisted_tensor_algebra, GradedAlgebra};
use crate::examplesuite::{
    generic_q_values, verify_qci2, verify_qci_iterated, verify_skew, ExampleError, ProductCohomology, QciSpec,
};
use crate::grading::{GradingGroup, GroupElement};
use crate::hochschild::{cohomology, CochainComplex, HochschildComplex};
use crate::kernel::Scalar;
use crate::structure::{DecomposedClass, OrbitAlgebra, Side};

pub use job::{AlgebraDef, BicharacterDef, Command, GroupDef, JobSpec, Options, ProductDef, Workspace, DEFAULT_MAX_DEGREE};
pub use report::{
    AlgebraSummary, Body, ClassLabel, CochainEntry, DecomposeBlock, DecomposeReport, FactorTerm, HhBlock, HhReport, PipelineValue,
    ProductEntry, ProductTableReport, Report, ValidateReport, SCHEMA_VERSION,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for a failed verification, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed(_) => 1,
            _ => 2,
        }
    }
}

impl From<ExampleError> for CliError {
    fn from(e: ExampleError) -> Self {
        match e {
            ExampleError::VerificationFailed(s) => CliError::VerificationFailed(s),
            ExampleError::BadExponent(_) | ExampleError::BadQValues { .. } | ExampleError::UnsupportedFieldConfiguration(_) => {
                CliError::Validation(e.to_string())
            }
            other => CliError::Computation(other.to_string()),
        }
    }
}

fn computation(e: impl std::fmt::Display) -> CliError {
    CliError::Computation(e.to_string())
}

/// Command-line values that take precedence over the job file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub command: Option<Command>,
    pub field: Option<String>,
    pub max_degree: Option<usize>,
    pub m: Option<usize>,
    pub n: Option<usize>,
}

/// The job with overrides applied and defaults filled in.
pub fn normalize(mut job: JobSpec, o: &Overrides) -> Result<JobSpec, CliError> {
    if let Some(c) = o.command {
        job.command = Some(c);
    }
    if job.command.is_none() {
        return Err(CliError::Validation("no command given".into()));
    }
    if let Some(f) = &o.field {
        job.field = Some(f.clone());
    }
    job.field = Some(job.field()?.to_string());
    if let Some(d) = o.max_degree {
        job.options.max_degree = Some(d);
    }
    job.options.max_degree = Some(job.max_degree()?);
    if o.m.is_some() {
        job.options.m = o.m;
    }
    if o.n.is_some() {
        job.options.n = o.n;
    }
    Ok(job)
}

/// Runs a normalized job. Failed checks are recorded in the report, not
/// returned as errors.
pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    let command = job.command.ok_or_else(|| CliError::Validation("no command given".into()))?;
    let field = job.field()?;
    let d = job.max_degree()?;
    log::info!("{} over {field} up to degree {d}", command.name());
    let ws = Workspace::build(job)?;
    let (result, failures) = match command {
        Command::ComputeHh => (Body::Hh(compute_hh(job, &ws, d)?), Vec::new()),
        Command::Decompose => {
            let r = decompose(job, &ws, d)?;
            let mut failures = Vec::new();
            for b in &r.blocks {
                if b.decomposition != b.product {
                    failures.push(format!("dimension identity in degree {} at {:?}", b.degree, b.internal));
                }
                if !b.phi_isomorphism {
                    failures.push(format!("phi is not an isomorphism in degree {} at {:?}", b.degree, b.internal));
                }
            }
            (Body::Decompose(r), failures)
        }
        Command::CupTable | Command::BracketTable => {
            let r = product_table(job, &ws, d, command == Command::CupTable)?;
            let failures = r.entries.iter().filter(|e| !e.agree).map(|e| format!("pipelines disagree on {} and {}", e.left, e.right)).collect();
            let body = if command == Command::CupTable { Body::CupTable(r) } else { Body::BracketTable(r) };
            (body, failures)
        }
        Command::VerifyQci => {
            let (m, n) = match (job.options.m, job.options.n) {
                (Some(m), Some(n)) => (m, n),
                _ => return Err(CliError::Validation("verify-qci needs m and n".into())),
            };
            let q = match job.options.q.as_deref() {
                Some([q]) => job::scalar(field, q)?,
                Some(qs) => return Err(CliError::Validation(format!("verify-qci takes one q value, got {}", qs.len()))),
                None => field.indeterminate().map_err(|_| CliError::Validation(format!("q must be given over {field}")))?,
            };
            let r = verify_qci2(m, n, &q, d, true)?;
            (Body::Qci(r.clone()), failed_checks(&r.checks))
        }
        Command::VerifyQciIterated => {
            let exponents = job.options.exponents.clone().ok_or_else(|| CliError::Validation("verify-qci-iterated needs exponents".into()))?;
            let q = match &job.options.q {
                Some(qs) => qs.iter().map(|s| job::scalar(field, s)).collect::<Result<Vec<_>, _>>()?,
                None => generic_q_values(field, exponents.len(), d)?,
            };
            let spec = QciSpec::new(exponents, field, q)?;
            let r = verify_qci_iterated(&spec, d, true)?;
            (Body::Qci(r.clone()), failed_checks(&r.checks))
        }
        Command::VerifySkew => {
            let name = job.options.algebra.as_deref().ok_or_else(|| CliError::Validation("verify-skew needs an algebra".into()))?;
            let action = ws.actions.get(name).ok_or_else(|| CliError::Validation(format!("algebra {name} is not a skew group algebra")))?;
            let r = verify_skew(action, d, true)?;
            let failures = failed_checks(&r.checks);
            (Body::Skew(r), failures)
        }
        Command::Validate => {
            let algebras = ws
                .algebras
                .iter()
                .map(|(name, a)| AlgebraSummary { name: name.clone(), dim: a.dim(), group: a.group().to_string() })
                .collect();
            let bicharacter = match &job.bicharacter {
                Some(b) => {
                    ws.bicharacter(job)?;
                    Some(format!("{} x {}", b.left, b.right))
                }
                None => None,
            };
            (Body::Validate(ValidateReport { algebras, bicharacter }), Vec::new())
        }
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command,
        field: field.to_string(),
        max_degree: d,
        passed: failures.is_empty(),
        failures,
        job: job.clone(),
        result,
    })
}

fn failed_checks(checks: &[crate::examplesuite::Check]) -> Vec<String> {
    checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect()
}

/// The algebra a command acts on: `options.algebra`, else the twisted
/// product of the bicharacter's factors, else the only algebra defined.
fn target_algebra(job: &JobSpec, ws: &Workspace) -> Result<(String, Arc<GradedAlgebra>), CliError> {
    if let Some(name) = &job.options.algebra {
        return Ok((name.clone(), ws.algebra(name)?.clone()));
    }
    if let Some(b) = &job.bicharacter {
        let (r, s, t) = ws.bicharacter(job)?;
        let product = twisted_tensor_algebra(&r, &s, &t).map_err(computation)?;
        return Ok((format!("{} ⊗^t {}", b.left, b.right), Arc::new(product)));
    }
    match ws.algebras.iter().collect::<Vec<_>>()[..] {
        [(name, a)] => Ok((name.clone(), a.clone())),
        _ => Err(CliError::Validation("name the algebra in options.algebra".into())),
    }
}

fn compute_hh(job: &JobSpec, ws: &Workspace, d: usize) -> Result<HhReport, CliError> {
    let (name, alg) = target_algebra(job, ws)?;
    let (complex, coefficients) = match &job.options.twist {
        None => (Arc::new(HochschildComplex::regular(&alg, d)), "regular".to_string()),
        Some(twist) => {
            let b = job.bicharacter.as_ref().ok_or_else(|| CliError::Validation("a twist needs a bicharacter".into()))?;
            let (_, _, t) = ws.bicharacter(job)?;
            let side = match job.options.algebra.as_deref() {
                Some(a) if a == b.left => Side::R,
                Some(a) if a == b.right => Side::S,
                _ => return Err(CliError::Validation("a twist needs options.algebra to name a bicharacter factor".into())),
            };
            let other = if side == Side::R { t.right() } else { t.left() };
            let tw = other.element(twist).map_err(|e| CliError::Validation(format!("twist: {e}")))?;
            let orbit = OrbitAlgebra::new(alg.clone(), t, side, d).map_err(computation)?;
            let label = if side == Side::R { format!("{name}_{tw}") } else { format!("_{tw}{name}") };
            (orbit.complex(&tw).map_err(computation)?, label)
        }
    };
    let c = complex.as_ref();
    let g = c.internal_group().clone();
    let targets: BTreeSet<&GroupElement> = (0..c.target_dim()).map(|j| c.target_degree(j)).collect();
    let mut blocks = Vec::new();
    for n in 0..=d {
        let degrees: BTreeSet<GroupElement> = c.sources_by_degree(n).keys().flat_map(|s| targets.iter().map(|t| g.sub(t, s)).collect::<Vec<_>>()).collect();
        let degrees: Vec<GroupElement> = degrees.into_iter().collect();
        let spaces = degrees.par_iter().map(|deg| cohomology(c, n, deg)).collect::<Result<Vec<_>, _>>().map_err(computation)?;
        for (deg, h) in degrees.into_iter().zip(spaces) {
            if h.dim() == 0 {
                continue;
            }
            let representatives = (0..h.dim())
                .map(|i| {
                    h.representative(i)
                        .values
                        .iter()
                        .map(|(x, v)| CochainEntry {
                            arguments: complex.decode(*x, n).iter().map(|&u| alg.names()[u].clone()).collect(),
                            value: alg.element_to_string(v),
                        })
                        .collect()
                })
                .collect();
            blocks.push(HhBlock { degree: n, internal: deg.coords().to_vec(), dim: h.dim(), representatives });
        }
    }
    let mut dims = vec![0; d + 1];
    for b in &blocks {
        dims[b.degree] += b.dim;
    }
    Ok(HhReport { algebra: name, coefficients, dims, blocks })
}

fn product_cohomology(job: &JobSpec, ws: &Workspace, d: usize) -> Result<ProductCohomology, CliError> {
    let (r, s, t) = ws.bicharacter(job)?;
    Ok(ProductCohomology::new(&r, &s, &t, d)?)
}

/// Splits joint coordinates into `(a, b)`.
fn split(pc: &ProductCohomology, internal: &[i64]) -> Result<(GroupElement, GroupElement), CliError> {
    let ts = pc.structure();
    let (g, h): (&GradingGroup, &GradingGroup) = (ts.r_side().algebra().group(), ts.s_side().algebra().group());
    let a = g.element(&internal[..g.rank()]).map_err(computation)?;
    let b = h.element(&internal[g.rank()..]).map_err(computation)?;
    Ok((a, b))
}

fn decompose(job: &JobSpec, ws: &Workspace, d: usize) -> Result<DecomposeReport, CliError> {
    let pc = product_cohomology(job, ws, d)?;
    let dec = pc.decomposition_table()?;
    let prod = pc.product_table()?;
    let dec_map = ProductCohomology::table_map(&dec);
    let prod_map = ProductCohomology::table_map(&prod);
    let keys: BTreeSet<&(usize, Vec<i64>)> = dec_map.keys().chain(prod_map.keys()).collect();
    let mut blocks = Vec::new();
    for key in keys {
        let (n, internal) = key;
        let (a, b) = split(&pc, internal)?;
        let block = pc.structure().block(*n, &a, &b).map_err(computation)?;
        let factors = block
            .factors
            .iter()
            .enumerate()
            .filter(|(_, (l, r))| l.dim() > 0 && r.dim() > 0)
            .map(|(i, (l, r))| FactorTerm { i, left: l.dim(), right: r.dim() })
            .collect();
        blocks.push(DecomposeBlock {
            degree: *n,
            internal: internal.clone(),
            decomposition: dec_map.get(key).copied().unwrap_or(0),
            product: prod_map.get(key).copied().unwrap_or(0),
            factors,
            phi_isomorphism: block.is_isomorphism(),
        });
    }
    Ok(DecomposeReport {
        dims_decomposition: ProductCohomology::dims(&dec, d),
        dims_product: ProductCohomology::dims(&prod, d),
        decomposition_table: dec,
        product_table: prod,
        blocks,
    })
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn product_table(job: &JobSpec, ws: &Workspace, d: usize, cup: bool) -> Result<ProductTableReport, CliError> {
    let pc = product_cohomology(job, ws, d)?;
    let fmt = |e: &GroupElement| {
        let parts: Vec<String> = e.coords().iter().map(ToString::to_string).collect();
        parts.join(",")
    };
    let mut classes: Vec<(ClassLabel, DecomposedClass)> = Vec::new();
    for b in pc.decomposition_table()? {
        let (a, bb) = split(&pc, &b.internal)?;
        let block = pc.structure().block(b.degree, &a, &bb).map_err(computation)?;
        for k in 0..block.dim() {
            let label = ClassLabel { label: format!("H{}[{};{}]#{k}", b.degree, fmt(&a), fmt(&bb)), degree: b.degree, internal: b.internal.clone(), index: k };
            classes.push((label, block.basis_class(k)));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..classes.len())
        .flat_map(|i| (0..classes.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let total = classes[i].0.degree + classes[j].0.degree;
            if cup {
                total <= d
            } else {
                total >= 1 && total - 1 <= d
            }
        })
        .collect();
    let entries = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (&classes[i], &classes[j]);
            let total = x.0.degree + y.0.degree;
            let internal: Vec<i64> = x.0.internal.iter().zip(&y.0.internal).map(|(p, q)| p + q).collect();
            let values: Vec<PipelineValue> = if cup {
                let (chain, combined) = pc.cup(&x.1, &y.1)?;
                vec![PipelineValue { pipeline: "chain".into(), coordinates: strings(&chain) }, PipelineValue { pipeline: "combined".into(), coordinates: strings(&combined) }]
            } else {
                let [combined, homotopy, classical] = pc.bracket(&x.1, &y.1)?;
                [("combined", combined), ("homotopy", homotopy), ("classical", classical)]
                    .into_iter()
                    .map(|(p, v)| PipelineValue { pipeline: p.into(), coordinates: strings(&v) })
                    .collect()
            };
            let agree = values.windows(2).all(|w| w[0].coordinates == w[1].coordinates);
            Ok(ProductEntry {
                left: x.0.label.clone(),
                right: y.0.label.clone(),
                degree: if cup { total } else { total - 1 },
                internal,
                values,
                agree,
            })
        })
        .collect::<Result<Vec<_>, ExampleError>>()?;
    Ok(ProductTableReport { classes: classes.into_iter().map(|c| c.0).collect(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(text: &str) -> JobSpec {
        normalize(JobSpec::from_json(text).unwrap(), &Overrides::default()).unwrap()
    }

    #[test]
    fn truncated_polynomial_dims() {
        let j = job(r#"{"field": "Q", "algebras": {"L": {"constructor": "truncated_polynomial", "m": 2}}, "command": "compute-hh", "options": {"max_degree": 3}}"#);
        let r = run(&j).unwrap();
        assert_eq!(r.dims(), vec![2, 1, 1, 1]);
        assert!(r.passed);
    }

    #[test]
    fn report_round_trips() {
        let j = job(r#"{"field": "Fp:5", "algebras": {"R": {"constructor": "truncated_polynomial", "m": 2, "var": "x"}, "S": {"constructor": "truncated_polynomial", "m": 2, "var": "y"}}, "bicharacter": {"left": "R", "right": "S", "values": [["2"]]}, "command": "decompose", "options": {"max_degree": 3}}"#);
        let r = run(&j).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        let again = run(&JobSpec::from_json(&r.to_json()).unwrap()).unwrap();
        assert_eq!(again, r);
        let parsed: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(parsed, r);
    }

    #[test]
    fn bad_structure_constants_are_input_errors() {
        // u·v = u and v·u = 0 give (u·v)·v = u but u·(v·v) = 0
        let text = r#"{"groups": {"T": {}}, "algebras": {"A": {"constructor": "inline", "group": "T", "names": ["1", "u", "v"],
            "degrees": [[], [], []], "unit": [[0, "1"]], "products": [
            {"left": 0, "right": 0, "value": [[0, "1"]]}, {"left": 0, "right": 1, "value": [[1, "1"]]}, {"left": 0, "right": 2, "value": [[2, "1"]]},
            {"left": 1, "right": 0, "value": [[1, "1"]]}, {"left": 2, "right": 0, "value": [[2, "1"]]}, {"left": 1, "right": 2, "value": [[1, "1"]]}]}},
            "command": "validate"}"#;
        let err = run(&job(text)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("not associative"), "{err}");
        assert_eq!(JobSpec::from_json("{\"command\": \"nope\"}").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn overrides_take_precedence() {
        let o = Overrides { command: Some(Command::VerifyQci), field: Some("Qq".into()), max_degree: Some(3), m: Some(2), n: Some(2) };
        let j = normalize(JobSpec::default(), &o).unwrap();
        assert_eq!(j.field.as_deref(), Some("Qq"));
        assert_eq!(j.options.max_degree, Some(3));
        assert!(normalize(JobSpec::default(), &Overrides { max_degree: Some(0), command: Some(Command::Validate), ..Default::default() }).is_err());
    }
}

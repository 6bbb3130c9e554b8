use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::examplesuite::{BlockDim, Check, QciReport, SkewReport};

use super::job::{Command, JobSpec};

pub const SCHEMA_VERSION: u32 = 1;

/// One value of a cochain: `f(arguments) = value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainEntry {
    pub arguments: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HhBlock {
    pub degree: usize,
    pub internal: Vec<i64>,
    pub dim: usize,
    /// Cocycles whose classes form a basis of the block.
    pub representatives: Vec<Vec<CochainEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HhReport {
    pub algebra: String,
    pub coefficients: String,
    pub dims: Vec<usize>,
    pub blocks: Vec<HhBlock>,
}

/// `dim HH^i(R, R_b̂)^a · dim HH^{n-i}(S, _âS)^b` for one `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorTerm {
    pub i: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeBlock {
    pub degree: usize,
    /// Coordinates of `a` followed by those of `b`.
    pub internal: Vec<i64>,
    pub decomposition: usize,
    pub product: usize,
    pub factors: Vec<FactorTerm>,
    /// Whether the tensor side maps isomorphically onto the block.
    pub phi_isomorphism: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub dims_decomposition: Vec<usize>,
    pub dims_product: Vec<usize>,
    pub decomposition_table: Vec<BlockDim>,
    pub product_table: Vec<BlockDim>,
    pub blocks: Vec<DecomposeBlock>,
}

/// A basis class `H^n[a;b]#k` of a decomposition block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassLabel {
    pub label: String,
    pub degree: usize,
    pub internal: Vec<i64>,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineValue {
    pub pipeline: String,
    pub coordinates: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub degree: usize,
    pub internal: Vec<i64>,
    pub values: Vec<PipelineValue>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductTableReport {
    pub classes: Vec<ClassLabel>,
    pub entries: Vec<ProductEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSummary {
    pub name: String,
    pub dim: usize,
    pub group: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub algebras: Vec<AlgebraSummary>,
    pub bicharacter: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    Hh(HhReport),
    Decompose(DecomposeReport),
    CupTable(ProductTableReport),
    BracketTable(ProductTableReport),
    Qci(QciReport),
    Skew(SkewReport),
    Validate(ValidateReport),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    #[serde(rename = "schemaVersion")]
    pub schema_version: u32,
    pub command: Command,
    pub field: String,
    pub max_degree: usize,
    pub passed: bool,
    /// Names of failed checks.
    pub failures: Vec<String>,
    /// The job that produced this report; feeding the report back as a job reruns it.
    pub job: JobSpec,
    pub result: Body,
}

impl Report {
    /// Dimension table of the result, for round-trip comparisons.
    pub fn dims(&self) -> Vec<usize> {
        match &self.result {
            Body::Hh(r) => r.dims.clone(),
            Body::Decompose(r) => r.dims_product.clone(),
            Body::Qci(r) => r.dims.clone(),
            Body::Skew(r) => r.direct.clone(),
            Body::CupTable(_) | Body::BracketTable(_) | Body::Validate(_) => Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = if self.passed { "passed" } else { "FAILED" };
        let _ = writeln!(out, "{} over {} up to degree {}: {status}", self.command.name(), self.field, self.max_degree);
        for f in &self.failures {
            let _ = writeln!(out, "  failed: {f}");
        }
        match &self.result {
            Body::Hh(r) => {
                let _ = writeln!(out, "HH^*({}, {})", r.algebra, r.coefficients);
                dims_line(&mut out, "dims", &r.dims);
                table(&mut out, &["degree", "internal", "dim"], r.blocks.iter().map(|b| vec![b.degree.to_string(), fmt_coords(&b.internal), b.dim.to_string()]));
            }
            Body::Decompose(r) => {
                dims_line(&mut out, "decomposition", &r.dims_decomposition);
                dims_line(&mut out, "product", &r.dims_product);
                table(
                    &mut out,
                    &["degree", "internal", "decomposition", "product", "phi iso", "factors"],
                    r.blocks.iter().map(|b| {
                        let factors: Vec<String> = b.factors.iter().map(|f| format!("i={}:{}x{}", f.i, f.left, f.right)).collect();
                        vec![
                            b.degree.to_string(),
                            fmt_coords(&b.internal),
                            b.decomposition.to_string(),
                            b.product.to_string(),
                            b.phi_isomorphism.to_string(),
                            factors.join(" "),
                        ]
                    }),
                );
            }
            Body::CupTable(r) | Body::BracketTable(r) => {
                let _ = writeln!(out, "{} basis classes", r.classes.len());
                table(
                    &mut out,
                    &["left", "right", "degree", "internal", "value", "pipelines agree"],
                    r.entries.iter().map(|e| {
                        let v = e.values.first().map(|v| format!("[{}]", v.coordinates.join(", "))).unwrap_or_default();
                        vec![e.left.clone(), e.right.clone(), e.degree.to_string(), fmt_coords(&e.internal), v, e.agree.to_string()]
                    }),
                );
            }
            Body::Qci(r) => {
                let _ = writeln!(out, "exponents {:?}, q = {:?}", r.exponents, r.q_values);
                dims_line(&mut out, "dims", &r.dims);
                table(
                    &mut out,
                    &["product", "pipeline", "degree", "value"],
                    r.cup_table.iter().map(|e| vec![format!("{}⌣{}", e.left, e.right), e.pipeline.clone(), e.degree.to_string(), e.expression.clone()]),
                );
                table(
                    &mut out,
                    &["bracket", "pipeline", "degree", "value"],
                    r.bracket_table.iter().map(|e| vec![format!("[{}, {}]", e.left, e.right), e.pipeline.clone(), e.degree.to_string(), e.expression.clone()]),
                );
                checks(&mut out, &r.checks);
            }
            Body::Skew(r) => {
                let _ = writeln!(out, "group {}", r.group);
                dims_line(&mut out, "skew group algebra", &r.direct);
                dims_line(&mut out, "decomposition", &r.decomposition);
                dims_line(&mut out, "invariant sum", &r.invariant_sum);
                checks(&mut out, &r.checks);
            }
            Body::Validate(r) => {
                table(&mut out, &["algebra", "dim", "grading"], r.algebras.iter().map(|a| vec![a.name.clone(), a.dim.to_string(), a.group.clone()]));
                if let Some(b) = &r.bicharacter {
                    let _ = writeln!(out, "bicharacter {b}");
                }
            }
        }
        out
    }
}

fn fmt_coords(c: &[i64]) -> String {
    let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn dims_line(out: &mut String, label: &str, dims: &[usize]) {
    let parts: Vec<String> = dims.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "{label}: {}", parts.join(" "));
}

fn checks(out: &mut String, checks: &[Check]) {
    table(out, &["check", "result"], checks.iter().map(|c| vec![c.name.clone(), if c.passed { "ok".into() } else { format!("FAIL ({})", c.detail) }]));
}

/// Left-aligned columns padded to the widest cell.
fn table(out: &mut String, header: &[&str], rows: impl Iterator<Item = Vec<String>>) {
    let rows: Vec<Vec<String>> = std::iter::once(header.iter().map(|h| h.to_string()).collect()).chain(rows).collect();
    let mut widths = vec![0; header.len()];
    for r in &rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    for r in rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        let _ = writeln!(out, "  {}", cells.join("  ").trim_end());
    }
}

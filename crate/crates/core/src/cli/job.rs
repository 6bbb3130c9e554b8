use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{group_algebra, skew_group_algebra, AlgebraAutomorphism, FiniteGroupAction, GradedAlgebra};
use crate::examplesuite::{qci, QciSpec};
use crate::grading::{Bicharacter, GradingGroup};
use crate::kernel::{Field, Matrix, Scalar, SparseVec};

use super::CliError;

pub const DEFAULT_MAX_DEGREE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    ComputeHh,
    Decompose,
    CupTable,
    BracketTable,
    VerifyQci,
    VerifyQciIterated,
    VerifySkew,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ComputeHh => "compute-hh",
            Command::Decompose => "decompose",
            Command::CupTable => "cup-table",
            Command::BracketTable => "bracket-table",
            Command::VerifyQci => "verify-qci",
            Command::VerifyQciIterated => "verify-qci-iterated",
            Command::VerifySkew => "verify-skew",
            Command::Validate => "validate",
        }
    }
}

/// `Z^free ⊕ Z/torsion[0] ⊕ ...`
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDef {
    #[serde(default)]
    pub free: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

/// One entry `u_left · u_right = Σ c_k u_k`; missing products are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDef {
    pub left: usize,
    pub right: usize,
    pub value: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "constructor", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraDef {
    /// `k[x]/(x^m)`, graded by `Z` with `deg x = 1`.
    TruncatedPolynomial {
        m: usize,
        #[serde(default)]
        var: Option<String>,
    },
    GroupAlgebra {
        group: String,
    },
    /// Quantum complete intersection; `q` lists `q_ij` for `i < j` lexicographically.
    Qci {
        exponents: Vec<usize>,
        q: Vec<String>,
    },
    /// `algebra ⋊ group`; one matrix per cyclic generator, column `j` the image of `u_j`.
    Skew {
        algebra: String,
        group: String,
        generators: Vec<Vec<Vec<String>>>,
    },
    Inline {
        group: String,
        names: Vec<String>,
        degrees: Vec<Vec<i64>>,
        unit: Vec<(usize, String)>,
        products: Vec<ProductDef>,
    },
}

/// `t(g_i, h_j)` on generator pairs of the gradings of `left` and `right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicharacterDef {
    pub left: String,
    pub right: String,
    pub values: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    /// Algebra to work on; defaults to the twisted product of the bicharacter's factors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    /// Coefficients `R_{b̂}` (or `_{â}S`) for `compute-hh` on a bicharacter factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<String>>,
}

/// A job file: `field`, `groups`, `algebras`, `bicharacter`, `command`, `options`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub groups: BTreeMap<String, GroupDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bicharacter: Option<BicharacterDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default)]
    pub options: Options,
}

impl JobSpec {
    /// A job file, or the `job` embedded in a JSON report.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let job = match value.get("schemaVersion") {
            Some(_) => value.get("job").cloned().ok_or_else(|| CliError::Parse("report has no job".into()))?,
            None => value,
        };
        serde_json::from_value(job).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn field(&self) -> Result<Field, CliError> {
        self.field.as_deref().unwrap_or("Q").parse().map_err(|e| CliError::Parse(format!("field: {e}")))
    }

    pub fn max_degree(&self) -> Result<usize, CliError> {
        match self.options.max_degree.unwrap_or(DEFAULT_MAX_DEGREE) {
            0 => Err(CliError::Validation("max degree must be at least 1".into())),
            d => Ok(d),
        }
    }
}

pub(crate) fn scalar(field: Field, s: &str) -> Result<Scalar, CliError> {
    field.parse_scalar(s).map_err(|e| CliError::Parse(format!("scalar '{s}': {e}")))
}

fn sparse(field: Field, terms: &[(usize, String)]) -> Result<SparseVec, CliError> {
    let mut v: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (k, c) in terms {
        let c = scalar(field, c)?;
        let e = v.entry(*k).or_insert_with(|| field.zero());
        *e = &*e + &c;
    }
    Ok(v.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

/// Resolved objects of a job.
pub struct Workspace {
    pub field: Field,
    pub groups: BTreeMap<String, GradingGroup>,
    pub algebras: BTreeMap<String, Arc<GradedAlgebra>>,
    pub actions: BTreeMap<String, FiniteGroupAction>,
}

impl Workspace {
    /// Builds every group and algebra; algebra axioms are checked here.
    pub fn build(job: &JobSpec) -> Result<Self, CliError> {
        let field = job.field()?;
        let mut ws = Workspace { field, groups: BTreeMap::new(), algebras: BTreeMap::new(), actions: BTreeMap::new() };
        for (name, g) in &job.groups {
            let group = GradingGroup::new(g.free, &g.torsion).map_err(|e| CliError::Validation(format!("group {name}: {e}")))?;
            ws.groups.insert(name.clone(), group);
        }
        // skew algebras refer to other algebras, so resolve in dependency order
        let mut pending: Vec<&String> = job.algebras.keys().collect();
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for name in pending {
                let def = &job.algebras[name];
                if let AlgebraDef::Skew { algebra, .. } = def {
                    if !ws.algebras.contains_key(algebra) {
                        if !job.algebras.contains_key(algebra) {
                            return Err(CliError::Validation(format!("algebra {name} refers to unknown algebra {algebra}")));
                        }
                        rest.push(name);
                        continue;
                    }
                }
                ws.add_algebra(name, def)?;
            }
            if rest.len() == before {
                return Err(CliError::Validation("skew algebras refer to each other in a cycle".into()));
            }
            pending = rest;
        }
        Ok(ws)
    }

    fn group(&self, name: &str) -> Result<&GradingGroup, CliError> {
        self.groups.get(name).ok_or_else(|| CliError::Validation(format!("unknown group {name}")))
    }

    pub fn algebra(&self, name: &str) -> Result<&Arc<GradedAlgebra>, CliError> {
        self.algebras.get(name).ok_or_else(|| CliError::Validation(format!("unknown algebra {name}")))
    }

    fn add_algebra(&mut self, name: &str, def: &AlgebraDef) -> Result<(), CliError> {
        let field = self.field;
        let invalid = |e: &dyn std::fmt::Display| CliError::Validation(format!("algebra {name}: {e}"));
        let alg = match def {
            AlgebraDef::TruncatedPolynomial { m, var } => {
                if *m < 1 {
                    return Err(invalid(&"exponent must be at least 1"));
                }
                GradedAlgebra::truncated_polynomial(*m, field, var.as_deref().unwrap_or("x")).map_err(|e| invalid(&e))?
            }
            AlgebraDef::GroupAlgebra { group } => group_algebra(self.group(group)?, field).map_err(|e| invalid(&e))?,
            AlgebraDef::Qci { exponents, q } => {
                let q = q.iter().map(|s| scalar(field, s)).collect::<Result<Vec<_>, _>>()?;
                let spec = QciSpec::new(exponents.clone(), field, q).map_err(|e| invalid(&e))?;
                qci(&spec).map_err(|e| invalid(&e))?
            }
            AlgebraDef::Skew { algebra, group, generators } => {
                let base = self.algebra(algebra)?.clone();
                let group = self.group(group)?.clone();
                let mut autos = Vec::new();
                for rows in generators {
                    let rows = rows
                        .iter()
                        .map(|r| r.iter().map(|s| scalar(field, s)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    let matrix = Matrix::from_rows(field, rows).map_err(|e| invalid(&e))?;
                    autos.push(AlgebraAutomorphism::new(base.clone(), &matrix).map_err(|e| invalid(&e))?);
                }
                let action = FiniteGroupAction::new(group, base, autos).map_err(|e| invalid(&e))?;
                let alg = skew_group_algebra(&action).map_err(|e| invalid(&e))?;
                self.actions.insert(name.to_string(), action);
                alg
            }
            AlgebraDef::Inline { group, names, degrees, unit, products } => {
                let g = self.group(group)?.clone();
                let degrees = degrees.iter().map(|d| g.element(d)).collect::<Result<Vec<_>, _>>().map_err(|e| invalid(&e))?;
                let dim = degrees.len();
                let mut mult = vec![SparseVec::new(); dim * dim];
                for p in products {
                    if p.left >= dim || p.right >= dim {
                        return Err(invalid(&format!("product ({}, {}) out of range", p.left, p.right)));
                    }
                    mult[p.left * dim + p.right] = sparse(field, &p.value)?;
                }
                GradedAlgebra::new(field, g, names.clone(), degrees, sparse(field, unit)?, mult).map_err(|e| invalid(&e))?
            }
        };
        self.algebras.insert(name.to_string(), Arc::new(alg));
        Ok(())
    }

    /// The job's bicharacter with its two factor algebras.
    pub fn bicharacter(&self, job: &JobSpec) -> Result<(Arc<GradedAlgebra>, Arc<GradedAlgebra>, Bicharacter), CliError> {
        let def = job.bicharacter.as_ref().ok_or_else(|| CliError::Validation("this command needs a bicharacter".into()))?;
        let (r, s) = (self.algebra(&def.left)?.clone(), self.algebra(&def.right)?.clone());
        let values = def
            .values
            .iter()
            .map(|row| row.iter().map(|v| scalar(self.field, v)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let t = Bicharacter::new(r.group().clone(), s.group().clone(), self.field, values)
            .map_err(|e| CliError::Validation(format!("bicharacter: {e}")))?;
        t.validate().map_err(|e| CliError::Validation(format!("bicharacter: {e}")))?;
        Ok((r, s, t))
    }
}

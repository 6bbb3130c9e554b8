use serde::{Deserialize, Serialize};

use crate::kernel::Scalar;

use super::product::BlockDim;
use super::ExampleError;

/// A named cohomology class and its coordinates in the computed basis of
/// its block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedClass {
    pub label: String,
    pub degree: usize,
    pub internal: Vec<i64>,
    pub coordinates: Vec<String>,
}

/// One product of two named classes, as computed by one pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub left: String,
    pub right: String,
    pub pipeline: String,
    pub degree: usize,
    pub internal: Vec<i64>,
    pub coordinates: Vec<String>,
    /// The result in terms of the named classes, e.g. `2·U` or `0`.
    pub expression: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QciReport {
    pub exponents: Vec<usize>,
    pub field: String,
    pub q_values: Vec<String>,
    pub truncation: usize,
    pub dims: Vec<usize>,
    pub blocks: Vec<BlockDim>,
    pub classes: Vec<NamedClass>,
    pub cup_table: Vec<TableEntry>,
    pub bracket_table: Vec<TableEntry>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl QciReport {
    /// The report itself, or the first failed check.
    pub fn ensure(self) -> Result<Self, ExampleError> {
        match self.checks.iter().find(|c| !c.passed) {
            Some(c) => Err(ExampleError::VerificationFailed(format!("{}: {}", c.name, c.detail))),
            None => Ok(self),
        }
    }

    /// The report without coordinates, which depend on the chosen cochain
    /// bases. Check details quote coordinates too, so only names and
    /// outcomes of checks are kept.
    pub fn canonical(&self) -> QciReport {
        let mut out = self.clone();
        for c in &mut out.checks {
            c.detail.clear();
        }
        for c in &mut out.classes {
            c.coordinates.clear();
        }
        for e in out.cup_table.iter_mut().chain(out.bracket_table.iter_mut()) {
            e.coordinates.clear();
        }
        out
    }
}

pub(crate) fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Collects checks, keeping the order in which they were made.
#[derive(Default)]
pub(crate) struct Checks(pub Vec<Check>);

impl Checks {
    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: impl Into<String>, got: T, expected: T) {
        let passed = got == expected;
        self.push(name, passed, format!("got {got:?}, expected {expected:?}"));
    }

    pub fn all_passed(&self) -> bool {
        self.0.iter().all(|c| c.passed)
    }
}

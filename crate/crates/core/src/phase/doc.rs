use serde::{Deserialize, Serialize};

/// Whether the unit's row of the table must be the identity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    #[default]
    Strict,
    /// The unit is named but its products are taken from the table as given.
    Weak,
}

/// A table value: fixed, or a candidate set to be resolved by the solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryValue {
    Fixed(String),
    Candidates(Vec<String>),
}

/// `x·y + x'·y' = value`, with `+` the additive disjunction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkedConstraint {
    pub sum: Vec<(String, String)>,
    pub equals: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Checks {
    pub commutative: bool,
    pub associative: bool,
}

impl Default for Checks {
    fn default() -> Self {
        Self {
            commutative: true,
            associative: true,
        }
    }
}

/// JSON form of a monoid table on a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDoc {
    /// Path of the lattice document, relative to this file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    pub mult: Vec<(String, String, EntryValue)>,
    pub unit: String,
    pub falsum: String,
    #[serde(default)]
    pub unit_mode: UnitMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dual_overrides: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub linked_constraints: Vec<LinkedConstraint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub op_class: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cl_class: Vec<String>,
    #[serde(default)]
    pub checks: Checks,
}

//! Element-level phase semantics.
//!
//! A [`PhaseStructure`] is a finite lattice whose elements also carry a
//! commutative monoid table, a distinguished `falsum` element, and a dual
//! map `X ↦ X^⊥`. Duals default to the linear implication `X ⊸ falsum`;
//! individual duals may be overridden, and overrides are validated like
//! everything else.
//!
//! The literal subset-level model lives in [`oracle`] and is only used to
//! cross-check the law set.

mod doc;
pub mod expr;
mod laws;
pub mod oracle;
pub mod solver;

use std::path::Path;
use std::sync::Arc;

use thiserror::Error;
use tracing::warn;

use crate::lattice::{Element, Lattice, LatticeError};

pub use doc::{Checks, EntryValue, LinkedConstraint, TableDoc, UnitMode};
pub use laws::{classify, verify_laws, FactClassification, Law, LawCheck, LawReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhaseError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("table has no entry for `{0}`·`{1}`")]
    IncompleteTable(String, String),
    #[error("entry `{0}`·`{1}` is ambiguous; resolve it with the solver first")]
    AmbiguousEntry(String, String),
    #[error("entry `{0}`·`{1}` is given twice with different values")]
    ConflictingEntry(String, String),
    #[error("not commutative: `{0}`·`{1}` ≠ `{1}`·`{0}`")]
    NotCommutative(String, String),
    #[error("not associative: (`{0}`·`{1}`)·`{2}` ≠ `{0}`·(`{1}`·`{2}`)")]
    NotAssociative(String, String, String),
    #[error("strict unit `{unit}` fails: `{unit}`·`{x}` = `{got}`")]
    NotUnit { unit: String, x: String, got: String },
    #[error("`{0}` ⊸ `{1}` is not closed: the join of its candidates is not a candidate")]
    NotClosed(String, String),
    #[error("law {law} violated at {witness}")]
    DualLawViolation { law: Law, witness: String },
    #[error("dual override breaks {law} at {witness}")]
    OverrideInconsistent { law: Law, witness: String },
    #[error("class {class} is not closed under {op}: {witness}")]
    NotClosedClass {
        class: &'static str,
        op: &'static str,
        witness: String,
    },
    #[error("table document does not name a lattice file")]
    MissingLattice,
    #[error("no completion of the table satisfies the laws")]
    NoSolution,
}

pub type Result<T> = std::result::Result<T, PhaseError>;

/// How `×` is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TensorMode {
    /// The raw monoid product. Used for goal priorities.
    #[default]
    Raw,
    /// `(X·Y)^⊥⊥`.
    FactClosed,
}

#[derive(Clone, Debug)]
pub struct PhaseStructure {
    lattice: Arc<Lattice>,
    mult: Vec<u32>,
    unit: usize,
    falsum: usize,
    dual: Vec<u32>,
    overridden: Vec<bool>,
    unit_mode: UnitMode,
    checks: Checks,
}

impl PartialEq for PhaseStructure {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
            && self.mult == other.mult
            && self.unit == other.unit
            && self.falsum == other.falsum
            && self.dual == other.dual
    }
}

/// Checks the table document against `lattice` and builds the structure.
pub fn load_phase(lattice: Arc<Lattice>, doc: &TableDoc) -> Result<PhaseStructure> {
    let n = lattice.len();
    let idx = |name: &str| {
        lattice
            .index_of(name)
            .ok_or_else(|| PhaseError::Lattice(LatticeError::UnknownElement(name.to_string())))
    };
    let mut mult: Vec<Option<u32>> = vec![None; n * n];
    for (x, y, value) in &doc.mult {
        let (xi, yi) = (idx(x)?, idx(y)?);
        let v = match value {
            EntryValue::Fixed(v) => idx(v)?,
            EntryValue::Candidates(c) if c.len() == 1 => idx(&c[0])?,
            EntryValue::Candidates(_) => {
                return Err(PhaseError::AmbiguousEntry(x.clone(), y.clone()))
            }
        } as u32;
        match mult[xi * n + yi] {
            Some(old) if old != v => return Err(PhaseError::ConflictingEntry(x.clone(), y.clone())),
            _ => mult[xi * n + yi] = Some(v),
        }
    }
    // each unordered pair may be listed once; mirror it
    for x in 0..n {
        for y in 0..n {
            match (mult[x * n + y], mult[y * n + x]) {
                (Some(a), Some(b)) if a != b => {
                    return Err(PhaseError::NotCommutative(
                        lattice.names()[x].clone(),
                        lattice.names()[y].clone(),
                    ))
                }
                (Some(a), None) => mult[y * n + x] = Some(a),
                _ => {}
            }
        }
    }
    let mut table = Vec::with_capacity(n * n);
    for (i, v) in mult.iter().enumerate() {
        match v {
            Some(v) => table.push(*v),
            None => {
                return Err(PhaseError::IncompleteTable(
                    lattice.names()[i / n].clone(),
                    lattice.names()[i % n].clone(),
                ))
            }
        }
    }
    let mut overrides = vec![None; n];
    for (x, d) in &doc.dual_overrides {
        overrides[idx(x)?] = Some(idx(d)?);
    }
    let unit = idx(&doc.unit)?;
    let falsum = idx(&doc.falsum)?;
    PhaseStructure::build(lattice, table, unit, falsum, &overrides, doc.unit_mode, doc.checks)
}

/// Reads a table document and the lattice file it references.
pub fn load_phase_file(path: &Path) -> std::result::Result<PhaseStructure, crate::Error> {
    let doc: TableDoc = serde_json::from_str(&crate::error::read_file(path)?)?;
    let lattice = lattice_for_table(path, &doc, None)?;
    Ok(load_phase(lattice, &doc)?)
}

/// Resolves the lattice for a table document: an explicit path wins over the
/// document's own reference, which is relative to the table file.
pub fn lattice_for_table(
    table_path: &Path,
    doc: &TableDoc,
    explicit: Option<&Path>,
) -> std::result::Result<Arc<Lattice>, crate::Error> {
    let path = match (explicit, &doc.lattice) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(rel)) => table_path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join(rel),
        (None, None) => return Err(PhaseError::MissingLattice.into()),
    };
    Ok(Arc::new(Lattice::from_json(&crate::error::read_file(&path)?)?))
}

impl PhaseStructure {
    pub(crate) fn build(
        lattice: Arc<Lattice>,
        mult: Vec<u32>,
        unit: usize,
        falsum: usize,
        overrides: &[Option<usize>],
        unit_mode: UnitMode,
        checks: Checks,
    ) -> Result<Self> {
        let n = lattice.len();
        let names = lattice.names().to_vec();
        let name = |i: usize| names[i].clone();
        if checks.commutative {
            for x in 0..n {
                for y in (x + 1)..n {
                    if mult[x * n + y] != mult[y * n + x] {
                        return Err(PhaseError::NotCommutative(name(x), name(y)));
                    }
                }
            }
        }
        if checks.associative {
            if let Some((x, y, z)) = first_non_associative(&mult, n) {
                return Err(PhaseError::NotAssociative(name(x), name(y), name(z)));
            }
        }
        if unit_mode == UnitMode::Strict {
            for x in 0..n {
                let got = mult[unit * n + x] as usize;
                if got != x {
                    return Err(PhaseError::NotUnit {
                        unit: name(unit),
                        x: name(x),
                        got: name(got),
                    });
                }
            }
        }
        let mut ps = PhaseStructure {
            lattice,
            mult,
            unit,
            falsum,
            dual: vec![0; n],
            overridden: overrides.iter().map(Option::is_some).collect(),
            unit_mode,
            checks,
        };
        for (x, o) in overrides.iter().enumerate() {
            ps.dual[x] = match *o {
                Some(d) => d as u32,
                None => ps
                    .lin_implies_idx(x, falsum)
                    .ok_or_else(|| PhaseError::NotClosed(name(x), name(falsum)))?
                    as u32,
            };
        }
        ps.check_dual_laws()?;
        Ok(ps)
    }

    fn check_dual_laws(&self) -> Result<()> {
        let n = self.len();
        let l = &self.lattice;
        let name = |i: usize| l.names()[i].clone();
        let fail = |law: Law, witness: String, involved: &[usize]| {
            if involved.iter().any(|&i| self.overridden[i]) {
                PhaseError::OverrideInconsistent { law, witness }
            } else {
                PhaseError::DualLawViolation { law, witness }
            }
        };
        for x in 0..n {
            let d = self.dual_idx(x);
            let dd = self.dual_idx(d);
            if self.dual_idx(dd) != d {
                return Err(fail(Law::TripleDual, name(x), &[x, d, dd]));
            }
            if !l.leq_idx(x, dd) {
                return Err(fail(Law::Extensive, name(x), &[x, d]));
            }
            if !l.leq_idx(self.mul_idx(d, x), self.falsum) {
                return Err(fail(Law::DualAnnihilates, name(x), &[x]));
            }
        }
        for x in 0..n {
            for y in x..n {
                let lhs = self.dual_idx(l.join_idx(x, y));
                let rhs = l.meet_idx(self.dual_idx(x), self.dual_idx(y));
                if lhs != rhs {
                    return Err(fail(
                        Law::DeMorgan,
                        format!("({}, {})", name(x), name(y)),
                        &[x, y, l.join_idx(x, y)],
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn unit(&self) -> Element {
        self.lattice.at(self.unit)
    }

    pub fn falsum(&self) -> Element {
        self.lattice.at(self.falsum)
    }

    pub fn unit_mode(&self) -> UnitMode {
        self.unit_mode
    }

    pub fn checks(&self) -> Checks {
        self.checks
    }

    pub fn element(&self, name: &str) -> Result<Element> {
        Ok(self.lattice.element(name)?)
    }

    pub fn name(&self, x: Element) -> &str {
        self.lattice.name(x)
    }

    pub fn is_overridden(&self, x: Element) -> bool {
        self.overridden[x.index()]
    }

    /// The monoid product `X·Y`.
    pub fn mult(&self, x: Element, y: Element) -> Result<Element> {
        self.lattice.check(x)?;
        self.lattice.check(y)?;
        Ok(self.lattice.at(self.mul_idx(x.index(), y.index())))
    }

    /// `X ⊸ Y`: the join of every `Z` with `X·Z ≤ Y`, provided that join is
    /// itself such a `Z`.
    pub fn lin_implies(&self, x: Element, y: Element) -> Result<Element> {
        self.lattice.check(x)?;
        self.lattice.check(y)?;
        self.lin_implies_idx(x.index(), y.index())
            .map(|i| self.lattice.at(i))
            .ok_or_else(|| PhaseError::NotClosed(self.name(x).into(), self.name(y).into()))
    }

    pub fn dual(&self, x: Element) -> Result<Element> {
        self.lattice.check(x)?;
        Ok(self.lattice.at(self.dual_idx(x.index())))
    }

    pub fn is_fact(&self, x: Element) -> Result<bool> {
        self.lattice.check(x)?;
        let i = x.index();
        Ok(self.dual_idx(self.dual_idx(i)) == i)
    }

    /// Every element equal to its double dual, in lattice order of indices.
    pub fn facts(&self) -> Vec<Element> {
        (0..self.len())
            .filter(|&i| self.dual_idx(self.dual_idx(i)) == i)
            .map(|i| self.lattice.at(i))
            .collect()
    }

    /// `I = ⊥^⊥`.
    pub fn neutral_i(&self) -> Element {
        self.lattice.at(self.dual_idx(self.falsum))
    }

    /// `X & Y = X ∧ Y`.
    pub fn additive_conj(&self, x: Element, y: Element) -> Result<Element> {
        self.warn_non_facts("&", &[x, y])?;
        Ok(self.lattice.meet2(x, y)?)
    }

    /// `X + Y = (X ∨ Y)^⊥⊥`.
    pub fn additive_disj(&self, x: Element, y: Element) -> Result<Element> {
        self.warn_non_facts("+", &[x, y])?;
        let j = self.lattice.join2(x, y)?.index();
        Ok(self.lattice.at(self.dual_idx(self.dual_idx(j))))
    }

    pub fn tensor(&self, x: Element, y: Element, mode: TensorMode) -> Result<Element> {
        let p = self.mult(x, y)?.index();
        Ok(self.lattice.at(match mode {
            TensorMode::Raw => p,
            TensorMode::FactClosed => {
                self.warn_non_facts("×", &[x, y])?;
                self.dual_idx(self.dual_idx(p))
            }
        }))
    }

    /// `X ⅋ Y = (X^⊥·Y^⊥)^⊥`.
    pub fn par(&self, x: Element, y: Element) -> Result<Element> {
        self.warn_non_facts("⅋", &[x, y])?;
        let p = self.mul_idx(self.dual(x)?.index(), self.dual(y)?.index());
        Ok(self.lattice.at(self.dual_idx(p)))
    }

    fn warn_non_facts(&self, op: &str, xs: &[Element]) -> Result<()> {
        for &x in xs {
            if !self.is_fact(x)? {
                warn!(element = self.name(x), op, "connective applied to a non-fact");
            }
        }
        Ok(())
    }

    /// Writes the resolved structure back out as a table document.
    pub fn to_doc(&self, lattice_ref: Option<String>) -> TableDoc {
        let n = self.len();
        let names = self.lattice.names();
        let mut mult = Vec::with_capacity(n * (n + 1) / 2);
        for x in 0..n {
            for y in x..n {
                mult.push((
                    names[x].clone(),
                    names[y].clone(),
                    EntryValue::Fixed(names[self.mul_idx(x, y)].clone()),
                ));
            }
        }
        TableDoc {
            lattice: lattice_ref,
            mult,
            unit: names[self.unit].clone(),
            falsum: names[self.falsum].clone(),
            unit_mode: self.unit_mode,
            dual_overrides: (0..n)
                .filter(|&x| self.overridden[x])
                .map(|x| (names[x].clone(), names[self.dual_idx(x)].clone()))
                .collect(),
            linked_constraints: Vec::new(),
            op_class: Vec::new(),
            cl_class: Vec::new(),
            checks: self.checks,
        }
    }

    pub(crate) fn mul_idx(&self, x: usize, y: usize) -> usize {
        self.mult[x * self.len() + y] as usize
    }

    pub(crate) fn dual_idx(&self, x: usize) -> usize {
        self.dual[x] as usize
    }

    pub(crate) fn falsum_idx(&self) -> usize {
        self.falsum
    }

    pub(crate) fn lin_implies_idx(&self, x: usize, y: usize) -> Option<usize> {
        let l = &self.lattice;
        let z = (0..self.len())
            .filter(|&z| l.leq_idx(self.mul_idx(x, z), y))
            .fold(l.bottom_idx(), |acc, z| l.join_idx(acc, z));
        l.leq_idx(self.mul_idx(x, z), y).then_some(z)
    }
}

pub(crate) fn first_non_associative(mult: &[u32], n: usize) -> Option<(usize, usize, usize)> {
    for x in 0..n {
        for y in 0..n {
            let xy = mult[x * n + y] as usize;
            for z in 0..n {
                let yz = mult[y * n + z] as usize;
                if mult[xy * n + z] != mult[x * n + yz] {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Two-element chain with `·` = meet, unit 1, falsum 0.
    pub fn boolean() -> PhaseStructure {
        let l = Arc::new(Lattice::chain(&["0", "1"]).unwrap());
        let doc: TableDoc = serde_json::from_value(serde_json::json!({
            "mult": [["0","0","0"], ["0","1","0"], ["1","1","1"]],
            "unit": "1",
            "falsum": "0"
        }))
        .unwrap();
        load_phase(l, &doc).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::boolean;
    use super::*;
    use serde_json::json;

    #[test]
    fn boolean_structure_loads() {
        let ps = boolean();
        let (zero, one) = (ps.element("0").unwrap(), ps.element("1").unwrap());
        assert_eq!(ps.dual(zero).unwrap(), one);
        assert_eq!(ps.dual(one).unwrap(), zero);
        assert_eq!(ps.neutral_i(), one);
        assert_eq!(ps.facts().len(), 2);
        assert_eq!(ps.lin_implies(one, zero).unwrap(), zero);
        assert_eq!(ps.par(zero, one).unwrap(), one);
        assert_eq!(ps.tensor(one, one, TensorMode::FactClosed).unwrap(), one);
    }

    #[test]
    fn non_commutative_table_is_rejected() {
        let l = Arc::new(Lattice::chain(&["0", "1"]).unwrap());
        let doc: TableDoc = serde_json::from_value(json!({
            "mult": [["0","0","0"], ["0","1","0"], ["1","0","1"], ["1","1","1"]],
            "unit": "1", "falsum": "0"
        }))
        .unwrap();
        assert!(matches!(load_phase(l, &doc), Err(PhaseError::NotCommutative(..))));
    }

    #[test]
    fn missing_entries_are_reported() {
        let l = Arc::new(Lattice::chain(&["0", "1"]).unwrap());
        let doc: TableDoc = serde_json::from_value(json!({
            "mult": [["0","0","0"], ["1","1","1"]],
            "unit": "1", "falsum": "0"
        }))
        .unwrap();
        assert!(matches!(load_phase(l, &doc), Err(PhaseError::IncompleteTable(..))));
    }

    #[test]
    fn ambiguous_entries_need_the_solver() {
        let l = Arc::new(Lattice::chain(&["0", "1"]).unwrap());
        let doc: TableDoc = serde_json::from_value(json!({
            "mult": [["0","0","0"], ["0","1","0"], ["1","1",["0","1"]]],
            "unit": "1", "falsum": "0"
        }))
        .unwrap();
        assert!(matches!(load_phase(l, &doc), Err(PhaseError::AmbiguousEntry(..))));
    }

    #[test]
    fn strict_unit_is_enforced() {
        let l = Arc::new(Lattice::chain(&["0", "1"]).unwrap());
        let doc: TableDoc = serde_json::from_value(json!({
            "mult": [["0","0","0"], ["0","1","0"], ["1","1","0"]],
            "unit": "1", "falsum": "0"
        }))
        .unwrap();
        assert!(matches!(load_phase(l, &doc), Err(PhaseError::NotUnit { .. })));
    }

    #[test]
    fn bad_override_is_named() {
        let l = Arc::new(Lattice::chain(&["0", "1"]).unwrap());
        let doc: TableDoc = serde_json::from_value(json!({
            "mult": [["0","0","0"], ["0","1","0"], ["1","1","1"]],
            "unit": "1", "falsum": "0",
            "dual_overrides": [["1", "1"]]
        }))
        .unwrap();
        assert!(matches!(
            load_phase(l, &doc),
            Err(PhaseError::OverrideInconsistent { .. })
        ));
    }

    #[test]
    fn lin_implies_on_a_chain_is_residuation() {
        // three-chain with meet as product and unit top
        let l = Arc::new(Lattice::chain(&["0", "h", "1"]).unwrap());
        let doc: TableDoc = serde_json::from_value(json!({
            "mult": [["0","0","0"],["0","h","0"],["0","1","0"],["h","h","h"],["h","1","h"],["1","1","1"]],
            "unit": "1", "falsum": "0"
        }))
        .unwrap();
        let ps = load_phase(l.clone(), &doc).unwrap();
        let top = l.top();
        for y in l.elements() {
            assert_eq!(ps.lin_implies(top, y).unwrap(), y);
        }
    }

    #[test]
    fn doc_round_trip_preserves_structure() {
        let ps = boolean();
        let again = load_phase(ps.lattice().clone(), &ps.to_doc(None)).unwrap();
        assert_eq!(ps, again);
    }
}

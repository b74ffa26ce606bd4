use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{first_non_associative, PhaseError, PhaseStructure, Result, UnitMode};
use crate::lattice::Element;

/// The laws checked by [`verify_laws`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Law {
    Commutative,
    Associative,
    StrictUnit,
    /// `X^⊥·X ≤ ⊥`
    DualAnnihilates,
    /// `X ≤ X^⊥⊥`
    Extensive,
    /// `X^⊥⊥⊥ = X^⊥`
    TripleDual,
    /// `(X·Y)^⊥ = X ⊸ Y^⊥` wherever the implication is closed
    ImplicationDual,
    /// `(X ∨ Y)^⊥ = X^⊥ ∧ Y^⊥`
    DeMorgan,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::Commutative => "X·Y = Y·X",
            Law::Associative => "(X·Y)·Z = X·(Y·Z)",
            Law::StrictUnit => "e·X = X",
            Law::DualAnnihilates => "X^⊥·X ≤ ⊥",
            Law::Extensive => "X ≤ X^⊥⊥",
            Law::TripleDual => "X^⊥⊥⊥ = X^⊥",
            Law::ImplicationDual => "(X·Y)^⊥ = X ⊸ Y^⊥",
            Law::DeMorgan => "(X∨Y)^⊥ = X^⊥∧Y^⊥",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawCheck {
    pub law: Law,
    pub checked: usize,
    /// Instances skipped because `X ⊸ Y^⊥` is not closed.
    pub skipped: usize,
    pub violations: usize,
    /// Up to five counterexamples.
    pub witnesses: Vec<String>,
}

impl LawCheck {
    fn new(law: Law) -> Self {
        Self {
            law,
            checked: 0,
            skipped: 0,
            violations: 0,
            witnesses: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.witnesses.len() < 5 {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(LawCheck::passed)
    }

    pub fn violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn get(&self, law: Law) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.law == law)
    }
}

/// Checks every law exhaustively over elements and pairs, collecting
/// counterexamples instead of stopping at the first.
pub fn verify_laws(ps: &PhaseStructure) -> LawReport {
    let n = ps.len();
    let l = ps.lattice();
    let name = |i: usize| l.names()[i].as_str();
    let mut checks = Vec::new();

    if ps.checks().commutative {
        let mut c = LawCheck::new(Law::Commutative);
        for x in 0..n {
            for y in (x + 1)..n {
                c.record(ps.mul_idx(x, y) == ps.mul_idx(y, x), || {
                    format!("({}, {})", name(x), name(y))
                });
            }
        }
        checks.push(c);
    }
    if ps.checks().associative {
        let mut c = LawCheck::new(Law::Associative);
        c.checked = n * n * n;
        if let Some((x, y, z)) = first_non_associative(&ps.mult, n) {
            c.violations = 1;
            c.witnesses
                .push(format!("({}, {}, {})", name(x), name(y), name(z)));
        }
        checks.push(c);
    }
    if ps.unit_mode() == UnitMode::Strict {
        let mut c = LawCheck::new(Law::StrictUnit);
        for x in 0..n {
            c.record(ps.mul_idx(ps.unit, x) == x, || name(x).to_string());
        }
        checks.push(c);
    }

    let mut annihilate = LawCheck::new(Law::DualAnnihilates);
    let mut extensive = LawCheck::new(Law::Extensive);
    let mut triple = LawCheck::new(Law::TripleDual);
    for x in 0..n {
        let d = ps.dual_idx(x);
        let dd = ps.dual_idx(d);
        annihilate.record(l.leq_idx(ps.mul_idx(d, x), ps.falsum_idx()), || {
            name(x).to_string()
        });
        extensive.record(l.leq_idx(x, dd), || name(x).to_string());
        triple.record(ps.dual_idx(dd) == d, || name(x).to_string());
    }

    let mut implication = LawCheck::new(Law::ImplicationDual);
    let mut de_morgan = LawCheck::new(Law::DeMorgan);
    for x in 0..n {
        for y in 0..n {
            match ps.lin_implies_idx(x, ps.dual_idx(y)) {
                Some(z) => implication.record(ps.dual_idx(ps.mul_idx(x, y)) == z, || {
                    format!("({}, {})", name(x), name(y))
                }),
                None => implication.skipped += 1,
            }
            if x <= y {
                let lhs = ps.dual_idx(l.join_idx(x, y));
                let rhs = l.meet_idx(ps.dual_idx(x), ps.dual_idx(y));
                de_morgan.record(lhs == rhs, || format!("({}, {})", name(x), name(y)));
            }
        }
    }
    checks.extend([annihilate, extensive, triple, implication, de_morgan]);
    LawReport { checks }
}

/// Facts split into the open class (closed under `+` and `×`) and its dual,
/// the closed class (closed under `&` and `⅋`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactClassification {
    pub facts: BTreeSet<Element>,
    pub open_class: BTreeSet<Element>,
    pub closed_class: BTreeSet<Element>,
    pub neutral_i: Element,
    pub one: Element,
    pub zero: Element,
}

/// Verifies a declared Op/Cl split.
///
/// The declaration may list only the open class, only the closed class, or
/// both; a missing side is filled in as the dual image of the other.
pub fn classify(ps: &PhaseStructure, op: &[Element], cl: &[Element]) -> Result<FactClassification> {
    let l = ps.lattice();
    let name = |x: Element| l.name(x).to_string();
    let not_closed = |class, op, witness| PhaseError::NotClosedClass { class, op, witness };
    let facts: BTreeSet<Element> = ps.facts().into_iter().collect();
    for &x in op.iter().chain(cl) {
        if !facts.contains(&x) {
            return Err(not_closed("Op/Cl", "membership", format!("`{}` is not a fact", name(x))));
        }
    }
    let dual_image = |xs: &[Element]| -> Result<BTreeSet<Element>> {
        xs.iter().map(|&x| ps.dual(x)).collect()
    };
    let (open_class, closed_class) = match (op.is_empty(), cl.is_empty()) {
        (false, true) => (op.iter().copied().collect(), dual_image(op)?),
        (true, false) => (dual_image(cl)?, cl.iter().copied().collect()),
        _ => {
            let o: BTreeSet<Element> = op.iter().copied().collect();
            let c: BTreeSet<Element> = cl.iter().copied().collect();
            if dual_image(op)? != c {
                return Err(not_closed("Cl", "duality", "Cl is not the dual image of Op".into()));
            }
            (o, c)
        }
    };

    let neutral_i = ps.neutral_i();
    let (zero, one, falsum) = (l.bottom(), l.top(), ps.falsum());
    let extremes = [
        ("Op", &open_class, neutral_i, zero),
        ("Cl", &closed_class, one, falsum),
    ];
    for (class, set, max, min) in extremes {
        if !set.contains(&max) || !set.contains(&min) {
            return Err(not_closed(
                class,
                "extremes",
                format!("must contain `{}` and `{}`", name(max), name(min)),
            ));
        }
        for &x in set.iter() {
            if !l.leq(min, x)? || !l.leq(x, max)? {
                return Err(not_closed(
                    class,
                    "extremes",
                    format!("`{}` lies outside [`{}`, `{}`]", name(x), name(min), name(max)),
                ));
            }
        }
    }

    type Op<'a> = (&'static str, Box<dyn Fn(Element, Element) -> Result<Element> + 'a>);
    let op_ops: [Op; 2] = [
        ("+", Box::new(|x, y| ps.additive_disj(x, y))),
        ("×", Box::new(|x, y| ps.tensor(x, y, super::TensorMode::FactClosed))),
    ];
    let cl_ops: [Op; 2] = [
        ("&", Box::new(|x, y| ps.additive_conj(x, y))),
        ("⅋", Box::new(|x, y| ps.par(x, y))),
    ];
    for (class, set, ops) in [("Op", &open_class, &op_ops), ("Cl", &closed_class, &cl_ops)] {
        for (op_name, f) in ops.iter() {
            for &x in set.iter() {
                for &y in set.iter() {
                    let r = f(x, y)?;
                    if !set.contains(&r) {
                        return Err(not_closed(
                            class,
                            op_name,
                            format!("`{}` {} `{}` = `{}`", name(x), op_name, name(y), name(r)),
                        ));
                    }
                }
            }
        }
    }
    Ok(FactClassification {
        facts,
        open_class,
        closed_class,
        neutral_i,
        one,
        zero,
    })
}

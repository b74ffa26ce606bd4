//! Subset-level phase semantics by brute force.
//!
//! Girard's model literally: facts are subsets of a commutative monoid,
//! `X^⊥ = {z | x·z ∈ ⊥ for all x ∈ X}`, and every connective is computed on
//! subsets. Only usable for tiny monoids (at most six elements, so 64
//! subsets), which is the point: it is an independent check of the law set
//! the element-level engine relies on.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_ORACLE_SIZE: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("monoid has {0} elements; the oracle handles at most {MAX_ORACLE_SIZE}")]
    SizeExceeded(usize),
    #[error("monoid has no elements")]
    Empty,
    #[error("unknown monoid element `{0}`")]
    UnknownElement(String),
    #[error("table must be {0}×{0}")]
    BadTable(usize),
}

/// JSON form: `table[i][j]` is the name of `elements[i]·elements[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidDoc {
    pub elements: Vec<String>,
    pub unit: String,
    pub table: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub falsum: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monoid {
    names: Vec<String>,
    unit: usize,
    table: Vec<usize>,
}

type Subset = u64;

impl Monoid {
    pub fn new(names: Vec<String>, unit: usize, table: Vec<usize>) -> Result<Self, OracleError> {
        let k = names.len();
        if k == 0 {
            return Err(OracleError::Empty);
        }
        if k > MAX_ORACLE_SIZE {
            return Err(OracleError::SizeExceeded(k));
        }
        if table.len() != k * k || table.iter().any(|&v| v >= k) || unit >= k {
            return Err(OracleError::BadTable(k));
        }
        Ok(Self { names, unit, table })
    }

    pub fn from_doc(doc: &MonoidDoc) -> Result<Self, OracleError> {
        let k = doc.elements.len();
        if k > MAX_ORACLE_SIZE {
            return Err(OracleError::SizeExceeded(k));
        }
        let idx = |n: &str| {
            doc.elements
                .iter()
                .position(|e| e == n)
                .ok_or_else(|| OracleError::UnknownElement(n.to_string()))
        };
        if doc.table.len() != k || doc.table.iter().any(|r| r.len() != k) {
            return Err(OracleError::BadTable(k));
        }
        let mut table = Vec::with_capacity(k * k);
        for row in &doc.table {
            for v in row {
                table.push(idx(v)?);
            }
        }
        Self::new(doc.elements.clone(), idx(&doc.unit)?, table)
    }

    /// The falsum subset named in `doc`, if any.
    pub fn falsum_of(&self, doc: &MonoidDoc) -> Result<Option<u64>, OracleError> {
        let Some(names) = &doc.falsum else {
            return Ok(None);
        };
        let mut mask = 0;
        for n in names {
            let i = self
                .names
                .iter()
                .position(|e| e == n)
                .ok_or_else(|| OracleError::UnknownElement(n.clone()))?;
            mask |= 1 << i;
        }
        Ok(Some(mask))
    }

    /// `ℤ/k` written multiplicatively, elements `e, g, g2, ...`.
    pub fn cyclic(k: usize) -> Result<Self, OracleError> {
        let names = (0..k)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{i}"),
            })
            .collect();
        let table = (0..k * k).map(|i| (i / k + i % k) % k).collect();
        Self::new(names, 0, table)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.len() + y]
    }

    pub fn is_commutative(&self) -> bool {
        let k = self.len();
        (0..k).all(|x| (0..k).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn is_associative(&self) -> bool {
        let k = self.len();
        (0..k).all(|x| {
            (0..k).all(|y| (0..k).all(|z| self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z))))
        })
    }

    pub fn has_unit(&self) -> bool {
        (0..self.len()).all(|x| self.mul(self.unit, x) == x && self.mul(x, self.unit) == x)
    }

    pub fn subset_name(&self, s: Subset) -> String {
        crate::lattice::subset_name(&self.names, s as usize)
    }
}

/// Every commutative monoid structure on `{0, .., k-1}` with unit `0`.
/// Isomorphic copies are not removed.
pub fn commutative_monoids(k: usize) -> Vec<Monoid> {
    assert!((1..=4).contains(&k), "enumeration is only sensible for k ≤ 4");
    let names: Vec<String> = (0..k).map(|i| if i == 0 { "e".into() } else { format!("m{i}") }).collect();
    // free entries: unordered pairs of non-unit elements
    let pairs: Vec<(usize, usize)> = (1..k).flat_map(|x| (x..k).map(move |y| (x, y))).collect();
    let mut out = Vec::new();
    let total = k.pow(pairs.len() as u32);
    for code in 0..total {
        let mut table = vec![0; k * k];
        for x in 0..k {
            table[x] = x;
            table[x * k] = x;
        }
        let mut c = code;
        for &(x, y) in &pairs {
            let v = c % k;
            c /= k;
            table[x * k + y] = v;
            table[y * k + x] = v;
        }
        let m = Monoid {
            names: names.clone(),
            unit: 0,
            table,
        };
        if m.is_associative() {
            out.push(m);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub law: String,
    pub checked: usize,
    pub violations: usize,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub size: usize,
    pub falsum: String,
    pub commutative: bool,
    pub associative: bool,
    pub unital: bool,
    pub facts: Vec<String>,
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.commutative && self.associative && self.unital && self.violations() == 0
    }
}

struct Subsets<'a> {
    m: &'a Monoid,
    falsum: Subset,
    full: Subset,
}

impl Subsets<'_> {
    fn product(&self, x: Subset, y: Subset) -> Subset {
        let k = self.m.len();
        let mut out = 0;
        for i in (0..k).filter(|i| x & (1 << i) != 0) {
            for j in (0..k).filter(|j| y & (1 << j) != 0) {
                out |= 1 << self.m.mul(i, j);
            }
        }
        out
    }

    /// `{z | x·z ∈ y for every x ∈ X}`
    fn implies(&self, x: Subset, y: Subset) -> Subset {
        let k = self.m.len();
        (0..k)
            .filter(|&z| self.product(x, 1 << z) & !y == 0)
            .fold(0, |acc, z| acc | (1 << z))
    }

    fn dual(&self, x: Subset) -> Subset {
        self.implies(x, self.falsum)
    }

    fn closure(&self, x: Subset) -> Subset {
        self.dual(self.dual(x))
    }

    fn is_fact(&self, x: Subset) -> bool {
        self.closure(x) == x
    }
}

/// Exhaustively checks the phase-space laws on every subset and pair of
/// subsets of `m`, with `falsum` as the ⊥ subset (bitmask over elements).
pub fn subset_phase_oracle(m: &Monoid, falsum: Subset) -> OracleReport {
    let k = m.len();
    let full: Subset = (1 << k) - 1;
    let s = Subsets {
        m,
        falsum: falsum & full,
        full,
    };
    let all: Vec<Subset> = (0..=full).collect();
    let facts: Vec<Subset> = all.iter().copied().filter(|&x| s.is_fact(x)).collect();
    let n = |x: Subset| m.subset_name(x);

    let mut checks: Vec<OracleCheck> = Vec::new();
    let mut check = |law: &str, cases: &mut dyn Iterator<Item = (bool, String)>| {
        let mut c = OracleCheck {
            law: law.to_string(),
            checked: 0,
            violations: 0,
            witnesses: Vec::new(),
        };
        for (ok, witness) in cases {
            c.checked += 1;
            if !ok {
                c.violations += 1;
                if c.witnesses.len() < 5 {
                    c.witnesses.push(witness);
                }
            }
        }
        checks.push(c);
    };
    let pairs = |xs: &[Subset]| -> Vec<(Subset, Subset)> {
        xs.iter().flat_map(|&x| xs.iter().map(move |&y| (x, y))).collect()
    };
    let all_pairs = pairs(&all);
    let fact_pairs = pairs(&facts);

    check(
        "X^⊥·X ⊆ ⊥",
        &mut all.iter().map(|&x| (s.product(s.dual(x), x) & !s.falsum == 0, n(x))),
    );
    check(
        "X ⊆ X^⊥⊥",
        &mut all.iter().map(|&x| (x & !s.closure(x) == 0, n(x))),
    );
    check(
        "X^⊥⊥⊥ = X^⊥",
        &mut all.iter().map(|&x| (s.dual(s.closure(x)) == s.dual(x), n(x))),
    );
    check(
        "X ⊸ Y^⊥ = (X·Y)^⊥",
        &mut all_pairs.iter().map(|&(x, y)| {
            (s.implies(x, s.dual(y)) == s.dual(s.product(x, y)), format!("({}, {})", n(x), n(y)))
        }),
    );
    check(
        "(X∨Y)^⊥ = X^⊥∧Y^⊥",
        &mut all_pairs.iter().map(|&(x, y)| {
            (s.dual(x | y) == s.dual(x) & s.dual(y), format!("({}, {})", n(x), n(y)))
        }),
    );
    check(
        "X ⊸ Y is a fact when Y is",
        &mut all.iter().flat_map(|&x| facts.iter().map(move |&y| (x, y))).map(|(x, y)| {
            (s.is_fact(s.implies(x, y)), format!("({}, {})", n(x), n(y)))
        }),
    );
    check(
        "X & Y = X∧Y = (X^⊥∨Y^⊥)^⊥",
        &mut fact_pairs.iter().map(|&(x, y)| {
            let w = x & y;
            (s.is_fact(w) && w == s.dual(s.dual(x) | s.dual(y)), format!("({}, {})", n(x), n(y)))
        }),
    );
    check(
        "X + Y = (X^⊥∧Y^⊥)^⊥ = (X∨Y)^⊥⊥",
        &mut fact_pairs.iter().map(|&(x, y)| {
            (s.dual(s.dual(x) & s.dual(y)) == s.closure(x | y), format!("({}, {})", n(x), n(y)))
        }),
    );
    check(
        "X × Y = (X·Y)^⊥⊥ = (X ⊸ Y^⊥)^⊥ = (X^⊥ ⅋ Y^⊥)^⊥",
        &mut fact_pairs.iter().map(|&(x, y)| {
            let t = s.closure(s.product(x, y));
            let via_implication = s.dual(s.implies(x, s.dual(y)));
            let par_of_duals = s.dual(s.product(s.closure(x), s.closure(y)));
            (
                t == via_implication && t == s.dual(par_of_duals),
                format!("({}, {})", n(x), n(y)),
            )
        }),
    );
    check(
        "X ⅋ Y = (X^⊥·Y^⊥)^⊥ = X^⊥ ⊸ Y",
        &mut fact_pairs.iter().map(|&(x, y)| {
            (
                s.dual(s.product(s.dual(x), s.dual(y))) == s.implies(s.dual(x), y),
                format!("({}, {})", n(x), n(y)),
            )
        }),
    );
    let one = s.full;
    let zero = s.dual(s.full);
    let unit_i = s.closure(1 << m.unit);
    check(
        "⊥^⊥ = I = {e}^⊥⊥, 1 = ∅^⊥, 0 = 1^⊥ = ∅^⊥⊥",
        &mut std::iter::once((
            s.dual(s.falsum) == unit_i && s.dual(0) == one && zero == s.closure(0),
            n(s.falsum),
        )),
    );
    check(
        "neutral elements: 1 for &, 0 for +, I for ×, ⊥ for ⅋",
        &mut facts.iter().map(|&x| {
            let and_one = x & one == x;
            let plus_zero = s.closure(x | zero) == x;
            let tensor_i = s.closure(s.product(unit_i, x)) == x;
            let par_bot = s.dual(s.product(s.dual(s.falsum), s.dual(x))) == x;
            (and_one && plus_zero && tensor_i && par_bot, n(x))
        }),
    );

    OracleReport {
        size: k,
        falsum: n(s.falsum),
        commutative: m.is_commutative(),
        associative: m.is_associative(),
        unital: m.has_unit(),
        facts: facts.iter().map(|&f| n(f)).collect(),
        checks,
    }
}

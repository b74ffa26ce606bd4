//! Finite bounded lattices.
//!
//! A [`Lattice`] is built from a cover (Hasse) relation. The partial order is
//! derived once by transitive closure and the full join and meet tables are
//! cached, so every query after construction is a table lookup.
//!
//! Elements are tagged with the fingerprint of the lattice they belong to.
//! Two lattices with the same element names and the same order share a
//! fingerprint, so their elements are interchangeable; anything else is
//! rejected as [`LatticeError::ForeignElement`].

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice has no elements")]
    Empty,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("not a partial order: `{0}` and `{1}` lie on a cycle of covers")]
    NotAPartialOrder(String, String),
    #[error("not a lattice: `{x}` and `{y}` have no unique {op}")]
    NotALattice { x: String, y: String, op: &'static str },
    #[error("declared {which} `{name}` is not extremal (`{witness}` violates it)")]
    UnboundedLattice {
        which: &'static str,
        name: String,
        witness: String,
    },
    #[error("element does not belong to this lattice: {0}")]
    ForeignElement(String),
    #[error("lattice is not Heyting: residuation fails for `{a}` => `{b}`")]
    NotHeyting { a: String, b: String },
    #[error("join/meet of an empty set of elements")]
    EmptySelection,
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// Fingerprint of a lattice's names and order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeId(u64);

/// An element of a specific lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    lattice: LatticeId,
    index: u32,
}

impl Element {
    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn lattice_id(self) -> LatticeId {
        self.lattice
    }
}

/// JSON form of a lattice: element names, cover pairs, and the declared bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    pub bottom: String,
    pub top: String,
}

#[derive(Clone)]
pub struct Lattice {
    id: LatticeId,
    names: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
    join: Vec<u32>,
    meet: Vec<u32>,
    covers: Vec<(usize, usize)>,
    bottom: usize,
    top: usize,
    distributive: OnceLock<bool>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("elements", &self.names)
            .field("bottom", &self.names[self.bottom])
            .field("top", &self.names[self.top])
            .finish()
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.names == other.names && self.leq == other.leq
    }
}

impl Eq for Lattice {}

impl Lattice {
    pub fn from_doc(doc: &LatticeDoc) -> Result<Self> {
        let index = name_index(&doc.elements)?;
        let lookup = |n: &str| {
            index
                .get(n)
                .copied()
                .ok_or_else(|| LatticeError::UnknownElement(n.to_string()))
        };
        let mut covers = Vec::with_capacity(doc.covers.len());
        for (lo, hi) in &doc.covers {
            covers.push((lookup(lo)?, lookup(hi)?));
        }
        let bottom = lookup(&doc.bottom)?;
        let top = lookup(&doc.top)?;
        Self::from_covers(doc.elements.clone(), &covers, bottom, top)
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, crate::Error> {
        let doc: LatticeDoc = serde_json::from_str(text)?;
        Ok(Self::from_doc(&doc)?)
    }

    /// Builds a lattice from element names and index pairs `(lower, upper)`.
    /// The pairs need not be a minimal cover relation; the order is their
    /// reflexive-transitive closure.
    pub fn from_covers(
        names: Vec<String>,
        covers: &[(usize, usize)],
        bottom: usize,
        top: usize,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let index = name_index(&names)?;
        let mut succ = vec![Vec::new(); n];
        for &(lo, hi) in covers {
            if lo >= n || hi >= n {
                return Err(LatticeError::UnknownElement(format!("#{}", lo.max(hi))));
            }
            succ[lo].push(hi);
        }
        let mut leq = vec![false; n * n];
        let mut queue = VecDeque::new();
        for start in 0..n {
            leq[start * n + start] = true;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in &succ[v] {
                    if !leq[start * n + w] {
                        leq[start * n + w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        for x in 0..n {
            for y in (x + 1)..n {
                if leq[x * n + y] && leq[y * n + x] {
                    return Err(LatticeError::NotAPartialOrder(
                        names[x].clone(),
                        names[y].clone(),
                    ));
                }
            }
        }
        for x in 0..n {
            if !leq[bottom * n + x] {
                return Err(LatticeError::UnboundedLattice {
                    which: "bottom",
                    name: names[bottom].clone(),
                    witness: names[x].clone(),
                });
            }
            if !leq[x * n + top] {
                return Err(LatticeError::UnboundedLattice {
                    which: "top",
                    name: names[top].clone(),
                    witness: names[x].clone(),
                });
            }
        }
        Self::from_order(names, index, leq, bottom, top)
    }

    fn from_order(
        names: Vec<String>,
        index: HashMap<String, usize>,
        leq: Vec<bool>,
        bottom: usize,
        top: usize,
    ) -> Result<Self> {
        let n = names.len();
        let le = |x: usize, y: usize| leq[x * n + y];
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for x in 0..n {
            for y in x..n {
                let lub = (0..n)
                    .filter(|&z| le(x, z) && le(y, z))
                    .find(|&z| (0..n).all(|w| !(le(x, w) && le(y, w)) || le(z, w)))
                    .ok_or_else(|| LatticeError::NotALattice {
                        x: names[x].clone(),
                        y: names[y].clone(),
                        op: "join",
                    })?;
                let glb = (0..n)
                    .filter(|&z| le(z, x) && le(z, y))
                    .find(|&z| (0..n).all(|w| !(le(w, x) && le(w, y)) || le(w, z)))
                    .ok_or_else(|| LatticeError::NotALattice {
                        x: names[x].clone(),
                        y: names[y].clone(),
                        op: "meet",
                    })?;
                join[x * n + y] = lub as u32;
                join[y * n + x] = lub as u32;
                meet[x * n + y] = glb as u32;
                meet[y * n + x] = glb as u32;
            }
        }
        let mut covers = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y
                    && le(x, y)
                    && !(0..n).any(|z| z != x && z != y && le(x, z) && le(z, y))
                {
                    covers.push((x, y));
                }
            }
        }
        let mut hasher = DefaultHasher::new();
        names.hash(&mut hasher);
        leq.hash(&mut hasher);
        Ok(Self {
            id: LatticeId(hasher.finish()),
            names,
            index,
            leq,
            join,
            meet,
            covers,
            bottom,
            top,
            distributive: OnceLock::new(),
        })
    }

    /// Chain `names[0] < names[1] < ...`.
    pub fn chain<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let n = names.len();
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_covers(names, &covers, 0, n.saturating_sub(1))
    }

    /// Boolean lattice of all subsets of `items`, ordered by inclusion.
    ///
    /// Element `i` is the subset whose bitmask is `i`; names look like
    /// `{}` or `{p,q}` with items in the given order.
    pub fn powerset<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let k = items.len();
        assert!(k <= 12, "powerset lattice over more than 12 items");
        let n = 1usize << k;
        let names: Vec<String> = (0..n).map(|mask| subset_name(items, mask)).collect();
        let mut covers = Vec::new();
        for mask in 0..n {
            for bit in 0..k {
                if mask & (1 << bit) == 0 {
                    covers.push((mask, mask | (1 << bit)));
                }
            }
        }
        Self::from_covers(names, &covers, 0, n - 1)
    }

    /// Lattice of down-closed subsets of a finite poset given by its strict
    /// order `below[i]` (indices `j` with `j < i`). Every finite distributive
    /// lattice arises this way. Element names are the down-set's maximal
    /// points joined with `|`, or `0` for the empty set.
    pub fn of_downsets(points: &[String], below: &[Vec<usize>]) -> Result<Self> {
        let k = points.len();
        assert!(k <= 16, "down-set lattice over more than 16 points");
        let closed = |mask: usize| {
            (0..k).all(|i| mask & (1 << i) == 0 || below[i].iter().all(|&j| mask & (1 << j) != 0))
        };
        let sets: Vec<usize> = (0..(1usize << k)).filter(|&m| closed(m)).collect();
        let names: Vec<String> = sets
            .iter()
            .map(|&m| {
                if m == 0 {
                    return "0".to_string();
                }
                let maximal: Vec<&str> = (0..k)
                    .filter(|&i| m & (1 << i) != 0)
                    .filter(|&i| !(0..k).any(|j| m & (1 << j) != 0 && below[j].contains(&i)))
                    .map(|i| points[i].as_str())
                    .collect();
                maximal.join("|")
            })
            .collect();
        let n = sets.len();
        let index = name_index(&names)?;
        let mut leq = vec![false; n * n];
        for (x, &mx) in sets.iter().enumerate() {
            for (y, &my) in sets.iter().enumerate() {
                leq[x * n + y] = mx & !my == 0;
            }
        }
        Self::from_order(names, index, leq, 0, n - 1)
    }

    pub fn to_doc(&self) -> LatticeDoc {
        LatticeDoc {
            elements: self.names.clone(),
            covers: self
                .covers
                .iter()
                .map(|&(x, y)| (self.names[x].clone(), self.names[y].clone()))
                .collect(),
            bottom: self.names[self.bottom].clone(),
            top: self.names[self.top].clone(),
        }
    }

    pub fn id(&self) -> LatticeId {
        self.id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.len()).map(move |i| self.at(i))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn bottom(&self) -> Element {
        self.at(self.bottom)
    }

    pub fn top(&self) -> Element {
        self.at(self.top)
    }

    /// Element by name.
    pub fn element(&self, name: &str) -> Result<Element> {
        self.index
            .get(name)
            .map(|&i| self.at(i))
            .ok_or_else(|| LatticeError::UnknownElement(name.to_string()))
    }

    pub fn name(&self, x: Element) -> &str {
        &self.names[x.index()]
    }

    /// Cover pairs of the transitive reduction.
    pub fn covers(&self) -> impl Iterator<Item = (Element, Element)> + '_ {
        self.covers.iter().map(|&(x, y)| (self.at(x), self.at(y)))
    }

    pub fn check(&self, x: Element) -> Result<()> {
        if x.lattice == self.id && x.index() < self.len() {
            Ok(())
        } else {
            Err(LatticeError::ForeignElement(format!("{x:?}")))
        }
    }

    pub fn leq(&self, x: Element, y: Element) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.leq_idx(x.index(), y.index()))
    }

    pub fn join(&self, xs: &[Element]) -> Result<Element> {
        self.fold(xs, |a, b| self.join_idx(a, b))
    }

    pub fn meet(&self, xs: &[Element]) -> Result<Element> {
        self.fold(xs, |a, b| self.meet_idx(a, b))
    }

    pub fn join2(&self, x: Element, y: Element) -> Result<Element> {
        self.join(&[x, y])
    }

    pub fn meet2(&self, x: Element, y: Element) -> Result<Element> {
        self.meet(&[x, y])
    }

    fn fold(&self, xs: &[Element], op: impl Fn(usize, usize) -> usize) -> Result<Element> {
        let (first, rest) = xs.split_first().ok_or(LatticeError::EmptySelection)?;
        self.check(*first)?;
        let mut acc = first.index();
        for &x in rest {
            self.check(x)?;
            acc = op(acc, x.index());
        }
        Ok(self.at(acc))
    }

    /// `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)` for every triple.
    pub fn is_distributive(&self) -> bool {
        *self.distributive.get_or_init(|| {
            let n = self.len();
            (0..n).all(|x| {
                (0..n).all(|y| {
                    (0..n).all(|z| {
                        self.meet_idx(x, self.join_idx(y, z))
                            == self.join_idx(self.meet_idx(x, y), self.meet_idx(x, z))
                    })
                })
            })
        })
    }

    /// Relative pseudo-complement: the join of every `c` with `a ∧ c ≤ b`,
    /// checked against the residuation law before it is returned.
    pub fn heyting_implies(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        let not_heyting = || LatticeError::NotHeyting {
            a: self.name(a).to_string(),
            b: self.name(b).to_string(),
        };
        if !self.is_distributive() {
            return Err(not_heyting());
        }
        let (a, b) = (a.index(), b.index());
        let candidate = (0..self.len())
            .filter(|&c| self.leq_idx(self.meet_idx(a, c), b))
            .fold(self.bottom, |acc, c| self.join_idx(acc, c));
        let residuates = (0..self.len())
            .all(|c| self.leq_idx(self.meet_idx(a, c), b) == self.leq_idx(c, candidate));
        if residuates {
            Ok(self.at(candidate))
        } else {
            Err(not_heyting())
        }
    }

    /// `a ⇒ 0`.
    pub fn heyting_neg(&self, a: Element) -> Result<Element> {
        self.heyting_implies(a, self.bottom())
    }

    /// The same elements under the reversed order.
    pub fn opposite(&self) -> Lattice {
        let n = self.len();
        let mut leq = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                leq[x * n + y] = self.leq_idx(y, x);
            }
        }
        Self::from_order(self.names.clone(), self.index.clone(), leq, self.top, self.bottom)
            .expect("the opposite of a lattice is a lattice")
    }

    /// Number of join-irreducible elements below `x` (atoms in a Boolean lattice).
    pub fn rank(&self, x: Element) -> usize {
        (0..self.len())
            .filter(|&j| self.is_join_irreducible_idx(j) && self.leq_idx(j, x.index()))
            .count()
    }

    /// Covers exactly one element. Every element of a finite lattice is the
    /// join of the join-irreducibles below it.
    pub fn is_join_irreducible(&self, x: Element) -> bool {
        self.check(x).is_ok() && self.is_join_irreducible_idx(x.index())
    }

    fn is_join_irreducible_idx(&self, j: usize) -> bool {
        j != self.bottom && self.covers.iter().filter(|&&(_, hi)| hi == j).count() == 1
    }

    /// The element at position `index` of [`Lattice::names`].
    ///
    /// # Panics
    /// If `index` is out of range.
    pub fn at(&self, index: usize) -> Element {
        assert!(index < self.len(), "element index {index} out of range");
        Element {
            lattice: self.id,
            index: index as u32,
        }
    }

    pub(crate) fn leq_idx(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    pub(crate) fn join_idx(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y] as usize
    }

    pub(crate) fn meet_idx(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y] as usize
    }

    pub(crate) fn bottom_idx(&self) -> usize {
        self.bottom
    }

    pub(crate) fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

fn name_index(names: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(LatticeError::DuplicateElement(name.clone()));
        }
    }
    Ok(index)
}

pub(crate) fn subset_name<S: AsRef<str>>(items: &[S], mask: usize) -> String {
    let parts: Vec<&str> = items
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, s)| s.as_ref())
        .collect();
    format!("{{{}}}", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(elements: &[&str], covers: &[(&str, &str)], bottom: &str, top: &str) -> LatticeDoc {
        LatticeDoc {
            elements: elements.iter().map(|s| s.to_string()).collect(),
            covers: covers
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            bottom: bottom.into(),
            top: top.into(),
        }
    }

    fn m3() -> Lattice {
        Lattice::from_doc(&doc(
            &["0", "x", "y", "z", "1"],
            &[("0", "x"), ("0", "y"), ("0", "z"), ("x", "1"), ("y", "1"), ("z", "1")],
            "0",
            "1",
        ))
        .unwrap()
    }

    #[test]
    fn two_element_chain_loads() {
        let l = Lattice::from_doc(&doc(&["0", "1"], &[("0", "1")], "0", "1")).unwrap();
        assert_eq!(l.len(), 2);
        assert!(l.leq(l.bottom(), l.top()).unwrap());
        assert!(!l.leq(l.top(), l.bottom()).unwrap());
    }

    #[test]
    fn cycle_is_not_a_partial_order() {
        let err = Lattice::from_doc(&doc(&["a", "b"], &[("a", "b"), ("b", "a")], "a", "b"));
        assert!(matches!(err, Err(LatticeError::NotAPartialOrder(..))));
    }

    #[test]
    fn missing_join_is_rejected() {
        // two maximal elements above a common bottom, declared "top" is one of them
        let err = Lattice::from_doc(&doc(
            &["0", "a", "b", "c", "d", "1"],
            &[("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("a", "d"), ("b", "d"), ("c", "1"), ("d", "1")],
            "0",
            "1",
        ));
        assert!(matches!(err, Err(LatticeError::NotALattice { .. })));
    }

    #[test]
    fn declared_bounds_must_be_extremal() {
        let err = Lattice::from_doc(&doc(&["0", "1"], &[("0", "1")], "1", "1"));
        assert!(matches!(
            err,
            Err(LatticeError::UnboundedLattice { which: "bottom", .. })
        ));
    }

    #[test]
    fn join_and_meet_basics() {
        let l = Lattice::powerset(&["p", "q"]).unwrap();
        let p = l.element("{p}").unwrap();
        let q = l.element("{q}").unwrap();
        assert_eq!(l.name(l.join2(p, q).unwrap()), "{p,q}");
        assert_eq!(l.meet2(p, q).unwrap(), l.bottom());
        assert_eq!(l.join(&[p]).unwrap(), p);
        assert_eq!(l.join(&[]), Err(LatticeError::EmptySelection));
    }

    #[test]
    fn foreign_elements_are_rejected() {
        let a = Lattice::chain(&["0", "1"]).unwrap();
        let b = Lattice::chain(&["0", "h", "1"]).unwrap();
        assert!(matches!(
            a.leq(b.top(), a.top()),
            Err(LatticeError::ForeignElement(_))
        ));
        // structurally identical lattices share elements
        let c = Lattice::chain(&["0", "1"]).unwrap();
        assert!(a.leq(c.bottom(), a.top()).unwrap());
    }

    #[test]
    fn distributivity_of_standard_lattices() {
        assert!(Lattice::chain(&["0", "1", "2", "3"]).unwrap().is_distributive());
        assert!(Lattice::powerset(&["p", "q", "r"]).unwrap().is_distributive());
        assert!(!m3().is_distributive());
    }

    #[test]
    fn heyting_on_powerset() {
        let l = Lattice::powerset(&["p", "q"]).unwrap();
        let p = l.element("{p}").unwrap();
        let q = l.element("{q}").unwrap();
        assert_eq!(l.heyting_implies(p, q).unwrap(), q);
        assert_eq!(l.heyting_neg(p).unwrap(), q);
        assert_eq!(l.heyting_neg(l.bottom()).unwrap(), l.top());
        assert_eq!(l.heyting_neg(l.top()).unwrap(), l.bottom());
        for z in l.elements() {
            assert_eq!(l.heyting_implies(l.top(), z).unwrap(), z);
            assert_eq!(l.heyting_implies(l.bottom(), z).unwrap(), l.top());
        }
    }

    #[test]
    fn heyting_rejects_non_distributive() {
        let l = m3();
        let x = l.element("x").unwrap();
        assert!(matches!(
            l.heyting_implies(x, l.bottom()),
            Err(LatticeError::NotHeyting { .. })
        ));
    }

    #[test]
    fn downset_lattice_names_and_size() {
        // a < b, c incomparable: down-sets {}, a, c, ab, ac, abc = 6
        let pts: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let l = Lattice::of_downsets(&pts, &[vec![], vec![0], vec![]]).unwrap();
        assert_eq!(l.len(), 6);
        assert!(l.is_distributive());
        assert!(l.element("b|c").is_ok());
        assert_eq!(l.name(l.top()), "b|c");
    }

    #[test]
    fn opposite_swaps_join_and_meet() {
        let l = Lattice::powerset(&["p", "q", "r"]).unwrap();
        let o = l.opposite();
        for x in 0..l.len() {
            for y in 0..l.len() {
                assert_eq!(o.join_idx(x, y), l.meet_idx(x, y));
                assert_eq!(o.meet_idx(x, y), l.join_idx(x, y));
            }
        }
    }

    #[test]
    fn rank_counts_atoms_in_powerset() {
        let l = Lattice::powerset(&["p", "q", "r"]).unwrap();
        assert_eq!(l.rank(l.top()), 3);
        assert_eq!(l.rank(l.bottom()), 0);
        assert_eq!(l.rank(l.element("{p,r}").unwrap()), 2);
    }

    #[test]
    fn doc_round_trip() {
        let l = Lattice::powerset(&["p", "q"]).unwrap();
        let again = Lattice::from_doc(&l.to_doc()).unwrap();
        assert_eq!(l, again);
    }
}

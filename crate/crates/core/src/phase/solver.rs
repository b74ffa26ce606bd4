//! Resolving ambiguous monoid tables.
//!
//! Entries given as candidate sets are filled in by depth-first search with
//! partial associativity pruning. A complete table is accepted only if it
//! loads as a [`PhaseStructure`], passes every law in [`verify_laws`], and
//! satisfies the document's linked constraints.

use std::sync::Arc;

use rayon::prelude::*;

use super::{
    verify_laws, Checks, EntryValue, PhaseError, PhaseStructure, Result, TableDoc, UnitMode,
};
use crate::lattice::{Element, Lattice, LatticeError};

#[derive(Clone, Debug)]
pub struct AmbiguousTable {
    lattice: Arc<Lattice>,
    /// Unordered pairs `x <= y` (by index) and their candidates in name order.
    cells: Vec<Cell>,
    unit: usize,
    falsum: usize,
    overrides: Vec<Option<usize>>,
    linked: Vec<(Vec<(usize, usize)>, usize)>,
    unit_mode: UnitMode,
    checks: Checks,
}

#[derive(Clone, Debug)]
struct Cell {
    x: usize,
    y: usize,
    candidates: Vec<u32>,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub max_solutions: usize,
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_solutions: 64,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solutions {
    pub structures: Vec<PhaseStructure>,
    /// More completions exist than `max_solutions`.
    pub capped: bool,
}

impl AmbiguousTable {
    pub fn from_doc(lattice: Arc<Lattice>, doc: &TableDoc) -> Result<Self> {
        let n = lattice.len();
        let idx = |name: &str| {
            lattice
                .index_of(name)
                .ok_or_else(|| PhaseError::Lattice(LatticeError::UnknownElement(name.to_string())))
        };
        let mut by_name: Vec<u32> = (0..n as u32).collect();
        by_name.sort_by(|&a, &b| lattice.names()[a as usize].cmp(&lattice.names()[b as usize]));

        let mut given: Vec<Option<Vec<u32>>> = vec![None; n * n];
        for (x, y, value) in &doc.mult {
            let (xi, yi) = (idx(x)?, idx(y)?);
            let (xi, yi) = (xi.min(yi), xi.max(yi));
            let mut cands: Vec<u32> = match value {
                EntryValue::Fixed(v) => vec![idx(v)? as u32],
                EntryValue::Candidates(vs) => {
                    vs.iter().map(|v| idx(v).map(|i| i as u32)).collect::<Result<_>>()?
                }
            };
            cands.sort_by_key(|&c| by_name.iter().position(|&b| b == c));
            cands.dedup();
            let slot = &mut given[xi * n + yi];
            *slot = Some(match slot.take() {
                // a pair listed twice keeps the common candidates
                Some(prev) => cands.into_iter().filter(|c| prev.contains(c)).collect(),
                None => cands,
            });
        }
        let mut cells = Vec::with_capacity(n * (n + 1) / 2);
        for x in 0..n {
            for y in x..n {
                let candidates = given[x * n + y].take().unwrap_or_else(|| by_name.clone());
                cells.push(Cell { x, y, candidates });
            }
        }
        let mut overrides = vec![None; n];
        for (x, d) in &doc.dual_overrides {
            overrides[idx(x)?] = Some(idx(d)?);
        }
        let mut linked = Vec::new();
        for c in &doc.linked_constraints {
            let terms = c
                .sum
                .iter()
                .map(|(x, y)| Ok((idx(x)?, idx(y)?)))
                .collect::<Result<Vec<_>>>()?;
            linked.push((terms, idx(&c.equals)?));
        }
        Ok(Self {
            unit: idx(&doc.unit)?,
            falsum: idx(&doc.falsum)?,
            lattice,
            cells,
            overrides,
            linked,
            unit_mode: doc.unit_mode,
            checks: doc.checks,
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// Candidates for `x·y`, in name order.
    pub fn candidates(&self, x: Element, y: Element) -> Result<Vec<Element>> {
        self.lattice.check(x)?;
        self.lattice.check(y)?;
        let (a, b) = (x.index().min(y.index()), x.index().max(y.index()));
        let cell = self
            .cells
            .iter()
            .find(|c| c.x == a && c.y == b)
            .expect("every unordered pair has a cell");
        Ok(cell
            .candidates
            .iter()
            .map(|&c| self.lattice.at(c as usize))
            .collect())
    }

    /// Pairs with more than one candidate, as `(x, y)` elements.
    pub fn ambiguous_pairs(&self) -> Vec<(Element, Element)> {
        self.cells
            .iter()
            .filter(|c| c.candidates.len() > 1)
            .map(|c| (self.lattice.at(c.x), self.lattice.at(c.y)))
            .collect()
    }

    /// Number of complete tables before pruning.
    pub fn search_space(&self) -> f64 {
        self.cells.iter().map(|c| c.candidates.len() as f64).product()
    }
}

/// Enumerates every law-abiding completion of `at`, up to
/// `opts.max_solutions`, in a fixed order that does not depend on thread
/// scheduling or on the order candidates were listed in.
pub fn solve_table(at: &AmbiguousTable, opts: SolveOptions) -> Result<Solutions> {
    let n = at.lattice.len();
    if at.cells.iter().any(|c| c.candidates.is_empty()) {
        return Err(PhaseError::NoSolution);
    }
    let mut table: Vec<Option<u32>> = vec![None; n * n];
    let mut order: Vec<usize> = Vec::new();
    for (i, c) in at.cells.iter().enumerate() {
        if let [v] = c.candidates[..] {
            table[c.x * n + c.y] = Some(v);
            table[c.y * n + c.x] = Some(v);
        } else {
            order.push(i);
        }
    }
    order.sort_by_key(|&i| at.cells[i].candidates.len());
    if !partially_associative(&table, n, at.checks.associative) {
        return Err(PhaseError::NoSolution);
    }
    let limit = opts.max_solutions.max(1) + 1;

    let found = match order.split_first() {
        Some((&first, rest)) if opts.parallel => {
            let branches: Vec<Vec<PhaseStructure>> = at.cells[first]
                .candidates
                .par_iter()
                .map(|&v| {
                    let mut t = table.clone();
                    let cell = &at.cells[first];
                    t[cell.x * n + cell.y] = Some(v);
                    t[cell.y * n + cell.x] = Some(v);
                    let mut out = Vec::new();
                    if partially_associative(&t, n, at.checks.associative) {
                        search(at, &mut t, rest, limit, &mut out);
                    }
                    out
                })
                .collect();
            branches.into_iter().flatten().take(limit).collect()
        }
        _ => {
            let mut out = Vec::new();
            search(at, &mut table, &order, limit, &mut out);
            out
        }
    };
    if found.is_empty() {
        return Err(PhaseError::NoSolution);
    }
    let capped = found.len() > opts.max_solutions.max(1);
    let mut structures = found;
    structures.truncate(opts.max_solutions.max(1));
    Ok(Solutions { structures, capped })
}

fn search(
    at: &AmbiguousTable,
    table: &mut Vec<Option<u32>>,
    order: &[usize],
    limit: usize,
    out: &mut Vec<PhaseStructure>,
) {
    if out.len() >= limit {
        return;
    }
    let n = at.lattice.len();
    let Some((&next, rest)) = order.split_first() else {
        if let Some(ps) = accept(at, table) {
            out.push(ps);
        }
        return;
    };
    let cell = &at.cells[next];
    for &v in &cell.candidates {
        table[cell.x * n + cell.y] = Some(v);
        table[cell.y * n + cell.x] = Some(v);
        if partially_associative(table, n, at.checks.associative) {
            search(at, table, rest, limit, out);
            if out.len() >= limit {
                break;
            }
        }
    }
    table[cell.x * n + cell.y] = None;
    table[cell.y * n + cell.x] = None;
}

fn accept(at: &AmbiguousTable, table: &[Option<u32>]) -> Option<PhaseStructure> {
    let mult: Vec<u32> = table.iter().map(|v| v.expect("complete table")).collect();
    let ps = PhaseStructure::build(
        at.lattice.clone(),
        mult,
        at.unit,
        at.falsum,
        &at.overrides,
        at.unit_mode,
        at.checks,
    )
    .ok()?;
    if !verify_laws(&ps).passed() {
        return None;
    }
    let l = &at.lattice;
    for (terms, equals) in &at.linked {
        let mut acc = l.bottom_idx();
        for &(x, y) in terms {
            acc = l.join_idx(acc, ps.mul_idx(x, y));
        }
        // `+` is the additive disjunction: closure of the join
        if ps.dual_idx(ps.dual_idx(acc)) != *equals {
            return None;
        }
    }
    Some(ps)
}

/// Associativity on every triple whose four lookups are already defined.
fn partially_associative(table: &[Option<u32>], n: usize, enabled: bool) -> bool {
    if !enabled {
        return true;
    }
    for x in 0..n {
        for y in 0..n {
            let Some(xy) = table[x * n + y] else { continue };
            for z in 0..n {
                let (Some(left), Some(yz)) = (table[xy as usize * n + z], table[y * n + z]) else {
                    continue;
                };
                if let Some(right) = table[x * n + yz as usize] {
                    if left != right {
                        return false;
                    }
                }
            }
        }
    }
    true
}

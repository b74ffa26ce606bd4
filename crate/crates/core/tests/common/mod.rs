#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use phaselog::phase::load_phase_file;
use phaselog::planner::{load_scenario, Scenario};
use phaselog::{Element, Lattice, PhaseStructure};

pub fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

pub fn fig1_lattice() -> Arc<Lattice> {
    let text = std::fs::read_to_string(data("fig1_lattice.json")).unwrap();
    Arc::new(Lattice::from_json(&text).unwrap())
}

pub fn resolved() -> PhaseStructure {
    load_phase_file(&data("fig1_resolved.json")).unwrap()
}

pub fn scenario(name: &str) -> Scenario {
    load_scenario(&data(&format!("scenarios/{name}.json"))).unwrap()
}

pub fn el(l: &Lattice, name: &str) -> Element {
    l.element(name).unwrap()
}

/// Independent model of the reference lattice: down-sets of the poset
/// {a, b1, b2, b3, e} with a below b2, b3 and e, as bitmasks, named by the
/// generators they contain.
pub mod downsets {
    pub const POINTS: [&str; 5] = ["a", "b1", "b2", "b3", "e"];
    const BELOW: [u8; 5] = [0b00001, 0b00010, 0b00101, 0b01001, 0b10001];

    pub fn all() -> Vec<u8> {
        (0u8..32)
            .filter(|&m| (0..5).all(|i| m & (1 << i) == 0 || m & BELOW[i] == BELOW[i]))
            .collect()
    }

    pub fn of(generators: &[&str]) -> u8 {
        generators
            .iter()
            .map(|g| BELOW[POINTS.iter().position(|p| p == g).unwrap()])
            .fold(0, |a, b| a | b)
    }

    /// The name the lattice file uses for a down-set: its maximal generators.
    pub fn name(m: u8) -> String {
        let has = |i: usize| m & (1 << i) != 0;
        let maximal: Vec<&str> = (0..5)
            .filter(|&i| has(i) && !(0..5).any(|j| j != i && has(j) && BELOW[j] & (1 << i) != 0))
            .map(|i| POINTS[i])
            .collect();
        match maximal.as_slice() {
            [] => "0".into(),
            [g] => g.to_string(),
            ["a", "b1"] => "J1a".into(),
            gs if gs.len() == 4 => "top".into(),
            gs => {
                let digits: String = gs.iter().filter(|g| g.starts_with('b')).map(|g| &g[1..]).collect();
                let e = if gs.contains(&"e") { "e" } else { "" };
                format!("J{digits}{e}")
            }
        }
    }

    /// The reference generator duals; the rest follow by De Morgan.
    pub fn dual(m: u8) -> u8 {
        let duals: [&[&str]; 5] = [&["b1", "b2", "b3"], &["b2", "b3", "e"], &["b1", "b3"], &["b1", "b2"], &["b1"]];
        let mut r = 0b11111;
        for (i, d) in duals.iter().enumerate() {
            if m & (1 << i) != 0 {
                r &= of(d);
            }
        }
        r
    }
}

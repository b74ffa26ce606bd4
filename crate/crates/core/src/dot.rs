//! Graphviz output. Chosen plays are drawn with `penwidth=3`.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::conway::{Game, Polarity, Strategy};
use crate::lattice::Lattice;
use crate::planner::{Cell, Scenario, Trace};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram, bottom at the bottom.
pub fn lattice_dot(l: &Lattice) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for name in l.names() {
        writeln!(out, "  {};", quote(name)).unwrap();
    }
    for (lo, hi) in l.covers() {
        writeln!(out, "  {} -> {} [arrowhead=none];", quote(l.name(lo)), quote(l.name(hi))).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Positions and moves; Opponent moves dashed. Moves used by `highlight`
/// are drawn bold.
pub fn game_dot(g: &Game, highlight: Option<&Strategy>) -> String {
    let used: BTreeSet<usize> = highlight
        .map(|s| s.plays().iter().flatten().copied().collect())
        .unwrap_or_default();
    let mut out = String::from("digraph game {\n  node [shape=circle];\n");
    for (i, name) in g.names().iter().enumerate() {
        let shape = if i == g.root() { " shape=doublecircle" } else { "" };
        writeln!(out, "  v{i} [label={}{shape}];", quote(name)).unwrap();
    }
    for (id, m) in g.moves().iter().enumerate() {
        let style = match m.polarity {
            Polarity::Opponent => "dashed",
            Polarity::Proponent => "solid",
        };
        let width = if used.contains(&id) { " penwidth=3" } else { "" };
        writeln!(
            out,
            "  v{} -> v{} [label=\"{}\" style={style}{width}];",
            m.from, m.to, m.polarity
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn cell_id((r, c): Cell) -> String {
    format!("c{r}_{c}")
}

/// The grid with objects, walls, the start cell, and the executed play.
pub fn trace_dot(sc: &Scenario, trace: &Trace) -> String {
    let mut out = String::from("digraph trace {\n  node [shape=box fixedsize=true width=0.6 height=0.6];\n");
    for r in 0..sc.height {
        for c in 0..sc.width {
            let mut label = String::new();
            for o in sc.objects.iter().filter(|o| o.cell == (r, c)) {
                label.push_str(&o.id);
            }
            let mut attrs = vec![format!("label={}", quote(&label)), format!("pos=\"{c},{}!\"", sc.height - r)];
            if !sc.is_passable((r, c)) {
                attrs.push("style=filled fillcolor=gray".into());
            }
            if (r, c) == sc.start {
                attrs.push("peripheries=2".into());
            }
            writeln!(out, "  {} [{}];", cell_id((r, c)), attrs.join(" ")).unwrap();
        }
    }
    for r in 0..sc.height {
        for c in 0..sc.width {
            for (_, n) in sc.neighbours((r, c)) {
                if n > (r, c) && sc.is_passable((r, c)) {
                    writeln!(out, "  {} -> {} [arrowhead=none color=gray];", cell_id((r, c)), cell_id(n)).unwrap();
                }
            }
        }
    }
    for w in trace.play.windows(2) {
        writeln!(out, "  {} -> {} [penwidth=3];", cell_id(w[0]), cell_id(w[1])).unwrap();
    }
    out.push_str("}\n");
    out
}

//! Hasse diagram of a covering lattice in DOT.

use std::fmt::Write;

use groupoid_cover::classify::GaloisLattice;

/// The identity covering sits on top; each edge runs from a node to a node
/// directly above it.
pub fn lattice_dot(l: &GaloisLattice, subgroup_labels: &[Vec<String>]) -> String {
    let mut s = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, c) in l.classes.iter().enumerate() {
        let sign = if c.regular { '+' } else { '-' };
        let _ = writeln!(
            s,
            "  n{i} [label=\"fold={}, regular={sign}\", tooltip=\"{{{}}}\"];",
            c.fold,
            subgroup_labels[i].join(",").replace('"', "\\\"")
        );
    }
    for (i, j) in l.hasse_edges() {
        let _ = writeln!(s, "  n{i} -> n{j};");
    }
    s.push_str("}\n");
    s
}

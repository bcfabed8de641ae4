//! Graph exports: DOT and a JSON adjacency form.

use std::fmt::Write;

use serde::Serialize;
use sqfree_core::AvoidanceGraph;

/// Vertices as letter strings in lexicographic order, arcs as index pairs into that list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Adjacency {
    pub vertices: Vec<String>,
    pub arcs: Vec<[usize; 2]>,
}

pub fn adjacency(g: &AvoidanceGraph) -> Adjacency {
    Adjacency {
        vertices: g.vertices().map(|w| w.to_string()).collect(),
        arcs: g.arcs().map(|(a, b)| [a, b]).collect(),
    }
}

/// DOT digraph labelled by letter strings. Dead-ends are drawn as boxes.
pub fn to_dot(g: &AvoidanceGraph, name: &str) -> String {
    let words: Vec<String> = g.vertices().map(|w| w.to_string()).collect();
    let mut out = String::new();
    writeln!(out, "digraph \"{name}\" {{").unwrap();
    for (k, &code) in g.vertex_codes().iter().enumerate() {
        if g.out_degree(code) == 0 {
            writeln!(out, "  \"{}\" [shape=box];", words[k]).unwrap();
        } else {
            writeln!(out, "  \"{}\";", words[k]).unwrap();
        }
    }
    for (a, b) in g.arcs() {
        writeln!(out, "  \"{}\" -> \"{}\";", words[a], words[b]).unwrap();
    }
    out.push_str("}\n");
    out
}

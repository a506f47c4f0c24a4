//! Graphviz export.

use std::collections::BTreeMap;
use std::fmt::Write;

use flatwall_core::cross::PlaneDrawing;
use flatwall_core::graph::{Graph, MinorModel, VertexId};

const PALETTE: [&str; 12] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999",
    "#66c2a5", "#fc8d62", "#8da0cb", "#e78ac3",
];

pub enum Artifact<'a> {
    Graph(&'a Graph),
    /// A model drawn on its host graph.
    Model(&'a Graph, &'a MinorModel),
    Drawing(&'a PlaneDrawing),
}

fn edge_lines(out: &mut String, g: &Graph, witness: &BTreeMap<u32, (usize, usize)>) {
    for (e, u, v) in g.edges() {
        match witness.get(&e) {
            Some((i, j)) => writeln!(out, "  {u} -- {v} [penwidth=3, label=\"{i}-{j}\"];"),
            None => writeln!(out, "  {u} -- {v};"),
        }
        .unwrap();
    }
}

pub fn emit_dot(a: &Artifact) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    match a {
        Artifact::Graph(g) => {
            for v in g.vertices() {
                writeln!(out, "  {v};").unwrap();
            }
            edge_lines(&mut out, g, &BTreeMap::new());
        }
        Artifact::Model(g, m) => {
            let mut colour: BTreeMap<VertexId, usize> = BTreeMap::new();
            for (i, s) in m.branch_sets.iter().enumerate() {
                for &v in s {
                    colour.insert(v, i);
                }
            }
            for v in g.vertices() {
                match colour.get(&v) {
                    Some(&i) => writeln!(
                        out,
                        "  {v} [style=filled, fillcolor=\"{}\", class=\"b{i}\"];",
                        PALETTE[i % PALETTE.len()]
                    ),
                    None => writeln!(out, "  {v};"),
                }
                .unwrap();
            }
            let witness = m
                .witness_edges
                .iter()
                .map(|&(i, j, e)| (e, (i, j)))
                .collect();
            edge_lines(&mut out, g, &witness);
        }
        Artifact::Drawing(d) => {
            writeln!(out, "  // outer face: {}", join(&d.outer)).unwrap();
            for (v, around) in &d.rotation {
                writeln!(out, "  // rotation {v}: {}", join(around)).unwrap();
                writeln!(out, "  {v};").unwrap();
            }
            for (v, around) in &d.rotation {
                for &u in around.iter().filter(|&&u| *v < u) {
                    writeln!(out, "  {v} -- {u};").unwrap();
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

fn join(vs: &[VertexId]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

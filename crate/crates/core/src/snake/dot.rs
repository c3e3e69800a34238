use std::fmt::Write;

use super::{PerfectMatching, SnakeGraph};
use crate::triangulation::Triangulation;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: one cluster per tile with its diagonal dashed, matching
/// edges bold. Nodes are `v{k}`, edges carry `id="e{k}"`.
pub fn to_dot(g: &SnakeGraph, t: &Triangulation, matching: Option<&PerfectMatching>) -> String {
    let label = |a: usize| quote(&t.arc(a).label);
    let mut out = String::new();
    writeln!(out, "graph snake {{").unwrap();
    writeln!(out, "  node [shape=circle, width=0.15, label=\"\"];").unwrap();
    let mut placed = vec![false; g.vertex_count()];
    for (j, tile) in g.tiles().iter().enumerate() {
        writeln!(out, "  subgraph cluster_t{j} {{").unwrap();
        writeln!(out, "    label={};", quote(&format!("tile {}", j + 1))).unwrap();
        for &e in &tile.edges {
            for v in g.edge(e).ends {
                if !placed[v] {
                    placed[v] = true;
                    writeln!(out, "    v{v};").unwrap();
                }
            }
        }
        let [a, b] = tile.diagonal_ends;
        writeln!(out, "    v{a} -- v{b} [style=dashed, label={}];", label(tile.diagonal)).unwrap();
        writeln!(out, "  }}").unwrap();
    }
    for v in (0..g.vertex_count()).filter(|&v| !placed[v]) {
        writeln!(out, "  v{v};").unwrap();
    }
    for (k, e) in g.edges().iter().enumerate() {
        let bold = if matching.is_some_and(|p| p.contains(k)) {
            ", style=bold, penwidth=3"
        } else {
            ""
        };
        writeln!(
            out,
            "  v{} -- v{} [id=\"e{k}\", label={}{bold}];",
            e.ends[0],
            e.ends[1],
            label(e.label)
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{build_snake_graph, minimal_matching, CrossingSequence};
    use super::*;

    #[test]
    fn dot_lists_every_edge_once() {
        let t = example();
        let g = build_snake_graph(&t, &CrossingSequence::new(GAMMA.to_vec(), Some(0))).unwrap();
        let p = minimal_matching(&g);
        let dot = to_dot(&g, &t, Some(&p));
        for k in 0..g.edges().len() {
            assert_eq!(dot.matches(&format!("id=\"e{k}\"")).count(), 1);
        }
        assert_eq!(dot.matches("style=dashed").count(), 7);
        assert_eq!(dot.matches("style=bold").count(), p.len());
        assert_eq!(dot.matches("subgraph cluster_").count(), 7);
    }
}

// Copyright 2026 The aqss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Graphviz output for AS graphs and scheme trees.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::cover::AsGraph;
use crate::scheme::SchemeTree;

pub enum DotSubject<'a> {
    Graph(&'a AsGraph),
    Scheme(&'a SchemeTree),
}

/// Renders DOT text. `labels` overrides the text of vertex ids (graph) or
/// pre-order node ids (scheme).
pub fn render_dot(subject: DotSubject<'_>, labels: &BTreeMap<usize, String>) -> String {
    match subject {
        DotSubject::Graph(g) => render_graph(g, labels),
        DotSubject::Scheme(t) => render_scheme(t, labels),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn render_graph(graph: &AsGraph, labels: &BTreeMap<usize, String>) -> String {
    let mut out = String::from("graph as_graph {\n  node [shape=ellipse];\n");
    for v in 0..graph.vertex_count() {
        let label = labels.get(&v).cloned().unwrap_or_else(|| format!("v{v}"));
        writeln!(out, "  v{v} [label=\"{}\"];", escape(&label)).unwrap();
    }
    for (a, b) in graph.edges() {
        writeln!(out, "  v{a} -- v{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn render_scheme(tree: &SchemeTree, labels: &BTreeMap<usize, String>) -> String {
    let mut nodes = String::new();
    let mut edges = String::new();
    let mut next = 0;
    emit(tree, None, labels, &mut next, &mut nodes, &mut edges);
    format!("digraph scheme {{\n  node [shape=box];\n{nodes}{edges}}}\n")
}

fn emit(
    tree: &SchemeTree,
    parent: Option<usize>,
    labels: &BTreeMap<usize, String>,
    next: &mut usize,
    nodes: &mut String,
    edges: &mut String,
) {
    let id = *next;
    *next += 1;
    let (default, shape) = match tree {
        SchemeTree::Threshold { k, n, .. } => (format!("(({k},{n}))"), "box"),
        SchemeTree::Player { owner } => (owner.to_string(), "ellipse"),
        SchemeTree::Resident { index } => (format!("dealer (resident#{index})"), "doubleoctagon"),
    };
    let label = labels.get(&id).cloned().unwrap_or(default);
    writeln!(nodes, "  n{id} [label=\"{}\", shape={shape}];", escape(&label)).unwrap();
    if let Some(p) = parent {
        writeln!(edges, "  n{p} -> n{id};").unwrap();
    }
    for child in tree.children() {
        emit(child, Some(id), labels, next, nodes, edges);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::AccessStructure;
    use crate::cover::{build_as_graph, exact_min_clique_cover};
    use crate::scheme::build_scheme;

    #[test]
    fn single_vertex_graph() {
        let g = AsGraph::from_edges(1, &[]).unwrap();
        let labels = BTreeMap::from([(0, "AB".to_string())]);
        assert_eq!(
            render_dot(DotSubject::Graph(&g), &labels),
            "graph as_graph {\n  node [shape=ellipse];\n  v0 [label=\"AB\"];\n}\n"
        );
    }

    #[test]
    fn bridged_triangles_has_six_nodes_and_seven_edges() {
        let g = AsGraph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]).unwrap();
        let names = ["α", "β", "χ", "δ", "ε", "φ"];
        let labels = names.iter().enumerate().map(|(i, n)| (i, n.to_string())).collect();
        let dot = render_dot(DotSubject::Graph(&g), &labels);
        assert_eq!(dot.matches("[label=").count(), 6);
        assert_eq!(dot.matches(" -- ").count(), 7);
        assert!(dot.contains("v2 [label=\"χ\"]"));
    }

    #[test]
    fn two_class_structure_tree_has_dealer_leaf() {
        let g = AccessStructure::compact(&["ABC", "BD", "EFG"]).unwrap();
        let c = exact_min_clique_cover(&build_as_graph(&g)).unwrap();
        let tree = build_scheme(&g, &c).unwrap();
        let dot = render_dot(DotSubject::Scheme(&tree), &BTreeMap::new());
        assert!(dot.starts_with("digraph scheme {"));
        assert!(dot.contains("label=\"dealer (resident#0)\""));
        assert!(dot.contains("n0 [label=\"((2,3))\""));
        assert_eq!(dot.matches(" -> ").count(), 15);
    }

    #[test]
    fn labels_are_escaped() {
        let g = AsGraph::from_edges(1, &[]).unwrap();
        let labels = BTreeMap::from([(0, "a\"b".to_string())]);
        assert!(render_dot(DotSubject::Graph(&g), &labels).contains("a\\\"b"));
    }
}

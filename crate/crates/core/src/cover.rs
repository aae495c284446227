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

//! Access-structure graphs and partial link classifications.
//!
//! A partial link classification is a partition of the AS graph into cliques;
//! its smallest size is λ. The exact solver colors the complement graph, the
//! greedy one grows cliques from high-degree vertices.

use std::collections::VecDeque;

use serde::Serialize;

use crate::access::AccessStructure;
use crate::error::{Error, Result};

/// Default vertex cap for [`exact_min_clique_cover`].
pub const DEFAULT_VERTEX_CAP: usize = 20;

/// Upper bound on classifications returned by [`all_min_clique_covers`].
pub const DEFAULT_ENUMERATION_LIMIT: usize = 10_000;

/// Undirected graph with one vertex per minimal authorized set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsGraph {
    adjacency: Vec<Vec<bool>>,
}

impl AsGraph {
    /// Graph on `n` vertices with the given undirected edges. Self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidClassification(format!("bad edge ({a},{b})")));
            }
            adjacency[a][b] = true;
            adjacency[b][a] = true;
        }
        Ok(AsGraph { adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].iter().filter(|&&e| e).count()
    }

    /// Edges (a, b) with a < b, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.adjacency[a][b])
            .collect()
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &a)| vertices[i + 1..].iter().all(|&b| self.adjacency[a][b]))
    }

    pub fn is_complete(&self) -> bool {
        let all: Vec<usize> = (0..self.vertex_count()).collect();
        self.is_clique(&all)
    }
}

pub fn build_as_graph(structure: &AccessStructure) -> AsGraph {
    let sets = structure.minimal_sets();
    let n = sets.len();
    let mut adjacency = vec![vec![false; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let overlap = !sets[a].is_disjoint(&sets[b]);
            adjacency[a][b] = overlap;
            adjacency[b][a] = overlap;
        }
    }
    AsGraph { adjacency }
}

/// A partition of the vertices into cliques. Classes are sorted by their
/// smallest vertex and each class is sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialLinkClassification {
    classes: Vec<Vec<usize>>,
}

impl PartialLinkClassification {
    /// Validates that `classes` partitions the graph's vertices into cliques.
    pub fn new(graph: &AsGraph, classes: Vec<Vec<usize>>) -> Result<Self> {
        let n = graph.vertex_count();
        let mut seen = vec![false; n];
        for class in &classes {
            if class.is_empty() {
                return Err(Error::InvalidClassification("empty class".into()));
            }
            for &v in class {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidClassification(format!(
                        "vertex {v} is out of range or repeated"
                    )));
                }
            }
            if !graph.is_clique(class) {
                return Err(Error::InvalidClassification(format!("class {class:?} is not a clique")));
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidClassification(format!("vertex {v} is not covered")));
        }
        Ok(Self::canonical(classes))
    }

    fn canonical(mut classes: Vec<Vec<usize>>) -> Self {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_by_key(|c| c[0]);
        PartialLinkClassification { classes }
    }

    fn from_assignment(assignment: &[usize]) -> Self {
        let count = assignment.iter().max().map_or(0, |m| m + 1);
        let mut classes = vec![Vec::new(); count];
        for (v, &c) in assignment.iter().enumerate() {
            classes[c].push(v);
        }
        Self::canonical(classes)
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn size(&self) -> usize {
        self.classes.len()
    }

    /// Property (b): every two classes have a non-adjacent cross pair.
    pub fn is_separated(&self, graph: &AsGraph) -> bool {
        self.classes.iter().enumerate().all(|(i, a)| {
            self.classes[i + 1..]
                .iter()
                .all(|b| a.iter().any(|&x| b.iter().any(|&y| !graph.adjacent(x, y))))
        })
    }

    /// Merges pairs of classes whose union is a clique until none remain.
    fn merge_normalized(self, graph: &AsGraph) -> Self {
        let mut classes = self.classes;
        'outer: loop {
            for i in 0..classes.len() {
                for j in i + 1..classes.len() {
                    let mut union = classes[i].clone();
                    union.extend_from_slice(&classes[j]);
                    if graph.is_clique(&union) {
                        classes[i] = union;
                        classes.remove(j);
                        continue 'outer;
                    }
                }
            }
            break;
        }
        Self::canonical(classes)
    }
}

/// Minimum clique cover via exact coloring of the complement graph.
pub fn exact_min_clique_cover(graph: &AsGraph) -> Result<PartialLinkClassification> {
    exact_min_clique_cover_capped(graph, DEFAULT_VERTEX_CAP)
}

pub fn exact_min_clique_cover_capped(graph: &AsGraph, cap: usize) -> Result<PartialLinkClassification> {
    let n = graph.vertex_count();
    if n > cap || n > 64 {
        return Err(Error::VertexCapExceeded {
            size: n,
            cap: cap.min(64),
        });
    }
    if n == 0 {
        return Ok(PartialLinkClassification { classes: vec![] });
    }
    let solver = CoverSearch::new(graph);
    let size = solver.minimum_size();

    let mut found = None;
    solver.search_in_index_order(size, &mut |a| {
        found = Some(a.to_vec());
        false
    });
    let assignment = found.expect("a cover of minimum size exists");
    Ok(PartialLinkClassification::from_assignment(&assignment).merge_normalized(graph))
}

/// Every minimum clique cover, in lexicographic order of the class assignment.
pub fn all_min_clique_covers(graph: &AsGraph, cap: usize, limit: usize) -> Result<Vec<PartialLinkClassification>> {
    let n = graph.vertex_count();
    if n > cap || n > 64 {
        return Err(Error::VertexCapExceeded {
            size: n,
            cap: cap.min(64),
        });
    }
    if n == 0 {
        return Ok(vec![]);
    }
    let solver = CoverSearch::new(graph);
    let size = solver.minimum_size();
    let mut out = Vec::new();
    solver.search_in_index_order(size, &mut |a| {
        out.push(PartialLinkClassification::from_assignment(a));
        out.len() < limit
    });
    Ok(out)
}

/// Grows cliques from the highest-degree uncovered vertex (ties: lowest index).
pub fn greedy_clique_cover(graph: &AsGraph) -> PartialLinkClassification {
    let n = graph.vertex_count();
    let mut covered = vec![false; n];
    let by_degree = |cands: &mut Vec<usize>| {
        cands.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    };
    let mut classes = Vec::new();
    loop {
        let mut uncovered: Vec<usize> = (0..n).filter(|&v| !covered[v]).collect();
        if uncovered.is_empty() {
            break;
        }
        by_degree(&mut uncovered);
        let seed = uncovered[0];
        let mut clique = vec![seed];
        covered[seed] = true;
        loop {
            let mut candidates: Vec<usize> = (0..n)
                .filter(|&v| !covered[v] && clique.iter().all(|&c| graph.adjacent(c, v)))
                .collect();
            if candidates.is_empty() {
                break;
            }
            by_degree(&mut candidates);
            covered[candidates[0]] = true;
            clique.push(candidates[0]);
        }
        classes.push(clique);
    }
    PartialLinkClassification::canonical(classes).merge_normalized(graph)
}

/// λ(Γ), the size of a minimum partial link classification.
pub fn lambda(structure: &AccessStructure) -> Result<usize> {
    Ok(exact_min_clique_cover(&build_as_graph(structure))?.size())
}

/// Number of connected components, s.
pub fn component_count(graph: &AsGraph) -> usize {
    let n = graph.vertex_count();
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for (w, done) in seen.iter_mut().enumerate() {
                if graph.adjacent(v, w) && !*done {
                    *done = true;
                    queue.push_back(w);
                }
            }
        }
    }
    count
}

/// Backtracking assignment of vertices to classes; a vertex may join a class
/// only if it is adjacent to every member.
struct CoverSearch {
    n: usize,
    adjacency: Vec<u64>,
}

impl CoverSearch {
    fn new(graph: &AsGraph) -> Self {
        let n = graph.vertex_count();
        let adjacency = (0..n)
            .map(|a| (0..n).filter(|&b| graph.adjacent(a, b)).fold(0u64, |m, b| m | 1 << b))
            .collect();
        CoverSearch { n, adjacency }
    }

    /// Iterative deepening from the component-count lower bound, visiting
    /// vertices with the most non-neighbours first.
    fn minimum_size(&self) -> usize {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (self.adjacency[v].count_ones(), v));
        let components = {
            let graph = AsGraph {
                adjacency: (0..self.n)
                    .map(|a| (0..self.n).map(|b| self.adjacency[a] >> b & 1 == 1).collect())
                    .collect(),
            };
            component_count(&graph)
        };
        (components.max(1)..=self.n)
            .find(|&k| {
                let mut classes = Vec::with_capacity(k);
                self.feasible(&order, 0, k, &mut classes)
            })
            .unwrap_or(self.n)
    }

    fn feasible(&self, order: &[usize], pos: usize, k: usize, classes: &mut Vec<u64>) -> bool {
        let Some(&v) = order.get(pos) else {
            return true;
        };
        for c in 0..classes.len() {
            if classes[c] & !self.adjacency[v] == 0 {
                classes[c] |= 1 << v;
                if self.feasible(order, pos + 1, k, classes) {
                    return true;
                }
                classes[c] &= !(1 << v);
            }
        }
        if classes.len() < k {
            classes.push(1 << v);
            if self.feasible(order, pos + 1, k, classes) {
                return true;
            }
            classes.pop();
        }
        false
    }

    /// Enumerates covers with exactly `k` classes as restricted-growth class
    /// assignments in lexicographic order. `visit` returns false to stop.
    fn search_in_index_order(&self, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
        let mut assignment = vec![0; self.n];
        let mut classes = Vec::with_capacity(k);
        self.enumerate(0, k, &mut classes, &mut assignment, visit);
    }

    fn enumerate(
        &self,
        v: usize,
        k: usize,
        classes: &mut Vec<u64>,
        assignment: &mut [usize],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if v == self.n {
            return classes.len() < k || visit(assignment);
        }
        // Remaining vertices cannot open enough new classes.
        if classes.len() + (self.n - v) < k {
            return true;
        }
        for c in 0..classes.len() {
            if classes[c] & !self.adjacency[v] == 0 {
                classes[c] |= 1 << v;
                assignment[v] = c;
                let go_on = self.enumerate(v + 1, k, classes, assignment, visit);
                classes[c] &= !(1 << v);
                if !go_on {
                    return false;
                }
            }
        }
        if classes.len() < k {
            classes.push(1 << v);
            assignment[v] = classes.len() - 1;
            let go_on = self.enumerate(v + 1, k, classes, assignment, visit);
            classes.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// α, β, χ, δ, ε, φ = 0..6
    fn bridged_triangles() -> AsGraph {
        AsGraph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]).unwrap()
    }

    fn complete(n: usize) -> AsGraph {
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        AsGraph::from_edges(n, &edges).unwrap()
    }

    /// Oracle: minimum over all set partitions whose blocks are cliques.
    fn brute_force_min(graph: &AsGraph) -> usize {
        fn rec(g: &AsGraph, v: usize, blocks: &mut Vec<Vec<usize>>, best: &mut usize) {
            if v == g.vertex_count() {
                if blocks.iter().all(|b| g.is_clique(b)) {
                    *best = (*best).min(blocks.len());
                }
                return;
            }
            for i in 0..blocks.len() {
                blocks[i].push(v);
                rec(g, v + 1, blocks, best);
                blocks[i].pop();
            }
            blocks.push(vec![v]);
            rec(g, v + 1, blocks, best);
            blocks.pop();
        }
        let mut best = usize::MAX;
        rec(graph, 0, &mut Vec::new(), &mut best);
        best
    }

    #[test]
    fn as_graph_examples() {
        let g = AccessStructure::compact(&["ABC", "BD", "EFG"]).unwrap();
        let graph = build_as_graph(&g);
        assert_eq!(graph.vertex_count(), 3);
        assert_eq!(graph.edges(), vec![(0, 1)]);

        let g = AccessStructure::compact(&["ABC", "ADE", "BDF"]).unwrap();
        assert!(build_as_graph(&g).is_complete());

        let g = AccessStructure::compact(&["AB"]).unwrap();
        let graph = build_as_graph(&g);
        assert_eq!(graph.vertex_count(), 1);
        assert!(graph.edges().is_empty());
    }

    #[test]
    fn exact_cover_examples() {
        let c = exact_min_clique_cover(&bridged_triangles()).unwrap();
        assert_eq!(c.classes(), &[vec![0, 1, 2], vec![3, 4, 5]]);
        assert!(c.is_separated(&bridged_triangles()));

        assert_eq!(exact_min_clique_cover(&complete(5)).unwrap().size(), 1);
        let edgeless = AsGraph::from_edges(4, &[]).unwrap();
        assert_eq!(exact_min_clique_cover(&edgeless).unwrap().size(), 4);
    }

    #[test]
    fn exact_cover_respects_cap() {
        let graph = AsGraph::from_edges(21, &[]).unwrap();
        assert_eq!(
            exact_min_clique_cover(&graph),
            Err(Error::VertexCapExceeded { size: 21, cap: 20 })
        );
        assert_eq!(exact_min_clique_cover_capped(&graph, 30).unwrap().size(), 21);
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_clique_cover(&complete(4)).size(), 1);
        assert_eq!(greedy_clique_cover(&AsGraph::from_edges(3, &[]).unwrap()).size(), 3);
        let c = greedy_clique_cover(&bridged_triangles());
        assert!((2..=3).contains(&c.size()));
        assert_eq!(c.classes(), &[vec![0, 1], vec![2, 3], vec![4, 5]]);
    }

    #[test]
    fn lambda_examples() {
        for (sets, expected) in [
            (&["ABC", "ADE", "BDF"][..], 1),
            (&["ABC", "BD", "EFG"][..], 2),
            (&["ABC", "DE", "FGH"][..], 3),
        ] {
            assert_eq!(lambda(&AccessStructure::compact(sets).unwrap()).unwrap(), expected);
        }
    }

    #[test]
    fn component_examples() {
        assert_eq!(component_count(&bridged_triangles()), 1);
        assert_eq!(component_count(&AsGraph::from_edges(3, &[]).unwrap()), 3);
        let g = AccessStructure::compact(&["ABC", "DE", "FGH"]).unwrap();
        assert_eq!(component_count(&build_as_graph(&g)), 3);
    }

    #[test]
    fn all_covers_of_bridged_triangles() {
        let all = all_min_clique_covers(&bridged_triangles(), 20, 100).unwrap();
        assert_eq!(all.len(), 1);
        let square = AsGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let all = all_min_clique_covers(&square, 20, 100).unwrap();
        assert_eq!(
            all.iter().map(|c| c.classes().to_vec()).collect::<Vec<_>>(),
            vec![vec![vec![0, 1], vec![2, 3]], vec![vec![0, 3], vec![1, 2]]]
        );
    }

    #[test]
    fn classification_validation() {
        let g = bridged_triangles();
        assert!(PartialLinkClassification::new(&g, vec![vec![0, 1, 2], vec![3, 4, 5]]).is_ok());
        assert!(PartialLinkClassification::new(&g, vec![vec![0, 3], vec![1, 2, 4, 5]]).is_err());
        assert!(PartialLinkClassification::new(&g, vec![vec![0, 1, 2]]).is_err());
        assert!(PartialLinkClassification::new(&g, vec![vec![0, 1, 2], vec![2, 3, 4, 5]]).is_err());
    }

    fn arb_graph() -> impl Strategy<Value = AsGraph> {
        (1usize..=8).prop_flat_map(|n| {
            prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let pairs: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
                let edges: Vec<_> = pairs
                    .into_iter()
                    .zip(bits)
                    .filter(|(_, e)| *e)
                    .map(|(p, _)| p)
                    .collect();
                AsGraph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn exact_matches_brute_force(g in arb_graph()) {
            let exact = exact_min_clique_cover(&g).unwrap();
            prop_assert_eq!(exact.size(), brute_force_min(&g));
            prop_assert!(PartialLinkClassification::new(&g, exact.classes().to_vec()).is_ok());
            prop_assert!(exact.is_separated(&g));
            prop_assert!(exact.size() >= component_count(&g));
            prop_assert_eq!(exact.size() == 1, g.is_complete());
        }

        #[test]
        fn greedy_is_valid_upper_bound(g in arb_graph()) {
            let greedy = greedy_clique_cover(&g);
            prop_assert!(PartialLinkClassification::new(&g, greedy.classes().to_vec()).is_ok());
            prop_assert!(greedy.size() >= exact_min_clique_cover(&g).unwrap().size());
            prop_assert!(greedy.is_separated(&g));
        }

        #[test]
        fn all_covers_are_minimum_and_distinct(g in arb_graph()) {
            let size = exact_min_clique_cover(&g).unwrap().size();
            let all = all_min_clique_covers(&g, 20, 1000).unwrap();
            prop_assert!(!all.is_empty());
            for c in &all {
                prop_assert_eq!(c.size(), size);
                prop_assert!(PartialLinkClassification::new(&g, c.classes().to_vec()).is_ok());
            }
            let mut dedup = all.clone();
            dedup.dedup();
            prop_assert_eq!(dedup.len(), all.len());
        }
    }
}

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

//! Construction of assisted sharing schemes as trees of threshold nodes.
//!
//! With λ classes, the root is a ((λ, 2λ−1)) node whose first λ children are
//! per-class schemes and whose last λ−1 children stay with the dealer. A class
//! with r minimal sets is a ((r, 2r−1)) node: one ((|α|,|α|)) child per set plus
//! r−1 copies of a threshold scheme for a self-dual completion of the class.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::access::{AccessStructure, PlayerId, PlayerSet};
use crate::cover::{build_as_graph, exact_min_clique_cover, PartialLinkClassification};
use crate::error::{Error, Result};

/// ((k, n)): any k of n shares reconstruct. Quantum schemes need n < 2k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThresholdParams {
    k: usize,
    n: usize,
}

impl ThresholdParams {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n || n >= 2 * k {
            return Err(Error::InvalidThreshold { k, n });
        }
        Ok(ThresholdParams { k, n })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl fmt::Display for ThresholdParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({},{}))", self.k, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SchemeTree {
    Threshold {
        k: usize,
        n: usize,
        children: Vec<SchemeTree>,
    },
    Player {
        owner: PlayerId,
    },
    Resident {
        index: usize,
    },
}

impl SchemeTree {
    pub fn threshold(params: ThresholdParams, children: Vec<SchemeTree>) -> Result<Self> {
        if children.len() != params.n {
            return Err(Error::InvalidThreshold {
                k: params.k,
                n: children.len(),
            });
        }
        Ok(SchemeTree::Threshold {
            k: params.k,
            n: params.n,
            children,
        })
    }

    /// Checks node arities, quantum threshold bounds, and resident index uniqueness.
    pub fn validate(&self) -> Result<()> {
        let mut residents = Vec::new();
        self.walk(&mut |node| {
            if let SchemeTree::Resident { index } = node {
                residents.push(*index);
            }
        });
        let count = residents.len();
        residents.sort_unstable();
        residents.dedup();
        if residents.len() != count {
            return Err(Error::InvalidClassification("duplicate resident share index".into()));
        }
        self.validate_nodes()
    }

    fn validate_nodes(&self) -> Result<()> {
        if let SchemeTree::Threshold { k, n, children } = self {
            let params = ThresholdParams::new(*k, *n)?;
            if children.len() != params.n {
                return Err(Error::InvalidThreshold {
                    k: *k,
                    n: children.len(),
                });
            }
            for child in children {
                child.validate_nodes()?;
            }
        }
        Ok(())
    }

    pub fn params(&self) -> Option<ThresholdParams> {
        match self {
            SchemeTree::Threshold { k, n, .. } => Some(ThresholdParams { k: *k, n: *n }),
            _ => None,
        }
    }

    pub fn children(&self) -> &[SchemeTree] {
        match self {
            SchemeTree::Threshold { children, .. } => children,
            _ => &[],
        }
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a SchemeTree)) {
        visit(self);
        for child in self.children() {
            child.walk(visit);
        }
    }

    /// Leaves (player and resident) in depth-first order.
    pub fn leaves(&self) -> Vec<&SchemeTree> {
        let mut out = Vec::new();
        self.walk(&mut |node| {
            if !matches!(node, SchemeTree::Threshold { .. }) {
                out.push(node);
            }
        });
        out
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().len()
    }

    pub fn player_leaf_count(&self) -> usize {
        self.leaves()
            .iter()
            .filter(|l| matches!(l, SchemeTree::Player { .. }))
            .count()
    }

    pub fn threshold_params(&self) -> Vec<ThresholdParams> {
        let mut out = Vec::new();
        self.walk(&mut |node| out.extend(node.params()));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scheme trees serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let tree: SchemeTree = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        tree.validate()?;
        Ok(tree)
    }
}

/// Number of shares the dealer keeps.
pub fn resident_share_count(tree: &SchemeTree) -> usize {
    tree.leaves()
        .iter()
        .filter(|l| matches!(l, SchemeTree::Resident { .. }))
        .count()
}

/// Recognizes Γ whose minimal sets are exactly the k-subsets of an n-player
/// support with n < 2k.
pub fn detect_threshold_structure(structure: &AccessStructure) -> Option<(ThresholdParams, PlayerSet)> {
    let sets = structure.minimal_sets();
    let k = sets[0].len();
    if sets.iter().any(|s| s.len() != k) {
        return None;
    }
    let support = sets.iter().fold(PlayerSet::new(), |acc, s| acc.union(s));
    let params = ThresholdParams::new(k, support.len()).ok()?;
    (binomial(support.len(), k) == sets.len() as u128).then_some((params, support))
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Smallest self-dual threshold structure ((k, 2k−1)) on a support S such that
/// every minimal set of Γ contains at least k players of S. Supports are tried
/// by size, then lexicographically.
pub fn threshold_completion(structure: &AccessStructure) -> Option<(ThresholdParams, PlayerSet)> {
    let players: Vec<&PlayerId> = structure.universe().iter().collect();
    let sets = structure.minimal_sets();
    let mut size = 1;
    while size <= players.len() {
        let k = size.div_ceil(2);
        let mut found = None;
        for_each_combination(players.len(), size, &mut |chosen| {
            let support: PlayerSet = chosen.iter().map(|&i| players[i].clone()).collect();
            if sets.iter().all(|s| s.intersection(&support).len() >= k) {
                found = Some(support);
                return false;
            }
            true
        });
        if let Some(support) = found {
            let params = ThresholdParams::new(k, size).expect("2k-1 is a valid size");
            return Some((params, support));
        }
        size += 2;
    }
    None
}

/// Visits size-`k` index combinations of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            let go_on = rec(i + 1, n, k, cur, visit);
            cur.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), visit);
    }
}

fn and_gate(set: &PlayerSet) -> SchemeTree {
    let leaves: Vec<SchemeTree> = set.iter().map(|p| SchemeTree::Player { owner: p.clone() }).collect();
    SchemeTree::Threshold {
        k: leaves.len(),
        n: leaves.len(),
        children: leaves,
    }
}

/// Conventional scheme for one partially linked class.
pub fn build_class_scheme(class: &AccessStructure) -> Result<SchemeTree> {
    let sets = class.minimal_sets();
    if sets.len() == 1 {
        return Ok(and_gate(&sets[0]));
    }
    if !class.check_pairwise_overlap().is_empty() {
        return Err(Error::InvalidClassification(format!(
            "class {class} is not pairwise overlapping"
        )));
    }
    let (params, support) = threshold_completion(class).ok_or_else(|| Error::UnsupportedClassStructure {
        class: class.to_string(),
    })?;
    let completion = SchemeTree::Threshold {
        k: params.k(),
        n: params.n(),
        children: support
            .iter()
            .map(|p| SchemeTree::Player { owner: p.clone() })
            .collect(),
    };
    let r = sets.len();
    let mut children: Vec<SchemeTree> = sets.iter().map(and_gate).collect();
    children.extend(std::iter::repeat_n(completion, r - 1));
    SchemeTree::threshold(ThresholdParams::new(r, 2 * r - 1)?, children)
}

/// The assisted scheme for Γ under a partial link classification.
pub fn build_scheme(structure: &AccessStructure, classification: &PartialLinkClassification) -> Result<SchemeTree> {
    let graph = build_as_graph(structure);
    let checked = PartialLinkClassification::new(&graph, classification.classes().to_vec())?;
    let classes = checked.classes();
    let lambda = classes.len();
    let class_schemes = classes
        .iter()
        .map(|c| build_class_scheme(&structure.sub_structure(c)?))
        .collect::<Result<Vec<_>>>()?;
    if lambda == 1 {
        return Ok(class_schemes.into_iter().next().expect("one class"));
    }
    let mut children = class_schemes;
    children.extend((0..lambda - 1).map(|index| SchemeTree::Resident { index }));
    SchemeTree::threshold(ThresholdParams::new(lambda, 2 * lambda - 1)?, children)
}

/// Counts for the naive common-player embedding Γ′ = {α ∪ {X}}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialEmbeddingAnalysis {
    pub extra_player: PlayerId,
    pub completion: AccessStructure,
    pub r: usize,
    pub x: usize,
    pub naive_count: usize,
    pub better_count: usize,
    pub theorem_count: usize,
}

pub fn analyze_trivial_embedding(structure: &AccessStructure) -> Result<TrivialEmbeddingAnalysis> {
    let extra = fresh_player(structure.universe());
    let augmented = structure.with_common_player(&extra)?;
    let completion = augmented.maximal_structure()?;
    let x = completion.minimal_sets().iter().filter(|s| s.contains(&extra)).count();
    let r = structure.len();
    let lambda = exact_min_clique_cover(&build_as_graph(structure))?.size();
    let analysis = TrivialEmbeddingAnalysis {
        extra_player: extra,
        completion,
        r,
        x,
        naive_count: r + (r - 1) * x,
        better_count: r,
        theorem_count: lambda - 1,
    };
    debug_assert!(analysis.naive_count >= analysis.better_count);
    debug_assert!(analysis.better_count > analysis.theorem_count);
    Ok(analysis)
}

fn fresh_player(universe: &PlayerSet) -> PlayerId {
    std::iter::once("X".to_string())
        .chain((1..).map(|i| format!("X{i}")))
        .map(|l| PlayerId::new(l).expect("valid label"))
        .find(|p| !universe.contains(p))
        .expect("some label is free")
}

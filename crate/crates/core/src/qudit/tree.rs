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

//! Encoding and reconstruction of whole scheme trees.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::codes::{decode_and, decode_threshold, encode_and, encode_polynomial, HeldShare};
use super::field::FieldSpec;
use super::register::QuditRegister;
use crate::access::{PlayerId, PlayerSet};
use crate::error::{Error, Result};
use crate::scheme::{SchemeTree, ThresholdParams};

pub const SECRET_LABEL: &str = "secret";
pub const REFERENCE_LABEL: &str = "reference";

/// Holder of a share.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    Player(PlayerId),
    Resident(usize),
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::Player(p) => write!(f, "{p}"),
            Owner::Resident(i) => write!(f, "dealer (resident#{i})"),
        }
    }
}

/// Who takes part in a reconstruction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Coalition {
    pub players: PlayerSet,
    pub residents: BTreeSet<usize>,
}

impl Coalition {
    pub fn players(players: PlayerSet) -> Self {
        Coalition {
            players,
            residents: BTreeSet::new(),
        }
    }

    /// `players` together with every resident share in `tree`.
    pub fn with_dealer(players: PlayerSet, tree: &SchemeTree) -> Self {
        let mut residents = BTreeSet::new();
        tree.walk(&mut |node| {
            if let SchemeTree::Resident { index } = node {
                residents.insert(*index);
            }
        });
        Coalition { players, residents }
    }

    pub fn holds(&self, owner: &Owner) -> bool {
        match owner {
            Owner::Player(p) => self.players.contains(p),
            Owner::Resident(i) => self.residents.contains(i),
        }
    }
}

/// Subsystem labels of the physical shares and their holders, in leaf order,
/// plus the environment subsystems that no coalition holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShareMap {
    entries: Vec<(String, Owner)>,
    environment: Vec<String>,
}

impl ShareMap {
    pub fn entries(&self) -> &[(String, Owner)] {
        &self.entries
    }

    pub fn environment(&self) -> &[String] {
        &self.environment
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn owner(&self, label: &str) -> Option<&Owner> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, o)| o)
    }

    /// Labels held by `coalition`, in leaf order.
    pub fn held_by(&self, coalition: &Coalition) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(_, o)| coalition.holds(o))
            .map(|(l, _)| l.clone())
            .collect()
    }

    /// Number of shares held by each owner.
    pub fn share_counts(&self) -> Vec<(Owner, usize)> {
        let mut counts: Vec<(Owner, usize)> = Vec::new();
        for (_, o) in &self.entries {
            match counts.iter_mut().find(|(x, _)| x == o) {
                Some((_, c)) => *c += 1,
                None => counts.push((o.clone(), 1)),
            }
        }
        counts.sort();
        counts
    }
}

/// A child position of a threshold node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeSlot {
    Leaf { label: String, owner: Owner },
    Node { id: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutNode {
    pub params: ThresholdParams,
    /// "root", "root/0", "root/0/2", ...
    pub path: String,
    pub slots: Vec<NodeSlot>,
    /// Environment subsystems of a chained ((m,m)) node (m−1 of them).
    pub environment: Vec<String>,
}

impl LayoutNode {
    pub fn is_chained(&self) -> bool {
        self.params.k() == self.params.n() && self.params.n() >= 2
    }
}

/// Flattened scheme tree. Nodes are numbered in pre-order, leaves q0, q1, ...
/// in depth-first order, environment subsystems e0, e1, ... in node order.
/// A bare leaf as the whole tree becomes a ((1,1)) node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeLayout {
    nodes: Vec<LayoutNode>,
}

impl SchemeLayout {
    pub fn new(tree: &SchemeTree) -> Result<Self> {
        tree.validate()?;
        let mut layout = SchemeLayout { nodes: Vec::new() };
        let mut leaf_counter = 0;
        match tree {
            SchemeTree::Threshold { .. } => {
                layout.add(tree, "root".into(), &mut leaf_counter)?;
            }
            leaf => {
                layout.nodes.push(LayoutNode {
                    params: ThresholdParams::new(1, 1)?,
                    path: "root".into(),
                    slots: vec![leaf_slot(leaf, &mut leaf_counter)],
                    environment: Vec::new(),
                });
            }
        }
        let mut env_counter = 0;
        for node in &mut layout.nodes {
            if node.is_chained() {
                node.environment = (0..node.params.n() - 1)
                    .map(|_| {
                        env_counter += 1;
                        format!("e{}", env_counter - 1)
                    })
                    .collect();
            }
        }
        Ok(layout)
    }

    fn add(&mut self, node: &SchemeTree, path: String, leaf_counter: &mut usize) -> Result<usize> {
        let id = self.nodes.len();
        let params = node.params().expect("threshold node");
        self.nodes.push(LayoutNode {
            params,
            path: path.clone(),
            slots: Vec::new(),
            environment: Vec::new(),
        });
        let mut slots = Vec::with_capacity(params.n());
        for (i, child) in node.children().iter().enumerate() {
            let slot = match child {
                SchemeTree::Threshold { .. } => NodeSlot::Node {
                    id: self.add(child, format!("{path}/{i}"), leaf_counter)?,
                },
                leaf => leaf_slot(leaf, leaf_counter),
            };
            slots.push(slot);
        }
        self.nodes[id].slots = slots;
        Ok(id)
    }

    pub fn nodes(&self) -> &[LayoutNode] {
        &self.nodes
    }

    pub fn share_map(&self) -> ShareMap {
        let mut entries = Vec::new();
        self.collect_leaves(0, &mut entries);
        let environment = self.nodes.iter().flat_map(|n| n.environment.iter().cloned()).collect();
        ShareMap { entries, environment }
    }

    fn collect_leaves(&self, id: usize, out: &mut Vec<(String, Owner)>) {
        for slot in &self.nodes[id].slots {
            match slot {
                NodeSlot::Leaf { label, owner } => out.push((label.clone(), owner.clone())),
                NodeSlot::Node { id } => self.collect_leaves(*id, out),
            }
        }
    }

    /// Whether `coalition` satisfies node `id` combinatorially.
    pub fn recoverable(&self, id: usize, coalition: &Coalition) -> bool {
        self.available(id, coalition).len() >= self.nodes[id].params.k()
    }

    fn available(&self, id: usize, coalition: &Coalition) -> Vec<usize> {
        self.nodes[id]
            .slots
            .iter()
            .enumerate()
            .filter(|(_, slot)| match slot {
                NodeSlot::Leaf { owner, .. } => coalition.holds(owner),
                NodeSlot::Node { id } => self.recoverable(*id, coalition),
            })
            .map(|(i, _)| i)
            .collect()
    }
}

fn leaf_slot(leaf: &SchemeTree, counter: &mut usize) -> NodeSlot {
    let owner = match leaf {
        SchemeTree::Player { owner } => Owner::Player(owner.clone()),
        SchemeTree::Resident { index } => Owner::Resident(*index),
        SchemeTree::Threshold { .. } => unreachable!("leaf expected"),
    };
    let label = format!("q{}", *counter);
    *counter += 1;
    NodeSlot::Leaf { label, owner }
}

fn node_label(id: usize) -> String {
    format!("n{id}")
}

/// Encodes the subsystem [`SECRET_LABEL`] of `state` with the scheme tree.
/// Other subsystems (such as a reference) are left untouched.
pub fn encode_tree(
    state: &QuditRegister,
    tree: &SchemeTree,
    field: FieldSpec,
    cap: usize,
) -> Result<(QuditRegister, ShareMap)> {
    let layout = SchemeLayout::new(tree)?;
    let encoded = encode_node(&layout, 0, state, SECRET_LABEL, field, cap)?;
    Ok((encoded, layout.share_map()))
}

fn encode_node(
    layout: &SchemeLayout,
    id: usize,
    state: &QuditRegister,
    target: &str,
    field: FieldSpec,
    cap: usize,
) -> Result<QuditRegister> {
    let node = &layout.nodes[id];
    let labels: Vec<String> = node
        .slots
        .iter()
        .map(|slot| match slot {
            NodeSlot::Leaf { label, .. } => label.clone(),
            NodeSlot::Node { id } => node_label(*id),
        })
        .collect();
    let (k, n) = (node.params.k(), node.params.n());
    let mut out = if node.is_chained() {
        encode_and(state, target, n, field, &labels, &node.environment, cap)?
    } else if n == 2 * k - 1 {
        encode_polynomial(state, target, node.params, field, &labels, cap)?
    } else {
        return Err(Error::UnsupportedNode { k, n });
    };
    for slot in &node.slots {
        if let NodeSlot::Node { id: child } = slot {
            out = encode_node(layout, *child, &out, &node_label(*child), field, cap)?;
        }
    }
    Ok(out)
}

/// Runs the recursive decoder for `coalition` on an encoded state. Returns the
/// resulting state and the label of the subsystem that carries the secret.
pub fn reconstruct_tree(
    state: &QuditRegister,
    tree: &SchemeTree,
    coalition: &Coalition,
) -> Result<(QuditRegister, String)> {
    let layout = SchemeLayout::new(tree)?;
    decode_node(&layout, 0, state.clone(), coalition)
}

fn decode_node(
    layout: &SchemeLayout,
    id: usize,
    mut state: QuditRegister,
    coalition: &Coalition,
) -> Result<(QuditRegister, String)> {
    let node = &layout.nodes[id];
    let k = node.params.k();
    let available = layout.available(id, coalition);
    if available.len() < k {
        return Err(Error::InsufficientShares {
            node: node.path.clone(),
            available: available.len(),
            needed: k,
        });
    }
    let mut held = Vec::with_capacity(k);
    for &point in &available[..k] {
        let label = match &node.slots[point] {
            NodeSlot::Leaf { label, .. } => label.clone(),
            NodeSlot::Node { id: child } => {
                let (next, label) = decode_node(layout, *child, state, coalition)?;
                state = next;
                label
            }
        };
        held.push(HeldShare { label, point });
    }
    let field = state.field();
    if node.is_chained() {
        let labels: Vec<String> = held.into_iter().map(|h| h.label).collect();
        decode_and(&state, &labels, field)
    } else {
        decode_threshold(&state, &held, node.params, field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::AccessStructure;
    use crate::cover::build_as_graph;
    use crate::cover::exact_min_clique_cover;
    use crate::qudit::codes::entangle_with_reference;
    use crate::qudit::density::{decoupling_distance, fidelity_with_max_entangled};
    use crate::qudit::register::DEFAULT_MAX_AMPLITUDES;
    use crate::qudit::C64;
    use crate::scheme::build_scheme;

    fn two_class_tree() -> SchemeTree {
        let g = AccessStructure::compact(&["ABC", "BD", "EFG"]).unwrap();
        let cover = exact_min_clique_cover(&build_as_graph(&g)).unwrap();
        build_scheme(&g, &cover).unwrap()
    }

    fn leaf(id: &str) -> SchemeTree {
        SchemeTree::Player {
            owner: PlayerId::new(id).unwrap(),
        }
    }

    #[test]
    fn two_of_two_tree_on_bell_state() {
        let f = FieldSpec::new(3).unwrap();
        let tree = SchemeTree::threshold(ThresholdParams::new(2, 2).unwrap(), vec![leaf("A"), leaf("B")]).unwrap();
        let (enc, map) = encode_tree(&entangle_with_reference(f), &tree, f, DEFAULT_MAX_AMPLITUDES).unwrap();
        assert_eq!(map.len(), 2);
        assert_eq!(map.environment(), &["e0"]);
        assert_eq!(enc.labels(), &["q0", "q1", "e0", REFERENCE_LABEL]);
        let (dec, label) =
            reconstruct_tree(&enc, &tree, &Coalition::players(PlayerSet::compact("AB").unwrap())).unwrap();
        assert!((fidelity_with_max_entangled(&dec, &label, REFERENCE_LABEL).unwrap() - 1.0).abs() < 1e-12);
        let err = reconstruct_tree(&enc, &tree, &Coalition::players(PlayerSet::compact("A").unwrap())).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientShares {
                node: "root".into(),
                available: 1,
                needed: 2
            }
        );
    }

    #[test]
    fn weighted_example_share_accounting() {
        let tree = two_class_tree();
        let layout = SchemeLayout::new(&tree).unwrap();
        let map = layout.share_map();
        assert_eq!(map.len(), 10);
        let count = |o: Owner| {
            map.share_counts()
                .into_iter()
                .find(|(x, _)| *x == o)
                .map(|(_, c)| c)
                .unwrap_or(0)
        };
        let p = |s: &str| Owner::Player(PlayerId::new(s).unwrap());
        assert_eq!(count(p("A")), 1);
        assert_eq!(count(p("B")), 3);
        assert_eq!(count(p("C")), 1);
        assert_eq!(count(p("D")), 1);
        assert_eq!(count(Owner::Resident(0)), 1);
        assert_eq!(layout.nodes()[0].path, "root");
    }

    #[test]
    fn weighted_example_reconstruction() {
        let tree = two_class_tree();
        let f = FieldSpec::new(3).unwrap();
        let (enc, map) = encode_tree(&entangle_with_reference(f), &tree, f, DEFAULT_MAX_AMPLITUDES).unwrap();
        assert_eq!(map.len(), 10);
        assert_eq!(map.environment().len(), 5);
        assert_eq!(enc.qudit_count(), 16);
        assert_eq!(enc.nonzero_count(), 3usize.pow(8));
        assert!((enc.norm() - 1.0).abs() < 1e-12);
        for set in ["ABC", "BD", "EFG"] {
            let coalition = Coalition::with_dealer(PlayerSet::compact(set).unwrap(), &tree);
            let (dec, label) = reconstruct_tree(&enc, &tree, &coalition).unwrap();
            assert!(
                (fidelity_with_max_entangled(&dec, &label, REFERENCE_LABEL).unwrap() - 1.0).abs() < 1e-9,
                "{set}"
            );
            assert!(map.owner(&label).is_some_and(|o| coalition.holds(o)));
        }
        let err = reconstruct_tree(&enc, &tree, &Coalition::players(PlayerSet::compact("EFG").unwrap())).unwrap_err();
        assert!(matches!(err, Error::InsufficientShares { ref node, .. } if node == "root"));
        // unauthorized coalitions are decoupled from the reference
        for set in ["ACDEF", "ABEG", "BCFG", "AB"] {
            let held = map.held_by(&Coalition::players(PlayerSet::compact(set).unwrap()));
            let keep: Vec<&str> = held.iter().map(String::as_str).collect();
            let d = decoupling_distance(&enc, &keep, REFERENCE_LABEL).unwrap();
            assert!(d < 1e-9, "{set}: {d}");
        }
        // an authorized coalition with the dealer is not
        let held = map.held_by(&Coalition::with_dealer(PlayerSet::compact("BD").unwrap(), &tree));
        let keep: Vec<&str> = held.iter().map(String::as_str).collect();
        assert!(decoupling_distance(&enc, &keep, REFERENCE_LABEL).unwrap() > 0.5);
    }

    #[test]
    fn encoding_is_an_isometry() {
        let tree = two_class_tree();
        let f = FieldSpec::new(3).unwrap();
        let basis = |s: u32| QuditRegister::basis(f, vec![SECRET_LABEL.into()], &[s]).unwrap();
        let images: Vec<QuditRegister> = (0..3)
            .map(|s| encode_tree(&basis(s), &tree, f, DEFAULT_MAX_AMPLITUDES).unwrap().0)
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                let ip: C64 = images[i].inner(&images[j]).unwrap();
                assert!((ip.re - expected).abs() < 1e-12 && ip.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bare_leaf_tree() {
        let f = FieldSpec::new(2).unwrap();
        let tree = leaf("A");
        let (enc, _) = encode_tree(&entangle_with_reference(f), &tree, f, DEFAULT_MAX_AMPLITUDES).unwrap();
        let (dec, label) =
            reconstruct_tree(&enc, &tree, &Coalition::players(PlayerSet::compact("A").unwrap())).unwrap();
        assert!((fidelity_with_max_entangled(&dec, &label, REFERENCE_LABEL).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resource_cap_is_reported() {
        let tree = two_class_tree();
        let f = FieldSpec::new(3).unwrap();
        let err = encode_tree(&entangle_with_reference(f), &tree, f, 1000).unwrap_err();
        assert!(matches!(err, Error::ResourceCap { .. }));
    }
}

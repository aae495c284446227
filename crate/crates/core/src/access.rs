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

//! Monotone access structures stored in antichain normal form.
//!
//! An [`AccessStructure`] keeps only its inclusion-minimal authorized sets,
//! sorted lexicographically, so monotonicity holds by construction. Operations
//! that enumerate subsets of the universe are capped at [`ENUMERATION_CAP`]
//! players.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest universe accepted by operations that scan all subsets.
pub const ENUMERATION_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PlayerId(String);

impl PlayerId {
    pub fn new(label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let bad = |c: char| c.is_whitespace() || matches!(c, ',' | '{' | '}' | ';' | '#');
        if label.is_empty() || label.chars().any(bad) {
            return Err(Error::InvalidPlayer(label));
        }
        Ok(PlayerId(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for PlayerId {
    type Error = Error;
    fn try_from(value: String) -> Result<Self> {
        PlayerId::new(value)
    }
}

impl From<PlayerId> for String {
    fn from(value: PlayerId) -> Self {
        value.0
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite set of players. Ordering is lexicographic over the sorted members.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlayerSet(BTreeSet<PlayerId>);

impl PlayerSet {
    pub fn new() -> Self {
        PlayerSet(BTreeSet::new())
    }

    /// Builds a set from labels, validating each one.
    pub fn from_labels<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        labels.into_iter().map(PlayerId::new).collect()
    }

    /// Compact notation: every character is one player, so `"ABC"` is `{A, B, C}`.
    pub fn compact(letters: &str) -> Result<Self> {
        letters.chars().map(|c| PlayerId::new(c.to_string())).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, player: &PlayerId) -> bool {
        self.0.contains(player)
    }

    pub fn insert(&mut self, player: PlayerId) -> bool {
        self.0.insert(player)
    }

    pub fn remove(&mut self, player: &PlayerId) -> bool {
        self.0.remove(player)
    }

    pub fn iter(&self) -> impl Iterator<Item = &PlayerId> + '_ {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &PlayerSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &PlayerSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &PlayerSet) -> PlayerSet {
        PlayerSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &PlayerSet) -> PlayerSet {
        PlayerSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &PlayerSet) -> PlayerSet {
        PlayerSet(self.0.difference(&other.0).cloned().collect())
    }

    pub fn labels(&self) -> Vec<String> {
        self.0.iter().map(|p| p.0.clone()).collect()
    }
}

impl FromIterator<PlayerId> for PlayerSet {
    fn from_iter<T: IntoIterator<Item = PlayerId>>(iter: T) -> Self {
        PlayerSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a PlayerSet {
    type Item = &'a PlayerId;
    type IntoIter = std::collections::btree_set::Iter<'a, PlayerId>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for PlayerSet {
    /// Single-character labels print compactly (`ABC`); anything else as `{Alice, Bob}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.0.is_empty() && self.0.iter().all(|p| p.0.chars().count() == 1) {
            for p in &self.0 {
                f.write_str(&p.0)?;
            }
            Ok(())
        } else {
            let labels: Vec<&str> = self.0.iter().map(|p| p.as_str()).collect();
            write!(f, "{{{}}}", labels.join(", "))
        }
    }
}

/// Γ: a universe of players and the antichain of minimal authorized sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AccessStructure {
    universe: PlayerSet,
    minimal_sets: Vec<PlayerSet>,
}

impl AccessStructure {
    /// Builds Γ over an explicit universe, reducing `sets` to antichain form.
    pub fn new(universe: PlayerSet, sets: Vec<PlayerSet>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::EmptyStructure);
        }
        for set in &sets {
            if set.is_empty() {
                return Err(Error::EmptyStructure);
            }
            if !set.is_subset(&universe) {
                return Err(Error::NotInUniverse(set.to_string()));
            }
        }
        Ok(AccessStructure {
            universe,
            minimal_sets: antichain(sets),
        })
    }

    /// Reduces a list of authorized sets to its inclusion-minimal members.
    /// The universe is the union of the sets. Empty input sets are ignored.
    pub fn reduce_to_minimal(sets: Vec<PlayerSet>) -> Result<Self> {
        let sets: Vec<PlayerSet> = sets.into_iter().filter(|s| !s.is_empty()).collect();
        let universe = sets.iter().fold(PlayerSet::new(), |acc, s| acc.union(s));
        Self::new(universe, sets)
    }

    /// Shorthand for tests and examples: `compact(&["ABC", "BD"])`.
    pub fn compact(sets: &[&str]) -> Result<Self> {
        let sets = sets.iter().map(|s| PlayerSet::compact(s)).collect::<Result<Vec<_>>>()?;
        Self::reduce_to_minimal(sets)
    }

    pub fn universe(&self) -> &PlayerSet {
        &self.universe
    }

    pub fn minimal_sets(&self) -> &[PlayerSet] {
        &self.minimal_sets
    }

    /// r, the number of minimal authorized sets.
    pub fn len(&self) -> usize {
        self.minimal_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minimal_sets.is_empty()
    }

    pub fn is_authorized(&self, coalition: &PlayerSet) -> Result<bool> {
        if !coalition.is_subset(&self.universe) {
            return Err(Error::NotInUniverse(coalition.to_string()));
        }
        Ok(self.minimal_sets.iter().any(|m| m.is_subset(coalition)))
    }

    /// Every unordered pair (j, k), j < k, of minimal sets with empty intersection.
    pub fn check_pairwise_overlap(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.minimal_sets.len() {
            for k in j + 1..self.minimal_sets.len() {
                if self.minimal_sets[j].is_disjoint(&self.minimal_sets[k]) {
                    out.push((j, k));
                }
            }
        }
        out
    }

    /// Inclusion-maximal unauthorized subsets of the universe, sorted.
    pub fn maximal_unauthorized_sets(&self) -> Result<Vec<PlayerSet>> {
        let idx = Indexer::new(&self.universe)?;
        let minimal = idx.masks(&self.minimal_sets);
        let mut out: Vec<PlayerSet> = maximal_unauthorized_masks(&minimal, idx.len())
            .into_iter()
            .map(|m| idx.set(m))
            .collect();
        out.sort();
        Ok(out)
    }

    /// A self-dual completion Γ_max with closure(Γ) ⊆ closure(Γ_max).
    ///
    /// Repeatedly picks the lexicographically smallest maximal unauthorized set
    /// whose complement is also unauthorized and adds that complement.
    pub fn maximal_structure(&self) -> Result<AccessStructure> {
        if let Some(&(j, k)) = self.check_pairwise_overlap().first() {
            return Err(Error::NoCloningViolated(
                self.minimal_sets[j].to_string(),
                self.minimal_sets[k].to_string(),
            ));
        }
        let idx = Indexer::new(&self.universe)?;
        let n = idx.len();
        let full = full_mask(n);
        let mut current = idx.masks(&self.minimal_sets);
        // Each round strictly grows the authorized family.
        for _ in 0..=(1u64 << n) {
            let mut defects: Vec<PlayerSet> = maximal_unauthorized_masks(&current, n)
                .into_iter()
                .filter(|&t| !mask_authorized(&current, full ^ t))
                .map(|t| idx.set(t))
                .collect();
            if defects.is_empty() {
                let sets = current.iter().map(|&m| idx.set(m)).collect();
                return AccessStructure::new(self.universe.clone(), sets);
            }
            defects.sort();
            let t = idx.mask(&defects[0]);
            current.push(full ^ t);
            current = antichain_masks(current);
        }
        Err(Error::UnsupportedStructure(
            "maximal completion search exhausted".into(),
        ))
    }

    /// Removes `excluded` from the universe and from every minimal set.
    pub fn restrict(&self, excluded: &PlayerId) -> Result<AccessStructure> {
        if !self.universe.contains(excluded) {
            return Err(Error::UnknownPlayer(excluded.to_string()));
        }
        let mut universe = self.universe.clone();
        universe.remove(excluded);
        let mut sets = Vec::with_capacity(self.minimal_sets.len());
        for set in &self.minimal_sets {
            let mut s = set.clone();
            s.remove(excluded);
            if s.is_empty() {
                return Err(Error::DegenerateRestriction(excluded.to_string()));
            }
            sets.push(s);
        }
        AccessStructure::new(universe, sets)
    }

    /// Γ restricted to the given minimal sets, over the players those sets mention.
    pub fn sub_structure(&self, indices: &[usize]) -> Result<AccessStructure> {
        let sets = indices
            .iter()
            .map(|&i| {
                self.minimal_sets
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidClassification(format!("no authorized set {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        AccessStructure::reduce_to_minimal(sets)
    }

    /// Γ′: `extra` added to the universe and to every minimal set.
    pub fn with_common_player(&self, extra: &PlayerId) -> Result<AccessStructure> {
        let mut universe = self.universe.clone();
        universe.insert(extra.clone());
        let sets = self
            .minimal_sets
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.insert(extra.clone());
                s
            })
            .collect();
        AccessStructure::new(universe, sets)
    }
}

impl fmt::Display for AccessStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self.minimal_sets.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", sets.join(", "))
    }
}

fn antichain(sets: Vec<PlayerSet>) -> Vec<PlayerSet> {
    let unique: BTreeSet<PlayerSet> = sets.into_iter().collect();
    let unique: Vec<PlayerSet> = unique.into_iter().collect();
    unique
        .iter()
        .filter(|s| !unique.iter().any(|o| o != *s && o.is_subset(s)))
        .cloned()
        .collect()
}

/// Bitmask view of a universe (bit i = i-th player in sorted order).
pub(crate) struct Indexer {
    players: Vec<PlayerId>,
}

impl Indexer {
    pub(crate) fn new(universe: &PlayerSet) -> Result<Self> {
        if universe.len() > ENUMERATION_CAP {
            return Err(Error::UniverseTooLarge {
                size: universe.len(),
                cap: ENUMERATION_CAP,
            });
        }
        Ok(Indexer {
            players: universe.iter().cloned().collect(),
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.players.len()
    }

    pub(crate) fn mask(&self, set: &PlayerSet) -> u32 {
        self.players
            .iter()
            .enumerate()
            .filter(|(_, p)| set.contains(p))
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    pub(crate) fn masks(&self, sets: &[PlayerSet]) -> Vec<u32> {
        sets.iter().map(|s| self.mask(s)).collect()
    }

    pub(crate) fn set(&self, mask: u32) -> PlayerSet {
        self.players
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect()
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn mask_authorized(minimal: &[u32], t: u32) -> bool {
    minimal.iter().any(|&m| m & !t == 0)
}

fn maximal_unauthorized_masks(minimal: &[u32], n: usize) -> Vec<u32> {
    let full = full_mask(n);
    (0..=full)
        .filter(|&t| {
            !mask_authorized(minimal, t) && (0..n).all(|i| t >> i & 1 == 1 || mask_authorized(minimal, t | 1 << i))
        })
        .collect()
}

fn antichain_masks(mut masks: Vec<u32>) -> Vec<u32> {
    masks.sort_unstable();
    masks.dedup();
    masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && o & m == o))
        .collect()
}

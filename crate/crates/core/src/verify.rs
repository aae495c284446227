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

//! Certification of built schemes by simulation.
//!
//! The secret is prepared maximally entangled with a reference qudit. A
//! coalition recovers the secret iff everything it does not hold is in product
//! with the reference; it learns nothing iff its own shares are.
//!
//! Two backends share one interface. The full-state backend encodes the whole
//! tree and runs both the decoupling test and the explicit decoder. The
//! compositional backend simulates each node realization alone and composes
//! all-or-nothing verdicts up the tree, which scales to trees whose global
//! state is far beyond the amplitude cap.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::access::{AccessStructure, PlayerSet};
use crate::cover::PartialLinkClassification;
use crate::error::{Error, Result};
use crate::qudit::{
    choose_field, decode_and, decode_threshold, decoupling_distance, encode_and, encode_polynomial, encode_tree,
    entangle_with_reference, fidelity_with_max_entangled, reconstruct_tree, Coalition, FieldSpec, HeldShare, NodeSlot,
    QuditRegister, SchemeLayout, ShareMap, DEFAULT_MAX_AMPLITUDES, REFERENCE_LABEL, SECRET_LABEL, TOLERANCE,
};
use crate::scheme::{resident_share_count, SchemeTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerificationMode {
    /// Whole-tree state simulation.
    Full,
    /// Node-by-node simulation with composed verdicts.
    Compositional,
    /// Full when the state fits both the amplitude cap and
    /// [`AUTO_FULL_LIMIT`], compositional otherwise.
    Auto,
}

impl FromStr for VerificationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(VerificationMode::Full),
            "compositional" => Ok(VerificationMode::Compositional),
            "auto" => Ok(VerificationMode::Auto),
            other => Err(Error::Config(format!("unknown verification mode {other:?}"))),
        }
    }
}

impl fmt::Display for VerificationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerificationMode::Full => "full",
            VerificationMode::Compositional => "compositional",
            VerificationMode::Auto => "auto",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub mode: VerificationMode,
    pub tolerance: f64,
    pub max_amplitudes: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: VerificationMode::Auto,
            tolerance: TOLERANCE,
            max_amplitudes: DEFAULT_MAX_AMPLITUDES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoverabilityEntry {
    pub set: Vec<String>,
    pub with_resident: bool,
    pub fidelity: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrivacyEntry {
    pub set: Vec<String>,
    pub trace_distance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportanceEntry {
    pub resident: usize,
    pub witness: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub lambda: usize,
    pub resident_shares: usize,
    pub qudits: usize,
    pub p: usize,
    pub recoverability: Vec<RecoverabilityEntry>,
    pub privacy: Vec<PrivacyEntry>,
    pub importance: Vec<ImportanceEntry>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Outcome of a recoverability test.
#[derive(Debug, Clone, PartialEq)]
pub struct Recovery {
    /// Verdict of the backend (decoupling test for the full state).
    pub recovered: bool,
    /// Fidelity of the decoded secret with the reference pair; 0 when the
    /// decoder cannot run.
    pub fidelity: f64,
    /// Trace distance of everything outside the coalition from product with
    /// the reference (full-state backend only).
    pub complement_distance: Option<f64>,
    /// Whether the explicit decoder ran.
    pub decoder_ran: bool,
    /// Decoder and decoupling verdicts agree.
    pub consistent: bool,
}

/// Outcome of a privacy test.
#[derive(Debug, Clone, PartialEq)]
pub struct Privacy {
    /// Trace distance from product with the reference (an upper bound for
    /// the compositional backend).
    pub trace_distance: f64,
    pub private: bool,
}

#[derive(Debug, Clone, PartialEq)]
struct LocalCheck {
    fidelity: f64,
    distance: f64,
}

/// Threshold k, share count n and held share positions of a local check.
type LocalKey = (usize, usize, Vec<usize>);

enum Backend {
    Full {
        state: QuditRegister,
        map: ShareMap,
    },
    Compositional {
        cache: RefCell<HashMap<LocalKey, LocalCheck>>,
    },
}

/// Simulation-backed oracle for one scheme tree.
pub struct Verifier {
    tree: SchemeTree,
    layout: SchemeLayout,
    universe: PlayerSet,
    field: FieldSpec,
    tolerance: f64,
    max_amplitudes: usize,
    backend: Backend,
}

/// Largest state that `Auto` simulates whole.
pub const AUTO_FULL_LIMIT: u128 = 1 << 17;

/// Stored amplitudes of the encoded reference-entangled state.
pub fn predicted_amplitudes(tree: &SchemeTree, field: FieldSpec) -> u128 {
    let digits: usize = tree.threshold_params().iter().map(|p| p.k() - 1).sum();
    (field.p() as u128).saturating_pow(digits as u32 + 1)
}

impl Verifier {
    pub fn new(universe: &PlayerSet, tree: &SchemeTree, options: &VerifyOptions) -> Result<Self> {
        let tolerance_ok = options.tolerance > 0.0 && options.tolerance <= 1e-3;
        if !tolerance_ok {
            return Err(Error::Config(format!(
                "tolerance {} outside (0, 1e-3]",
                options.tolerance
            )));
        }
        let layout = SchemeLayout::new(tree)?;
        let field = choose_field(tree, 2);
        let needed = predicted_amplitudes(tree, field);
        let fits = needed <= options.max_amplitudes as u128;
        let full = match options.mode {
            VerificationMode::Full if !fits => {
                return Err(Error::ResourceCap {
                    needed,
                    cap: options.max_amplitudes,
                })
            }
            VerificationMode::Full => true,
            VerificationMode::Compositional => false,
            VerificationMode::Auto => fits && needed <= AUTO_FULL_LIMIT,
        };
        let backend = if full {
            let (state, map) = encode_tree(&entangle_with_reference(field), tree, field, options.max_amplitudes)?;
            Backend::Full { state, map }
        } else {
            Backend::Compositional {
                cache: RefCell::new(HashMap::new()),
            }
        };
        Ok(Verifier {
            tree: tree.clone(),
            layout,
            universe: universe.clone(),
            field,
            tolerance: options.tolerance,
            max_amplitudes: options.max_amplitudes,
            backend,
        })
    }

    pub fn mode(&self) -> VerificationMode {
        match self.backend {
            Backend::Full { .. } => VerificationMode::Full,
            Backend::Compositional { .. } => VerificationMode::Compositional,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn tree(&self) -> &SchemeTree {
        &self.tree
    }

    /// The encoded global state (full-state backend only).
    pub fn state(&self) -> Option<(&QuditRegister, &ShareMap)> {
        match &self.backend {
            Backend::Full { state, map } => Some((state, map)),
            Backend::Compositional { .. } => None,
        }
    }

    fn check_players(&self, players: &PlayerSet) -> Result<()> {
        match players.iter().find(|p| !self.universe.contains(p)) {
            Some(p) => Err(Error::UnknownPlayer(p.to_string())),
            None => Ok(()),
        }
    }

    pub fn recoverability(&self, coalition: &Coalition) -> Result<Recovery> {
        self.check_players(&coalition.players)?;
        match &self.backend {
            Backend::Full { state, map } => {
                let held: BTreeSet<String> = map.held_by(coalition).into_iter().collect();
                let outside: Vec<&str> = state
                    .labels()
                    .iter()
                    .map(String::as_str)
                    .filter(|l| *l != REFERENCE_LABEL && !held.contains(*l))
                    .collect();
                let distance = decoupling_distance(state, &outside, REFERENCE_LABEL)?;
                let recovered = distance <= self.tolerance;
                let (fidelity, decoder_ran) = match reconstruct_tree(state, &self.tree, coalition) {
                    Ok((decoded, label)) => (fidelity_with_max_entangled(&decoded, &label, REFERENCE_LABEL)?, true),
                    Err(Error::InsufficientShares { .. }) => (0.0, false),
                    Err(e) => return Err(e),
                };
                let consistent = decoder_ran == recovered && (!decoder_ran || fidelity >= 1.0 - self.tolerance);
                Ok(Recovery {
                    recovered,
                    fidelity,
                    complement_distance: Some(distance),
                    decoder_ran,
                    consistent,
                })
            }
            Backend::Compositional { .. } => {
                let eval = self.evaluate(0, coalition)?;
                Ok(Recovery {
                    recovered: eval.recovered,
                    fidelity: if eval.recovered { eval.fidelity } else { 0.0 },
                    complement_distance: None,
                    decoder_ran: eval.recovered,
                    consistent: eval.consistent,
                })
            }
        }
    }

    /// Privacy of the shares held by `players` (resident shares excluded).
    pub fn privacy(&self, players: &PlayerSet) -> Result<Privacy> {
        self.check_players(players)?;
        let coalition = Coalition::players(players.clone());
        let trace_distance = match &self.backend {
            Backend::Full { state, map } => {
                let held = map.held_by(&coalition);
                let keep: Vec<&str> = held.iter().map(String::as_str).collect();
                decoupling_distance(state, &keep, REFERENCE_LABEL)?
            }
            Backend::Compositional { .. } => {
                let eval = self.evaluate(0, &coalition)?;
                if eval.recovered {
                    // a recovering coalition holds the purification of the reference
                    let p = self.field.p() as f64;
                    1.0 - 1.0 / (p * p)
                } else {
                    eval.leak
                }
            }
        };
        Ok(Privacy {
            trace_distance,
            private: trace_distance <= self.tolerance,
        })
    }

    fn evaluate(&self, id: usize, coalition: &Coalition) -> Result<NodeEval> {
        let node = &self.layout.nodes()[id];
        let mut held = Vec::new();
        let mut fidelity: f64 = 1.0;
        let mut leak = 0.0;
        let mut consistent = true;
        for (i, slot) in node.slots.iter().enumerate() {
            match slot {
                NodeSlot::Leaf { owner, .. } => {
                    if coalition.holds(owner) {
                        held.push(i);
                    }
                }
                NodeSlot::Node { id } => {
                    let child = self.evaluate(*id, coalition)?;
                    consistent &= child.consistent;
                    if child.recovered {
                        held.push(i);
                        fidelity = fidelity.min(child.fidelity);
                        leak += (1.0 - child.fidelity).max(0.0).sqrt();
                    } else {
                        leak += child.leak;
                    }
                }
            }
        }
        let k = node.params.k();
        let local = self.local_check(id, &held)?;
        if held.len() >= k {
            let ok = local.fidelity >= 1.0 - self.tolerance && local.distance <= self.tolerance;
            Ok(NodeEval {
                recovered: ok,
                fidelity: fidelity.min(local.fidelity),
                leak: 0.0,
                consistent: consistent && ok,
            })
        } else {
            let ok = local.distance <= self.tolerance;
            Ok(NodeEval {
                recovered: false,
                fidelity: 0.0,
                leak: leak + local.distance,
                consistent: consistent && ok,
            })
        }
    }

    /// Simulates one node realization with its children as single qudits.
    /// With at least k children held: decoder fidelity and the distance of
    /// the other subsystems from product with the reference. Otherwise: the
    /// distance of the held children.
    fn local_check(&self, id: usize, held: &[usize]) -> Result<LocalCheck> {
        let Backend::Compositional { cache } = &self.backend else {
            unreachable!("local checks belong to the compositional backend");
        };
        let node = &self.layout.nodes()[id];
        let (k, n) = (node.params.k(), node.params.n());
        let chained = node.is_chained();
        let key = (k, n, held.to_vec());
        if let Some(hit) = cache.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let field = self.field;
        let shares: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let env: Vec<String> = if chained {
            (0..n - 1).map(|i| format!("e{i}")).collect()
        } else {
            Vec::new()
        };
        let bell = entangle_with_reference(field);
        let state = if chained {
            encode_and(&bell, SECRET_LABEL, n, field, &shares, &env, self.max_amplitudes)?
        } else {
            encode_polynomial(&bell, SECRET_LABEL, node.params, field, &shares, self.max_amplitudes)?
        };
        let check = if held.len() >= k {
            let used: Vec<HeldShare> = held[..k]
                .iter()
                .map(|&i| HeldShare {
                    label: shares[i].clone(),
                    point: i,
                })
                .collect();
            let (decoded, label) = if chained {
                decode_and(&state, &shares, field)?
            } else {
                decode_threshold(&state, &used, node.params, field)?
            };
            let outside: Vec<&str> = state
                .labels()
                .iter()
                .map(String::as_str)
                .filter(|l| *l != REFERENCE_LABEL && !held.iter().any(|&i| shares[i] == *l))
                .collect();
            LocalCheck {
                fidelity: fidelity_with_max_entangled(&decoded, &label, REFERENCE_LABEL)?,
                distance: decoupling_distance(&state, &outside, REFERENCE_LABEL)?,
            }
        } else {
            let keep: Vec<&str> = held.iter().map(|&i| shares[i].as_str()).collect();
            LocalCheck {
                fidelity: 0.0,
                distance: decoupling_distance(&state, &keep, REFERENCE_LABEL)?,
            }
        };
        cache.borrow_mut().insert(key, check.clone());
        Ok(check)
    }
}

struct NodeEval {
    recovered: bool,
    fidelity: f64,
    /// Upper bound on the trace distance of the held shares from product
    /// with the node's input.
    leak: f64,
    consistent: bool,
}

fn set_labels(set: &PlayerSet) -> Vec<String> {
    set.labels()
}

/// Recoverability of `set`, optionally together with all resident shares.
pub fn verify_recoverability(
    verifier: &Verifier,
    set: &PlayerSet,
    include_resident: bool,
) -> Result<RecoverabilityEntry> {
    let coalition = if include_resident {
        Coalition::with_dealer(set.clone(), verifier.tree())
    } else {
        Coalition::players(set.clone())
    };
    let r = verifier.recoverability(&coalition)?;
    Ok(RecoverabilityEntry {
        set: set_labels(set),
        with_resident: include_resident,
        fidelity: r.fidelity,
        pass: r.recovered && r.consistent,
    })
}

pub fn verify_privacy(verifier: &Verifier, set: &PlayerSet) -> Result<PrivacyEntry> {
    let p = verifier.privacy(set)?;
    Ok(PrivacyEntry {
        set: set_labels(set),
        trace_distance: p.trace_distance,
        pass: p.private,
    })
}

fn resident_indices(tree: &SchemeTree) -> Vec<usize> {
    let mut out = Vec::new();
    tree.walk(&mut |node| {
        if let SchemeTree::Resident { index } = node {
            out.push(*index);
        }
    });
    out.sort_unstable();
    out
}

/// Searches the minimal authorized sets, in order, for one that fails with the
/// other resident shares but succeeds once `resident` is added.
pub fn check_importance(verifier: &Verifier, structure: &AccessStructure, resident: usize) -> Result<ImportanceEntry> {
    let others: BTreeSet<usize> = resident_indices(verifier.tree())
        .into_iter()
        .filter(|&i| i != resident)
        .collect();
    let mut all = others.clone();
    all.insert(resident);
    for set in structure.minimal_sets() {
        let without = verifier.recoverability(&Coalition {
            players: set.clone(),
            residents: others.clone(),
        })?;
        if without.recovered {
            continue;
        }
        let with = verifier.recoverability(&Coalition {
            players: set.clone(),
            residents: all.clone(),
        })?;
        if with.recovered {
            return Ok(ImportanceEntry {
                resident,
                witness: set_labels(set),
                pass: true,
            });
        }
    }
    Ok(ImportanceEntry {
        resident,
        witness: Vec::new(),
        pass: false,
    })
}

/// Disjoint pair of minimal authorized sets checked against cloning.
#[derive(Debug, Clone, PartialEq)]
pub struct NoCloningCheck {
    pub first: PlayerSet,
    pub second: PlayerSet,
    pub first_alone: bool,
    pub second_alone: bool,
    pub first_with_residents: bool,
    pub second_with_residents: bool,
}

impl NoCloningCheck {
    /// Neither set recovers alone; both recover with the resident shares.
    pub fn pass(&self) -> bool {
        !self.first_alone && !self.second_alone && self.first_with_residents && self.second_with_residents
    }
}

pub fn no_cloning_checks(verifier: &Verifier, structure: &AccessStructure) -> Result<Vec<NoCloningCheck>> {
    let sets = structure.minimal_sets();
    let recovers = |set: &PlayerSet, residents: bool| -> Result<bool> {
        let coalition = if residents {
            Coalition::with_dealer(set.clone(), verifier.tree())
        } else {
            Coalition::players(set.clone())
        };
        Ok(verifier.recoverability(&coalition)?.recovered)
    };
    let mut out = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].is_disjoint(&sets[j]) {
                continue;
            }
            out.push(NoCloningCheck {
                first: sets[i].clone(),
                second: sets[j].clone(),
                first_alone: recovers(&sets[i], false)?,
                second_alone: recovers(&sets[j], false)?,
                first_with_residents: recovers(&sets[i], true)?,
                second_with_residents: recovers(&sets[j], true)?,
            });
        }
    }
    Ok(out)
}

/// Full certification: every minimal authorized set (with the resident
/// shares) recovers, every maximal unauthorized set is private, and every
/// resident share is important.
pub fn verify_scheme(
    structure: &AccessStructure,
    classification: &PartialLinkClassification,
    tree: &SchemeTree,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let lambda = classification.size();
    let resident_shares = resident_share_count(tree);
    if resident_shares + 1 != lambda {
        return Err(Error::InvalidClassification(format!(
            "tree has {resident_shares} resident shares for λ = {lambda}"
        )));
    }
    let verifier = Verifier::new(structure.universe(), tree, options)?;
    let recoverability = structure
        .minimal_sets()
        .iter()
        .map(|set| verify_recoverability(&verifier, set, true))
        .collect::<Result<Vec<_>>>()?;
    let privacy = structure
        .maximal_unauthorized_sets()?
        .iter()
        .map(|set| verify_privacy(&verifier, set))
        .collect::<Result<Vec<_>>>()?;
    let importance = resident_indices(tree)
        .into_iter()
        .map(|q| check_importance(&verifier, structure, q))
        .collect::<Result<Vec<_>>>()?;
    let overall =
        recoverability.iter().all(|e| e.pass) && privacy.iter().all(|e| e.pass) && importance.iter().all(|e| e.pass);
    Ok(VerificationReport {
        lambda,
        resident_shares,
        qudits: tree.leaf_count(),
        p: verifier.field().p(),
        recoverability,
        privacy,
        importance,
        overall,
    })
}

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

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("access structure has no authorized sets")]
    EmptyStructure,
    #[error("invalid player label {0:?}")]
    InvalidPlayer(String),
    #[error("player {player} at line {line}, column {column} is not declared in the players line")]
    UndeclaredPlayer { player: String, line: usize, column: usize },
    #[error("player set {0} is not within the universe")]
    NotInUniverse(String),
    #[error("player {0} is not in the universe")]
    UnknownPlayer(String),
    #[error("restriction removing {0} leaves an empty authorized set")]
    DegenerateRestriction(String),
    #[error("universe of {size} players exceeds the enumeration cap of {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
    #[error("authorized sets {0} and {1} are disjoint; no self-dual completion exists")]
    NoCloningViolated(String, String),
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),
    #[error("AS graph has {size} vertices, above the exact-solver cap of {cap}")]
    VertexCapExceeded { size: usize, cap: usize },
    #[error("classification is inconsistent with the access structure: {0}")]
    InvalidClassification(String),
    #[error("class {class} has no threshold-expressible maximal completion")]
    UnsupportedClassStructure { class: String },
    #[error("invalid threshold parameters (({k},{n}))")]
    InvalidThreshold { k: usize, n: usize },
    #[error("(({k},{n})) nodes with k < n < 2k-1 are not supported")]
    UnsupportedNode { k: usize, n: usize },
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("state of {needed} amplitudes exceeds the cap of {cap}")]
    ResourceCap { needed: u128, cap: usize },
    #[error("insufficient shares at node {node}: {available} of {needed} available")]
    InsufficientShares {
        node: String,
        available: usize,
        needed: usize,
    },
    #[error("unknown subsystem label {0:?}")]
    UnknownLabel(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

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

//! Quantum secret sharing for general access structures.
//!
//! Pipeline: parse an access structure, classify its minimal sets into partial
//! link classes with a minimum clique cover, build a threshold scheme tree
//! with resident dealer shares, and verify it by simulation.

pub mod access;
pub mod cli;
pub mod cover;
pub mod dot;
pub mod dsl;
pub mod error;
pub mod qudit;
pub mod scheme;
pub mod verify;

pub use access::{AccessStructure, PlayerId, PlayerSet};
pub use cover::{AsGraph, PartialLinkClassification};
pub use error::{Error, Result};
pub use scheme::{SchemeTree, ThresholdParams};

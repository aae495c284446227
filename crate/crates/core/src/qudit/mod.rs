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

//! Dense state-vector simulation of qudits of prime dimension.
//!
//! Basis index layout: the first subsystem is the most significant digit.

mod codes;
mod density;
mod field;
mod register;
mod tree;

pub use codes::{
    decode_and, decode_threshold, encode_additive, encode_and, encode_polynomial, entangle_with_reference, Code,
    HeldShare,
};
pub use density::{
    decoupling_distance, fidelity_with_max_entangled, partial_trace, partial_trace_density, trace_distance,
    DensityOperator,
};
pub use field::{choose_field, FieldSpec};
pub use register::{QuditRegister, DEFAULT_MAX_AMPLITUDES};
pub use tree::{
    encode_tree, reconstruct_tree, Coalition, LayoutNode, NodeSlot, Owner, SchemeLayout, ShareMap, REFERENCE_LABEL,
    SECRET_LABEL,
};

pub type C64 = nalgebra::Complex<f64>;

/// Numeric contract for normalization, fidelity and trace-distance checks.
pub const TOLERANCE: f64 = 1e-9;

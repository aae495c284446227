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

use std::collections::{HashMap, HashSet};

use super::field::FieldSpec;
use super::{C64, TOLERANCE};
use crate::error::{Error, Result};

/// Default cap on the number of stored (nonzero) amplitudes (2^24).
pub const DEFAULT_MAX_AMPLITUDES: usize = 1 << 24;

/// Pure state of labelled qudits, stored as the sorted list of nonzero
/// amplitudes. Basis index layout is big-endian: the first label is the most
/// significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditRegister {
    field: FieldSpec,
    labels: Vec<String>,
    entries: Vec<(u64, C64)>,
}

/// Size of the index space p^count, or a resource error if it exceeds `cap`.
pub(crate) fn dimension(p: usize, count: usize, cap: usize) -> Result<usize> {
    let needed = (p as u128).checked_pow(count as u32).unwrap_or(u128::MAX);
    if needed > cap as u128 {
        return Err(Error::ResourceCap { needed, cap });
    }
    Ok(needed as usize)
}

fn index_space(p: usize, count: usize) -> Result<u64> {
    let needed = (p as u128).checked_pow(count as u32).unwrap_or(u128::MAX);
    if needed > u64::MAX as u128 {
        return Err(Error::ResourceCap {
            needed,
            cap: usize::MAX,
        });
    }
    Ok(needed as u64)
}

fn check_labels(labels: &[String]) -> Result<()> {
    let unique: HashSet<&String> = labels.iter().collect();
    if unique.len() != labels.len() {
        return Err(Error::DimensionMismatch("duplicate subsystem label".into()));
    }
    Ok(())
}

impl QuditRegister {
    /// From a dense amplitude vector of length p^labels.
    pub fn from_amplitudes(field: FieldSpec, labels: Vec<String>, amplitudes: Vec<C64>) -> Result<Self> {
        check_labels(&labels)?;
        let expected = dimension(field.p(), labels.len(), usize::MAX)?;
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {} qudits of dimension {}",
                amplitudes.len(),
                labels.len(),
                field.p()
            )));
        }
        let entries = amplitudes
            .into_iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(i, a)| (i as u64, a))
            .collect();
        Self::checked(field, labels, entries)
    }

    /// From (basis index, amplitude) pairs; repeated indices are summed.
    pub fn from_entries(field: FieldSpec, labels: Vec<String>, entries: Vec<(u64, C64)>) -> Result<Self> {
        check_labels(&labels)?;
        let space = index_space(field.p(), labels.len())?;
        if entries.iter().any(|&(i, _)| i >= space) {
            return Err(Error::DimensionMismatch("basis index out of range".into()));
        }
        Self::checked(field, labels, merge(entries))
    }

    fn checked(field: FieldSpec, labels: Vec<String>, entries: Vec<(u64, C64)>) -> Result<Self> {
        let reg = QuditRegister { field, labels, entries };
        if (reg.norm() - 1.0).abs() > TOLERANCE {
            return Err(Error::DimensionMismatch(format!("state norm {} is not 1", reg.norm())));
        }
        Ok(reg)
    }

    /// Computational basis state |digits⟩.
    pub fn basis(field: FieldSpec, labels: Vec<String>, digits: &[u32]) -> Result<Self> {
        if digits.len() != labels.len() || digits.iter().any(|&d| d as usize >= field.p()) {
            return Err(Error::DimensionMismatch("basis digits".into()));
        }
        index_space(field.p(), labels.len())?;
        let idx = digits.iter().fold(0u64, |acc, &d| acc * field.p() as u64 + d as u64);
        Self::from_entries(field, labels, vec![(idx, C64::new(1.0, 0.0))])
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Nonzero amplitudes in increasing basis-index order.
    pub fn entries(&self) -> &[(u64, C64)] {
        &self.entries
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    /// Dense amplitude vector; fails above `cap` entries.
    pub fn to_dense(&self, cap: usize) -> Result<Vec<C64>> {
        let dim = dimension(self.field.p(), self.labels.len(), cap)?;
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for &(i, a) in &self.entries {
            out[i as usize] = a;
        }
        Ok(out)
    }

    pub fn qudit_count(&self) -> usize {
        self.labels.len()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩ over identical subsystem layouts.
    pub fn inner(&self, other: &QuditRegister) -> Result<C64> {
        if self.labels != other.labels || self.field != other.field {
            return Err(Error::DimensionMismatch("registers differ in layout".into()));
        }
        let theirs: HashMap<u64, C64> = other.entries.iter().copied().collect();
        Ok(self
            .entries
            .iter()
            .filter_map(|(i, a)| theirs.get(i).map(|b| a.conj() * b))
            .sum())
    }

    pub fn relabel(&mut self, from: &str, to: &str) -> Result<()> {
        if self.labels.iter().any(|l| l == to) {
            return Err(Error::DimensionMismatch(format!("label {to} already present")));
        }
        let pos = self.position(from)?;
        self.labels[pos] = to.to_string();
        Ok(())
    }

    /// Replaces the subsystem `target` by `new_labels.len()` subsystems through
    /// the isometry |s⟩ ↦ Σ amp·|word⟩ given by `image(s)`. `cap` bounds the
    /// number of stored amplitudes of the result.
    pub(crate) fn replace_subsystem(
        &self,
        target: &str,
        new_labels: &[String],
        image: &dyn Fn(u32) -> Vec<(Vec<u32>, C64)>,
        cap: usize,
    ) -> Result<QuditRegister> {
        let p = self.field.p() as u64;
        let pos = self.position(target)?;
        for l in new_labels {
            if self.labels.iter().any(|x| x == l && x != target) {
                return Err(Error::DimensionMismatch(format!("label {l} already present")));
            }
        }
        let width = new_labels.len();
        index_space(p as usize, self.labels.len() - 1 + width)?;
        let images: Vec<Vec<(u64, C64)>> = (0..p as u32)
            .map(|s| {
                image(s)
                    .into_iter()
                    .map(|(word, amp)| (word.iter().fold(0u64, |acc, &d| acc * p + d as u64), amp))
                    .collect()
            })
            .collect();
        let branching = images.iter().map(Vec::len).max().unwrap_or(0);
        let needed = self.entries.len() as u128 * branching as u128;
        if needed > cap as u128 {
            return Err(Error::ResourceCap { needed, cap });
        }
        let suffix = p.pow((self.labels.len() - pos - 1) as u32);
        let block = p.pow(width as u32);
        let mut out = Vec::with_capacity(needed as usize);
        for &(idx, a) in &self.entries {
            let low = idx % suffix;
            let s = (idx / suffix) % p;
            let high = idx / suffix / p;
            for &(word, amp) in &images[s as usize] {
                out.push(((high * block + word) * suffix + low, a * amp));
            }
        }
        let mut labels = self.labels[..pos].to_vec();
        labels.extend_from_slice(new_labels);
        labels.extend_from_slice(&self.labels[pos + 1..]);
        Ok(QuditRegister {
            field: self.field,
            labels,
            entries: merge(out),
        })
    }

    /// Applies a basis permutation acting on the subsystems at `targets` only.
    /// `map` must be a bijection of GF(p)^len.
    pub(crate) fn permute_basis(&self, targets: &[usize], map: &dyn Fn(&[u32]) -> Vec<u32>) -> QuditRegister {
        let p = self.field.p() as u64;
        let m = self.labels.len();
        let strides: Vec<u64> = targets.iter().map(|&t| p.pow((m - t - 1) as u32)).collect();
        let local = (p as usize).pow(targets.len() as u32);
        let table: Vec<(u64, u64)> = (0..local)
            .map(|code| {
                let digits = to_digits(code, p as usize, targets.len());
                let image = map(&digits);
                let old: u64 = digits.iter().zip(&strides).map(|(&d, &s)| d as u64 * s).sum();
                let new: u64 = image.iter().zip(&strides).map(|(&d, &s)| d as u64 * s).sum();
                (old, new)
            })
            .collect();
        let mut entries: Vec<(u64, C64)> = self
            .entries
            .iter()
            .map(|&(idx, a)| {
                let code = strides.iter().fold(0u64, |acc, &s| acc * p + (idx / s) % p);
                let (old, new) = table[code as usize];
                (idx - old + new, a)
            })
            .collect();
        entries.sort_unstable_by_key(|e| e.0);
        QuditRegister {
            field: self.field,
            labels: self.labels.clone(),
            entries,
        }
    }
}

/// Sorts by index, sums duplicates, and drops exact zeros.
fn merge(mut entries: Vec<(u64, C64)>) -> Vec<(u64, C64)> {
    entries.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(u64, C64)> = Vec::with_capacity(entries.len());
    for (i, a) in entries {
        match out.last_mut() {
            Some((j, b)) if *j == i => *b += a,
            _ => out.push((i, a)),
        }
    }
    out.retain(|(_, a)| a.norm_sqr() > 0.0);
    out
}

pub(crate) fn to_digits(mut code: usize, p: usize, len: usize) -> Vec<u32> {
    let mut digits = vec![0u32; len];
    for d in digits.iter_mut().rev() {
        *d = (code % p) as u32;
        code /= p;
    }
    digits
}

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

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scheme::SchemeTree;

/// GF(p), also the local dimension of every qudit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    p: usize,
}

impl FieldSpec {
    pub fn new(p: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec { p })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        ((a as usize + b as usize) % self.p) as u32
    }

    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as usize + self.p - b as usize % self.p) % self.p) as u32
    }

    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub(crate) fn pow(&self, base: u32, exp: usize) -> u32 {
        (0..exp).fold(1 % self.p as u32, |acc, _| self.mul(acc, base))
    }

    pub(crate) fn inv(&self, a: u32) -> u32 {
        debug_assert!(!(a as usize).is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    /// Inverse of a square matrix over GF(p), or None if singular.
    pub(crate) fn invert(&self, matrix: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
        let n = matrix.len();
        let mut a: Vec<Vec<u32>> = matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| u32::from(i == j)));
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r][col] != 0)?;
            a.swap(col, pivot);
            let scale = self.inv(a[col][col]);
            for v in a[col].iter_mut() {
                *v = self.mul(*v, scale);
            }
            let pivot_row = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != col && row[col] != 0 {
                    let f = row[col];
                    for (x, &y) in row.iter_mut().zip(&pivot_row) {
                        *x = self.sub(*x, self.mul(f, y));
                    }
                }
            }
        }
        Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Smallest prime at least `secret_dim` and the largest n in the tree, and at
/// least 3 when the tree has a ((m,m)) node with m ≥ 2 (chained ((2,3)) links).
pub fn choose_field(tree: &SchemeTree, secret_dim: usize) -> FieldSpec {
    let params = tree.threshold_params();
    let largest = params.iter().map(|p| p.n()).max().unwrap_or(1);
    let chained = params.iter().any(|p| p.k() == p.n() && p.n() >= 2);
    let floor = largest.max(secret_dim).max(2).max(if chained { 3 } else { 2 });
    let p = (floor..).find(|&c| is_prime(c)).expect("primes are unbounded");
    FieldSpec { p }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::PlayerId;
    use crate::scheme::SchemeTree;

    fn leaf(l: &str) -> SchemeTree {
        SchemeTree::Player {
            owner: PlayerId::new(l).unwrap(),
        }
    }

    #[test]
    fn primes_only() {
        assert!(FieldSpec::new(2).is_ok());
        assert!(FieldSpec::new(7).is_ok());
        assert_eq!(FieldSpec::new(4), Err(Error::NotPrime(4)));
        assert_eq!(FieldSpec::new(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn field_choice() {
        let and = SchemeTree::Threshold {
            k: 2,
            n: 2,
            children: vec![leaf("A"), leaf("B")],
        };
        assert_eq!(choose_field(&and, 2).p(), 3);
        let single = SchemeTree::Threshold {
            k: 1,
            n: 1,
            children: vec![leaf("A")],
        };
        assert_eq!(choose_field(&single, 2).p(), 2);
        let maj = SchemeTree::Threshold {
            k: 3,
            n: 5,
            children: ["A", "B", "C", "D", "E"].iter().map(|l| leaf(l)).collect(),
        };
        assert_eq!(choose_field(&maj, 2).p(), 5);
        assert_eq!(choose_field(&and, 4).p(), 5);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn matrix_inverse_mod_p() {
        let f = FieldSpec::new(5).unwrap();
        let m = vec![vec![1, 0, 0], vec![1, 1, 1], vec![1, 2, 4]];
        let inv = f.invert(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v = (0..3).fold(0, |acc, t| f.add(acc, f.mul(m[i][t], inv[t][j])));
                assert_eq!(v, u32::from(i == j));
            }
        }
        assert!(f.invert(&[vec![1, 2], vec![2, 4]]).is_none());
    }
}

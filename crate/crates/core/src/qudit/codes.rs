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

//! Threshold codes over GF(p).
//!
//! ((k, 2k−1)) codes put the secret in the top coefficient of a degree k−1
//! polynomial evaluated at x = 0, 1, …, n−1.
//!
//! Two realizations of ((m, m)) are provided. The additive code (shares sum to
//! the secret) hides basis values only: a proper subset of its shares still
//! carries phase information about a quantum secret. The chained code used by
//! scheme trees is a quantum threshold scheme: a sequence of ((2,3)) codes in
//! which every link sends its third share to an environment subsystem that no
//! coalition ever holds.

use super::field::FieldSpec;
use super::register::{to_digits, QuditRegister};
use super::tree::{REFERENCE_LABEL, SECRET_LABEL};
use super::C64;
use crate::error::{Error, Result};
use crate::scheme::ThresholdParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Code {
    Polynomial { k: usize, n: usize },
    Additive { m: usize },
}

impl Code {
    /// ((1,1)) is treated as the (identity) polynomial code.
    pub fn for_params(params: ThresholdParams) -> Result<Code> {
        let (k, n) = (params.k(), params.n());
        if n == 2 * k - 1 {
            Ok(Code::Polynomial { k, n })
        } else if k == n {
            Ok(Code::Additive { m: n })
        } else {
            Err(Error::UnsupportedNode { k, n })
        }
    }

    pub fn share_count(&self) -> usize {
        match *self {
            Code::Polynomial { n, .. } => n,
            Code::Additive { m } => m,
        }
    }

    pub fn threshold(&self) -> usize {
        match *self {
            Code::Polynomial { k, .. } => k,
            Code::Additive { m } => m,
        }
    }

    fn random_digits(&self) -> usize {
        self.threshold() - 1
    }

    /// Codewords for secret `s`, one per assignment of the random digits.
    pub fn codewords(&self, field: FieldSpec, s: u32) -> Vec<Vec<u32>> {
        let p = field.p();
        let r = self.random_digits();
        (0..p.pow(r as u32))
            .map(|code| {
                let c = to_digits(code, p, r);
                match *self {
                    Code::Polynomial { k, n } => (0..n as u32)
                        .map(|x| {
                            let mut acc = field.mul(s, field.pow(x, k - 1));
                            for (j, &cj) in c.iter().enumerate() {
                                acc = field.add(acc, field.mul(cj, field.pow(x, j)));
                            }
                            acc
                        })
                        .collect(),
                    Code::Additive { .. } => {
                        let sum = c.iter().fold(0, |acc, &v| field.add(acc, v));
                        let mut word = c.clone();
                        word.push(field.sub(s, sum));
                        word
                    }
                }
            })
            .collect()
    }

    fn encode(
        &self,
        state: &QuditRegister,
        target: &str,
        field: FieldSpec,
        out_labels: &[String],
        cap: usize,
    ) -> Result<QuditRegister> {
        if state.field() != field {
            return Err(Error::DimensionMismatch(format!(
                "register has dimension {}, code works over GF({})",
                state.field().p(),
                field.p()
            )));
        }
        if out_labels.len() != self.share_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} output labels for {} shares",
                out_labels.len(),
                self.share_count()
            )));
        }
        let amp = C64::new((field.p() as f64).powf(-(self.random_digits() as f64) / 2.0), 0.0);
        let image = |s: u32| self.codewords(field, s).into_iter().map(|w| (w, amp)).collect();
        state.replace_subsystem(target, out_labels, &image, cap)
    }
}

/// Encodes subsystem `target` with the ((k, 2k−1)) polynomial code.
pub fn encode_polynomial(
    state: &QuditRegister,
    target: &str,
    params: ThresholdParams,
    field: FieldSpec,
    out_labels: &[String],
    cap: usize,
) -> Result<QuditRegister> {
    if params.n() != 2 * params.k() - 1 {
        return Err(Error::UnsupportedNode {
            k: params.k(),
            n: params.n(),
        });
    }
    if field.p() < params.n() {
        return Err(Error::DimensionMismatch(format!(
            "GF({}) has fewer than {} evaluation points",
            field.p(),
            params.n()
        )));
    }
    Code::Polynomial {
        k: params.k(),
        n: params.n(),
    }
    .encode(state, target, field, out_labels, cap)
}

/// Encodes subsystem `target` with the additive ((m, m)) code.
pub fn encode_additive(
    state: &QuditRegister,
    target: &str,
    m: usize,
    field: FieldSpec,
    out_labels: &[String],
    cap: usize,
) -> Result<QuditRegister> {
    if m == 0 {
        return Err(Error::InvalidThreshold { k: 0, n: 0 });
    }
    Code::Additive { m }.encode(state, target, field, out_labels, cap)
}

/// A share held for decoding: its subsystem label and its index in the node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeldShare {
    pub label: String,
    pub point: usize,
}

/// Decodes a threshold node from `k` of its shares with a basis permutation on
/// those shares only. Returns the new state and the label of the subsystem
/// that now carries the secret (the last held share).
pub fn decode_threshold(
    state: &QuditRegister,
    held: &[HeldShare],
    params: ThresholdParams,
    field: FieldSpec,
) -> Result<(QuditRegister, String)> {
    if state.field() != field {
        return Err(Error::DimensionMismatch("field differs from register".into()));
    }
    let code = Code::for_params(params)?;
    let k = code.threshold();
    let n = code.share_count();
    if held.len() < k {
        return Err(Error::InsufficientShares {
            node: params.to_string(),
            available: held.len(),
            needed: k,
        });
    }
    let mut held: Vec<HeldShare> = held[..k].to_vec();
    held.sort_by_key(|h| h.point);
    if held.windows(2).any(|w| w[0].point == w[1].point) || held.iter().any(|h| h.point >= n) {
        return Err(Error::DimensionMismatch(
            "held shares must be distinct shares of one node".into(),
        ));
    }
    let positions = held
        .iter()
        .map(|h| state.position(&h.label))
        .collect::<Result<Vec<_>>>()?;
    let designated = held[k - 1].label.clone();

    let out = match code {
        Code::Additive { .. } => state.permute_basis(&positions, &|y| {
            let mut out = y.to_vec();
            out[k - 1] = y.iter().fold(0, |acc, &v| field.add(acc, v));
            out
        }),
        Code::Polynomial { .. } => {
            let map = polynomial_decoder(field, k, n, &held)?;
            state.permute_basis(&positions, &|y| {
                map.iter()
                    .map(|row| {
                        row.iter()
                            .zip(y)
                            .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
                    })
                    .collect()
            })
        }
    };
    Ok((out, designated))
}

/// Linear map y ↦ (t + A⁻¹b·s, s) where (t, s) are the polynomial coefficients
/// interpolated from the held values and the unseen shares satisfy u = A·t + b·s.
fn polynomial_decoder(field: FieldSpec, k: usize, n: usize, held: &[HeldShare]) -> Result<Vec<Vec<u32>>> {
    let powers = |x: usize| -> Vec<u32> { (0..k).map(|j| field.pow(x as u32, j)).collect() };
    let vandermonde: Vec<Vec<u32>> = held.iter().map(|h| powers(h.point)).collect();
    let interpolate = field
        .invert(&vandermonde)
        .ok_or_else(|| Error::DimensionMismatch("evaluation points are not distinct in GF(p)".into()))?;
    let unseen: Vec<usize> = (0..n).filter(|x| !held.iter().any(|h| h.point == *x)).collect();
    // correction w = A⁻¹ b (length k−1)
    let correction: Vec<u32> = if k == 1 {
        Vec::new()
    } else {
        let a: Vec<Vec<u32>> = unseen.iter().map(|&x| powers(x)[..k - 1].to_vec()).collect();
        let b: Vec<u32> = unseen.iter().map(|&x| field.pow(x as u32, k - 1)).collect();
        let a_inv = field
            .invert(&a)
            .ok_or_else(|| Error::DimensionMismatch("singular unseen-share system".into()))?;
        a_inv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&b)
                    .fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
            })
            .collect()
    };
    // rows 0..k-1: t_j + w_j s ; row k-1: s
    let secret_row = &interpolate[k - 1];
    let mut map = Vec::with_capacity(k);
    for j in 0..k - 1 {
        map.push(
            interpolate[j]
                .iter()
                .zip(secret_row)
                .map(|(&t, &s)| field.add(t, field.mul(correction[j], s)))
                .collect(),
        );
    }
    map.push(secret_row.clone());
    Ok(map)
}

/// Encodes `target` with the chained quantum ((m, m)) code. Needs m−1
/// environment labels and p ≥ 3 when m ≥ 2.
pub fn encode_and(
    state: &QuditRegister,
    target: &str,
    m: usize,
    field: FieldSpec,
    out_labels: &[String],
    environment: &[String],
    cap: usize,
) -> Result<QuditRegister> {
    if m == 0 || out_labels.len() != m || environment.len() + 1 != m {
        return Err(Error::DimensionMismatch(format!(
            "((m,m)) chain with m = {m}, {} share labels, {} environment labels",
            out_labels.len(),
            environment.len()
        )));
    }
    if m == 1 {
        let one = ThresholdParams::new(1, 1)?;
        return encode_polynomial(state, target, one, field, out_labels, cap);
    }
    let link = ThresholdParams::new(2, 3)?;
    let mut current = target.to_string();
    let mut out = state.clone();
    for i in 0..m - 1 {
        let next = if i == m - 2 {
            out_labels[m - 1].clone()
        } else {
            format!("{}#and{}", out_labels[0], i)
        };
        let shares = [out_labels[i].clone(), next.clone(), environment[i].clone()];
        out = encode_polynomial(&out, &current, link, field, &shares, cap)?;
        current = next;
    }
    Ok(out)
}

/// Inverts [`encode_and`] from all m shares (in share order). The secret ends
/// up in the last share.
pub fn decode_and(state: &QuditRegister, held: &[String], field: FieldSpec) -> Result<(QuditRegister, String)> {
    let m = held.len();
    if m == 0 {
        return Err(Error::DimensionMismatch("no shares to decode".into()));
    }
    let link = ThresholdParams::new(2, 3)?;
    let mut out = state.clone();
    let designated = held[m - 1].clone();
    for i in (0..m - 1).rev() {
        let pair = [
            HeldShare {
                label: held[i].clone(),
                point: 0,
            },
            HeldShare {
                label: designated.clone(),
                point: 1,
            },
        ];
        out = decode_threshold(&out, &pair, link, field)?.0;
    }
    Ok((out, designated))
}

/// p^{−1/2} Σ_s |s⟩_secret |s⟩_reference.
pub fn entangle_with_reference(field: FieldSpec) -> QuditRegister {
    let p = field.p();
    let amp = C64::new(1.0 / (p as f64).sqrt(), 0.0);
    let mut amplitudes = vec![C64::new(0.0, 0.0); p * p];
    for s in 0..p {
        amplitudes[s * p + s] = amp;
    }
    QuditRegister::from_amplitudes(
        field,
        vec![SECRET_LABEL.to_string(), REFERENCE_LABEL.to_string()],
        amplitudes,
    )
    .expect("normalized by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::density::{fidelity_with_max_entangled, partial_trace, trace_distance};
    use crate::qudit::register::DEFAULT_MAX_AMPLITUDES;
    use crate::qudit::TOLERANCE;

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn secret(field: FieldSpec, s: u32) -> QuditRegister {
        QuditRegister::basis(field, vec![SECRET_LABEL.into()], &[s]).unwrap()
    }

    /// Oracle: amplitude vector of Σ over listed words with equal weight.
    fn uniform(field: FieldSpec, n: usize, words: &[&[u32]]) -> Vec<C64> {
        let p = field.p();
        let mut v = vec![C64::new(0.0, 0.0); p.pow(n as u32)];
        let a = 1.0 / (words.len() as f64).sqrt();
        for w in words {
            let idx = w.iter().fold(0usize, |acc, &d| acc * p + d as usize);
            v[idx] = C64::new(a, 0.0);
        }
        v
    }

    fn params(k: usize, n: usize) -> ThresholdParams {
        ThresholdParams::new(k, n).unwrap()
    }

    fn close(a: &[C64], b: &[C64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    #[test]
    fn two_of_three_basis_images() {
        let f = FieldSpec::new(3).unwrap();
        let out = labels("q", 3);
        let e0 = encode_polynomial(
            &secret(f, 0),
            SECRET_LABEL,
            params(2, 3),
            f,
            &out,
            DEFAULT_MAX_AMPLITUDES,
        )
        .unwrap();
        assert!(close(
            &e0.to_dense(1 << 20).unwrap(),
            &uniform(f, 3, &[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2]])
        ));
        let e1 = encode_polynomial(
            &secret(f, 1),
            SECRET_LABEL,
            params(2, 3),
            f,
            &out,
            DEFAULT_MAX_AMPLITUDES,
        )
        .unwrap();
        assert!(close(
            &e1.to_dense(1 << 20).unwrap(),
            &uniform(f, 3, &[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]])
        ));
        let e2 = encode_polynomial(
            &secret(f, 2),
            SECRET_LABEL,
            params(2, 3),
            f,
            &out,
            DEFAULT_MAX_AMPLITUDES,
        )
        .unwrap();
        assert!(close(
            &e2.to_dense(1 << 20).unwrap(),
            &uniform(f, 3, &[&[0, 2, 1], &[1, 0, 2], &[2, 1, 0]])
        ));
    }

    #[test]
    fn one_of_one_is_identity() {
        for p in [2, 3, 5] {
            let f = FieldSpec::new(p).unwrap();
            for s in 0..p as u32 {
                let e =
                    encode_polynomial(&secret(f, s), SECRET_LABEL, params(1, 1), f, &labels("q", 1), 1 << 10).unwrap();
                assert_eq!(e.entries(), secret(f, s).entries());
                let a = encode_additive(&secret(f, s), SECRET_LABEL, 1, f, &labels("q", 1), 1 << 10).unwrap();
                assert_eq!(a.entries(), secret(f, s).entries());
            }
        }
    }

    #[test]
    fn additive_bell_pair() {
        let f = FieldSpec::new(2).unwrap();
        let e = encode_additive(&secret(f, 0), SECRET_LABEL, 2, f, &labels("q", 2), 1 << 10).unwrap();
        assert!(close(
            &e.to_dense(1 << 20).unwrap(),
            &uniform(f, 2, &[&[0, 0], &[1, 1]])
        ));
    }

    #[test]
    fn additive_single_shares_are_maximally_mixed() {
        let f = FieldSpec::new(3).unwrap();
        for s in 0..3 {
            let e = encode_additive(&secret(f, s), SECRET_LABEL, 3, f, &labels("q", 3), 1 << 10).unwrap();
            for l in e.labels() {
                let rho = partial_trace(&e, &[l.as_str()]).unwrap();
                let mixed = crate::qudit::density::DensityOperator::maximally_mixed(f, vec![l.clone()]);
                assert!(trace_distance(&rho, &mixed).unwrap() < TOLERANCE);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let f = FieldSpec::new(3).unwrap();
        let s = secret(f, 0);
        assert!(matches!(
            encode_polynomial(&s, SECRET_LABEL, params(3, 4), f, &labels("q", 4), 1 << 10),
            Err(Error::UnsupportedNode { .. })
        ));
        assert!(encode_polynomial(&s, SECRET_LABEL, params(3, 5), f, &labels("q", 5), 1 << 10).is_err());
        let f5 = FieldSpec::new(5).unwrap();
        assert!(matches!(
            encode_polynomial(&s, SECRET_LABEL, params(2, 3), f5, &labels("q", 3), 1 << 10),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            Code::for_params(params(3, 4)),
            Err(Error::UnsupportedNode { k: 3, n: 4 })
        ));
    }

    #[test]
    fn decoder_correction_for_two_shares() {
        // shares at x = 0, 1 of ((2,3)) over GF(3): s = y2 − y1, t ← t + 2s
        let f = FieldSpec::new(3).unwrap();
        let held = [
            HeldShare {
                label: "a".into(),
                point: 0,
            },
            HeldShare {
                label: "b".into(),
                point: 1,
            },
        ];
        let map = polynomial_decoder(f, 2, 3, &held).unwrap();
        for y1 in 0..3 {
            for y2 in 0..3 {
                let s = f.sub(y2, y1);
                let t = y1;
                let expect = vec![f.add(t, f.mul(2, s)), s];
                let got: Vec<u32> = map
                    .iter()
                    .map(|row| f.add(f.mul(row[0], y1), f.mul(row[1], y2)))
                    .collect();
                assert_eq!(got, expect);
            }
        }
    }

    /// Every k-subset decodes every basis secret exactly and with a reference.
    #[test]
    fn polynomial_codes_recover_from_any_k_subset() {
        for (k, p) in [(1usize, 2usize), (2, 3), (2, 5), (3, 5)] {
            let n = 2 * k - 1;
            let f = FieldSpec::new(p).unwrap();
            let out = labels("q", n);
            let subsets: Vec<Vec<usize>> = (0u32..1 << n)
                .filter(|m| m.count_ones() as usize == k)
                .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
                .collect();
            let reference = entangle_with_reference(f);
            let encoded = encode_polynomial(&reference, SECRET_LABEL, params(k, n), f, &out, 1 << 20).unwrap();
            for subset in &subsets {
                let held: Vec<HeldShare> = subset
                    .iter()
                    .map(|&i| HeldShare {
                        label: out[i].clone(),
                        point: i,
                    })
                    .collect();
                let (decoded, label) = decode_threshold(&encoded, &held, params(k, n), f).unwrap();
                let fid = fidelity_with_max_entangled(&decoded, &label, REFERENCE_LABEL).unwrap();
                assert!(fid >= 1.0 - TOLERANCE, "k={k} p={p} {subset:?}: {fid}");
                for s in 0..p as u32 {
                    let e = encode_polynomial(&secret(f, s), SECRET_LABEL, params(k, n), f, &out, 1 << 20).unwrap();
                    let (d, label) = decode_threshold(&e, &held, params(k, n), f).unwrap();
                    let rho = partial_trace(&d, &[label.as_str()]).unwrap();
                    assert!((rho.matrix()[(s as usize, s as usize)].re - 1.0).abs() < TOLERANCE);
                }
            }
        }
    }

    #[test]
    fn decoder_rejects_too_few_or_repeated_shares() {
        let f = FieldSpec::new(3).unwrap();
        let out = labels("q", 3);
        let e = encode_polynomial(&secret(f, 1), SECRET_LABEL, params(2, 3), f, &out, 1 << 10).unwrap();
        let one = [HeldShare {
            label: "q0".into(),
            point: 0,
        }];
        assert!(matches!(
            decode_threshold(&e, &one, params(2, 3), f),
            Err(Error::InsufficientShares { .. })
        ));
        let twice = [
            HeldShare {
                label: "q0".into(),
                point: 0,
            },
            HeldShare {
                label: "q1".into(),
                point: 0,
            },
        ];
        assert!(decode_threshold(&e, &twice, params(2, 3), f).is_err());
    }

    #[test]
    fn additive_decode() {
        let f = FieldSpec::new(3).unwrap();
        let out = labels("q", 2);
        let encoded = encode_additive(&entangle_with_reference(f), SECRET_LABEL, 2, f, &out, 1 << 10).unwrap();
        let held: Vec<HeldShare> = (0..2)
            .map(|i| HeldShare {
                label: out[i].clone(),
                point: i,
            })
            .collect();
        let (decoded, label) = decode_threshold(&encoded, &held, params(2, 2), f).unwrap();
        assert_eq!(label, "q1");
        assert!(fidelity_with_max_entangled(&decoded, &label, REFERENCE_LABEL).unwrap() >= 1.0 - TOLERANCE);
    }

    #[test]
    fn additive_code_leaks_phase_information() {
        let f = FieldSpec::new(3).unwrap();
        let e = encode_additive(
            &entangle_with_reference(f),
            SECRET_LABEL,
            2,
            f,
            &labels("q", 2),
            1 << 10,
        )
        .unwrap();
        let d = crate::qudit::density::decoupling_distance(&e, &["q0"], REFERENCE_LABEL).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-9, "{d}");
    }

    #[test]
    fn chained_and_code() {
        for (m, p) in [(1usize, 2usize), (2, 3), (3, 3), (4, 5)] {
            let f = FieldSpec::new(p).unwrap();
            let out = labels("q", m);
            let env = labels("e", m - 1);
            let e = encode_and(&entangle_with_reference(f), SECRET_LABEL, m, f, &out, &env, 1 << 20).unwrap();
            assert_eq!(e.qudit_count(), 2 * m);
            // every proper subset of shares is decoupled from the reference
            for mask in 0u32..(1 << m) - 1 {
                let keep: Vec<&str> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| out[i].as_str()).collect();
                let d = crate::qudit::density::decoupling_distance(&e, &keep, REFERENCE_LABEL).unwrap();
                assert!(d < TOLERANCE, "m={m} mask={mask:b}: {d}");
            }
            let (decoded, label) = decode_and(&e, &out, f).unwrap();
            assert_eq!(label, out[m - 1]);
            assert!(fidelity_with_max_entangled(&decoded, &label, REFERENCE_LABEL).unwrap() >= 1.0 - TOLERANCE);
        }
        let f = FieldSpec::new(3).unwrap();
        assert!(encode_and(&secret(f, 0), SECRET_LABEL, 2, f, &labels("q", 2), &[], 1 << 10).is_err());
    }

    #[test]
    fn reference_pairs() {
        let f = FieldSpec::new(2).unwrap();
        assert!(close(
            &entangle_with_reference(f).to_dense(1 << 20).unwrap(),
            &uniform(f, 2, &[&[0, 0], &[1, 1]])
        ));
        let f = FieldSpec::new(3).unwrap();
        let r = entangle_with_reference(f);
        assert!(close(
            &r.to_dense(1 << 20).unwrap(),
            &uniform(f, 2, &[&[0, 0], &[1, 1], &[2, 2]])
        ));
        let rho = partial_trace(&r, &[REFERENCE_LABEL]).unwrap();
        let mixed = crate::qudit::density::DensityOperator::maximally_mixed(f, vec![REFERENCE_LABEL.into()]);
        assert!(trace_distance(&rho, &mixed).unwrap() < TOLERANCE);
    }
}

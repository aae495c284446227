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

use nalgebra::DMatrix;

use super::field::FieldSpec;
use super::register::QuditRegister;
use super::{C64, TOLERANCE};
use crate::error::{Error, Result};

/// Mixed state of labelled qudits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    field: FieldSpec,
    labels: Vec<String>,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    pub fn new(field: FieldSpec, labels: Vec<String>, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = field.p().pow(labels.len() as u32);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for {} qudits",
                matrix.nrows(),
                matrix.ncols(),
                labels.len()
            )));
        }
        let rho = DensityOperator { field, labels, matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub fn maximally_mixed(field: FieldSpec, labels: Vec<String>) -> Self {
        let dim = field.p().pow(labels.len() as u32);
        let matrix = DMatrix::from_diagonal_element(dim, dim, C64::new(1.0 / dim as f64, 0.0));
        DensityOperator { field, labels, matrix }
    }

    /// Hermitian, unit trace, and positive semidefinite within [`TOLERANCE`].
    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        if (m - m.adjoint()).iter().any(|v| v.norm() > TOLERANCE) {
            return Err(Error::DimensionMismatch("operator is not Hermitian".into()));
        }
        if (m.trace() - C64::new(1.0, 0.0)).norm() > TOLERANCE {
            return Err(Error::DimensionMismatch("trace is not 1".into()));
        }
        if hermitian_eigenvalues(m.clone()).iter().any(|&e| e < -TOLERANCE) {
            return Err(Error::DimensionMismatch("operator has a negative eigenvalue".into()));
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = hermitian_eigenvalues(self.matrix.clone()).iter().copied().collect();
        e.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        e
    }

    /// Tensor product with `other`'s subsystems appended.
    pub fn kron(&self, other: &DensityOperator) -> Result<DensityOperator> {
        if self.field != other.field {
            return Err(Error::DimensionMismatch("different fields".into()));
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Ok(DensityOperator {
            field: self.field,
            labels,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }
}

fn hermitian_eigenvalues(m: DMatrix<C64>) -> nalgebra::DVector<f64> {
    let sym = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    sym.symmetric_eigenvalues()
}

fn hermitian_eigen(m: DMatrix<C64>) -> (nalgebra::DVector<f64>, DMatrix<C64>) {
    let sym = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let e = sym.symmetric_eigen();
    (e.eigenvalues, e.eigenvectors)
}

/// Sparse view of a pure state as a matrix: rows index the digits at the row
/// positions (in the given order), columns index all other subsystems.
struct Split {
    rows: Vec<u64>,
    cols: Vec<u64>,
    /// (row index, column index, amplitude), sorted by row
    entries: Vec<(usize, usize, C64)>,
    /// entries[row_start[r]..row_start[r + 1]] belong to row r
    row_start: Vec<usize>,
}

fn sorted_unique(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v.dedup();
    v
}

fn rank_of(sorted: &[u64], key: u64) -> usize {
    sorted.binary_search(&key).expect("key present")
}

impl Split {
    /// One split per entry of `row_sets`, from a single pass over the state.
    fn many(state: &QuditRegister, row_sets: &[&[usize]]) -> Vec<Split> {
        let p = state.field().p() as u64;
        let m = state.qudit_count();
        let layouts: Vec<(Vec<usize>, Vec<usize>)> = row_sets
            .iter()
            .map(|rows| (rows.to_vec(), (0..m).filter(|i| !rows.contains(i)).collect()))
            .collect();
        let mut raws: Vec<Vec<(u64, u64, C64)>> = vec![Vec::with_capacity(state.nonzero_count()); row_sets.len()];
        let mut digits = vec![0u64; m];
        for &(idx, a) in state.entries() {
            let mut rest = idx;
            for d in digits.iter_mut().rev() {
                *d = rest % p;
                rest /= p;
            }
            let key = |positions: &[usize]| positions.iter().fold(0u64, |acc, &i| acc * p + digits[i]);
            for ((rows, cols), raw) in layouts.iter().zip(raws.iter_mut()) {
                raw.push((key(rows), key(cols), a));
            }
        }
        raws.into_iter().map(Split::from_raw).collect()
    }

    fn from_raw(raw: Vec<(u64, u64, C64)>) -> Split {
        let rows = sorted_unique(raw.iter().map(|e| e.0).collect());
        let cols = sorted_unique(raw.iter().map(|e| e.1).collect());
        let mut entries: Vec<(usize, usize, C64)> = raw
            .into_iter()
            .map(|(r, c, a)| (rank_of(&rows, r), rank_of(&cols, c), a))
            .collect();
        entries.sort_unstable_by_key(|e| (e.0, e.1));
        let mut row_start = vec![0; rows.len() + 1];
        for &(r, _, _) in &entries {
            row_start[r + 1] += 1;
        }
        for r in 0..rows.len() {
            row_start[r + 1] += row_start[r];
        }
        Split {
            rows,
            cols,
            entries,
            row_start,
        }
    }

    fn row(&self, r: usize) -> &[(usize, usize, C64)] {
        &self.entries[self.row_start[r]..self.row_start[r + 1]]
    }

    /// Rows grouped by shared column.
    fn row_links(&self) -> Vec<Vec<usize>> {
        let mut by_col: Vec<Vec<usize>> = vec![Vec::new(); self.cols.len()];
        for &(r, c, _) in &self.entries {
            by_col[c].push(r);
        }
        by_col
    }

    /// Dense block on the given rows (in order; `None` is a zero row) and the
    /// columns they touch.
    fn block(&self, rows: &[Option<usize>]) -> Result<DMatrix<C64>> {
        let mut touched: Vec<usize> = rows
            .iter()
            .flatten()
            .flat_map(|&r| self.row(r).iter().map(|e| e.1))
            .collect();
        touched.sort_unstable();
        touched.dedup();
        check_block(rows.len(), touched.len())?;
        let mut out = DMatrix::from_element(rows.len(), touched.len(), C64::new(0.0, 0.0));
        for (i, r) in rows.iter().enumerate() {
            if let Some(r) = r {
                for &(_, c, a) in self.row(*r) {
                    out[(i, touched.binary_search(&c).expect("touched column"))] += a;
                }
            }
        }
        Ok(out)
    }
}

/// Largest dense block materialized during a decoupling computation.
const BLOCK_LIMIT: usize = 1 << 26;

fn check_block(rows: usize, cols: usize) -> Result<()> {
    let needed = rows as u128 * cols as u128;
    if needed > BLOCK_LIMIT as u128 {
        return Err(Error::ResourceCap {
            needed,
            cap: BLOCK_LIMIT,
        });
    }
    Ok(())
}

/// Largest reduced density matrix dimension built explicitly.
const DENSE_LIMIT: usize = 1 << 12;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            let next = self.0[cur];
            self.0[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn positions(labels: &[String], keep: &[&str]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(keep.len());
    for k in keep {
        let pos = labels
            .iter()
            .position(|l| l == k)
            .ok_or_else(|| Error::UnknownLabel(k.to_string()))?;
        if out.contains(&pos) {
            return Err(Error::DimensionMismatch(format!("label {k} listed twice")));
        }
        out.push(pos);
    }
    Ok(out)
}

/// Reduced state of a pure register on `keep`, in the order given.
pub fn partial_trace(state: &QuditRegister, keep: &[&str]) -> Result<DensityOperator> {
    let rows = positions(state.labels(), keep)?;
    let p = state.field().p();
    let dim = super::register::dimension(p, keep.len(), DENSE_LIMIT)?;
    let split = Split::many(state, &[&rows]).pop().expect("one split");
    let mut matrix = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    let mut by_col: Vec<Vec<(usize, C64)>> = vec![Vec::new(); split.cols.len()];
    for &(r, c, a) in &split.entries {
        by_col[c].push((split.rows[r] as usize, a));
    }
    for column in &by_col {
        for &(i, a) in column {
            for &(j, b) in column {
                matrix[(i, j)] += a * b.conj();
            }
        }
    }
    Ok(DensityOperator {
        field: state.field(),
        labels: keep.iter().map(|s| s.to_string()).collect(),
        matrix,
    })
}

/// Reduced state of a density operator on `keep`, in the order given.
pub fn partial_trace_density(rho: &DensityOperator, keep: &[&str]) -> Result<DensityOperator> {
    let rows = positions(&rho.labels, keep)?;
    let p = rho.field.p();
    let m = rho.labels.len();
    let traced: Vec<usize> = (0..m).filter(|i| !rows.contains(i)).collect();
    let stride = |pos: usize| p.pow((m - pos - 1) as u32);
    let keep_dim = p.pow(rows.len() as u32);
    let traced_dim = p.pow(traced.len() as u32);
    let index = |kept: usize, other: usize| -> usize {
        let mut idx = 0;
        let mut k = kept;
        for &r in rows.iter().rev() {
            idx += (k % p) * stride(r);
            k /= p;
        }
        let mut o = other;
        for &t in traced.iter().rev() {
            idx += (o % p) * stride(t);
            o /= p;
        }
        idx
    };
    let mut out = DMatrix::from_element(keep_dim, keep_dim, C64::new(0.0, 0.0));
    for i in 0..keep_dim {
        for j in 0..keep_dim {
            out[(i, j)] = (0..traced_dim).map(|t| rho.matrix[(index(i, t), index(j, t))]).sum();
        }
    }
    Ok(DensityOperator {
        field: rho.field,
        labels: keep.iter().map(|s| s.to_string()).collect(),
        matrix: out,
    })
}

/// Half the sum of absolute eigenvalues of ρ − σ.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.labels != sigma.labels || rho.field != sigma.field {
        return Err(Error::DimensionMismatch("operators act on different subsystems".into()));
    }
    let diff = &rho.matrix - &sigma.matrix;
    Ok(hermitian_eigenvalues(diff).iter().map(|e| e.abs()).sum::<f64>() / 2.0)
}

/// ⟨Φ|ρ_ab|Φ⟩ with Φ the maximally entangled pair on (a, b).
pub fn fidelity_with_max_entangled(state: &QuditRegister, a: &str, b: &str) -> Result<f64> {
    let rho = partial_trace(state, &[a, b])?;
    let p = state.field().p();
    let mut total = C64::new(0.0, 0.0);
    for s in 0..p {
        for t in 0..p {
            total += rho.matrix[(s * p + s, t * p + t)];
        }
    }
    Ok(total.re / p as f64)
}

/// Trace distance between ρ_{keep ∪ ref} and ρ_keep ⊗ ρ_ref for a pure state.
///
/// Zero means `keep` carries no information about the reference. The
/// difference operator is split into the blocks it is diagonal on (connected
/// components of the row supports), and each block is evaluated on low-rank
/// factors.
pub fn decoupling_distance(state: &QuditRegister, keep: &[&str], reference: &str) -> Result<f64> {
    if keep.contains(&reference) {
        return Err(Error::DimensionMismatch("reference listed in kept set".into()));
    }
    let ref_pos = state.position(reference)?;
    if keep.is_empty() {
        return Ok(0.0);
    }
    let keep_pos = positions(state.labels(), keep)?;
    let p = state.field().p() as u64;

    let mut joint_pos = keep_pos.clone();
    joint_pos.push(ref_pos);
    let mut splits = Split::many(state, &[&joint_pos, &keep_pos, &[ref_pos]]).into_iter();
    let (joint, kept, refs) = match (splits.next(), splits.next(), splits.next()) {
        (Some(j), Some(k), Some(r)) => (j, k, r),
        _ => unreachable!("three splits requested"),
    };
    let all_refs: Vec<Option<usize>> = (0..refs.rows.len()).map(Some).collect();
    let ref_factor = compress(refs.block(&all_refs)?);

    // rows of the difference operator: cells (kept row, reference row)
    let nr = refs.rows.len();
    let nk = kept.rows.len();
    let cell = |k: usize, r: usize| k * nr + r;
    let joint_cell: Vec<usize> = joint
        .rows
        .iter()
        .map(|&key| cell(rank_of(&kept.rows, key / p), rank_of(&refs.rows, key % p)))
        .collect();
    let mut uf = UnionFind::new(nk * nr);
    for group in joint.row_links() {
        for w in group.windows(2) {
            uf.union(joint_cell[w[0]], joint_cell[w[1]]);
        }
    }
    for group in kept.row_links() {
        for w in group.windows(2) {
            for r in 0..nr {
                uf.union(cell(w[0], r), cell(w[1], r));
            }
        }
    }
    for group in refs.row_links() {
        for w in group.windows(2) {
            for k in 0..nk {
                uf.union(cell(k, w[0]), cell(k, w[1]));
            }
        }
    }
    let mut joint_of_cell: Vec<Option<usize>> = vec![None; nk * nr];
    for (j, &c) in joint_cell.iter().enumerate() {
        joint_of_cell[c] = Some(j);
    }
    let mut cells: Vec<(usize, usize)> = (0..nk * nr).map(|c| (uf.find(c), c)).collect();
    cells.sort_unstable();

    let mut total = 0.0;
    for component in cells.chunk_by(|x, y| x.0 == y.0) {
        let members: Vec<usize> = component.iter().map(|&(_, c)| c).collect();
        let a = joint.block(&members.iter().map(|&c| joint_of_cell[c]).collect::<Vec<_>>())?;
        let k_block = kept.block(&members.iter().map(|&c| Some(c / nr)).collect::<Vec<_>>())?;
        let rc = ref_factor.ncols();
        check_block(members.len(), k_block.ncols() * rc)?;
        let b = DMatrix::from_fn(members.len(), k_block.ncols() * rc, |i, j| {
            k_block[(i, j / rc)] * ref_factor[(members[i] % nr, j % rc)]
        });
        total += if members.len() <= SMALL_BLOCK {
            let diff = &a * a.adjoint() - &b * b.adjoint();
            trace_norm(diff) / 2.0
        } else {
            factored_trace_distance(&compress(a), &compress(b))
        };
    }
    Ok(total)
}

/// Blocks up to this many rows are evaluated without factoring.
const SMALL_BLOCK: usize = 32;

fn trace_norm(h: DMatrix<C64>) -> f64 {
    if h.nrows() == 1 {
        return h[(0, 0)].re.abs();
    }
    hermitian_eigenvalues(h).iter().map(|e| e.abs()).sum()
}

/// Relative cutoff for discarding directions of negligible weight.
const RANK_CUTOFF: f64 = 1e-14;

/// F with F F† = M M† and as few columns as the numerical rank allows.
fn compress(m: DMatrix<C64>) -> DMatrix<C64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return m;
    }
    if m.ncols() <= m.nrows() {
        let (values, vectors) = hermitian_eigen(m.adjoint() * &m);
        let keep = significant(&values);
        let basis = DMatrix::from_fn(vectors.nrows(), keep.len(), |r, c| vectors[(r, keep[c])]);
        m * basis
    } else {
        let (values, vectors) = hermitian_eigen(&m * m.adjoint());
        let keep = significant(&values);
        DMatrix::from_fn(vectors.nrows(), keep.len(), |r, c| {
            vectors[(r, keep[c])] * values[keep[c]].sqrt()
        })
    }
}

fn significant(values: &nalgebra::DVector<f64>) -> Vec<usize> {
    let max = values.iter().cloned().fold(0.0, f64::max);
    (0..values.len())
        .filter(|&i| values[i] > RANK_CUTOFF * max.max(1e-300))
        .collect()
}

/// ‖A A† − B B†‖₁ / 2, evaluated on an orthonormal basis of the joint column space.
fn factored_trace_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let d = a.nrows();
    let c = a.ncols() + b.ncols();
    if d <= c {
        return trace_norm(a * a.adjoint() - b * b.adjoint()) / 2.0;
    }
    let mut w = DMatrix::from_element(d, c, C64::new(0.0, 0.0));
    w.columns_mut(0, a.ncols()).copy_from(a);
    w.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    let (values, vectors) = hermitian_eigen(w.adjoint() * &w);
    let keep = significant(&values);
    let mut q = DMatrix::from_element(d, keep.len(), C64::new(0.0, 0.0));
    for (col, &i) in keep.iter().enumerate() {
        let v = vectors.column(i);
        let scaled = &w * v / C64::new(values[i].sqrt(), 0.0);
        q.set_column(col, &scaled);
    }
    let qa = q.adjoint() * a;
    let qb = q.adjoint() * b;
    trace_norm(&qa * qa.adjoint() - &qb * qb.adjoint()) / 2.0
}

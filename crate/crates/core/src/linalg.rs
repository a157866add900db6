//! Exact linear algebra over ℚ.
//!
//! Matrices are stored column-sparse: tree-basis differentials have a handful
//! of nonzeros per column, so dense storage would dominate memory long before
//! elimination cost matters.

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::rational::Q;

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Q)>,
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(i, q)| (i, q)))
            .finish()
    }
}

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec {
            entries: Vec::new(),
        }
    }

    pub fn unit(i: usize) -> SparseVec {
        SparseVec {
            entries: vec![(i, Q::one())],
        }
    }

    pub fn single(i: usize, q: Q) -> SparseVec {
        if q.is_zero() {
            SparseVec::new()
        } else {
            SparseVec {
                entries: vec![(i, q)],
            }
        }
    }

    /// Sums duplicate indices and drops zeros.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Q)>>(pairs: I) -> SparseVec {
        let mut v: Vec<(usize, Q)> = pairs.into_iter().collect();
        v.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Q)> = Vec::with_capacity(v.len());
        for (i, q) in v {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += &q,
                _ => out.push((i, q)),
            }
        }
        out.retain(|(_, q)| !q.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(v: &[Q]) -> SparseVec {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .map(|(i, q)| (i, q.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); len];
        for (i, q) in &self.entries {
            out[*i] = q.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Q)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Q)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> + '_ {
        self.entries.iter().map(|(i, q)| (*i, q))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn lead(&self) -> Option<(usize, &Q)> {
        self.entries.first().map(|(i, q)| (*i, q))
    }

    pub fn get(&self, i: usize) -> Q {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Q) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, q)| (*i, q * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, q)| (*i, -q)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Q, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, c * &b[j].1));
                j += 1;
            } else {
                let s = a[i].1.add_mul(c, &b[j].1);
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Q::one(), other)
    }

    pub fn dot(&self, other: &SparseVec) -> Q {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = Q::zero();
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc.add_mul(&a[i].1, &b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Reindexes entries through `f`; entries mapped to `None` are dropped.
    pub fn remap(&self, mut f: impl FnMut(usize) -> Option<usize>) -> SparseVec {
        SparseVec::from_pairs(
            self.entries
                .iter()
                .filter_map(|(i, q)| f(*i).map(|j| (j, q.clone()))),
        )
    }
}

/// Accumulates a linear combination with arbitrary insertion order.
#[derive(Default)]
pub struct Accumulator {
    map: FxHashMap<usize, Q>,
}

impl Accumulator {
    pub fn new() -> Accumulator {
        Accumulator::default()
    }

    pub fn add(&mut self, i: usize, q: &Q) {
        if q.is_zero() {
            return;
        }
        let e = self.map.entry(i).or_insert_with(Q::zero);
        *e += q;
    }

    pub fn add_vec(&mut self, v: &SparseVec, c: &Q) {
        for (i, q) in v.iter() {
            self.add(i, &(q * c));
        }
    }

    pub fn finish(self) -> SparseVec {
        let mut entries: Vec<(usize, Q)> =
            self.map.into_iter().filter(|(_, q)| !q.is_zero()).collect();
        entries.sort_by_key(|(i, _)| *i);
        SparseVec { entries }
    }
}

/// A matrix over ℚ, stored by columns.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{}", self.rows, self.cols.len())?;
        if self.rows <= 12 && self.cols.len() <= 12 {
            for r in self.to_dense() {
                let row: Vec<String> = r.iter().map(|q| q.to_string()).collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> RationalMatrix {
        RationalMatrix {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> RationalMatrix {
        RationalMatrix {
            rows: n,
            cols: (0..n).map(SparseVec::unit).collect(),
        }
    }

    pub fn scalar(n: usize, c: &Q) -> RationalMatrix {
        RationalMatrix {
            rows: n,
            cols: (0..n).map(|i| SparseVec::single(i, c.clone())).collect(),
        }
    }

    /// Builds from columns; every index must be below `rows`.
    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Result<RationalMatrix> {
        for (j, c) in cols.iter().enumerate() {
            if let Some(m) = c.max_index() {
                if m >= rows {
                    return Err(Error::Shape(format!(
                        "column {j} has row index {m} >= {rows}"
                    )));
                }
            }
        }
        Ok(RationalMatrix { rows, cols })
    }

    pub(crate) fn from_columns_unchecked(rows: usize, cols: Vec<SparseVec>) -> RationalMatrix {
        debug_assert!(cols.iter().all(|c| c.max_index().is_none_or(|m| m < rows)));
        RationalMatrix { rows, cols }
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Result<RationalMatrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let cols = (0..ncols)
            .map(|c| SparseVec::from_pairs((0..nrows).map(|r| (r, rows[r][c].clone()))))
            .collect();
        Ok(RationalMatrix { rows: nrows, cols })
    }

    pub fn from_i64(rows: &[&[i64]]) -> RationalMatrix {
        let dense: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Q::from_int(x)).collect())
            .collect();
        RationalMatrix::from_dense(&dense).expect("rectangular literal")
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.cols.len()]; self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, q) in col.iter() {
                out[r][c] = q.clone();
            }
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.cols[c].get(r)
    }

    pub fn set(&mut self, r: usize, c: usize, q: Q) {
        assert!(r < self.rows && c < self.cols.len());
        let col = &self.cols[c];
        let mut pairs: Vec<(usize, Q)> = col
            .iter()
            .filter(|(i, _)| *i != r)
            .map(|(i, q)| (i, q.clone()))
            .collect();
        pairs.push((r, q));
        self.cols[c] = SparseVec::from_pairs(pairs);
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.nnz()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols.len()
            && self
                .cols
                .iter()
                .enumerate()
                .all(|(j, c)| *c == SparseVec::unit(j))
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (j, q) in v.iter() {
            acc.add_vec(&self.cols[j], q);
        }
        acc.finish()
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.ncols() != other.nrows() {
            return Err(Error::Shape(format!(
                "product of {}x{} and {}x{}",
                self.rows,
                self.ncols(),
                other.rows,
                other.ncols()
            )));
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.mul_vec(c)).collect(),
        })
    }

    pub fn add(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        self.axpy(&Q::one(), other)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Q, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.rows != other.rows || self.ncols() != other.ncols() {
            return Err(Error::Shape("sum of differently shaped matrices".into()));
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| a.axpy(c, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &Q) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols.iter().map(|v| v.scale(c)).collect(),
        }
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, q) in col.iter() {
                rows[r].push((c, q.clone()));
            }
        }
        RationalMatrix {
            rows: self.cols.len(),
            cols: rows
                .into_iter()
                .map(|entries| SparseVec { entries })
                .collect(),
        }
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols.len()))
            .map(|i| self.cols[i].get(i))
            .sum()
    }

    /// Block-diagonal sum `[[self, 0], [0, other]]`.
    pub fn direct_sum(&self, other: &RationalMatrix) -> RationalMatrix {
        let mut cols = self.cols.clone();
        let off = self.rows;
        cols.extend(other.cols.iter().map(|c| c.remap(|i| Some(i + off))));
        RationalMatrix {
            rows: self.rows + other.rows,
            cols,
        }
    }

    /// Kronecker product; column `a * other.ncols() + b` is
    /// `self[:, a] ⊗ other[:, b]`.
    pub fn kron(&self, other: &RationalMatrix) -> RationalMatrix {
        let orows = other.rows;
        let mut cols = Vec::with_capacity(self.ncols() * other.ncols());
        for a in &self.cols {
            for b in &other.cols {
                let mut entries = Vec::with_capacity(a.nnz() * b.nnz());
                for (i, x) in a.iter() {
                    for (j, y) in b.iter() {
                        entries.push((i * orows + j, x * y));
                    }
                }
                cols.push(SparseVec { entries });
            }
        }
        RationalMatrix {
            rows: self.rows * orows,
            cols,
        }
    }

    /// Assembles a block matrix. Missing blocks are zero; `blocks` holds
    /// `(block_row, block_col, matrix)`.
    pub fn from_blocks(
        row_dims: &[usize],
        col_dims: &[usize],
        blocks: Vec<(usize, usize, RationalMatrix)>,
    ) -> Result<RationalMatrix> {
        let row_off: Vec<usize> = row_dims
            .iter()
            .scan(0, |s, &d| {
                let o = *s;
                *s += d;
                Some(o)
            })
            .collect();
        let col_off: Vec<usize> = col_dims
            .iter()
            .scan(0, |s, &d| {
                let o = *s;
                *s += d;
                Some(o)
            })
            .collect();
        let nrows: usize = row_dims.iter().sum();
        let ncols: usize = col_dims.iter().sum();
        let mut acc: Vec<Vec<(usize, Q)>> = vec![Vec::new(); ncols];
        for (br, bc, m) in blocks {
            if m.nrows() != row_dims[br] || m.ncols() != col_dims[bc] {
                return Err(Error::Shape(format!(
                    "block ({br},{bc}) is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    row_dims[br],
                    col_dims[bc]
                )));
            }
            for (j, col) in m.cols.into_iter().enumerate() {
                acc[col_off[bc] + j]
                    .extend(col.entries.into_iter().map(|(i, q)| (i + row_off[br], q)));
            }
        }
        Ok(RationalMatrix {
            rows: nrows,
            cols: acc.into_iter().map(SparseVec::from_pairs).collect(),
        })
    }

    /// Selects columns by index.
    pub fn select_columns(&self, idx: &[usize]) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: idx.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    /// Rank by sparse incremental elimination; pivots are not canonical, so
    /// use [`RationalMatrix::row_reduce`] when bases are needed.
    pub fn rank(&self) -> usize {
        let (vectors, _) = if self.rows < self.cols.len() {
            (self.transpose().cols, ())
        } else {
            (self.cols.clone(), ())
        };
        let mut e = Echelon::new();
        for v in vectors {
            e.insert(v);
        }
        e.rank()
    }

    /// Gauss–Jordan elimination with the first-nonzero-in-column pivot rule.
    pub fn row_reduce(&self) -> RowReduction {
        let ncols = self.cols.len();
        // Row-major working copy.
        let mut rows: Vec<SparseVec> = self.transpose().cols;
        let mut pivot_cols = Vec::new();
        let mut next_row = 0usize;
        // For each column, index of rows having a nonzero there is recomputed
        // lazily by scanning; matrices passed here are small.
        for c in 0..ncols {
            let Some(pr) = (next_row..rows.len()).find(|&r| !rows[r].get(c).is_zero()) else {
                continue;
            };
            rows.swap(next_row, pr);
            let inv = rows[next_row].get(c).recip();
            rows[next_row] = rows[next_row].scale(&inv);
            let pivot = rows[next_row].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == next_row {
                    continue;
                }
                let f = row.get(c);
                if !f.is_zero() {
                    *row = row.axpy(&-f, &pivot);
                }
            }
            pivot_cols.push(c);
            next_row += 1;
        }
        let rank = pivot_cols.len();
        rows.truncate(rank);
        let is_pivot: Vec<Option<usize>> = {
            let mut v = vec![None; ncols];
            for (r, &c) in pivot_cols.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut kernel_cols = Vec::new();
        for (f, pivot) in is_pivot.iter().enumerate() {
            if pivot.is_some() {
                continue;
            }
            let mut pairs = vec![(f, Q::one())];
            for (r, &pc) in pivot_cols.iter().enumerate() {
                let x = rows[r].get(f);
                if !x.is_zero() {
                    pairs.push((pc, -x));
                }
            }
            kernel_cols.push(SparseVec::from_pairs(pairs));
        }
        let image = self.select_columns(&pivot_cols);
        RowReduction {
            rank,
            kernel: RationalMatrix {
                rows: ncols,
                cols: kernel_cols,
            },
            image,
            rref: RationalMatrix::from_columns_unchecked(ncols, rows).transpose(),
            pivot_cols,
        }
    }
}

/// Output of [`RationalMatrix::row_reduce`].
#[derive(Clone, Debug)]
pub struct RowReduction {
    pub rank: usize,
    /// Strictly increasing.
    pub pivot_cols: Vec<usize>,
    /// Columns form a basis of the null space, one per free column.
    pub kernel: RationalMatrix,
    /// Columns of the input at the pivot positions; a basis of the column space.
    pub image: RationalMatrix,
    /// The nonzero rows of the reduced row echelon form (`rank x cols`).
    pub rref: RationalMatrix,
}

/// Incremental row echelon form over ℚ. Each stored pivot vector has leading
/// coefficient 1 at its key.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: FxHashMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the stored pivots; the result is zero iff `v` lies
    /// in their span.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut start = 0usize;
        loop {
            // Find the first entry at or after `start` that has a pivot.
            let hit = v.entries[start..]
                .iter()
                .position(|(i, _)| self.pivots.contains_key(i))
                .map(|p| p + start);
            let Some(pos) = hit else { return v };
            let (i, c) = v.entries[pos].clone();
            let p = &self.pivots[&i];
            v = v.axpy(&-c, p);
            start = pos;
        }
    }

    /// Inserts `v`; returns `true` if it increased the rank.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = v;
        loop {
            let Some((i, c)) = v.lead().map(|(i, c)| (i, c.clone())) else {
                return false;
            };
            match self.pivots.get(&i) {
                Some(p) => v = v.axpy(&-c, p),
                None => {
                    let inv = c.recip();
                    self.pivots.insert(i, v.scale(&inv));
                    return true;
                }
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.pivots.contains_key(&i)
    }
}

/// Echelon form that also records each pivot as a combination of the
/// inserted vectors, so membership queries return coordinates.
#[derive(Default, Clone)]
pub struct TrackedEchelon {
    pivots: BTreeMap<usize, (SparseVec, SparseVec)>,
    inserted: usize,
}

impl TrackedEchelon {
    pub fn new() -> TrackedEchelon {
        TrackedEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Inserts the next generator (index = number inserted so far). Returns
    /// whether it was independent.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let (rest, combo) = self.reduce_tracked(v, SparseVec::unit(id));
        match rest.lead().map(|(i, c)| (i, c.clone())) {
            None => false,
            Some((i, c)) => {
                let inv = c.recip();
                self.pivots.insert(i, (rest.scale(&inv), combo.scale(&inv)));
                true
            }
        }
    }

    fn reduce_tracked(&self, mut v: SparseVec, mut combo: SparseVec) -> (SparseVec, SparseVec) {
        let mut start = 0usize;
        loop {
            let hit = v.entries[start..]
                .iter()
                .position(|(i, _)| self.pivots.contains_key(i))
                .map(|p| p + start);
            let Some(pos) = hit else { return (v, combo) };
            let (i, c) = v.entries[pos].clone();
            let (p, pc) = &self.pivots[&i];
            let neg = -&c;
            v = v.axpy(&neg, p);
            combo = combo.axpy(&neg, pc);
            start = pos;
        }
    }

    /// If `v` lies in the span of the inserted generators, returns its
    /// coefficients with respect to them.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rest, combo) = self.reduce_tracked(v.clone(), SparseVec::new());
        rest.is_empty().then(|| combo.neg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn identity_rank_two() {
        let rr = RationalMatrix::identity(2).row_reduce();
        assert_eq!(rr.rank, 2);
        assert_eq!(rr.kernel.ncols(), 0);
        assert_eq!(rr.pivot_cols, vec![0, 1]);
    }

    #[test]
    fn one_by_two_kernel() {
        let m = RationalMatrix::from_i64(&[&[1, 1]]);
        let rr = m.row_reduce();
        assert_eq!(rr.rank, 1);
        assert_eq!(rr.kernel.to_dense(), vec![vec![q(-1)], vec![q(1)]]);
    }

    #[test]
    fn all_ones_three_by_three() {
        // Hand elimination: every row equals the first, so one pivot and two
        // free columns with kernel vectors (-1,1,0) and (-1,0,1).
        let m = RationalMatrix::from_i64(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        let rr = m.row_reduce();
        assert_eq!(rr.rank, 1);
        assert_eq!(rr.kernel.ncols(), 2);
        assert_eq!(
            rr.kernel.column(0),
            &SparseVec::from_pairs([(0, q(-1)), (1, q(1))])
        );
        assert_eq!(
            rr.kernel.column(1),
            &SparseVec::from_pairs([(0, q(-1)), (2, q(1))])
        );
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn empty_matrices() {
        let m = RationalMatrix::zeros(0, 3);
        let rr = m.row_reduce();
        assert_eq!(rr.rank, 0);
        assert_eq!(rr.kernel.ncols(), 3);
        let m = RationalMatrix::zeros(4, 0);
        assert_eq!(m.row_reduce().rank, 0);
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = RationalMatrix::from_i64(&[&[2, 4, 1, 0], &[1, 2, 0, 3], &[3, 6, 1, 3]]);
        let rr = m.row_reduce();
        assert_eq!(rr.rank + rr.kernel.ncols(), 4);
        assert!(m.mul(&rr.kernel).unwrap().is_zero());
        assert_eq!(rr.rank, m.rank());
        assert_eq!(rr.rank, m.transpose().rank());
    }

    #[test]
    fn tracked_echelon_expresses() {
        let mut t = TrackedEchelon::new();
        let a = SparseVec::from_pairs([(0, q(1)), (1, q(1))]);
        let b = SparseVec::from_pairs([(1, q(1)), (2, q(2))]);
        assert!(t.insert(a.clone()));
        assert!(t.insert(b.clone()));
        let target = a.scale(&q(3)).axpy(&q(-2), &b);
        let c = t.express(&target).unwrap();
        assert_eq!(c, SparseVec::from_pairs([(0, q(3)), (1, q(-2))]));
        assert!(t.express(&SparseVec::unit(2)).is_none());
    }
}

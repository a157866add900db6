//! Bounded chain complexes of finite-dimensional ℚ-vector spaces with
//! homological (degree-lowering) differentials.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{RationalMatrix, SparseVec, TrackedEchelon};
use crate::rational::Q;

/// Dimensions per homological degree; zero dimensions are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedSpace {
    dims: BTreeMap<i32, usize>,
}

impl GradedSpace {
    pub fn new() -> GradedSpace {
        GradedSpace::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (i32, usize)>>(pairs: I) -> GradedSpace {
        let mut g = GradedSpace::new();
        for (k, d) in pairs {
            g.add(k, d);
        }
        g
    }

    /// One-dimensional space in degree `k`.
    pub fn line(k: i32) -> GradedSpace {
        GradedSpace::from_pairs([(k, 1)])
    }

    pub fn add(&mut self, k: i32, d: usize) {
        if d > 0 {
            *self.dims.entry(k).or_insert(0) += d;
        }
    }

    pub fn dim(&self, k: i32) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.dims.iter().map(|(k, d)| (*k, *d))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.dims.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.dims.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.dims.keys().next_back().copied()
    }

    /// The unique nonzero degree, if there is exactly one.
    pub fn concentrated_in(&self) -> Option<i32> {
        if self.dims.len() == 1 {
            self.min_degree()
        } else {
            None
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(k, d)| {
                if k.rem_euclid(2) == 0 {
                    *d as i64
                } else {
                    -(*d as i64)
                }
            })
            .sum()
    }

    pub fn shift(&self, k: i32) -> GradedSpace {
        GradedSpace {
            dims: self.dims.iter().map(|(d, n)| (d + k, *n)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &GradedSpace) -> GradedSpace {
        let mut g = self.clone();
        for (k, d) in other.iter() {
            g.add(k, d);
        }
        g
    }

    /// Degreewise convolution: the dimensions of a tensor product.
    pub fn tensor(&self, other: &GradedSpace) -> GradedSpace {
        let mut g = GradedSpace::new();
        for (i, a) in self.iter() {
            for (j, b) in other.iter() {
                g.add(i + j, a * b);
            }
        }
        g
    }
}

/// A bounded chain complex. `d_k` maps degree `k` to degree `k − 1`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dims: BTreeMap<i32, usize>,
    diffs: BTreeMap<i32, RationalMatrix>,
    ranks: OnceLock<BTreeMap<i32, usize>>,
}

impl PartialEq for ChainComplex {
    fn eq(&self, other: &ChainComplex) -> bool {
        self.space() == other.space()
            && self
                .degrees()
                .all(|k| self.differential(k) == other.differential(k))
    }
}

impl ChainComplex {
    /// Builds a complex and verifies shapes and `d ∘ d = 0`. Missing
    /// differentials are zero.
    pub fn new(
        dims: impl IntoIterator<Item = (i32, usize)>,
        diffs: impl IntoIterator<Item = (i32, RationalMatrix)>,
    ) -> Result<ChainComplex> {
        let dims: BTreeMap<i32, usize> = dims.into_iter().filter(|(_, d)| *d > 0).collect();
        let mut stored = BTreeMap::new();
        for (k, m) in diffs {
            let (r, c) = (
                dims.get(&(k - 1)).copied().unwrap_or(0),
                dims.get(&k).copied().unwrap_or(0),
            );
            if m.nrows() != r || m.ncols() != c {
                return Err(Error::Shape(format!(
                    "d_{k} is {}x{} but degrees {k}, {} have dims {c}, {r}",
                    m.nrows(),
                    m.ncols(),
                    k - 1
                )));
            }
            if !m.is_zero() {
                stored.insert(k, m);
            }
        }
        let c = ChainComplex {
            dims,
            diffs: stored,
            ranks: OnceLock::new(),
        };
        c.check_square_zero()?;
        Ok(c)
    }

    /// A complex with zero differential.
    pub fn from_space(space: &GradedSpace) -> ChainComplex {
        ChainComplex {
            dims: space.dims.clone(),
            diffs: BTreeMap::new(),
            ranks: OnceLock::new(),
        }
    }

    pub fn zero() -> ChainComplex {
        ChainComplex::from_space(&GradedSpace::new())
    }

    /// ℚ in degree 0.
    pub fn unit() -> ChainComplex {
        ChainComplex::from_space(&GradedSpace::line(0))
    }

    fn check_square_zero(&self) -> Result<()> {
        for (&k, dk) in &self.diffs {
            if let Some(dk1) = self.diffs.get(&(k - 1)) {
                if !dk1.mul(dk)?.is_zero() {
                    return Err(Error::NotAComplex { degree: k });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self, k: i32) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }

    pub fn space(&self) -> GradedSpace {
        GradedSpace {
            dims: self.dims.clone(),
        }
    }

    /// Degrees with nonzero chain groups, ascending.
    pub fn degrees(&self) -> impl DoubleEndedIterator<Item = i32> + '_ {
        self.dims.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// `d_k` as a `dim(k−1) × dim(k)` matrix.
    pub fn differential(&self, k: i32) -> RationalMatrix {
        self.diffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| RationalMatrix::zeros(self.dim(k - 1), self.dim(k)))
    }

    pub fn differential_ref(&self, k: i32) -> Option<&RationalMatrix> {
        self.diffs.get(&k)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.space().euler_characteristic()
    }

    /// Rank of every nonzero differential, computed once.
    pub fn ranks(&self) -> &BTreeMap<i32, usize> {
        self.ranks
            .get_or_init(|| self.diffs.iter().map(|(k, m)| (*k, m.rank())).collect())
    }

    pub fn rank(&self, k: i32) -> usize {
        self.ranks().get(&k).copied().unwrap_or(0)
    }

    /// Homology dimensions via `dim H_k = dim C_k − rank d_k − rank d_{k+1}`.
    pub fn homology_dims(&self) -> GradedSpace {
        let h = GradedSpace::from_pairs(
            self.degrees()
                .map(|k| (k, self.dim(k) - self.rank(k) - self.rank(k + 1))),
        );
        assert_eq!(
            h.euler_characteristic(),
            self.euler_characteristic(),
            "Euler characteristic mismatch"
        );
        h
    }

    /// Homology with representative cycles. Elimination here is
    /// Gauss–Jordan with deterministic pivots, so this is meant for small
    /// complexes; use [`ChainComplex::homology_dims`] for large ones.
    pub fn homology(&self) -> Homology {
        let mut dims = GradedSpace::new();
        let mut reps = BTreeMap::new();
        for k in self.degrees() {
            let chosen = self.homology_representatives(k);
            dims.add(k, chosen.len());
            if !chosen.is_empty() {
                reps.insert(k, chosen);
            }
        }
        assert_eq!(
            dims.euler_characteristic(),
            self.euler_characteristic(),
            "Euler characteristic mismatch"
        );
        Homology {
            dims,
            representatives: reps,
        }
    }

    /// Cycles in degree `k` whose classes form a basis of `H_k`.
    pub fn homology_representatives(&self, k: i32) -> Vec<SparseVec> {
        let cycles: Vec<SparseVec> = match self.diffs.get(&k) {
            Some(d) => d.row_reduce().kernel.into_columns(),
            None => (0..self.dim(k)).map(SparseVec::unit).collect(),
        };
        let mut ech = TrackedEchelon::new();
        if let Some(d1) = self.diffs.get(&(k + 1)) {
            for col in d1.columns() {
                ech.insert(col.clone());
            }
        }
        cycles
            .into_iter()
            .filter(|z| ech.insert(z.clone()))
            .collect()
    }
}

/// Homology dimensions together with cycles whose classes form a basis.
#[derive(Clone, Debug)]
pub struct Homology {
    pub dims: GradedSpace,
    pub representatives: BTreeMap<i32, Vec<SparseVec>>,
}

impl Homology {
    pub fn representatives(&self, k: i32) -> &[SparseVec] {
        self.representatives.get(&k).map_or(&[], |v| v.as_slice())
    }
}

/// A degree-preserving map of complexes commuting with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: BTreeMap<i32, RationalMatrix>,
}

impl ChainMap {
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        components: impl IntoIterator<Item = (i32, RationalMatrix)>,
    ) -> Result<ChainMap> {
        let mut stored = BTreeMap::new();
        for (k, m) in components {
            if m.nrows() != target.dim(k) || m.ncols() != source.dim(k) {
                return Err(Error::Shape(format!(
                    "component f_{k} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    target.dim(k),
                    source.dim(k)
                )));
            }
            if !m.is_zero() {
                stored.insert(k, m);
            }
        }
        let f = ChainMap {
            source,
            target,
            components: stored,
        };
        let degrees: Vec<i32> = f.source.degrees().collect();
        for k in degrees {
            let lhs = f.target.differential(k).mul(&f.component(k))?;
            let rhs = f.component(k - 1).mul(&f.source.differential(k))?;
            if lhs != rhs {
                return Err(Error::NotAChainMap { degree: k });
            }
        }
        Ok(f)
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        let comps: Vec<(i32, RationalMatrix)> = c
            .degrees()
            .map(|k| (k, RationalMatrix::identity(c.dim(k))))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            components: comps.into_iter().collect(),
        }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> ChainMap {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            components: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn component(&self, k: i32) -> RationalMatrix {
        self.components
            .get(&k)
            .cloned()
            .unwrap_or_else(|| RationalMatrix::zeros(self.target.dim(k), self.source.dim(k)))
    }

    /// Rank of the induced map on homology in degree `k`.
    pub fn homology_rank(&self, k: i32) -> usize {
        // rank H(f)_k = rank [f_k Z_k | B_k] − rank B_k in the target.
        if self.source.homology_dims().dim(k) == 0 || self.target.homology_dims().dim(k) == 0 {
            return 0;
        }
        let b: Vec<SparseVec> = self.target.differential(k + 1).into_columns();
        let f = self.component(k);
        let images: Vec<SparseVec> = self
            .source
            .homology_representatives(k)
            .iter()
            .map(|z| f.mul_vec(z))
            .collect();
        let rows = self.target.dim(k);
        let base = RationalMatrix::from_columns_unchecked(rows, b.clone()).rank();
        let mut all = b;
        all.extend(images);
        RationalMatrix::from_columns_unchecked(rows, all).rank() - base
    }
}

/// `cone(f)_k = target_k ⊕ source_{k−1}` with
/// `d(b, a) = (d b + f a, −d a)`.
pub fn mapping_cone(f: &ChainMap) -> Result<ChainComplex> {
    let (a, b) = (&f.source, &f.target);
    let lo = a
        .degrees()
        .next()
        .map(|k| k + 1)
        .into_iter()
        .chain(b.degrees().next())
        .min();
    let hi = a
        .degrees()
        .next_back()
        .map(|k| k + 1)
        .into_iter()
        .chain(b.degrees().next_back())
        .max();
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Ok(ChainComplex::zero());
    };
    let dims: Vec<(i32, usize)> = (lo..=hi).map(|k| (k, b.dim(k) + a.dim(k - 1))).collect();
    let mut diffs = Vec::new();
    for k in lo..=hi {
        let m = RationalMatrix::from_blocks(
            &[b.dim(k - 1), a.dim(k - 2)],
            &[b.dim(k), a.dim(k - 1)],
            vec![
                (0, 0, b.differential(k)),
                (0, 1, f.component(k - 1)),
                (1, 1, a.differential(k - 1).scale(&Q::from_int(-1))),
            ],
        )?;
        diffs.push((k, m));
    }
    ChainComplex::new(dims, diffs)
}

/// Tensor product with `d(x ⊗ y) = dx ⊗ y + (−1)^{|x|} x ⊗ dy`. Degree `n`
/// is ordered by the degree `i` of the left factor, ascending, and within
/// each block by `x_index * dim B_j + y_index`.
pub fn tensor_complexes(a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
    let (layout, dims) = tensor_layout(a, b);
    let mut diffs = Vec::new();
    for (&n, blocks) in &layout {
        let Some(lower) = layout.get(&(n - 1)) else {
            continue;
        };
        let row_dims: Vec<usize> = lower
            .iter()
            .map(|&(i, _)| a.dim(i) * b.dim(n - 1 - i))
            .collect();
        let col_dims: Vec<usize> = blocks
            .iter()
            .map(|&(i, _)| a.dim(i) * b.dim(n - i))
            .collect();
        let row_of = |i: i32| lower.iter().position(|&(li, _)| li == i);
        let mut parts = Vec::new();
        for (c, &(i, _)) in blocks.iter().enumerate() {
            let j = n - i;
            if let Some(r) = row_of(i - 1) {
                parts.push((
                    r,
                    c,
                    a.differential(i).kron(&RationalMatrix::identity(b.dim(j))),
                ));
            }
            if let Some(r) = row_of(i) {
                let sign = if i.rem_euclid(2) == 0 {
                    Q::one()
                } else {
                    Q::from_int(-1)
                };
                parts.push((
                    r,
                    c,
                    RationalMatrix::identity(a.dim(i))
                        .kron(&b.differential(j))
                        .scale(&sign),
                ));
            }
        }
        diffs.push((n, RationalMatrix::from_blocks(&row_dims, &col_dims, parts)?));
    }
    ChainComplex::new(dims, diffs)
}

/// Blocks `(left degree, offset)` of each total degree.
pub(crate) type TensorBlocks = BTreeMap<i32, Vec<(i32, usize)>>;

/// For each total degree, the list of `(left degree, offset)` blocks.
pub(crate) fn tensor_layout(
    a: &ChainComplex,
    b: &ChainComplex,
) -> (TensorBlocks, Vec<(i32, usize)>) {
    let mut layout = TensorBlocks::new();
    for i in a.degrees() {
        for j in b.degrees() {
            layout.entry(i + j).or_default().push((i, 0));
        }
    }
    let mut dims = Vec::new();
    for (&n, blocks) in layout.iter_mut() {
        blocks.sort_by_key(|&(i, _)| i);
        let mut off = 0;
        for blk in blocks.iter_mut() {
            blk.1 = off;
            off += a.dim(blk.0) * b.dim(n - blk.0);
        }
        dims.push((n, off));
    }
    (layout, dims)
}

/// Shifts degrees up by `k` and multiplies the differential by `(−1)^k`.
pub fn shift_complex(a: &ChainComplex, k: i32) -> ChainComplex {
    let sign = if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        Q::from_int(-1)
    };
    ChainComplex {
        dims: a.dims.iter().map(|(d, n)| (d + k, *n)).collect(),
        diffs: a
            .diffs
            .iter()
            .map(|(d, m)| (d + k, m.scale(&sign)))
            .collect(),
        ranks: OnceLock::new(),
    }
}

pub fn direct_sum(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let mut dims = a.dims.clone();
    for (k, d) in &b.dims {
        *dims.entry(*k).or_insert(0) += d;
    }
    let mut diffs = BTreeMap::new();
    for &k in dims.keys() {
        let m = a.differential(k).direct_sum(&b.differential(k));
        if !m.is_zero() {
            diffs.insert(k, m);
        }
    }
    ChainComplex {
        dims,
        diffs,
        ranks: OnceLock::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn identity_complex_is_exact() {
        let c = ChainComplex::new([(0, 1), (1, 1)], [(1, RationalMatrix::identity(1))]).unwrap();
        assert!(c.homology_dims().is_zero());
        assert!(c.homology().dims.is_zero());
    }

    #[test]
    fn zero_differential() {
        let c = ChainComplex::from_space(&GradedSpace::from_pairs([(0, 1), (1, 1)]));
        assert_eq!(c.homology_dims(), GradedSpace::from_pairs([(0, 1), (1, 1)]));
    }

    #[test]
    fn surjection_three_to_one() {
        let d = RationalMatrix::from_i64(&[&[1, 1, 1]]);
        let c = ChainComplex::new([(1, 1), (2, 3)], [(2, d)]).unwrap();
        let h = c.homology();
        assert_eq!(h.dims.dim(2), 2);
        assert_eq!(h.dims.dim(1), 0);
        assert_eq!(h.representatives(2).len(), 2);
    }

    #[test]
    fn rejects_nonzero_square() {
        let d = RationalMatrix::identity(1);
        let err =
            ChainComplex::new([(0, 1), (1, 1), (2, 1)], [(1, d.clone()), (2, d)]).unwrap_err();
        assert_eq!(err, Error::NotAComplex { degree: 2 });
    }

    #[test]
    fn cone_of_identity_and_doubling() {
        let c = ChainComplex::new(
            [(0, 1), (1, 2)],
            [(1, RationalMatrix::from_i64(&[&[1, 0]]))],
        )
        .unwrap();
        let cone = mapping_cone(&ChainMap::identity(&c)).unwrap();
        assert!(cone.homology_dims().is_zero());
        let l = ChainComplex::unit();
        let f = ChainMap::new(
            l.clone(),
            l.clone(),
            [(0, RationalMatrix::scalar(1, &q(2)))],
        )
        .unwrap();
        assert!(mapping_cone(&f).unwrap().homology_dims().is_zero());
    }

    #[test]
    fn cone_of_zero_map() {
        let a = ChainComplex::from_space(&GradedSpace::from_pairs([(0, 1), (2, 2)]));
        let b = ChainComplex::from_space(&GradedSpace::from_pairs([(1, 3)]));
        let cone = mapping_cone(&ChainMap::zero(&a, &b)).unwrap();
        assert_eq!(
            cone.homology_dims(),
            b.space().direct_sum(&a.space().shift(1))
        );
    }

    #[test]
    fn tensor_unit_and_degrees() {
        let a = ChainComplex::new(
            [(0, 1), (1, 2)],
            [(1, RationalMatrix::from_i64(&[&[1, -1]]))],
        )
        .unwrap();
        assert_eq!(tensor_complexes(&a, &ChainComplex::unit()).unwrap(), a);
        let l = ChainComplex::from_space(&GradedSpace::line(1));
        assert_eq!(
            tensor_complexes(&l, &l).unwrap().space(),
            GradedSpace::line(2)
        );
    }

    #[test]
    fn shift_round_trip() {
        let a = ChainComplex::new(
            [(0, 1), (1, 2)],
            [(1, RationalMatrix::from_i64(&[&[1, -1]]))],
        )
        .unwrap();
        assert_eq!(shift_complex(&a, 0), a);
        assert_eq!(shift_complex(&shift_complex(&a, 3), -3), a);
        assert_eq!(
            shift_complex(&ChainComplex::unit(), 1).space(),
            GradedSpace::line(1)
        );
    }
}

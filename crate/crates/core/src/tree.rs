//! Rooted trees with labelled leaves and labelled vertices.
//!
//! A tree with leaves `{0..d−1}` is canonical when the children of every
//! vertex are sorted by their minimal leaf. Vertices are then ordered by a
//! depth-first preorder traversal, and that order is the order of the tensor
//! factors the vertex labels contribute. A canonical tree is encoded as the
//! preorder token sequence: a vertex of arity `k` with label `ℓ` is
//! `[NODE | k, ℓ]`, a leaf is its number.

use rustc_hash::FxHashMap;

use crate::linalg::SparseVec;
use crate::perm::{koszul_sign, rgs_blocks, set_partitions, Perm};
use crate::rational::Q;

pub const NODE: u32 = 1 << 31;

pub type TreeKey = Vec<u32>;

/// Vertex labels: a graded `Σ_k`-module in each arity `k`, with a
/// homogeneous basis.
pub trait LabelSource {
    fn label_dim(&self, k: usize) -> usize;
    fn label_degree(&self, k: usize, idx: usize) -> i32;
    /// `σ · e_idx` in arity `k`.
    fn act_label(&self, k: usize, perm: &Perm, idx: usize) -> SparseVec;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Child {
    Leaf(u32),
    Vertex(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeVertex {
    pub label: u32,
    pub children: Vec<Child>,
}

/// A decoded canonical tree; `vertices` are in preorder, the root first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    pub vertices: Vec<TreeVertex>,
    pub n_leaves: usize,
}

impl Tree {
    pub fn decode(key: &[u32]) -> Tree {
        fn go(
            key: &[u32],
            pos: &mut usize,
            out: &mut Vec<TreeVertex>,
            leaves: &mut usize,
        ) -> Child {
            let tok = key[*pos];
            if tok & NODE == 0 {
                *pos += 1;
                *leaves += 1;
                return Child::Leaf(tok);
            }
            let k = (tok & !NODE) as usize;
            let label = key[*pos + 1];
            *pos += 2;
            let me = out.len();
            out.push(TreeVertex {
                label,
                children: Vec::with_capacity(k),
            });
            for _ in 0..k {
                let c = go(key, pos, out, leaves);
                out[me].children.push(c);
            }
            Child::Vertex(me as u32)
        }
        let mut vertices = Vec::new();
        let mut pos = 0;
        let mut n_leaves = 0;
        go(key, &mut pos, &mut vertices, &mut n_leaves);
        debug_assert_eq!(pos, key.len());
        Tree { vertices, n_leaves }
    }

    /// Encodes in preorder starting from the root; vertices must already
    /// be stored in preorder.
    pub fn encode(&self) -> TreeKey {
        fn go(t: &Tree, c: Child, out: &mut Vec<u32>) {
            match c {
                Child::Leaf(l) => out.push(l),
                Child::Vertex(v) => {
                    let tv = &t.vertices[v as usize];
                    out.push(NODE | tv.children.len() as u32);
                    out.push(tv.label);
                    for &ch in &tv.children {
                        go(t, ch, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        if self.vertices.is_empty() {
            out.push(0);
        } else {
            go(self, Child::Vertex(0), &mut out);
        }
        out
    }

    pub fn arity(&self, v: usize) -> usize {
        self.vertices[v].children.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// `parent[v] = Some((u, j))` when `v` is the `j`-th child of `u`.
    pub fn parents(&self) -> Vec<Option<(usize, usize)>> {
        let mut p = vec![None; self.vertices.len()];
        for (u, tv) in self.vertices.iter().enumerate() {
            for (j, c) in tv.children.iter().enumerate() {
                if let Child::Vertex(v) = c {
                    p[*v as usize] = Some((u, j));
                }
            }
        }
        p
    }

    /// Sorted leaves above vertex `v`.
    pub fn leaves_under(&self, v: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let mut stack = vec![Child::Vertex(v as u32)];
        while let Some(c) = stack.pop() {
            match c {
                Child::Leaf(l) => out.push(l),
                Child::Vertex(w) => {
                    stack.extend(self.vertices[w as usize].children.iter().copied())
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Number of vertices in the subtree at `v` (a contiguous preorder
    /// segment starting at `v`).
    pub fn subtree_size(&self, v: usize) -> usize {
        1 + self.vertices[v]
            .children
            .iter()
            .map(|c| match c {
                Child::Vertex(w) => self.subtree_size(*w as usize),
                Child::Leaf(_) => 0,
            })
            .sum::<usize>()
    }

    /// Internal edges as `(parent, child position, child vertex)`, in
    /// preorder of the child vertex.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let parents = self.parents();
        (1..self.vertices.len())
            .map(|v| {
                let (u, j) = parents[v].expect("non-root vertex has a parent");
                (u, j, v)
            })
            .collect()
    }

    pub fn degree(&self, src: &dyn LabelSource, shift: i32) -> i32 {
        self.vertices
            .iter()
            .map(|v| src.label_degree(v.children.len(), v.label as usize) + shift)
            .sum()
    }

    /// Converts to a raw tree whose vertex order is the preorder.
    pub fn to_raw(&self, src: &dyn LabelSource, shift: i32) -> RawTree {
        RawTree {
            vertices: self
                .vertices
                .iter()
                .map(|v| {
                    let k = v.children.len();
                    RawVertex {
                        label: SparseVec::unit(v.label as usize),
                        degree: src.label_degree(k, v.label as usize) + shift,
                        children: v.children.clone(),
                    }
                })
                .collect(),
            root: 0,
        }
    }
}

/// Degree of the tree encoded by `key`.
pub fn key_degree(key: &[u32], src: &dyn LabelSource, shift: i32) -> i32 {
    let mut deg = 0;
    let mut pos = 0;
    while pos < key.len() {
        let tok = key[pos];
        if tok & NODE != 0 {
            deg += src.label_degree((tok & !NODE) as usize, key[pos + 1] as usize) + shift;
            pos += 2;
        } else {
            pos += 1;
        }
    }
    deg
}

/// A tree in arbitrary vertex order with linear-combination labels; the
/// vertex order is the order of tensor factors.
#[derive(Clone, Debug)]
pub struct RawVertex {
    pub label: SparseVec,
    /// Total degree of the factor (label degree plus vertex shift).
    pub degree: i32,
    pub children: Vec<Child>,
}

#[derive(Clone, Debug)]
pub struct RawTree {
    pub vertices: Vec<RawVertex>,
    pub root: usize,
}

impl RawTree {
    /// Rewrites as a linear combination of canonical trees. Children are
    /// sorted by minimal leaf, each label is acted on by the induced
    /// permutation of its inputs, and the Koszul sign of moving factors into
    /// preorder is applied.
    pub fn canonicalize(&self, src: &dyn LabelSource) -> Vec<(TreeKey, Q)> {
        let nv = self.vertices.len();
        if nv == 0 {
            return vec![(vec![0], Q::one())];
        }
        let mut minleaf = vec![u32::MAX; nv];
        fn compute_min(t: &RawTree, v: usize, memo: &mut [u32]) -> u32 {
            if memo[v] != u32::MAX {
                return memo[v];
            }
            let m = t.vertices[v]
                .children
                .iter()
                .map(|c| match c {
                    Child::Leaf(l) => *l,
                    Child::Vertex(w) => compute_min(t, *w as usize, memo),
                })
                .min()
                .expect("vertices have children");
            memo[v] = m;
            m
        }
        compute_min(self, self.root, &mut minleaf);
        let child_min = |c: &Child, memo: &[u32]| match c {
            Child::Leaf(l) => *l,
            Child::Vertex(w) => memo[*w as usize],
        };
        // Sorted children and the permutation of each label's inputs.
        let mut sorted_children: Vec<Vec<Child>> = Vec::with_capacity(nv);
        let mut labels: Vec<SparseVec> = Vec::with_capacity(nv);
        for v in &self.vertices {
            let keys: Vec<usize> = v
                .children
                .iter()
                .map(|c| child_min(c, &minleaf) as usize)
                .collect();
            let sigma = Perm::sorting(&keys);
            let mut ch = vec![Child::Leaf(0); keys.len()];
            for (old, c) in v.children.iter().enumerate() {
                ch[sigma.apply(old)] = *c;
            }
            sorted_children.push(ch);
            if sigma.is_identity() {
                labels.push(v.label.clone());
            } else {
                let k = keys.len();
                let mut acc = crate::linalg::Accumulator::new();
                for (idx, c) in v.label.iter() {
                    acc.add_vec(&src.act_label(k, &sigma, idx), c);
                }
                labels.push(acc.finish());
            }
        }
        if labels.iter().any(|l| l.is_empty()) {
            return Vec::new();
        }
        // Preorder of the canonical tree.
        let mut order = Vec::with_capacity(nv);
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            for c in sorted_children[v].iter().rev() {
                if let Child::Vertex(w) = c {
                    stack.push(*w as usize);
                }
            }
        }
        let odd: Vec<bool> = self
            .vertices
            .iter()
            .map(|v| v.degree.rem_euclid(2) == 1)
            .collect();
        let sign = koszul_sign(&order, &odd);
        // Expand the product of labels.
        let mut out: Vec<(TreeKey, Q)> = Vec::new();
        let mut choice = vec![0usize; nv];
        loop {
            let mut coeff = Q::from_int(sign);
            for &v in &order {
                coeff = &coeff * &labels[v].entries()[choice[v]].1;
            }
            let mut key = Vec::with_capacity(3 * nv + 1);
            fn emit(
                v: usize,
                sorted: &[Vec<Child>],
                labels: &[SparseVec],
                choice: &[usize],
                key: &mut Vec<u32>,
            ) {
                key.push(NODE | sorted[v].len() as u32);
                key.push(labels[v].entries()[choice[v]].0 as u32);
                for c in &sorted[v] {
                    match c {
                        Child::Leaf(l) => key.push(*l),
                        Child::Vertex(w) => emit(*w as usize, sorted, labels, choice, key),
                    }
                }
            }
            emit(self.root, &sorted_children, &labels, &choice, &mut key);
            out.push((key, coeff));
            // Odometer over label terms.
            let mut pos = 0;
            loop {
                if pos == nv {
                    return out;
                }
                let v = order[pos];
                choice[v] += 1;
                if choice[v] < labels[v].nnz() {
                    break;
                }
                choice[v] = 0;
                pos += 1;
            }
        }
    }
}

/// `σ · T`: relabel leaf `j` as `σ(j)` and canonicalize.
pub fn act_on_tree(
    key: &[u32],
    sigma: &Perm,
    src: &dyn LabelSource,
    shift: i32,
) -> Vec<(TreeKey, Q)> {
    let t = Tree::decode(key);
    if t.vertices.is_empty() {
        return vec![(key.to_vec(), Q::one())];
    }
    let mut raw = t.to_raw(src, shift);
    for v in &mut raw.vertices {
        for c in &mut v.children {
            if let Child::Leaf(l) = c {
                *l = sigma.apply(*l as usize) as u32;
            }
        }
    }
    raw.canonicalize(src)
}

/// All canonical trees with leaves `{0..d−1}` whose vertices have arity in
/// `arities` (each at least 2) and labels from `src`, sorted by key. The
/// unit tree (a bare leaf) is returned for `d = 1`.
pub fn enumerate_trees(
    d: usize,
    src: &dyn LabelSource,
    arity_ok: &dyn Fn(usize) -> bool,
) -> Vec<TreeKey> {
    if d == 1 {
        return vec![vec![0]];
    }
    let leaves: Vec<u32> = (0..d as u32).collect();
    let mut memo: FxHashMap<Vec<u32>, Vec<TreeKey>> = FxHashMap::default();
    let mut out = subtrees(&leaves, src, arity_ok, &mut memo);
    out.sort();
    out
}

fn subtrees(
    leaves: &[u32],
    src: &dyn LabelSource,
    arity_ok: &dyn Fn(usize) -> bool,
    memo: &mut FxHashMap<Vec<u32>, Vec<TreeKey>>,
) -> Vec<TreeKey> {
    if let Some(v) = memo.get(leaves) {
        return v.clone();
    }
    let n = leaves.len();
    let mut out = Vec::new();
    for rgs in set_partitions(n) {
        let blocks = rgs_blocks(&rgs);
        let m = blocks.len();
        if m < 2 || !arity_ok(m) || src.label_dim(m) == 0 {
            continue;
        }
        let options: Vec<Vec<TreeKey>> = blocks
            .iter()
            .map(|b| {
                if b.len() == 1 {
                    vec![vec![leaves[b[0]]]]
                } else {
                    let sub: Vec<u32> = b.iter().map(|&i| leaves[i]).collect();
                    subtrees(&sub, src, arity_ok, memo)
                }
            })
            .collect();
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; m];
        'product: loop {
            for label in 0..src.label_dim(m) {
                let mut key = vec![NODE | m as u32, label as u32];
                for (b, &i) in idx.iter().enumerate() {
                    key.extend_from_slice(&options[b][i]);
                }
                out.push(key);
            }
            for b in 0..m {
                idx[b] += 1;
                if idx[b] < options[b].len() {
                    continue 'product;
                }
                idx[b] = 0;
            }
            break;
        }
    }
    memo.insert(leaves.to_vec(), out.clone());
    out
}

/// Grafts `b` (with `k` leaves) onto leaf `i` of `a` (with `m` leaves) and
/// canonicalizes. Factors are ordered as all of `a` followed by all of `b`.
pub fn graft(
    a: &[u32],
    m: usize,
    i: usize,
    b: &[u32],
    k: usize,
    src: &dyn LabelSource,
    shift: i32,
) -> Vec<(TreeKey, Q)> {
    let ta = Tree::decode(a);
    let tb = Tree::decode(b);
    let relabel_b = |l: u32| l + i as u32;
    if tb.vertices.is_empty() {
        return vec![(a.to_vec(), Q::one())];
    }
    if ta.vertices.is_empty() {
        return vec![(b.to_vec(), Q::one())];
    }
    debug_assert_eq!(ta.n_leaves, m);
    debug_assert_eq!(tb.n_leaves, k);
    let mut raw = ta.to_raw(src, shift);
    let off = raw.vertices.len() as u32;
    for v in &mut raw.vertices {
        for c in &mut v.children {
            if let Child::Leaf(l) = *c {
                if l as usize == i {
                    *c = Child::Vertex(off);
                } else if l as usize > i {
                    *c = Child::Leaf(l + k as u32 - 1);
                }
            }
        }
    }
    let rb = tb.to_raw(src, shift);
    for mut v in rb.vertices {
        for c in &mut v.children {
            *c = match *c {
                Child::Leaf(l) => Child::Leaf(relabel_b(l)),
                Child::Vertex(w) => Child::Vertex(w + off),
            };
        }
        raw.vertices.push(v);
    }
    raw.canonicalize(src)
}

/// Double factorial `(2n−3)!!`, the number of binary trees with `n`
/// labelled leaves.
pub fn binary_tree_count(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    (1..=2 * n - 3).step_by(2).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One label in each arity ≥ 2, degree `deg`, with trivial action.
    struct Trivial(i32);
    impl LabelSource for Trivial {
        fn label_dim(&self, k: usize) -> usize {
            usize::from(k >= 2)
        }
        fn label_degree(&self, _: usize, _: usize) -> i32 {
            self.0
        }
        fn act_label(&self, _: usize, _: &Perm, idx: usize) -> SparseVec {
            SparseVec::unit(idx)
        }
    }

    #[test]
    fn binary_counts() {
        let src = Trivial(0);
        for n in 2..=6 {
            let trees = enumerate_trees(n, &src, &|k| k == 2);
            assert_eq!(trees.len(), binary_tree_count(n), "n = {n}");
        }
        assert_eq!(binary_tree_count(4), 15);
    }

    #[test]
    fn all_trees_counts() {
        // Phylogenetic trees (Schröder's fourth problem): 1, 1, 4, 26, 236.
        let src = Trivial(0);
        let counts: Vec<usize> = (1..=5)
            .map(|n| enumerate_trees(n, &src, &|_| true).len())
            .collect();
        assert_eq!(counts, vec![1, 1, 4, 26, 236]);
    }

    #[test]
    fn decode_encode_round_trip() {
        let src = Trivial(0);
        for key in enumerate_trees(5, &src, &|_| true) {
            assert_eq!(Tree::decode(&key).encode(), key);
        }
    }

    #[test]
    fn action_is_a_group_action() {
        let src = Trivial(1);
        let trees = enumerate_trees(4, &src, &|_| true);
        let s = Perm::from_images(vec![1, 2, 0, 3]).unwrap();
        let t = Perm::from_images(vec![3, 0, 1, 2]).unwrap();
        for key in &trees {
            let direct = act_on_tree(key, &s.compose(&t), &src, 0);
            let step: Vec<(TreeKey, Q)> = act_on_tree(key, &t, &src, 0)
                .into_iter()
                .flat_map(|(k1, c1)| {
                    act_on_tree(&k1, &s, &src, 0)
                        .into_iter()
                        .map(move |(k2, c2)| (k2, &c1 * &c2))
                })
                .collect();
            assert_eq!(direct, step);
        }
    }
}

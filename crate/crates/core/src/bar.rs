//! Bar and cobar constructions on labelled-tree bases, the counit of the
//! bar-cobar adjunction, and the verification suites built on them.
//!
//! In `B𝒪(d)` a vertex labelled by `ℓ ∈ 𝒪̄` contributes a factor of degree
//! `|ℓ| + 1`; in `C𝒬(d)` a vertex labelled by `q ∈ 𝒬̄` contributes
//! `|q| − 1`. Factors are ordered by the preorder of the canonical tree.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use serde_json::json;

use crate::complex::{mapping_cone, ChainComplex, ChainMap, GradedSpace};
use crate::cooperad::{proper_masks, CoTerm, Cooperad, Cut};
use crate::error::{Error, Result};
use crate::linalg::{Accumulator, RationalMatrix, SparseVec};
use crate::operad::{ArityTerm, Operad};
use crate::perm::Perm;
use crate::rational::Q;
use crate::report::{character_json, space_json, CheckResult};
use crate::sigma::{CharacterTable, SigmaComplex};
use crate::tree::{
    act_on_tree, enumerate_trees, key_degree, Child, LabelSource, RawTree, RawVertex, Tree,
    TreeKey, TreeVertex,
};

/// A `Σ_d`-complex whose basis in each degree is a sorted list of
/// canonical trees.
#[derive(Clone, Debug)]
pub struct TreeComplex {
    arity: usize,
    basis: BTreeMap<i32, Vec<TreeKey>>,
    index: FxHashMap<TreeKey, (i32, usize)>,
    sigma: SigmaComplex,
}

impl TreeComplex {
    /// Enumerates all canonical trees with `d` leaves labelled by `src`,
    /// grades them by label degrees plus `shift` per vertex, and assembles
    /// the differential and the `Σ_d`-action. `d² = 0` and the Coxeter
    /// relations are verified.
    pub fn build(
        d: usize,
        src: &dyn LabelSource,
        shift: i32,
        differential: impl Fn(&[u32]) -> Vec<(TreeKey, Q)>,
    ) -> Result<TreeComplex> {
        let keys = enumerate_trees(d, src, &|_| true);
        let mut basis: BTreeMap<i32, Vec<TreeKey>> = BTreeMap::new();
        for key in keys {
            let deg = if d == 1 {
                0
            } else {
                key_degree(&key, src, shift)
            };
            basis.entry(deg).or_default().push(key);
        }
        let mut index = FxHashMap::default();
        for (&k, keys) in &basis {
            for (i, key) in keys.iter().enumerate() {
                index.insert(key.clone(), (k, i));
            }
        }
        let express = |combo: Vec<(TreeKey, Q)>, k: i32| -> Result<SparseVec> {
            let mut acc = Accumulator::new();
            for (key, c) in combo {
                match index.get(&key) {
                    Some(&(kk, i)) if kk == k => acc.add(i, &c),
                    _ => {
                        return Err(Error::Invalid(format!(
                            "tree {key:?} is not a basis element of degree {k}"
                        )))
                    }
                }
            }
            Ok(acc.finish())
        };
        let mut diffs = Vec::new();
        for (&k, keys) in &basis {
            let rows = basis.get(&(k - 1)).map_or(0, Vec::len);
            let cols = keys
                .iter()
                .map(|key| express(differential(key), k - 1))
                .collect::<Result<Vec<_>>>()?;
            diffs.push((k, RationalMatrix::from_columns(rows, cols)?));
        }
        let complex = ChainComplex::new(basis.iter().map(|(k, v)| (*k, v.len())), diffs)?;
        let mut generators = BTreeMap::new();
        for (&k, keys) in &basis {
            let mats = (0..d.saturating_sub(1))
                .map(|i| {
                    let s = Perm::transposition(d, i);
                    let cols = keys
                        .iter()
                        .map(|key| express(act_on_tree(key, &s, src, shift), k))
                        .collect::<Result<Vec<_>>>()?;
                    RationalMatrix::from_columns(keys.len(), cols)
                })
                .collect::<Result<Vec<_>>>()?;
            generators.insert(k, mats);
        }
        let sigma = SigmaComplex::new(d, complex, generators)?;
        Ok(TreeComplex {
            arity: d,
            basis,
            index,
            sigma,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn sigma(&self) -> &SigmaComplex {
        &self.sigma
    }

    pub fn complex(&self) -> &ChainComplex {
        self.sigma.complex()
    }

    pub fn basis(&self, k: i32) -> &[TreeKey] {
        self.basis.get(&k).map_or(&[], Vec::as_slice)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.basis.keys().copied()
    }

    pub fn index_of(&self, key: &[u32]) -> Option<(i32, usize)> {
        self.index.get(key).copied()
    }

    pub fn total_dim(&self) -> usize {
        self.basis.values().map(Vec::len).sum()
    }
}

fn sign_of(e: i32) -> Q {
    if e.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Bar differential: the signed sum over internal edges of contracting the
/// edge and composing the two labels.
pub fn bar_differential(o: &Operad, key: &[u32]) -> Vec<(TreeKey, Q)> {
    let t = Tree::decode(key);
    let nv = t.num_vertices();
    let ldeg: Vec<i32> = t
        .vertices
        .iter()
        .map(|v| o.degree(v.children.len(), v.label as usize))
        .collect();
    let fdeg: Vec<i32> = ldeg.iter().map(|d| d + 1).collect();
    let mut out = Vec::new();
    for (u, j, v) in t.edges() {
        let (m, k) = (t.arity(u), t.arity(v));
        let label = o.compose(
            m,
            j,
            k,
            t.vertices[u].label as usize,
            t.vertices[v].label as usize,
        );
        if label.is_empty() {
            continue;
        }
        let before: i32 = fdeg[..u].iter().sum();
        let between: i32 = fdeg[u + 1..v].iter().sum();
        let sign = sign_of(before + ldeg[u] + fdeg[v] * between);
        let remap = |w: usize| if w > v { w - 1 } else { w };
        let mut vertices = Vec::with_capacity(nv - 1);
        for (w, tv) in t.vertices.iter().enumerate() {
            if w == v {
                continue;
            }
            let fix = |c: &Child| match *c {
                Child::Vertex(x) => Child::Vertex(remap(x as usize) as u32),
                leaf => leaf,
            };
            if w == u {
                let mut children: Vec<Child> = tv.children[..j].iter().map(fix).collect();
                children.extend(t.vertices[v].children.iter().map(fix));
                children.extend(tv.children[j + 1..].iter().map(fix));
                vertices.push(RawVertex {
                    label: label.clone(),
                    degree: fdeg[u] + fdeg[v] - 1,
                    children,
                });
            } else {
                vertices.push(RawVertex {
                    label: SparseVec::unit(tv.label as usize),
                    degree: fdeg[w],
                    children: tv.children.iter().map(fix).collect(),
                });
            }
        }
        for (k2, c) in (RawTree { vertices, root: 0 }).canonicalize(o) {
            out.push((k2, &c * &sign));
        }
    }
    out
}

/// `B𝒪(d)`.
pub fn bar_complex(o: &Operad, d: usize) -> Result<TreeComplex> {
    check_arity(d, o.arity_bound())?;
    TreeComplex::build(d, o, 1, |key| bar_differential(o, key))
}

/// Cobar differential: internal differential of each label plus the signed
/// sum over vertices and proper input subsets of splitting a vertex by a
/// partial cocomposition.
pub fn cobar_differential(q: &Cooperad, key: &[u32]) -> Vec<(TreeKey, Q)> {
    let t = Tree::decode(key);
    let nv = t.num_vertices();
    let ldeg: Vec<i32> = t
        .vertices
        .iter()
        .map(|v| q.degree(v.children.len(), v.label as usize))
        .collect();
    let fdeg: Vec<i32> = ldeg.iter().map(|d| d - 1).collect();
    let mut out = Vec::new();
    for v in 0..nv {
        let n = t.arity(v);
        let label = t.vertices[v].label as usize;
        let before: i32 = fdeg[..v].iter().sum();
        let dv = q.internal_differential(n, label);
        if !dv.is_empty() {
            let mut raw = t.to_raw(q, -1);
            raw.vertices[v].label = dv.clone();
            raw.vertices[v].degree -= 1;
            let sign = sign_of(before + 1);
            for (k2, c) in raw.canonicalize(q) {
                out.push((k2, &c * &sign));
            }
        }
        for mask in proper_masks(n) {
            let terms: &[CoTerm] = q.decompose(n, mask, label);
            if terms.is_empty() {
                continue;
            }
            let cut = Cut::new(n, mask);
            let remap = |w: usize| if w > v { w + 1 } else { w };
            let fix = |c: &Child| match *c {
                Child::Vertex(x) => Child::Vertex(remap(x as usize) as u32),
                leaf => leaf,
            };
            let children = &t.vertices[v].children;
            let outer: Vec<Child> = cut
                .outer
                .iter()
                .map(|&p| {
                    if p == cut.inner[0] {
                        Child::Vertex(v as u32 + 1)
                    } else {
                        fix(&children[p])
                    }
                })
                .collect();
            let inner: Vec<Child> = cut.inner.iter().map(|&p| fix(&children[p])).collect();
            let (m, k) = (cut.outer.len(), cut.inner.len());
            for (q1, q2, c) in terms {
                let (d1, d2) = (q.degree(m, *q1 as usize), q.degree(k, *q2 as usize));
                let mut vertices = Vec::with_capacity(nv + 1);
                for (w, tv) in t.vertices.iter().enumerate() {
                    if w == v {
                        vertices.push(RawVertex {
                            label: SparseVec::unit(*q1 as usize),
                            degree: d1 - 1,
                            children: outer.clone(),
                        });
                        vertices.push(RawVertex {
                            label: SparseVec::unit(*q2 as usize),
                            degree: d2 - 1,
                            children: inner.clone(),
                        });
                    } else {
                        vertices.push(RawVertex {
                            label: SparseVec::unit(tv.label as usize),
                            degree: fdeg[w],
                            children: tv.children.iter().map(fix).collect(),
                        });
                    }
                }
                let sign = -sign_of(before + d1) * c;
                for (k2, x) in (RawTree { vertices, root: 0 }).canonicalize(q) {
                    out.push((k2, &x * &sign));
                }
            }
        }
    }
    out
}

/// `C𝒬(d)`.
pub fn cobar_complex(q: &Cooperad, d: usize) -> Result<TreeComplex> {
    check_arity(d, q.arity_bound())?;
    TreeComplex::build(d, q, -1, |key| cobar_differential(q, key))
}

fn check_arity(d: usize, bound: usize) -> Result<()> {
    if d == 0 || d > bound {
        return Err(Error::ArityBound(d, bound));
    }
    Ok(())
}

/// The bar construction as a cooperad: tree bases in every arity up to the
/// bound, the bar differential as internal differential, and `Δ_S` cutting
/// off the subtree whose leaves are `S`.
#[derive(Clone, Debug)]
pub struct BarCooperad {
    cooperad: Cooperad,
    /// Basis of each arity (index `n − 1`), ordered by degree then key.
    bases: Vec<Vec<TreeKey>>,
    complexes: Vec<TreeComplex>,
}

impl BarCooperad {
    pub fn new(o: &Operad, bound: usize) -> Result<BarCooperad> {
        check_arity(bound, o.arity_bound())?;
        let complexes: Vec<TreeComplex> = (1..=bound)
            .map(|d| bar_complex(o, d))
            .collect::<Result<_>>()?;
        let bases: Vec<Vec<TreeKey>> = complexes
            .iter()
            .map(|c| c.basis.values().flat_map(|v| v.iter().cloned()).collect())
            .collect();
        let flat_index: Vec<FxHashMap<&[u32], usize>> = bases
            .iter()
            .map(|b| {
                b.iter()
                    .enumerate()
                    .map(|(i, k)| (k.as_slice(), i))
                    .collect()
            })
            .collect();
        let mut terms = Vec::with_capacity(bound);
        let mut differential = Vec::with_capacity(bound);
        for (pos, c) in complexes.iter().enumerate() {
            let d = pos + 1;
            let mut offsets = BTreeMap::new();
            let mut degrees = Vec::new();
            for (&k, keys) in &c.basis {
                offsets.insert(k, degrees.len());
                degrees.extend(std::iter::repeat_n(k, keys.len()));
            }
            let total = degrees.len();
            let flatten = |m: &RationalMatrix, row_deg: i32| -> Vec<SparseVec> {
                let ro = offsets.get(&row_deg).copied().unwrap_or(0);
                m.columns()
                    .iter()
                    .map(|col| col.remap(|r| Some(r + ro)))
                    .collect()
            };
            let mut dcols = Vec::with_capacity(total);
            for &k in c.basis.keys() {
                dcols.extend(flatten(&c.complex().differential(k), k - 1));
            }
            differential.push(RationalMatrix::from_columns(total, dcols)?);
            let generators = (0..d.saturating_sub(1))
                .map(|i| {
                    let mut cols = Vec::with_capacity(total);
                    for &k in c.basis.keys() {
                        cols.extend(flatten(&c.sigma().generators(k)[i], k));
                    }
                    RationalMatrix::from_columns(total, cols)
                })
                .collect::<Result<Vec<_>>>()?;
            terms.push(ArityTerm {
                degrees,
                generators,
            });
        }
        let mut decompositions: FxHashMap<(usize, u32), Vec<Vec<CoTerm>>> = FxHashMap::default();
        for n in 3..=bound {
            for (idx, key) in bases[n - 1].iter().enumerate() {
                let t = Tree::decode(key);
                let fdeg: Vec<i32> = t
                    .vertices
                    .iter()
                    .map(|v| o.degree(v.children.len(), v.label as usize) + 1)
                    .collect();
                for v in 1..t.num_vertices() {
                    let size = t.subtree_size(v);
                    let s = t.leaves_under(v);
                    let mask = s.iter().fold(0u32, |m, &l| m | 1 << l);
                    let cut = Cut::new(n, mask);
                    let (lower, upper) = split_tree(&t, v, size, &cut);
                    let seg: i32 = fdeg[v..v + size].iter().sum();
                    let after: i32 = fdeg[v + size..].iter().sum();
                    let c = sign_of(seg * after);
                    let q1 = flat_index[cut.outer.len() - 1][lower.as_slice()];
                    let q2 = flat_index[cut.inner.len() - 1][upper.as_slice()];
                    let table = decompositions
                        .entry((n, mask))
                        .or_insert_with(|| vec![Vec::new(); bases[n - 1].len()]);
                    table[idx].push((q1 as u32, q2 as u32, c));
                }
            }
        }
        let cooperad = Cooperad::from_parts(
            format!("B({})", o.name()),
            terms,
            differential,
            decompositions,
        )?;
        Ok(BarCooperad {
            cooperad,
            bases,
            complexes,
        })
    }

    pub fn cooperad(&self) -> &Cooperad {
        &self.cooperad
    }

    pub fn bar_complex(&self, d: usize) -> &TreeComplex {
        &self.complexes[d - 1]
    }

    pub fn key(&self, n: usize, idx: usize) -> &TreeKey {
        &self.bases[n - 1][idx]
    }

    /// The operad label of a basis element that is a corolla.
    pub fn corolla_label(&self, n: usize, idx: usize) -> Option<usize> {
        let key = &self.bases[n - 1][idx];
        (n >= 2 && key.len() == n + 2).then(|| key[1] as usize)
    }
}

/// Splits `t` at vertex `v` (whose subtree occupies `size` preorder slots)
/// into the lower tree, with the subtree replaced by a leaf, and the upper
/// subtree, each with leaves renumbered by rank.
fn split_tree(t: &Tree, v: usize, size: usize, cut: &Cut) -> (TreeKey, TreeKey) {
    let mut outer_rank = vec![u32::MAX; t.n_leaves];
    for (r, &l) in cut.outer.iter().enumerate() {
        outer_rank[l] = r as u32;
    }
    let mut inner_rank = vec![u32::MAX; t.n_leaves];
    for (r, &l) in cut.inner.iter().enumerate() {
        inner_rank[l] = r as u32;
    }
    let end = v + size;
    let lower_map = |w: usize| if w >= end { w - size } else { w };
    let mut lower = Vec::with_capacity(t.num_vertices() - size);
    for (w, tv) in t.vertices.iter().enumerate() {
        if (v..end).contains(&w) {
            continue;
        }
        let children = tv
            .children
            .iter()
            .map(|c| match *c {
                Child::Leaf(l) => Child::Leaf(outer_rank[l as usize]),
                Child::Vertex(x) if x as usize == v => Child::Leaf(cut.slot as u32),
                Child::Vertex(x) => Child::Vertex(lower_map(x as usize) as u32),
            })
            .collect();
        lower.push(TreeVertex {
            label: tv.label,
            children,
        });
    }
    let upper: Vec<TreeVertex> = t.vertices[v..end]
        .iter()
        .map(|tv| TreeVertex {
            label: tv.label,
            children: tv
                .children
                .iter()
                .map(|c| match *c {
                    Child::Leaf(l) => Child::Leaf(inner_rank[l as usize]),
                    Child::Vertex(x) => Child::Vertex(x - v as u32),
                })
                .collect(),
        })
        .collect();
    (
        Tree {
            vertices: lower,
            n_leaves: cut.outer.len(),
        }
        .encode(),
        Tree {
            vertices: upper,
            n_leaves: cut.inner.len(),
        }
        .encode(),
    )
}

/// Composes the operations of a tree whose vertices carry basis elements of
/// a degree-0 operad, returning the result on the sorted leaves.
fn compose_tree(o: &Operad, t: &Tree, labels: &[usize]) -> SparseVec {
    fn go(o: &Operad, t: &Tree, labels: &[usize], v: usize) -> (SparseVec, Vec<u32>) {
        let tv = &t.vertices[v];
        let m = tv.children.len();
        let mut value = SparseVec::unit(labels[v]);
        let mut arity = m;
        let mut leaf_lists: Vec<Vec<u32>> = Vec::with_capacity(m);
        let mut subs: Vec<Option<(SparseVec, usize)>> = Vec::with_capacity(m);
        for c in &tv.children {
            match *c {
                Child::Leaf(l) => {
                    leaf_lists.push(vec![l]);
                    subs.push(None);
                }
                Child::Vertex(w) => {
                    let (val, leaves) = go(o, t, labels, w as usize);
                    let k = leaves.len();
                    leaf_lists.push(leaves);
                    subs.push(Some((val, k)));
                }
            }
        }
        for j in (0..m).rev() {
            if let Some((val, k)) = &subs[j] {
                value = o.compose_vec(arity, j, *k, &value, val);
                arity += k - 1;
            }
        }
        let order: Vec<u32> = leaf_lists.concat();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        let ranks: Vec<usize> = order
            .iter()
            .map(|l| sorted.binary_search(l).expect("leaf present"))
            .collect();
        let pi = Perm::from_images(ranks).expect("leaf ranks form a permutation");
        (o.act_vec(&pi, &value), sorted)
    }
    go(o, t, labels, 0).0
}

/// The counit `C(B𝒪)(d) → 𝒪(d)` restricted to a cobar complex built on the
/// bar cooperad or one of its truncations: trees whose labels are all
/// corollas are sent to the composite of the corolla labels, everything
/// else to zero. Requires `𝒪` concentrated in degree 0.
pub fn counit(o: &Operad, bar: &BarCooperad, cobar: &TreeComplex) -> Result<ChainMap> {
    if !o.is_degree_zero() {
        return Err(Error::Invalid(
            "the counit is implemented for operads concentrated in degree 0".into(),
        ));
    }
    let d = cobar.arity();
    let target = o.term(d)?.complex().clone();
    let mut cols = Vec::new();
    for key in cobar.basis(0) {
        if d == 1 {
            cols.push(SparseVec::unit(0));
            continue;
        }
        let t = Tree::decode(key);
        let labels: Option<Vec<usize>> = t
            .vertices
            .iter()
            .map(|v| bar.corolla_label(v.children.len(), v.label as usize))
            .collect();
        cols.push(match labels {
            Some(labels) => compose_tree(o, &t, &labels),
            None => SparseVec::new(),
        });
    }
    let f0 = RationalMatrix::from_columns(o.dim(d), cols)?;
    ChainMap::new(cobar.complex().clone(), target, [(0, f0)])
}

/// Homology dimensions and characters of `B𝒪(d)`.
pub fn bar_homology(o: &Operad, d: usize) -> Result<(GradedSpace, CharacterTable)> {
    Ok(bar_complex(o, d)?.sigma().homology_character())
}

/// For each arity `d ≤ max_arity`: `H(C B𝒪)(d)` is concentrated in degree 0
/// with the dimension and characters of `𝒪(d)`, and the counit induces an
/// isomorphism.
pub fn check_koszul_unit(o: &Operad, max_arity: usize) -> Result<Vec<CheckResult>> {
    let bar = BarCooperad::new(o, max_arity)?;
    let mut out = Vec::new();
    for d in 1..=max_arity {
        let cobar = cobar_complex(bar.cooperad(), d)?;
        let (h, chi) = cobar.sigma().homology_character();
        let expected_chi = o.term(d)?.character();
        let f = counit(o, &bar, &cobar)?;
        let rank = f.homology_rank(0);
        let expected_space = GradedSpace::from_pairs([(0, o.dim(d))]);
        let pass = h == expected_space
            && chi.clone().normalized() == expected_chi.clone().normalized()
            && rank == o.dim(d);
        out.push(
            CheckResult::new("koszul_unit")
                .param("operad", o.name())
                .param("arity", d)
                .outcome(
                    json!({"homology": space_json(&expected_space), "character": character_json(&expected_chi), "counit_rank": o.dim(d)}),
                    json!({"homology": space_json(&h), "character": character_json(&chi), "counit_rank": rank}),
                    pass,
                ),
        );
    }
    Ok(out)
}

/// `H(B𝒪)(n) ≅ s(𝒫^∨)(n)` for `n ≤ max_arity`, as characters, where `𝒫`
/// is the Koszul dual partner.
pub fn check_koszul_pair(
    o: &Operad,
    partner: &Operad,
    max_arity: usize,
) -> Result<Vec<CheckResult>> {
    let dual = Cooperad::dual(partner).suspension();
    let mut out = Vec::new();
    for n in 1..=max_arity {
        let (h, chi) = bar_homology(o, n)?;
        let expected = dual.term(n)?;
        let expected_chi = expected.character();
        let expected_space = expected.complex().space();
        let pass =
            h == expected_space && chi.clone().normalized() == expected_chi.clone().normalized();
        out.push(
            CheckResult::new("koszul_pair")
                .param("operad", o.name())
                .param("partner", partner.name())
                .param("arity", n)
                .outcome(
                    json!({"homology": space_json(&expected_space), "character": character_json(&expected_chi)}),
                    json!({"homology": space_json(&h), "character": character_json(&chi)}),
                    pass,
                ),
        );
    }
    Ok(out)
}

/// Homology of `φ_n𝒪(k) ≃ C(τⁿB𝒪)(k)` and the rank of the map to `𝒪(k)`
/// induced by the counit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiHomology {
    pub homology: GradedSpace,
    pub counit_rank: usize,
    pub target_dim: usize,
}

impl PhiHomology {
    pub fn is_isomorphism(&self) -> bool {
        self.homology == GradedSpace::from_pairs([(0, self.target_dim)])
            && self.counit_rank == self.target_dim
    }
}

pub fn phi_arity_homology(o: &Operad, n: usize, k: usize) -> Result<PhiHomology> {
    let bar = BarCooperad::new(o, k)?;
    phi_with_bar(o, &bar, n, k)
}

fn phi_with_bar(o: &Operad, bar: &BarCooperad, n: usize, k: usize) -> Result<PhiHomology> {
    let cobar = cobar_complex(&bar.cooperad().truncate(n), k)?;
    let homology = cobar.complex().homology_dims();
    let f = counit(o, bar, &cobar)?;
    Ok(PhiHomology {
        homology,
        counit_rank: f.homology_rank(0),
        target_dim: o.dim(k),
    })
}

/// `φ_n𝒪(k) → 𝒪(k)` is a homology isomorphism for all `k ≤ n ≤ max_n`.
pub fn check_phi_low_arity(o: &Operad, max_n: usize) -> Result<Vec<CheckResult>> {
    let bar = BarCooperad::new(o, max_n)?;
    let mut out = Vec::new();
    for n in 2..=max_n {
        for k in 1..=n {
            let p = phi_with_bar(o, &bar, n, k)?;
            out.push(
                CheckResult::new("phi_low_arity")
                    .param("operad", o.name())
                    .param("n", n)
                    .param("arity", k)
                    .outcome(
                        json!({"homology": space_json(&GradedSpace::from_pairs([(0, p.target_dim)])), "counit_rank": p.target_dim}),
                        json!({"homology": space_json(&p.homology), "counit_rank": p.counit_rank}),
                        p.is_isomorphism(),
                    ),
            );
        }
    }
    Ok(out)
}

/// The mapping cone of a `Σ_d`-equivariant chain map as a `Σ_d`-complex.
pub fn sigma_cone(
    f: &ChainMap,
    source: &SigmaComplex,
    target: &SigmaComplex,
) -> Result<SigmaComplex> {
    let cone = mapping_cone(f)?;
    let n = source.n();
    let tdim = |k: i32| target.complex().dim(k);
    SigmaComplex::from_fn(n, cone, |i, k, j| {
        let s = Perm::transposition(n, i);
        if j < tdim(k) {
            target.act(&s, k, &SparseVec::unit(j))
        } else {
            source
                .act(&s, k - 1, &SparseVec::unit(j - tdim(k)))
                .remap(|r| Some(r + tdim(k)))
        }
    })
}

/// `H_*(B𝒪(n)) ≅ H_{*−1}(cone(C(τⁿ⁻¹B𝒪)(n) → 𝒪(n)))`, compared by
/// dimensions and characters.
pub fn check_bar_term_formula(o: &Operad, n: usize) -> Result<CheckResult> {
    if n < 2 {
        return Err(Error::Invalid("the bar-term formula needs n ≥ 2".into()));
    }
    let bar = BarCooperad::new(o, n)?;
    let (hb, chib) = bar.bar_complex(n).sigma().homology_character();
    let cobar = cobar_complex(&bar.cooperad().truncate(n - 1), n)?;
    let f = counit(o, &bar, &cobar)?;
    let cone = sigma_cone(&f, cobar.sigma(), &o.term(n)?)?;
    let (hc, chic) = cone.homology_character();
    let hc = hc.shift(1);
    let chic = chic.shift(1);
    let pass = hb == hc && chib.clone().normalized() == chic.clone().normalized();
    Ok(CheckResult::new("bar_term_formula")
        .param("operad", o.name())
        .param("arity", n)
        .outcome(
            json!({"homology": space_json(&hb), "character": character_json(&chib)}),
            json!({"homology": space_json(&hc), "character": character_json(&chic)}),
            pass,
        ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::binary_tree_count;

    #[test]
    fn bar_com_small() {
        let o = Operad::com(4);
        let b2 = bar_complex(&o, 2).unwrap();
        assert_eq!(b2.complex().space(), GradedSpace::from_pairs([(1, 1)]));
        let b3 = bar_complex(&o, 3).unwrap();
        assert_eq!(
            b3.complex().space(),
            GradedSpace::from_pairs([(1, 1), (2, 3)])
        );
        assert_eq!(
            b3.complex().homology_dims(),
            GradedSpace::from_pairs([(2, 2)])
        );
        let b4 = bar_complex(&o, 4).unwrap();
        assert_eq!(
            b4.complex().homology_dims(),
            GradedSpace::from_pairs([(3, 6)])
        );
    }

    #[test]
    fn bar_ass_concentrated() {
        let o = Operad::ass(4);
        for n in 2..=4 {
            let h = bar_complex(&o, n).unwrap().complex().homology_dims();
            assert_eq!(
                h,
                GradedSpace::from_pairs([(n as i32 - 1, crate::perm::factorial(n))]),
                "n = {n}"
            );
        }
    }

    #[test]
    fn bar_com_homology_character_paths_agree() {
        let s = bar_complex(&Operad::com(3), 3).unwrap();
        let (_, lefschetz) = s.sigma().homology_character();
        let reps = s
            .sigma()
            .homology_character_from_representatives(&lefschetz.cycle_types);
        assert_eq!(lefschetz.normalized(), reps.normalized());
    }

    #[test]
    fn bar_cooperad_truncation() {
        let b = BarCooperad::new(&Operad::com(4), 4).unwrap();
        let t = b.cooperad().truncate(2);
        assert_eq!(t.dims(), vec![1, 1, 0, 0]);
        assert_eq!(t.degree(2, 0), 1);
    }

    #[test]
    fn cobar_small() {
        let b = BarCooperad::new(&Operad::com(4), 4).unwrap();
        assert_eq!(
            cobar_complex(&b.cooperad().truncate(1), 3)
                .unwrap()
                .total_dim(),
            0
        );
        let c3 = cobar_complex(b.cooperad(), 3).unwrap();
        assert_eq!(
            c3.complex().homology_dims(),
            GradedSpace::from_pairs([(0, 1)])
        );
        let dual = Cooperad::dual(&Operad::com(2));
        let c2 = cobar_complex(&dual, 2).unwrap();
        assert_eq!(c2.complex().space(), GradedSpace::from_pairs([(-1, 1)]));
    }

    #[test]
    fn cobar_of_bar_squares_to_zero() {
        for o in [Operad::com(4), Operad::ass(4), Operad::lie(4)] {
            let b = BarCooperad::new(&o, 4).unwrap();
            for d in 1..=4 {
                cobar_complex(b.cooperad(), d).unwrap();
            }
        }
    }

    #[test]
    fn koszul_unit_small() {
        for o in [Operad::com(3), Operad::ass(3), Operad::lie(3)] {
            let r = check_koszul_unit(&o, 3).unwrap();
            assert!(r.iter().all(|c| c.pass), "{:#?}", r);
        }
    }

    #[test]
    fn binary_phi_counts() {
        let b = BarCooperad::new(&Operad::com(5), 5).unwrap();
        for k in 2..=5 {
            let c = cobar_complex(&b.cooperad().truncate(2), k).unwrap();
            assert_eq!(
                c.complex().homology_dims(),
                GradedSpace::from_pairs([(0, binary_tree_count(k))])
            );
        }
    }

    #[test]
    fn bar_term_small() {
        for o in [Operad::com(3), Operad::ass(3)] {
            for n in 2..=3 {
                let r = check_bar_term_formula(&o, n).unwrap();
                assert!(r.pass, "{r:#?}");
            }
        }
    }

    #[test]
    fn koszul_pairs_small() {
        let r = check_koszul_pair(&Operad::com(4), &Operad::lie(4), 4).unwrap();
        assert!(r.iter().all(|c| c.pass), "{r:#?}");
        let r = check_koszul_pair(&Operad::lie(4), &Operad::com(4), 4).unwrap();
        assert!(r.iter().all(|c| c.pass), "{r:#?}");
    }
}

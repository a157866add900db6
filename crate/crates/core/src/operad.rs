//! Reduced operads stored as explicit tables.
//!
//! An [`Operad`] keeps, for each arity `n` up to its bound, a homogeneous
//! basis with degrees, the matrices of the adjacent transpositions, and every
//! partial composition `∘_i : 𝒪(m) ⊗ 𝒪(k) → 𝒪(m+k−1)` landing within the
//! bound. Slots `i` are 0-based throughout the API; compositions that would
//! land above the bound are dropped.

use std::collections::BTreeMap;
use std::sync::Mutex;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::complex::{ChainComplex, GradedSpace};
use crate::error::{Error, Result};
use crate::linalg::{Accumulator, RationalMatrix, SparseVec};
use crate::perm::{factorial, Perm};
use crate::rational::Q;
use crate::sigma::SigmaComplex;
use crate::symseq::SymSeq;
use crate::tree::{act_on_tree, enumerate_trees, graft, key_degree, LabelSource, TreeKey};

/// A graded `Σ_n`-module with a homogeneous basis and zero differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArityTerm {
    pub degrees: Vec<i32>,
    /// Matrix of `s_i` for `i = 0..n−2`, on the whole basis.
    pub generators: Vec<RationalMatrix>,
}

impl ArityTerm {
    pub fn zero(n: usize) -> ArityTerm {
        ArityTerm {
            degrees: Vec::new(),
            generators: vec![RationalMatrix::zeros(0, 0); n.saturating_sub(1)],
        }
    }

    pub fn from_action(
        n: usize,
        degrees: Vec<i32>,
        mut act: impl FnMut(usize, usize) -> SparseVec,
    ) -> ArityTerm {
        let d = degrees.len();
        let generators = (0..n.saturating_sub(1))
            .map(|i| RationalMatrix::from_columns_unchecked(d, (0..d).map(|j| act(i, j)).collect()))
            .collect();
        ArityTerm {
            degrees,
            generators,
        }
    }

    /// Flattens a `Σ_n`-complex with zero differential, ordering the basis by
    /// degree.
    pub fn from_sigma(s: &SigmaComplex) -> Result<ArityTerm> {
        let c = s.complex();
        let degs: Vec<i32> = c.degrees().collect();
        if degs
            .iter()
            .any(|&k| c.differential_ref(k).is_some_and(|m| !m.is_zero()))
        {
            return Err(Error::Invalid(
                "generators must have zero differential".into(),
            ));
        }
        let mut offsets = BTreeMap::new();
        let mut degrees = Vec::new();
        for &k in &degs {
            offsets.insert(k, degrees.len());
            degrees.extend(std::iter::repeat_n(k, c.dim(k)));
        }
        let total = degrees.len();
        let generators = (0..s.n().saturating_sub(1))
            .map(|i| {
                let mut blocks = Vec::new();
                for &k in &degs {
                    let off = offsets[&k];
                    for col in s.generators(k)[i].columns() {
                        blocks.push(col.remap(|r| Some(r + off)));
                    }
                }
                RationalMatrix::from_columns_unchecked(total, blocks)
            })
            .collect();
        Ok(ArityTerm {
            degrees,
            generators,
        })
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn act(&self, perm: &Perm, idx: usize) -> SparseVec {
        let mut v = SparseVec::unit(idx);
        for w in perm.reduced_word() {
            v = self.generators[w].mul_vec(&v);
        }
        v
    }

    pub fn act_vec(&self, perm: &Perm, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        for w in perm.reduced_word() {
            v = self.generators[w].mul_vec(&v);
        }
        v
    }

    /// The term as a `Σ_n`-complex with zero differential.
    pub fn to_sigma(&self, n: usize) -> Result<SigmaComplex> {
        let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (j, &k) in self.degrees.iter().enumerate() {
            by_degree.entry(k).or_default().push(j);
        }
        let mut local = vec![0usize; self.dim()];
        for idx in by_degree.values() {
            for (p, &j) in idx.iter().enumerate() {
                local[j] = p;
            }
        }
        let space = GradedSpace::from_pairs(by_degree.iter().map(|(k, v)| (*k, v.len())));
        let mut generators = BTreeMap::new();
        for (&k, idx) in &by_degree {
            let mut mats = Vec::new();
            for g in &self.generators {
                let cols = idx
                    .iter()
                    .map(|&j| {
                        let col = g.column(j);
                        if col.iter().any(|(r, _)| self.degrees[r] != k) {
                            return Err(Error::Invalid(format!(
                                "action does not preserve degree {k}"
                            )));
                        }
                        Ok(col.remap(|r| Some(local[r])))
                    })
                    .collect::<Result<Vec<_>>>()?;
                mats.push(RationalMatrix::from_columns(idx.len(), cols)?);
            }
            generators.insert(k, mats);
        }
        SigmaComplex::new(n, ChainComplex::from_space(&space), generators)
    }
}

/// Vertex labels drawn from a list of arity terms (index = arity).
pub struct LabelTable(pub Vec<ArityTerm>);

impl LabelSource for LabelTable {
    fn label_dim(&self, k: usize) -> usize {
        self.0.get(k).map_or(0, ArityTerm::dim)
    }
    fn label_degree(&self, k: usize, idx: usize) -> i32 {
        self.0[k].degrees[idx]
    }
    fn act_label(&self, k: usize, perm: &Perm, idx: usize) -> SparseVec {
        self.0[k].act(perm, idx)
    }
}

type CompositionTable = FxHashMap<(usize, usize, usize), Vec<SparseVec>>;

pub struct Operad {
    name: String,
    arity_bound: usize,
    /// Index `n − 1` holds arity `n`.
    terms: Vec<ArityTerm>,
    /// `(m, i, k)` to the images of `e_a ⊗ e_b`, indexed by `a·dim(k) + b`.
    compositions: CompositionTable,
    act_cache: Mutex<FxHashMap<(Perm, usize), SparseVec>>,
}

impl Clone for Operad {
    fn clone(&self) -> Operad {
        Operad {
            name: self.name.clone(),
            arity_bound: self.arity_bound,
            terms: self.terms.clone(),
            compositions: self.compositions.clone(),
            act_cache: Mutex::new(FxHashMap::default()),
        }
    }
}

impl std::fmt::Debug for Operad {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Operad")
            .field("name", &self.name)
            .field("dims", &self.dims())
            .finish()
    }
}

impl Operad {
    /// Materializes an operad from its terms (arities `1..=bound`) and a
    /// function computing `e_a ∘_i e_b` for `m, k ≥ 2`. Unit compositions are
    /// filled in from the reduced arity-1 term.
    pub fn build(
        name: impl Into<String>,
        terms: Vec<ArityTerm>,
        mut compose: impl FnMut(usize, usize, usize, usize, usize) -> SparseVec,
    ) -> Result<Operad> {
        let arity_bound = terms.len();
        if arity_bound == 0 {
            return Err(Error::Invalid("arity bound must be at least 1".into()));
        }
        if terms[0].degrees != [0] {
            return Err(Error::Invalid(
                "arity 1 must be the unit ℚ in degree 0".into(),
            ));
        }
        let mut compositions = CompositionTable::default();
        for m in 1..=arity_bound {
            for k in 1..=arity_bound + 1 - m {
                let (dm, dk) = (terms[m - 1].dim(), terms[k - 1].dim());
                if dm == 0 || dk == 0 {
                    continue;
                }
                for i in 0..m {
                    let mut table = Vec::with_capacity(dm * dk);
                    for a in 0..dm {
                        for b in 0..dk {
                            table.push(if m == 1 {
                                SparseVec::unit(b)
                            } else if k == 1 {
                                SparseVec::unit(a)
                            } else {
                                compose(m, i, k, a, b)
                            });
                        }
                    }
                    compositions.insert((m, i, k), table);
                }
            }
        }
        Ok(Operad {
            name: name.into(),
            arity_bound,
            terms,
            compositions,
            act_cache: Mutex::new(FxHashMap::default()),
        })
    }

    /// `Com`: one operation of each arity, trivial action.
    pub fn com(arity_bound: usize) -> Operad {
        let terms = (1..=arity_bound)
            .map(|n| ArityTerm::from_action(n, vec![0], |_, j| SparseVec::unit(j)))
            .collect();
        Operad::build("com", terms, |_, _, _, _, _| SparseVec::unit(0)).expect("Com is well formed")
    }

    /// `Ass`: `Ass(n) = ℚ[Σ_n]` with basis the words `w(0)…w(n−1)` in
    /// lexicographic order; `σ` relabels letters and `∘_i` substitutes a word
    /// for the letter `i`.
    pub fn ass(arity_bound: usize) -> Operad {
        let terms = (1..=arity_bound)
            .map(|n| {
                ArityTerm::from_action(n, vec![0; factorial(n)], |i, j| {
                    SparseVec::unit(
                        Perm::transposition(n, i)
                            .compose(&Perm::unrank(n, j))
                            .rank(),
                    )
                })
            })
            .collect();
        Operad::build("ass", terms, |m, i, k, a, b| {
            let w = word_of(m, a);
            let u = word_of(k, b);
            SparseVec::unit(word_rank(&substitute(&w, i, &u)))
        })
        .expect("Ass is well formed")
    }

    /// `Lie`, realized inside `Ass`: the basis of `Lie(n)` is the left-normed
    /// brackets `[…[x_0, x_{w1}], …, x_{w(n−1)}]`, and the coordinate of an
    /// element on that bracket is its coefficient on the word `0 w1 … w(n−1)`.
    pub fn lie(arity_bound: usize) -> Operad {
        let terms =
            (1..=arity_bound)
                .map(|n| {
                    let d = factorial(n - 1);
                    ArityTerm::from_action(n, vec![0; d], |i, j| {
                        let s = Perm::transposition(n, i);
                        lie_coordinates(lie_expansion(&word_of(n, j)).into_iter().map(|(w, c)| {
                            (w.iter().map(|&x| s.apply(x as usize) as u8).collect(), c)
                        }))
                    })
                })
                .collect();
        Operad::build("lie", terms, |m, i, k, a, b| {
            let ea = lie_expansion(&word_of(m, a));
            let eb = lie_expansion(&word_of(k, b));
            lie_coordinates(
                ea.iter()
                    .flat_map(|(w, c)| eb.iter().map(move |(u, d)| (substitute(w, i, u), c * d))),
            )
        })
        .expect("Lie is well formed")
    }

    /// The free operad on a symmetric sequence of generators with zero
    /// differential, supported in arities `≥ 2`. The basis of arity `d` is
    /// the canonical trees with `d` leaves and vertices labelled by
    /// generator basis elements; composition is grafting.
    pub fn free(generators: &SymSeq, arity_bound: usize) -> Result<Operad> {
        if generators.term(1).is_some_and(|t| !t.complex().is_zero()) {
            return Err(Error::Invalid(
                "free operad generators must vanish in arity 1".into(),
            ));
        }
        let mut labels = vec![ArityTerm::zero(0), ArityTerm::zero(1)];
        for k in 2..=arity_bound {
            labels.push(match generators.term(k) {
                Some(t) if k <= generators.arity_bound() => ArityTerm::from_sigma(t)?,
                _ => ArityTerm::zero(k),
            });
        }
        let labels = LabelTable(labels);
        let bases: Vec<Vec<TreeKey>> = (1..=arity_bound)
            .map(|d| enumerate_trees(d, &labels, &|_| true))
            .collect();
        let index: Vec<FxHashMap<TreeKey, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect())
            .collect();
        let to_vec = |d: usize, combo: Vec<(TreeKey, Q)>| -> SparseVec {
            let mut acc = Accumulator::new();
            for (key, c) in combo {
                acc.add(index[d - 1][&key], &c);
            }
            acc.finish()
        };
        let terms = (1..=arity_bound)
            .map(|d| {
                let degrees = bases[d - 1]
                    .iter()
                    .map(|k| if d == 1 { 0 } else { key_degree(k, &labels, 0) })
                    .collect();
                ArityTerm::from_action(d, degrees, |i, j| {
                    to_vec(
                        d,
                        act_on_tree(&bases[d - 1][j], &Perm::transposition(d, i), &labels, 0),
                    )
                })
            })
            .collect();
        Operad::build("free", terms, |m, i, k, a, b| {
            to_vec(
                m + k - 1,
                graft(&bases[m - 1][a], m, i, &bases[k - 1][b], k, &labels, 0),
            )
        })
    }

    /// The operad with only the unit.
    pub fn unit(arity_bound: usize) -> Operad {
        Operad::com(1).with_arity_bound(arity_bound).renamed("unit")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Operad {
        self.name = name.into();
        self
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn dim(&self, n: usize) -> usize {
        if n == 0 || n > self.arity_bound {
            0
        } else {
            self.terms[n - 1].dim()
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (1..=self.arity_bound).map(|n| self.dim(n)).collect()
    }

    pub fn degree(&self, n: usize, idx: usize) -> i32 {
        self.terms[n - 1].degrees[idx]
    }

    pub fn arity_term(&self, n: usize) -> &ArityTerm {
        &self.terms[n - 1]
    }

    /// Whether every basis element sits in degree 0.
    pub fn is_degree_zero(&self) -> bool {
        self.terms.iter().all(|t| t.degrees.iter().all(|&d| d == 0))
    }

    /// `σ · e_idx` in arity `n`.
    pub fn act(&self, perm: &Perm, idx: usize) -> SparseVec {
        if perm.is_identity() {
            return SparseVec::unit(idx);
        }
        let key = (perm.clone(), idx);
        if let Some(v) = self.act_cache.lock().expect("cache lock").get(&key) {
            return v.clone();
        }
        let v = self.terms[perm.n() - 1].act(perm, idx);
        self.act_cache
            .lock()
            .expect("cache lock")
            .insert(key, v.clone());
        v
    }

    pub fn act_vec(&self, perm: &Perm, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, c) in v.iter() {
            acc.add_vec(&self.act(perm, i), c);
        }
        acc.finish()
    }

    /// `e_a ∘_i e_b` with `a ∈ 𝒪(m)`, `b ∈ 𝒪(k)`; zero when the result
    /// would land above the arity bound.
    pub fn compose(&self, m: usize, i: usize, k: usize, a: usize, b: usize) -> SparseVec {
        match self.compositions.get(&(m, i, k)) {
            Some(t) => t[a * self.dim(k) + b].clone(),
            None => SparseVec::new(),
        }
    }

    pub fn compose_ref(
        &self,
        m: usize,
        i: usize,
        k: usize,
        a: usize,
        b: usize,
    ) -> Option<&SparseVec> {
        self.compositions
            .get(&(m, i, k))
            .map(|t| &t[a * self.dim(k) + b])
    }

    pub fn compose_vec(
        &self,
        m: usize,
        i: usize,
        k: usize,
        x: &SparseVec,
        y: &SparseVec,
    ) -> SparseVec {
        let Some(t) = self.compositions.get(&(m, i, k)) else {
            return SparseVec::new();
        };
        let dk = self.dim(k);
        let mut acc = Accumulator::new();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                acc.add_vec(&t[a * dk + b], &(ca * cb));
            }
        }
        acc.finish()
    }

    /// Replaces one composition result; used to exercise the axiom checker.
    pub fn set_composition(
        &mut self,
        m: usize,
        i: usize,
        k: usize,
        a: usize,
        b: usize,
        value: SparseVec,
    ) -> Result<()> {
        let dk = self.dim(k);
        let t = self
            .compositions
            .get_mut(&(m, i, k))
            .ok_or_else(|| Error::Invalid(format!("no composition table for ({m}, {i}, {k})")))?;
        let slot = t
            .get_mut(a * dk + b)
            .ok_or_else(|| Error::Invalid(format!("no basis pair ({a}, {b})")))?;
        *slot = value;
        Ok(())
    }

    /// `𝒪(n)` as a `Σ_n`-complex with zero differential.
    pub fn term(&self, n: usize) -> Result<SigmaComplex> {
        self.terms[n - 1].to_sigma(n)
    }

    pub fn to_symseq(&self) -> Result<SymSeq> {
        SymSeq::new(
            self.arity_bound,
            (1..=self.arity_bound)
                .map(|n| self.term(n))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Same operad with a different arity bound: lower bounds forget terms,
    /// higher bounds require the operad to vanish above its current bound
    /// (the new terms are zero).
    pub fn with_arity_bound(&self, bound: usize) -> Operad {
        let terms: Vec<ArityTerm> = (1..=bound)
            .map(|n| {
                self.terms
                    .get(n - 1)
                    .cloned()
                    .unwrap_or_else(|| ArityTerm::zero(n))
            })
            .collect();
        let compositions = self
            .compositions
            .iter()
            .filter(|((m, _, k), _)| m + k - 1 <= bound)
            .map(|(a, b)| (*a, b.clone()))
            .collect();
        Operad {
            name: self.name.clone(),
            arity_bound: bound,
            terms,
            compositions,
            act_cache: Mutex::new(FxHashMap::default()),
        }
    }

    /// `τ_n 𝒪`: operations of arity greater than `n` set to zero.
    pub fn truncate(&self, n: usize) -> Operad {
        let n = n.max(1);
        let terms = (1..=self.arity_bound)
            .map(|a| {
                if a <= n {
                    self.terms[a - 1].clone()
                } else {
                    ArityTerm::zero(a)
                }
            })
            .collect();
        let compositions = self
            .compositions
            .iter()
            .filter(|((m, _, k), _)| m + k - 1 <= n)
            .map(|(a, b)| (*a, b.clone()))
            .collect();
        let name = if n >= self.arity_bound {
            self.name.clone()
        } else {
            format!("tau{n}({})", self.name)
        };
        Operad {
            name,
            arity_bound: self.arity_bound,
            terms,
            compositions,
            act_cache: Mutex::new(FxHashMap::default()),
        }
    }

    /// Operadic suspension: `(s𝒪)(n) = sgn_n ⊗ 𝒪(n)` shifted up by `n − 1`.
    pub fn suspension(&self) -> Operad {
        self.suspend_by(1)
    }

    /// Inverse of [`Operad::suspension`]: shifted down by `n − 1`.
    pub fn desuspension(&self) -> Operad {
        self.suspend_by(-1)
    }

    fn suspend_by(&self, direction: i32) -> Operad {
        let terms: Vec<ArityTerm> = self
            .terms
            .iter()
            .enumerate()
            .map(|(a, t)| ArityTerm {
                degrees: t.degrees.iter().map(|d| d + direction * a as i32).collect(),
                generators: t.generators.iter().map(|g| g.scale(&-Q::one())).collect(),
            })
            .collect();
        let mut compositions = CompositionTable::default();
        for (&(m, i, k), table) in &self.compositions {
            let dk = self.dim(k);
            let new = table
                .iter()
                .enumerate()
                .map(|(ab, v)| {
                    let a = ab / dk;
                    let odd =
                        (i * (k - 1) + self.degree(m, a).rem_euclid(2) as usize * (k - 1)) % 2 == 1;
                    if odd {
                        v.neg()
                    } else {
                        v.clone()
                    }
                })
                .collect();
            compositions.insert((m, i, k), new);
        }
        let prefix = if direction > 0 { "s" } else { "desusp" };
        Operad {
            name: format!("{prefix}({})", self.name),
            arity_bound: self.arity_bound,
            terms,
            compositions,
            act_cache: Mutex::new(FxHashMap::default()),
        }
    }

    pub fn to_document(&self) -> OperadDocument {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(a, t)| TermDocument {
                arity: a + 1,
                degrees: t.degrees.clone(),
                generators: t.generators.iter().map(|g| g.to_dense()).collect(),
            })
            .collect();
        let mut compositions = Vec::new();
        let mut keys: Vec<_> = self
            .compositions
            .keys()
            .copied()
            .filter(|(m, _, k)| *m >= 2 && *k >= 2)
            .collect();
        keys.sort_unstable();
        for (m, i, k) in keys {
            let dk = self.dim(k);
            for (ab, v) in self.compositions[&(m, i, k)].iter().enumerate() {
                if !v.is_empty() {
                    compositions.push(CompositionDocument {
                        m,
                        i: i + 1,
                        k,
                        a: ab / dk,
                        b: ab % dk,
                        value: v.iter().map(|(r, q)| (r, q.clone())).collect(),
                    });
                }
            }
        }
        OperadDocument {
            schema: OPERAD_SCHEMA.into(),
            name: self.name.clone(),
            terms,
            compositions,
        }
    }

    /// Builds an operad from a document, validating shapes, the Coxeter
    /// relations, degree additivity and the operad axioms.
    pub fn from_document(doc: &OperadDocument) -> Result<Operad> {
        if doc.schema != OPERAD_SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {:?}", doc.schema)));
        }
        let mut terms = Vec::new();
        for (pos, t) in doc.terms.iter().enumerate() {
            let n = pos + 1;
            if t.arity != n {
                return Err(Error::Parse(format!(
                    "term {pos} has arity {}, expected {n}",
                    t.arity
                )));
            }
            if n > MAX_DOCUMENT_ARITY {
                return Err(Error::Parse(format!(
                    "arity {n} exceeds {MAX_DOCUMENT_ARITY}"
                )));
            }
            let d = t.degrees.len();
            if t.generators.len() != n.saturating_sub(1) {
                return Err(Error::Parse(format!(
                    "arity {n}: expected {} generators",
                    n.saturating_sub(1)
                )));
            }
            let generators = t
                .generators
                .iter()
                .map(|g| {
                    if g.len() != d || g.iter().any(|r| r.len() != d) {
                        return Err(Error::Parse(format!(
                            "arity {n}: generator matrices must be {d}x{d}"
                        )));
                    }
                    RationalMatrix::from_dense(g)
                })
                .collect::<Result<Vec<_>>>()?;
            let term = ArityTerm {
                degrees: t.degrees.clone(),
                generators,
            };
            term.to_sigma(n)?;
            terms.push(term);
        }
        if terms.is_empty() {
            return Err(Error::Parse("no terms".into()));
        }
        let bound = terms.len();
        let mut given: FxHashMap<(usize, usize, usize, usize, usize), SparseVec> =
            FxHashMap::default();
        for c in &doc.compositions {
            let (m, k) = (c.m, c.k);
            if m < 2 || k < 2 || m + k - 1 > bound || c.i == 0 || c.i > m {
                return Err(Error::Parse(format!(
                    "composition ({}, {}, {}) out of range",
                    m, c.i, k
                )));
            }
            let target = terms[m + k - 2].dim();
            if c.a >= terms[m - 1].dim()
                || c.b >= terms[k - 1].dim()
                || c.value.iter().any(|(r, _)| *r >= target)
            {
                return Err(Error::Parse(format!(
                    "composition ({}, {}, {}) has an index out of range",
                    m, c.i, k
                )));
            }
            let v = SparseVec::from_pairs(c.value.iter().cloned());
            let expected = terms[m - 1].degrees[c.a] + terms[k - 1].degrees[c.b];
            if v.iter()
                .any(|(r, _)| terms[m + k - 2].degrees[r] != expected)
            {
                return Err(Error::Invalid(format!(
                    "composition ({}, {}, {}) is not degree additive",
                    m, c.i, k
                )));
            }
            given.insert((m, c.i - 1, k, c.a, c.b), v);
        }
        let op = Operad::build(doc.name.clone(), terms, |m, i, k, a, b| {
            given.get(&(m, i, k, a, b)).cloned().unwrap_or_default()
        })?;
        let report = check_operad_axioms(&op);
        if let Some(f) = report.failure {
            return Err(Error::Invalid(format!("operad axioms fail: {f}")));
        }
        Ok(op)
    }

    pub fn from_json(s: &str) -> Result<Operad> {
        let doc: OperadDocument =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Operad::from_document(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("operad documents serialize")
    }
}

impl LabelSource for Operad {
    fn label_dim(&self, k: usize) -> usize {
        self.dim(k)
    }
    fn label_degree(&self, k: usize, idx: usize) -> i32 {
        self.degree(k, idx)
    }
    fn act_label(&self, _: usize, perm: &Perm, idx: usize) -> SparseVec {
        self.act(perm, idx)
    }
}

pub const OPERAD_SCHEMA: &str = "operadkit-operad/1";

/// Largest arity accepted from a document.
pub const MAX_DOCUMENT_ARITY: usize = 8;

/// Serialized operad: dense generator matrices and sparse compositions
/// (slots 1-based), rationals as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperadDocument {
    pub schema: String,
    pub name: String,
    pub terms: Vec<TermDocument>,
    #[serde(default)]
    pub compositions: Vec<CompositionDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub arity: usize,
    pub degrees: Vec<i32>,
    pub generators: Vec<Vec<Vec<Q>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionDocument {
    pub m: usize,
    pub i: usize,
    pub k: usize,
    pub a: usize,
    pub b: usize,
    pub value: Vec<(usize, Q)>,
}

/// The word `w(0) … w(n−1)` of the `r`-th permutation.
fn word_of(n: usize, r: usize) -> Vec<u8> {
    Perm::unrank(n, r).as_slice().to_vec()
}

fn word_rank(w: &[u8]) -> usize {
    Perm::from_images(w.iter().map(|&x| x as usize).collect())
        .expect("words are permutations")
        .rank()
}

/// Substitutes the word `u` (letters shifted by `i`) for the letter `i` of
/// `w`, shifting letters above `i` by `|u| − 1`.
fn substitute(w: &[u8], i: usize, u: &[u8]) -> Vec<u8> {
    let i = i as u8;
    let k = u.len() as u8;
    let mut out = Vec::with_capacity(w.len() + u.len() - 1);
    for &x in w {
        if x == i {
            out.extend(u.iter().map(|&y| y + i));
        } else if x > i {
            out.push(x + k - 1);
        } else {
            out.push(x);
        }
    }
    out
}

/// Expands the left-normed bracket `[…[x_{w0}, x_{w1}], …]` into words.
fn lie_expansion(w: &[u8]) -> Vec<(Vec<u8>, Q)> {
    let mut cur: Vec<(Vec<u8>, Q)> = vec![(vec![w[0]], Q::one())];
    for &x in &w[1..] {
        let mut next = Vec::with_capacity(cur.len() * 2);
        for (word, c) in &cur {
            let mut right = word.clone();
            right.push(x);
            next.push((right, c.clone()));
            let mut left = Vec::with_capacity(word.len() + 1);
            left.push(x);
            left.extend_from_slice(word);
            next.push((left, -c));
        }
        cur = next;
    }
    cur
}

/// Coordinates in the left-normed basis of a Lie element given in words.
fn lie_coordinates(terms: impl IntoIterator<Item = (Vec<u8>, Q)>) -> SparseVec {
    let mut acc = Accumulator::new();
    for (w, c) in terms {
        if w[0] == 0 {
            acc.add(word_rank(&w), &c);
        }
    }
    acc.finish()
}

/// Outcome of [`check_operad_axioms`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checked: usize,
    pub failure: Option<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// First counterexample: arities `(m, k[, l])`, 0-based slots and basis
/// indices of the elements involved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: String,
    pub arities: Vec<usize>,
    pub slots: Vec<usize>,
    pub elements: Vec<usize>,
    pub expected: String,
    pub got: String,
}

impl std::fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} at arities {:?}, slots {:?}, elements {:?}: expected {}, got {}",
            self.axiom, self.arities, self.slots, self.elements, self.expected, self.got
        )
    }
}

/// Checks the unit laws, equivariance of each `∘_i`, and sequential and
/// parallel associativity on all basis elements within the arity bound.
/// Results above the bound count as zero on both sides.
pub fn check_operad_axioms(o: &Operad) -> AxiomReport {
    let bound = o.arity_bound;
    let mut checked = 0usize;
    let fail = |axiom: &str,
                arities: Vec<usize>,
                slots: Vec<usize>,
                elements: Vec<usize>,
                expected: &SparseVec,
                got: &SparseVec| {
        Some(AxiomFailure {
            axiom: axiom.into(),
            arities,
            slots,
            elements,
            expected: format!("{expected:?}"),
            got: format!("{got:?}"),
        })
    };
    let report = |failure: Option<AxiomFailure>, checked: usize| AxiomReport { checked, failure };

    if o.dim(1) != 1 || o.degree(1, 0) != 0 {
        return report(
            fail(
                "reduced",
                vec![1],
                vec![],
                vec![],
                &SparseVec::unit(0),
                &SparseVec::new(),
            ),
            0,
        );
    }
    for m in 1..=bound {
        for a in 0..o.dim(m) {
            let e = SparseVec::unit(a);
            let left = o.compose(1, 0, m, 0, a);
            checked += 1;
            if left != e {
                return report(
                    fail("left unit", vec![1, m], vec![0], vec![0, a], &e, &left),
                    checked,
                );
            }
            for i in 0..m {
                let right = o.compose(m, i, 1, a, 0);
                checked += 1;
                if right != e {
                    return report(
                        fail("right unit", vec![m, 1], vec![i], vec![a, 0], &e, &right),
                        checked,
                    );
                }
            }
        }
    }
    for m in 2..=bound {
        for k in 2..=bound + 1 - m {
            let n = m + k - 1;
            for i in 0..m {
                for a in 0..o.dim(m) {
                    for b in 0..o.dim(k) {
                        let ab = o.compose(m, i, k, a, b);
                        for j in 0..m - 1 {
                            let s = Perm::transposition(m, j);
                            let mut sizes = vec![1; m];
                            sizes[i] = k;
                            let lhs =
                                o.compose_vec(m, s.apply(i), k, &o.act(&s, a), &SparseVec::unit(b));
                            let rhs = o.act_vec(&s.block(&sizes), &ab);
                            checked += 1;
                            if lhs != rhs {
                                return report(
                                    fail(
                                        "equivariance in the outer operation",
                                        vec![m, k],
                                        vec![i, j],
                                        vec![a, b],
                                        &rhs,
                                        &lhs,
                                    ),
                                    checked,
                                );
                            }
                        }
                        for j in 0..k - 1 {
                            let t = Perm::transposition(k, j);
                            let lhs = o.compose_vec(m, i, k, &SparseVec::unit(a), &o.act(&t, b));
                            let rhs = o.act_vec(&t.embed(i, n), &ab);
                            checked += 1;
                            if lhs != rhs {
                                return report(
                                    fail(
                                        "equivariance in the inner operation",
                                        vec![m, k],
                                        vec![i, j],
                                        vec![a, b],
                                        &rhs,
                                        &lhs,
                                    ),
                                    checked,
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    for m in 2..=bound {
        for k in 2..=bound {
            for l in 2..=bound {
                if m + k + l - 2 > bound {
                    continue;
                }
                for a in 0..o.dim(m) {
                    for b in 0..o.dim(k) {
                        for c in 0..o.dim(l) {
                            let ec = SparseVec::unit(c);
                            let eb = SparseVec::unit(b);
                            let ea = SparseVec::unit(a);
                            for i in 0..m {
                                let ab = o.compose(m, i, k, a, b);
                                for j in 0..k {
                                    let lhs = o.compose_vec(m + k - 1, i + j, l, &ab, &ec);
                                    let rhs = o.compose_vec(
                                        m,
                                        i,
                                        k + l - 1,
                                        &ea,
                                        &o.compose(k, j, l, b, c),
                                    );
                                    checked += 1;
                                    if lhs != rhs {
                                        return report(
                                            fail(
                                                "sequential associativity",
                                                vec![m, k, l],
                                                vec![i, j],
                                                vec![a, b, c],
                                                &rhs,
                                                &lhs,
                                            ),
                                            checked,
                                        );
                                    }
                                }
                                for j in i + 1..m {
                                    let lhs = o.compose_vec(m + k - 1, j + k - 1, l, &ab, &ec);
                                    let ac = o.compose(m, j, l, a, c);
                                    let mut rhs = o.compose_vec(m + l - 1, i, k, &ac, &eb);
                                    if (o.degree(k, b) * o.degree(l, c)).rem_euclid(2) == 1 {
                                        rhs = rhs.neg();
                                    }
                                    checked += 1;
                                    if lhs != rhs {
                                        return report(
                                            fail(
                                                "parallel associativity",
                                                vec![m, k, l],
                                                vec![i, j],
                                                vec![a, b, c],
                                                &rhs,
                                                &lhs,
                                            ),
                                            checked,
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report(None, checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Echelon;
    use crate::perm::CycleType;

    #[test]
    fn standard_dims() {
        assert_eq!(Operad::com(5).dims(), vec![1; 5]);
        assert_eq!(Operad::ass(4).dims(), vec![1, 2, 6, 24]);
        assert_eq!(Operad::lie(5).dims(), vec![1, 1, 2, 6, 24]);
    }

    #[test]
    fn standard_axioms() {
        for o in [Operad::com(5), Operad::ass(5), Operad::lie(5)] {
            let r = check_operad_axioms(&o);
            assert!(r.passed(), "{}: {:?}", o.name(), r.failure);
            assert!(r.checked > 0);
        }
    }

    #[test]
    fn terms_are_valid_sigma_modules() {
        for o in [Operad::com(4), Operad::ass(4), Operad::lie(5)] {
            for n in 1..=o.arity_bound() {
                o.term(n).unwrap();
            }
        }
    }

    #[test]
    fn corrupted_ass_is_located() {
        let mut o = Operad::ass(4);
        let bad = o.compose(2, 0, 2, 0, 1).scale(&Q::from_int(2));
        o.set_composition(2, 0, 2, 0, 1, bad).unwrap();
        let r = check_operad_axioms(&o);
        let f = r.failure.expect("corruption is detected");
        assert!(f.arities.contains(&2), "{f}");
    }

    #[test]
    fn lie_dims_by_bracket_span() {
        // Rank of the expansions of all complete bracketings in ℚ[Σ_n].
        fn bracketings(letters: &[u8]) -> Vec<Vec<(Vec<u8>, Q)>> {
            if letters.len() == 1 {
                return vec![vec![(letters.to_vec(), Q::one())]];
            }
            let mut out = Vec::new();
            for split in 1..letters.len() {
                for l in bracketings(&letters[..split]) {
                    for r in bracketings(&letters[split..]) {
                        let mut e = Vec::new();
                        for (x, a) in &l {
                            for (y, b) in &r {
                                e.push(([x.as_slice(), y].concat(), a * b));
                                e.push(([y.as_slice(), x].concat(), -(a * b)));
                            }
                        }
                        out.push(e);
                    }
                }
            }
            out
        }
        for n in 1..=5usize {
            let mut ech = Echelon::new();
            for p in Perm::all(n) {
                for e in bracketings(p.as_slice()) {
                    let mut acc = Accumulator::new();
                    for (w, c) in e {
                        acc.add(word_rank(&w), &c);
                    }
                    ech.insert(acc.finish());
                }
            }
            assert_eq!(ech.rank(), factorial(n - 1), "n = {n}");
        }
    }

    #[test]
    fn truncation() {
        let t1 = Operad::ass(4).truncate(1);
        assert_eq!(t1.dims(), vec![1, 0, 0, 0]);
        assert!(check_operad_axioms(&t1).passed());
        let t2 = Operad::ass(4).truncate(2);
        assert_eq!(t2.dims(), vec![1, 2, 0, 0]);
        assert!(t2.compose(2, 0, 2, 0, 0).is_empty());
        assert!(check_operad_axioms(&t2).passed());
        let full = Operad::lie(4).truncate(4);
        assert_eq!(full.dims(), Operad::lie(4).dims());
        assert_eq!(
            Operad::com(5).truncate(3).truncate(2).dims(),
            Operad::com(5).truncate(2).dims()
        );
    }

    #[test]
    fn suspension() {
        for o in [Operad::com(5), Operad::ass(5), Operad::lie(5)] {
            for s in [
                o.suspension(),
                o.desuspension(),
                o.suspension().suspension(),
            ] {
                let r = check_operad_axioms(&s);
                assert!(r.passed(), "{}: {:?}", s.name(), r.failure);
            }
        }
        let s = Operad::com(3).suspension();
        assert_eq!(s.degree(2, 0), 1);
        assert_eq!(
            s.act(&Perm::transposition(2, 0), 0),
            SparseVec::single(0, -Q::one())
        );
        assert_eq!(s.degree(1, 0), 0);
        let chi = s
            .term(3)
            .unwrap()
            .character_at(&"2+1".parse::<CycleType>().unwrap())
            .unwrap();
        assert_eq!(chi[&2], -Q::one());
    }

    #[test]
    fn free_operads() {
        let gens = |arities: &[usize]| {
            let terms = (1..=4)
                .map(|n| {
                    let d = usize::from(arities.contains(&n));
                    SigmaComplex::trivial(
                        n,
                        ChainComplex::from_space(&GradedSpace::from_pairs([(0, d)])),
                    )
                })
                .collect::<Vec<_>>();
            SymSeq::new(4, terms).unwrap()
        };
        let binary = Operad::free(&gens(&[2]), 4).unwrap();
        assert_eq!(binary.dims(), vec![1, 1, 3, 15]);
        assert!(check_operad_axioms(&binary).passed());
        let both = Operad::free(&gens(&[2, 3]), 3).unwrap();
        assert_eq!(both.dim(3), 4);
        assert!(check_operad_axioms(&both).passed());
        assert_eq!(
            Operad::free(&gens(&[]), 4).unwrap().dims(),
            vec![1, 0, 0, 0]
        );
    }

    #[test]
    fn free_on_odd_generator_passes_axioms() {
        let terms = (1..=4)
            .map(|n| {
                let d = usize::from(n == 2);
                SigmaComplex::trivial(
                    n,
                    ChainComplex::from_space(&GradedSpace::from_pairs([(1, d)])),
                )
            })
            .collect::<Vec<_>>();
        let f = Operad::free(&SymSeq::new(4, terms).unwrap(), 4).unwrap();
        let r = check_operad_axioms(&f);
        assert!(r.passed(), "{:?}", r.failure);
    }

    #[test]
    fn json_round_trip() {
        for o in [Operad::com(3), Operad::lie(4), Operad::ass(3).suspension()] {
            let back = Operad::from_json(&o.to_json()).unwrap();
            assert_eq!(back.to_document(), o.to_document());
        }
        let mut doc = Operad::ass(3).to_document();
        doc.compositions[0].value[0].1 = Q::from_int(3);
        assert!(Operad::from_document(&doc).is_err());
    }
}

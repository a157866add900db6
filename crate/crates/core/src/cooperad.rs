//! Reduced dg cooperads stored as explicit tables.
//!
//! For a subset `S` of the inputs `{0..n−1}` with `2 ≤ |S| ≤ n−1`, the
//! partial cocomposition `Δ_S : 𝒬(n) → 𝒬(n−|S|+1) ⊗ 𝒬(|S|)` is dual to
//! grafting an operation with inputs `S` into the input of the outer
//! operation that sits at the position of `min S`. Subsets are bitmasks.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::linalg::SparseVec;
use crate::operad::{ArityTerm, Operad};
use crate::perm::Perm;
use crate::rational::Q;
use crate::sigma::SigmaComplex;
use crate::tree::LabelSource;

/// One term `c · e_outer ⊗ e_inner` of a cocomposition.
pub type CoTerm = (u32, u32, Q);

/// The shape of a cut: the outer operation has inputs `outer` (the sorted
/// complement of `S` together with `min S`), the inner one is grafted at
/// position `slot`, and `shuffle` sends positions of the grafted operation
/// `outer ∘_slot inner` to the actual inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub outer: Vec<usize>,
    pub inner: Vec<usize>,
    pub slot: usize,
    pub shuffle: Perm,
}

impl Cut {
    pub fn new(n: usize, mask: u32) -> Cut {
        let inner: Vec<usize> = (0..n).filter(|&l| mask >> l & 1 == 1).collect();
        let min = inner[0];
        let outer: Vec<usize> = (0..n).filter(|&l| mask >> l & 1 == 0 || l == min).collect();
        let slot = outer
            .iter()
            .position(|&l| l == min)
            .expect("min S is an outer input");
        let mut order = Vec::with_capacity(n);
        order.extend_from_slice(&outer[..slot]);
        order.extend_from_slice(&inner);
        order.extend_from_slice(&outer[slot + 1..]);
        let shuffle = Perm::from_images(order).expect("cut order is a permutation");
        Cut {
            outer,
            inner,
            slot,
            shuffle,
        }
    }
}

/// All masks `S ⊂ {0..n−1}` with `2 ≤ |S| ≤ n − 1`, increasing.
pub fn proper_masks(n: usize) -> impl Iterator<Item = u32> {
    (0u32..1 << n).filter(move |m| {
        let c = m.count_ones() as usize;
        c >= 2 && c < n
    })
}

type DecompositionTable = FxHashMap<(usize, u32), Vec<Vec<CoTerm>>>;

#[derive(Clone, Debug)]
pub struct Cooperad {
    name: String,
    arity_bound: usize,
    terms: Vec<ArityTerm>,
    /// Internal differential of each arity on the whole basis.
    differential: Vec<RationalMatrix>,
    decompositions: DecompositionTable,
}

impl Cooperad {
    /// Assembles a cooperad from tables; `decompositions[(n, S)][q]` lists
    /// the terms of `Δ_S(e_q)`.
    pub fn from_parts(
        name: impl Into<String>,
        terms: Vec<ArityTerm>,
        differential: Vec<RationalMatrix>,
        decompositions: FxHashMap<(usize, u32), Vec<Vec<CoTerm>>>,
    ) -> Result<Cooperad> {
        if terms.is_empty() || terms[0].degrees != [0] {
            return Err(Error::Invalid(
                "arity 1 must be the counit ℚ in degree 0".into(),
            ));
        }
        if differential.len() != terms.len() {
            return Err(Error::Shape(
                "one differential per arity is required".into(),
            ));
        }
        Ok(Cooperad {
            name: name.into(),
            arity_bound: terms.len(),
            terms,
            differential,
            decompositions,
        })
    }

    /// The termwise linear dual of an operad: degrees negate, the action is
    /// the contragredient one, and `Δ_S` is the transpose of grafting along
    /// the cut `S`, with the Koszul sign of the dual pairing.
    pub fn dual(o: &Operad) -> Cooperad {
        let bound = o.arity_bound();
        let terms: Vec<ArityTerm> = (1..=bound)
            .map(|n| {
                let t = o.arity_term(n);
                ArityTerm {
                    degrees: t.degrees.iter().map(|d| -d).collect(),
                    generators: t.generators.iter().map(RationalMatrix::transpose).collect(),
                }
            })
            .collect();
        let mut decompositions = DecompositionTable::default();
        for n in 3..=bound {
            for mask in proper_masks(n) {
                let cut = Cut::new(n, mask);
                let (m, k) = (cut.outer.len(), cut.inner.len());
                let mut table = vec![Vec::new(); o.dim(n)];
                for b in 0..o.dim(m) {
                    for c in 0..o.dim(k) {
                        let sign = if (o.degree(m, b) * o.degree(k, c)).rem_euclid(2) == 1 {
                            -Q::one()
                        } else {
                            Q::one()
                        };
                        let v = o.act_vec(&cut.shuffle, &o.compose(m, cut.slot, k, b, c));
                        for (a, x) in v.iter() {
                            table[a].push((b as u32, c as u32, x * &sign));
                        }
                    }
                }
                decompositions.insert((n, mask), table);
            }
        }
        let differential = terms
            .iter()
            .map(|t| RationalMatrix::zeros(t.dim(), t.dim()))
            .collect();
        Cooperad {
            name: format!("dual({})", o.name()),
            arity_bound: bound,
            terms,
            differential,
            decompositions,
        }
    }

    /// `τⁿ𝒬`: the sub-cooperad of arities at most `n`.
    pub fn truncate(&self, n: usize) -> Cooperad {
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
        let differential = (1..=self.arity_bound)
            .map(|a| {
                if a <= n {
                    self.differential[a - 1].clone()
                } else {
                    RationalMatrix::zeros(0, 0)
                }
            })
            .collect();
        let decompositions = self
            .decompositions
            .iter()
            .filter(|((a, _), _)| *a <= n)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        let name = if n >= self.arity_bound {
            self.name.clone()
        } else {
            format!("tau^{n}({})", self.name)
        };
        Cooperad {
            name,
            arity_bound: self.arity_bound,
            terms,
            differential,
            decompositions,
        }
    }

    /// Cooperadic suspension: `sgn_n ⊗ 𝒬(n)` shifted up by `n − 1`, with the
    /// signs that make `s(𝒪^∨)` coincide with the dual of the desuspension
    /// of `𝒪`.
    pub fn suspension(&self) -> Cooperad {
        let terms: Vec<ArityTerm> = self
            .terms
            .iter()
            .enumerate()
            .map(|(a, t)| ArityTerm {
                degrees: t.degrees.iter().map(|d| d + a as i32).collect(),
                generators: t.generators.iter().map(|g| g.scale(&-Q::one())).collect(),
            })
            .collect();
        let differential = self
            .differential
            .iter()
            .enumerate()
            .map(|(a, d)| {
                if a % 2 == 1 {
                    d.scale(&-Q::one())
                } else {
                    d.clone()
                }
            })
            .collect();
        let mut decompositions = DecompositionTable::default();
        for (&(n, mask), table) in &self.decompositions {
            let cut = Cut::new(n, mask);
            let (m, k) = (cut.outer.len() as i64, cut.inner.len() as i64);
            let p = cut.slot as i64;
            let shuffle = cut.shuffle.inversions() as i64;
            let new = table
                .iter()
                .map(|terms| {
                    terms
                        .iter()
                        .map(|(q1, q2, c)| {
                            let d1 = self.degree(m as usize, *q1 as usize) as i64;
                            let d2 = self.degree(k as usize, *q2 as usize) as i64;
                            let e = shuffle
                                + p * (k - 1)
                                + d1 * (k - 1)
                                + (d1 + m - 1) * (d2 + k - 1)
                                + d1 * d2;
                            (*q1, *q2, if e.rem_euclid(2) == 1 { -c } else { c.clone() })
                        })
                        .collect()
                })
                .collect();
            decompositions.insert((n, mask), new);
        }
        Cooperad {
            name: format!("s({})", self.name),
            arity_bound: self.arity_bound,
            terms,
            differential,
            decompositions,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
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

    pub fn act(&self, perm: &Perm, idx: usize) -> SparseVec {
        self.terms[perm.n() - 1].act(perm, idx)
    }

    /// Internal differential of `e_idx` in arity `n`.
    pub fn internal_differential(&self, n: usize, idx: usize) -> &SparseVec {
        self.differential[n - 1].column(idx)
    }

    pub fn has_internal_differential(&self) -> bool {
        self.differential.iter().any(|d| !d.is_zero())
    }

    /// Terms of `Δ_S(e_q)`.
    pub fn decompose(&self, n: usize, mask: u32, q: usize) -> &[CoTerm] {
        self.decompositions
            .get(&(n, mask))
            .map_or(&[], |t| t[q].as_slice())
    }

    /// `𝒬(n)` as a `Σ_n`-complex (with its internal differential).
    pub fn term(&self, n: usize) -> Result<SigmaComplex> {
        let t = &self.terms[n - 1];
        let base = t.to_sigma(n)?;
        if self.differential[n - 1].is_zero() {
            return Ok(base);
        }
        let mut by_degree: std::collections::BTreeMap<i32, Vec<usize>> = Default::default();
        for (j, &k) in t.degrees.iter().enumerate() {
            by_degree.entry(k).or_default().push(j);
        }
        let mut local = vec![0usize; t.dim()];
        for idx in by_degree.values() {
            for (p, &j) in idx.iter().enumerate() {
                local[j] = p;
            }
        }
        let mut diffs = Vec::new();
        for (&k, idx) in &by_degree {
            let rows = by_degree.get(&(k - 1)).map_or(0, Vec::len);
            let cols = idx
                .iter()
                .map(|&j| self.differential[n - 1].column(j).remap(|r| Some(local[r])))
                .collect();
            diffs.push((k, RationalMatrix::from_columns(rows, cols)?));
        }
        let complex = crate::complex::ChainComplex::new(base.complex().space().iter(), diffs)?;
        let gens = by_degree
            .keys()
            .map(|&k| (k, base.generators(k).to_vec()))
            .collect();
        SigmaComplex::new(n, complex, gens)
    }
}

impl LabelSource for Cooperad {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symseq::cycle_types_upto;

    #[test]
    fn cut_shapes() {
        let c = Cut::new(4, 0b1010);
        assert_eq!(c.outer, vec![0, 1, 2]);
        assert_eq!(c.inner, vec![1, 3]);
        assert_eq!(c.slot, 1);
        assert_eq!(c.shuffle.images().collect::<Vec<_>>(), vec![0, 1, 3, 2]);
        assert_eq!(proper_masks(3).count(), 3);
        assert_eq!(proper_masks(4).count(), 10);
    }

    #[test]
    fn dual_dims() {
        assert_eq!(Cooperad::dual(&Operad::com(4)).dims(), vec![1, 1, 1, 1]);
        assert_eq!(Cooperad::dual(&Operad::ass(3)).dims(), vec![1, 2, 6]);
        let d = Cooperad::dual(&Operad::com(3));
        // Δ_{01}(μ₃) = μ₂ ⊗ μ₂ for Com.
        assert_eq!(d.decompose(3, 0b011, 0), &[(0, 0, Q::one())]);
    }

    #[test]
    fn suspension_matches_dual_of_desuspension() {
        for o in [Operad::com(5), Operad::ass(4), Operad::lie(5)] {
            let a = Cooperad::dual(&o).suspension();
            let b = Cooperad::dual(&o.desuspension());
            assert_eq!(a.terms, b.terms, "{}", o.name());
            assert_eq!(a.decompositions, b.decompositions, "{}", o.name());
        }
    }

    #[test]
    fn dual_characters() {
        let o = Operad::lie(4);
        let d = Cooperad::dual(&o);
        for n in 1..=4 {
            let a = o.term(n).unwrap().character().negate_degrees();
            let b = d.term(n).unwrap().character();
            assert_eq!(a, b, "n = {n}");
        }
        assert!(!cycle_types_upto(4).is_empty());
    }

    #[test]
    fn truncation_keeps_low_arities() {
        let d = Cooperad::dual(&Operad::ass(4)).truncate(2);
        assert_eq!(d.dims(), vec![1, 2, 0, 0]);
        assert!(d.decompose(3, 0b011, 0).is_empty());
    }
}
